#include "fsvt/experiment.hpp"

#include "fsvt/rng.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace fsvt {

namespace {

// Stream ids carving independent substreams out of one user seed.
enum Stream : std::uint64_t {
  kLeftFactor = 0,
  kRightFactor = 1,
  kMask = 2,
  kNoise = 3,
};

SolverConfig to_config(const ExperimentSpec& spec) {
  SolverConfig cfg;
  cfg.mu = spec.mu;
  cfg.tau = spec.tau;
  cfg.xi = spec.xi;
  cfg.a = spec.a;
  cfg.lam = spec.lam;
  cfg.target_rank = spec.rank;
  cfg.tol = spec.tol;
  cfg.max_iter = spec.max_iter;
  cfg.mode = spec.solver;
  return cfg;
}

void append_row(const ExperimentRow& row, std::ostream& out) {
  char buf[192];
  std::snprintf(buf, sizeof(buf), "%g,%.4f,%s,%.6e,%.3f,%d,%d\n", row.xi1,
                row.fr, row.solver.c_str(), row.re, row.wall_time_s,
                row.iterations, row.converged ? 1 : 0);
  out << buf;
}

} // namespace

std::string solver_name(LambdaMode mode) {
  switch (mode) {
    case LambdaMode::Fixed: return "fixed";
    case LambdaMode::Scheme2: return "scheme2";
    case LambdaMode::Adaptive: return "aisvta";
  }
  throw std::logic_error("solver_name: unknown mode");
}

LambdaMode parse_solver(const std::string& name) {
  if (name == "fixed") return LambdaMode::Fixed;
  if (name == "scheme2") return LambdaMode::Scheme2;
  if (name == "aisvta") return LambdaMode::Adaptive;
  throw std::invalid_argument("unknown solver '" + name +
                              "' (expected fixed, scheme2 or aisvta)");
}

Matrix gen_low_rank(Index m, Index n, int r, std::uint64_t seed) {
  if (m <= 0 || n <= 0)
    throw std::invalid_argument("gen_low_rank: dimensions must be positive");
  if (r < 0 || r > std::min(m, n))
    throw std::invalid_argument("gen_low_rank: rank out of range");
  if (r == 0) return Matrix::Zero(m, n);

  SplitMix64 left(seed, Stream::kLeftFactor);
  SplitMix64 right(seed, Stream::kRightFactor);
  Matrix l(m, r), rt(n, r);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < r; ++j) l(i, j) = left.normal();
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < r; ++j) rt(i, j) = right.normal();
  return l * rt.transpose();
}

SamplingMask gen_mask(Index m, Index n, double sr, std::uint64_t seed) {
  if (sr < 0.0 || sr > 1.0)
    throw std::invalid_argument("gen_mask: sampling ratio must be in [0, 1]");
  const Index total = m * n;
  const Index s = static_cast<Index>(std::llround(sr * static_cast<double>(total)));

  // Partial Fisher-Yates over the linear (row-major) indices.
  std::vector<Index> linear(static_cast<std::size_t>(total));
  std::iota(linear.begin(), linear.end(), Index{0});
  SplitMix64 rng(seed, Stream::kMask);
  std::vector<SamplingMask::Entry> entries;
  entries.reserve(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) {
    const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(total - i)));
    std::swap(linear[i], linear[j]);
    entries.emplace_back(linear[i] / n, linear[i] % n);
  }
  return SamplingMask(m, n, std::move(entries));
}

Vector add_noise(const Matrix& m, const SamplingMask& mask, double xi1,
                 std::uint64_t seed) {
  if (xi1 < 0.0)
    throw std::invalid_argument("add_noise: noise level must be nonnegative");
  if (mask.rows() != m.rows() || mask.cols() != m.cols())
    throw std::invalid_argument("add_noise: mask/matrix shape mismatch");

  Vector b(mask.count());
  SplitMix64 rng(seed, Stream::kNoise);
  Index k = 0;
  for (const auto& [r, c] : mask.entries()) {
    b(k++) = xi1 == 0.0 ? m(r, c) : m(r, c) + xi1 * rng.normal();
  }
  return b;
}

double relative_error(const Matrix& x_opt, const Matrix& m) {
  if (x_opt.rows() != m.rows() || x_opt.cols() != m.cols())
    throw std::invalid_argument("relative_error: shape mismatch");
  const double denom = m.norm();
  if (denom == 0.0)
    throw std::domain_error("relative_error: reference matrix is zero");
  return (x_opt - m).norm() / denom;
}

double freedom_ratio(Index s, Index m, Index n, int r) {
  if (r < 1) throw std::invalid_argument("freedom_ratio: rank must be >= 1");
  if (s < 0) throw std::invalid_argument("freedom_ratio: s must be nonnegative");
  const double denom = static_cast<double>(r) * static_cast<double>(m + n - r);
  if (denom <= 0.0)
    throw std::invalid_argument("freedom_ratio: r*(m+n-r) must be positive");
  return static_cast<double>(s) / denom;
}

Matrix low_rank_approx(const Matrix& m, int r) {
  if (r < 0 || r > std::min(m.rows(), m.cols()))
    throw std::invalid_argument("low_rank_approx: rank out of range");
  if (r == 0) return Matrix::Zero(m.rows(), m.cols());
  ThinSvd svd = thin_svd(m);
  return svd.u.leftCols(r) * svd.s.head(r).asDiagonal() *
         svd.v.leftCols(r).transpose();
}

ExperimentRow run_experiment(const ExperimentSpec& spec) {
  Matrix truth = gen_low_rank(spec.m, spec.n, spec.rank, spec.seed);
  // Rescale the generated truth to the dynamic range of the grayscale
  // protocol (RMS entry 0.5) so noise_level measures the same
  // noise-to-signal ratio for synthetic and image-derived ground truths.
  const double norm = truth.norm();
  if (norm > 0.0)
    truth *= 0.5 * std::sqrt(static_cast<double>(spec.m) * spec.n) / norm;
  return run_experiment(spec, truth);
}

ExperimentRow run_experiment(const ExperimentSpec& spec, const Matrix& truth) {
  if (truth.rows() != spec.m || truth.cols() != spec.n)
    throw std::invalid_argument("run_experiment: truth shape mismatch");

  SamplingMask mask = gen_mask(spec.m, spec.n, spec.sampling_ratio, spec.seed);
  Vector b = add_noise(truth, mask, spec.noise_level, spec.seed);
  CompletionMap map(std::move(mask));

  SolverResult sol = solve(map, b, to_config(spec));

  ExperimentRow row;
  row.xi1 = spec.noise_level;
  row.fr = freedom_ratio(map.count(), spec.m, spec.n, spec.rank);
  row.re = relative_error(sol.x_opt, truth);
  row.wall_time_s = sol.wall_time_s;
  row.solver = solver_name(spec.solver);
  row.converged = sol.converged;
  row.iterations = sol.iterations;
  return row;
}

void run_table(const std::vector<ExperimentSpec>& specs, std::ostream& out,
               bool include_time) {
  out << "xi1,fr,solver,RE,time_s,iters,converged\n";
  for (const auto& spec : specs) {
    if (spec.repetitions < 1)
      throw std::invalid_argument("run_table: repetitions must be >= 1");
    double re_sum = 0.0, time_sum = 0.0, iter_sum = 0.0;
    bool all_converged = true;
    ExperimentRow row;
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      ExperimentSpec rep_spec = spec;
      rep_spec.seed = spec.seed + static_cast<std::uint64_t>(rep);
      row = run_experiment(rep_spec);
      if (!include_time) row.wall_time_s = 0.0;
      append_row(row, out);
      re_sum += row.re;
      time_sum += row.wall_time_s;
      iter_sum += row.iterations;
      all_converged = all_converged && row.converged;
    }
    const double reps = spec.repetitions;
    char buf[192];
    std::snprintf(buf, sizeof(buf), "%g,%.4f,%s:mean,%.6e,%.3f,%g,%d\n",
                  row.xi1, row.fr, row.solver.c_str(), re_sum / reps,
                  time_sum / reps, iter_sum / reps, all_converged ? 1 : 0);
    out << buf;
  }
}

std::vector<ExperimentSpec> load_experiment_specs(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("spec file: invalid JSON: ") + e.what());
  }
  if (!doc.is_array())
    throw std::runtime_error("spec file: expected a JSON array of experiments");

  std::vector<ExperimentSpec> specs;
  specs.reserve(doc.size());
  for (const auto& item : doc) {
    ExperimentSpec spec;
    spec.m = item.value("m", spec.m);
    spec.n = item.value("n", spec.n);
    spec.rank = item.value("rank", spec.rank);
    spec.sampling_ratio = item.value("sr", spec.sampling_ratio);
    spec.noise_level = item.value("noise", spec.noise_level);
    if (item.contains("solver"))
      spec.solver = parse_solver(item["solver"].get<std::string>());
    spec.tau = item.value("tau", spec.tau);
    spec.a = item.value("a", spec.a);
    spec.xi = item.value("xi", spec.xi);
    spec.mu = item.value("mu", spec.mu);
    spec.lam = item.value("lam", spec.lam);
    spec.tol = item.value("tol", spec.tol);
    spec.max_iter = item.value("max_iter", spec.max_iter);
    spec.seed = item.value("seed", spec.seed);
    spec.repetitions = item.value("repetitions", spec.repetitions);
    specs.push_back(spec);
  }
  return specs;
}

Matrix read_matrix_text(std::istream& in) {
  Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows <= 0 || cols <= 0)
    throw std::runtime_error("matrix file: malformed header");
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      if (!(in >> m(r, c)))
        throw std::runtime_error("matrix file: truncated data");
  return m;
}

void write_matrix_text(const Matrix& m, std::ostream& out) {
  out << m.rows() << ' ' << m.cols() << '\n';
  char buf[32];
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", m(r, c));
      out << buf << (c + 1 == m.cols() ? '\n' : ' ');
    }
  }
}

Vector read_vector_text(std::istream& in) {
  std::vector<double> values;
  double v = 0.0;
  while (in >> v) values.push_back(v);
  Vector out(static_cast<Index>(values.size()));
  for (Index i = 0; i < out.size(); ++i) out(i) = values[static_cast<std::size_t>(i)];
  return out;
}

} // namespace fsvt
