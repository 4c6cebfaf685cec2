// fsvt: low-rank matrix recovery by fraction-penalty singular value
// thresholding.
//
// Subcommands:
//   prox      evaluate the scalar prox and its threshold at one point
//   complete  recover a matrix from masked observations
//   inpaint   drop pixels from a PGM image and reconstruct it
//   bench     run an experiment grid from a JSON spec and emit a CSV report
//
// Exit codes: 0 success, 1 usage error, 2 runtime/numerical error.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "CLI11.hpp"

#include "fsvt/experiment.hpp"
#include "fsvt/matrix.hpp"
#include "fsvt/operators.hpp"
#include "fsvt/pgm.hpp"
#include "fsvt/solvers.hpp"
#include "fsvt/thresholding.hpp"

namespace {

// Usage mistakes CLI11 cannot see during parsing (mutually exclusive or
// jointly required flags, empty spec files); mapped to exit code 1 like
// parse errors.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

const char* or_dash(const std::string& s) { return s.empty() ? "-" : s.c_str(); }

// ---------------------------------------------------------------------------
// Shared solver flags

struct SolverOpts {
  std::string solver = "aisvta";
  int rank = 1;
  double mu = 0.99;
  double tau = 0.45;
  double a = 1.0;
  double lam = 0.0;
  double xi = 0.01;
  double tol = 1e-8;
  int max_iter = 5000;
};

void add_solver_flags(CLI::App* cmd, SolverOpts* o) {
  cmd->add_option("--solver", o->solver, "fixed, scheme2 or aisvta")
      ->check(CLI::IsMember({"fixed", "scheme2", "aisvta"}))
      ->capture_default_str();
  cmd->add_option("--rank", o->rank, "target rank r")->required();
  cmd->add_option("--mu", o->mu, "gradient step size")->capture_default_str();
  cmd->add_option("--tau", o->tau, "adaptive threshold factor in (0, 1]")
      ->capture_default_str();
  cmd->add_option("--a", o->a, "penalty shape (fixed and scheme2 solvers)")
      ->capture_default_str();
  cmd->add_option("--lam", o->lam, "regularization weight (fixed solver)")
      ->capture_default_str();
  cmd->add_option("--xi", o->xi, "scheme2 safety factor in (0, 1)")
      ->capture_default_str();
  cmd->add_option("--tol", o->tol, "relative step-norm stopping tolerance")
      ->capture_default_str();
  cmd->add_option("--max-iter", o->max_iter, "iteration cap")
      ->capture_default_str();
}

fsvt::SolverConfig make_config(const SolverOpts& o) {
  fsvt::SolverConfig cfg;
  cfg.mode = fsvt::parse_solver(o.solver);
  cfg.target_rank = o.rank;
  cfg.mu = o.mu;
  cfg.tau = o.tau;
  cfg.a = o.a;
  cfg.lam = o.lam;
  cfg.xi = o.xi;
  cfg.tol = o.tol;
  cfg.max_iter = o.max_iter;
  return cfg;
}

std::string solver_config_str(const SolverOpts& o) {
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "solver=%s rank=%d mu=%g tau=%g a=%g lam=%g xi=%g tol=%g "
                "max-iter=%d",
                o.solver.c_str(), o.rank, o.mu, o.tau, o.a, o.lam, o.xi, o.tol,
                o.max_iter);
  return buf;
}

void print_run(const fsvt::SolverResult& res) {
  std::printf("iterations=%d converged=%d time_s=%.3f\n", res.iterations,
              res.converged ? 1 : 0, res.wall_time_s);
}

// Recovered matrices go out as PGM when the path says so, plain text
// otherwise.
void write_recovered(const fsvt::Matrix& x, const std::string& path) {
  if (path.ends_with(".pgm")) {
    fsvt::save_pgm(x, path);
  } else {
    auto out = open_out(path);
    fsvt::write_matrix_text(x, out);
  }
}

void maybe_write_trace(const fsvt::SolverResult& res, const std::string& path) {
  if (path.empty()) return;
  auto out = open_out(path);
  fsvt::write_trace_csv(res, out);
}

// ---------------------------------------------------------------------------
// prox

struct ProxOpts {
  double a = 1.0;
  double lam = 0.0;
  double gamma = 0.0;
  std::string regime = "general";
};

int run_prox(const ProxOpts& o) {
  std::printf("config: prox a=%g lam=%g gamma=%g regime=%s\n", o.a, o.lam,
              o.gamma, o.regime.c_str());
  std::fflush(stdout);
  const bool convex = o.regime == "convex";
  const double threshold = convex ? fsvt::threshold_convex(o.a, o.lam)
                                  : fsvt::threshold_general(o.a, o.lam);
  const double value = convex ? fsvt::scalar_prox_convex(o.a, o.lam, o.gamma)
                              : fsvt::scalar_prox_general(o.a, o.lam, o.gamma);
  std::printf("threshold = %.12g\n", threshold);
  std::printf("prox = %.12g\n", value);
  return 0;
}

// ---------------------------------------------------------------------------
// complete

struct CompleteOpts {
  std::string mask_path;
  std::string obs_path;
  std::string image_path;
  std::string truth_path;
  std::string out_path;
  std::string trace_path;
  SolverOpts solver;
};

int run_complete(const CompleteOpts& o) {
  if (o.obs_path.empty() == o.image_path.empty())
    throw UsageError("complete: exactly one of --obs and --image is required");
  std::printf("config: complete mask=%s obs=%s image=%s truth=%s out=%s "
              "trace=%s %s\n",
              o.mask_path.c_str(), or_dash(o.obs_path), or_dash(o.image_path),
              or_dash(o.truth_path), or_dash(o.out_path), or_dash(o.trace_path),
              solver_config_str(o.solver).c_str());
  std::fflush(stdout);

  auto mask_in = open_in(o.mask_path);
  const fsvt::SamplingMask mask = fsvt::SamplingMask::load(mask_in);
  const fsvt::CompletionMap map(mask);

  fsvt::Vector b;
  if (!o.obs_path.empty()) {
    auto obs_in = open_in(o.obs_path);
    b = fsvt::read_vector_text(obs_in);
    if (b.size() != mask.count())
      throw std::runtime_error("complete: " + std::to_string(b.size()) +
                               " observations for a mask of " +
                               std::to_string(mask.count()) + " entries");
  } else {
    const fsvt::Matrix img = fsvt::load_pgm(o.image_path);
    if (img.rows() != mask.rows() || img.cols() != mask.cols())
      throw std::runtime_error("complete: image size does not match the mask");
    b = map.forward(img);
  }

  const fsvt::SolverResult res = fsvt::solve(map, b, make_config(o.solver));
  print_run(res);
  if (!o.truth_path.empty()) {
    auto truth_in = open_in(o.truth_path);
    const fsvt::Matrix truth = fsvt::read_matrix_text(truth_in);
    std::printf("RE = %.6e\n", fsvt::relative_error(res.x_opt, truth));
  }
  if (!o.out_path.empty()) write_recovered(res.x_opt, o.out_path);
  maybe_write_trace(res, o.trace_path);
  return 0;
}

// ---------------------------------------------------------------------------
// inpaint

struct InpaintOpts {
  std::string image_path;
  std::string mask_path;
  std::string out_path;
  std::string trace_path;
  std::string save_mask_path;
  double sr = 0.5;
  double noise = 0.0;
  std::uint64_t seed = 1;
  bool truncate = false;
  SolverOpts solver;
};

int run_inpaint(const InpaintOpts& o) {
  std::printf("config: inpaint image=%s mask=%s sr=%g noise=%g seed=%" PRIu64
              " truncate=%d out=%s trace=%s save-mask=%s %s\n",
              o.image_path.c_str(), or_dash(o.mask_path), o.sr, o.noise, o.seed,
              o.truncate ? 1 : 0, o.out_path.c_str(), or_dash(o.trace_path),
              or_dash(o.save_mask_path), solver_config_str(o.solver).c_str());
  std::fflush(stdout);

  fsvt::Matrix truth = fsvt::load_pgm(o.image_path);
  if (o.truncate) truth = fsvt::low_rank_approx(truth, o.solver.rank);

  fsvt::SamplingMask mask = [&] {
    if (!o.mask_path.empty()) {
      auto in = open_in(o.mask_path);
      auto loaded = fsvt::SamplingMask::load(in);
      if (loaded.rows() != truth.rows() || loaded.cols() != truth.cols())
        throw std::runtime_error("inpaint: mask size does not match the image");
      return loaded;
    }
    return fsvt::gen_mask(truth.rows(), truth.cols(), o.sr, o.seed);
  }();
  if (!o.save_mask_path.empty()) {
    auto out = open_out(o.save_mask_path);
    mask.save(out);
  }

  const fsvt::Vector b = fsvt::add_noise(truth, mask, o.noise, o.seed);
  const fsvt::CompletionMap map(mask);
  const fsvt::SolverResult res = fsvt::solve(map, b, make_config(o.solver));
  print_run(res);
  std::printf("RE = %.6e\n", fsvt::relative_error(res.x_opt, truth));
  fsvt::save_pgm(res.x_opt, o.out_path);
  maybe_write_trace(res, o.trace_path);
  return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOpts {
  std::string spec_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  bool no_timing = false;
};

int run_bench(const BenchOpts& o) {
  char seed_str[32] = "spec";
  if (o.seed_given)
    std::snprintf(seed_str, sizeof(seed_str), "%" PRIu64, o.seed);
  std::printf("config: bench spec=%s out=%s seed=%s timing=%d\n",
              o.spec_path.c_str(), or_dash(o.out_path), seed_str,
              o.no_timing ? 0 : 1);
  std::fflush(stdout);

  auto in = open_in(o.spec_path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw UsageError("bench: spec file is empty");
  std::istringstream spec_in(text);
  auto specs = fsvt::load_experiment_specs(spec_in);
  if (specs.empty())
    throw UsageError("bench: spec file contains no experiments");
  if (o.seed_given)
    for (auto& spec : specs) spec.seed = o.seed;

  if (o.out_path.empty()) {
    fsvt::run_table(specs, std::cout, !o.no_timing);
  } else {
    auto out = open_out(o.out_path);
    fsvt::run_table(specs, out, !o.no_timing);
  }
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"low-rank matrix recovery by singular value thresholding with "
               "a fraction-function penalty"};
  app.require_subcommand(1);

  ProxOpts prox_opts;
  auto* prox_cmd =
      app.add_subcommand("prox", "evaluate the scalar prox and its threshold");
  prox_cmd->add_option("--a", prox_opts.a, "penalty shape a > 0")
      ->capture_default_str();
  prox_cmd->add_option("--lam", prox_opts.lam, "regularization weight")
      ->capture_default_str();
  prox_cmd->add_option("--gamma", prox_opts.gamma, "evaluation point")
      ->capture_default_str();
  prox_cmd->add_option("--regime", prox_opts.regime, "general or convex")
      ->check(CLI::IsMember({"general", "convex"}))
      ->capture_default_str();

  CompleteOpts complete_opts;
  auto* complete_cmd = app.add_subcommand(
      "complete", "recover a matrix from masked observations");
  complete_cmd->add_option("--mask", complete_opts.mask_path, "mask file")
      ->required();
  complete_cmd->add_option("--obs", complete_opts.obs_path,
                           "observations, one value per line (mask order)");
  complete_cmd->add_option("--image", complete_opts.image_path,
                           "PGM image to sample instead of --obs");
  complete_cmd->add_option("--truth", complete_opts.truth_path,
                           "reference matrix; prints the relative error");
  complete_cmd->add_option("--out", complete_opts.out_path,
                           "recovered matrix (text, or PGM by extension)");
  complete_cmd->add_option("--trace", complete_opts.trace_path,
                           "per-iteration trace CSV");
  add_solver_flags(complete_cmd, &complete_opts.solver);

  InpaintOpts inpaint_opts;
  auto* inpaint_cmd =
      app.add_subcommand("inpaint", "mask out pixels of a PGM and reconstruct");
  inpaint_cmd->add_option("--image", inpaint_opts.image_path, "input PGM")
      ->required();
  auto* inpaint_mask =
      inpaint_cmd->add_option("--mask", inpaint_opts.mask_path,
                              "mask file of pixels to keep");
  auto* inpaint_sr =
      inpaint_cmd
          ->add_option("--sr", inpaint_opts.sr,
                       "sampling ratio of a generated mask")
          ->capture_default_str();
  inpaint_mask->excludes(inpaint_sr);
  inpaint_sr->excludes(inpaint_mask);
  inpaint_cmd->add_option("--noise", inpaint_opts.noise,
                          "noise level on the kept pixels")
      ->capture_default_str();
  inpaint_cmd->add_option("--seed", inpaint_opts.seed,
                          "seed for mask generation and noise")
      ->capture_default_str();
  inpaint_cmd->add_flag("--truncate", inpaint_opts.truncate,
                        "replace the input by its best rank-r approximation "
                        "before masking");
  inpaint_cmd->add_option("--out", inpaint_opts.out_path, "reconstructed PGM")
      ->required();
  inpaint_cmd->add_option("--trace", inpaint_opts.trace_path,
                          "per-iteration trace CSV");
  inpaint_cmd->add_option("--save-mask", inpaint_opts.save_mask_path,
                          "write the mask that was used");
  add_solver_flags(inpaint_cmd, &inpaint_opts.solver);

  BenchOpts bench_opts;
  auto* bench_cmd = app.add_subcommand(
      "bench", "run an experiment grid from a JSON spec, emit a CSV report");
  bench_cmd->add_option("--spec", bench_opts.spec_path, "JSON experiment spec")
      ->required();
  bench_cmd->add_option("--out", bench_opts.out_path,
                        "report CSV (default: stdout)");
  auto* bench_seed = bench_cmd->add_option(
      "--seed", bench_opts.seed, "override the seed of every experiment");
  bench_cmd->add_flag("--no-timing", bench_opts.no_timing,
                      "write 0 in the time_s column for reproducible output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }
  bench_opts.seed_given = bench_seed->count() > 0;

  try {
    if (prox_cmd->parsed()) return run_prox(prox_opts);
    if (complete_cmd->parsed()) return run_complete(complete_opts);
    if (inpaint_cmd->parsed()) return run_inpaint(inpaint_opts);
    if (bench_cmd->parsed()) return run_bench(bench_opts);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
