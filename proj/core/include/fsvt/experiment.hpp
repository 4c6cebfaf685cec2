#pragma once

#include "fsvt/matrix.hpp"
#include "fsvt/operators.hpp"
#include "fsvt/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fsvt {

// Synthetic-data and image-inpainting benchmark protocol: a rank-r ground
// truth M, a uniform random mask of s = round(sr*m*n) entries, observations
// b = P_Omega(M) + xi1 * P_Omega(E) with E standard normal, recovery quality
// measured by the relative Frobenius error. All randomness derives from a
// single 64-bit seed through fixed SplitMix64 stream ids, so a spec
// reproduces its data bit for bit on any platform.

struct ExperimentSpec {
  Index m = 256, n = 256;
  int rank = 30;
  double sampling_ratio = 0.5; // sr
  double noise_level = 0.01;   // xi1
  LambdaMode solver = LambdaMode::Adaptive;
  double tau = 0.45;
  double a = 1.0;
  double xi = 0.01;
  double mu = 0.99;
  double lam = 0.0; // fixed-lambda solver only
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 1;
  int repetitions = 1;
};

struct ExperimentRow {
  double xi1 = 0.0;
  double fr = 0.0;
  double re = 0.0;
  double wall_time_s = 0.0;
  std::string solver;
  bool converged = false;
  int iterations = 0;
};

/// "fixed", "scheme2" or "aisvta".
std::string solver_name(LambdaMode mode);
LambdaMode parse_solver(const std::string& name);

/// M = L * R^T with L (m x r), R (n x r) filled with seeded standard-normal
/// draws; rank r with probability one. r = 0 gives the zero matrix.
Matrix gen_low_rank(Index m, Index n, int r, std::uint64_t seed);

/// Uniform without-replacement sample of exactly round(sr*m*n) entries.
SamplingMask gen_mask(Index m, Index n, double sr, std::uint64_t seed);

/// b_k = M at mask entry k plus xi1 times a seeded standard-normal draw.
Vector add_noise(const Matrix& m, const SamplingMask& mask, double xi1,
                 std::uint64_t seed);

/// ||x_opt - m||_F / ||m||_F.
double relative_error(const Matrix& x_opt, const Matrix& m);

/// fr = s / (r * (m + n - r)): observations per degree of freedom.
double freedom_ratio(Index s, Index m, Index n, int r);

/// Best rank-r approximation (truncated SVD).
Matrix low_rank_approx(const Matrix& m, int r);

/// One run at spec.seed. The first overload generates a rank-`spec.rank`
/// ground truth and rescales it to RMS entry 0.5 (grayscale dynamic range),
/// so noise_level is comparable between synthetic and image-derived data;
/// the second uses the supplied truth as-is.
ExperimentRow run_experiment(const ExperimentSpec& spec);
ExperimentRow run_experiment(const ExperimentSpec& spec, const Matrix& truth);

/// CSV report: header "xi1,fr,solver,RE,time_s,iters,converged", one row per
/// (spec, repetition) using seeds spec.seed + rep, plus a mean row per spec
/// (solver column suffixed ":mean"). include_time = false writes 0 in the
/// time_s column so outputs are byte-for-byte reproducible.
void run_table(const std::vector<ExperimentSpec>& specs, std::ostream& out,
               bool include_time = true);

/// JSON array of experiment specs; missing fields take the defaults above.
std::vector<ExperimentSpec> load_experiment_specs(std::istream& in);

/// Plain text matrix: header "m n", then m lines of n values.
Matrix read_matrix_text(std::istream& in);
void write_matrix_text(const Matrix& m, std::ostream& out);

/// One value per line.
Vector read_vector_text(std::istream& in);

} // namespace fsvt
