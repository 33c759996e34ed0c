#ifndef PICKDROP_PARAMS_HPP_
#define PICKDROP_PARAMS_HPP_

#include <cstdint>
#include <vector>

#include "pickdrop/stream.hpp"

namespace pickdrop {

// Repetition schedule T(delta) = ceil(constant * n^(1 - 2/k) / (eps * delta)).
struct RepetitionPolicy {
  double eps = 0.25;
  double constant = 4.0;
};

// Run parameters for one skewness scale delta:
//   psi    = n^(1 - 1/k) * G_k^(1/k) / F_1   (0 when derived from a grid point)
//   delta  = 2^ceil(0.5 * log2 psi), at least 1
//   cols   = ceil(delta * F_1 / n^(1/k))     (clamped to F_1)
//   lambda = ceil(F_1 * delta^3 / n)
//   rows   = ceil(F_1 / cols); the last row is padded with sentinels
//   reps   = T(delta)
struct ParamSet {
  double psi = 0.0;
  std::uint64_t delta = 1;
  std::uint64_t cols = 1;
  std::uint64_t lambda = 1;
  std::uint64_t rows = 1;
  std::uint64_t reps = 0;
  std::uint64_t length = 0;   // F_1 the parameters were derived for
  std::uint64_t padding = 0;  // rows * cols - length
  bool cols_clamped = false;  // formula asked for more columns than items

  friend bool operator==(const ParamSet&, const ParamSet&) = default;
};

// 2^ceil(0.5 * log2 psi), never below 1.
std::uint64_t delta_for_psi(double psi);

double skewness(std::uint64_t n, unsigned k, std::uint64_t length, long double residual);

// Parameters for a known F_1 and G_k. Throws ErrorKind::kDegenerate when
// G_k = 0 (psi = 0: a single element carries the whole stream) and
// ErrorKind::kUsage for n < 2, k < 3 or F_1 = 0.
ParamSet derive_params(std::uint64_t n, unsigned k, std::uint64_t length, long double residual,
                       const RepetitionPolicy& policy = {});

// Parameters for a fixed delta, used when G_k is unknown and every delta on
// the grid is tried.
ParamSet params_for_delta(std::uint64_t n, unsigned k, std::uint64_t length, std::uint64_t delta,
                          const RepetitionPolicy& policy = {});

// Powers of two in [1, 2 * n^((k - 1) / 2k)], ascending.
std::vector<std::uint64_t> delta_grid(std::uint64_t n, unsigned k);

std::uint64_t repetitions(std::uint64_t n, unsigned k, double eps, std::uint64_t delta,
                          double constant = 4.0);

// Checks, on a concrete instance, the three inequalities the probability
// bounds rest on. `heavy` plays the role of the excluded element; n is
// taken from stats.universe().
struct SanityReport {
  double residual_root = 0;  // G_k^(1/k)
  double lambda_rows = 0;    // lambda * r, must be <= 4 G_k^(1/k)
  // F_1 delta^3 / n * F_1 / t: lambda and r before rounding up. The integer
  // product can exceed the bound by the two ceilings.
  double lambda_rows_unrounded = 0;
  double g2_over_cols = 0;   // G_2 / t, must be <= G_k^(1/k)
  double g3_over_lambda_cols = 0;  // G_3 / (lambda t), must be <= G_k^(1/k)
  bool lambda_rows_ok = false;
  bool lambda_rows_unrounded_ok = false;
  bool g2_ok = false;
  bool g3_ok = false;

  bool all() const noexcept { return lambda_rows_ok && g2_ok && g3_ok; }
};

SanityReport sanity_inequalities(const ExactStats& stats, const ParamSet& params, unsigned k,
                                 ElementId heavy);

}  // namespace pickdrop

#endif  // PICKDROP_PARAMS_HPP_
