#include "pickdrop/params.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pickdrop/error.hpp"

namespace pickdrop {
namespace {

// ceil() that ignores relative rounding noise below 1e-12, so that an exact
// integer computed through pow() does not round up by one.
std::uint64_t ceil_stable(long double x) {
  if (x <= 1) return 1;
  const long double snapped = std::ceil(x * (1.0L - 1e-12L));
  return static_cast<std::uint64_t>(snapped);
}

long double root(long double x, unsigned k) { return std::pow(x, 1.0L / k); }

void check_domain(std::uint64_t n, unsigned k, std::uint64_t length) {
  if (n < 2) throw Error(ErrorKind::kUsage, "universe size must be at least 2");
  if (k < 3) throw Error(ErrorKind::kUsage, "moment order must be at least 3");
  if (length == 0) throw Error(ErrorKind::kUsage, "stream length must be positive");
}

}  // namespace

std::uint64_t delta_for_psi(double psi) {
  if (!(psi > 0)) throw Error(ErrorKind::kDegenerate, "skewness is zero");
  const double exponent = std::ceil(0.5 * std::log2(psi));
  if (exponent <= 0) return 1;
  return std::uint64_t{1} << static_cast<unsigned>(exponent);
}

double skewness(std::uint64_t n, unsigned k, std::uint64_t length, long double residual) {
  const long double nl = static_cast<long double>(n);
  return static_cast<double>(std::pow(nl, 1.0L - 1.0L / k) * root(residual, k) /
                             static_cast<long double>(length));
}

std::uint64_t repetitions(std::uint64_t n, unsigned k, double eps, std::uint64_t delta,
                          double constant) {
  if (!(eps > 0 && eps < 1)) throw Error(ErrorKind::kUsage, "eps must lie in (0, 1)");
  if (delta == 0) throw Error(ErrorKind::kUsage, "delta must be positive");
  const long double scale = std::pow(static_cast<long double>(n), 1.0L - 2.0L / k);
  return ceil_stable(constant * scale / (eps * static_cast<long double>(delta)));
}

ParamSet params_for_delta(std::uint64_t n, unsigned k, std::uint64_t length, std::uint64_t delta,
                          const RepetitionPolicy& policy) {
  check_domain(n, k, length);
  if (delta == 0 || (delta & (delta - 1)) != 0) {
    throw Error(ErrorKind::kUsage, "delta must be a power of two, got " + std::to_string(delta));
  }
  const long double nl = static_cast<long double>(n);
  const long double f1 = static_cast<long double>(length);
  const long double d = static_cast<long double>(delta);

  ParamSet p;
  p.delta = delta;
  p.length = length;
  p.cols = ceil_stable(d * f1 / root(nl, k));
  if (p.cols > length) {
    p.cols = length;
    p.cols_clamped = true;
  }
  p.lambda = ceil_stable(f1 * d * d * d / nl);
  p.rows = (length + p.cols - 1) / p.cols;
  p.padding = p.rows * p.cols - length;
  p.reps = repetitions(n, k, policy.eps, delta, policy.constant);
  return p;
}

ParamSet derive_params(std::uint64_t n, unsigned k, std::uint64_t length, long double residual,
                       const RepetitionPolicy& policy) {
  check_domain(n, k, length);
  if (residual < 0) throw Error(ErrorKind::kUsage, "residual moment must be non-negative");
  const double psi = skewness(n, k, length, residual);
  ParamSet p = params_for_delta(n, k, length, delta_for_psi(psi), policy);
  p.psi = psi;
  return p;
}

std::vector<std::uint64_t> delta_grid(std::uint64_t n, unsigned k) {
  if (n < 2) throw Error(ErrorKind::kUsage, "universe size must be at least 2");
  if (k < 3) throw Error(ErrorKind::kUsage, "moment order must be at least 3");
  const long double bound =
      2.0L * std::pow(static_cast<long double>(n), static_cast<long double>(k - 1) / (2.0L * k));
  std::vector<std::uint64_t> grid;
  for (std::uint64_t d = 1; static_cast<long double>(d) <= bound; d <<= 1) grid.push_back(d);
  return grid;
}

SanityReport sanity_inequalities(const ExactStats& stats, const ParamSet& params, unsigned k,
                                 ElementId heavy) {
  SanityReport r;
  const long double gk = to_long_double(stats.residual_moment(k, heavy));
  const long double g2 = to_long_double(stats.residual_moment(2, heavy));
  const long double g3 = to_long_double(stats.residual_moment(3, heavy));
  const long double t = static_cast<long double>(params.cols);
  const long double lambda = static_cast<long double>(params.lambda);
  const long double root_k = root(gk, k);
  r.residual_root = static_cast<double>(root_k);
  r.lambda_rows = static_cast<double>(lambda * static_cast<long double>(params.rows));
  r.g2_over_cols = static_cast<double>(g2 / t);
  r.g3_over_lambda_cols = static_cast<double>(g3 / (lambda * t));
  const long double f1 = static_cast<long double>(params.length);
  const long double d = static_cast<long double>(params.delta);
  r.lambda_rows_unrounded = static_cast<double>(
      f1 * d * d * d / static_cast<long double>(stats.universe()) * f1 / t);
  r.lambda_rows_ok = r.lambda_rows <= 4.0 * r.residual_root;
  r.lambda_rows_unrounded_ok = r.lambda_rows_unrounded <= 4.0 * r.residual_root * (1 + 1e-12);
  r.g2_ok = r.g2_over_cols <= r.residual_root;
  r.g3_ok = r.g3_over_lambda_cols <= r.residual_root;
  return r;
}

}  // namespace pickdrop
