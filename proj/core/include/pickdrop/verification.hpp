#ifndef PICKDROP_VERIFICATION_HPP_
#define PICKDROP_VERIFICATION_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pickdrop/params.hpp"
#include "pickdrop/stream.hpp"

namespace pickdrop {

inline constexpr std::uint64_t kEnumerationGuard = 1'000'000;

// Precomputed view of a matrix for replaying the recurrence straight from its
// definition: suffix counts d[i][j] and per-row frequencies.
class RecurrenceTable {
 public:
  RecurrenceTable(const MatrixOverlay& overlay, std::uint64_t lambda);

  std::uint64_t rows() const noexcept { return rows_; }
  std::uint64_t cols() const noexcept { return cols_; }
  std::uint64_t lambda() const noexcept { return lambda_; }

  // (S_r, C_r) for 0-based columns, one per row. The sentinel estimate if any
  // sampled cell is padding.
  Estimate replay(std::span<const std::uint64_t> columns) const;

 private:
  std::uint64_t row_frequency(std::uint64_t row, ElementId x) const;

  std::uint64_t rows_;
  std::uint64_t cols_;
  std::uint64_t lambda_;
  std::vector<ElementId> cells_;
  std::vector<std::uint64_t> suffix_;
  // Row i's distinct values with counts, sorted by id.
  std::vector<std::vector<std::pair<ElementId, std::uint64_t>>> row_counts_;
};

using Law = std::map<Estimate, long double>;

struct ExactDistribution {
  Law law;  // probability of each (S_r, C_r); the sentinel stands for a failed run
  std::uint64_t tuples = 0;

  long double probability_of(ElementId element) const;
  long double total() const;
};

// Enumerates all t^r column tuples. Throws ErrorKind::kGuard if t^r > guard.
ExactDistribution exact_distribution(const MatrixOverlay& overlay, std::uint64_t lambda,
                                     std::uint64_t guard = kEnumerationGuard,
                                     unsigned threads = 1);

// Outcome counts of `trials` independent pick-and-drop runs (the streaming
// implementation), seeds derived from `seed`.
std::map<Estimate, std::uint64_t> sample_runs(const MatrixOverlay& overlay, std::uint64_t lambda,
                                              std::uint64_t trials, std::uint64_t seed,
                                              unsigned threads = 1);

struct OutcomeCheck {
  Estimate outcome;
  long double expected = 0;
  double observed = 0;
  double sigma = 0;
  bool ok = false;
};

struct AgreementReport {
  std::uint64_t trials = 0;  // of the last attempt
  bool rerun = false;
  bool pass = false;
  std::vector<OutcomeCheck> outcomes;
};

// Empirical law vs exact law, |observed - expected| <= 3 sigma per outcome with
// sigma = sqrt(p (1 - p) / N). A failing comparison is repeated once with ten
// times the trials.
AgreementReport check_agreement(const MatrixOverlay& overlay, std::uint64_t lambda,
                                std::uint64_t trials, std::uint64_t seed, unsigned threads = 1);

// A probability measured exactly or by Monte Carlo against a lower bound.
struct BoundCheck {
  bool hypothesis = false;
  std::string note;
  std::uint64_t heavy = 0;
  std::uint64_t heavy_frequency = 0;
  long double probability = 0;
  double sigma = 0;          // 0 when exact
  std::uint64_t trials = 0;  // 0 when exact
  bool exact = false;
  bool rerun = false;
  double bound = 0;
  bool holds = false;  // probability >= bound - 3 sigma
};

struct Theorem21Inputs {
  double lambda_rows = 0;          // lambda r
  double g3_over_lambda_cols = 0;  // G_3 / (lambda t)
  double g2_over_cols = 0;         // G_2 / t
  double lower(double alpha) const {
    return alpha * (lambda_rows + g3_over_lambda_cols + g2_over_cols);
  }
};

Theorem21Inputs theorem_2_1_inputs(const MatrixOverlay& overlay, std::uint64_t lambda,
                                   ElementId heavy);

// P(S_r = heavy) vs f/(2t), with hypothesis
// alpha (lambda r + G_3/(lambda t) + G_2/t) <= f <= beta t.
// Exact when t^r <= guard, else Monte Carlo over `trials` replays.
BoundCheck check_theorem_2_1(const MatrixOverlay& overlay, std::uint64_t lambda, double alpha,
                             double beta, ElementId heavy, std::uint64_t trials = 1'000'000,
                             std::uint64_t seed = 0, std::uint64_t guard = kEnumerationGuard);

// One instance of the calibration sweep: a matrix with its measured
// P(S_r = heavy); reused across every (alpha, beta) cell.
struct CalibrationInstance {
  std::string label;
  Theorem21Inputs inputs;
  std::uint64_t heavy_frequency = 0;
  std::uint64_t cols = 0;
  BoundCheck measured;  // hypothesis ignored; probability vs f/(2t) only
};

CalibrationInstance measure_instance(std::string label, const MatrixOverlay& overlay,
                                     std::uint64_t lambda, ElementId heavy,
                                     std::uint64_t trials, std::uint64_t seed);

struct CalibrationCell {
  double alpha = 0;
  double beta = 0;
  std::uint64_t satisfied = 0;
  std::uint64_t violations = 0;
  bool feasible() const noexcept { return satisfied > 0 && violations == 0; }
};

struct Calibration {
  std::vector<CalibrationCell> cells;
  std::optional<CalibrationCell> chosen;  // smallest alpha, then largest beta
};

inline constexpr double kAlphaGrid[] = {1, 2, 4, 8, 16};
inline constexpr double kBetaGrid[] = {0.05, 0.1, 0.2, 0.3};

Calibration calibrate(std::span<const CalibrationInstance> instances);

// A planted matrix for the matrix-bound checks: id 1 occurs heavy times, every
// other cell is distinct.
struct Theorem21Case {
  std::string label;
  Stream stream;
  std::uint64_t rows = 1;
  std::uint64_t cols = 1;
  std::uint64_t lambda = 1;

  MatrixOverlay overlay() const { return MatrixOverlay(stream.items(), rows, cols); }
};

// Shapes r in {2, 4, 8}, t in {80, 320, 1280}, lambda in {1, 2}, heavy share
// f/t in {0.05, 0.1, 0.2, 0.3}, rows-uniform placement, plus random and
// bursty placements for r = 4. Matrices differ by seed.
std::vector<Theorem21Case> theorem_2_1_cases(std::uint64_t seed);

std::vector<CalibrationInstance> measure_cases(std::span<const Theorem21Case> cases,
                                               std::uint64_t trials, std::uint64_t seed);

// P(S_r = heavy) for one run with the parameters of derive_params, vs
// delta / (2 n^(1 - 2/k)), hypothesis alpha G_k^(1/k) <= f <= beta t.
struct Theorem31Report {
  BoundCheck check;
  ParamSet params;
  double residual_root = 0;
};

Theorem31Report check_theorem_3_1(const Stream& stream, unsigned k, double alpha, double beta,
                                  ElementId heavy, std::uint64_t trials = 100'000,
                                  std::uint64_t seed = 0, unsigned threads = 1);

// Houses u_1..u_t and w_1..w_t. Pairs are 1-based (i, j) with 1 <= j <= u_i.
struct PairSequences {
  std::vector<std::int64_t> u;
  std::vector<std::int64_t> w;
};

// (i, j) loses iff -j + sum_{s=i}^{h} (u_s - w_s) < 0 for some h >= i.
std::vector<std::pair<std::size_t, std::int64_t>> winning_pairs(const PairSequences& p);

// Same count in linear time from suffix minima of the running sums.
std::uint64_t count_winning_pairs(const PairSequences& p);

struct LemmaReport {
  std::uint64_t cases = 0;
  std::uint64_t positive_cases = 0;  // sum(u - w) > 0
  std::uint64_t counterexamples = 0;
  std::uint64_t cross_checked = 0;   // cases also counted by the direct definition
  std::uint64_t count_mismatches = 0;
  std::optional<PairSequences> first_counterexample;
};

// Every U, W of each length 1..max_length with entries in [0, max_entry]:
// |winning| >= sum(u - w) whenever the sum is positive. Cases up to
// `direct_length` are also counted by the definition and compared.
LemmaReport check_winning_pairs_lemma(std::size_t max_length, std::int64_t max_entry,
                                      std::size_t direct_length = 4);

struct PromiseReport {
  std::uint64_t n = 0;
  unsigned k = 0;
  std::uint64_t rows = 0;
  std::uint64_t cols = 0;
  std::uint64_t reps = 0;
  std::uint64_t trials = 0;
  std::uint64_t case1_false_positives = 0;
  std::uint64_t case2_misses = 0;
  double miss_rate = 0;
  double bound = 0;       // (1 - 1/t)^(r T)
  double sigma = 0;       // sqrt(bound (1 - bound) / trials)
  double row_pairs_bound = 0;  // (1 - 1/t)^((r - 1) T): only rows 1..r-1 are sampled
  bool case1_ok = false;
  bool case2_ok = false;  // miss_rate <= bound + 3 sigma
};

// Smallest T with (1 - 1/t)^(r T) < target.
std::uint64_t promise_reps(std::uint64_t n, unsigned k, double target = 1.0 / 3);

// The duplicate-check sampler: per repetition, for i = 1..r-1 pick a uniform
// column of row i and report Case 2 if its value reappears in row i+1.
// Fresh Case-1 and Case-2 matrices are drawn for every trial.
PromiseReport promise_problem_experiment(std::uint64_t n, unsigned k, std::uint64_t trials,
                                         std::uint64_t reps, std::uint64_t seed = 0);

}  // namespace pickdrop

#endif  // PICKDROP_VERIFICATION_HPP_
