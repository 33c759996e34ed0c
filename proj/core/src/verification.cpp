#include "pickdrop/verification.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <unordered_map>

#include "pickdrop/error.hpp"
#include "pickdrop/generators.hpp"
#include "pickdrop/parallel.hpp"
#include "pickdrop/pick_drop.hpp"
#include "pickdrop/random.hpp"

namespace pickdrop {
namespace {

// t^r, or nullopt once it passes `limit`.
std::optional<std::uint64_t> tuple_count(std::uint64_t cols, std::uint64_t rows,
                                         std::uint64_t limit) {
  std::uint64_t total = 1;
  for (std::uint64_t i = 0; i < rows; ++i) {
    if (total > limit / cols) return std::nullopt;
    total *= cols;
  }
  return total;
}

double binomial_sigma(long double p, std::uint64_t trials) {
  if (trials == 0) return 0;
  const long double q = std::clamp<long double>(p, 0, 1);
  return static_cast<double>(std::sqrt(q * (1 - q) / static_cast<long double>(trials)));
}

template <class Map>
void merge_into(Map& into, const Map& from) {
  for (const auto& [key, value] : from) into[key] += value;
}

Stream overlay_stream(const MatrixOverlay& overlay) {
  return Stream::with_inferred_universe(
      std::vector<ElementId>(overlay.items().begin(), overlay.items().end()));
}

// P(S_r = heavy) by replaying the recurrence for random column tuples.
std::uint64_t replay_hits(const RecurrenceTable& table, ElementId heavy, std::uint64_t trials,
                          std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> columns(table.rows());
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    for (auto& c : columns) c = uniform_below(rng, table.cols());
    hits += table.replay(columns).element == heavy;
  }
  return hits;
}

std::uint64_t sampler_hits(const MatrixOverlay& overlay, std::uint64_t lambda, ElementId heavy,
                           std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  std::uint64_t hits = 0;
  std::mutex mu;
  parallel_chunks(trials, threads, [&](std::size_t begin, std::size_t end) {
    std::uint64_t local = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const PickDropConfig cfg{overlay.rows(), overlay.cols(), lambda, derive_seed(seed, i)};
      local += run(overlay, cfg).element == heavy;
    }
    std::lock_guard lock(mu);
    hits += local;
  });
  return hits;
}

// Fills a Monte Carlo measurement, rerunning once with 10x trials if the
// first attempt falls below the band.
template <class Measure>
void measure_with_rerun(BoundCheck& check, std::uint64_t trials, std::uint64_t seed,
                        Measure measure) {
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::uint64_t n = attempt == 0 ? trials : trials * 10;
    const std::uint64_t hits = measure(n, derive_seed(seed, attempt));
    check.trials = n;
    check.probability = static_cast<long double>(hits) / static_cast<long double>(n);
    check.sigma = binomial_sigma(check.probability, n);
    check.holds = check.probability >= check.bound - 3 * check.sigma;
    check.rerun = attempt > 0;
    if (check.holds) return;
  }
}

}  // namespace

RecurrenceTable::RecurrenceTable(const MatrixOverlay& overlay, std::uint64_t lambda)
    : rows_(overlay.rows()), cols_(overlay.cols()), lambda_(lambda) {
  if (lambda == 0) throw Error(ErrorKind::kUsage, "lambda must be positive");
  cells_.resize(rows_ * cols_);
  suffix_.resize(rows_ * cols_);
  row_counts_.resize(rows_);
  for (std::uint64_t i = 0; i < rows_; ++i) {
    auto& counts = row_counts_[i];
    std::unordered_map<ElementId, std::uint64_t> seen;
    for (std::uint64_t j = cols_; j-- > 0;) {
      const ElementId x = overlay.cell(i * cols_ + j);
      cells_[i * cols_ + j] = x;
      suffix_[i * cols_ + j] = ++seen[x];
      counts.emplace_back(x, 0);
    }
    std::sort(counts.begin(), counts.end());
    std::vector<std::pair<ElementId, std::uint64_t>> merged;
    for (const auto& [x, unused] : counts) {
      if (merged.empty() || merged.back().first != x) merged.emplace_back(x, 0);
      ++merged.back().second;
    }
    counts = std::move(merged);
  }
}

std::uint64_t RecurrenceTable::row_frequency(std::uint64_t row, ElementId x) const {
  const auto& counts = row_counts_[row];
  const auto it = std::lower_bound(counts.begin(), counts.end(), std::make_pair(x, std::uint64_t{0}));
  return it != counts.end() && it->first == x ? it->second : 0;
}

Estimate RecurrenceTable::replay(std::span<const std::uint64_t> columns) const {
  // Row 1 picks; afterwards the global sample is dropped iff
  // C < max(lambda q, c_i), otherwise C grows by S's occurrences in the row.
  ElementId s = kSentinel;
  std::uint64_t c = 0;
  std::uint64_t q = 0;
  for (std::uint64_t i = 0; i < rows_; ++i) {
    const std::uint64_t flat = i * cols_ + columns[i];
    const ElementId local = cells_[flat];
    if (local == kSentinel) return {};
    const std::uint64_t local_count = suffix_[flat];
    if (i == 0 || c < std::max(lambda_ * q, local_count)) {
      s = local;
      c = local_count;
      q = 1;
    } else {
      c += row_frequency(i, s);
      ++q;
    }
  }
  return {s, c};
}

long double ExactDistribution::probability_of(ElementId element) const {
  long double p = 0;
  for (const auto& [outcome, prob] : law) {
    if (outcome.element == element) p += prob;
  }
  return p;
}

long double ExactDistribution::total() const {
  long double p = 0;
  for (const auto& [outcome, prob] : law) p += prob;
  return p;
}

ExactDistribution exact_distribution(const MatrixOverlay& overlay, std::uint64_t lambda,
                                     std::uint64_t guard, unsigned threads) {
  const auto tuples = tuple_count(overlay.cols(), overlay.rows(), guard);
  if (!tuples) {
    throw Error(ErrorKind::kGuard, "t^r exceeds the enumeration guard of " + std::to_string(guard));
  }
  const RecurrenceTable table(overlay, lambda);
  const std::uint64_t rows = overlay.rows();
  const std::uint64_t cols = overlay.cols();
  std::map<Estimate, std::uint64_t> counts;
  std::mutex mu;
  // Chunks split on the first row's column; the rest is an odometer.
  parallel_chunks(cols, threads, [&](std::size_t begin, std::size_t end) {
    std::map<Estimate, std::uint64_t> local;
    std::vector<std::uint64_t> columns(rows, 0);
    for (std::size_t first = begin; first < end; ++first) {
      std::fill(columns.begin(), columns.end(), 0);
      columns[0] = first;
      while (true) {
        ++local[table.replay(columns)];
        std::uint64_t i = rows - 1;
        while (i >= 1 && ++columns[i] == cols) columns[i--] = 0;
        if (i == 0) break;
      }
    }
    std::lock_guard lock(mu);
    merge_into(counts, local);
  });
  ExactDistribution dist;
  dist.tuples = *tuples;
  for (const auto& [outcome, count] : counts) {
    dist.law[outcome] = static_cast<long double>(count) / static_cast<long double>(*tuples);
  }
  return dist;
}

std::map<Estimate, std::uint64_t> sample_runs(const MatrixOverlay& overlay, std::uint64_t lambda,
                                              std::uint64_t trials, std::uint64_t seed,
                                              unsigned threads) {
  std::map<Estimate, std::uint64_t> counts;
  std::mutex mu;
  parallel_chunks(trials, threads, [&](std::size_t begin, std::size_t end) {
    std::map<Estimate, std::uint64_t> local;
    for (std::size_t i = begin; i < end; ++i) {
      const PickDropConfig cfg{overlay.rows(), overlay.cols(), lambda, derive_seed(seed, i)};
      ++local[run(overlay, cfg)];
    }
    std::lock_guard lock(mu);
    merge_into(counts, local);
  });
  return counts;
}

AgreementReport check_agreement(const MatrixOverlay& overlay, std::uint64_t lambda,
                                std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  if (trials == 0) throw Error(ErrorKind::kUsage, "need at least one trial");
  const ExactDistribution exact = exact_distribution(overlay, lambda, kEnumerationGuard, threads);
  AgreementReport report;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const std::uint64_t n = attempt == 0 ? trials : trials * 10;
    const auto counts = sample_runs(overlay, lambda, n, derive_seed(seed, attempt), threads);
    report.trials = n;
    report.rerun = attempt > 0;
    report.outcomes.clear();
    report.pass = true;
    Law keys = exact.law;
    for (const auto& [outcome, unused] : counts) keys.try_emplace(outcome, 0.0L);
    for (const auto& [outcome, p] : keys) {
      OutcomeCheck oc;
      oc.outcome = outcome;
      oc.expected = p;
      const auto it = counts.find(outcome);
      const std::uint64_t seen = it == counts.end() ? 0 : it->second;
      oc.observed = static_cast<double>(seen) / static_cast<double>(n);
      oc.sigma = binomial_sigma(p, n);
      oc.ok = std::abs(static_cast<long double>(oc.observed) - p) <= 3.0L * oc.sigma;
      report.pass &= oc.ok;
      report.outcomes.push_back(oc);
    }
    if (report.pass) break;
  }
  return report;
}

Theorem21Inputs theorem_2_1_inputs(const MatrixOverlay& overlay, std::uint64_t lambda,
                                   ElementId heavy) {
  const ExactStats stats(overlay_stream(overlay));
  const auto r = static_cast<double>(overlay.rows());
  const auto t = static_cast<double>(overlay.cols());
  const auto l = static_cast<double>(lambda);
  Theorem21Inputs in;
  in.lambda_rows = l * r;
  in.g3_over_lambda_cols =
      static_cast<double>(to_long_double(stats.residual_moment(3, heavy))) / (l * t);
  in.g2_over_cols = static_cast<double>(to_long_double(stats.residual_moment(2, heavy))) / t;
  return in;
}

BoundCheck check_theorem_2_1(const MatrixOverlay& overlay, std::uint64_t lambda, double alpha,
                             double beta, ElementId heavy, std::uint64_t trials,
                             std::uint64_t seed, std::uint64_t guard) {
  const ExactStats stats(overlay_stream(overlay));
  const std::uint64_t f = heavy <= stats.universe() ? stats.frequency(heavy) : 0;
  const auto t = static_cast<double>(overlay.cols());
  const Theorem21Inputs in = theorem_2_1_inputs(overlay, lambda, heavy);

  BoundCheck check;
  check.heavy = heavy;
  check.heavy_frequency = f;
  check.bound = static_cast<double>(f) / (2 * t);
  const auto fd = static_cast<double>(f);
  if (in.lower(alpha) > fd) {
    check.note = "hypothesis not satisfied: f below alpha (lambda r + G3/(lambda t) + G2/t)";
  } else if (fd > beta * t) {
    check.note = "hypothesis not satisfied: f above beta t";
  } else {
    check.hypothesis = true;
    check.note = "hypothesis satisfied";
  }

  const RecurrenceTable table(overlay, lambda);
  if (tuple_count(overlay.cols(), overlay.rows(), guard)) {
    check.exact = true;
    check.probability = exact_distribution(overlay, lambda, guard).probability_of(heavy);
    check.holds = check.probability >= check.bound;
    return check;
  }
  measure_with_rerun(check, trials, seed, [&](std::uint64_t n, std::uint64_t s) {
    return replay_hits(table, heavy, n, s);
  });
  return check;
}

CalibrationInstance measure_instance(std::string label, const MatrixOverlay& overlay,
                                     std::uint64_t lambda, ElementId heavy,
                                     std::uint64_t trials, std::uint64_t seed) {
  CalibrationInstance inst;
  inst.label = std::move(label);
  inst.inputs = theorem_2_1_inputs(overlay, lambda, heavy);
  inst.cols = overlay.cols();
  inst.measured = check_theorem_2_1(overlay, lambda, 0, std::numeric_limits<double>::infinity(),
                                    heavy, trials, seed);
  inst.heavy_frequency = inst.measured.heavy_frequency;
  return inst;
}

Calibration calibrate(std::span<const CalibrationInstance> instances) {
  Calibration cal;
  for (double alpha : kAlphaGrid) {
    for (double beta : kBetaGrid) {
      CalibrationCell cell{alpha, beta, 0, 0};
      for (const auto& inst : instances) {
        const auto f = static_cast<double>(inst.heavy_frequency);
        if (inst.inputs.lower(alpha) > f || f > beta * static_cast<double>(inst.cols)) continue;
        ++cell.satisfied;
        cell.violations += !inst.measured.holds;
      }
      cal.cells.push_back(cell);
    }
  }
  for (double alpha : kAlphaGrid) {
    for (auto it = std::rbegin(kBetaGrid); it != std::rend(kBetaGrid); ++it) {
      for (const auto& cell : cal.cells) {
        if (cell.alpha == alpha && cell.beta == *it && cell.feasible() && !cal.chosen) {
          cal.chosen = cell;
        }
      }
    }
  }
  return cal;
}

std::vector<Theorem21Case> theorem_2_1_cases(std::uint64_t seed) {
  std::vector<Theorem21Case> cases;
  auto add = [&](std::uint64_t r, std::uint64_t t, std::uint64_t lambda, double share,
                 Placement placement) {
    const auto f = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(share * t));
    Theorem21Case c;
    c.label = "r=" + std::to_string(r) + " t=" + std::to_string(t) + " lambda=" +
              std::to_string(lambda) + " f=" + std::to_string(f) + " " +
              std::string(to_string(placement));
    c.stream = planted_matrix(r, t, f, placement, derive_seed(seed, cases.size()));
    c.rows = r;
    c.cols = t;
    c.lambda = lambda;
    cases.push_back(std::move(c));
  };
  constexpr double kShares[] = {0.05, 0.1, 0.2, 0.3};
  for (std::uint64_t r : {2, 4, 8}) {
    for (std::uint64_t t : {80, 320, 1280}) {
      for (std::uint64_t lambda : {1, 2}) {
        for (double share : kShares) add(r, t, lambda, share, Placement::kUniformRows);
      }
    }
  }
  for (std::uint64_t t : {80, 320, 1280}) {
    for (double share : kShares) {
      add(4, t, 1, share, Placement::kRandom);
      add(4, t, 1, share, Placement::kBurstyPrefix);
    }
  }
  return cases;
}

std::vector<CalibrationInstance> measure_cases(std::span<const Theorem21Case> cases,
                                               std::uint64_t trials, std::uint64_t seed) {
  std::vector<CalibrationInstance> out;
  out.reserve(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& c = cases[i];
    out.push_back(
        measure_instance(c.label, c.overlay(), c.lambda, kPlantedId, trials, derive_seed(seed, i)));
  }
  return out;
}

Theorem31Report check_theorem_3_1(const Stream& stream, unsigned k, double alpha, double beta,
                                  ElementId heavy, std::uint64_t trials, std::uint64_t seed,
                                  unsigned threads) {
  const ExactStats stats(stream);
  const std::uint64_t n = stream.universe();
  Theorem31Report report;
  BoundCheck& check = report.check;
  check.heavy = heavy;
  check.heavy_frequency = heavy <= stats.universe() ? stats.frequency(heavy) : 0;
  const long double residual = to_long_double(stats.residual_moment(k, heavy));
  if (!(residual > 0)) {
    check.note = "hypothesis not satisfied: residual moment is zero";
    return report;
  }
  report.params = derive_params(n, k, stats.length(), residual);
  report.residual_root = static_cast<double>(std::pow(residual, 1.0L / k));
  const auto f = static_cast<double>(check.heavy_frequency);
  const auto t = static_cast<double>(report.params.cols);
  check.bound = static_cast<double>(report.params.delta) /
                (2 * std::pow(static_cast<double>(n), 1.0 - 2.0 / k));
  if (alpha * report.residual_root > f) {
    check.note = "hypothesis not satisfied: f below alpha G_k^(1/k)";
  } else if (f > beta * t) {
    check.note = "hypothesis not satisfied: f above beta t";
  } else {
    check.hypothesis = true;
    check.note = "hypothesis satisfied";
  }
  const MatrixOverlay overlay(stream.items(), report.params.rows, report.params.cols);
  measure_with_rerun(check, trials, seed, [&](std::uint64_t count, std::uint64_t s) {
    return sampler_hits(overlay, report.params.lambda, heavy, count, s, threads);
  });
  return report;
}

std::vector<std::pair<std::size_t, std::int64_t>> winning_pairs(const PairSequences& p) {
  if (p.u.size() != p.w.size()) throw Error(ErrorKind::kUsage, "U and W differ in length");
  std::vector<std::pair<std::size_t, std::int64_t>> out;
  const std::size_t len = p.u.size();
  for (std::size_t i = 0; i < len; ++i) {
    for (std::int64_t j = 1; j <= p.u[i]; ++j) {
      bool losing = false;
      for (std::size_t h = i; h < len && !losing; ++h) {
        std::int64_t sum = -j;
        for (std::size_t s = i; s <= h; ++s) sum += p.u[s] - p.w[s];
        losing = sum < 0;
      }
      if (!losing) out.emplace_back(i + 1, j);
    }
  }
  return out;
}

std::uint64_t count_winning_pairs(const PairSequences& p) {
  if (p.u.size() != p.w.size()) throw Error(ErrorKind::kUsage, "U and W differ in length");
  // min_h sum_{s=i}^{h} (u_s - w_s), built from the back; (i, j) wins iff
  // j is at most this minimum.
  std::uint64_t count = 0;
  std::int64_t suffix_min = 0;
  for (std::size_t i = p.u.size(); i-- > 0;) {
    const std::int64_t diff = p.u[i] - p.w[i];
    suffix_min = i + 1 == p.u.size() ? diff : diff + std::min<std::int64_t>(0, suffix_min);
    count += static_cast<std::uint64_t>(std::clamp<std::int64_t>(suffix_min, 0, p.u[i]));
  }
  return count;
}

LemmaReport check_winning_pairs_lemma(std::size_t max_length, std::int64_t max_entry,
                                      std::size_t direct_length) {
  if (max_entry < 0) throw Error(ErrorKind::kUsage, "entries must be nonnegative");
  LemmaReport report;
  const std::int64_t base = max_entry + 1;
  for (std::size_t len = 1; len <= max_length; ++len) {
    PairSequences p{std::vector<std::int64_t>(len, 0), std::vector<std::int64_t>(len, 0)};
    // Odometer over the 2 len digits u_1..u_len, w_1..w_len.
    while (true) {
      ++report.cases;
      std::int64_t total = 0;
      for (std::size_t s = 0; s < len; ++s) total += p.u[s] - p.w[s];
      const std::uint64_t count = count_winning_pairs(p);
      if (len <= direct_length) {
        ++report.cross_checked;
        report.count_mismatches += winning_pairs(p).size() != count;
      }
      if (total > 0) {
        ++report.positive_cases;
        if (count < static_cast<std::uint64_t>(total)) {
          ++report.counterexamples;
          if (!report.first_counterexample) report.first_counterexample = p;
        }
      }
      std::size_t d = 0;
      for (; d < 2 * len; ++d) {
        auto& digit = d < len ? p.u[d] : p.w[d - len];
        if (++digit < base) break;
        digit = 0;
      }
      if (d == 2 * len) break;
    }
  }
  return report;
}

std::uint64_t promise_reps(std::uint64_t n, unsigned k, double target) {
  const PromiseShape shape = promise_shape(n, k);
  if (shape.cols < 2) throw Error(ErrorKind::kUsage, "promise matrix needs at least two columns");
  const double per_rep = std::pow(1.0 - 1.0 / static_cast<double>(shape.cols),
                                  static_cast<double>(shape.rows));
  std::uint64_t reps = 0;
  for (double miss = 1; miss >= target; miss *= per_rep) ++reps;
  return reps;
}

PromiseReport promise_problem_experiment(std::uint64_t n, unsigned k, std::uint64_t trials,
                                         std::uint64_t reps, std::uint64_t seed) {
  const PromiseShape shape = promise_shape(n, k);
  PromiseReport report;
  report.n = n;
  report.k = k;
  report.rows = shape.rows;
  report.cols = shape.cols;
  report.reps = reps;
  report.trials = trials;
  const double keep = 1.0 - 1.0 / static_cast<double>(shape.cols);
  report.bound = std::pow(keep, static_cast<double>(shape.rows * reps));
  report.row_pairs_bound = std::pow(keep, static_cast<double>((shape.rows - 1) * reps));
  report.sigma = binomial_sigma(report.bound, trials);

  // True when some sampled cell of row i reappears in row i + 1.
  auto says_case2 = [&](const Stream& s, SplitMix64& rng) {
    const auto items = s.items();
    for (std::uint64_t rep = 0; rep < reps; ++rep) {
      for (std::uint64_t i = 0; i + 1 < shape.rows; ++i) {
        const ElementId x = items[i * shape.cols + uniform_below(rng, shape.cols)];
        const auto next = items.subspan((i + 1) * shape.cols, shape.cols);
        if (std::find(next.begin(), next.end(), x) != next.end()) return true;
      }
    }
    return false;
  };

  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    GeneratorSpec spec;
    spec.universe = n;
    spec.k = k;
    spec.kind = GeneratorKind::kPromiseCase1;
    spec.seed = derive_seed(seed, trial, 1);
    SplitMix64 rng1(derive_seed(seed, trial, 3));
    report.case1_false_positives += says_case2(generate(spec), rng1);
    spec.kind = GeneratorKind::kPromiseCase2;
    spec.seed = derive_seed(seed, trial, 2);
    SplitMix64 rng2(derive_seed(seed, trial, 4));
    report.case2_misses += !says_case2(generate(spec), rng2);
  }
  report.miss_rate = trials == 0 ? 1.0
                                 : static_cast<double>(report.case2_misses) /
                                       static_cast<double>(trials);
  report.case1_ok = report.case1_false_positives == 0;
  report.case2_ok = report.miss_rate <= report.bound + 3 * report.sigma;
  return report;
}

}  // namespace pickdrop
