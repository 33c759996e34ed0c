#include "pickdrop/moment_estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <optional>
#include <unordered_set>

#include "pickdrop/error.hpp"
#include "pickdrop/heavy_hitter.hpp"
#include "pickdrop/random.hpp"

namespace pickdrop {

unsigned element_depth(ElementId id, std::uint64_t seed) noexcept {
  return static_cast<unsigned>(std::countl_zero(mix64(static_cast<std::uint64_t>(id) ^ seed)));
}

bool level_substream(ElementId id, unsigned level, std::uint64_t seed) noexcept {
  return element_depth(id, seed) >= level;
}

namespace {

unsigned auto_levels(std::uint64_t n, unsigned buckets) {
  const double ratio = static_cast<double>(n) / std::max(1u, buckets);
  const unsigned base = ratio > 1 ? static_cast<unsigned>(std::ceil(std::log2(ratio))) : 0;
  return std::min(base + 3, 63u);
}

// One independent estimator: levels x buckets heavy hitters, created on first use.
class LevelSketches {
 public:
  LevelSketches(const MomentConfig& cfg, unsigned levels, std::uint64_t trial)
      : cfg_(cfg),
        levels_(levels),
        level_seed_(derive_seed(cfg.seed, trial, 1)),
        bucket_seed_(derive_seed(cfg.seed, trial, 2)),
        run_seed_(derive_seed(cfg.seed, trial, 3)),
        sketches_(static_cast<std::size_t>(levels) * cfg.buckets) {}

  void push(ElementId x) {
    const unsigned depth = std::min(element_depth(x, level_seed_), levels_ - 1);
    const auto bucket = static_cast<unsigned>(mix64(x ^ bucket_seed_) % cfg_.buckets);
    for (unsigned level = 0; level <= depth; ++level) sketch(level, bucket).push(x);
  }

  std::uint64_t live_runs() const {
    std::uint64_t total = 0;
    for (const auto& s : sketches_) {
      if (s) total += s->live_runs();
    }
    return total;
  }

  // Sum over recovered ids of 2^level * f~^k at the shallowest level of recovery.
  long double finish(std::uint64_t& recovered) {
    std::unordered_set<ElementId> seen;
    long double total = 0;
    for (unsigned level = 0; level < levels_; ++level) {
      for (unsigned bucket = 0; bucket < cfg_.buckets; ++bucket) {
        auto& slot = sketches_[index(level, bucket)];
        if (!slot) continue;
        const Estimate e = slot->finish().estimate;
        slot.reset();
        if (e.is_sentinel() || !seen.insert(e.element).second) continue;
        total += std::ldexp(std::pow(static_cast<long double>(e.count), cfg_.k), level);
      }
    }
    recovered += seen.size();
    return total;
  }

 private:
  std::size_t index(unsigned level, unsigned bucket) const {
    return static_cast<std::size_t>(level) * cfg_.buckets + bucket;
  }

  HeavyHitter& sketch(unsigned level, unsigned bucket) {
    auto& slot = sketches_[index(level, bucket)];
    if (!slot) {
      HeavyHitterConfig hc;
      hc.universe = cfg_.universe;
      // Expected number of distinct ids reaching this bucket.
      const long double share =
          std::ldexp(static_cast<long double>(cfg_.universe), -static_cast<int>(level)) /
          cfg_.buckets;
      hc.effective_universe = std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::ceil(share)));
      hc.k = cfg_.k;
      hc.eps = cfg_.eps;
      hc.mode = LengthMode::kDoubling;
      hc.reps_constant = cfg_.reps_constant;
      hc.max_generations = cfg_.max_generations;
      hc.seed = derive_seed(run_seed_, level, bucket);
      slot.emplace(hc);
    }
    return *slot;
  }

  const MomentConfig& cfg_;
  unsigned levels_;
  std::uint64_t level_seed_;
  std::uint64_t bucket_seed_;
  std::uint64_t run_seed_;
  std::vector<std::optional<HeavyHitter>> sketches_;
};

long double median(std::vector<long double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2;
}

}  // namespace

MomentReport estimate_fk(ItemSource& source, const MomentConfig& cfg) {
  if (cfg.k < 3) throw Error(ErrorKind::kUsage, "moment order must be at least 3");
  if (!(cfg.eps > 0 && cfg.eps < 1)) throw Error(ErrorKind::kUsage, "eps must lie in (0, 1)");
  if (cfg.trials == 0) throw Error(ErrorKind::kUsage, "need at least one trial");
  if (cfg.buckets == 0) throw Error(ErrorKind::kUsage, "need at least one bucket per level");
  if (cfg.universe == 0) throw Error(ErrorKind::kUsage, "universe size must be positive");

  MomentReport report;
  report.levels = cfg.levels > 0 ? std::min(cfg.levels, 64u) : auto_levels(cfg.universe, cfg.buckets);
  report.buckets = cfg.buckets;

  std::vector<LevelSketches> trials;
  trials.reserve(cfg.trials);
  for (unsigned t = 0; t < cfg.trials; ++t) trials.emplace_back(cfg, report.levels, t);

  std::vector<ElementId> buffer(kSourceBlock);
  while (true) {
    const std::size_t got = source.fill(buffer);
    if (got == 0) break;
    for (std::size_t i = 0; i < got; ++i) {
      const ElementId x = buffer[i];
      if (x == kSentinel || x > cfg.universe) {
        throw Error(ErrorKind::kFormat, "item " + std::to_string(x) + " outside the universe");
      }
      for (auto& t : trials) t.push(x);
    }
    report.items += got;
  }

  for (auto& t : trials) {
    report.peak_live_runs += t.live_runs();
    report.trial_estimates.push_back(t.finish(report.recovered));
  }
  report.estimate = median(report.trial_estimates);
  return report;
}

}  // namespace pickdrop
