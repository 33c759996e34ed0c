#include "pickdrop/heavy_hitter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pickdrop/error.hpp"
#include "pickdrop/misra_gries.hpp"
#include "pickdrop/parallel.hpp"
#include "pickdrop/pick_drop.hpp"
#include "pickdrop/random.hpp"

namespace pickdrop {

std::string_view to_string(LengthMode mode) {
  return mode == LengthMode::kKnown ? "known-length" : "doubling";
}

Estimate better(const Estimate& a, const Estimate& b) noexcept {
  if (a.is_sentinel()) return b;
  if (b.is_sentinel()) return a;
  if (a.count != b.count) return a.count > b.count ? a : b;
  return a.element <= b.element ? a : b;
}

Estimate aggregate(std::span<const Estimate> candidates) {
  if (candidates.empty()) throw Error(ErrorKind::kUsage, "no candidates to aggregate");
  Estimate best;
  for (const auto& c : candidates) best = better(best, c);
  return best;
}

namespace {

// T(delta) runs sharing one row width; the row position is common to all of
// them, so items are streamed row segment by row segment.
class RunGroup {
 public:
  RunGroup(const ParamSet& params, std::uint64_t seed) : params_(params) {
    states_.resize(params.reps);
    rngs_.reserve(params.reps);
    for (std::uint64_t r = 0; r < params.reps; ++r) rngs_.emplace_back(derive_seed(seed, r));
  }

  void push(std::span<const ElementId> items) {
    const std::uint64_t cols = params_.cols;
    std::size_t i = 0;
    while (i < items.size()) {
      if (pos_ == 0) begin_row();
      const std::size_t seg = static_cast<std::size_t>(
          std::min<std::uint64_t>(items.size() - i, cols - pos_));
      const ElementId* segment = items.data() + i;
      for (auto& s : states_) {
        for (std::size_t j = 0; j < seg; ++j) s.observe(segment[j], pos_ + j);
      }
      pos_ += seg;
      i += seg;
      if (pos_ == cols) end_row();
    }
  }

  // Completes a partial last row with padding cells.
  void pad() {
    if (pos_ == 0) return;
    const std::uint64_t remaining = params_.cols - pos_;
    for (auto& s : states_) {
      for (std::uint64_t j = 0; j < remaining; ++j) s.observe(kSentinel, pos_ + j);
    }
    end_row();
  }

  Estimate best() const {
    Estimate best;
    for (const auto& s : states_) best = better(best, s.estimate());
    return best;
  }

  std::uint64_t failed() const {
    return static_cast<std::uint64_t>(
        std::count_if(states_.begin(), states_.end(), [](const auto& s) { return s.failed; }));
  }

  std::size_t size() const noexcept { return states_.size(); }
  std::uint64_t rows_completed() const noexcept { return row_; }
  const ParamSet& params() const noexcept { return params_; }

 private:
  void begin_row() {
    for (std::size_t r = 0; r < states_.size(); ++r) {
      states_[r].begin_row(uniform_below(rngs_[r], params_.cols));
    }
  }

  void end_row() {
    for (auto& s : states_) s.end_row(params_.lambda);
    pos_ = 0;
    ++row_;
  }

  ParamSet params_;
  std::vector<PickDropState> states_;
  std::vector<SplitMix64> rngs_;
  std::uint64_t pos_ = 0;
  std::uint64_t row_ = 0;
};

struct Generation {
  std::uint64_t length = 0;  // F_1 the parameters assume
  std::uint64_t start = 0;
  std::vector<RunGroup> groups;
  bool frozen = false;
  std::vector<InstanceSummary> frozen_summaries;
};

}  // namespace

struct HeavyHitter::Impl {
  HeavyHitterConfig cfg;
  std::uint64_t universe;
  std::vector<std::uint64_t> grid;
  std::vector<Generation> generations;
  std::optional<MisraGries> fallback;
  std::uint64_t items = 0;
  std::uint64_t started_runs = 0;
  std::uint64_t peak_live = 0;
  bool finished = false;

  explicit Impl(const HeavyHitterConfig& c)
      : cfg(c),
        universe(std::max<std::uint64_t>(
            2, c.effective_universe > 0 ? c.effective_universe : c.universe)) {
    if (!(cfg.eps > 0 && cfg.eps < 1)) throw Error(ErrorKind::kUsage, "eps must lie in (0, 1)");
    if (cfg.k < 3) throw Error(ErrorKind::kUsage, "moment order must be at least 3");
    if (cfg.reps_constant <= 0) throw Error(ErrorKind::kUsage, "repetition constant must be positive");
    if (cfg.lambda && *cfg.lambda == 0) throw Error(ErrorKind::kUsage, "lambda must be positive");
    if (cfg.cols && *cfg.cols == 0) throw Error(ErrorKind::kUsage, "t must be positive");
    grid = cfg.delta ? std::vector<std::uint64_t>{*cfg.delta} : delta_grid(universe, cfg.k);
    if (cfg.fallback) {
      fallback.emplace(static_cast<std::size_t>(std::ceil(10.0 / cfg.eps)));
    }
    if (cfg.mode == LengthMode::kKnown && cfg.length > 0) open_generation(cfg.length);
  }

  ParamSet instance_params(std::uint64_t length, std::uint64_t delta) const {
    ParamSet p = params_for_delta(universe, cfg.k, length, delta,
                                  RepetitionPolicy{cfg.eps, cfg.reps_constant});
    if (cfg.cols) {
      p.cols = *cfg.cols;
      p.cols_clamped = false;
      p.rows = std::max<std::uint64_t>(1, (length + p.cols - 1) / p.cols);
      p.padding = p.rows * p.cols - length;
    }
    if (cfg.lambda) p.lambda = *cfg.lambda;
    return p;
  }

  void open_generation(std::uint64_t length) {
    Generation gen;
    gen.length = length;
    gen.start = items;
    const std::uint64_t index = generations.size();
    for (std::size_t d = 0; d < grid.size(); ++d) {
      gen.groups.emplace_back(instance_params(length, grid[d]), derive_seed(cfg.seed, index, d));
      started_runs += gen.groups.back().size();
    }
    generations.push_back(std::move(gen));
    if (cfg.max_generations > 0) {
      std::size_t live = 0;
      for (auto it = generations.rbegin(); it != generations.rend(); ++it) {
        if (it->frozen) continue;
        if (++live > cfg.max_generations) freeze(*it);
      }
    }
    peak_live = std::max(peak_live, live_runs());
  }

  // Keeps only the summaries; the run state is released. States snapshot at
  // their last completed row, which is still a valid lower bound.
  void freeze(Generation& gen) {
    gen.frozen_summaries = summarize(gen);
    gen.groups.clear();
    gen.groups.shrink_to_fit();
    gen.frozen = true;
  }

  static std::vector<InstanceSummary> summarize(const Generation& gen) {
    std::vector<InstanceSummary> out;
    for (const auto& g : gen.groups) {
      out.push_back({gen.length, gen.start, g.params(), g.best(), g.failed()});
    }
    return out;
  }

  std::uint64_t live_runs() const {
    std::uint64_t total = 0;
    for (const auto& gen : generations) {
      for (const auto& g : gen.groups) total += g.size();
    }
    return total;
  }

  void feed(std::span<const ElementId> items_block) {
    for (ElementId x : items_block) {
      if (x == kSentinel || x > cfg.universe) {
        throw Error(ErrorKind::kFormat, "item " + std::to_string(x) + " outside the universe");
      }
    }
    if (fallback) {
      for (ElementId x : items_block) fallback->push(x);
    }
    if (cfg.threads <= 1 || items_block.size() < 1024) {
      for (auto& gen : generations) {
        for (auto& g : gen.groups) g.push(items_block);
      }
    } else {
      std::vector<RunGroup*> groups;
      for (auto& gen : generations) {
        for (auto& g : gen.groups) groups.push_back(&g);
      }
      parallel_chunks(groups.size(), cfg.threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) groups[i]->push(items_block);
      });
    }
    items += items_block.size();
  }

  void push(std::span<const ElementId> block) {
    if (finished) throw Error(ErrorKind::kUsage, "heavy hitter already finished");
    if (cfg.mode == LengthMode::kKnown) {
      feed(block);
      return;
    }
    std::size_t i = 0;
    while (i < block.size()) {
      // Generation g covers guesses up to 2^g; the next one opens at item 2^g.
      if (generations.empty()) {
        open_generation(1);
      } else if (items >= generations.back().length) {
        open_generation(generations.back().length * 2);
      }
      const std::uint64_t room = generations.back().length - items;
      const std::size_t take =
          static_cast<std::size_t>(std::min<std::uint64_t>(room, block.size() - i));
      feed(block.subspan(i, take));
      i += take;
    }
  }

  HeavyReport finish() {
    if (finished) throw Error(ErrorKind::kUsage, "heavy hitter already finished");
    finished = true;
    if (cfg.mode == LengthMode::kKnown && items != cfg.length) {
      throw Error(ErrorKind::kDimension, "declared length " + std::to_string(cfg.length) +
                                             " but the stream held " + std::to_string(items));
    }
    HeavyReport report;
    report.mode = cfg.mode;
    report.items = items;
    report.repetitions = started_runs;
    report.peak_live_runs = peak_live;
    for (auto& gen : generations) {
      if (gen.frozen) {
        report.instances.insert(report.instances.end(), gen.frozen_summaries.begin(),
                                gen.frozen_summaries.end());
        continue;
      }
      for (auto& g : gen.groups) g.pad();
      auto summaries = summarize(gen);
      report.instances.insert(report.instances.end(), summaries.begin(), summaries.end());
    }
    Estimate best;
    for (const auto& inst : report.instances) best = better(best, inst.best);
    if (fallback) {
      report.fallback = fallback->best();
      report.fallback_counters = fallback->capacity();
      best = better(best, report.fallback);
    }
    report.estimate = best;
    return report;
  }
};

HeavyHitter::HeavyHitter(const HeavyHitterConfig& cfg) : impl_(std::make_unique<Impl>(cfg)) {}
HeavyHitter::~HeavyHitter() = default;
HeavyHitter::HeavyHitter(HeavyHitter&&) noexcept = default;
HeavyHitter& HeavyHitter::operator=(HeavyHitter&&) noexcept = default;

void HeavyHitter::push(ElementId x) { impl_->push(std::span<const ElementId>(&x, 1)); }
void HeavyHitter::push(std::span<const ElementId> items) { impl_->push(items); }
std::uint64_t HeavyHitter::live_runs() const { return impl_->live_runs(); }
HeavyReport HeavyHitter::finish() { return impl_->finish(); }

HeavyReport find_heavy(ItemSource& source, const HeavyHitterConfig& cfg) {
  HeavyHitter hh(cfg);
  std::vector<ElementId> buffer(kSourceBlock);
  while (true) {
    const std::size_t got = source.fill(buffer);
    if (got == 0) break;
    hh.push(std::span<const ElementId>(buffer.data(), got));
  }
  return hh.finish();
}

HeavyReport find_heavy_doubling(ItemSource& source, HeavyHitterConfig cfg) {
  cfg.mode = LengthMode::kDoubling;
  return find_heavy(source, cfg);
}

}  // namespace pickdrop
