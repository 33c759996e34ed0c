#ifndef PICKDROP_HEAVY_HITTER_HPP_
#define PICKDROP_HEAVY_HITTER_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pickdrop/item_source.hpp"
#include "pickdrop/params.hpp"
#include "pickdrop/stream.hpp"

namespace pickdrop {

enum class LengthMode { kKnown, kDoubling };

std::string_view to_string(LengthMode mode);

struct HeavyHitterConfig {
  std::uint64_t universe = 2;
  // Universe size used in the parameter formulas when the input is a
  // substream known to touch far fewer ids than `universe`. 0: use `universe`.
  std::uint64_t effective_universe = 0;
  unsigned k = 3;
  double eps = 0.25;
  LengthMode mode = LengthMode::kDoubling;
  std::uint64_t length = 0;  // F_1; required in known-length mode
  double reps_constant = 4.0;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  // Run a Misra-Gries summary next to the sampler for the regimes it does not
  // cover (an element above a tenth of the stream, or t > F_1).
  bool fallback = true;
  // Overrides. `delta` replaces the whole grid with a single scale.
  std::optional<std::uint64_t> delta;
  std::optional<std::uint64_t> lambda;
  std::optional<std::uint64_t> cols;
  // Doubling mode: number of most recent generations kept live; older ones
  // are frozen at their current state. 0 keeps all of them.
  std::size_t max_generations = 0;
};

// Commutative, associative max: larger count wins, smaller id breaks ties,
// sentinels lose to everything.
Estimate better(const Estimate& a, const Estimate& b) noexcept;

// Throws ErrorKind::kUsage on an empty candidate list.
Estimate aggregate(std::span<const Estimate> candidates);

// One delta scale within one length generation: its parameters and the best
// estimate over its repetitions.
struct InstanceSummary {
  std::uint64_t generation_length = 0;
  std::uint64_t start = 0;  // stream position the instance started at
  ParamSet params;
  Estimate best;
  std::uint64_t failed_runs = 0;  // runs that sampled a padding cell
};

struct HeavyReport {
  Estimate estimate;
  LengthMode mode = LengthMode::kDoubling;
  std::uint64_t items = 0;
  std::vector<InstanceSummary> instances;
  Estimate fallback;
  std::uint64_t repetitions = 0;    // pick-and-drop runs started over the whole pass
  std::uint64_t peak_live_runs = 0;
  std::size_t fallback_counters = 0;
};

// Single-pass heavy-element finder. Every delta on the grid gets T(delta)
// independent pick-and-drop runs fed the same items; the answer is the
// largest lower bound seen. Reported counts never exceed the true frequency.
//
// Known-length mode derives all parameters from the declared F_1 up front.
// Doubling mode starts generation g with parameters for length 2^g once 2^(g-1)
// items have been seen (generation 0 at the first item); earlier generations
// keep running with their original parameters, and the answer is the max over
// all of them.
class HeavyHitter {
 public:
  explicit HeavyHitter(const HeavyHitterConfig& cfg);
  ~HeavyHitter();
  HeavyHitter(HeavyHitter&&) noexcept;
  HeavyHitter& operator=(HeavyHitter&&) noexcept;

  void push(ElementId x);
  void push(std::span<const ElementId> items);

  // Pick-and-drop run states currently allocated.
  std::uint64_t live_runs() const;

  // Pads partial rows and aggregates. In known-length mode throws
  // ErrorKind::kDimension if the item count differs from cfg.length.
  HeavyReport finish();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

HeavyReport find_heavy(ItemSource& source, const HeavyHitterConfig& cfg);

// find_heavy with the mode forced to doubling.
HeavyReport find_heavy_doubling(ItemSource& source, HeavyHitterConfig cfg);

}  // namespace pickdrop

#endif  // PICKDROP_HEAVY_HITTER_HPP_
