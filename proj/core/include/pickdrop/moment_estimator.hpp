#ifndef PICKDROP_MOMENT_ESTIMATOR_HPP_
#define PICKDROP_MOMENT_ESTIMATOR_HPP_

#include <cstdint>
#include <vector>

#include "pickdrop/item_source.hpp"
#include "pickdrop/stream.hpp"

namespace pickdrop {

// Subsampling depth of an id: the number of leading zero bits of its seeded
// hash. Level j keeps exactly the ids of depth >= j, so inclusion has rate
// 2^-j and the levels are nested.
unsigned element_depth(ElementId id, std::uint64_t seed) noexcept;

bool level_substream(ElementId id, unsigned level, std::uint64_t seed) noexcept;

struct MomentConfig {
  std::uint64_t universe = 2;
  unsigned k = 3;
  double eps = 0.25;
  unsigned levels = 0;   // 0 picks ceil(log2(n / buckets)) + 3
  unsigned buckets = 32; // hash buckets per level, one heavy hitter each
  unsigned trials = 5;   // independent estimators; the median is returned
  double reps_constant = 2.0;
  std::size_t max_generations = 4;
  std::uint64_t seed = 0;
};

struct MomentReport {
  long double estimate = 0;
  std::vector<long double> trial_estimates;
  unsigned levels = 0;
  unsigned buckets = 0;
  std::uint64_t recovered = 0;       // distinct ids contributing, summed over trials
  std::uint64_t peak_live_runs = 0;  // summed over all level sketches
  std::uint64_t items = 0;
};

// Approximates F_k in one pass.
//
// Each trial hashes ids into nested subsampling levels and, within a level,
// into buckets. Every (level, bucket) substream runs its own heavy-hitter
// finder in doubling mode. An id recovered first at level j contributes
// 2^j * f~^k, where f~ is the recovered frequency lower bound; deeper
// recoveries of the same id are ignored. The median over trials is returned.
//
// This stands in for a recursive-sketch composition and carries no proven
// space/accuracy trade-off; its accuracy is measured empirically.
MomentReport estimate_fk(ItemSource& source, const MomentConfig& cfg);

}  // namespace pickdrop

#endif  // PICKDROP_MOMENT_ESTIMATOR_HPP_
