#ifndef PICKDROP_GENERATORS_HPP_
#define PICKDROP_GENERATORS_HPP_

#include <cstdint>
#include <optional>
#include <string_view>

#include "pickdrop/stream.hpp"

namespace pickdrop {

enum class GeneratorKind {
  kPlantedHeavy,
  kZipf,
  kUniformDistinct,
  kAllEqual,
  kPromiseCase1,
  kPromiseCase2,
  kAdversarialPlacement,
};

enum class Placement { kUniformRows, kBurstyPrefix, kRandom };

std::string_view to_string(GeneratorKind kind);
std::string_view to_string(Placement placement);
std::optional<GeneratorKind> parse_generator_kind(std::string_view name);
std::optional<Placement> parse_placement(std::string_view name);

// The heavy element planted by the planted-heavy families is always id 1.
inline constexpr ElementId kPlantedId = 1;

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kPlantedHeavy;
  std::uint64_t universe = 256;
  std::uint64_t length = 4096;
  std::uint64_t heavy_frequency = 0;
  double zipf_exponent = 1.5;
  Placement placement = Placement::kUniformRows;
  unsigned k = 3;  // promise families size their rows as ceil(n^(1/k))
  std::uint64_t seed = 0;
};

// Family semantics:
//   planted-heavy     id 1 occurs heavy_frequency times at positions chosen by
//                     `placement`; ids 2..n share the remaining slots as evenly
//                     as possible, in random order.
//   adversarial-placement
//                     planted-heavy with every heavy occurrence packed into the
//                     leading rows.
//   zipf              `length` i.i.d. draws with P(i) proportional to i^-s.
//   uniform-distinct  `length` distinct ids drawn from [1, n].
//   all-equal         `length` copies of id 1.
//   promise-case1/2   r = ceil(n^(1/k)) rows of t = floor(n / r) columns; all
//                     ids distinct, except that case 2 puts id 1 exactly once
//                     in every row. `length` is ignored.
//
// Throws ErrorKind::kUsage for inconsistent specs.
Stream generate(const GeneratorSpec& spec);

struct PromiseShape {
  std::uint64_t rows;
  std::uint64_t cols;
};

PromiseShape promise_shape(std::uint64_t n, unsigned k);

// A matrix with r rows and t columns in which id 1 occurs `heavy` times at
// positions chosen by `placement` and every other cell holds a distinct id.
// The universe is exactly the set of ids used.
Stream planted_matrix(std::uint64_t rows, std::uint64_t cols, std::uint64_t heavy,
                      Placement placement, std::uint64_t seed);

}  // namespace pickdrop

#endif  // PICKDROP_GENERATORS_HPP_
