#include "pickdrop/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>
#include <vector>

#include "pickdrop/error.hpp"
#include "pickdrop/random.hpp"

namespace pickdrop {
namespace {

constexpr std::pair<GeneratorKind, std::string_view> kKindNames[] = {
    {GeneratorKind::kPlantedHeavy, "planted-heavy"},
    {GeneratorKind::kZipf, "zipf"},
    {GeneratorKind::kUniformDistinct, "uniform-distinct"},
    {GeneratorKind::kAllEqual, "all-equal"},
    {GeneratorKind::kPromiseCase1, "promise-case1"},
    {GeneratorKind::kPromiseCase2, "promise-case2"},
    {GeneratorKind::kAdversarialPlacement, "adversarial-placement"},
};

constexpr std::pair<Placement, std::string_view> kPlacementNames[] = {
    {Placement::kUniformRows, "uniform-rows"},
    {Placement::kBurstyPrefix, "bursty-prefix"},
    {Placement::kRandom, "random"},
};

// Fisher-Yates with our own bounded draw; std::shuffle's output differs
// between standard libraries.
template <class T>
void shuffle(std::vector<T>& v, SplitMix64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::swap(v[i - 1], v[uniform_below(rng, i)]);
  }
}

std::vector<bool> heavy_positions(std::uint64_t length, std::uint64_t heavy, Placement placement,
                                  SplitMix64& rng) {
  std::vector<bool> mask(length, false);
  switch (placement) {
    case Placement::kBurstyPrefix:
      std::fill_n(mask.begin(), heavy, true);
      break;
    case Placement::kUniformRows:
      // Evenly spaced; length / heavy >= 1 keeps the positions distinct.
      for (std::uint64_t i = 0; i < heavy; ++i) {
        const auto pos = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(2 * i + 1) * length) / (2 * heavy));
        mask[pos] = true;
      }
      break;
    case Placement::kRandom: {
      std::vector<std::uint64_t> idx(length);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::uint64_t i = 0; i < heavy; ++i) {
        std::swap(idx[i], idx[i + uniform_below(rng, length - i)]);
        mask[idx[i]] = true;
      }
      break;
    }
  }
  return mask;
}

Stream planted_heavy(const GeneratorSpec& spec, Placement placement, SplitMix64& rng) {
  const std::uint64_t m = spec.length;
  const std::uint64_t f = spec.heavy_frequency;
  if (f == 0 || f > m) throw Error(ErrorKind::kUsage, "heavy frequency must lie in [1, length]");
  const std::uint64_t rest = m - f;
  if (rest > 0 && spec.universe < 2) {
    throw Error(ErrorKind::kUsage, "planted stream needs a universe of at least 2");
  }
  std::vector<ElementId> others;
  others.reserve(rest);
  if (rest > 0) {
    const std::uint64_t ids = spec.universe - 1;
    const std::uint64_t base = rest / ids;
    const std::uint64_t extra = rest % ids;
    for (std::uint64_t i = 0; i < ids; ++i) {
      const std::uint64_t copies = base + (i < extra ? 1 : 0);
      others.insert(others.end(), copies, static_cast<ElementId>(i + 2));
    }
    shuffle(others, rng);
  }
  const auto mask = heavy_positions(m, f, placement, rng);
  std::vector<ElementId> items(m);
  std::size_t next = 0;
  for (std::uint64_t pos = 0; pos < m; ++pos) items[pos] = mask[pos] ? kPlantedId : others[next++];
  return Stream(std::move(items), spec.universe);
}

Stream zipf(const GeneratorSpec& spec, SplitMix64& rng) {
  if (spec.zipf_exponent <= 0) throw Error(ErrorKind::kUsage, "zipf exponent must be positive");
  std::vector<double> cdf(spec.universe);
  double total = 0;
  for (std::uint64_t i = 0; i < spec.universe; ++i) {
    total += std::pow(static_cast<double>(i + 1), -spec.zipf_exponent);
    cdf[i] = total;
  }
  std::vector<ElementId> items(spec.length);
  for (auto& x : items) {
    const double u = uniform_unit(rng) * total;
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    x = static_cast<ElementId>(std::min<std::ptrdiff_t>(it - cdf.begin(), cdf.size() - 1) + 1);
  }
  return Stream(std::move(items), spec.universe);
}

Stream uniform_distinct(const GeneratorSpec& spec, SplitMix64& rng) {
  if (spec.length > spec.universe) {
    throw Error(ErrorKind::kUsage, "cannot draw more distinct ids than the universe holds");
  }
  std::vector<ElementId> items;
  items.reserve(spec.length);
  if (spec.universe <= 4 * spec.length) {
    std::vector<ElementId> all(spec.universe);
    std::iota(all.begin(), all.end(), ElementId{1});
    shuffle(all, rng);
    items.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(spec.length));
  } else {
    std::unordered_set<ElementId> used;
    while (items.size() < spec.length) {
      const auto x = static_cast<ElementId>(uniform_below(rng, spec.universe) + 1);
      if (used.insert(x).second) items.push_back(x);
    }
  }
  return Stream(std::move(items), spec.universe);
}

Stream promise(const GeneratorSpec& spec, bool plant, SplitMix64& rng) {
  const PromiseShape shape = promise_shape(spec.universe, spec.k);
  const std::uint64_t m = shape.rows * shape.cols;
  const std::uint64_t fillers = plant ? m - shape.rows : m;
  std::vector<ElementId> ids(fillers);
  std::iota(ids.begin(), ids.end(), static_cast<ElementId>(plant ? 2 : 1));
  shuffle(ids, rng);
  std::vector<ElementId> items(m);
  std::size_t next = 0;
  for (std::uint64_t row = 0; row < shape.rows; ++row) {
    const std::uint64_t z = plant ? uniform_below(rng, shape.cols) : shape.cols;
    for (std::uint64_t col = 0; col < shape.cols; ++col) {
      items[row * shape.cols + col] = col == z ? kPlantedId : ids[next++];
    }
  }
  return Stream(std::move(items), spec.universe);
}

}  // namespace

std::string_view to_string(GeneratorKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::string_view to_string(Placement placement) {
  for (const auto& [p, name] : kPlacementNames) {
    if (p == placement) return name;
  }
  return "unknown";
}

std::optional<GeneratorKind> parse_generator_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

std::optional<Placement> parse_placement(std::string_view name) {
  for (const auto& [p, n] : kPlacementNames) {
    if (n == name) return p;
  }
  return std::nullopt;
}

PromiseShape promise_shape(std::uint64_t n, unsigned k) {
  if (n < 2 || k < 1) throw Error(ErrorKind::kUsage, "promise matrix needs n >= 2 and k >= 1");
  // Smallest r with r^k >= n, computed without floating point.
  auto reaches = [&](std::uint64_t r) {
    unsigned __int128 p = 1;
    for (unsigned i = 0; i < k; ++i) {
      p *= r;
      if (p >= n) return true;
    }
    return p >= n;
  };
  std::uint64_t rows = 1;
  while (!reaches(rows)) ++rows;
  return {rows, n / rows};
}

Stream generate(const GeneratorSpec& spec) {
  if (spec.universe == 0) throw Error(ErrorKind::kUsage, "universe size must be positive");
  SplitMix64 rng(derive_seed(spec.seed, static_cast<std::uint64_t>(spec.kind)));
  switch (spec.kind) {
    case GeneratorKind::kPlantedHeavy:
      return planted_heavy(spec, spec.placement, rng);
    case GeneratorKind::kAdversarialPlacement:
      return planted_heavy(spec, Placement::kBurstyPrefix, rng);
    case GeneratorKind::kZipf:
      return zipf(spec, rng);
    case GeneratorKind::kUniformDistinct:
      return uniform_distinct(spec, rng);
    case GeneratorKind::kAllEqual:
      return Stream(std::vector<ElementId>(spec.length, kPlantedId), spec.universe);
    case GeneratorKind::kPromiseCase1:
      return promise(spec, false, rng);
    case GeneratorKind::kPromiseCase2:
      return promise(spec, true, rng);
  }
  throw Error(ErrorKind::kUsage, "unknown generator kind");
}

Stream planted_matrix(std::uint64_t rows, std::uint64_t cols, std::uint64_t heavy,
                      Placement placement, std::uint64_t seed) {
  const std::uint64_t m = rows * cols;
  if (rows == 0 || cols == 0 || heavy == 0 || heavy > m) {
    throw Error(ErrorKind::kUsage, "planted matrix needs 1 <= heavy <= rows * cols");
  }
  SplitMix64 rng(derive_seed(seed, rows, cols, heavy));
  std::vector<bool> mask(m, false);
  if (placement == Placement::kUniformRows) {
    // Spread the heavy cells over the rows as evenly as possible, random
    // columns within each row.
    for (std::uint64_t row = 0; row < rows; ++row) {
      const std::uint64_t here = heavy / rows + (row < heavy % rows ? 1 : 0);
      if (here > cols) throw Error(ErrorKind::kUsage, "too many heavy cells per row");
      std::vector<std::uint64_t> idx(cols);
      std::iota(idx.begin(), idx.end(), 0);
      for (std::uint64_t i = 0; i < here; ++i) {
        std::swap(idx[i], idx[i + uniform_below(rng, cols - i)]);
        mask[row * cols + idx[i]] = true;
      }
    }
  } else {
    mask = heavy_positions(m, heavy, placement, rng);
  }
  std::vector<ElementId> items(m);
  ElementId next = 2;
  for (std::uint64_t pos = 0; pos < m; ++pos) items[pos] = mask[pos] ? kPlantedId : next++;
  return Stream(std::move(items), std::max<std::uint64_t>(1, next - 1));
}

}  // namespace pickdrop
