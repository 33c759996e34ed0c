#include "pickdrop/stream.hpp"

#include <algorithm>
#include <limits>
#include <unordered_map>

#include "pickdrop/error.hpp"

namespace pickdrop {

std::string to_string(Wide value) {
  if (value == 0) return "0";
  std::string digits;
  while (value != 0) {
    digits.push_back(static_cast<char>('0' + static_cast<int>(value % 10)));
    value /= 10;
  }
  std::reverse(digits.begin(), digits.end());
  return digits;
}

long double to_long_double(Wide value) {
  const auto high = static_cast<std::uint64_t>(value >> 64);
  const auto low = static_cast<std::uint64_t>(value);
  return static_cast<long double>(high) * 18446744073709551616.0L + static_cast<long double>(low);
}

Stream::Stream(std::vector<ElementId> items, std::uint64_t universe)
    : items_(std::move(items)), universe_(universe) {
  if (universe_ == 0) throw Error(ErrorKind::kFormat, "universe size must be at least 1");
  for (std::size_t pos = 0; pos < items_.size(); ++pos) {
    const ElementId x = items_[pos];
    if (x == kSentinel || x > universe_) {
      throw Error(ErrorKind::kFormat, "item " + std::to_string(x) + " at position " +
                                          std::to_string(pos) + " is outside [1, " +
                                          std::to_string(universe_) + "]");
    }
  }
}

Stream Stream::with_inferred_universe(std::vector<ElementId> items) {
  ElementId max_id = 1;
  for (ElementId x : items) max_id = std::max(max_id, x);
  return Stream(std::move(items), max_id);
}

MatrixOverlay::MatrixOverlay(std::span<const ElementId> items, std::uint64_t rows,
                             std::uint64_t cols)
    : items_(items), rows_(rows), cols_(cols) {
  if (rows_ == 0 || cols_ == 0) {
    throw Error(ErrorKind::kDimension, "matrix overlay needs at least one row and column");
  }
  if (cols_ > std::numeric_limits<std::uint64_t>::max() / rows_ || rows_ * cols_ < items_.size()) {
    throw Error(ErrorKind::kDimension, "matrix overlay " + std::to_string(rows_) + "x" +
                                           std::to_string(cols_) + " cannot hold " +
                                           std::to_string(items_.size()) + " items");
  }
}

MatrixOverlay MatrixOverlay::with_columns(std::span<const ElementId> items, std::uint64_t cols) {
  if (cols == 0) throw Error(ErrorKind::kDimension, "column count must be positive");
  const std::uint64_t rows = std::max<std::uint64_t>(1, (items.size() + cols - 1) / cols);
  return MatrixOverlay(items, rows, cols);
}

ElementId MatrixOverlay::at(std::uint64_t row, std::uint64_t col) const {
  if (row < 1 || row > rows_ || col < 1 || col > cols_) {
    throw Error(ErrorKind::kDimension, "cell (" + std::to_string(row) + ", " +
                                           std::to_string(col) + ") outside " +
                                           std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  return cell((row - 1) * cols_ + (col - 1));
}

std::uint64_t suffix_count(const MatrixOverlay& overlay, std::uint64_t row, std::uint64_t col) {
  const ElementId value = overlay.at(row, col);
  std::uint64_t count = 0;
  for (std::uint64_t j = col; j <= overlay.cols(); ++j) {
    if (overlay.at(row, j) == value) ++count;
  }
  return count;
}

std::uint64_t row_frequency(const MatrixOverlay& overlay, ElementId element, std::uint64_t row) {
  std::uint64_t count = 0;
  for (std::uint64_t j = 1; j <= overlay.cols(); ++j) {
    if (overlay.at(row, j) == element) ++count;
  }
  return count;
}

FrequencyVector frequency_vector(const Stream& stream) {
  std::unordered_map<ElementId, std::uint64_t> counts;
  for (ElementId x : stream.items()) ++counts[x];
  FrequencyVector freqs(counts.begin(), counts.end());
  std::sort(freqs.begin(), freqs.end());
  return freqs;
}

Wide checked_pow(std::uint64_t base, unsigned k) {
  Wide result = 1;
  for (unsigned i = 0; i < k; ++i) {
    if (__builtin_mul_overflow(result, static_cast<Wide>(base), &result)) {
      throw Error(ErrorKind::kOverflow, std::to_string(base) + "^" + std::to_string(k) +
                                            " exceeds 128-bit range");
    }
  }
  return result;
}

ExactStats::ExactStats(const Stream& stream)
    : freqs_(frequency_vector(stream)), universe_(stream.universe()), length_(stream.size()) {}

std::uint64_t ExactStats::frequency(ElementId element) const {
  auto it = std::lower_bound(freqs_.begin(), freqs_.end(), element,
                             [](const auto& entry, ElementId id) { return entry.first < id; });
  return it != freqs_.end() && it->first == element ? it->second : 0;
}

ElementId ExactStats::most_frequent() const {
  ElementId best = kSentinel;
  std::uint64_t best_count = 0;
  for (const auto& [id, count] : freqs_) {
    if (count > best_count) {
      best = id;
      best_count = count;
    }
  }
  return best;
}

Wide ExactStats::moment(unsigned k) const {
  if (k == 0) throw Error(ErrorKind::kUsage, "moment order must be at least 1");
  Wide total = 0;
  for (const auto& entry : freqs_) {
    if (__builtin_add_overflow(total, checked_pow(entry.second, k), &total)) {
      throw Error(ErrorKind::kOverflow, "F_" + std::to_string(k) + " exceeds 128-bit range");
    }
  }
  return total;
}

Wide ExactStats::residual_moment(unsigned k, ElementId excluded) const {
  return moment(k) - checked_pow(frequency(excluded), k);
}

bool ExactStats::is_heavy(ElementId element, unsigned k) const {
  const Wide own = checked_pow(frequency(element), k);
  const Wide rest = residual_moment(k, element);
  if (rest > (~Wide{0}) / 100) return false;
  return own > 100 * rest;
}

}  // namespace pickdrop
