#ifndef PICKDROP_STREAM_HPP_
#define PICKDROP_STREAM_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pickdrop {

// Element ids live in [1, n]. Id 0 is reserved for padding cells.
using ElementId = std::uint32_t;
inline constexpr ElementId kSentinel = 0;

// Exact moments are kept in 128 bits; overflow raises ErrorKind::kOverflow.
using Wide = unsigned __int128;

std::string to_string(Wide value);
long double to_long_double(Wide value);

// An element together with a lower bound on its frequency.
struct Estimate {
  ElementId element = kSentinel;
  std::uint64_t count = 0;

  bool is_sentinel() const noexcept { return element == kSentinel; }

  friend bool operator==(const Estimate&, const Estimate&) = default;
  friend auto operator<=>(const Estimate&, const Estimate&) = default;
};

// Owning, validated insertion-only stream over the universe [1, n].
class Stream {
 public:
  Stream() = default;
  // Throws ErrorKind::kFormat if an item falls outside [1, universe].
  Stream(std::vector<ElementId> items, std::uint64_t universe);

  // Universe size taken as the largest id (at least 1).
  static Stream with_inferred_universe(std::vector<ElementId> items);

  std::span<const ElementId> items() const noexcept { return items_; }
  std::uint64_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

 private:
  std::vector<ElementId> items_;
  std::uint64_t universe_ = 1;
};

// Row-major r x t view over a stream: cell (i, j), 1-based, is item
// (i - 1) * t + j. Cells past the end of the stream are sentinel padding,
// so the last row may be partially padded. Non-owning.
class MatrixOverlay {
 public:
  // Requires rows, cols >= 1 and rows * cols >= items.size().
  MatrixOverlay(std::span<const ElementId> items, std::uint64_t rows, std::uint64_t cols);

  // Smallest row count that covers the items with the given column count.
  static MatrixOverlay with_columns(std::span<const ElementId> items, std::uint64_t cols);

  std::uint64_t rows() const noexcept { return rows_; }
  std::uint64_t cols() const noexcept { return cols_; }
  std::uint64_t padded_size() const noexcept { return rows_ * cols_; }
  std::uint64_t padding() const noexcept { return padded_size() - items_.size(); }
  std::span<const ElementId> items() const noexcept { return items_; }

  // 1-based cell access; throws ErrorKind::kDimension when out of range.
  ElementId at(std::uint64_t row, std::uint64_t col) const;

  // 0-based flat access over the padded sequence (no bounds check).
  ElementId cell(std::uint64_t flat) const noexcept {
    return flat < items_.size() ? items_[flat] : kSentinel;
  }

 private:
  std::span<const ElementId> items_;
  std::uint64_t rows_;
  std::uint64_t cols_;
};

// d_{i,j}: occurrences of cell (i, j)'s value in row i at columns >= j.
std::uint64_t suffix_count(const MatrixOverlay& overlay, std::uint64_t row, std::uint64_t col);

// f_{l,i}: occurrences of `element` in row i.
std::uint64_t row_frequency(const MatrixOverlay& overlay, ElementId element, std::uint64_t row);

using FrequencyVector = std::vector<std::pair<ElementId, std::uint64_t>>;

// Exact multiplicities sorted by id; absent ids are omitted.
FrequencyVector frequency_vector(const Stream& stream);

// Ground truth for a stream. Holds O(distinct) state, so it belongs to
// tests, generators and reports rather than the streaming path.
class ExactStats {
 public:
  ExactStats() = default;
  explicit ExactStats(const Stream& stream);

  std::uint64_t universe() const noexcept { return universe_; }
  std::uint64_t length() const noexcept { return length_; }
  std::size_t distinct() const noexcept { return freqs_.size(); }
  const FrequencyVector& frequencies() const noexcept { return freqs_; }

  std::uint64_t frequency(ElementId element) const;

  // Most frequent element, smaller id on ties; kSentinel for an empty stream.
  ElementId most_frequent() const;

  // F_k = sum_i f_i^k. Requires k >= 1.
  Wide moment(unsigned k) const;

  // G_k = F_k - f_excluded^k.
  Wide residual_moment(unsigned k, ElementId excluded) const;

  // The 100x heavy-element test: f_x^k > 100 * sum_{j != x} f_j^k.
  bool is_heavy(ElementId element, unsigned k) const;

 private:
  FrequencyVector freqs_;
  std::uint64_t universe_ = 1;
  std::uint64_t length_ = 0;
};

// Overflow-checked x^k.
Wide checked_pow(std::uint64_t base, unsigned k);

}  // namespace pickdrop

#endif  // PICKDROP_STREAM_HPP_
