#ifndef PICKDROP_PICK_DROP_HPP_
#define PICKDROP_PICK_DROP_HPP_

#include <algorithm>
#include <cstdint>
#include <span>
#include <type_traits>

#include "pickdrop/item_source.hpp"
#include "pickdrop/random.hpp"
#include "pickdrop/stream.hpp"

namespace pickdrop {

struct PickDropConfig {
  std::uint64_t rows = 1;
  std::uint64_t cols = 1;
  std::uint64_t lambda = 1;
  std::uint64_t seed = 0;
};

// Recurrence state of one pick-and-drop run.
//
// Across rows it carries the global sample S, its counter C and the number of
// rows q it has survived. Within a row it tracks the sampled column I, the local
// sample s = m[i][I] with its suffix count c = d[i][I], and g, the number of
// occurrences of S in the current row. The footprint is fixed: it does not
// depend on the stream length or the universe.
//
// Columns are 0-based here. A run that samples a padding cell is marked failed
// and reports the sentinel estimate.
struct PickDropState {
  ElementId global = kSentinel;
  ElementId local = kSentinel;
  bool failed = false;
  std::uint64_t global_count = 0;
  std::uint64_t survived = 0;
  std::uint64_t column = 0;
  std::uint64_t local_count = 0;
  std::uint64_t global_in_row = 0;

  void begin_row(std::uint64_t sampled_column) noexcept {
    column = sampled_column;
    local = kSentinel;
    local_count = 0;
    global_in_row = 0;
  }

  void observe(ElementId x, std::uint64_t pos) noexcept {
    if (pos == column) {
      local = x;
      local_count = 1;
      failed |= (x == kSentinel);
    } else if (pos > column && x == local) {
      ++local_count;
    }
    global_in_row += (x == global);
  }

  // Applies the drop condition C < max(lambda * q, c) with strict inequality;
  // ties keep the global sample.
  void end_row(std::uint64_t lambda) noexcept {
    if (failed) return;
    if (survived == 0) {
      pick();
      return;
    }
    const unsigned __int128 budget = static_cast<unsigned __int128>(lambda) * survived;
    const unsigned __int128 threshold = std::max<unsigned __int128>(budget, local_count);
    if (global_count < threshold) {
      pick();
    } else {
      global_count += global_in_row;
      ++survived;
    }
  }

  Estimate estimate() const noexcept {
    if (failed || survived == 0) return {};
    return {global, global_count};
  }

 private:
  void pick() noexcept {
    global = local;
    global_count = local_count;
    survived = 1;
  }
};

static_assert(std::is_trivially_copyable_v<PickDropState>);

// Draws each row's column uniformly from [0, cols) as the row begins.
class RandomColumns {
 public:
  explicit RandomColumns(std::uint64_t seed) : rng_(seed) {}
  std::uint64_t operator()(std::uint64_t /*row*/, std::uint64_t cols) {
    return uniform_below(rng_, cols);
  }

 private:
  SplitMix64 rng_;
};

// Replays a fixed 0-based column per row. Used to enumerate index tuples.
class FixedColumns {
 public:
  explicit FixedColumns(std::span<const std::uint64_t> columns) : columns_(columns) {}
  std::uint64_t operator()(std::uint64_t row, std::uint64_t /*cols*/) const {
    return columns_[row];
  }

 private:
  std::span<const std::uint64_t> columns_;
};

// A single run over an r x t matrix fed one item at a time, row-major.
template <class ColumnPicker>
class BasicPickDropRun {
 public:
  BasicPickDropRun(const PickDropConfig& cfg, ColumnPicker picker);

  void push(ElementId x) {
    if (pos_ == 0) state_.begin_row(picker_(row_, cols_));
    state_.observe(x, pos_);
    if (++pos_ == cols_) {
      state_.end_row(lambda_);
      pos_ = 0;
      ++row_;
    }
  }

  std::uint64_t rows_completed() const noexcept { return row_; }
  const PickDropState& state() const noexcept { return state_; }

  // Output (S_r, C_r). Throws ErrorKind::kDimension unless exactly r rows were pushed.
  Estimate finish() const;

 private:
  PickDropState state_;
  ColumnPicker picker_;
  std::uint64_t rows_;
  std::uint64_t cols_;
  std::uint64_t lambda_;
  std::uint64_t row_ = 0;
  std::uint64_t pos_ = 0;
};

using PickDropRun = BasicPickDropRun<RandomColumns>;

// Throws ErrorKind::kUsage unless rows, cols, lambda >= 1.
void validate(const PickDropConfig& cfg);

// One run over a materialized overlay (padding included). cfg.rows and
// cfg.cols must match the overlay.
Estimate run(const MatrixOverlay& overlay, const PickDropConfig& cfg);

// Same run over a source that must yield exactly rows * cols items.
Estimate run_streaming(ItemSource& source, const PickDropConfig& cfg);

// Run with caller-chosen 0-based columns, one per row.
Estimate run_with_columns(const MatrixOverlay& overlay, std::uint64_t lambda,
                          std::span<const std::uint64_t> columns);

}  // namespace pickdrop

#endif  // PICKDROP_PICK_DROP_HPP_
