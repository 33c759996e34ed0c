#include "pickdrop/pick_drop.hpp"

#include <string>
#include <vector>

#include "pickdrop/error.hpp"

namespace pickdrop {

void validate(const PickDropConfig& cfg) {
  if (cfg.rows == 0 || cfg.cols == 0 || cfg.lambda == 0) {
    throw Error(ErrorKind::kUsage, "pick-and-drop needs rows, cols and lambda >= 1");
  }
}

template <class ColumnPicker>
BasicPickDropRun<ColumnPicker>::BasicPickDropRun(const PickDropConfig& cfg, ColumnPicker picker)
    : picker_(std::move(picker)), rows_(cfg.rows), cols_(cfg.cols), lambda_(cfg.lambda) {
  validate(cfg);
}

template <class ColumnPicker>
Estimate BasicPickDropRun<ColumnPicker>::finish() const {
  if (row_ != rows_ || pos_ != 0) {
    throw Error(ErrorKind::kDimension,
                "pick-and-drop consumed " + std::to_string(row_ * cols_ + pos_) +
                    " items, expected " + std::to_string(rows_ * cols_));
  }
  return state_.estimate();
}

template class BasicPickDropRun<RandomColumns>;
template class BasicPickDropRun<FixedColumns>;

Estimate run(const MatrixOverlay& overlay, const PickDropConfig& cfg) {
  if (cfg.rows != overlay.rows() || cfg.cols != overlay.cols()) {
    throw Error(ErrorKind::kDimension,
                "config " + std::to_string(cfg.rows) + "x" + std::to_string(cfg.cols) +
                    " does not match overlay " + std::to_string(overlay.rows()) + "x" +
                    std::to_string(overlay.cols()));
  }
  PickDropRun runner(cfg, RandomColumns(cfg.seed));
  const std::uint64_t total = overlay.padded_size();
  for (std::uint64_t flat = 0; flat < total; ++flat) runner.push(overlay.cell(flat));
  return runner.finish();
}

Estimate run_streaming(ItemSource& source, const PickDropConfig& cfg) {
  PickDropRun runner(cfg, RandomColumns(cfg.seed));
  const std::uint64_t expected = cfg.rows * cfg.cols;
  std::vector<ElementId> buffer(kSourceBlock);
  std::uint64_t seen = 0;
  while (seen < expected) {
    const auto want = static_cast<std::size_t>(
        std::min<std::uint64_t>(buffer.size(), expected - seen));
    const std::size_t got = source.fill(std::span<ElementId>(buffer.data(), want));
    if (got == 0) {
      throw Error(ErrorKind::kDimension, "source ended after " + std::to_string(seen) +
                                             " items, expected " + std::to_string(expected));
    }
    for (std::size_t i = 0; i < got; ++i) runner.push(buffer[i]);
    seen += got;
  }
  ElementId extra = 0;
  if (source.fill(std::span<ElementId>(&extra, 1)) != 0) {
    throw Error(ErrorKind::kDimension,
                "source holds more than the expected " + std::to_string(expected) + " items");
  }
  return runner.finish();
}

Estimate run_with_columns(const MatrixOverlay& overlay, std::uint64_t lambda,
                          std::span<const std::uint64_t> columns) {
  if (columns.size() != overlay.rows()) {
    throw Error(ErrorKind::kDimension, "need one column per row");
  }
  const PickDropConfig cfg{overlay.rows(), overlay.cols(), lambda, 0};
  BasicPickDropRun<FixedColumns> runner(cfg, FixedColumns(columns));
  const std::uint64_t total = overlay.padded_size();
  for (std::uint64_t flat = 0; flat < total; ++flat) runner.push(overlay.cell(flat));
  return runner.finish();
}

}  // namespace pickdrop
