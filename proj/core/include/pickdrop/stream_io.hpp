#ifndef PICKDROP_STREAM_IO_HPP_
#define PICKDROP_STREAM_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>

#include "pickdrop/item_source.hpp"
#include "pickdrop/stream.hpp"

namespace pickdrop {

// Binary stream file: a 16-byte little-endian header
//   bytes 0..3   magic "PDSK"
//   bytes 4..7   format version (u32, currently 1)
//   bytes 8..15  universe size n (u64)
// followed by the items as little-endian u32, item count implied by file size.
//
// The text alternative holds one decimal id per line; its universe size is the
// largest id present.
inline constexpr std::uint32_t kStreamFormatVersion = 1;
inline constexpr std::size_t kStreamHeaderSize = 16;

enum class StreamEncoding { kBinary, kText };

void write_binary_stream(const std::filesystem::path& path, const Stream& stream);
void write_text_stream(const std::filesystem::path& path, std::span<const ElementId> items);

// Loads either encoding, detected by the magic bytes.
Stream read_stream(const std::filesystem::path& path);

StreamEncoding detect_encoding(const std::filesystem::path& path);

// One-pass reader over a binary stream file. Validates the header on open and
// every item as it is read.
class BinaryFileSource final : public ItemSource {
 public:
  explicit BinaryFileSource(const std::filesystem::path& path);

  std::uint64_t universe() const noexcept { return universe_; }
  std::uint64_t length() const noexcept { return length_; }

  std::size_t fill(std::span<ElementId> out) override;

 private:
  std::ifstream in_;
  std::uint64_t universe_ = 0;
  std::uint64_t length_ = 0;
  std::uint64_t read_ = 0;
};

}  // namespace pickdrop

#endif  // PICKDROP_STREAM_IO_HPP_
