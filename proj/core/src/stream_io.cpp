#include "pickdrop/stream_io.hpp"

#include <array>
#include <charconv>
#include <cstring>
#include <string>
#include <vector>

#include "pickdrop/error.hpp"

namespace pickdrop {
namespace {

constexpr std::array<char, 4> kMagic = {'P', 'D', 'S', 'K'};

void put_u32(char* out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

void put_u64(char* out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out[i] = static_cast<char>((v >> (8 * i)) & 0xff);
}

std::uint32_t get_u32(const unsigned char* in) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

std::uint64_t get_u64(const unsigned char* in) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | in[i];
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return in;
}

Stream read_text(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<ElementId> items;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    std::uint64_t value = 0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end || value == 0 || value > 0xffffffffULL) {
      throw Error(ErrorKind::kFormat,
                  path.string() + ":" + std::to_string(line_no) + ": expected an id in [1, 2^32)");
    }
    items.push_back(static_cast<ElementId>(value));
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read failure on " + path.string());
  return Stream::with_inferred_universe(std::move(items));
}

}  // namespace

void write_binary_stream(const std::filesystem::path& path, const Stream& stream) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot create " + path.string());
  std::array<char, kStreamHeaderSize> header{};
  std::memcpy(header.data(), kMagic.data(), kMagic.size());
  put_u32(header.data() + 4, kStreamFormatVersion);
  put_u64(header.data() + 8, stream.universe());
  out.write(header.data(), header.size());
  std::vector<char> buffer;
  buffer.reserve(4 * kSourceBlock);
  const auto items = stream.items();
  for (std::size_t pos = 0; pos < items.size(); pos += kSourceBlock) {
    const std::size_t n = std::min(kSourceBlock, items.size() - pos);
    buffer.resize(4 * n);
    for (std::size_t i = 0; i < n; ++i) put_u32(buffer.data() + 4 * i, items[pos + i]);
    out.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  }
  if (!out) throw Error(ErrorKind::kIo, "write failure on " + path.string());
}

void write_text_stream(const std::filesystem::path& path, std::span<const ElementId> items) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot create " + path.string());
  for (ElementId x : items) out << x << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failure on " + path.string());
}

StreamEncoding detect_encoding(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::array<char, 4> head{};
  in.read(head.data(), head.size());
  return in.gcount() == 4 && head == kMagic ? StreamEncoding::kBinary : StreamEncoding::kText;
}

Stream read_stream(const std::filesystem::path& path) {
  if (detect_encoding(path) == StreamEncoding::kText) return read_text(path);
  BinaryFileSource source(path);
  std::vector<ElementId> items(source.length());
  std::size_t got = 0;
  while (got < items.size()) {
    const std::size_t n = source.fill(std::span<ElementId>(items).subspan(got));
    if (n == 0) break;
    got += n;
  }
  if (got != items.size()) throw Error(ErrorKind::kFormat, "truncated stream " + path.string());
  return Stream(std::move(items), source.universe());
}

BinaryFileSource::BinaryFileSource(const std::filesystem::path& path) : in_(open_input(path)) {
  std::error_code ec;
  const auto size = std::filesystem::file_size(path, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot stat " + path.string());
  std::array<unsigned char, kStreamHeaderSize> header{};
  in_.read(reinterpret_cast<char*>(header.data()), header.size());
  if (in_.gcount() != static_cast<std::streamsize>(header.size()) ||
      std::memcmp(header.data(), kMagic.data(), kMagic.size()) != 0) {
    throw Error(ErrorKind::kFormat, path.string() + ": missing PDSK header");
  }
  const std::uint32_t version = get_u32(header.data() + 4);
  if (version != kStreamFormatVersion) {
    throw Error(ErrorKind::kFormat,
                path.string() + ": unsupported format version " + std::to_string(version));
  }
  universe_ = get_u64(header.data() + 8);
  if (universe_ == 0) throw Error(ErrorKind::kFormat, path.string() + ": universe size is zero");
  if ((size - kStreamHeaderSize) % 4 != 0) {
    throw Error(ErrorKind::kFormat, path.string() + ": payload is not a whole number of u32 items");
  }
  length_ = (size - kStreamHeaderSize) / 4;
}

std::size_t BinaryFileSource::fill(std::span<ElementId> out) {
  const std::size_t want = static_cast<std::size_t>(
      std::min<std::uint64_t>(out.size(), length_ - read_));
  if (want == 0) return 0;
  std::vector<unsigned char> raw(4 * want);
  in_.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (in_.gcount() != static_cast<std::streamsize>(raw.size())) {
    throw Error(ErrorKind::kIo, "short read after item " + std::to_string(read_));
  }
  for (std::size_t i = 0; i < want; ++i) {
    const ElementId x = get_u32(raw.data() + 4 * i);
    if (x == kSentinel || x > universe_) {
      throw Error(ErrorKind::kFormat, "item " + std::to_string(x) + " at position " +
                                          std::to_string(read_ + i) + " is outside [1, " +
                                          std::to_string(universe_) + "]");
    }
    out[i] = x;
  }
  read_ += want;
  return want;
}

}  // namespace pickdrop
