#ifndef PICKDROP_TOOLS_SIDECAR_HPP_
#define PICKDROP_TOOLS_SIDECAR_HPP_

#include <filesystem>
#include <optional>

#include <nlohmann/json.hpp>

#include "pickdrop/stream.hpp"

namespace pickdrop::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kSchema = 1;
inline constexpr unsigned kSidecarMaxMoment = 8;

// FILE -> FILE.stats.json
std::filesystem::path sidecar_path(const std::filesystem::path& stream_path);

// Oracle stats: frequencies, F_1..F_8 as decimal strings (null once they
// overflow 128 bits) and the 100x heavy flag of the most frequent id.
Json stats_json(const ExactStats& stats);

void write_json(const std::filesystem::path& path, const Json& value);

// nullopt when the file does not exist; throws ErrorKind::kFormat if it is
// not a schema-1 sidecar.
std::optional<Json> read_sidecar(const std::filesystem::path& path);

std::uint64_t sidecar_frequency(const Json& sidecar, ElementId id);
std::optional<long double> sidecar_moment(const Json& sidecar, unsigned k);

}  // namespace pickdrop::cli

#endif  // PICKDROP_TOOLS_SIDECAR_HPP_
