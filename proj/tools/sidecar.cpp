#include "sidecar.hpp"

#include <fstream>
#include <string>

#include "pickdrop/error.hpp"

namespace pickdrop::cli {

std::filesystem::path sidecar_path(const std::filesystem::path& stream_path) {
  return std::filesystem::path(stream_path.string() + ".stats.json");
}

Json stats_json(const ExactStats& stats) {
  Json j;
  j["schema"] = kSchema;
  j["universe"] = stats.universe();
  j["length"] = stats.length();
  j["distinct"] = stats.distinct();
  Json freqs = Json::array();
  for (const auto& [id, f] : stats.frequencies()) freqs.push_back({id, f});
  j["frequencies"] = std::move(freqs);

  Json moments = Json::object();
  for (unsigned k = 1; k <= kSidecarMaxMoment; ++k) {
    try {
      moments[std::to_string(k)] = to_string(stats.moment(k));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kOverflow) throw;
      moments[std::to_string(k)] = nullptr;
    }
  }
  j["moments"] = std::move(moments);

  if (stats.length() == 0) {
    j["most_frequent"] = nullptr;
    j["heavy"] = nullptr;
    return j;
  }
  const ElementId top = stats.most_frequent();
  j["most_frequent"] = {{"id", top}, {"frequency", stats.frequency(top)}};
  Json heavy = Json::object();
  for (unsigned k = 3; k <= kSidecarMaxMoment; ++k) {
    try {
      heavy[std::to_string(k)] = stats.is_heavy(top, k);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kOverflow) throw;
      heavy[std::to_string(k)] = nullptr;
    }
  }
  j["heavy"] = std::move(heavy);
  return j;
}

void write_json(const std::filesystem::path& path, const Json& value) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << value.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::kIo, "write failed for " + path.string());
}

std::optional<Json> read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) return std::nullopt;
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kFormat, path.string() + ": " + e.what());
  }
  if (!j.is_object() || j.value("schema", 0) != kSchema || !j.contains("frequencies")) {
    throw Error(ErrorKind::kFormat, path.string() + " is not a schema-1 stats sidecar");
  }
  return j;
}

std::uint64_t sidecar_frequency(const Json& sidecar, ElementId id) {
  for (const auto& entry : sidecar.at("frequencies")) {
    if (entry.at(0).get<ElementId>() == id) return entry.at(1).get<std::uint64_t>();
  }
  return 0;
}

std::optional<long double> sidecar_moment(const Json& sidecar, unsigned k) {
  const auto it = sidecar.find("moments");
  if (it == sidecar.end()) return std::nullopt;
  const auto key = std::to_string(k);
  if (!it->contains(key) || (*it)[key].is_null()) return std::nullopt;
  return std::stold((*it)[key].get<std::string>());
}

}  // namespace pickdrop::cli
