// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#include "trunctail/manifest.hpp"

#include <array>
#include <ctime>

#include "trunctail/error.hpp"
#include "trunctail/io.hpp"

namespace trunctail {

std::string library_version() { return TRUNCTAIL_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf.data();
}

std::filesystem::path manifest_path_for(const std::filesystem::path& output) {
  return std::filesystem::path(output.string() + ".manifest.json");
}

nlohmann::json to_json(const RunManifest& m) {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : m.inputs) inputs.push_back({{"path", in.path}, {"fnv1a", in.fnv1a}});
  return {{"command", m.command},     {"parameters", m.parameters}, {"seeds", m.seeds},
          {"version", m.version},     {"inputs", inputs},           {"outputs", m.outputs},
          {"created_utc", m.created_utc}};
}

RunManifest manifest_from_json(const nlohmann::json& doc) {
  try {
    RunManifest m;
    m.command = doc.at("command").get<std::string>();
    m.parameters = doc.at("parameters");
    m.seeds = doc.value("seeds", std::vector<std::uint64_t>{});
    m.version = doc.value("version", std::string{});
    for (const auto& in : doc.value("inputs", nlohmann::json::array()))
      m.inputs.push_back({in.at("path").get<std::string>(), in.at("fnv1a").get<std::string>()});
    m.outputs = doc.value("outputs", std::vector<std::string>{});
    m.created_utc = doc.value("created_utc", std::string{});
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("manifest: ") + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_text_file(path, to_json(manifest).dump(2) + "\n");
}

RunManifest read_manifest(const std::filesystem::path& path) {
  return manifest_from_json(read_json_file(path));
}

void verify_inputs(const RunManifest& manifest) {
  for (const auto& in : manifest.inputs) {
    const auto digest = file_digest(in.path);
    if (digest != in.fnv1a)
      throw InputError("input " + in.path + " changed since the run (digest " + digest +
                       ", recorded " + in.fnv1a + ")");
  }
}

}  // namespace trunctail
