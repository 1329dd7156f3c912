// Copyright 2026 The trunctail Authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef TRUNCTAIL_MANIFEST_HPP
#define TRUNCTAIL_MANIFEST_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace trunctail {

struct InputDigest {
  std::string path;
  std::string fnv1a;
};

/// Record of one CLI run: enough to repeat it and obtain the same bytes.
struct RunManifest {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::vector<std::uint64_t> seeds;
  std::string version;
  std::vector<InputDigest> inputs;
  std::vector<std::string> outputs;
  std::string created_utc;
};

std::string library_version();

/// Current UTC time as ISO 8601, second resolution.
std::string utc_timestamp();

/// "<output>.manifest.json".
std::filesystem::path manifest_path_for(const std::filesystem::path& output);

nlohmann::json to_json(const RunManifest& manifest);
RunManifest manifest_from_json(const nlohmann::json& doc);

void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest read_manifest(const std::filesystem::path& path);

/// Throws InputError when an input file is missing or its digest changed.
void verify_inputs(const RunManifest& manifest);

}  // namespace trunctail

#endif  // TRUNCTAIL_MANIFEST_HPP
