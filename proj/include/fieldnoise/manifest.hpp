#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"

namespace fieldnoise {

std::string_view tool_version();

/// Lower-case hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// Provenance record written next to every output file.
struct RunManifest {
    std::string command;
    std::string config_hash; // sha256 of the configuration bytes
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string timestamp; // ISO 8601 UTC; SOURCE_DATE_EPOCH pins it
};

/// Builds a manifest for the given command line and configuration bytes.
RunManifest make_manifest(std::string command, std::string_view config_bytes, std::uint64_t seed);

nlohmann::json to_json(const RunManifest& m);
RunManifest manifest_from_json(const nlohmann::json& doc);

/// Writes <output>.manifest.json and returns its path.
std::filesystem::path write_manifest(const std::filesystem::path& output, const RunManifest& m);

} // namespace fieldnoise
