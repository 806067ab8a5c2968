#include "fieldnoise/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <memory>

#include "fieldnoise/error.hpp"

#ifndef FIELDNOISE_VERSION
#define FIELDNOISE_VERSION "0.0.0"
#endif

namespace fieldnoise {

std::string_view tool_version()
{
    return FIELDNOISE_VERSION;
}

std::string sha256_hex(std::string_view bytes)
{
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1
        || EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1
        || EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1)
        throw Error("SHA-256 computation failed");
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xF]);
    }
    return out;
}

namespace {

std::string utc_timestamp()
{
    std::time_t t = 0;
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch)
        t = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
    else
        t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::array<char, 32> buf{};
    std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf.data();
}

} // namespace

RunManifest make_manifest(std::string command, std::string_view config_bytes, std::uint64_t seed)
{
    return {std::move(command), sha256_hex(config_bytes), seed, std::string(tool_version()), utc_timestamp()};
}

nlohmann::json to_json(const RunManifest& m)
{
    return {{"command", m.command},
            {"config_hash", m.config_hash},
            {"seed", m.seed},
            {"tool_version", m.tool_version},
            {"timestamp", m.timestamp}};
}

RunManifest manifest_from_json(const nlohmann::json& doc)
{
    try {
        return {doc.at("command").get<std::string>(), doc.at("config_hash").get<std::string>(),
                doc.at("seed").get<std::uint64_t>(), doc.at("tool_version").get<std::string>(),
                doc.at("timestamp").get<std::string>()};
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("manifest: ") + e.what());
    }
}

std::filesystem::path write_manifest(const std::filesystem::path& output, const RunManifest& m)
{
    auto path = output;
    path += ".manifest.json";
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write '" + path.string() + "'");
    out << to_json(m).dump(2) << '\n';
    return path;
}

} // namespace fieldnoise
