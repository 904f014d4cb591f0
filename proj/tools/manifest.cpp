#include "manifest.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iterator>

#include <openssl/evp.h>

#include "slowcode/errors.hpp"
#include "slowcode/serialization.hpp"

namespace slowcode::cli {

namespace {

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json file_entry(const std::filesystem::path& path) {
    return {{"path", path.string()},
            {"bytes", std::filesystem::file_size(path)},
            {"git_blob_sha1", git_blob_sha1(path)}};
}

}  // namespace

std::string git_blob_sha1(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read '" + path.string() + "' for hashing");
    const std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string header = "blob " + std::to_string(content.size()) + std::string(1, '\0');

    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    const bool ok = ctx != nullptr && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                    EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                    EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                    EVP_DigestFinal_ex(ctx, digest, &len) == 1;
    EVP_MD_CTX_free(ctx);
    if (!ok) throw Error("SHA-1 computation failed");

    std::string hex;
    char byte[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(byte, sizeof byte, "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv)
    : command_(std::move(command)), argv_(std::move(argv)), started_(utc_now()) {}

void RunManifest::add_seed(const std::string& name, std::uint64_t seed) { seeds_[name] = seed; }

void RunManifest::add_input(const std::filesystem::path& path) { inputs_.push_back(path); }

void RunManifest::add_output(const std::filesystem::path& path) { outputs_.push_back(path); }

void RunManifest::write(const std::filesystem::path& path) const {
    nlohmann::json inputs = nlohmann::json::array();
    for (const auto& p : inputs_) inputs.push_back(file_entry(p));
    nlohmann::json outputs = nlohmann::json::array();
    for (const auto& p : outputs_) outputs.push_back(file_entry(p));
    const nlohmann::json doc{{"command", command_},
                             {"argv", argv_},
                             {"started_at", started_},
                             {"finished_at", utc_now()},
                             {"config", config_},
                             {"seeds", seeds_},
                             {"inputs", inputs},
                             {"outputs", outputs},
                             {"summary", summary_}};
    write_json_file(path, doc);
}

}  // namespace slowcode::cli
