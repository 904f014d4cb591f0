#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace slowcode::cli {

/// SHA-1 of "blob <size>\0<content>", the id git gives the file's content.
std::string git_blob_sha1(const std::filesystem::path& path);

/// Audit record of one command run. Every input and output file is listed
/// with its git blob hash; outputs are hashed when the manifest is written.
class RunManifest {
public:
    RunManifest(std::string command, std::vector<std::string> argv);

    void set_config(nlohmann::json config) { config_ = std::move(config); }
    void add_seed(const std::string& name, std::uint64_t seed);
    void add_input(const std::filesystem::path& path);
    void add_output(const std::filesystem::path& path);
    void set_summary(nlohmann::json summary) { summary_ = std::move(summary); }

    [[nodiscard]] const std::vector<std::filesystem::path>& outputs() const { return outputs_; }

    /// Stamps the finish time and writes the manifest to path.
    void write(const std::filesystem::path& path) const;

private:
    std::string command_;
    std::vector<std::string> argv_;
    std::string started_;
    nlohmann::json config_ = nlohmann::json::object();
    nlohmann::json seeds_ = nlohmann::json::object();
    nlohmann::json summary_ = nlohmann::json::object();
    std::vector<std::filesystem::path> inputs_;
    std::vector<std::filesystem::path> outputs_;
};

}  // namespace slowcode::cli
