#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace venuescore {

std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::string to_lower(std::string_view s);

// FNV-1a 64-bit, used for config hashes and manifest input digests.
std::uint64_t fnv1a64(std::string_view data);
std::uint64_t fnv1a64_file(const std::filesystem::path &path);
std::string hex64(std::uint64_t v);

std::string read_text_file(const std::filesystem::path &path);

// Writes via a temp file in the same directory, then renames into place.
void atomic_write_text(const std::filesystem::path &path, const std::string &content);
void atomic_write(const std::filesystem::path &path,
                  const std::function<void(std::ostream &)> &writer);

// Run manifest emitted by every CLI command.
struct Manifest {
    std::string command;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::vector<std::filesystem::path> inputs;
    std::vector<std::filesystem::path> outputs;
    std::string to_json() const;
};

void write_manifest(const std::filesystem::path &out_dir, const Manifest &m);

} // namespace venuescore
