#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace venuescore {

// Minimal TOML-style config: [section] headers, key = value lines,
// '#' comments, quoted or bare values.
class ConfigFile {
public:
    static ConfigFile parse_file(const std::filesystem::path &path);
    static ConfigFile parse_string(const std::string &text,
                                   const std::string &origin = "<string>");

    bool has(const std::string &section, const std::string &key) const;

    std::string get_string(const std::string &section, const std::string &key) const;
    std::string get_string(const std::string &section, const std::string &key,
                           const std::string &fallback) const;
    std::int64_t get_int(const std::string &section, const std::string &key) const;
    std::int64_t get_int(const std::string &section, const std::string &key,
                         std::int64_t fallback) const;
    double get_double(const std::string &section, const std::string &key) const;
    double get_double(const std::string &section, const std::string &key,
                      double fallback) const;
    bool get_bool(const std::string &section, const std::string &key) const;
    bool get_bool(const std::string &section, const std::string &key, bool fallback) const;

    // Comma-separated list value.
    std::vector<std::string> get_list(const std::string &section,
                                      const std::string &key) const;

    bool has_section(const std::string &section) const;

    // Normalized section/key/value dump; stable across formatting, used for hashing.
    std::string canonical_text() const;

    const std::string &origin() const { return origin_; }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string origin_;

    const std::string &raw(const std::string &section, const std::string &key) const;
};

} // namespace venuescore
