#include "venuescore/config.hpp"

#include "venuescore/errors.hpp"
#include "venuescore/io_util.hpp"

#include <cstdlib>
#include <sstream>

namespace venuescore {

namespace {

std::string strip_comment(const std::string &line) {
    bool in_quote = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (c == '"')
            in_quote = !in_quote;
        else if (c == '#' && !in_quote)
            return line.substr(0, i);
    }
    return line;
}

std::string unquote(const std::string &value, const std::string &where) {
    if (value.size() >= 2 && value.front() == '"') {
        if (value.back() != '"')
            throw ConfigError("unterminated quoted value at " + where);
        std::string out;
        for (std::size_t i = 1; i + 1 < value.size(); ++i) {
            char c = value[i];
            if (c == '\\' && i + 2 < value.size()) {
                char n = value[++i];
                if (n == 'n')
                    out += '\n';
                else if (n == 't')
                    out += '\t';
                else
                    out += n;
            } else {
                out += c;
            }
        }
        return out;
    }
    return value;
}

} // namespace

ConfigFile ConfigFile::parse_file(const std::filesystem::path &path) {
    if (!std::filesystem::exists(path))
        throw ConfigError("config file not found: " + path.string());
    return parse_string(read_text_file(path), path.string());
}

ConfigFile ConfigFile::parse_string(const std::string &text, const std::string &origin) {
    ConfigFile cfg;
    cfg.origin_ = origin;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string where = origin + ":" + std::to_string(lineno);
        std::string s = trim(strip_comment(line));
        if (s.empty())
            continue;
        if (s.front() == '[') {
            if (s.back() != ']')
                throw ConfigError("malformed section header at " + where);
            section = trim(s.substr(1, s.size() - 2));
            if (section.empty())
                throw ConfigError("empty section name at " + where);
            cfg.sections_[section]; // register even if empty
            continue;
        }
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' at " + where);
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key.empty())
            throw ConfigError("empty key at " + where);
        cfg.sections_[section][key] = unquote(value, where);
    }
    return cfg;
}

bool ConfigFile::has(const std::string &section, const std::string &key) const {
    auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

bool ConfigFile::has_section(const std::string &section) const {
    return sections_.count(section) > 0;
}

const std::string &ConfigFile::raw(const std::string &section, const std::string &key) const {
    auto it = sections_.find(section);
    if (it == sections_.end() || it->second.count(key) == 0)
        throw ConfigError("missing config key [" + section + "] " + key + " in " + origin_);
    return it->second.at(key);
}

std::string ConfigFile::get_string(const std::string &section, const std::string &key) const {
    return raw(section, key);
}

std::string ConfigFile::get_string(const std::string &section, const std::string &key,
                                   const std::string &fallback) const {
    return has(section, key) ? raw(section, key) : fallback;
}

std::int64_t ConfigFile::get_int(const std::string &section, const std::string &key) const {
    const std::string &v = raw(section, key);
    char *end = nullptr;
    long long out = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("expected integer for [" + section + "] " + key + ", got '" + v + "'");
    return out;
}

std::int64_t ConfigFile::get_int(const std::string &section, const std::string &key,
                                 std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

double ConfigFile::get_double(const std::string &section, const std::string &key) const {
    const std::string &v = raw(section, key);
    char *end = nullptr;
    double out = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("expected number for [" + section + "] " + key + ", got '" + v + "'");
    return out;
}

double ConfigFile::get_double(const std::string &section, const std::string &key,
                              double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

bool ConfigFile::get_bool(const std::string &section, const std::string &key) const {
    std::string v = to_lower(raw(section, key));
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw ConfigError("expected boolean for [" + section + "] " + key + ", got '" + v + "'");
}

bool ConfigFile::get_bool(const std::string &section, const std::string &key,
                          bool fallback) const {
    return has(section, key) ? get_bool(section, key) : fallback;
}

std::vector<std::string> ConfigFile::get_list(const std::string &section,
                                              const std::string &key) const {
    std::vector<std::string> out;
    for (const auto &item : split(raw(section, key), ',')) {
        std::string t = trim(item);
        if (!t.empty())
            out.push_back(std::move(t));
    }
    return out;
}

std::string ConfigFile::canonical_text() const {
    std::ostringstream out;
    for (const auto &[section, kv] : sections_) {
        out << "[" << section << "]\n";
        for (const auto &[k, v] : kv)
            out << k << "=" << v << "\n";
    }
    return out.str();
}

} // namespace venuescore
