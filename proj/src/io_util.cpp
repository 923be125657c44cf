#include "venuescore/io_util.hpp"

#include "venuescore/errors.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <chrono>
#include <fstream>
#include <sstream>

namespace venuescore {

std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b])))
        ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1])))
        --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.emplace_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    for (char &c : out)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file for digest: " + path.string());
    std::uint64_t h = 1469598103934665603ULL;
    char buf[1 << 16];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        std::streamsize n = in.gcount();
        for (std::streamsize i = 0; i < n; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char *digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[v & 0xF];
        v >>= 4;
    }
    return out;
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void atomic_write(const std::filesystem::path &path,
                  const std::function<void(std::ostream &)> &writer) {
    const auto dir = path.parent_path();
    if (!dir.empty())
        std::filesystem::create_directories(dir);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot open for writing: " + tmp.string());
        writer(out);
        out.flush();
        if (!out)
            throw DataError("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void atomic_write_text(const std::filesystem::path &path, const std::string &content) {
    atomic_write(path, [&](std::ostream &out) { out << content; });
}

std::string Manifest::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["version"] = "1.0.0";
    nlohmann::json in = nlohmann::json::object();
    for (const auto &p : inputs)
        in[p.string()] = hex64(fnv1a64_file(p));
    j["inputs"] = in;
    nlohmann::json out = nlohmann::json::array();
    for (const auto &p : outputs)
        out.push_back(p.string());
    j["outputs"] = out;
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    return j.dump(2);
}

void write_manifest(const std::filesystem::path &out_dir, const Manifest &m) {
    atomic_write_text(out_dir / ("manifest_" + m.command + ".json"), m.to_json() + "\n");
}

} // namespace venuescore
