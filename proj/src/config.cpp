#include "qcbel/config.hpp"

#include <cstdint>
#include <fstream>
#include <sstream>

namespace qcbel {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_string(ss.str());
}

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#' || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']' || s.size() < 3)
                throw ConfigError("malformed section header at line " +
                                  std::to_string(lineno));
            section = trim(s.substr(1, s.size() - 2));
            cfg.sections[section];
            continue;
        }
        std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected key=value at line " +
                              std::to_string(lineno));
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty())
            throw ConfigError("empty key at line " + std::to_string(lineno));
        if (section.empty())
            throw ConfigError("key outside any section at line " +
                              std::to_string(lineno));
        if (cfg.sections[section].count(key))
            throw ConfigError("duplicate key '" + key + "' in [" + section +
                              "]");
        cfg.sections[section][key] = val;
    }
    return cfg;
}

bool Config::has(const std::string& sec, const std::string& key) const {
    auto it = sections.find(sec);
    return it != sections.end() && it->second.count(key);
}

std::string Config::get(const std::string& sec, const std::string& key,
                        const std::string& fallback) const {
    auto it = sections.find(sec);
    if (it == sections.end()) return fallback;
    auto kt = it->second.find(key);
    return kt == it->second.end() ? fallback : kt->second;
}

double Config::get_double(const std::string& sec, const std::string& key,
                          double fallback) const {
    if (!has(sec, key)) return fallback;
    const std::string& v = sections.at(sec).at(key);
    std::size_t pos = 0;
    double d;
    try {
        d = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw ConfigError("[" + sec + "] " + key + ": not a number: " + v);
    }
    if (pos != v.size())
        throw ConfigError("[" + sec + "] " + key + ": not a number: " + v);
    return d;
}

int Config::get_int(const std::string& sec, const std::string& key,
                    int fallback) const {
    double d = get_double(sec, key, double(fallback));
    int i = int(d);
    if (double(i) != d)
        throw ConfigError("[" + sec + "] " + key + ": not an integer");
    return i;
}

std::uint64_t Config::get_seed(const std::string& sec, const std::string& key,
                               std::uint64_t fallback) const {
    if (!has(sec, key)) return fallback;
    const std::string& v = sections.at(sec).at(key);
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw ConfigError("[" + sec + "] " + key + ": not a seed: " + v);
    }
}

std::string Config::require(const std::string& sec, const std::string& key) const {
    if (!has(sec, key))
        throw ConfigError("missing required key [" + sec + "] " + key);
    return sections.at(sec).at(key);
}

}  // namespace qcbel
