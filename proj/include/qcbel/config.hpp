#pragma once
// Sectioned key=value run configuration.

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace qcbel {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Config {
    // section -> key -> raw value, in file order for echoing
    std::map<std::string, std::map<std::string, std::string>> sections;

    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    bool has(const std::string& sec, const std::string& key) const;
    std::string get(const std::string& sec, const std::string& key,
                    const std::string& fallback) const;
    double get_double(const std::string& sec, const std::string& key,
                      double fallback) const;
    int get_int(const std::string& sec, const std::string& key,
                int fallback) const;
    std::uint64_t get_seed(const std::string& sec, const std::string& key,
                           std::uint64_t fallback) const;
    std::string require(const std::string& sec, const std::string& key) const;
};

}  // namespace qcbel
