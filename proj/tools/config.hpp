#pragma once

#include <map>
#include <string>
#include <vector>

namespace affinelab::cli {

// Flat sections of key=value lines. '#' and ';' start comments. Repeated
// section names are kept in file order (bodies are defined by repeating
// [body]). Values are free-form strings; typed access reports the file line
// on error.
struct ConfigSection {
    std::string name;
    int line = 0;
    std::map<std::string, std::pair<std::string, int>> entries;  // value, line

    bool has(const std::string& key) const { return entries.count(key) != 0; }
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    int get_int(const std::string& key) const;
    int get_int_or(const std::string& key, int fallback) const;
    bool get_bool_or(const std::string& key, bool fallback) const;
};

struct Config {
    std::vector<ConfigSection> sections;

    // first section of the given name, or null
    const ConfigSection* find(const std::string& name) const;
    std::vector<const ConfigSection*> all(const std::string& name) const;
};

Config parse_config(const std::string& text, const std::string& filename);
Config load_config(const std::string& path);

// Range expression "geom:lo:hi:n" or "lin:lo:hi:n"; a bare number is a
// single-point range.
struct ValueRange {
    std::vector<double> values;
    bool is_range = false;
};
ValueRange parse_range(const std::string& text, int line);

// comma-separated doubles
std::vector<double> parse_double_list(const std::string& text, int line);

} // namespace affinelab::cli
