#include "config.hpp"

#include "affinelab/errors.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace affinelab::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& message) {
    throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

double to_double(const std::string& text, int line) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) fail(line, "trailing characters in number '" + text + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception&) {
        fail(line, "not a number: '" + text + "'");
    }
}

} // namespace

std::string ConfigSection::get(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end())
        throw ConfigError("config section [" + name + "] (line " +
                          std::to_string(line) + "): missing key '" + key + "'");
    return it->second.first;
}

std::string ConfigSection::get_or(const std::string& key,
                                  const std::string& fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : it->second.first;
}

double ConfigSection::get_double(const std::string& key) const {
    const auto it = entries.find(key);
    if (it == entries.end())
        throw ConfigError("config section [" + name + "]: missing key '" + key + "'");
    return to_double(it->second.first, it->second.second);
}

double ConfigSection::get_double_or(const std::string& key, double fallback) const {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback
                               : to_double(it->second.first, it->second.second);
}

int ConfigSection::get_int(const std::string& key) const {
    const double v = get_double(key);
    if (v != std::floor(v))
        throw ConfigError("config key '" + key + "' must be an integer");
    return static_cast<int>(v);
}

int ConfigSection::get_int_or(const std::string& key, int fallback) const {
    return has(key) ? get_int(key) : fallback;
}

bool ConfigSection::get_bool_or(const std::string& key, bool fallback) const {
    const auto it = entries.find(key);
    if (it == entries.end()) return fallback;
    const std::string& v = it->second.first;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(it->second.second, "expected a boolean, got '" + v + "'");
}

const ConfigSection* Config::find(const std::string& name) const {
    for (const auto& s : sections)
        if (s.name == name) return &s;
    return nullptr;
}

std::vector<const ConfigSection*> Config::all(const std::string& name) const {
    std::vector<const ConfigSection*> out;
    for (const auto& s : sections)
        if (s.name == name) out.push_back(&s);
    return out;
}

Config parse_config(const std::string& text, const std::string& filename) {
    Config cfg;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        const auto comment = line.find_first_of("#;");
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(line_no, "unterminated section header in " + filename);
            ConfigSection section;
            section.name = trim(line.substr(1, line.size() - 2));
            section.line = line_no;
            if (section.name.empty()) fail(line_no, "empty section name");
            cfg.sections.push_back(std::move(section));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected key=value, got '" + line + "'");
        if (cfg.sections.empty())
            fail(line_no, "key=value before any [section] header");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) fail(line_no, "empty key");
        auto& entries = cfg.sections.back().entries;
        if (entries.count(key))
            fail(line_no, "duplicate key '" + key + "' in section [" +
                              cfg.sections.back().name + "]");
        entries[key] = {value, line_no};
    }
    return cfg;
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

ValueRange parse_range(const std::string& text, int line) {
    ValueRange out;
    if (text.rfind("geom:", 0) != 0 && text.rfind("lin:", 0) != 0) {
        out.values.push_back(to_double(text, line));
        return out;
    }
    const bool geometric = text.rfind("geom:", 0) == 0;
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4)
        fail(line, "range must be geom:lo:hi:n or lin:lo:hi:n, got '" + text + "'");
    const double lo = to_double(parts[1], line);
    const double hi = to_double(parts[2], line);
    const int n = static_cast<int>(to_double(parts[3], line));
    if (n < 1) fail(line, "range needs at least one point");
    if (geometric && (lo <= 0.0 || hi <= 0.0))
        fail(line, "geometric range endpoints must be positive");
    out.is_range = true;
    for (int i = 0; i < n; ++i) {
        const double f = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
        out.values.push_back(geometric ? lo * std::pow(hi / lo, f)
                                       : lo + (hi - lo) * f);
    }
    return out;
}

std::vector<double> parse_double_list(const std::string& text, int line) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const std::string t = [&] {
            const auto b = item.find_first_not_of(" \t");
            const auto e = item.find_last_not_of(" \t");
            return b == std::string::npos ? std::string()
                                          : item.substr(b, e - b + 1);
        }();
        if (!t.empty()) out.push_back(to_double(t, line));
    }
    if (out.empty()) fail(line, "expected a comma-separated list of numbers");
    return out;
}

} // namespace affinelab::cli
