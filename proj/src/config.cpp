#include "hcu/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace hcu {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void bad_key(const std::string& section, const std::string& key,
                          const std::string& what) {
    throw ConfigError("[" + section + "]." + key + ": " + what);
}

} // namespace

Config Config::parse_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_string(ss.str(), path);
}

Config Config::parse_string(const std::string& text, const std::string& origin) {
    Config cfg;
    cfg.origin_ = origin;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            cfg.sections_[section]; // sections may be empty
            continue;
        }
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (section.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": key outside any [section]");
        if (cfg.sections_[section].count(key))
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": duplicate key [" +
                              section + "]." + key);
        cfg.sections_[section][key] = value;
    }
    return cfg;
}

bool Config::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

const std::string& Config::raw(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    if (it == sections_.end()) bad_key(section, key, "missing section");
    const auto kit = it->second.find(key);
    if (kit == it->second.end()) bad_key(section, key, "missing key");
    return kit->second;
}

std::string Config::get_string(const std::string& section, const std::string& key) const {
    return raw(section, key);
}

std::string Config::get_string(const std::string& section, const std::string& key,
                               const std::string& fallback) const {
    return has(section, key) ? raw(section, key) : fallback;
}

double Config::get_double(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        bad_key(section, key, "expected a number, got '" + v + "'");
    }
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
    return has(section, key) ? get_double(section, key) : fallback;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    try {
        std::size_t pos = 0;
        const long long i = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        bad_key(section, key, "expected an integer, got '" + v + "'");
    }
}

std::int64_t Config::get_int(const std::string& section, const std::string& key,
                             std::int64_t fallback) const {
    return has(section, key) ? get_int(section, key) : fallback;
}

std::uint64_t Config::get_u64(const std::string& section, const std::string& key) const {
    const std::string& v = raw(section, key);
    try {
        std::size_t pos = 0;
        const unsigned long long i = std::stoull(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return i;
    } catch (const std::exception&) {
        bad_key(section, key, "expected an unsigned integer, got '" + v + "'");
    }
}

bool Config::get_bool(const std::string& section, const std::string& key,
                      bool fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& v = raw(section, key);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    bad_key(section, key, "expected a boolean, got '" + v + "'");
}

std::vector<double> Config::get_double_list(const std::string& section,
                                            const std::string& key) const {
    const std::string& v = raw(section, key);
    std::vector<double> out;
    std::string spaced = v; // comma and whitespace separators are equivalent
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream is(spaced);
    std::string tok;
    while (is >> tok) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(tok, &pos));
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            bad_key(section, key, "expected a number list, got '" + v + "'");
        }
    }
    return out;
}

void Config::set(const std::string& section, const std::string& key,
                 const std::string& value) {
    sections_[section][key] = value;
}

void Config::validate_schema(
    const std::map<std::string, std::vector<std::string>>& schema) const {
    for (const auto& [section, kv] : sections_) {
        const auto it = schema.find(section);
        if (it == schema.end())
            throw ConfigError("[" + section + "]: unknown section");
        for (const auto& [key, value] : kv) {
            (void)value;
            if (std::find(it->second.begin(), it->second.end(), key) == it->second.end())
                bad_key(section, key, "unknown key");
        }
    }
}

std::string Config::serialize() const {
    std::ostringstream os;
    for (const auto& [section, kv] : sections_) {
        os << "[" << section << "]\n";
        for (const auto& [key, value] : kv) os << key << " = " << value << "\n";
    }
    return os.str();
}

} // namespace hcu
