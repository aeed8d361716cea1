#pragma once
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hcu/errors.hpp"

namespace hcu {

// Flat key-value configuration with one level of [section] headers.
// Lines are `key = value`; `#` starts a comment. Typed getters report the
// offending key path in their diagnostics.
class Config {
public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& section, const std::string& key) const;
    const std::string& raw(const std::string& section, const std::string& key) const;

    std::string get_string(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;
    double get_double(const std::string& section, const std::string& key) const;
    double get_double(const std::string& section, const std::string& key,
                      double fallback) const;
    std::int64_t get_int(const std::string& section, const std::string& key) const;
    std::int64_t get_int(const std::string& section, const std::string& key,
                         std::int64_t fallback) const;
    std::uint64_t get_u64(const std::string& section, const std::string& key) const;
    bool get_bool(const std::string& section, const std::string& key, bool fallback) const;
    std::vector<double> get_double_list(const std::string& section,
                                        const std::string& key) const;

    void set(const std::string& section, const std::string& key, const std::string& value);

    // Rejects keys not named by the schema (section -> allowed keys);
    // sections absent from the schema are rejected wholesale.
    void validate_schema(
        const std::map<std::string, std::vector<std::string>>& schema) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }
    std::string serialize() const; // canonical sorted form (for hashing)

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
    std::string origin_;
};

} // namespace hcu
