#pragma once

// Minimal TOML subset reader, enough for flat config files: comments,
// [tables], and key = value with string / integer / float / boolean
// values. Keys are exposed dotted ("table.key"). Arrays, nested tables,
// and dates are out of scope.

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace coughsum::toml_lite {

struct Value {
    enum class Kind { string, integer, floating, boolean } kind = Kind::string;
    std::string str;
    long long integer = 0;
    double floating = 0.0;
    bool boolean = false;

    double as_double() const;  // integers widen, anything else throws
};

class Table {
public:
    static Table parse_file(const std::filesystem::path& path);
    static Table parse(const std::string& text, const std::string& origin = "<string>");

    bool contains(const std::string& dotted_key) const;
    std::vector<std::string> keys() const;

    std::string get_string(const std::string& key, const std::string& fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    double get_double(const std::string& key, double fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

private:
    const Value* find(const std::string& key) const;
    std::map<std::string, Value> values_;
};

}  // namespace coughsum::toml_lite
