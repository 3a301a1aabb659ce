#include "toml_lite.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coughsum::toml_lite {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail(const std::string& origin, std::size_t line, const std::string& what) {
    throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + what);
}

Value parse_value(const std::string& raw, const std::string& origin, std::size_t line) {
    Value v;
    if (raw.empty()) fail(origin, line, "empty value");

    if (raw.front() == '"') {
        if (raw.size() < 2 || raw.back() != '"') fail(origin, line, "unterminated string");
        v.kind = Value::Kind::string;
        std::string out;
        for (std::size_t i = 1; i + 1 < raw.size(); ++i) {
            char c = raw[i];
            if (c == '\\' && i + 2 < raw.size()) {
                char n = raw[++i];
                switch (n) {
                    case 'n': out.push_back('\n'); break;
                    case 't': out.push_back('\t'); break;
                    case '"': out.push_back('"'); break;
                    case '\\': out.push_back('\\'); break;
                    default: fail(origin, line, "unsupported escape");
                }
            } else {
                out.push_back(c);
            }
        }
        v.str = out;
        return v;
    }
    if (raw == "true" || raw == "false") {
        v.kind = Value::Kind::boolean;
        v.boolean = raw == "true";
        return v;
    }

    const bool looks_float = raw.find_first_of(".eE") != std::string::npos ||
                             raw == "inf" || raw == "-inf" || raw == "nan";
    try {
        std::size_t used = 0;
        if (looks_float) {
            v.kind = Value::Kind::floating;
            v.floating = std::stod(raw, &used);
        } else {
            v.kind = Value::Kind::integer;
            v.integer = std::stoll(raw, &used);
        }
        if (used != raw.size()) fail(origin, line, "trailing characters after value");
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        fail(origin, line, "cannot parse value: " + raw);
    }
    return v;
}

}  // namespace

double Value::as_double() const {
    switch (kind) {
        case Kind::floating: return floating;
        case Kind::integer: return static_cast<double>(integer);
        default: throw std::runtime_error("toml: value is not numeric");
    }
}

Table Table::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

Table Table::parse(const std::string& text, const std::string& origin) {
    Table table;
    std::istringstream in(text);
    std::string line;
    std::string prefix;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        // Strip comments outside of strings.
        bool in_string = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_string = !in_string;
            if (line[i] == '#' && !in_string) {
                line.resize(i);
                break;
            }
        }
        const std::string row = trim(line);
        if (row.empty()) continue;

        if (row.front() == '[') {
            if (row.back() != ']') fail(origin, line_no, "unterminated table header");
            prefix = trim(row.substr(1, row.size() - 2));
            if (prefix.empty()) fail(origin, line_no, "empty table name");
            continue;
        }

        const std::size_t eq = row.find('=');
        if (eq == std::string::npos) fail(origin, line_no, "expected key = value");
        const std::string key = trim(row.substr(0, eq));
        const std::string raw = trim(row.substr(eq + 1));
        if (key.empty()) fail(origin, line_no, "empty key");

        const std::string dotted = prefix.empty() ? key : prefix + "." + key;
        if (table.values_.count(dotted)) fail(origin, line_no, "duplicate key: " + dotted);
        table.values_[dotted] = parse_value(raw, origin, line_no);
    }
    return table;
}

const Value* Table::find(const std::string& key) const {
    const auto it = values_.find(key);
    return it == values_.end() ? nullptr : &it->second;
}

bool Table::contains(const std::string& key) const { return find(key) != nullptr; }

std::vector<std::string> Table::keys() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [k, v] : values_) out.push_back(k);
    return out;
}

std::string Table::get_string(const std::string& key, const std::string& fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::string) throw std::runtime_error("toml: " + key + " is not a string");
    return v->str;
}

long long Table::get_int(const std::string& key, long long fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::integer)
        throw std::runtime_error("toml: " + key + " is not an integer");
    return v->integer;
}

double Table::get_double(const std::string& key, double fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    return v->as_double();
}

bool Table::get_bool(const std::string& key, bool fallback) const {
    const Value* v = find(key);
    if (!v) return fallback;
    if (v->kind != Value::Kind::boolean)
        throw std::runtime_error("toml: " + key + " is not a boolean");
    return v->boolean;
}

}  // namespace coughsum::toml_lite
