#pragma once

// JSON persistence for correlator tables:
//
//   {
//     "r": 2,
//     "mode": "numeric",
//     "entries": [
//       {"g": 0, "a": [0, 0, 0], "m": [0, 0, 0], "value": "1"},
//       ...
//     ]
//   }
//
// The writer emits one entry per line.  The loader re-validates every
// invariant of CorrelatorTable and reports failures with the line number of
// the offending field or entry.

#include "rspin/correlators.hpp"

#include "json.hpp"

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace rspin {

class TableFormatError : public Error {
public:
    TableFormatError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

inline std::string write_table(const CorrelatorTable& table)
{
    std::ostringstream os;
    os << "{\n  \"r\": " << table.r() << ",\n  \"mode\": \"" << to_string(table.mode())
       << "\",\n  \"entries\": [";
    bool first = true;
    for (const auto& [key, value] : table.entries()) {
        nlohmann::json a = nlohmann::json::array(), m = nlohmann::json::array();
        for (const auto& ip : key.insertions()) {
            a.push_back(ip.a);
            m.push_back(ip.m);
        }
        os << (first ? "\n" : ",\n") << "    {\"g\": " << key.genus() << ", \"a\": " << a.dump()
           << ", \"m\": " << m.dump() << ", \"value\": \"" << to_string(value) << "\"}";
        first = false;
    }
    os << (first ? "]\n}\n" : "\n  ]\n}\n");
    return os.str();
}

namespace detail {

// Line numbers of top-level keys and of each object inside a top-level array.
struct JsonLineMap {
    std::map<std::string, std::size_t> top_keys;
    std::vector<std::size_t> entry_lines;
};

inline JsonLineMap scan_json_lines(const std::string& text)
{
    JsonLineMap out;
    std::size_t line = 1;
    int depth = 0;
    bool in_string = false;
    bool escape = false;
    std::string current;
    std::size_t string_line = 1;
    std::string last_string;
    std::size_t last_string_line = 0;
    bool last_was_string = false;
    for (char c : text) {
        if (in_string) {
            if (escape)
                escape = false;
            else if (c == '\\')
                escape = true;
            else if (c == '"') {
                in_string = false;
                last_string = current;
                last_string_line = string_line;
                last_was_string = true;
                continue;
            } else
                current += c;
            if (c == '\n')
                ++line;
            continue;
        }
        switch (c) {
        case '\n':
            ++line;
            break;
        case '"':
            in_string = true;
            current.clear();
            string_line = line;
            last_was_string = false;
            break;
        case ':':
            if (last_was_string && depth == 1)
                out.top_keys.emplace(last_string, last_string_line);
            last_was_string = false;
            break;
        case '{':
        case '[':
            if (c == '{' && depth == 2)
                out.entry_lines.push_back(line);
            ++depth;
            last_was_string = false;
            break;
        case '}':
        case ']':
            --depth;
            last_was_string = false;
            break;
        default:
            if (c != ' ' && c != '\t' && c != '\r')
                last_was_string = false;
            break;
        }
    }
    return out;
}

inline std::vector<int> int_list(const nlohmann::json& j, const char* field, std::size_t line)
{
    if (!j.is_array())
        throw TableFormatError(line, std::string("field '") + field + "' must be an array of integers");
    std::vector<int> out;
    for (const auto& x : j) {
        if (!x.is_number_integer())
            throw TableFormatError(line, std::string("field '") + field + "' must contain only integers");
        out.push_back(x.get<int>());
    }
    return out;
}

} // namespace detail

inline CorrelatorTable read_table(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        // the parser reports a byte offset; convert it to a line
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i)
            line += text[i] == '\n';
        throw TableFormatError(line, std::string("malformed JSON: ") + e.what());
    }
    const detail::JsonLineMap lines = detail::scan_json_lines(text);
    auto key_line = [&](const std::string& k) {
        auto it = lines.top_keys.find(k);
        return it == lines.top_keys.end() ? std::size_t{1} : it->second;
    };

    if (!doc.is_object())
        throw TableFormatError(1, "table document must be a JSON object");
    for (const auto& [k, v] : doc.items())
        if (k != "r" && k != "mode" && k != "entries")
            throw TableFormatError(key_line(k), "unknown field '" + k + "'");
    for (const char* required : {"r", "mode", "entries"})
        if (!doc.contains(required))
            throw TableFormatError(1, std::string("missing field '") + required + "'");

    if (!doc["r"].is_number_integer() || doc["r"].get<int>() < 2)
        throw TableFormatError(key_line("r"), "field 'r' must be an integer >= 2");
    const int r = doc["r"].get<int>();

    if (!doc["mode"].is_string())
        throw TableFormatError(key_line("mode"), "field 'mode' must be a string");
    const std::string mode = doc["mode"].get<std::string>();
    if (mode != "numeric" && mode != "formal")
        throw TableFormatError(key_line("mode"), "mode must be 'numeric' or 'formal', got '" + mode + "'");

    const auto& entries = doc["entries"];
    if (!entries.is_array())
        throw TableFormatError(key_line("entries"), "field 'entries' must be an array");

    CorrelatorTable table(r, mode == "numeric" ? TableMode::Numeric : TableMode::Formal);
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::size_t line = i < lines.entry_lines.size() ? lines.entry_lines[i] : key_line("entries");
        const auto& e = entries[i];
        if (!e.is_object())
            throw TableFormatError(line, "entry must be an object");
        for (const auto& [k, v] : e.items())
            if (k != "g" && k != "a" && k != "m" && k != "value")
                throw TableFormatError(line, "unknown entry field '" + k + "'");
        for (const char* required : {"g", "a", "m", "value"})
            if (!e.contains(required))
                throw TableFormatError(line, std::string("entry misses field '") + required + "'");
        if (!e["g"].is_number_integer() || e["g"].get<int>() < 0)
            throw TableFormatError(line, "field 'g' must be a nonnegative integer");
        if (!e["value"].is_string())
            throw TableFormatError(line, "field 'value' must be a rational string \"p/q\"");
        try {
            const auto a = detail::int_list(e["a"], "a", line);
            const auto m = detail::int_list(e["m"], "m", line);
            const Rational value = parse_rational(e["value"].get<std::string>());
            table.insert(CorrelatorKey::from_lists(r, e["g"].get<int>(), a, m), value);
        } catch (const TableFormatError&) {
            throw;
        } catch (const Error& err) {
            throw TableFormatError(line, err.what());
        }
    }
    table.freeze();
    return table;
}

inline CorrelatorTable load_table(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error("cannot read table file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return read_table(ss.str());
}

inline void save_table(const CorrelatorTable& table, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write table file '" + path + "'");
    out << write_table(table);
    if (!out)
        throw Error("failed writing table file '" + path + "'");
}

} // namespace rspin
