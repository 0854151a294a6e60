#include "evsource/io/dataset.hpp"
#include "evsource/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace evsource::io {

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[40];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

std::string csv_field(const std::string& s) {
    if (!needs_quoting(s)) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default: out += c;
        }
    }
    out += '"';
    return out;
}

// Cells are numeric unless empty; JSON keeps them as raw literals so the
// round-trip stays lossless, with empty cells as null.
std::string json_cell(const std::string& s) {
    if (s.empty()) return "null";
    if (s == "nan" || s == "inf" || s == "-inf") return json_string(s);
    const bool numeric =
        s.find_first_not_of("0123456789+-.eE") == std::string::npos;
    return numeric ? s : json_string(s);
}

} // namespace

std::string to_csv(const Dataset& d) {
    std::string out;
    for (const auto& [key, value] : d.metadata) {
        out += "# " + key + " = " + value + "\n";
    }
    for (std::size_t i = 0; i < d.columns.size(); ++i) {
        if (i) out += ',';
        out += csv_field(d.columns[i]);
    }
    out += '\n';
    for (const auto& row : d.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json(const Dataset& d) {
    std::string out = "{\n  \"metadata\": {";
    bool first = true;
    for (const auto& [key, value] : d.metadata) {
        out += first ? "\n" : ",\n";
        out += "    " + json_string(key) + ": " + json_string(value);
        first = false;
    }
    out += "\n  },\n  \"records\": [";
    for (std::size_t r = 0; r < d.rows.size(); ++r) {
        out += r ? ",\n    {" : "\n    {";
        for (std::size_t i = 0; i < d.columns.size(); ++i) {
            if (i) out += ", ";
            out += json_string(d.columns[i]) + ": " + json_cell(d.rows[r][i]);
        }
        out += "}";
    }
    out += "\n  ]\n}\n";
    return out;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream stream(path, std::ios::binary);
    if (!stream) throw Error("cannot open output file: " + path);
    stream << text;
    if (!stream) throw Error("write failed: " + path);
}

} // namespace evsource::io
