#pragma once

#include <map>
#include <string>
#include <vector>

namespace evsource::io {

/// One output table: fixed column schema, string-formatted cells, and a
/// key-value metadata block.  Numeric cells are written with the
/// shortest representation that round-trips the underlying double, so
/// identical configs produce byte-identical files.
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    std::map<std::string, std::string> metadata;  // ordered, deterministic
};

/// Shortest round-trip decimal form of a double.
std::string format_double(double value);

/// RFC 4180 CSV with a leading '#'-prefixed metadata block.
std::string to_csv(const Dataset& d);

/// JSON object {"metadata": {...}, "records": [...]} with records as an
/// array of column-keyed objects.
std::string to_json(const Dataset& d);

/// Writes text to path, throwing evsource::Error on failure.
void write_file(const std::string& path, const std::string& text);

} // namespace evsource::io
