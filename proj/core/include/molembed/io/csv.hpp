#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "molembed/errors.hpp"

namespace molembed::io {

// Shortest stable formatting; all CSV/JSON artifacts use this so repeated
// runs are byte-identical.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

inline std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

// RFC-4180-ish field split for one line (quotes and doubled quotes).
std::vector<std::string> split_csv_line(const std::string& line);

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for write: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

} // namespace molembed::io
