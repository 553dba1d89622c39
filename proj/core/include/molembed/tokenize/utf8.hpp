#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace molembed::tokenize {

// Splits a byte string into Unicode scalar values encoded back as UTF-8
// substrings. Malformed bytes are passed through one byte at a time, so the
// concatenation of the pieces always reproduces the input byte-exactly and
// the split never fails.
inline std::vector<std::string> utf8_split(std::string_view s) {
    std::vector<std::string> out;
    size_t i = 0;
    while (i < s.size()) {
        const unsigned char c = static_cast<unsigned char>(s[i]);
        size_t len = 1;
        if (c < 0x80) {
            len = 1;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
        }
        if (i + len > s.size()) len = 1;
        bool valid = true;
        for (size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(s[i + k]) & 0xC0) != 0x80) {
                valid = false;
                break;
            }
        }
        if (!valid) len = 1;
        out.emplace_back(s.substr(i, len));
        i += len;
    }
    return out;
}

} // namespace molembed::tokenize
