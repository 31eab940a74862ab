#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace sumctl::detail {

struct CodePoint {
    char32_t value;
    std::size_t offset; // byte offset of the first unit
    std::size_t length; // 1..4
};

inline bool is_valid_utf8(std::string_view s) noexcept
{
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t n = 0;
        char32_t cp = 0;
        if (c < 0x80) {
            ++i;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            n = 1;
            cp = c & 0x1F;
        } else if ((c & 0xF0) == 0xE0) {
            n = 2;
            cp = c & 0x0F;
        } else if ((c & 0xF8) == 0xF0) {
            n = 3;
            cp = c & 0x07;
        } else {
            return false;
        }
        if (i + n >= s.size()) return false;
        for (std::size_t k = 1; k <= n; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        // overlong forms, surrogates, out of range
        if ((n == 1 && cp < 0x80) || (n == 2 && cp < 0x800) || (n == 3 && cp < 0x10000)) return false;
        if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
        i += n + 1;
    }
    return true;
}

/// Decodes permissively: invalid bytes come back as single-byte U+FFFD.
inline std::vector<CodePoint> decode(std::string_view s)
{
    std::vector<CodePoint> out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t n = c < 0x80 ? 0 : (c & 0xE0) == 0xC0 ? 1 : (c & 0xF0) == 0xE0 ? 2 : (c & 0xF8) == 0xF0 ? 3 : 99;
        if (n == 99 || i + n >= s.size()) {
            out.push_back({0xFFFD, i, 1});
            ++i;
            continue;
        }
        char32_t cp = n == 0 ? c : n == 1 ? (c & 0x1F) : n == 2 ? (c & 0x0F) : (c & 0x07);
        bool ok = true;
        for (std::size_t k = 1; k <= n; ++k) {
            auto cc = static_cast<unsigned char>(s[i + k]);
            if ((cc & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (!ok) {
            out.push_back({0xFFFD, i, 1});
            ++i;
            continue;
        }
        out.push_back({cp, i, n + 1});
        i += n + 1;
    }
    return out;
}

inline bool is_space(char32_t c) noexcept
{
    switch (c) {
    case U' ': case U'\t': case U'\n': case U'\v': case U'\f': case U'\r':
    case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
    case 0x202F: case 0x205F: case 0x3000:
        return true;
    default:
        return c >= 0x2000 && c <= 0x200A;
    }
}

inline bool is_punct(char32_t c) noexcept
{
    if (c < 0x80) {
        return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) || (c >= 0x5B && c <= 0x60) ||
               (c >= 0x7B && c <= 0x7E);
    }
    // Latin-1 punctuation, general punctuation block, CJK punctuation
    return c == 0xA1 || c == 0xA7 || c == 0xAB || c == 0xB6 || c == 0xB7 || c == 0xBB || c == 0xBF ||
           (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) || (c >= 0x3001 && c <= 0x3003) ||
           (c >= 0x3008 && c <= 0x3011);
}

inline bool is_ascii_upper(char32_t c) noexcept { return c >= U'A' && c <= U'Z'; }
inline bool is_ascii_lower(char32_t c) noexcept { return c >= U'a' && c <= U'z'; }
inline bool is_ascii_digit(char32_t c) noexcept { return c >= U'0' && c <= U'9'; }

/// Uppercase test covering ASCII and the Latin-1/Latin Extended-A capitals.
inline bool is_upper(char32_t c) noexcept
{
    if (c < 0x80) return is_ascii_upper(c);
    if (c >= 0xC0 && c <= 0xDE) return c != 0xD7;
    if (c >= 0x100 && c <= 0x17F) return (c % 2) == 0;
    return false;
}

inline bool is_lower(char32_t c) noexcept
{
    if (c < 0x80) return is_ascii_lower(c);
    if (c >= 0xDF && c <= 0xFF) return c != 0xF7;
    if (c >= 0x100 && c <= 0x17F) return (c % 2) == 1;
    return false;
}

inline bool is_alnum(char32_t c) noexcept
{
    if (c < 0x80) return is_ascii_upper(c) || is_ascii_lower(c) || is_ascii_digit(c);
    return !is_space(c) && !is_punct(c);
}

inline void append(std::string& out, char32_t cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

inline char32_t to_lower(char32_t c) noexcept
{
    if (is_ascii_upper(c)) return c + 32;
    if (c >= 0xC0 && c <= 0xDE && c != 0xD7) return c + 32;
    if (c >= 0x100 && c <= 0x17F && (c % 2) == 0) return c + 1;
    return c;
}

/// Splits on Unicode whitespace; returns (offset, length) byte ranges of the pieces.
inline std::vector<std::pair<std::size_t, std::size_t>> whitespace_pieces(std::string_view s)
{
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t start = std::string_view::npos;
    for (const auto& cp : decode(s)) {
        if (is_space(cp.value)) {
            if (start != std::string_view::npos) {
                out.emplace_back(start, cp.offset - start);
                start = std::string_view::npos;
            }
        } else if (start == std::string_view::npos) {
            start = cp.offset;
        }
    }
    if (start != std::string_view::npos) out.emplace_back(start, s.size() - start);
    return out;
}

} // namespace sumctl::detail
