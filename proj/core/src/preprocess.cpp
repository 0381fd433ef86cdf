#include "imbtext/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace imbtext {
namespace {

struct Range {
    char32_t lo;
    char32_t hi;
};

struct FoldEntry {
    char32_t cp;
    std::array<char32_t, 3> out;
};

#include "unicode_tables.inc"

template <std::size_t N>
bool in_ranges(const Range (&table)[N], char32_t cp) {
    const Range* end = table + N;
    const Range* it = std::upper_bound(table, end, cp, [](char32_t v, const Range& r) { return v < r.lo; });
    return it != table && cp <= (it - 1)->hi;
}

bool is_space(char32_t cp) { return in_ranges(kSpaceRanges, cp); }
bool is_punct_sym(char32_t cp) { return in_ranges(kPunctSymRanges, cp); }
bool is_control(char32_t cp) { return in_ranges(kControlRanges, cp); }
bool is_digit(char32_t cp) { return in_ranges(kDigitRanges, cp); }

// Appends the case folding of cp (1..3 code points, usually 1).
void fold_append(char32_t cp, std::u32string& out) {
    constexpr std::size_t n = sizeof(kFoldTable) / sizeof(kFoldTable[0]);
    const FoldEntry* end = kFoldTable + n;
    const FoldEntry* it =
        std::lower_bound(kFoldTable, end, cp, [](const FoldEntry& e, char32_t v) { return e.cp < v; });
    if (it != end && it->cp == cp) {
        for (char32_t f : it->out) {
            if (f != 0) out.push_back(f);
        }
    } else {
        out.push_back(cp);
    }
}

// Lenient UTF-8 decode; invalid sequences become U+FFFD (a symbol, so the
// punctuation pass deletes them).
std::u32string decode_utf8(std::string_view s) {
    std::u32string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        const auto b0 = static_cast<unsigned char>(s[i]);
        char32_t cp = 0;
        std::size_t len = 0;
        if (b0 < 0x80) {
            cp = b0;
            len = 1;
        } else if ((b0 & 0xE0) == 0xC0) {
            cp = b0 & 0x1F;
            len = 2;
        } else if ((b0 & 0xF0) == 0xE0) {
            cp = b0 & 0x0F;
            len = 3;
        } else if ((b0 & 0xF8) == 0xF0) {
            cp = b0 & 0x07;
            len = 4;
        } else {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        if (i + len > s.size()) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        bool ok = true;
        for (std::size_t k = 1; k < len; ++k) {
            const auto b = static_cast<unsigned char>(s[i + k]);
            if ((b & 0xC0) != 0x80) {
                ok = false;
                break;
            }
            cp = (cp << 6) | (b & 0x3F);
        }
        const bool overlong = (len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000);
        if (!ok || overlong || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
            out.push_back(0xFFFD);
            ++i;
            continue;
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void encode_utf8(char32_t cp, std::string& out) {
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

bool ascii_alpha(char32_t c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char32_t ascii_lower(char32_t c) { return (c >= 'A' && c <= 'Z') ? c + 32 : c; }

// URL tokens: "scheme://..." with scheme = [A-Za-z][A-Za-z0-9+.-]*, or a
// leading "www." (case-insensitive).
bool is_url_token(const char32_t* tok, std::size_t n) {
    if (n >= 5) {
        bool www = ascii_lower(tok[0]) == 'w' && ascii_lower(tok[1]) == 'w' && ascii_lower(tok[2]) == 'w' &&
                   tok[3] == '.';
        if (www) return true;
    }
    if (!ascii_alpha(tok[0])) return false;
    for (std::size_t i = 1; i + 2 < n; ++i) {
        const char32_t c = tok[i];
        if (c == ':') return tok[i + 1] == '/' && tok[i + 2] == '/';
        if (!ascii_alpha(c) && !(c >= '0' && c <= '9') && c != '+' && c != '.' && c != '-') return false;
    }
    return false;
}

bool is_escape_letter(char32_t c) {
    switch (c) {
        case 'n': case 't': case 'r': case 'f': case 'v': case 'b': case '0':
        case '\\': case '\'': case '"':
            return true;
        default:
            return false;
    }
}

}  // namespace

std::string preprocess_text(std::string_view raw) {
    const std::u32string cps = decode_utf8(raw);

    std::u32string cleaned;
    cleaned.reserve(cps.size());
    std::size_t i = 0;
    while (i < cps.size()) {
        if (is_space(cps[i])) {
            cleaned.push_back(U' ');
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < cps.size() && !is_space(cps[j])) ++j;
        if (is_url_token(cps.data() + i, j - i)) {
            i = j;
            continue;
        }
        for (std::size_t k = i; k < j; ++k) {
            const char32_t c = cps[k];
            if (c == U'\\' && k + 1 < j && is_escape_letter(cps[k + 1])) {
                cleaned.push_back(U' ');
                ++k;
            } else if (is_control(c)) {
                cleaned.push_back(U' ');
            } else if (is_punct_sym(c) || is_digit(c)) {
                // dropped
            } else {
                fold_append(c, cleaned);
            }
        }
        i = j;
    }

    std::string out;
    out.reserve(cleaned.size());
    bool pending_space = false;
    bool begun = false;
    for (char32_t c : cleaned) {
        if (c == U' ') {
            pending_space = true;
            continue;
        }
        if (pending_space && begun) out.push_back(' ');
        pending_space = false;
        begun = true;
        encode_utf8(c, out);
    }
    return out;
}

std::vector<std::string> tokenize(std::string_view text) {
    const std::u32string cps = decode_utf8(text);
    std::vector<std::string> tokens;
    std::string cur;
    for (char32_t c : cps) {
        if (is_space(c)) {
            if (!cur.empty()) tokens.push_back(std::move(cur)), cur.clear();
        } else {
            encode_utf8(c, cur);
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

}  // namespace imbtext
