#include "doctest.h"
#include "imbtext/preprocess.hpp"
#include "imbtext/rng.hpp"

using imbtext::preprocess_text;
using imbtext::tokenize;

TEST_SUITE("preprocess") {

TEST_CASE("punctuation and digits removed, lowercased") {
    CHECK(preprocess_text("Hello, World! 123") == "hello world");
}

TEST_CASE("url tokens dropped before punctuation stripping") {
    CHECK(preprocess_text("see https://x.y/z\nNow") == "see now");
    CHECK(preprocess_text("visit www.example.com today") == "visit today");
    CHECK(preprocess_text("HTTP://UPPER.CASE/path works") == "works");
    CHECK(preprocess_text("ftp+ssh://host/a b") == "b");
}

TEST_CASE("empty input") { CHECK(preprocess_text("") == ""); }

TEST_CASE("literal escape sequences separate words") {
    CHECK(preprocess_text("a\\nb") == "a b");
    CHECK(preprocess_text("tab\\there") == "tab here");
}

TEST_CASE("whitespace collapsed and trimmed") {
    CHECK(preprocess_text("  a\t\t b\r\n  c  ") == "a b c");
}

TEST_CASE("unicode case folding across scripts") {
    CHECK(preprocess_text("STRASSE Straße") == "strasse strasse");
    CHECK(preprocess_text("ПРИВЕТ Мир") == "привет мир");
    CHECK(preprocess_text("ΣΟΦΙΑ") == "σοφια");  // final sigma handled by folding
    CHECK(preprocess_text("Füße İstanbul") == preprocess_text(preprocess_text("Füße İstanbul")));
}

TEST_CASE("unicode punctuation and digit classes") {
    CHECK(preprocess_text("«guillemets» — dash… ١٢٣ ４５") == "guillemets dash");
    CHECK(preprocess_text("a©b€") == "ab");  // symbols So/Sc
}

TEST_CASE("digit runs inside words removed") {
    CHECK(preprocess_text("covid19 2nd g2g") == "covid nd gg");
}

TEST_CASE("tokens equal whitespace split") {
    const std::string t = preprocess_text("One two,  THREE. ");
    const auto toks = tokenize(t);
    REQUIRE(toks.size() == 3);
    CHECK(toks[0] == "one");
    CHECK(toks[1] == "two");
    CHECK(toks[2] == "three");
}

TEST_CASE("idempotence on random multilingual strings") {
    // code point pools spanning the corpus scripts plus punctuation noise
    const std::pair<char32_t, char32_t> pools[] = {
        {0x20, 0x7E},      // ASCII
        {0xC0, 0x17F},     // Latin extended
        {0x370, 0x3FF},    // Greek
        {0x400, 0x4FF},    // Cyrillic
        {0x10A0, 0x10FF},  // Georgian
        {0x2000, 0x206F},  // general punctuation
        {0x660, 0x669},    // Arabic-Indic digits
        {0x1F600, 0x1F64F}  // emoji
    };
    imbtext::Rng rng(2024);
    for (int iter = 0; iter < 200; ++iter) {
        std::string s;
        const int len = 1 + static_cast<int>(rng.below(80));
        for (int i = 0; i < len; ++i) {
            const auto& pool = pools[rng.below(8)];
            const char32_t cp = pool.first + static_cast<char32_t>(rng.below(pool.second - pool.first + 1));
            if (cp < 0x80) {
                s.push_back(static_cast<char>(cp));
            } else if (cp < 0x800) {
                s.push_back(static_cast<char>(0xC0 | (cp >> 6)));
                s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else if (cp < 0x10000) {
                s.push_back(static_cast<char>(0xE0 | (cp >> 12)));
                s.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            } else {
                s.push_back(static_cast<char>(0xF0 | (cp >> 18)));
                s.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
                s.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
                s.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
            }
        }
        const std::string once = preprocess_text(s);
        CHECK(preprocess_text(once) == once);
    }
}

TEST_CASE("invalid utf-8 does not crash and stays idempotent") {
    const std::string bad = "ok \xFF\xC3 \xE0\x80 end";
    const std::string once = preprocess_text(bad);
    CHECK(preprocess_text(once) == once);
}

}  // TEST_SUITE
