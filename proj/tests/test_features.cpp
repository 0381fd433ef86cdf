#include <cmath>

#include "doctest.h"
#include "imbtext/error.hpp"
#include "imbtext/features.hpp"
#include "imbtext/rng.hpp"
#include "test_util.hpp"

using namespace imbtext;
using testutil::TempDir;
using testutil::write_file;

TEST_SUITE("features") {

TEST_CASE("fit: vocabulary, document frequencies, n_docs") {
    const std::vector<std::vector<std::string>> units = {{"a", "b"}, {"a", "c"}};
    const TfidfModel m = TfidfModel::fit(units, {.max_tokens = 512, .min_df = 1});
    CHECK(m.dim() == 3);
    CHECK(m.n_docs() == 2);
    CHECK(m.terms() == std::vector<std::string>{"a", "b", "c"});
    CHECK(m.doc_freq("a") == 2);
    CHECK(m.doc_freq("b") == 1);
    CHECK(m.doc_freq("c") == 1);
}

TEST_CASE("fit: min_df=2 keeps only 'a'") {
    const std::vector<std::vector<std::string>> units = {{"a", "b"}, {"a", "c"}};
    const TfidfModel m = TfidfModel::fit(units, {.max_tokens = 512, .min_df = 2});
    CHECK(m.terms() == std::vector<std::string>{"a"});
}

TEST_CASE("fit: empty unit list errors") {
    CHECK_THROWS_AS(TfidfModel::fit({}, {}), ValidationError);
}

TEST_CASE("transform matches the stated formula, hand-derived case") {
    const std::vector<std::vector<std::string>> units = {{"a", "b"}, {"a", "c"}};
    const TfidfModel m = TfidfModel::fit(units, {.max_tokens = 512, .min_df = 1});
    const FeatureVector v = m.transform({"a", "b"});

    // independent evaluation of tf * (ln((1+N)/(1+df)) + 1), then L2
    const double idf_a = std::log(3.0 / 3.0) + 1.0;
    const double idf_b = std::log(3.0 / 2.0) + 1.0;
    const double norm = std::sqrt(idf_a * idf_a + idf_b * idf_b);
    REQUIRE(v.entries.size() == 2);
    CHECK(v.entries[0].first == 0);
    CHECK(v.entries[0].second == doctest::Approx(idf_a / norm).epsilon(1e-12));
    CHECK(v.entries[1].second == doctest::Approx(idf_b / norm).epsilon(1e-12));
    // frozen digits
    CHECK(v.entries[0].second == doctest::Approx(0.5797).epsilon(1e-4));
    CHECK(v.entries[1].second == doctest::Approx(0.8148).epsilon(1e-4));
}

TEST_CASE("out-of-vocabulary and empty units give zero vectors") {
    const std::vector<std::vector<std::string>> units = {{"a", "b"}, {"a", "c"}};
    const TfidfModel m = TfidfModel::fit(units, {.max_tokens = 512, .min_df = 1});
    CHECK(m.transform({"z"}).entries.empty());
    CHECK(m.transform({}).entries.empty());
    CHECK(m.transform({"z"}).l2_norm() == 0.0);
}

TEST_CASE("properties: norm in {0,1}, idf >= 1, no zero vector for in-vocab units") {
    Rng rng(31);
    std::vector<std::vector<std::string>> units;
    for (int u = 0; u < 40; ++u) {
        std::vector<std::string> toks;
        const int len = 1 + static_cast<int>(rng.below(30));
        for (int t = 0; t < len; ++t) toks.push_back("w" + std::to_string(rng.below(25)));
        units.push_back(std::move(toks));
    }
    const TfidfModel m = TfidfModel::fit(units, {.max_tokens = 512, .min_df = 1});
    for (const auto& term : m.terms()) {
        const double idf =
            std::log((1.0 + m.n_docs()) / (1.0 + static_cast<double>(m.doc_freq(term)))) + 1.0;
        CHECK(idf >= 1.0);
    }
    for (const auto& u : units) {
        const double norm = m.transform(u).l2_norm();
        CHECK(norm == doctest::Approx(1.0).epsilon(1e-9));  // every unit has vocab terms here
    }
}

TEST_CASE("truncation: transform equals transform of the first max_tokens tokens") {
    Rng rng(77);
    std::vector<std::vector<std::string>> units;
    for (int u = 0; u < 10; ++u) {
        std::vector<std::string> toks;
        for (int t = 0; t < 40; ++t) toks.push_back("w" + std::to_string(rng.below(12)));
        units.push_back(std::move(toks));
    }
    const TfidfModel m = TfidfModel::fit(units, {.max_tokens = 16, .min_df = 1});
    for (const auto& u : units) {
        const std::vector<std::string> head(u.begin(), u.begin() + 16);
        const FeatureVector full = m.transform(u);
        const FeatureVector trunc = m.transform(head);
        REQUIRE(full.entries.size() == trunc.entries.size());
        for (std::size_t i = 0; i < full.entries.size(); ++i) {
            CHECK(full.entries[i].first == trunc.entries[i].first);
            CHECK(full.entries[i].second == trunc.entries[i].second);
        }
    }
}

TEST_CASE("tfidf model json round trip") {
    TempDir tmp;
    const std::vector<std::vector<std::string>> units = {{"a", "b"}, {"a", "c"}};
    const TfidfModel m = TfidfModel::fit(units, {.max_tokens = 64, .min_df = 1});
    m.save(tmp.file("m.json"));
    const TfidfModel back = TfidfModel::load(tmp.file("m.json"));
    CHECK(back.dim() == m.dim());
    CHECK(back.n_docs() == m.n_docs());
    CHECK(back.max_tokens() == 64);
    const auto a = m.transform({"a", "b", "b"});
    const auto b = back.transform({"a", "b", "b"});
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) CHECK(a.entries[i] == b.entries[i]);
}

TEST_CASE("embeddings: clean load") {
    TempDir tmp;
    write_file(tmp.file("e.jsonl"),
               R"({"id": "a", "vector": [1.0, 2.0, 3.0, 4.0]}
{"id": "b", "vector": [0.5, 0.5, 0.5, 0.5]}
{"id": "c", "vector": [0, 0, 0, 1]}
)");
    const EmbeddingTable t = EmbeddingTable::load(tmp.file("e.jsonl"), {"a", "b", "c"});
    CHECK(t.dim() == 4);
    CHECK(t.size() == 3);
    const FeatureVector v = t.get("a");
    CHECK(v.is_dense);
    CHECK(v.dense == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("embeddings: dimension mismatch names the line") {
    TempDir tmp;
    write_file(tmp.file("e.jsonl"),
               R"({"id": "a", "vector": [1, 2, 3, 4]}
{"id": "b", "vector": [1, 2, 3, 4, 5]}
)");
    CHECK_THROWS_WITH_AS(EmbeddingTable::load(tmp.file("e.jsonl"), {"a"}), doctest::Contains("line 2"),
                         ValidationError);
}

TEST_CASE("embeddings: missing expected id listed") {
    TempDir tmp;
    write_file(tmp.file("e.jsonl"), R"({"id": "a", "vector": [1, 2]})");
    CHECK_THROWS_WITH_AS(EmbeddingTable::load(tmp.file("e.jsonl"), {"a", "x"}),
                         doctest::Contains("x"), ValidationError);
}

TEST_CASE("embeddings: non-finite values and duplicates rejected") {
    TempDir tmp;
    write_file(tmp.file("nan.jsonl"), "{\"id\": \"a\", \"vector\": [1e999, 0]}\n");
    CHECK_THROWS_AS(EmbeddingTable::load(tmp.file("nan.jsonl"), {}), imbtext::Error);
    write_file(tmp.file("dup.jsonl"),
               "{\"id\": \"a\", \"vector\": [1, 2]}\n{\"id\": \"a\", \"vector\": [3, 4]}\n");
    CHECK_THROWS_AS(EmbeddingTable::load(tmp.file("dup.jsonl"), {}), ValidationError);
}

}  // TEST_SUITE
