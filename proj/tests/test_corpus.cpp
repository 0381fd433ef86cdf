#include <set>

#include "doctest.h"
#include "imbtext/corpus.hpp"
#include "imbtext/error.hpp"
#include "test_util.hpp"

using namespace imbtext;
using testutil::TempDir;
using testutil::write_file;

namespace {

const char* kTwoDocs =
    R"({"id": "a1", "language": "en", "text": "Hello, World! 123", "labels_t1": "opinion"}
{"id": "a2", "language": "fr", "text": "Deux documents", "labels_t1": "reporting", "labels_t2": ["frame_x", "frame_y"]}
)";

}  // namespace

TEST_SUITE("corpus") {

TEST_CASE("load two well-formed lines") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"), kTwoDocs);
    const Corpus c = load_corpus(tmp.file("c.jsonl"));
    REQUIRE(c.docs.size() == 2);
    CHECK(c.docs[0].id == "a1");
    CHECK(c.docs[0].raw_text == "Hello, World! 123");
    CHECK(c.docs[0].text.empty());  // preprocessing not yet applied
    CHECK(c.docs[1].labels_t2->size() == 2);
    CHECK_FALSE(c.preprocessed);
}

TEST_CASE("empty file gives empty corpus") {
    TempDir tmp;
    write_file(tmp.file("empty.jsonl"), "");
    CHECK(load_corpus(tmp.file("empty.jsonl")).docs.empty());
}

TEST_CASE("duplicate id names the line") {
    TempDir tmp;
    write_file(tmp.file("dup.jsonl"),
               R"({"id": "710376094", "text": "x"}
{"id": "23114", "text": "y"}
{"id": "710376094", "text": "z"}
)");
    CHECK_THROWS_WITH_AS(load_corpus(tmp.file("dup.jsonl")),
                         doctest::Contains("line 3"), ValidationError);
}

TEST_CASE("malformed json reports the line number") {
    TempDir tmp;
    write_file(tmp.file("bad.jsonl"), "{\"id\": \"a\", \"text\": \"x\"}\n{oops\n");
    CHECK_THROWS_WITH_AS(load_corpus(tmp.file("bad.jsonl")), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("unknown task key rejected") {
    TempDir tmp;
    write_file(tmp.file("k.jsonl"), R"({"id": "a", "text": "x", "labels_t9": "nope"})");
    CHECK_THROWS_WITH_AS(load_corpus(tmp.file("k.jsonl")), doctest::Contains("labels_t9"),
                         ValidationError);
}

TEST_CASE("monolithic json array accepted") {
    TempDir tmp;
    write_file(tmp.file("arr.json"),
               R"([{"id": "a", "text": "x"}, {"id": "b", "text": "y"}])");
    CHECK(load_corpus(tmp.file("arr.json")).docs.size() == 2);
}

TEST_CASE("task filter drops other tasks' labels") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"), kTwoDocs);
    const Corpus c = load_corpus(tmp.file("c.jsonl"), std::set<Task>{Task::T1});
    CHECK(c.docs[1].label_t1.has_value());
    CHECK_FALSE(c.docs[1].labels_t2.has_value());
}

TEST_CASE("empty labels_t3 becomes the None label; mixing None is an error") {
    TempDir tmp;
    write_file(tmp.file("p.jsonl"),
               R"({"id": "a", "text": "x", "paragraphs": [{"para_id": 1, "text": "p one", "labels_t3": []}, {"para_id": 2, "text": "p two", "labels_t3": ["Loaded Language"]}]})");
    const Corpus c = load_corpus(tmp.file("p.jsonl"));
    REQUIRE(c.docs[0].paragraphs.size() == 2);
    CHECK(*c.docs[0].paragraphs[0].labels_t3 == std::vector<std::string>{kNoneLabel});

    write_file(tmp.file("mix.jsonl"),
               R"({"id": "a", "text": "x", "paragraphs": [{"para_id": 1, "text": "p", "labels_t3": ["None", "Repetition"]}]})");
    CHECK_THROWS_AS(load_corpus(tmp.file("mix.jsonl")), ValidationError);
}

TEST_CASE("para_id must strictly increase") {
    TempDir tmp;
    write_file(tmp.file("p.jsonl"),
               R"({"id": "a", "text": "x", "paragraphs": [{"para_id": 2, "text": "p"}, {"para_id": 2, "text": "q"}]})");
    CHECK_THROWS_AS(load_corpus(tmp.file("p.jsonl")), ValidationError);
}

TEST_CASE("merge rejects duplicate ids across corpora") {
    TempDir tmp;
    write_file(tmp.file("a.jsonl"), R"({"id": "a", "text": "x"})");
    write_file(tmp.file("b.jsonl"), R"({"id": "a", "text": "y"})");
    Corpus c = load_corpus(tmp.file("a.jsonl"));
    CHECK_THROWS_AS(merge_corpus(c, load_corpus(tmp.file("b.jsonl"))), ValidationError);
}

TEST_CASE("preprocess fills text and tokens") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"), kTwoDocs);
    Corpus c = load_corpus(tmp.file("c.jsonl"));
    preprocess(c);
    CHECK(c.docs[0].text == "hello world");
    CHECK(c.docs[0].tokens == std::vector<std::string>{"hello", "world"});
    CHECK(c.docs[0].raw_text == "Hello, World! 123");
}

TEST_CASE("token_stats: single document") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"), R"({"id": "a", "text": "a b c", "labels_t1": "x"})");
    Corpus c = load_corpus(tmp.file("c.jsonl"));
    preprocess(c);
    const StatsReport s = token_stats(c, Task::T1);
    CHECK(s.min_tokens == 3);
    CHECK(s.max_tokens == 3);
    CHECK(s.avg_tokens == doctest::Approx(3.0));
}

TEST_CASE("token_stats: paragraphs of 3 and 5 tokens") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"),
               R"({"id": "a", "text": "ignored", "paragraphs": [{"para_id": 1, "text": "one two three", "labels_t3": []}, {"para_id": 2, "text": "a b c d e", "labels_t3": ["x"]}]})");
    Corpus c = load_corpus(tmp.file("c.jsonl"));
    preprocess(c);
    const StatsReport s = token_stats(c, Task::T3);
    CHECK(s.min_tokens == 3);
    CHECK(s.max_tokens == 5);
    CHECK(s.avg_tokens == doctest::Approx(4.0));
    CHECK(s.min_tokens <= s.avg_tokens);
    CHECK(s.avg_tokens <= s.max_tokens);
}

TEST_CASE("token_stats errors") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"), R"({"id": "a", "text": "a b c", "labels_t1": "x"})");
    Corpus c = load_corpus(tmp.file("c.jsonl"));
    CHECK_THROWS_AS(token_stats(c, Task::T1), ValidationError);  // not preprocessed
    preprocess(c);
    CHECK_THROWS_AS(token_stats(c, Task::T2), ValidationError);  // no units
}

TEST_CASE("label space counts and modes") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"),
               R"({"id": "a", "text": "x", "labels_t1": "opinion", "labels_t2": ["f1"]}
{"id": "b", "text": "y", "labels_t1": "opinion", "labels_t2": ["f1", "f2"]}
{"id": "c", "text": "z", "labels_t1": "satire"}
)");
    const Corpus c = load_corpus(tmp.file("c.jsonl"));
    const LabelSpace t1 = build_label_space(c, Task::T1);
    CHECK(t1.mode == LabelMode::Multiclass);
    REQUIRE(t1.labels == std::vector<std::string>{"opinion", "satire"});
    CHECK(t1.counts == std::vector<std::int64_t>{2, 1});
    // multiclass: counts sum to the number of labeled documents
    CHECK(t1.counts[0] + t1.counts[1] == 3);

    const LabelSpace t2 = build_label_space(c, Task::T2);
    CHECK(t2.mode == LabelMode::Multilabel);
    CHECK(t2.counts == std::vector<std::int64_t>{2, 1});
    CHECK(t2.index_of("f2") == 1);
    CHECK(t2.index_of("nope") == -1);
}

TEST_CASE("collect_units covers labeled units in corpus order") {
    TempDir tmp;
    write_file(tmp.file("c.jsonl"),
               R"({"id": "a", "text": "x", "labels_t1": "g", "paragraphs": [{"para_id": 1, "text": "p", "labels_t3": []}, {"para_id": 3, "text": "q", "labels_t3": ["t"]}]}
{"id": "b", "text": "y"}
)");
    Corpus c = load_corpus(tmp.file("c.jsonl"));
    preprocess(c);
    const LabelSpace t3 = build_label_space(c, Task::T3);
    const auto units = collect_units(c, Task::T3, t3);
    REQUIRE(units.size() == 2);
    CHECK(units[0].unit_id == "a#1");
    CHECK(units[1].unit_id == "a#3");
    CHECK(units[0].article_id() == "a");
    const auto all = collect_units_unlabeled(c, Task::T1);
    CHECK(all.size() == 2);  // unlabeled document included on the predict path
}

}  // TEST_SUITE
