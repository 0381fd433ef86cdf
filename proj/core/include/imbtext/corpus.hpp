#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "imbtext/task.hpp"

namespace imbtext {

// T3 unit. labels_t3 semantics: absent -> not annotated for T3; present but
// empty in the input -> normalized to {"None"} at load.
struct Paragraph {
    int para_id = 0;
    std::string raw_text;
    std::string text;                 // preprocessed, filled by preprocess()
    std::vector<std::string> tokens;  // whitespace split of text
    std::optional<std::vector<std::string>> labels_t3;
};

struct Document {
    std::string id;
    std::string language;
    std::string raw_text;
    std::string text;
    std::vector<std::string> tokens;
    std::optional<std::string> label_t1;
    std::optional<std::vector<std::string>> labels_t2;
    std::vector<Paragraph> paragraphs;

    bool labeled_for(Task task) const;
};

struct Corpus {
    std::vector<Document> docs;
    bool preprocessed = false;

    const Document* find(const std::string& id) const;
};

// Ordered label set of one task plus training-unit counts per label.
struct LabelSpace {
    Task task = Task::T1;
    LabelMode mode = LabelMode::Multiclass;
    std::vector<std::string> labels;  // sorted, unique
    std::vector<std::int64_t> counts;

    int index_of(const std::string& label) const;  // -1 if absent
    int size() const { return static_cast<int>(labels.size()); }
};

struct StatsReport {
    Task task = Task::T1;
    long n_units = 0;
    long min_tokens = 0;
    long max_tokens = 0;
    double avg_tokens = 0.0;
};

// One training/evaluation unit: a document (T1/T2) or a paragraph (T3).
struct Unit {
    std::string unit_id;  // document id, or "<doc id>#<para_id>" for T3
    const Document* doc = nullptr;
    const Paragraph* para = nullptr;  // null for document-level tasks
    std::vector<int> labels;          // indices into the task LabelSpace

    const std::vector<std::string>& tokens() const { return para ? para->tokens : doc->tokens; }
    const std::string& article_id() const { return doc->id; }
    const std::string& language() const { return doc->language; }
};

// Reads a corpus file: JSON Lines (one document object per line) or a single
// JSON array. Raw text is kept verbatim; preprocessing is a separate step.
// task_filter, when given, drops label annotations of the other tasks.
Corpus load_corpus(const std::filesystem::path& path,
                   const std::optional<std::set<Task>>& task_filter = std::nullopt);

// Appends `extra`'s documents; duplicate ids across the two corpora are an error.
void merge_corpus(Corpus& corpus, Corpus&& extra);

// Applies preprocess_text to every document and paragraph and fills tokens.
void preprocess(Corpus& corpus);

LabelSpace build_label_space(const Corpus& corpus, Task task);

// Token-count statistics over the task's labeled units. Requires a
// preprocessed corpus and at least one unit.
StatsReport token_stats(const Corpus& corpus, Task task);

// Labeled units of a task in corpus order. Labels are resolved against
// `space`; a label missing from it is an error.
std::vector<Unit> collect_units(const Corpus& corpus, Task task, const LabelSpace& space);

// Units of a task regardless of labels (prediction path); `labels` left empty.
std::vector<Unit> collect_units_unlabeled(const Corpus& corpus, Task task);

}  // namespace imbtext
