#include "imbtext/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "imbtext/error.hpp"
#include "imbtext/preprocess.hpp"

namespace imbtext {

using nlohmann::json;

namespace {

std::vector<std::string> string_array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ValidationError(where + ": expected an array of strings");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_string()) throw ValidationError(where + ": expected an array of strings");
        out.push_back(e.get<std::string>());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool task_selected(const std::optional<std::set<Task>>& filter, Task task) {
    return !filter || filter->count(task) > 0;
}

Document parse_document(const json& j, const std::string& where,
                        const std::optional<std::set<Task>>& filter) {
    if (!j.is_object()) throw ValidationError(where + ": expected a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& key = it.key();
        if (key.rfind("labels_", 0) == 0 && key != "labels_t1" && key != "labels_t2")
            throw ValidationError(where + ": unknown task key '" + key + "'");
    }
    Document doc;
    if (!j.contains("id") || !j.at("id").is_string())
        throw ValidationError(where + ": missing string field 'id'");
    doc.id = j.at("id").get<std::string>();
    if (!j.contains("text") || !j.at("text").is_string())
        throw ValidationError(where + ": missing string field 'text'");
    doc.raw_text = j.at("text").get<std::string>();
    if (j.contains("language")) {
        if (!j.at("language").is_string()) throw ValidationError(where + ": 'language' must be a string");
        doc.language = j.at("language").get<std::string>();
    }
    // "labels_t1" is multiclass: the genre is a single string, not interpreted
    // per-task-key by mistake. Prefer "labels_t1"; accept null as unlabeled.
    if (j.contains("labels_t1") && !j.at("labels_t1").is_null() && task_selected(filter, Task::T1)) {
        if (!j.at("labels_t1").is_string())
            throw ValidationError(where + ": 'labels_t1' must be a single string");
        doc.label_t1 = j.at("labels_t1").get<std::string>();
    }
    if (j.contains("labels_t2") && !j.at("labels_t2").is_null() && task_selected(filter, Task::T2)) {
        auto labels = string_array(j.at("labels_t2"), where + ": labels_t2");
        // An empty framing set carries no training signal; treat as unlabeled.
        if (!labels.empty()) doc.labels_t2 = std::move(labels);
    }
    if (j.contains("paragraphs")) {
        const json& paras = j.at("paragraphs");
        if (!paras.is_array()) throw ValidationError(where + ": 'paragraphs' must be an array");
        int prev_para_id = -1;
        for (const auto& p : paras) {
            if (!p.is_object()) throw ValidationError(where + ": paragraph entries must be objects");
            for (auto it = p.begin(); it != p.end(); ++it) {
                const std::string& key = it.key();
                if (key.rfind("labels_", 0) == 0 && key != "labels_t3")
                    throw ValidationError(where + ": unknown task key '" + key + "'");
            }
            Paragraph para;
            if (!p.contains("para_id") || !p.at("para_id").is_number_integer())
                throw ValidationError(where + ": paragraph missing integer 'para_id'");
            para.para_id = p.at("para_id").get<int>();
            if (para.para_id <= prev_para_id)
                throw ValidationError(where + ": para_id values must be strictly increasing");
            prev_para_id = para.para_id;
            if (!p.contains("text") || !p.at("text").is_string())
                throw ValidationError(where + ": paragraph missing string field 'text'");
            para.raw_text = p.at("text").get<std::string>();
            if (p.contains("labels_t3") && !p.at("labels_t3").is_null() && task_selected(filter, Task::T3)) {
                auto labels = string_array(p.at("labels_t3"), where + ": labels_t3");
                if (labels.empty()) {
                    labels.push_back(kNoneLabel);
                } else if (labels.size() > 1 &&
                           std::find(labels.begin(), labels.end(), kNoneLabel) != labels.end()) {
                    throw ValidationError(where + ": '" + std::string(kNoneLabel) +
                                          "' cannot be combined with other T3 labels");
                }
                para.labels_t3 = std::move(labels);
            }
            doc.paragraphs.push_back(std::move(para));
        }
    }
    return doc;
}

}  // namespace

bool Document::labeled_for(Task task) const {
    switch (task) {
        case Task::T1: return label_t1.has_value();
        case Task::T2: return labels_t2.has_value();
        case Task::T3:
            return std::any_of(paragraphs.begin(), paragraphs.end(),
                               [](const Paragraph& p) { return p.labels_t3.has_value(); });
    }
    return false;
}

const Document* Corpus::find(const std::string& id) const {
    for (const auto& d : docs)
        if (d.id == id) return &d;
    return nullptr;
}

int LabelSpace::index_of(const std::string& label) const {
    const auto it = std::lower_bound(labels.begin(), labels.end(), label);
    if (it == labels.end() || *it != label) return -1;
    return static_cast<int>(it - labels.begin());
}

Corpus load_corpus(const std::filesystem::path& path, const std::optional<std::set<Task>>& task_filter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open corpus file: " + path.string());

    Corpus corpus;
    std::unordered_set<std::string> seen_ids;
    const auto add_document = [&](Document&& doc, const std::string& where) {
        if (!seen_ids.insert(doc.id).second)
            throw ValidationError(where + ": duplicate document id '" + doc.id + "'");
        corpus.docs.push_back(std::move(doc));
    };

    // Sniff: a leading '[' means one monolithic JSON array, otherwise JSON Lines.
    char first = 0;
    while (in.get(first) && (first == ' ' || first == '\t' || first == '\n' || first == '\r')) {
    }
    if (!in) return corpus;  // empty file
    in.seekg(0);

    if (first == '[') {
        json root;
        try {
            root = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ParseError("corpus file " + path.string() + ": " + e.what());
        }
        std::size_t idx = 0;
        for (const auto& entry : root) {
            const std::string where = "entry " + std::to_string(idx + 1);
            add_document(parse_document(entry, where, task_filter), where);
            ++idx;
        }
        return corpus;
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(where + ": " + e.what());
        }
        add_document(parse_document(j, where, task_filter), where);
    }
    return corpus;
}

void merge_corpus(Corpus& corpus, Corpus&& extra) {
    std::unordered_set<std::string> seen;
    for (const auto& d : corpus.docs) seen.insert(d.id);
    for (auto& d : extra.docs) {
        if (!seen.insert(d.id).second)
            throw ValidationError("merge: duplicate document id '" + d.id + "'");
        corpus.docs.push_back(std::move(d));
    }
    corpus.preprocessed = corpus.preprocessed && extra.preprocessed;
}

void preprocess(Corpus& corpus) {
    for (auto& doc : corpus.docs) {
        doc.text = preprocess_text(doc.raw_text);
        doc.tokens = tokenize(doc.text);
        for (auto& para : doc.paragraphs) {
            para.text = preprocess_text(para.raw_text);
            para.tokens = tokenize(para.text);
        }
    }
    corpus.preprocessed = true;
}

LabelSpace build_label_space(const Corpus& corpus, Task task) {
    std::map<std::string, std::int64_t> counts;
    for (const auto& doc : corpus.docs) {
        switch (task) {
            case Task::T1:
                if (doc.label_t1) counts[*doc.label_t1]++;
                break;
            case Task::T2:
                if (doc.labels_t2)
                    for (const auto& l : *doc.labels_t2) counts[l]++;
                break;
            case Task::T3:
                for (const auto& para : doc.paragraphs)
                    if (para.labels_t3)
                        for (const auto& l : *para.labels_t3) counts[l]++;
                break;
        }
    }
    LabelSpace space;
    space.task = task;
    space.mode = mode_of(task);
    for (auto& [label, count] : counts) {
        space.labels.push_back(label);
        space.counts.push_back(count);
    }
    return space;
}

StatsReport token_stats(const Corpus& corpus, Task task) {
    if (!corpus.preprocessed) throw ValidationError("token_stats: corpus has not been preprocessed");
    StatsReport report;
    report.task = task;
    long total = 0;
    const auto account = [&](long n) {
        if (report.n_units == 0 || n < report.min_tokens) report.min_tokens = n;
        if (report.n_units == 0 || n > report.max_tokens) report.max_tokens = n;
        total += n;
        report.n_units++;
    };
    for (const auto& doc : corpus.docs) {
        if (paragraph_level(task)) {
            for (const auto& para : doc.paragraphs)
                if (para.labels_t3) account(static_cast<long>(para.tokens.size()));
        } else if (doc.labeled_for(task)) {
            account(static_cast<long>(doc.tokens.size()));
        }
    }
    if (report.n_units == 0)
        throw ValidationError("token_stats: no units labeled for task " + to_string(task));
    report.avg_tokens = static_cast<double>(total) / static_cast<double>(report.n_units);
    return report;
}

std::vector<Unit> collect_units(const Corpus& corpus, Task task, const LabelSpace& space) {
    std::vector<Unit> units;
    const auto resolve = [&](const std::vector<std::string>& labels, const std::string& unit_id) {
        std::vector<int> idx;
        idx.reserve(labels.size());
        for (const auto& l : labels) {
            const int i = space.index_of(l);
            if (i < 0)
                throw ValidationError("unit " + unit_id + ": label '" + l + "' not in the " +
                                      to_string(task) + " label space");
            idx.push_back(i);
        }
        return idx;
    };
    for (const auto& doc : corpus.docs) {
        if (paragraph_level(task)) {
            for (const auto& para : doc.paragraphs) {
                if (!para.labels_t3) continue;
                Unit u;
                u.unit_id = doc.id + "#" + std::to_string(para.para_id);
                u.doc = &doc;
                u.para = &para;
                u.labels = resolve(*para.labels_t3, u.unit_id);
                units.push_back(std::move(u));
            }
        } else if (doc.labeled_for(task)) {
            Unit u;
            u.unit_id = doc.id;
            u.doc = &doc;
            if (task == Task::T1)
                u.labels = resolve({*doc.label_t1}, u.unit_id);
            else
                u.labels = resolve(*doc.labels_t2, u.unit_id);
            units.push_back(std::move(u));
        }
    }
    return units;
}

std::vector<Unit> collect_units_unlabeled(const Corpus& corpus, Task task) {
    std::vector<Unit> units;
    for (const auto& doc : corpus.docs) {
        if (paragraph_level(task)) {
            for (const auto& para : doc.paragraphs) {
                Unit u;
                u.unit_id = doc.id + "#" + std::to_string(para.para_id);
                u.doc = &doc;
                u.para = &para;
                units.push_back(std::move(u));
            }
        } else {
            Unit u;
            u.unit_id = doc.id;
            u.doc = &doc;
            units.push_back(std::move(u));
        }
    }
    return units;
}

}  // namespace imbtext
