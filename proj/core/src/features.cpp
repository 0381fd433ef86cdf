#include "imbtext/features.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "imbtext/error.hpp"

namespace imbtext {

using nlohmann::json;

double FeatureVector::l2_norm() const {
    double s = 0.0;
    if (is_dense)
        for (double v : dense) s += v * v;
    else
        for (const auto& [i, v] : entries) s += v * v;
    return std::sqrt(s);
}

TfidfModel TfidfModel::fit(const std::vector<std::vector<std::string>>& units, TfidfConfig config) {
    if (units.empty()) throw ValidationError("fit_tfidf: unit list is empty");
    if (config.max_tokens < 1) throw ValidationError("fit_tfidf: max_tokens must be positive");
    if (config.min_df < 1) throw ValidationError("fit_tfidf: min_df must be positive");

    std::map<std::string, std::int64_t> df;
    for (const auto& unit : units) {
        const std::size_t n = std::min<std::size_t>(unit.size(), static_cast<std::size_t>(config.max_tokens));
        std::vector<std::string> seen(unit.begin(), unit.begin() + n);
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (auto& t : seen) df[t]++;
    }

    TfidfModel model;
    model.config_ = config;
    model.n_docs_ = static_cast<int>(units.size());
    for (const auto& [term, count] : df) {
        if (count >= config.min_df) {
            model.terms_.push_back(term);
            model.doc_freqs_.push_back(count);
        }
    }
    model.idf_.reserve(model.terms_.size());
    for (std::int64_t d : model.doc_freqs_)
        model.idf_.push_back(std::log((1.0 + model.n_docs_) / (1.0 + static_cast<double>(d))) + 1.0);
    return model;
}

FeatureVector TfidfModel::transform(const std::vector<std::string>& tokens) const {
    FeatureVector out;
    out.dim = dim();
    out.source = FeatureSource::Tfidf;
    out.is_dense = false;

    const std::size_t n = std::min<std::size_t>(tokens.size(), static_cast<std::size_t>(config_.max_tokens));
    std::map<int, double> tf;
    for (std::size_t i = 0; i < n; ++i) {
        const auto it = std::lower_bound(terms_.begin(), terms_.end(), tokens[i]);
        if (it != terms_.end() && *it == tokens[i]) tf[static_cast<int>(it - terms_.begin())] += 1.0;
    }
    double norm_sq = 0.0;
    out.entries.reserve(tf.size());
    for (const auto& [col, count] : tf) {
        const double v = count * idf_[col];
        out.entries.emplace_back(col, v);
        norm_sq += v * v;
    }
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [col, v] : out.entries) v *= inv;
    }
    return out;
}

std::int64_t TfidfModel::doc_freq(const std::string& term) const {
    const auto it = std::lower_bound(terms_.begin(), terms_.end(), term);
    if (it == terms_.end() || *it != term) return 0;
    return doc_freqs_[static_cast<std::size_t>(it - terms_.begin())];
}

nlohmann::ordered_json TfidfModel::to_json() const {
    nlohmann::ordered_json j;
    j["n_docs"] = n_docs_;
    j["max_tokens"] = config_.max_tokens;
    j["min_df"] = config_.min_df;
    j["terms"] = terms_;
    j["doc_freqs"] = doc_freqs_;
    return j;
}

TfidfModel TfidfModel::from_json(const json& j) {
    TfidfModel model;
    try {
        model.n_docs_ = j.at("n_docs").get<int>();
        model.config_.max_tokens = j.at("max_tokens").get<int>();
        model.config_.min_df = j.at("min_df").get<int>();
        model.terms_ = j.at("terms").get<std::vector<std::string>>();
        model.doc_freqs_ = j.at("doc_freqs").get<std::vector<std::int64_t>>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("tfidf model: ") + e.what());
    }
    if (model.terms_.size() != model.doc_freqs_.size())
        throw ValidationError("tfidf model: terms/doc_freqs size mismatch");
    if (!std::is_sorted(model.terms_.begin(), model.terms_.end()))
        throw ValidationError("tfidf model: vocabulary must be sorted");
    model.idf_.reserve(model.terms_.size());
    for (std::int64_t d : model.doc_freqs_) {
        if (d < 1 || d > model.n_docs_)
            throw ValidationError("tfidf model: document frequency out of [1, n_docs]");
        model.idf_.push_back(std::log((1.0 + model.n_docs_) / (1.0 + static_cast<double>(d))) + 1.0);
    }
    return model;
}

void TfidfModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write tfidf model: " + path.string());
    out << to_json().dump(2) << '\n';
}

TfidfModel TfidfModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open tfidf model: " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError("tfidf model " + path.string() + ": " + e.what());
    }
    return from_json(j);
}

EmbeddingTable EmbeddingTable::from_map(std::map<std::string, std::vector<double>> vectors) {
    EmbeddingTable table;
    for (const auto& [id, vec] : vectors) {
        if (table.dim_ == 0) table.dim_ = static_cast<int>(vec.size());
        if (vec.empty() || static_cast<int>(vec.size()) != table.dim_)
            throw ValidationError("embedding table: inconsistent dimension for unit '" + id + "'");
        for (double v : vec)
            if (!std::isfinite(v))
                throw ValidationError("embedding table: non-finite value for unit '" + id + "'");
    }
    table.vectors_ = std::move(vectors);
    return table;
}

FeatureVector EmbeddingTable::get(const std::string& unit_id) const {
    const auto it = vectors_.find(unit_id);
    if (it == vectors_.end()) throw ValidationError("no embedding for unit '" + unit_id + "'");
    FeatureVector out;
    out.dim = dim_;
    out.source = FeatureSource::Embedding;
    out.is_dense = true;
    out.dense = it->second;
    return out;
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path,
                                    const std::set<std::string>& expected_ids) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open embedding file: " + path.string());

    EmbeddingTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "line " + std::to_string(line_no);
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        }
        if (!j.is_object() || !j.contains("id") || !j.at("id").is_string() || !j.contains("vector") ||
            !j.at("vector").is_array())
            throw ValidationError(where + ": expected {\"id\": str, \"vector\": [real, ...]}");
        const std::string id = j.at("id").get<std::string>();
        std::vector<double> vec;
        vec.reserve(j.at("vector").size());
        for (const auto& v : j.at("vector")) {
            if (!v.is_number()) throw ValidationError(where + ": vector entries must be numbers");
            const double x = v.get<double>();
            if (!std::isfinite(x)) throw ValidationError(where + ": non-finite value in vector");
            vec.push_back(x);
        }
        if (table.vectors_.empty()) {
            table.dim_ = static_cast<int>(vec.size());
            if (table.dim_ == 0) throw ValidationError(where + ": empty vector");
        } else if (static_cast<int>(vec.size()) != table.dim_) {
            throw ValidationError(where + ": vector has dimension " + std::to_string(vec.size()) +
                                  ", expected " + std::to_string(table.dim_));
        }
        if (!table.vectors_.emplace(id, std::move(vec)).second)
            throw ValidationError(where + ": duplicate unit id '" + id + "'");
    }

    std::vector<std::string> missing;
    for (const auto& id : expected_ids)
        if (!table.contains(id)) missing.push_back(id);
    if (!missing.empty()) {
        std::ostringstream msg;
        msg << "embedding file " << path.string() << " is missing " << missing.size() << " unit id(s):";
        const std::size_t show = std::min<std::size_t>(missing.size(), 10);
        for (std::size_t i = 0; i < show; ++i) msg << ' ' << missing[i];
        if (missing.size() > show) msg << " ...";
        throw ValidationError(msg.str());
    }
    return table;
}

}  // namespace imbtext
