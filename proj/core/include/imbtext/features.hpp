#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace imbtext {

enum class FeatureSource { Tfidf, Embedding };

// Fixed-dimension input to the classifier. TF-IDF vectors stay sparse;
// embedding vectors are dense.
struct FeatureVector {
    int dim = 0;
    FeatureSource source = FeatureSource::Tfidf;
    bool is_dense = false;
    std::vector<double> dense;                      // when is_dense
    std::vector<std::pair<int, double>> entries;    // when sparse; index-sorted

    double l2_norm() const;
};

struct TfidfConfig {
    int max_tokens = 512;  // units are truncated to this many tokens
    int min_df = 1;        // terms below this document frequency are dropped
};

// Unigram TF-IDF with smoothed idf ln((1+N)/(1+df)) + 1 and L2 normalization.
class TfidfModel {
public:
    // `units` are token lists; each is truncated to max_tokens before counting.
    static TfidfModel fit(const std::vector<std::vector<std::string>>& units, TfidfConfig config);

    FeatureVector transform(const std::vector<std::string>& tokens) const;

    int dim() const { return static_cast<int>(terms_.size()); }
    int n_docs() const { return n_docs_; }
    int max_tokens() const { return config_.max_tokens; }
    std::int64_t doc_freq(const std::string& term) const;
    const std::vector<std::string>& terms() const { return terms_; }

    nlohmann::ordered_json to_json() const;
    static TfidfModel from_json(const nlohmann::json& j);
    void save(const std::filesystem::path& path) const;
    static TfidfModel load(const std::filesystem::path& path);

private:
    TfidfConfig config_;
    int n_docs_ = 0;
    std::vector<std::string> terms_;       // sorted; index == column
    std::vector<std::int64_t> doc_freqs_;  // aligned with terms_
    std::vector<double> idf_;              // precomputed per term
};

// Precomputed unit-id -> vector table, the stand-in for encoder output.
// A single table may mix languages and document/paragraph units.
class EmbeddingTable {
public:
    int dim() const { return dim_; }
    bool contains(const std::string& unit_id) const { return vectors_.count(unit_id) > 0; }
    FeatureVector get(const std::string& unit_id) const;
    std::size_t size() const { return vectors_.size(); }

    // JSON Lines {"id": str, "vector": [real, ...]}. Every expected id must be
    // present, all vectors must share one dimension and be finite.
    static EmbeddingTable load(const std::filesystem::path& path, const std::set<std::string>& expected_ids);

    static EmbeddingTable from_map(std::map<std::string, std::vector<double>> vectors);

private:
    int dim_ = 0;
    std::map<std::string, std::vector<double>> vectors_;
};

}  // namespace imbtext
