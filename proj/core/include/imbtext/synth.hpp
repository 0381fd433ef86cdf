#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "imbtext/corpus.hpp"

namespace imbtext {

// Synthetic imbalanced fixture: class-conditional Gaussian features with
// per-class means at pairwise distance `separation` and unit covariance, so
// task difficulty is tunable through one knob. T2 labels mirror the T1 class
// (plus a feature-derived polarity label) and T3 paragraphs carry rare
// technique labels, which makes the fixture usable for transfer experiments.
struct SynthConfig {
    int n = 1234;
    std::vector<long> ratio = {878, 269, 87};  // apportioned to exactly n units
    int dim = 16;
    double separation = 3.0;
    std::uint64_t seed = 7;
    double t2_frac = 1.0;  // fraction of articles that carry T2 labels
    int max_paragraphs = 3;
};

struct SynthFixture {
    Corpus corpus;  // raw (not preprocessed); labels included
    std::map<std::string, std::vector<double>> embeddings;
    int dim = 0;
};

SynthFixture make_synth_fixture(const SynthConfig& config);

// Exact class counts summing to n, largest-remainder apportionment of the
// ratio. When the ratio already sums to n the counts equal the ratio.
std::vector<long> apportion_counts(const std::vector<long>& ratio, int n);

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);
void write_embeddings_jsonl(const std::map<std::string, std::vector<double>>& embeddings,
                            const std::filesystem::path& path);

}  // namespace imbtext
