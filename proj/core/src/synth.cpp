#include "imbtext/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "imbtext/error.hpp"
#include "imbtext/rng.hpp"

namespace imbtext {

using nlohmann::ordered_json;

std::vector<long> apportion_counts(const std::vector<long>& ratio, int n) {
    if (ratio.size() < 2) throw ValidationError("synth: need at least 2 classes in the ratio");
    long total = 0;
    for (long r : ratio) {
        if (r < 1) throw ValidationError("synth: ratio parts must be >= 1");
        total += r;
    }
    if (n < static_cast<int>(ratio.size())) throw ValidationError("synth: n smaller than the class count");

    std::vector<long> counts(ratio.size());
    std::vector<std::pair<long, std::size_t>> remainders;  // (-remainder, class) for sorting
    long assigned = 0;
    for (std::size_t c = 0; c < ratio.size(); ++c) {
        const long num = ratio[c] * n;
        counts[c] = num / total;
        assigned += counts[c];
        remainders.emplace_back(-(num % total), c);
    }
    std::sort(remainders.begin(), remainders.end());
    for (long left = n - assigned, i = 0; left > 0; --left, ++i) counts[remainders[i].second]++;
    for (long c : counts)
        if (c < 1) throw ValidationError("synth: a class received 0 units; increase n or the ratio part");
    return counts;
}

namespace {

std::string class_name(std::size_t c) { return "genre_" + std::to_string(c); }

std::string make_text(Rng& rng, std::size_t cls, int min_tokens, int spread) {
    const int n = min_tokens + static_cast<int>(rng.below(static_cast<std::uint64_t>(spread)));
    std::ostringstream os;
    for (int t = 0; t < n; ++t) {
        if (t) os << ' ';
        if (rng.next_double() < 0.5)
            os << 'w' << rng.below(150);
        else
            os << 'g' << cls << 'w' << rng.below(40);
    }
    return os.str();
}

}  // namespace

SynthFixture make_synth_fixture(const SynthConfig& config) {
    const std::vector<long> counts = apportion_counts(config.ratio, config.n);
    const auto n_classes = counts.size();
    if (config.dim < static_cast<int>(n_classes))
        throw ValidationError("synth: dim must be at least the class count");
    if (config.max_paragraphs < 1) throw ValidationError("synth: max_paragraphs must be >= 1");
    if (!(config.t2_frac >= 0.0 && config.t2_frac <= 1.0))
        throw ValidationError("synth: t2_frac must be in [0, 1]");

    // Means on scaled basis vectors: distance between any two is `separation`.
    const double radius = config.separation / std::sqrt(2.0);

    Rng rng(config.seed);
    std::vector<std::size_t> classes;
    for (std::size_t c = 0; c < n_classes; ++c)
        classes.insert(classes.end(), static_cast<std::size_t>(counts[c]), c);
    rng.shuffle(classes);

    static const char* kLanguages[] = {"en", "fr", "de", "it", "po", "ru"};

    SynthFixture fix;
    fix.dim = config.dim;
    fix.corpus.docs.reserve(classes.size());
    for (std::size_t i = 0; i < classes.size(); ++i) {
        const std::size_t cls = classes[i];
        Document doc;
        {
            std::ostringstream id;
            id << "syn" << std::setw(6) << std::setfill('0') << i;
            doc.id = id.str();
        }
        doc.language = kLanguages[i % 6];
        doc.raw_text = make_text(rng, cls, 30, 60);
        doc.label_t1 = class_name(cls);

        std::vector<double> x(config.dim);
        for (int d = 0; d < config.dim; ++d) x[d] = rng.next_gaussian();
        x[cls] += radius;
        fix.embeddings[doc.id] = x;

        // T2 labels are functions of the class alone, so the representation a
        // T1 model learns is exactly what T2 needs (transfer-friendly).
        if (rng.next_double() < config.t2_frac) {
            std::vector<std::string> t2 = {"topic_" + std::to_string(cls)};
            if (cls + 2 >= n_classes) t2.push_back("niche");
            std::sort(t2.begin(), t2.end());
            doc.labels_t2 = std::move(t2);
        }

        const int n_paras = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(config.max_paragraphs)));
        for (int p = 0; p < n_paras; ++p) {
            Paragraph para;
            para.para_id = p + 1;
            para.raw_text = make_text(rng, cls, 10, 30);
            std::vector<double> px(config.dim);
            for (int d = 0; d < config.dim; ++d) px[d] = x[d] + 0.5 * rng.next_gaussian();
            std::vector<std::string> t3;
            if (px[2] > 1.5) t3.push_back("tech_a");
            if (px[3] > 2.0) t3.push_back("tech_b");
            if (t3.empty()) t3.push_back(kNoneLabel);
            para.labels_t3 = std::move(t3);
            fix.embeddings[doc.id + "#" + std::to_string(para.para_id)] = std::move(px);
            doc.paragraphs.push_back(std::move(para));
        }
        fix.corpus.docs.push_back(std::move(doc));
    }
    return fix;
}

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write corpus: " + path.string());
    for (const auto& doc : corpus.docs) {
        ordered_json j;
        j["id"] = doc.id;
        j["language"] = doc.language;
        j["text"] = doc.raw_text;
        if (doc.label_t1) j["labels_t1"] = *doc.label_t1;
        if (doc.labels_t2) j["labels_t2"] = *doc.labels_t2;
        if (!doc.paragraphs.empty()) {
            ordered_json paras = ordered_json::array();
            for (const auto& para : doc.paragraphs) {
                ordered_json jp;
                jp["para_id"] = para.para_id;
                jp["text"] = para.raw_text;
                if (para.labels_t3) jp["labels_t3"] = *para.labels_t3;
                paras.push_back(std::move(jp));
            }
            j["paragraphs"] = std::move(paras);
        }
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("failed writing corpus: " + path.string());
}

void write_embeddings_jsonl(const std::map<std::string, std::vector<double>>& embeddings,
                            const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write embeddings: " + path.string());
    for (const auto& [id, vec] : embeddings) {
        ordered_json j;
        j["id"] = id;
        j["vector"] = vec;
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("failed writing embeddings: " + path.string());
}

}  // namespace imbtext
