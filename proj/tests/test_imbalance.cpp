#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "imbtext/error.hpp"
#include "imbtext/imbalance.hpp"

using namespace imbtext;

namespace {

LabelSpace space_of(std::vector<std::string> labels, std::vector<std::int64_t> counts,
                    LabelMode mode) {
    LabelSpace s;
    s.task = mode == LabelMode::Multiclass ? Task::T1 : Task::T2;
    s.mode = mode;
    s.labels = std::move(labels);
    s.counts = std::move(counts);
    return s;
}

}  // namespace

TEST_SUITE("imbalance") {

TEST_CASE("class weights on the 269/878/87 genre counts") {
    const ClassWeights cw = class_weights({269, 878, 87});
    // independent direct evaluation of n/(c*n_j)
    REQUIRE(cw.weights.size() == 3);
    CHECK(cw.weights[0] == doctest::Approx(1234.0 / (3.0 * 269.0)).epsilon(1e-12));
    CHECK(cw.weights[1] == doctest::Approx(1234.0 / (3.0 * 878.0)).epsilon(1e-12));
    CHECK(cw.weights[2] == doctest::Approx(1234.0 / (3.0 * 87.0)).epsilon(1e-12));
    CHECK(cw.weights[0] == doctest::Approx(1.52912).epsilon(1e-5));
    CHECK(cw.weights[1] == doctest::Approx(0.46849).epsilon(1e-5));
    CHECK(cw.weights[2] == doctest::Approx(4.72797).epsilon(1e-5));
}

TEST_CASE("balanced counts give unit weights") {
    const ClassWeights cw = class_weights({10, 10});
    CHECK(cw.weights[0] == 1.0);
    CHECK(cw.weights[1] == 1.0);
}

TEST_CASE("counts [1,3]") {
    const ClassWeights cw = class_weights({1, 3});
    CHECK(cw.weights[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(cw.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("zero count rejected") {
    CHECK_THROWS_AS(class_weights({3, 0, 2}), ValidationError);
    CHECK_THROWS_AS(class_weights({}), ValidationError);
}

TEST_CASE("identity sum(counts*weights) = n on 1000 random count vectors") {
    Rng rng(404);
    for (int iter = 0; iter < 1000; ++iter) {
        const int c = 2 + static_cast<int>(rng.below(10));
        std::vector<std::int64_t> counts;
        std::int64_t n = 0;
        for (int j = 0; j < c; ++j) {
            counts.push_back(1 + static_cast<std::int64_t>(rng.below(5000)));
            n += counts.back();
        }
        const ClassWeights cw = class_weights(counts);

        // Exact-arithmetic form: each term counts[j] * n/(c*counts[j]) reduces
        // to the fraction n/c, so the sum is exactly n.
        for (int j = 0; j < c; ++j) {
            const __int128 lhs = static_cast<__int128>(n) * counts[j] * c;        // n*n_j * c
            const __int128 rhs = static_cast<__int128>(c) * counts[j] * n;        // (c*n_j) * n
            CHECK(lhs == rhs);  // counts[j]*(n/(c*n_j)) == n/c as rationals
            // the double implementation matches the correctly rounded value
            const double exact = static_cast<double>(static_cast<long double>(n) /
                                                     (static_cast<long double>(c) * counts[j]));
            CHECK(cw.weights[j] == doctest::Approx(exact).epsilon(1e-15));
        }
        double fp_sum = 0.0;
        for (int j = 0; j < c; ++j) fp_sum += static_cast<double>(counts[j]) * cw.weights[j];
        CHECK(fp_sum == doctest::Approx(static_cast<double>(n)).epsilon(1e-12));
    }
}

TEST_CASE("sample weights: multiclass inverse class frequency") {
    const LabelSpace s = space_of({"a", "b"}, {3, 1}, LabelMode::Multiclass);
    const SampleWeights sw =
        sample_weights({{0}, {0}, {0}, {1}}, s, {3, 1});
    CHECK(sw.weights[0] == doctest::Approx(1.0 / 3.0));
    CHECK(sw.weights[3] == doctest::Approx(1.0));
    // expected resampled class mass 3*(1/3) : 1*1 = 1 : 1
    CHECK(3.0 * sw.weights[0] == doctest::Approx(1.0 * sw.weights[3]));
}

TEST_CASE("sample weights: equal counts give uniform weights") {
    const LabelSpace s = space_of({"a", "b"}, {2, 2}, LabelMode::Multiclass);
    const SampleWeights sw = sample_weights({{0}, {0}, {1}, {1}}, s, {2, 2});
    for (double w : sw.weights) CHECK(w == doctest::Approx(sw.weights[0]));
}

TEST_CASE("sample weights: multilabel uses the rarest positive label") {
    const LabelSpace s = space_of({"a", "b"}, {100, 2}, LabelMode::Multilabel);
    const SampleWeights sw = sample_weights({{0, 1}}, s, {100, 2});
    CHECK(sw.weights[0] == doctest::Approx(0.5));
}

TEST_CASE("sample weights: errors") {
    const LabelSpace s = space_of({"a"}, {1}, LabelMode::Multiclass);
    CHECK_THROWS_AS(sample_weights({{}}, s, {1}), ValidationError);     // no labels
    CHECK_THROWS_AS(sample_weights({{2}}, s, {1}), ValidationError);    // outside space
}

TEST_CASE("weighted batches: epoch shape and chunking") {
    SampleWeights sw;
    sw.weights = {1, 1, 1, 1};
    BatchStream stream(sw, 2, 5);
    const auto epoch = stream.next_epoch();
    REQUIRE(epoch.size() == 2);
    CHECK(epoch[0].size() == 2);
    CHECK(epoch[1].size() == 2);
    for (const auto& b : epoch)
        for (int i : b) CHECK((i >= 0 && i < 4));

    SampleWeights sw5;
    sw5.weights = {1, 1, 1, 1, 1};
    BatchStream odd(sw5, 2, 5);
    const auto e5 = odd.next_epoch();
    REQUIRE(e5.size() == 3);
    CHECK(e5.back().size() == 1);  // short final batch
}

TEST_CASE("weighted batches: non-positive weight rejected") {
    SampleWeights sw;
    sw.weights = {1.0, 0.0};
    CHECK_THROWS_AS(BatchStream(sw, 2, 1), ValidationError);
    sw.weights = {1.0, -2.0};
    CHECK_THROWS_AS(BatchStream(sw, 2, 1), ValidationError);
}

TEST_CASE("weighted batches: uniform weights draw each index at ~1/n") {
    SampleWeights sw;
    sw.weights.assign(4, 1.0);
    BatchStream stream(sw, 2, 99);
    std::vector<long> hits(4, 0);
    const int epochs = 100000;
    for (int e = 0; e < epochs; ++e)
        for (const auto& batch : stream.next_epoch())
            for (int i : batch) hits[i]++;
    const double total = 4.0 * epochs;
    for (long h : hits) CHECK(std::abs(h / total - 0.25) < 0.01);
}

TEST_CASE("weighted batches: class-proportional weights balance draws to 1/3") {
    // counts 87/269/878; weight 1/n_c per sample
    const std::vector<std::int64_t> counts = {87, 269, 878};
    SampleWeights sw;
    std::vector<int> cls;
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < counts[c]; ++i) {
            sw.weights.push_back(1.0 / static_cast<double>(counts[c]));
            cls.push_back(c);
        }
    BatchStream stream(sw, 100, 7);
    std::vector<long> per_class(3, 0);
    long draws = 0;
    while (draws < 100000) {
        for (const auto& batch : stream.next_epoch()) {
            for (int i : batch) {
                per_class[cls[i]]++;
                draws++;
            }
        }
    }
    for (int c = 0; c < 3; ++c)
        CHECK(std::abs(static_cast<double>(per_class[c]) / static_cast<double>(draws) - 1.0 / 3.0) <
              0.01);
}

TEST_CASE("weighted batches: uniform weights pass a chi-square uniformity test") {
    const int n = 16;
    SampleWeights sw;
    sw.weights.assign(n, 1.0);
    BatchStream stream(sw, 64, 1234);
    std::vector<long> hits(n, 0);
    long draws = 0;
    while (draws < 100000) {
        for (const auto& batch : stream.next_epoch())
            for (int i : batch) {
                hits[i]++;
                draws++;
            }
    }
    const double expected = static_cast<double>(draws) / n;
    double stat = 0.0;
    for (long h : hits) stat += (h - expected) * (h - expected) / expected;
    const boost::math::chi_squared dist(n - 1);
    const double p = boost::math::cdf(boost::math::complement(dist, stat));
    CHECK(p > 0.001);
}

TEST_CASE("weighted batches: determinism per seed") {
    SampleWeights sw;
    sw.weights = {0.1, 0.5, 1.0, 2.0, 0.7};
    BatchStream a(sw, 2, 42), b(sw, 2, 42), c(sw, 2, 43);
    CHECK(a.next_epoch() == b.next_epoch());
    CHECK(a.next_epoch() == b.next_epoch());  // stays in lockstep across epochs
    CHECK(a.next_epoch() != c.next_epoch());
}

TEST_CASE("weighted batches: epoch multiplier scales the epoch length") {
    SampleWeights sw;
    sw.weights.assign(10, 1.0);
    CHECK(BatchStream(sw, 4, 1).epoch_length() == 10);
    CHECK(BatchStream(sw, 4, 1, 2.0).epoch_length() == 20);
    CHECK(BatchStream(sw, 4, 1, 0.25).epoch_length() == 3);  // rounded
}

TEST_CASE("undersample balances to the minority count") {
    std::vector<int> labels;
    for (int i = 0; i < 269; ++i) labels.push_back(0);
    for (int i = 0; i < 878; ++i) labels.push_back(1);
    for (int i = 0; i < 87; ++i) labels.push_back(2);
    const auto kept = undersample(labels, LabelMode::Multiclass, 5);
    CHECK(kept.size() == 3 * 87);
    std::vector<int> counts(3, 0);
    for (std::size_t i : kept) counts[labels[i]]++;
    CHECK(counts == std::vector<int>{87, 87, 87});
}

TEST_CASE("undersample: balanced input keeps the same id multiset") {
    const std::vector<int> labels = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
    const auto kept = undersample(labels, LabelMode::Multiclass, 9);
    CHECK(kept.size() == 10);
    CHECK(std::set<std::size_t>(kept.begin(), kept.end()).size() == 10);
}

TEST_CASE("undersample: deterministic per seed, multilabel rejected") {
    const std::vector<int> labels = {0, 0, 0, 1, 1, 2};
    CHECK(undersample(labels, LabelMode::Multiclass, 3) ==
          undersample(labels, LabelMode::Multiclass, 3));
    CHECK_THROWS_AS(undersample(labels, LabelMode::Multilabel, 3), ValidationError);
}

}  // TEST_SUITE
