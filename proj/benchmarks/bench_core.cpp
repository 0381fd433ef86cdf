#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "imbtext/features.hpp"
#include "imbtext/imbalance.hpp"
#include "imbtext/metrics.hpp"
#include "imbtext/model.hpp"
#include "imbtext/optimizer.hpp"
#include "imbtext/preprocess.hpp"
#include "imbtext/rng.hpp"

using namespace imbtext;

namespace {

std::string sample_text(int tokens) {
    Rng rng(9);
    std::string s;
    const char* words[] = {"Hello,",   "Мир!",    "straße", "№42",     "http://x.y/z",
                           "καλημέρα", "déjà-vu", "2024",   "ქართული", "word"};
    for (int i = 0; i < tokens; ++i) {
        s += words[rng.below(10)];
        s += ' ';
    }
    return s;
}

void BM_PreprocessText(benchmark::State& state) {
    const std::string text = sample_text(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        auto out = preprocess_text(text);
        benchmark::DoNotOptimize(out);
    }
    state.SetBytesProcessed(static_cast<int64_t>(state.iterations()) * text.size());
}
BENCHMARK(BM_PreprocessText)->Range(64, 4096);

void BM_TfidfTransform(benchmark::State& state) {
    Rng rng(4);
    std::vector<std::vector<std::string>> units;
    for (int u = 0; u < 512; ++u) {
        std::vector<std::string> toks;
        for (int t = 0; t < 128; ++t) toks.push_back("w" + std::to_string(rng.below(4000)));
        units.push_back(std::move(toks));
    }
    const TfidfModel model = TfidfModel::fit(units, {});
    std::size_t i = 0;
    for (auto _ : state) {
        auto v = model.transform(units[i++ % units.size()]);
        benchmark::DoNotOptimize(v);
    }
}
BENCHMARK(BM_TfidfTransform);

void BM_WeightedEpoch(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    Rng rng(3);
    SampleWeights sw;
    for (std::size_t i = 0; i < n; ++i) sw.weights.push_back(0.1 + rng.next_double());
    BatchStream stream(sw, 16, 1);
    for (auto _ : state) {
        auto epoch = stream.next_epoch();
        benchmark::DoNotOptimize(epoch);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * static_cast<int64_t>(n));
}
BENCHMARK(BM_WeightedEpoch)->Range(1 << 10, 1 << 16);

void BM_TrainStep(benchmark::State& state) {
    const int dim = 64;
    const int hidden = static_cast<int>(state.range(0));
    Rng rng(8);
    ModelParams params = init_model(dim, hidden, 3, LabelMode::Multiclass, 1);
    OptimizerState opt = init_optimizer(params, {});
    FeatureVector x;
    x.dim = dim;
    x.is_dense = true;
    for (int i = 0; i < dim; ++i) x.dense.push_back(rng.next_gaussian());
    ClassWeights cw;
    cw.weights = {1.0, 1.0, 1.0};
    const std::vector<int> target = {0, 1, 0};
    ForwardCache cache;
    for (auto _ : state) {
        const PredictionVector pred = forward_cached(params, x, cache);
        const LossResult lr = weighted_ce_loss(pred, target, cw);
        ParamGrads grads = zero_grads(params);
        backward(params, x, cache, lr.dlogits, grads);
        grad_step(params, grads, opt);
        benchmark::DoNotOptimize(params);
    }
}
BENCHMARK(BM_TrainStep)->Arg(0)->Arg(32)->Arg(128);

void BM_MacroF1(benchmark::State& state) {
    Rng rng(5);
    std::vector<int> preds, golds;
    for (int i = 0; i < 10000; ++i) {
        preds.push_back(static_cast<int>(rng.below(20)));
        golds.push_back(static_cast<int>(rng.below(20)));
    }
    for (auto _ : state) {
        const double f1 = macro_f1(preds, golds, 20);
        benchmark::DoNotOptimize(f1);
    }
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) * 10000);
}
BENCHMARK(BM_MacroF1);

}  // namespace

BENCHMARK_MAIN();
