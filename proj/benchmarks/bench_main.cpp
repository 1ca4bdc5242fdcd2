#include <benchmark/benchmark.h>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bwtglue/avl_grammar.hpp"
#include "bwtglue/fm_index.hpp"
#include "bwtglue/glue.hpp"
#include "bwtglue/grammar_search.hpp"
#include "bwtglue/lz77.hpp"

using namespace bwtglue;

namespace {

// Text with genuine repetition so the LZ77 layer has something to copy:
// alternating fresh random chunks and repeats of earlier material.
std::string make_text(std::size_t len, int sigma, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> sym(0, sigma - 1);
    std::string text;
    text.reserve(len);
    while (text.size() < len) {
        std::uniform_int_distribution<std::size_t> chunk(8, 64);
        std::size_t k = std::min(chunk(rng), len - text.size());
        if (text.size() > 64 && rng() % 2 == 0) {
            std::uniform_int_distribution<std::size_t> src(0, text.size() - k);
            text.append(text, src(rng), k);
        } else {
            while (k--) text.push_back(static_cast<char>('a' + sym(rng)));
        }
    }
    return text;
}

std::vector<std::string> sample_patterns(const std::string& text, std::size_t count,
                                         std::size_t len, std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> start(0, text.size() - len);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(text.substr(start(rng), len));
    return out;
}

const std::string& bench_text() {
    static const std::string text = make_text(1 << 16, 4, 1);
    return text;
}

const BwtIndex& bench_index() {
    static const BwtIndex idx = BwtIndex::build(bench_text(), 32);
    return idx;
}

void BM_BuildIndex(benchmark::State& state) {
    const std::string text = make_text(static_cast<std::size_t>(state.range(0)), 4, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(BwtIndex::build(text, 32));
    }
    state.SetComplexityN(state.range(0));
    state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * text.size());
}
BENCHMARK(BM_BuildIndex)->Range(1 << 10, 1 << 17)->Complexity(benchmark::oNLogN);

void BM_BackwardSearch(benchmark::State& state) {
    const BwtIndex& idx = bench_index();
    const auto pats = sample_patterns(bench_text(), 64, state.range(0), 3);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(idx.backward_search(pats[i++ % pats.size()]));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_BackwardSearch)->Arg(4)->Arg(16)->Arg(64)->Arg(256);

// Joining two halves: glue on precomputed intervals vs. rescanning the
// concatenation symbol by symbol.
void BM_Glue(benchmark::State& state) {
    const BwtIndex& idx = bench_index();
    const std::size_t len = state.range(0);
    const auto pats = sample_patterns(bench_text(), 64, 2 * len, 4);
    std::vector<std::pair<Interval, Interval>> halves;
    for (const auto& p : pats)
        halves.emplace_back(idx.backward_search(p.substr(0, len)),
                            idx.backward_search(p.substr(len)));
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& [i1, i2] = halves[i++ % halves.size()];
        benchmark::DoNotOptimize(glue(idx, i1, len, i2));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_Glue)->Arg(8)->Arg(32)->Arg(128);

void BM_SearchConcat(benchmark::State& state) {
    const BwtIndex& idx = bench_index();
    const auto pats = sample_patterns(bench_text(), 64, 2 * state.range(0), 5);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(idx.backward_search(pats[i++ % pats.size()]));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SearchConcat)->Arg(8)->Arg(32)->Arg(128);

// Whole multi-pattern pipeline (parse, grammar, split, level-ordered
// search) against running backward_search once per pattern.
void BM_MultiSearch(benchmark::State& state) {
    const BwtIndex& idx = bench_index();
    const auto pats = sample_patterns(bench_text(), state.range(0), 96, 6);
    for (auto _ : state) {
        const ParseResult pr = parse_multi(pats);
        Grammar g = from_lz77(pr);
        const std::vector<RuleId> roots =
            g.split_patterns(g.roots().at(0), pr.pattern_boundaries);
        benchmark::DoNotOptimize(multi_search(idx, g, roots));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MultiSearch)->Arg(16)->Arg(64)->Arg(256);

void BM_MultiSearchQueryOnly(benchmark::State& state) {
    const BwtIndex& idx = bench_index();
    const auto pats = sample_patterns(bench_text(), state.range(0), 96, 6);
    const ParseResult pr = parse_multi(pats);
    Grammar g = from_lz77(pr);
    const std::vector<RuleId> roots = g.split_patterns(g.roots().at(0), pr.pattern_boundaries);
    for (auto _ : state) {
        benchmark::DoNotOptimize(multi_search(idx, g, roots));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MultiSearchQueryOnly)->Arg(16)->Arg(64)->Arg(256);

void BM_DirectMulti(benchmark::State& state) {
    const BwtIndex& idx = bench_index();
    const auto pats = sample_patterns(bench_text(), state.range(0), 96, 6);
    for (auto _ : state) {
        for (const auto& p : pats) benchmark::DoNotOptimize(idx.backward_search(p));
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_DirectMulti)->Arg(16)->Arg(64)->Arg(256);

void BM_ParallelMultiSearch(benchmark::State& state) {
    const BwtIndex& idx = bench_index();
    const auto pats = sample_patterns(bench_text(), 256, 96, 7);
    const ParseResult pr = parse_multi(pats);
    Grammar g = from_lz77(pr);
    const std::vector<RuleId> roots = g.split_patterns(g.roots().at(0), pr.pattern_boundaries);
    const unsigned workers = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(search_grammar_parallel(idx, g, roots, workers));
    }
    state.SetItemsProcessed(state.iterations() * pats.size());
}
BENCHMARK(BM_ParallelMultiSearch)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->UseRealTime();

void BM_LocateAll(benchmark::State& state) {
    const std::string text = bench_text();
    const BwtIndex idx = BwtIndex::build(text, state.range(0));
    const auto pats = sample_patterns(text, 16, 8, 8);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& p = pats[i++ % pats.size()];
        benchmark::DoNotOptimize(idx.locate_all(idx.backward_search(p), p.size()));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_LocateAll)->Arg(4)->Arg(32)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
