#include "bwtglue/grammar_search.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <stdexcept>
#include <thread>

namespace bwtglue {

LevelSchedule level_schedule(const Grammar& grammar, std::span<const RuleId> roots) {
    LevelSchedule sched;
    std::vector<RuleId> rules = grammar.reachable(roots);
    if (rules.empty()) return sched;

    std::uint32_t max_h = 0;
    for (RuleId id : rules) max_h = std::max(max_h, grammar.height(id));
    sched.levels.resize(static_cast<std::size_t>(max_h) + 1);
    for (RuleId id : rules)
        sched.levels[static_cast<std::size_t>(grammar.height(id))].push_back(id);
    // reachable() returns ids sorted, so each level is already ascending;
    // that fixes the static partition and keeps parallel runs deterministic.
    return sched;
}

namespace {

class LevelRunner {
public:
    LevelRunner(const BwtIndex& index, const Grammar& grammar)
        : index_(index), grammar_(grammar), memo_(grammar.rule_count()) {}

    void run(const LevelSchedule& sched, unsigned workers) {
        for (const auto& level : sched.levels) {
            std::size_t w = std::min<std::size_t>(workers, level.size());
            if (w <= 1) {
                compute_range(level, 0, level.size());
            } else {
                run_level_threaded(level, w);
            }
            // joining the level's threads orders their writes before any
            // read in the next level, so no other synchronization is needed
        }
    }

    const Interval& interval(RuleId id) const { return memo_[static_cast<std::size_t>(id)]; }
    std::uint64_t glue_calls() const { return glue_calls_.load(std::memory_order_relaxed); }

private:
    void compute_range(const std::vector<RuleId>& level, std::size_t first, std::size_t last) {
        for (std::size_t i = first; i < last; ++i) compute_rule(level[i]);
    }

    void compute_rule(RuleId id) {
        Interval& out = memo_[static_cast<std::size_t>(id)];
        if (grammar_.is_terminal(id)) {
            out = index_.symbol_interval(grammar_.symbol(id));
            return;
        }
        const Interval& li = memo_[static_cast<std::size_t>(grammar_.left(id))];
        const Interval& ri = memo_[static_cast<std::size_t>(grammar_.right(id))];
        if (li.empty() || ri.empty()) {
            out = Interval::none();
            return;
        }
        glue_calls_.fetch_add(1, std::memory_order_relaxed);
        out = glue(index_, li, grammar_.exp_len(grammar_.left(id)), ri);
    }

    void run_level_threaded(const std::vector<RuleId>& level, std::size_t w) {
        const std::size_t chunk = (level.size() + w - 1) / w;
        std::vector<std::thread> threads;
        std::vector<std::exception_ptr> errors(w);
        threads.reserve(w);
        for (std::size_t t = 0; t < w; ++t) {
            const std::size_t first = t * chunk;
            const std::size_t last = std::min(first + chunk, level.size());
            threads.emplace_back([this, &level, &errors, t, first, last] {
                try {
                    compute_range(level, first, last);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : threads) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    const BwtIndex& index_;
    const Grammar& grammar_;
    std::vector<Interval> memo_;
    std::atomic<std::uint64_t> glue_calls_{0};
};

std::vector<Interval> run_search(const BwtIndex& index, const Grammar& grammar,
                                 std::span<const RuleId> roots, unsigned workers,
                                 SearchStats* stats) {
    for (RuleId id : roots)
        if (id >= grammar.rule_count()) throw std::out_of_range("search root out of range");

    LevelSchedule sched = level_schedule(grammar, roots);
    LevelRunner runner(index, grammar);
    runner.run(sched, workers);

    if (stats) {
        stats->glue_calls = runner.glue_calls();
        stats->terminal_rules = 0;
        stats->pair_rules = 0;
        stats->level_sizes.clear();
        for (const auto& level : sched.levels) {
            stats->level_sizes.push_back(level.size());
            for (RuleId id : level)
                (grammar.is_terminal(id) ? stats->terminal_rules : stats->pair_rules) += 1;
        }
    }

    std::vector<Interval> out;
    out.reserve(roots.size());
    for (RuleId id : roots) out.push_back(runner.interval(id));
    return out;
}

}  // namespace

Interval search_grammar(const BwtIndex& index, const Grammar& grammar, RuleId root,
                        SearchStats* stats) {
    const RuleId roots[1] = {root};
    return run_search(index, grammar, roots, 1, stats)[0];
}

std::vector<Interval> multi_search(const BwtIndex& index, const Grammar& grammar,
                                   std::span<const RuleId> roots, SearchStats* stats) {
    return run_search(index, grammar, roots, 1, stats);
}

std::vector<Interval> search_grammar_parallel(const BwtIndex& index, const Grammar& grammar,
                                              std::span<const RuleId> roots, unsigned workers,
                                              SearchStats* stats) {
    if (workers == 0) throw std::invalid_argument("worker count must be positive");
    return run_search(index, grammar, roots, workers, stats);
}

}  // namespace bwtglue
