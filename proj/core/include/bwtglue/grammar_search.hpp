#ifndef BWTGLUE_GRAMMAR_SEARCH_HPP
#define BWTGLUE_GRAMMAR_SEARCH_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "bwtglue/avl_grammar.hpp"
#include "bwtglue/fm_index.hpp"
#include "bwtglue/glue.hpp"
#include "bwtglue/interval.hpp"

namespace bwtglue {

/// Rules reachable from the roots, grouped by parse-tree height, ascending.
/// All children of a rule sit in strictly lower levels, so rules within a
/// level never depend on each other.
struct LevelSchedule {
    std::vector<std::vector<RuleId>> levels;

    std::size_t rule_total() const {
        std::size_t n = 0;
        for (const auto& l : levels) n += l.size();
        return n;
    }
};

struct SearchStats {
    std::uint64_t glue_calls = 0;
    std::uint64_t terminal_rules = 0;
    std::uint64_t pair_rules = 0;
    std::vector<std::size_t> level_sizes;
};

LevelSchedule level_schedule(const Grammar& grammar, std::span<const RuleId> roots);

/// Interval of expand(root), computed bottom-up: terminals by single-symbol
/// search, each pair by one glue of its children's intervals.  Memoized, so
/// each distinct rule costs at most one glue; an empty child interval
/// short-circuits the parent to empty without gluing.
Interval search_grammar(const BwtIndex& index, const Grammar& grammar, RuleId root,
                        SearchStats* stats = nullptr);

/// One interval per root over a single shared memo (shared sub-patterns are
/// glued once across all roots).
std::vector<Interval> multi_search(const BwtIndex& index, const Grammar& grammar,
                                   std::span<const RuleId> roots, SearchStats* stats = nullptr);

/// multi_search with levels processed strictly in order and the rules of a
/// level statically partitioned across up to `workers` threads.  Output is
/// identical to multi_search for every worker count.
std::vector<Interval> search_grammar_parallel(const BwtIndex& index, const Grammar& grammar,
                                              std::span<const RuleId> roots, unsigned workers,
                                              SearchStats* stats = nullptr);

}  // namespace bwtglue

#endif
