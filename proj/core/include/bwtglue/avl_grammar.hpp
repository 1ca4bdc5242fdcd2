#ifndef BWTGLUE_AVL_GRAMMAR_HPP
#define BWTGLUE_AVL_GRAMMAR_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bwtglue/lz77.hpp"

namespace bwtglue {

using RuleId = std::uint64_t;
inline constexpr RuleId kNoRule = ~std::uint64_t{0};

/// An AVL-balanced straight-line program.  Rules are either terminals or
/// ordered pairs of earlier rules; they are persistent: never mutated, only
/// added, so any previously returned root stays valid across splits and
/// joins.  Identical pairs (and terminals) are deduplicated, which is what
/// lets downstream searches pay once per distinct rule.
///
/// Construction is single-writer; a completed grammar is immutable and safe
/// for concurrent readers.
class Grammar {
public:
    Grammar() = default;

    RuleId add_terminal(char symbol);
    RuleId add_pair(RuleId left, RuleId right);

    /// Root expanding to expansion(a) + expansion(b), rebalanced by
    /// descending the taller side.  Adds O(|height(a) - height(b)|) rules.
    RuleId join(RuleId a, RuleId b);

    /// Non-destructive split of `root` into the first k symbols and the
    /// rest (1 <= k < exp_len(root)); the original root stays valid.
    std::pair<RuleId, RuleId> split(RuleId root, std::uint64_t k);

    /// One root per pattern, for strictly increasing 1-based boundaries
    /// whose last entry equals exp_len(root).
    std::vector<RuleId> split_patterns(RuleId root, std::span<const std::uint64_t> boundaries);

    /// Extracts the sub-grammar root for 1-based positions b..b+len-1 of
    /// expansion(root) via at most two splits.
    RuleId slice(RuleId root, std::uint64_t b, std::uint64_t len);

    std::string expand(RuleId root) const;

    bool is_terminal(RuleId id) const { return rules_[checked(id)].left == kNoRule; }
    char symbol(RuleId id) const { return rules_[checked(id)].symbol; }
    RuleId left(RuleId id) const { return rules_[checked(id)].left; }
    RuleId right(RuleId id) const { return rules_[checked(id)].right; }
    std::uint64_t exp_len(RuleId id) const { return rules_[checked(id)].exp_len; }
    std::uint32_t height(RuleId id) const { return rules_[checked(id)].height; }

    std::size_t rule_count() const { return rules_.size(); }  ///< total, split leftovers included

    /// Rules reachable from `roots`, ascending by id.
    std::vector<RuleId> reachable(std::span<const RuleId> roots) const;
    std::size_t live_rule_count(std::span<const RuleId> roots) const;

    const std::vector<RuleId>& roots() const { return roots_; }
    void set_roots(std::vector<RuleId> roots);

private:
    struct RuleRec {
        RuleId left = kNoRule;   // kNoRule marks a terminal
        RuleId right = kNoRule;
        std::uint64_t exp_len = 1;
        std::uint32_t height = 0;
        char symbol = '\0';
    };

    struct PairKeyHash {
        std::size_t operator()(const std::pair<RuleId, RuleId>& p) const {
            std::uint64_t h = p.first * 0x9e3779b97f4a7c15ull;
            h ^= p.second + 0x517cc1b727220a95ull + (h << 6) + (h >> 2);
            return static_cast<std::size_t>(h);
        }
    };

    RuleId checked(RuleId id) const;
    RuleId join_rec(RuleId a, RuleId b);
    std::pair<RuleId, RuleId> split_rec(RuleId v, std::uint64_t k);
    RuleId append_terminal_raw(char symbol);
    RuleId append_pair_raw(RuleId left, RuleId right);

    std::vector<RuleRec> rules_;
    std::unordered_map<std::pair<RuleId, RuleId>, RuleId, PairKeyHash> pair_dedup_;
    std::array<RuleId, 256> term_dedup_ = [] {
        std::array<RuleId, 256> a{};
        a.fill(kNoRule);
        return a;
    }();
    std::vector<RuleId> roots_;

    friend Grammar deserialize_grammar(std::string_view bytes);
};

/// Converts an LZ77 parse into an AVL grammar whose single root expands to
/// decode(parse): each copy phrase is sliced out of the grammar built so
/// far and joined to the right end; literals join a fresh terminal.
/// Throws FormatError on a structurally invalid parse.
Grammar from_lz77(const ParseResult& parse);

/// Serialized form: rules reachable from `roots`, children before parents,
/// renumbered 0..k-1.  If `payload_roots` is given it receives the payload
/// ids of `roots`, in order.
std::string serialize_grammar(const Grammar& grammar, std::span<const RuleId> roots,
                              std::vector<RuleId>* payload_roots = nullptr);

/// Inverse of serialize_grammar; payload root ids land in roots().
/// Throws FormatError on bad magic, forward references or dangling ids.
Grammar deserialize_grammar(std::string_view bytes);

}  // namespace bwtglue

#endif
