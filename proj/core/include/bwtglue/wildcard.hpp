#ifndef BWTGLUE_WILDCARD_HPP
#define BWTGLUE_WILDCARD_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bwtglue/fm_index.hpp"

namespace bwtglue {

/// P_1 ?^{w_1} P_2 ?^{w_2} ... P_t — literal subpatterns separated by runs of
/// '?'.  Leading and trailing wildcards are dropped during parsing: they do
/// not constrain which text positions can match, only whether a reported
/// match could be widened, which callers can do themselves.
struct WildcardPattern {
    std::vector<std::string> subpatterns;  // t >= 1 entries, each non-empty
    std::vector<std::uint64_t> gaps;       // t-1 entries, each >= 1

    /// Length of a fully-gapped match: sum of subpattern lengths plus gaps.
    std::uint64_t core_length() const;
};

/// Splits on '?' runs.  Throws std::invalid_argument when the pattern is
/// empty or contains no literal symbol at all.
WildcardPattern parse_wildcard_pattern(std::string_view pattern);

struct WildcardStats {
    std::size_t pivot = 0;                 // index of the rarest subpattern
    std::uint64_t pivot_occurrences = 0;   // candidate seed count
    std::uint64_t peak_candidates = 0;     // high-water mark across filtering
};

/// Every gap consumes exactly its stated number of symbols.  Returns the
/// sorted 1-based start positions of matches.
std::vector<std::uint64_t> match_exact(const BwtIndex& index, const WildcardPattern& pattern,
                                       WildcardStats* stats = nullptr);

/// Each gap of w may consume 0..w symbols.  Returns sorted, de-duplicated
/// (start, end) spans, both ends inclusive and 1-based.
std::vector<std::pair<std::uint64_t, std::uint64_t>> match_flexible(
    const BwtIndex& index, const WildcardPattern& pattern, WildcardStats* stats = nullptr);

}  // namespace bwtglue

#endif
