#ifndef BWTGLUE_GLUE_HPP
#define BWTGLUE_GLUE_HPP

#include <cstdint>
#include <utility>

#include "bwtglue/fm_index.hpp"
#include "bwtglue/interval.hpp"

namespace bwtglue {

/// Probe counts for one glue call.
struct GlueStats {
    std::uint64_t locate_calls = 0;
    std::uint64_t antilocate_calls = 0;
    std::uint64_t comparisons = 0;
};

/// Given the backward-search intervals of P1 (of length len_p1) and P2,
/// computes the interval of the concatenation P1P2 with two binary
/// searches over f(i) = antilocate(locate(i) + len_p1) inside interval_p1.
/// f is strictly increasing on a genuine pattern interval, which is what
/// makes the search valid.  Either input empty yields the canonical empty
/// interval.  Calling this with intervals that are not genuine pattern
/// intervals gives unspecified output.
///
/// Total antilocate probes are bounded by 2*(ceil(log2 |interval_p1|) + 2).
Interval glue(const BwtIndex& index, const Interval& interval_p1, std::uint64_t len_p1,
              const Interval& interval_p2);

std::pair<Interval, GlueStats> glue_with_stats(const BwtIndex& index, const Interval& interval_p1,
                                               std::uint64_t len_p1, const Interval& interval_p2);

}  // namespace bwtglue

#endif
