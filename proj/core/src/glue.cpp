#include "bwtglue/glue.hpp"

#include <stdexcept>

namespace bwtglue {

namespace {

// f(i) = antilocate(locate(i) + len_p1), with the occurrence-at-position-1
// row wrapping through the sentinel position.
std::uint64_t shifted_row(const BwtIndex& index, std::uint64_t row, std::uint64_t len_p1,
                          GlueStats& stats) {
    std::uint64_t pos = index.locate(row);
    ++stats.locate_calls;
    pos += len_p1;
    const std::uint64_t N = index.row_count();
    if (pos > N) pos -= N;
    ++stats.antilocate_calls;
    return index.antilocate(pos);
}

}  // namespace

std::pair<Interval, GlueStats> glue_with_stats(const BwtIndex& index, const Interval& interval_p1,
                                               std::uint64_t len_p1, const Interval& interval_p2) {
    GlueStats stats;
    if (interval_p1.empty() || interval_p2.empty()) return {Interval::none(), stats};
    if (len_p1 == 0) throw std::invalid_argument("len_p1 must be positive");

    // least i in [lo, hi+1) with f(i) >= interval_p2.lo
    std::uint64_t lo = interval_p1.lo, hi = interval_p1.hi + 1;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        ++stats.comparisons;
        if (shifted_row(index, mid, len_p1, stats) >= interval_p2.lo)
            hi = mid;
        else
            lo = mid + 1;
    }
    std::uint64_t first = lo;

    // greatest i with f(i) <= interval_p2.hi, found as (least i with
    // f(i) > interval_p2.hi) - 1
    lo = interval_p1.lo;
    hi = interval_p1.hi + 1;
    while (lo < hi) {
        std::uint64_t mid = lo + (hi - lo) / 2;
        ++stats.comparisons;
        if (shifted_row(index, mid, len_p1, stats) > interval_p2.hi)
            hi = mid;
        else
            lo = mid + 1;
    }
    std::uint64_t last = lo - 1;

    if (first > last) return {Interval::none(), stats};
    return {Interval{first, last}, stats};
}

Interval glue(const BwtIndex& index, const Interval& interval_p1, std::uint64_t len_p1,
              const Interval& interval_p2) {
    return glue_with_stats(index, interval_p1, len_p1, interval_p2).first;
}

}  // namespace bwtglue
