#ifndef BWTGLUE_INTERVAL_HPP
#define BWTGLUE_INTERVAL_HPP

#include <cstdint>

namespace bwtglue {

/// A contiguous range of rows in the sorted-suffix order, 1-based inclusive.
/// The canonical empty interval is [1, 0]; every search produces and
/// consumes values of this type.
struct Interval {
    std::uint64_t lo = 1;
    std::uint64_t hi = 0;

    bool empty() const { return lo > hi; }
    std::uint64_t size() const { return empty() ? 0 : hi - lo + 1; }
    bool contains(std::uint64_t row) const { return row >= lo && row <= hi; }

    static Interval none() { return Interval{1, 0}; }

    friend bool operator==(const Interval& a, const Interval& b) {
        if (a.empty() && b.empty()) return true;
        return a.lo == b.lo && a.hi == b.hi;
    }
    friend bool operator!=(const Interval& a, const Interval& b) { return !(a == b); }
};

}  // namespace bwtglue

#endif
