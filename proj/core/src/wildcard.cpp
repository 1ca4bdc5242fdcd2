#include "bwtglue/wildcard.hpp"

#include <algorithm>
#include <stdexcept>

#include "bwtglue/interval.hpp"

namespace bwtglue {

std::uint64_t WildcardPattern::core_length() const {
    std::uint64_t len = 0;
    for (const auto& s : subpatterns) len += s.size();
    for (std::uint64_t g : gaps) len += g;
    return len;
}

WildcardPattern parse_wildcard_pattern(std::string_view pattern) {
    WildcardPattern out;
    std::size_t i = 0;
    while (i < pattern.size() && pattern[i] == '?') ++i;  // leading run
    while (i < pattern.size()) {
        std::size_t lit = i;
        while (lit < pattern.size() && pattern[lit] != '?') ++lit;
        out.subpatterns.emplace_back(pattern.substr(i, lit - i));
        std::size_t gap = lit;
        while (gap < pattern.size() && pattern[gap] == '?') ++gap;
        if (gap < pattern.size())  // interior run only; a trailing run is dropped
            out.gaps.push_back(static_cast<std::uint64_t>(gap - lit));
        i = gap;
    }
    if (out.subpatterns.empty())
        throw std::invalid_argument("wildcard pattern needs at least one literal symbol");
    return out;
}

namespace {

struct MatchContext {
    const BwtIndex& index;
    const WildcardPattern& pat;
    std::vector<Interval> intervals;   // per subpattern
    std::vector<std::uint64_t> lens;   // subpattern lengths
    std::size_t pivot = 0;

    explicit MatchContext(const BwtIndex& idx, const WildcardPattern& p) : index(idx), pat(p) {
        intervals.reserve(p.subpatterns.size());
        lens.reserve(p.subpatterns.size());
        for (const auto& sub : p.subpatterns) {
            intervals.push_back(idx.backward_search(sub));
            lens.push_back(sub.size());
        }
        for (std::size_t h = 1; h < intervals.size(); ++h)
            if (intervals[h].size() < intervals[pivot].size()) pivot = h;
    }

    bool any_empty() const {
        for (const auto& iv : intervals)
            if (iv.empty()) return true;
        return false;
    }

    // Does subpattern h occur starting at text position s?  One antilocate
    // probe: the row of the suffix starting at s is the row whose preceding
    // position is s-1 (the sentinel position N when s == 1).
    bool occurs_at(std::uint64_t s, std::size_t h) const {
        const std::uint64_t n = index.text_len();
        if (s < 1 || s + lens[h] - 1 > n) return false;
        const std::uint64_t probe = (s == 1) ? n + 1 : s - 1;
        return intervals[h].contains(index.antilocate(probe));
    }

    // Start positions of the pivot's genuine occurrences.
    std::vector<std::uint64_t> pivot_starts() const {
        return index.locate_all(intervals[pivot], lens[pivot]);
    }
};

}  // namespace

std::vector<std::uint64_t> match_exact(const BwtIndex& index, const WildcardPattern& pattern,
                                       WildcardStats* stats) {
    MatchContext ctx(index, pattern);
    const std::size_t t = pattern.subpatterns.size();
    const std::size_t j = ctx.pivot;

    if (stats) {
        stats->pivot = j;
        stats->pivot_occurrences = ctx.intervals[j].size();
        stats->peak_candidates = 0;
    }
    if (ctx.any_empty()) return {};

    // Fixed gaps pin every subpattern's offset from the match start.
    std::vector<std::uint64_t> offsets(t, 0);
    for (std::size_t h = 1; h < t; ++h)
        offsets[h] = offsets[h - 1] + ctx.lens[h - 1] + pattern.gaps[h - 1];

    std::vector<std::uint64_t> candidates;
    for (std::uint64_t s : ctx.pivot_starts())
        if (s > offsets[j]) candidates.push_back(s - offsets[j]);

    if (stats) stats->peak_candidates = candidates.size();

    auto keep = [&](std::size_t h) {
        std::erase_if(candidates,
                      [&](std::uint64_t start) { return !ctx.occurs_at(start + offsets[h], h); });
    };
    for (std::size_t h = j + 1; h < t; ++h) keep(h);
    for (std::size_t h = j; h-- > 0;) keep(h);

    std::sort(candidates.begin(), candidates.end());
    return candidates;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> match_flexible(const BwtIndex& index,
                                                                    const WildcardPattern& pattern,
                                                                    WildcardStats* stats) {
    MatchContext ctx(index, pattern);
    const std::size_t t = pattern.subpatterns.size();
    const std::size_t j = ctx.pivot;

    if (stats) {
        stats->pivot = j;
        stats->pivot_occurrences = ctx.intervals[j].size();
        stats->peak_candidates = 0;
    }
    if (ctx.any_empty()) return {};

    // Candidates are (leftmost matched start, rightmost matched start) pairs;
    // every realized gap width in 0..w branches a candidate.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cur;
    for (std::uint64_t s : ctx.pivot_starts()) cur.emplace_back(s, s);

    auto note_peak = [&] {
        if (stats) stats->peak_candidates = std::max<std::uint64_t>(stats->peak_candidates, cur.size());
    };
    note_peak();

    for (std::size_t h = j; h + 1 < t; ++h) {  // grow rightward
        std::vector<std::pair<std::uint64_t, std::uint64_t>> next;
        for (const auto& [ls, rs] : cur) {
            const std::uint64_t base = rs + ctx.lens[h];
            for (std::uint64_t w = 0; w <= pattern.gaps[h]; ++w)
                if (ctx.occurs_at(base + w, h + 1)) next.emplace_back(ls, base + w);
        }
        cur = std::move(next);
        note_peak();
    }
    for (std::size_t h = j; h-- > 0;) {  // grow leftward
        std::vector<std::pair<std::uint64_t, std::uint64_t>> next;
        for (const auto& [ls, rs] : cur) {
            for (std::uint64_t w = 0; w <= pattern.gaps[h]; ++w) {
                const std::uint64_t back = ctx.lens[h] + w;
                if (ls <= back) continue;
                if (ctx.occurs_at(ls - back, h)) next.emplace_back(ls - back, rs);
            }
        }
        cur = std::move(next);
        note_peak();
    }

    std::vector<std::pair<std::uint64_t, std::uint64_t>> spans;
    spans.reserve(cur.size());
    for (const auto& [ls, rs] : cur) spans.emplace_back(ls, rs + ctx.lens[t - 1] - 1);
    std::sort(spans.begin(), spans.end());
    spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
    return spans;
}

}  // namespace bwtglue
