#ifndef BWTGLUE_TESTS_ORACLE_HPP
#define BWTGLUE_TESTS_ORACLE_HPP

// Brute-force reference implementations the tests compare against.  All of
// them favor obviousness over speed and are only suitable for small texts.

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bwtglue/interval.hpp"
#include "bwtglue/wildcard.hpp"

namespace bwtglue::testkit {

/// Sorted suffixes of text + sentinel, built by comparing full suffixes.
class OracleSuffixTable {
public:
    static OracleSuffixTable build(std::string text);

    const std::string& text() const { return text_; }
    std::uint64_t n() const { return text_.size(); }

    /// BWT string, sentinel included as '\0'.
    std::string bwt() const;

    /// Rows whose suffix starts with `pattern` (canonical empty when absent).
    Interval interval(std::string_view pattern) const;

    /// 1-based starts of all occurrences, ascending.
    std::vector<std::uint64_t> occurrences(std::string_view pattern) const;

    /// Position preceding row's suffix (n+1 for the row starting at 1).
    std::uint64_t locate(std::uint64_t row) const;
    std::uint64_t antilocate(std::uint64_t pos) const;

private:
    std::string text_;
    std::string padded_;                // text + sentinel
    std::vector<std::uint64_t> sa_;     // 1-based suffix starts, sorted
    std::vector<std::uint64_t> rank_;   // rank_[pos-1] = row of suffix at pos
};

std::vector<std::uint64_t> oracle_wildcard_exact(std::string_view text,
                                                 const WildcardPattern& pattern);
std::vector<std::pair<std::uint64_t, std::uint64_t>> oracle_wildcard_flexible(
    std::string_view text, const WildcardPattern& pattern);

/// Random text over 'a' .. 'a'+sigma-1.
std::string random_text(std::mt19937& rng, std::size_t len, int sigma);

/// Random substring of `text` with length in [min_len, max_len] — a pattern
/// guaranteed to occur.
std::string present_pattern(std::mt19937& rng, std::string_view text, std::size_t min_len,
                            std::size_t max_len);

/// Random string over the same alphabet; usually absent for larger sigma.
std::string random_pattern(std::mt19937& rng, std::size_t min_len, std::size_t max_len, int sigma);

}  // namespace bwtglue::testkit

#endif
