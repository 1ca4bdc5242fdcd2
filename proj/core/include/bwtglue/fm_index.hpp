#ifndef BWTGLUE_FM_INDEX_HPP
#define BWTGLUE_FM_INDEX_HPP

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "bwtglue/interval.hpp"

namespace bwtglue {

/// BWT-based full-text index over a byte text.
///
/// Rows and text positions are 1-based.  The sentinel (byte 0x00) is
/// appended during the build and occupies logical text position n+1, so
/// locate/antilocate are total on 1..n+1.  locate(row) is the text
/// position of the BWT symbol sitting at `row`; antilocate is its inverse.
/// An index is immutable once built and safe to query from any number of
/// threads concurrently.
class BwtIndex {
public:
    static constexpr char kSentinel = '\0';
    static constexpr std::uint64_t kDefaultSampleRate = 32;

    /// Builds the index by suffix sorting text+sentinel.  Both sample sets
    /// (row->position and position->row) are populated for every
    /// sample_rate-th text position plus position n+1.
    /// Throws std::invalid_argument on empty text, embedded sentinel bytes,
    /// or sample_rate == 0.
    static BwtIndex build(std::string_view text, std::uint64_t sample_rate = kDefaultSampleRate);

    std::uint64_t text_len() const { return n_; }        ///< n, sentinel excluded
    std::uint64_t row_count() const { return n_ + 1; }   ///< rows 1..n+1
    const std::string& bwt() const { return bwt_; }
    const std::string& alphabet() const { return alphabet_; }  ///< sorted, sentinel excluded
    std::uint64_t sample_rate() const { return sample_rate_; }

    Interval full_interval() const { return Interval{1, n_ + 1}; }

    /// Interval of rows whose suffixes start with `pattern`.  The empty
    /// pattern yields the full interval; a pattern containing a symbol
    /// outside the alphabet yields the canonical empty interval.
    Interval backward_search(std::string_view pattern) const;

    /// Interval for a single symbol.
    Interval symbol_interval(char c) const;

    /// Text position of the BWT symbol at `row` (the suffix at `row`
    /// starts at locate(row)+1, wrapping: the row of the suffix starting
    /// at 1 maps to the sentinel position n+1).
    std::uint64_t locate(std::uint64_t row) const;

    /// The unique row with locate(row) == text_pos.
    std::uint64_t antilocate(std::uint64_t text_pos) const;

    /// Sorted start positions of the occurrences an interval stands for.
    /// pattern_len bounds the occurrences against the text end; pass 0 for
    /// the empty pattern.
    std::vector<std::uint64_t> locate_all(const Interval& interval, std::uint64_t pattern_len) const;

    char symbol_at(std::uint64_t text_pos) const;
    std::string extract(std::uint64_t text_pos, std::uint64_t len) const;
    std::string reconstruct_text() const;   ///< original text, sentinel stripped

    /// LF step: maps `row` to the row whose locate value is one smaller
    /// (wrapping 1 -> n+1).
    std::uint64_t lf(std::uint64_t row) const;

    /// Occurrences of c in bwt[1..row].
    std::uint64_t rank(char c, std::uint64_t row) const;

    /// Number of BWT symbols strictly smaller than c (the C array).
    std::uint64_t cum_count(char c) const;

    void save(const std::string& path) const;
    static BwtIndex load(const std::string& path);

    std::string serialize() const;
    static BwtIndex deserialize(std::string_view bytes);

private:
    BwtIndex() = default;

    void finish_construction();   // rank checkpoints, cum counts, symbol ids
    int symbol_id(char c) const {
        return sym_id_[static_cast<unsigned char>(c)];
    }

    std::uint64_t n_ = 0;
    std::uint64_t sample_rate_ = kDefaultSampleRate;
    std::string alphabet_;
    std::string bwt_;

    std::unordered_map<std::uint64_t, std::uint64_t> locate_samples_;      // row -> pos
    std::unordered_map<std::uint64_t, std::uint64_t> antilocate_samples_;  // pos -> row
    std::vector<std::uint64_t> sampled_positions_;                         // sorted keys of antilocate_samples_

    // rank support: dense symbol ids over sentinel+alphabet, checkpointed
    // counts every kRankBlock bytes of the BWT.
    static constexpr std::uint64_t kRankBlock = 128;
    std::array<int, 256> sym_id_{};
    std::uint64_t sigma_ = 0;                  // distinct symbols incl. sentinel
    std::vector<std::uint64_t> rank_blocks_;   // (block, sid) -> count before block
    std::vector<std::uint64_t> cum_counts_;    // per sid: # symbols with smaller id
};

/// Deterministic suffix array of `s` (0-based start offsets, all suffixes
/// including the empty-terminator one if the caller appended a sentinel).
std::vector<std::uint32_t> build_suffix_array(std::string_view s);

}  // namespace bwtglue

#endif
