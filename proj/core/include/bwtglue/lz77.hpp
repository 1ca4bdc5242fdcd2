#ifndef BWTGLUE_LZ77_HPP
#define BWTGLUE_LZ77_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bwtglue {

/// One token of the greedy non-overlapping LZ77 parse: a literal symbol or
/// a copy of `len` symbols starting at 1-based position `src` of the output
/// built so far.  A copy never reaches past the already-parsed prefix and
/// carries no trailing literal.
struct Phrase {
    enum class Kind : std::uint8_t { literal, copy };

    Kind kind = Kind::literal;
    char symbol = '\0';       // literal payload
    std::uint64_t src = 0;    // copy source, 1-based
    std::uint64_t len = 0;    // copy length, >= 1

    static Phrase lit(char c) { return Phrase{Kind::literal, c, 0, 0}; }
    static Phrase copy(std::uint64_t src, std::uint64_t len) {
        return Phrase{Kind::copy, '\0', src, len};
    }

    friend bool operator==(const Phrase&, const Phrase&) = default;
};

struct ParseResult {
    std::vector<Phrase> phrases;
    /// 1-based end position of each input pattern inside the concatenation;
    /// a single-pattern parse has one entry (the total length).
    std::vector<std::uint64_t> pattern_boundaries;

    std::uint64_t phrase_count() const { return phrases.size(); }
    std::uint64_t total_length() const {
        return pattern_boundaries.empty() ? 0 : pattern_boundaries.back();
    }
};

/// Greedy leftmost parse: each step emits the longest prefix of the
/// remainder that occurs completely inside the already-parsed prefix
/// (smallest source on ties), or a literal when no such prefix exists.
ParseResult parse(std::string_view text);

/// Parse of the concatenation of `patterns` where copies may reach back
/// into earlier patterns but no phrase crosses a pattern boundary.  This
/// yields at most `patterns.size()` more phrases than parsing the plain
/// concatenation.  Member patterns must be nonempty.
ParseResult parse_multi(std::span<const std::string> patterns);

/// Expands a phrase list.  Throws FormatError on a structurally invalid
/// copy (source range not inside the output built so far).
std::string decode(std::span<const Phrase> phrases);

}  // namespace bwtglue

#endif
