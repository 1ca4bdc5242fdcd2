#include "bwtglue/lz77.hpp"

#include <array>
#include <stdexcept>

#include "bwtglue/errors.hpp"

namespace bwtglue {

namespace {

// Greedy parser over `text` (0-based internally).  `boundaries` are the
// 1-based pattern end positions; matches are capped so no phrase crosses
// one.  Candidate sources are scanned per first symbol, ascending, so the
// smallest source wins ties.
ParseResult parse_impl(std::string_view text, std::vector<std::uint64_t> boundaries) {
    ParseResult result;
    result.pattern_boundaries = std::move(boundaries);

    std::array<std::vector<std::uint64_t>, 256> positions_by_symbol;
    std::size_t boundary_idx = 0;
    std::uint64_t j = 0;  // parsed prefix length
    while (j < text.size()) {
        while (boundary_idx < result.pattern_boundaries.size() &&
               result.pattern_boundaries[boundary_idx] <= j)
            ++boundary_idx;
        const std::uint64_t cap = result.pattern_boundaries[boundary_idx] - j;

        const auto& candidates = positions_by_symbol[static_cast<unsigned char>(text[j])];
        std::uint64_t best_len = 0, best_src = 0;
        for (std::uint64_t src : candidates) {
            std::uint64_t max_len = std::min<std::uint64_t>(cap, j - src);
            if (max_len <= best_len) break;  // sources ascend, j - src only shrinks
            std::uint64_t len = 1;
            while (len < max_len && text[src + len] == text[j + len]) ++len;
            if (len > best_len) {
                best_len = len;
                best_src = src;
                if (best_len == cap) break;
            }
        }

        std::uint64_t advance;
        if (best_len >= 1) {
            result.phrases.push_back(Phrase::copy(best_src + 1, best_len));
            advance = best_len;
        } else {
            result.phrases.push_back(Phrase::lit(text[j]));
            advance = 1;
        }
        for (std::uint64_t k = j; k < j + advance; ++k)
            positions_by_symbol[static_cast<unsigned char>(text[k])].push_back(k);
        j += advance;
    }
    return result;
}

}  // namespace

ParseResult parse(std::string_view text) {
    if (text.empty()) return ParseResult{};
    return parse_impl(text, {text.size()});
}

ParseResult parse_multi(std::span<const std::string> patterns) {
    if (patterns.empty()) return ParseResult{};
    std::string concat;
    std::vector<std::uint64_t> boundaries;
    boundaries.reserve(patterns.size());
    for (const std::string& p : patterns) {
        if (p.empty()) throw std::invalid_argument("parse_multi: empty member pattern");
        concat += p;
        boundaries.push_back(concat.size());
    }
    return parse_impl(concat, std::move(boundaries));
}

std::string decode(std::span<const Phrase> phrases) {
    std::string out;
    for (const Phrase& ph : phrases) {
        if (ph.kind == Phrase::Kind::literal) {
            out.push_back(ph.symbol);
            continue;
        }
        if (ph.src < 1 || ph.len < 1 || ph.src + ph.len - 1 > out.size())
            throw FormatError("copy phrase reaches outside the decoded prefix");
        // source fully inside the prefix, plain copy is safe
        out.append(out, ph.src - 1, ph.len);
    }
    return out;
}

}  // namespace bwtglue
