#ifndef BWTGLUE_SHARD_HPP
#define BWTGLUE_SHARD_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace bwtglue {

/// One shard's slice of the original text.  A shard owns `text_len - overlap`
/// characters; the trailing `overlap` characters duplicate the start of the
/// next shard so that matches crossing the cut are still found locally.
struct ShardSpec {
    std::uint32_t shard_id = 0;
    std::uint64_t global_offset = 1;  // 1-based position of the slice's first char
    std::uint64_t text_len = 0;       // slice length, extension included
    std::uint64_t overlap = 0;        // trailing chars shared with the next shard

    std::uint64_t owned_len() const { return text_len - overlap; }
};

/// Cuts `text` into q near-equal pieces (earlier pieces get the remainder),
/// then extends every piece but the last rightward by up to `overlap`
/// characters, never past the end of the text.  Matches no longer than
/// overlap + 1 never straddle two shards' owned regions undetected.
///
/// Throws std::invalid_argument when q < 1, q > |text|, or overlap >= |text|.
std::vector<std::pair<ShardSpec, std::string>> shard_text(std::string_view text, std::uint32_t q,
                                                          std::uint64_t overlap);

}  // namespace bwtglue

#endif
