#include "bwtglue/shard.hpp"

#include <algorithm>
#include <stdexcept>

namespace bwtglue {

std::vector<std::pair<ShardSpec, std::string>> shard_text(std::string_view text, std::uint32_t q,
                                                          std::uint64_t overlap) {
    const std::uint64_t n = text.size();
    if (q < 1) throw std::invalid_argument("shard count must be positive");
    if (q > n) throw std::invalid_argument("more shards than characters");
    if (overlap >= n && n > 0) throw std::invalid_argument("overlap must be smaller than the text");

    const std::uint64_t base = n / q;
    const std::uint64_t rem = n % q;

    std::vector<std::pair<ShardSpec, std::string>> shards;
    shards.reserve(q);
    std::uint64_t pos = 0;  // 0-based start of the next owned region
    for (std::uint32_t s = 0; s < q; ++s) {
        const std::uint64_t owned = base + (s < rem ? 1 : 0);
        const bool last = (s + 1 == q);
        const std::uint64_t ext = last ? 0 : std::min(overlap, n - (pos + owned));
        ShardSpec spec;
        spec.shard_id = s;
        spec.global_offset = pos + 1;
        spec.text_len = owned + ext;
        spec.overlap = ext;
        shards.emplace_back(spec, std::string(text.substr(pos, owned + ext)));
        pos += owned;
    }
    return shards;
}

}  // namespace bwtglue
