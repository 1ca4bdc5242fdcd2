#ifndef BWTGLUE_SHARD_SERVER_HPP
#define BWTGLUE_SHARD_SERVER_HPP

#include <optional>
#include <string>
#include <string_view>

#include "bwtglue/avl_grammar.hpp"
#include "bwtglue/byte_stream.hpp"
#include "bwtglue/fm_index.hpp"
#include "bwtglue/protocol.hpp"
#include "bwtglue/shard.hpp"

namespace bwtglue {

/// Answers wire-protocol requests against one shard's index.  A loaded plan
/// survives across connections; searches report only positions the shard
/// owns (local start within owned_len), translated to global coordinates.
class ShardServer {
public:
    ShardServer(BwtIndex index, ShardSpec spec);

    /// Serves one connection until the peer closes it or a shutdown request
    /// arrives.  Returns true when shutdown was requested.  Malformed
    /// payloads get an error reply and the connection stays open; an
    /// oversized frame closes the connection.
    bool serve_connection(ByteStream& conn);

    bool shutdown_requested() const { return shutdown_; }
    const ShardSpec& spec() const { return spec_; }
    const BwtIndex& index() const { return index_; }

private:
    std::string handle_payload(std::string_view payload);
    std::string handle_load_plan(std::string_view payload);
    std::string handle_search();

    BwtIndex index_;
    ShardSpec spec_;

    struct LoadedPlan {
        Grammar grammar;
        std::vector<RuleId> roots;
        std::vector<std::uint64_t> pattern_lens;
        SearchMode mode = SearchMode::count;
    };
    std::optional<LoadedPlan> plan_;
    bool shutdown_ = false;
};

}  // namespace bwtglue

#endif
