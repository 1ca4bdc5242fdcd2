#ifndef BWTGLUE_ORCHESTRATOR_HPP
#define BWTGLUE_ORCHESTRATOR_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "bwtglue/byte_stream.hpp"
#include "bwtglue/protocol.hpp"

namespace bwtglue {

/// An open connection to one shard server; `name` labels it in errors.
struct ShardConnection {
    std::string name;
    ByteStream* stream = nullptr;
};

struct OrchestrateStats {
    std::uint64_t plan_serializations = 0;  // grammar is serialized exactly once
    std::uint64_t plan_bytes = 0;
    std::uint64_t parse_phrases = 0;
    std::uint64_t grammar_rules = 0;
};

struct DistributedResult {
    std::vector<std::uint64_t> counts;                  // per pattern, summed over shards
    std::vector<std::vector<std::uint64_t>> positions;  // locate mode: global, sorted, unique
};

/// Compresses the patterns into one shared grammar, broadcasts the plan,
/// triggers the searches, and aggregates shard answers.  Shards are
/// contacted in order; an unreachable shard raises ShardError naming it, a
/// rejected plan or unexpected reply raises ProtocolError.
DistributedResult orchestrate(std::span<const std::string> patterns,
                              std::span<const ShardConnection> shards, SearchMode mode,
                              OrchestrateStats* stats = nullptr);

/// Asks each shard to exit; best effort, returns the number of acks.
std::size_t broadcast_shutdown(std::span<const ShardConnection> shards);

}  // namespace bwtglue

#endif
