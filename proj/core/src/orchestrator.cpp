#include "bwtglue/orchestrator.hpp"

#include <algorithm>
#include <stdexcept>

#include "bwtglue/avl_grammar.hpp"
#include "bwtglue/errors.hpp"
#include "bwtglue/lz77.hpp"

namespace bwtglue {

namespace {

// One request/reply round trip; connection failures become ShardError.
std::string round_trip(const ShardConnection& shard, std::string_view request) {
    if (!shard.stream) throw ShardError(shard.name, "no stream attached");
    if (!write_frame(*shard.stream, request))
        throw ShardError(shard.name, "connection closed while sending");
    std::string reply;
    FrameStatus st;
    try {
        st = read_frame(*shard.stream, reply);
    } catch (const ProtocolError& e) {
        throw ShardError(shard.name, std::string("connection lost: ") + e.what());
    }
    if (st == FrameStatus::closed) throw ShardError(shard.name, "connection closed before reply");
    if (st == FrameStatus::oversized) throw ShardError(shard.name, "oversized reply frame");
    return reply;
}

void expect_ack(const ShardConnection& shard, std::string_view reply, const char* action) {
    const std::string type = message_type(reply);
    if (type == "ack") return;
    if (type == "error")
        throw ProtocolError("shard " + shard.name + " rejected " + action + ": " +
                            parse_error_message(reply));
    throw ProtocolError("shard " + shard.name + " sent unexpected '" + type + "' to " + action);
}

}  // namespace

DistributedResult orchestrate(std::span<const std::string> patterns,
                              std::span<const ShardConnection> shards, SearchMode mode,
                              OrchestrateStats* stats) {
    if (patterns.empty()) throw std::invalid_argument("no patterns to search");
    if (shards.empty()) throw std::invalid_argument("no shards to query");

    // Build the shared plan once: joint parse, grammar, one root per pattern.
    const ParseResult parse = parse_multi(patterns);
    Grammar grammar = from_lz77(parse);
    const std::vector<RuleId> roots =
        grammar.split_patterns(grammar.roots().at(0), parse.pattern_boundaries);
    grammar.set_roots(roots);

    QueryPlan plan;
    std::vector<RuleId> payload_roots;
    plan.grammar_bytes = serialize_grammar(grammar, roots, &payload_roots);
    plan.roots = std::move(payload_roots);
    for (const std::string& p : patterns) plan.pattern_lens.push_back(p.size());
    plan.mode = mode;

    if (stats) {
        stats->plan_serializations += 1;
        stats->plan_bytes = plan.grammar_bytes.size();
        stats->parse_phrases = parse.phrase_count();
        stats->grammar_rules = grammar.live_rule_count(roots);
    }

    const std::string load_msg = make_load_plan_message(plan);
    const std::string search_msg = make_search_message();
    const std::size_t t = patterns.size();

    DistributedResult out;
    out.counts.assign(t, 0);
    if (mode == SearchMode::locate) out.positions.resize(t);

    for (const ShardConnection& shard : shards) {
        expect_ack(shard, round_trip(shard, load_msg), "the query plan");

        const std::string reply = round_trip(shard, search_msg);
        const std::string type = message_type(reply);
        if (type == "error")
            throw ProtocolError("shard " + shard.name + " failed the search: " +
                                parse_error_message(reply));
        if (type != "result")
            throw ProtocolError("shard " + shard.name + " sent unexpected '" + type +
                                "' to the search");

        const ShardResult result = parse_result_message(reply);
        if (result.counts.size() != t)
            throw ProtocolError("shard " + shard.name + " answered for the wrong pattern count");
        if (mode == SearchMode::locate && result.positions.size() != t)
            throw ProtocolError("shard " + shard.name + " omitted positions in locate mode");

        for (std::size_t i = 0; i < t; ++i) {
            out.counts[i] += result.counts[i];
            if (mode == SearchMode::locate)
                out.positions[i].insert(out.positions[i].end(), result.positions[i].begin(),
                                        result.positions[i].end());
        }
    }

    if (mode == SearchMode::locate) {
        // Overlap regions can surface the same global position on two shards;
        // ownership filtering makes that impossible, but dedup keeps the
        // aggregate well-defined for any conforming server.
        for (std::size_t i = 0; i < t; ++i) {
            auto& ps = out.positions[i];
            std::sort(ps.begin(), ps.end());
            ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
            out.counts[i] = ps.size();
        }
    }
    return out;
}

std::size_t broadcast_shutdown(std::span<const ShardConnection> shards) {
    const std::string msg = make_shutdown_message();
    std::size_t acks = 0;
    for (const ShardConnection& shard : shards) {
        try {
            if (message_type(round_trip(shard, msg)) == "ack") ++acks;
        } catch (const ShardError&) {
            // best effort: a shard that is already gone counts as shut down
        } catch (const ProtocolError&) {
        }
    }
    return acks;
}

}  // namespace bwtglue
