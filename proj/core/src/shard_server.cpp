#include "bwtglue/shard_server.hpp"

#include <algorithm>
#include <utility>

#include "bwtglue/errors.hpp"
#include "bwtglue/grammar_search.hpp"
#include "bwtglue/interval.hpp"

namespace bwtglue {

ShardServer::ShardServer(BwtIndex index, ShardSpec spec)
    : index_(std::move(index)), spec_(spec) {}

bool ShardServer::serve_connection(ByteStream& conn) {
    std::string payload;
    for (;;) {
        switch (read_frame(conn, payload)) {
            case FrameStatus::closed:
                return shutdown_;
            case FrameStatus::oversized:
                conn.close();
                return shutdown_;
            case FrameStatus::ok:
                break;
        }
        if (!write_frame(conn, handle_payload(payload))) return shutdown_;
        if (shutdown_) {
            conn.close();
            return true;
        }
    }
}

std::string ShardServer::handle_payload(std::string_view payload) {
    try {
        const std::string type = message_type(payload);
        if (type == "load_plan") return handle_load_plan(payload);
        if (type == "search") return handle_search();
        if (type == "shutdown") {
            shutdown_ = true;
            return make_ack_message();
        }
        return make_error_message("unknown message type: " + type);
    } catch (const ProtocolError& e) {
        return make_error_message(e.what());
    } catch (const FormatError& e) {
        return make_error_message(e.what());
    } catch (const std::exception& e) {
        return make_error_message(std::string("internal error: ") + e.what());
    }
}

std::string ShardServer::handle_load_plan(std::string_view payload) {
    QueryPlan plan = parse_load_plan_message(payload);
    Grammar grammar = deserialize_grammar(plan.grammar_bytes);
    for (std::size_t i = 0; i < plan.roots.size(); ++i) {
        if (plan.roots[i] >= grammar.rule_count())
            return make_error_message("plan root out of range");
        if (grammar.exp_len(plan.roots[i]) != plan.pattern_lens[i])
            return make_error_message("declared pattern length disagrees with the grammar");
    }
    plan_ = LoadedPlan{std::move(grammar), std::move(plan.roots), std::move(plan.pattern_lens),
                       plan.mode};
    return make_ack_message();
}

std::string ShardServer::handle_search() {
    if (!plan_) return make_error_message("no plan loaded");

    const std::vector<Interval> intervals =
        multi_search(index_, plan_->grammar, plan_->roots);

    ShardResult result;
    result.counts.reserve(intervals.size());
    for (std::size_t i = 0; i < intervals.size(); ++i) {
        std::vector<std::uint64_t> global;
        for (std::uint64_t local : index_.locate_all(intervals[i], plan_->pattern_lens[i]))
            if (local <= spec_.owned_len())
                global.push_back(local + spec_.global_offset - 1);
        std::sort(global.begin(), global.end());
        result.counts.push_back(global.size());
        if (plan_->mode == SearchMode::locate) result.positions.push_back(std::move(global));
    }
    return make_result_message(result, plan_->mode);
}

}  // namespace bwtglue
