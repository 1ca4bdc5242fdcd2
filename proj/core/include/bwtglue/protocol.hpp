#ifndef BWTGLUE_PROTOCOL_HPP
#define BWTGLUE_PROTOCOL_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bwtglue/avl_grammar.hpp"
#include "bwtglue/byte_stream.hpp"

namespace bwtglue {

/// Frames are a 4-byte big-endian payload length followed by that many bytes
/// of UTF-8 JSON.
inline constexpr std::size_t kMaxFramePayload = 64ull << 20;

enum class FrameStatus {
    ok,
    closed,     // clean EOF before a frame started
    oversized,  // announced length beyond kMaxFramePayload; stream is unusable
};

FrameStatus read_frame(ByteStream& stream, std::string& payload);
bool write_frame(ByteStream& stream, std::string_view payload);

std::string base64_encode(std::string_view bytes);
std::string base64_decode(std::string_view text);  // throws ProtocolError on bad input

enum class SearchMode { count, locate };

std::string_view to_string(SearchMode mode);
SearchMode search_mode_from_string(std::string_view s);  // throws ProtocolError

/// Everything a shard needs to answer queries: the serialized grammar, one
/// root per pattern, the pattern lengths, and the reporting mode.
struct QueryPlan {
    std::string grammar_bytes;               // serialized grammar container
    std::vector<RuleId> roots;               // ids within grammar_bytes
    std::vector<std::uint64_t> pattern_lens;  // expansion length per root
    SearchMode mode = SearchMode::count;
};

struct ShardResult {
    std::vector<std::uint64_t> counts;                  // per pattern
    std::vector<std::vector<std::uint64_t>> positions;  // per pattern; empty in count mode
};

// Payload builders/parsers.  Parsers throw ProtocolError on malformed JSON
// or missing/ill-typed fields.
std::string make_load_plan_message(const QueryPlan& plan);
std::string make_search_message();
std::string make_shutdown_message();
std::string make_ack_message();
std::string make_error_message(std::string_view message);
std::string make_result_message(const ShardResult& result, SearchMode mode);

std::string message_type(std::string_view payload);
QueryPlan parse_load_plan_message(std::string_view payload);
ShardResult parse_result_message(std::string_view payload);
std::string parse_error_message(std::string_view payload);

}  // namespace bwtglue

#endif
