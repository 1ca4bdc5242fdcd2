#include "bwtglue/protocol.hpp"

#include <array>
#include <stdexcept>

#include <json.hpp>

#include "bwtglue/errors.hpp"

namespace bwtglue {

using nlohmann::json;

namespace {

json parse_json(std::string_view payload) {
    json j = json::parse(payload, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ProtocolError("malformed message: invalid JSON");
    if (!j.is_object()) throw ProtocolError("malformed message: not an object");
    return j;
}

const json& field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end())
        throw ProtocolError(std::string("malformed message: missing field '") + name + "'");
    return *it;
}

std::uint64_t u64_field(const json& v, const char* name) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ProtocolError(std::string("malformed message: field '") + name +
                            "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

constexpr char kB64Alphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::array<int, 256> make_b64_rev() {
    std::array<int, 256> rev{};
    rev.fill(-1);
    for (int i = 0; i < 64; ++i) rev[static_cast<unsigned char>(kB64Alphabet[i])] = i;
    return rev;
}

}  // namespace

FrameStatus read_frame(ByteStream& stream, std::string& payload) {
    unsigned char hdr[4];
    if (!stream.read_exact(hdr, 4)) return FrameStatus::closed;
    const std::uint32_t len = (std::uint32_t{hdr[0]} << 24) | (std::uint32_t{hdr[1]} << 16) |
                              (std::uint32_t{hdr[2]} << 8) | std::uint32_t{hdr[3]};
    if (len > kMaxFramePayload) return FrameStatus::oversized;
    payload.resize(len);
    if (len > 0 && !stream.read_exact(payload.data(), len))
        throw ProtocolError("stream closed between frame header and payload");
    return FrameStatus::ok;
}

bool write_frame(ByteStream& stream, std::string_view payload) {
    if (payload.size() > kMaxFramePayload) throw ProtocolError("frame payload too large");
    const auto len = static_cast<std::uint32_t>(payload.size());
    std::string buf;
    buf.reserve(4 + payload.size());
    buf.push_back(static_cast<char>((len >> 24) & 0xff));
    buf.push_back(static_cast<char>((len >> 16) & 0xff));
    buf.push_back(static_cast<char>((len >> 8) & 0xff));
    buf.push_back(static_cast<char>(len & 0xff));
    buf.append(payload);
    return stream.write_all(buf.data(), buf.size());
}

std::string base64_encode(std::string_view bytes) {
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                                (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                                static_cast<unsigned char>(bytes[i + 2]);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back(kB64Alphabet[v & 63]);
    }
    const std::size_t rest = bytes.size() - i;
    if (rest == 1) {
        const std::uint32_t v = static_cast<unsigned char>(bytes[i]) << 16;
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.append("==");
    } else if (rest == 2) {
        const std::uint32_t v = (static_cast<unsigned char>(bytes[i]) << 16) |
                                (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out.push_back(kB64Alphabet[(v >> 18) & 63]);
        out.push_back(kB64Alphabet[(v >> 12) & 63]);
        out.push_back(kB64Alphabet[(v >> 6) & 63]);
        out.push_back('=');
    }
    return out;
}

std::string base64_decode(std::string_view text) {
    static const std::array<int, 256> rev = make_b64_rev();
    if (text.size() % 4 != 0) throw ProtocolError("base64 payload length not a multiple of 4");
    std::string out;
    out.reserve(text.size() / 4 * 3);
    for (std::size_t i = 0; i < text.size(); i += 4) {
        int vals[4];
        int pad = 0;
        for (int k = 0; k < 4; ++k) {
            const char c = text[i + k];
            if (c == '=') {
                // padding may only appear in the last two slots of the final group
                if (i + 4 != text.size() || k < 2) throw ProtocolError("misplaced base64 padding");
                vals[k] = 0;
                ++pad;
            } else {
                if (pad > 0) throw ProtocolError("misplaced base64 padding");
                vals[k] = rev[static_cast<unsigned char>(c)];
                if (vals[k] < 0) throw ProtocolError("invalid base64 character");
            }
        }
        const std::uint32_t v = (static_cast<std::uint32_t>(vals[0]) << 18) |
                                (static_cast<std::uint32_t>(vals[1]) << 12) |
                                (static_cast<std::uint32_t>(vals[2]) << 6) |
                                static_cast<std::uint32_t>(vals[3]);
        out.push_back(static_cast<char>((v >> 16) & 0xff));
        if (pad < 2) out.push_back(static_cast<char>((v >> 8) & 0xff));
        if (pad < 1) out.push_back(static_cast<char>(v & 0xff));
    }
    return out;
}

std::string_view to_string(SearchMode mode) {
    return mode == SearchMode::count ? "count" : "locate";
}

SearchMode search_mode_from_string(std::string_view s) {
    if (s == "count") return SearchMode::count;
    if (s == "locate") return SearchMode::locate;
    throw ProtocolError("unknown search mode: " + std::string(s));
}

std::string make_load_plan_message(const QueryPlan& plan) {
    json j;
    j["type"] = "load_plan";
    j["grammar"] = base64_encode(plan.grammar_bytes);
    j["roots"] = plan.roots;
    j["pattern_lens"] = plan.pattern_lens;
    j["mode"] = to_string(plan.mode);
    return j.dump();
}

std::string make_search_message() { return json{{"type", "search"}}.dump(); }
std::string make_shutdown_message() { return json{{"type", "shutdown"}}.dump(); }
std::string make_ack_message() { return json{{"type", "ack"}}.dump(); }

std::string make_error_message(std::string_view message) {
    return json{{"type", "error"}, {"message", std::string(message)}}.dump();
}

std::string make_result_message(const ShardResult& result, SearchMode mode) {
    json j;
    j["type"] = "result";
    j["counts"] = result.counts;
    if (mode == SearchMode::locate) j["positions"] = result.positions;
    return j.dump();
}

std::string message_type(std::string_view payload) {
    const json j = parse_json(payload);
    const json& t = field(j, "type");
    if (!t.is_string()) throw ProtocolError("malformed message: 'type' must be a string");
    return t.get<std::string>();
}

QueryPlan parse_load_plan_message(std::string_view payload) {
    const json j = parse_json(payload);
    QueryPlan plan;

    const json& g = field(j, "grammar");
    if (!g.is_string()) throw ProtocolError("malformed message: 'grammar' must be a string");
    plan.grammar_bytes = base64_decode(g.get<std::string>());

    const json& roots = field(j, "roots");
    if (!roots.is_array()) throw ProtocolError("malformed message: 'roots' must be an array");
    for (const json& r : roots) plan.roots.push_back(u64_field(r, "roots"));

    const json& lens = field(j, "pattern_lens");
    if (!lens.is_array()) throw ProtocolError("malformed message: 'pattern_lens' must be an array");
    for (const json& l : lens) plan.pattern_lens.push_back(u64_field(l, "pattern_lens"));

    if (plan.roots.size() != plan.pattern_lens.size())
        throw ProtocolError("malformed message: 'roots' and 'pattern_lens' differ in length");

    const json& mode = field(j, "mode");
    if (!mode.is_string()) throw ProtocolError("malformed message: 'mode' must be a string");
    plan.mode = search_mode_from_string(mode.get<std::string>());
    return plan;
}

ShardResult parse_result_message(std::string_view payload) {
    const json j = parse_json(payload);
    ShardResult result;

    const json& counts = field(j, "counts");
    if (!counts.is_array()) throw ProtocolError("malformed message: 'counts' must be an array");
    for (const json& c : counts) result.counts.push_back(u64_field(c, "counts"));

    if (auto it = j.find("positions"); it != j.end()) {
        if (!it->is_array()) throw ProtocolError("malformed message: 'positions' must be an array");
        for (const json& per_pattern : *it) {
            if (!per_pattern.is_array())
                throw ProtocolError("malformed message: 'positions' entries must be arrays");
            std::vector<std::uint64_t> ps;
            for (const json& p : per_pattern) ps.push_back(u64_field(p, "positions"));
            result.positions.push_back(std::move(ps));
        }
    }
    return result;
}

std::string parse_error_message(std::string_view payload) {
    const json j = parse_json(payload);
    const json& m = field(j, "message");
    if (!m.is_string()) throw ProtocolError("malformed message: 'message' must be a string");
    return m.get<std::string>();
}

}  // namespace bwtglue
