#include <doctest.h>

#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "bwtglue/byte_stream.hpp"
#include "bwtglue/errors.hpp"
#include "bwtglue/fm_index.hpp"
#include "bwtglue/orchestrator.hpp"
#include "bwtglue/protocol.hpp"
#include "bwtglue/shard.hpp"
#include "bwtglue/shard_server.hpp"
#include "cluster.hpp"
#include "oracle.hpp"

using namespace bwtglue;
using testkit::LoopbackCluster;

namespace {

std::uint64_t max_len(const std::vector<std::string>& pats) {
    std::uint64_t m = 0;
    for (const auto& p : pats) m = std::max<std::uint64_t>(m, p.size());
    return m;
}

}  // namespace

TEST_CASE("shard_text fixture and errors") {
    const auto shards = shard_text("mississippi", 2, 1);
    REQUIRE(shards.size() == 2);
    CHECK(shards[0].second == "mississ");
    CHECK(shards[0].first.global_offset == 1);
    CHECK(shards[0].first.owned_len() == 6);
    CHECK(shards[0].first.overlap == 1);
    CHECK(shards[1].second == "sippi");
    CHECK(shards[1].first.global_offset == 7);
    CHECK(shards[1].first.owned_len() == 5);
    CHECK(shards[1].first.overlap == 0);

    CHECK_THROWS_AS((void)shard_text("abc", 0, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)shard_text("abc", 4, 0), std::invalid_argument);
    CHECK_THROWS_AS((void)shard_text("abc", 2, 3), std::invalid_argument);
}

TEST_CASE("shard_text extension stops at the text end") {
    const auto shards = shard_text("abcdef", 3, 5);
    REQUIRE(shards.size() == 3);
    CHECK(shards[0].second == "abcdef");  // wanted 5 extra, got 4
    CHECK(shards[0].first.owned_len() == 2);
    CHECK(shards[1].second == "cdef");
    CHECK(shards[2].second == "ef");
    std::uint64_t covered = 0;
    for (const auto& [spec, slice] : shards) covered += spec.owned_len();
    CHECK(covered == 6);
}

TEST_CASE("frame round trip and size limit") {
    auto [a, b] = make_loopback_pair();
    CHECK(write_frame(*a, R"({"type":"search"})"));
    std::string payload;
    CHECK(read_frame(*b, payload) == FrameStatus::ok);
    CHECK(payload == R"({"type":"search"})");

    // empty payload frames are legal at this layer
    CHECK(write_frame(*a, ""));
    CHECK(read_frame(*b, payload) == FrameStatus::ok);
    CHECK(payload.empty());

    // an announced length beyond the cap is reported, not allocated
    const unsigned char huge[4] = {0xff, 0xff, 0xff, 0xff};
    CHECK(a->write_all(huge, 4));
    CHECK(read_frame(*b, payload) == FrameStatus::oversized);

    a->close();
    CHECK(read_frame(*b, payload) == FrameStatus::closed);
}

TEST_CASE("base64 round trip") {
    std::mt19937 rng(13701);
    for (std::size_t len : {0, 1, 2, 3, 4, 57, 100}) {
        std::string bytes(len, '\0');
        for (char& c : bytes) c = static_cast<char>(rng());
        CHECK(base64_decode(base64_encode(bytes)) == bytes);
    }
    CHECK(base64_encode("foob") == "Zm9vYg==");
    CHECK_THROWS_AS((void)base64_decode("abc"), ProtocolError);
    CHECK_THROWS_AS((void)base64_decode("a==="), ProtocolError);
    CHECK_THROWS_AS((void)base64_decode("ab!="), ProtocolError);
}

TEST_CASE("distributed equals single-index search") {
    std::mt19937 rng(13702);
    for (int round = 0; round < 6; ++round) {
        const int sigma = round % 2 ? 2 : 4;
        const std::string text = testkit::random_text(rng, 200 + round * 120, sigma);
        const BwtIndex whole = BwtIndex::build(text, 4);

        std::vector<std::string> pats;
        for (int i = 0; i < 5; ++i)
            pats.push_back(i == 4 ? testkit::random_pattern(rng, 2, 6, sigma)
                                  : testkit::present_pattern(rng, text, 1, 9));

        for (std::uint32_t q : {1u, 2u, 3u, 5u}) {
            LoopbackCluster cluster(text, q, max_len(pats) - 1);
            const DistributedResult got =
                orchestrate(pats, cluster.connections(), SearchMode::locate);
            for (std::size_t i = 0; i < pats.size(); ++i) {
                const auto expect =
                    whole.locate_all(whole.backward_search(pats[i]), pats[i].size());
                CHECK(got.positions[i] == expect);
                CHECK(got.counts[i] == expect.size());
            }
        }
    }
}

TEST_CASE("count mode is exact and carries no positions") {
    std::mt19937 rng(13703);
    const std::string text = testkit::random_text(rng, 500, 2);
    const BwtIndex whole = BwtIndex::build(text, 4);
    std::vector<std::string> pats{testkit::present_pattern(rng, text, 1, 3),
                                  testkit::present_pattern(rng, text, 2, 5), "zz"};

    LoopbackCluster cluster(text, 3, max_len(pats) - 1);
    OrchestrateStats stats;
    const DistributedResult got =
        orchestrate(pats, cluster.connections(), SearchMode::count, &stats);
    CHECK(stats.plan_serializations == 1);
    CHECK(got.positions.empty());
    for (std::size_t i = 0; i < pats.size(); ++i)
        CHECK(got.counts[i] ==
              whole.locate_all(whole.backward_search(pats[i]), pats[i].size()).size());
    CHECK(got.counts[2] == 0);
}

TEST_CASE("search before plan yields a protocol error reply") {
    LoopbackCluster cluster("mississippi", 1, 0);
    const ShardConnection& conn = cluster.connections()[0];
    CHECK(write_frame(*conn.stream, make_search_message()));
    std::string reply;
    REQUIRE(read_frame(*conn.stream, reply) == FrameStatus::ok);
    CHECK(message_type(reply) == "error");
    CHECK(parse_error_message(reply) == "no plan loaded");

    // ... and the connection is still usable afterwards
    const std::vector<std::string> pats{"ss"};
    const DistributedResult got =
        orchestrate(pats, cluster.connections(), SearchMode::locate);
    CHECK(got.positions[0] == std::vector<std::uint64_t>{3, 6});
}

TEST_CASE("malformed payloads get error replies without dropping the connection") {
    LoopbackCluster cluster("mississippi", 1, 0);
    const ShardConnection& conn = cluster.connections()[0];
    std::string reply;

    for (const char* bad : {"this is not json", "[1,2,3]", R"({"no_type":1})",
                            R"({"type":"frobnicate"})"}) {
        CHECK(write_frame(*conn.stream, bad));
        REQUIRE(read_frame(*conn.stream, reply) == FrameStatus::ok);
        CHECK(message_type(reply) == "error");
    }

    // bad plan contents are rejected the same way
    QueryPlan plan;
    plan.grammar_bytes = "definitely not a grammar";
    plan.roots = {0};
    plan.pattern_lens = {1};
    CHECK(write_frame(*conn.stream, make_load_plan_message(plan)));
    REQUIRE(read_frame(*conn.stream, reply) == FrameStatus::ok);
    CHECK(message_type(reply) == "error");

    const std::vector<std::string> pats{"i"};
    CHECK(orchestrate(pats, cluster.connections(), SearchMode::count).counts[0] == 4);
}

TEST_CASE("oversized frames close the connection") {
    LoopbackCluster cluster("mississippi", 1, 0);
    const ShardConnection& conn = cluster.connections()[0];
    const unsigned char huge[4] = {0x7f, 0xff, 0xff, 0xff};
    CHECK(conn.stream->write_all(huge, 4));
    std::string reply;
    CHECK(read_frame(*conn.stream, reply) == FrameStatus::closed);
}

TEST_CASE("shutdown acknowledges and ends the serve loop") {
    const auto [spec, slice] = shard_text("mississippi", 1, 0).at(0);
    ShardServer server(BwtIndex::build(slice, 4), spec);

    auto [client, server_end] = make_loopback_pair();
    bool shutdown_seen = false;
    std::thread t([&] { shutdown_seen = server.serve_connection(*server_end); });

    CHECK(write_frame(*client, make_shutdown_message()));
    std::string reply;
    REQUIRE(read_frame(*client, reply) == FrameStatus::ok);
    CHECK(message_type(reply) == "ack");
    t.join();
    CHECK(shutdown_seen);
    CHECK(server.shutdown_requested());
}

TEST_CASE("a loaded plan survives across connections") {
    const auto shards = shard_text("mississippi", 1, 0);
    ShardServer server(BwtIndex::build(shards[0].second, 4), shards[0].first);

    QueryPlan plan;
    {
        Grammar g;
        const RuleId root = g.add_terminal('s');
        std::vector<RuleId> payload_roots;
        const std::vector<RuleId> roots{root};
        plan.grammar_bytes = serialize_grammar(g, roots, &payload_roots);
        plan.roots = payload_roots;
        plan.pattern_lens = {1};
        plan.mode = SearchMode::count;
    }

    {
        auto [client, server_end] = make_loopback_pair();
        std::thread t([&] { server.serve_connection(*server_end); });
        CHECK(write_frame(*client, make_load_plan_message(plan)));
        std::string reply;
        REQUIRE(read_frame(*client, reply) == FrameStatus::ok);
        CHECK(message_type(reply) == "ack");
        client->close();
        t.join();
    }
    {
        auto [client, server_end] = make_loopback_pair();
        std::thread t([&] { server.serve_connection(*server_end); });
        CHECK(write_frame(*client, make_search_message()));
        std::string reply;
        REQUIRE(read_frame(*client, reply) == FrameStatus::ok);
        REQUIRE(message_type(reply) == "result");
        CHECK(parse_result_message(reply).counts == std::vector<std::uint64_t>{4});
        client->close();
        t.join();
    }
}

TEST_CASE("orchestrate surfaces unreachable shards by name") {
    auto [client, server_end] = make_loopback_pair();
    server_end->close();  // peer gone before the handshake
    client->close();
    const ShardConnection dead{"shard-dead", client.get()};
    const std::vector<std::string> pats{"i"};
    try {
        (void)orchestrate(pats, {&dead, 1}, SearchMode::count);
        FAIL("expected ShardError");
    } catch (const ShardError& e) {
        CHECK(std::string(e.what()).find("shard-dead") != std::string::npos);
    }
}

TEST_CASE("orchestrate rejects empty inputs") {
    auto [client, server_end] = make_loopback_pair();
    const ShardConnection conn{"s", client.get()};
    const std::vector<std::string> none;
    const std::vector<std::string> pats{"a"};
    CHECK_THROWS_AS((void)orchestrate(none, {&conn, 1}, SearchMode::count),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)orchestrate(pats, {}, SearchMode::count), std::invalid_argument);
}

TEST_CASE("plans with lying pattern lengths are rejected by the shard") {
    LoopbackCluster cluster("mississippi", 1, 0);
    const ShardConnection& conn = cluster.connections()[0];

    Grammar g;
    const RuleId root = g.add_terminal('s');
    std::vector<RuleId> payload_roots;
    const std::vector<RuleId> roots{root};
    QueryPlan plan;
    plan.grammar_bytes = serialize_grammar(g, roots, &payload_roots);
    plan.roots = payload_roots;
    plan.pattern_lens = {5};  // actual expansion length is 1
    plan.mode = SearchMode::count;

    CHECK(write_frame(*conn.stream, make_load_plan_message(plan)));
    std::string reply;
    REQUIRE(read_frame(*conn.stream, reply) == FrameStatus::ok);
    CHECK(message_type(reply) == "error");
}
