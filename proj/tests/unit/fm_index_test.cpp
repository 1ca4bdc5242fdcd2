#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <random>
#include <stdexcept>
#include <string>

#include "bwtglue/errors.hpp"
#include "bwtglue/fm_index.hpp"
#include "bwtglue/interval.hpp"
#include "oracle.hpp"

using namespace bwtglue;
using testkit::OracleSuffixTable;

namespace {

const std::string kMiss = "mississippi";

std::string miss_bwt() {
    std::string s = "ipssm";
    s += '\0';
    s += "pissii";
    return s;
}

}  // namespace

TEST_CASE("mississippi bwt") {
    const BwtIndex idx = BwtIndex::build(kMiss, 4);
    CHECK(idx.bwt() == miss_bwt());
    CHECK(idx.text_len() == 11);
    CHECK(idx.row_count() == 12);
    CHECK(idx.alphabet() == "imps");
}

TEST_CASE("mississippi pattern intervals") {
    const BwtIndex idx = BwtIndex::build(kMiss, 4);
    CHECK(idx.backward_search("i") == Interval{2, 5});
    CHECK(idx.backward_search("p") == Interval{7, 8});
    CHECK(idx.backward_search("ip") == Interval{3, 3});
    CHECK(idx.backward_search("s") == Interval{9, 12});
    CHECK(idx.backward_search("ss") == Interval{11, 12});
    CHECK(idx.backward_search("mississippi") == Interval{6, 6});
    CHECK(idx.backward_search("x").empty());
    CHECK(idx.backward_search("ipi").empty());
    CHECK(idx.backward_search("") == idx.full_interval());
    // patterns containing the sentinel can never occur
    CHECK(idx.backward_search(std::string_view("\0", 1)).empty());
}

TEST_CASE("mississippi locate and antilocate fixtures") {
    const BwtIndex idx = BwtIndex::build(kMiss, 4);
    CHECK(idx.antilocate(9) == 7);
    CHECK(idx.antilocate(6) == 9);
    CHECK(idx.antilocate(8) == 8);
    CHECK(idx.antilocate(5) == 11);
    CHECK(idx.antilocate(11) == 1);
    CHECK(idx.antilocate(2) == 12);
    CHECK(idx.locate(9) == 6);
    CHECK(idx.locate(2) == 10);
    CHECK(idx.locate(6) == 12);
}

TEST_CASE("mississippi locate_all") {
    const BwtIndex idx = BwtIndex::build(kMiss, 4);
    CHECK(idx.locate_all(idx.backward_search("s"), 1) ==
          std::vector<std::uint64_t>{3, 4, 6, 7});
    CHECK(idx.locate_all(idx.backward_search("ip"), 2) == std::vector<std::uint64_t>{8});
    CHECK(idx.locate_all(idx.backward_search("ss"), 2) == std::vector<std::uint64_t>{3, 6});
    CHECK(idx.locate_all(Interval::none(), 3).empty());
}

TEST_CASE("locate agrees with oracle at every row and sample rate") {
    std::mt19937 rng(7101);
    for (int round = 0; round < 20; ++round) {
        const std::string text = testkit::random_text(rng, 1 + round * 13, 4);
        const auto oracle = OracleSuffixTable::build(text);
        for (std::uint64_t rate : {1, 3, 32}) {
            const BwtIndex idx = BwtIndex::build(text, rate);
            REQUIRE(idx.bwt() == oracle.bwt());
            for (std::uint64_t row = 1; row <= idx.row_count(); ++row)
                CHECK(idx.locate(row) == oracle.locate(row));
            for (std::uint64_t pos = 1; pos <= idx.row_count(); ++pos)
                CHECK(idx.antilocate(pos) == oracle.antilocate(pos));
        }
    }
}

TEST_CASE("locate and antilocate invert each other") {
    std::mt19937 rng(7102);
    const std::string text = testkit::random_text(rng, 300, 2);
    const BwtIndex idx = BwtIndex::build(text, 8);
    for (std::uint64_t row = 1; row <= idx.row_count(); ++row)
        CHECK(idx.antilocate(idx.locate(row)) == row);
}

TEST_CASE("backward_search agrees with oracle including absent patterns") {
    std::mt19937 rng(7103);
    for (int round = 0; round < 30; ++round) {
        const int sigma = (round % 3 == 0) ? 2 : (round % 3 == 1) ? 4 : 26;
        const std::string text = testkit::random_text(rng, 50 + round * 17, sigma);
        const auto oracle = OracleSuffixTable::build(text);
        const BwtIndex idx = BwtIndex::build(text, 5);
        for (int p = 0; p < 10; ++p) {
            const std::string pat = (p % 2 == 0)
                                        ? testkit::present_pattern(rng, text, 1, 8)
                                        : testkit::random_pattern(rng, 1, 8, sigma);
            CHECK(idx.backward_search(pat) == oracle.interval(pat));
        }
        // patterns using symbols outside the indexed alphabet
        CHECK(idx.backward_search("Z").empty());
        CHECK(idx.backward_search("aZ").empty());
    }
}

TEST_CASE("locate_all equals oracle occurrences") {
    std::mt19937 rng(7104);
    for (int round = 0; round < 15; ++round) {
        const std::string text = testkit::random_text(rng, 120, 2);
        const auto oracle = OracleSuffixTable::build(text);
        const BwtIndex idx = BwtIndex::build(text, 4);
        for (int p = 0; p < 8; ++p) {
            const std::string pat = testkit::random_pattern(rng, 1, 5, 2);
            CHECK(idx.locate_all(idx.backward_search(pat), pat.size()) ==
                  oracle.occurrences(pat));
        }
    }
}

TEST_CASE("extract and reconstruct round trip") {
    std::mt19937 rng(7105);
    const std::string text = testkit::random_text(rng, 257, 4);
    const BwtIndex idx = BwtIndex::build(text, 16);
    CHECK(idx.reconstruct_text() == text);
    CHECK(idx.extract(1, text.size()) == text);
    CHECK(idx.extract(5, 0).empty());
    for (int i = 0; i < 30; ++i) {
        std::uniform_int_distribution<std::uint64_t> pos_dist(1, text.size());
        const std::uint64_t pos = pos_dist(rng);
        std::uniform_int_distribution<std::uint64_t> len_dist(0, text.size() - pos + 1);
        const std::uint64_t len = len_dist(rng);
        CHECK(idx.extract(pos, len) == text.substr(pos - 1, len));
    }
    CHECK_THROWS_AS((void)idx.extract(0, 1), std::out_of_range);
    CHECK_THROWS_AS((void)idx.extract(1, text.size() + 1), std::out_of_range);
}

TEST_CASE("build rejects bad input") {
    CHECK_THROWS_AS((void)BwtIndex::build("", 4), std::invalid_argument);
    CHECK_THROWS_AS((void)BwtIndex::build(std::string("a\0b", 3), 4), std::invalid_argument);
    CHECK_THROWS_AS((void)BwtIndex::build("abc", 0), std::invalid_argument);
}

TEST_CASE("locate and antilocate reject out-of-range arguments") {
    const BwtIndex idx = BwtIndex::build(kMiss, 4);
    CHECK_THROWS_AS((void)idx.locate(0), std::out_of_range);
    CHECK_THROWS_AS((void)idx.locate(13), std::out_of_range);
    CHECK_THROWS_AS((void)idx.antilocate(0), std::out_of_range);
    CHECK_THROWS_AS((void)idx.antilocate(13), std::out_of_range);
}

TEST_CASE("serialize deserialize round trip") {
    std::mt19937 rng(7106);
    const std::string text = testkit::random_text(rng, 333, 26);
    const BwtIndex idx = BwtIndex::build(text, 7);
    const std::string bytes = idx.serialize();
    const BwtIndex back = BwtIndex::deserialize(bytes);

    CHECK(back.serialize() == bytes);  // canonical form is stable
    CHECK(back.bwt() == idx.bwt());
    CHECK(back.sample_rate() == idx.sample_rate());
    for (int p = 0; p < 20; ++p) {
        const std::string pat = testkit::present_pattern(rng, text, 1, 6);
        CHECK(back.backward_search(pat) == idx.backward_search(pat));
        CHECK(back.locate_all(back.backward_search(pat), pat.size()) ==
              idx.locate_all(idx.backward_search(pat), pat.size()));
    }
    CHECK(back.reconstruct_text() == text);
}

TEST_CASE("builds are deterministic") {
    std::mt19937 rng(7107);
    const std::string text = testkit::random_text(rng, 200, 4);
    CHECK(BwtIndex::build(text, 9).serialize() == BwtIndex::build(text, 9).serialize());
}

TEST_CASE("deserialize rejects corrupted bytes") {
    const BwtIndex idx = BwtIndex::build(kMiss, 4);
    const std::string bytes = idx.serialize();

    std::string bad_magic = bytes;
    bad_magic[0] = 'X';
    CHECK_THROWS_AS((void)BwtIndex::deserialize(bad_magic), FormatError);

    std::string bad_version = bytes;
    bad_version[4] = 9;
    CHECK_THROWS_AS((void)BwtIndex::deserialize(bad_version), FormatError);

    std::string flipped = bytes;
    flipped[bytes.size() / 2] ^= 0x40;  // body corruption caught by the checksum
    CHECK_THROWS_AS((void)BwtIndex::deserialize(flipped), FormatError);

    CHECK_THROWS_AS((void)BwtIndex::deserialize(bytes.substr(0, bytes.size() - 3)), FormatError);
    CHECK_THROWS_AS((void)BwtIndex::deserialize(bytes + "xx"), FormatError);
    CHECK_THROWS_AS((void)BwtIndex::deserialize(""), FormatError);
}

TEST_CASE("save and load through a file") {
    const std::string path = "bwtglue_fm_test.bwtg";
    const BwtIndex idx = BwtIndex::build(kMiss, 4);
    idx.save(path);
    const BwtIndex back = BwtIndex::load(path);
    CHECK(back.backward_search("ip") == Interval{3, 3});
    CHECK(back.reconstruct_text() == kMiss);
    std::remove(path.c_str());
    CHECK_THROWS((void)BwtIndex::load("does-not-exist.bwtg"));
}
