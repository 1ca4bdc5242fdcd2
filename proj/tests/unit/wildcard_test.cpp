#include <doctest.h>

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "bwtglue/fm_index.hpp"
#include "bwtglue/wildcard.hpp"
#include "oracle.hpp"

using namespace bwtglue;

TEST_CASE("pattern parsing") {
    const WildcardPattern p1 = parse_wildcard_pattern("s??s");
    CHECK(p1.subpatterns == std::vector<std::string>{"s", "s"});
    CHECK(p1.gaps == std::vector<std::uint64_t>{2});
    CHECK(p1.core_length() == 4);

    const WildcardPattern p2 = parse_wildcard_pattern("??abc?");
    CHECK(p2.subpatterns == std::vector<std::string>{"abc"});
    CHECK(p2.gaps.empty());

    const WildcardPattern p3 = parse_wildcard_pattern("a?b???cd");
    CHECK(p3.subpatterns == std::vector<std::string>{"a", "b", "cd"});
    CHECK(p3.gaps == std::vector<std::uint64_t>{1, 3});
    CHECK(p3.core_length() == 8);

    CHECK_THROWS_AS((void)parse_wildcard_pattern(""), std::invalid_argument);
    CHECK_THROWS_AS((void)parse_wildcard_pattern("????"), std::invalid_argument);
}

TEST_CASE("mississippi wildcard fixtures") {
    const BwtIndex idx = BwtIndex::build("mississippi", 4);

    WildcardStats stats;
    const auto starts = match_exact(idx, parse_wildcard_pattern("s??s"), &stats);
    CHECK(starts == std::vector<std::uint64_t>{3, 4});  // "ssis" and "siss"

    CHECK(match_exact(idx, parse_wildcard_pattern("s?s")) == std::vector<std::uint64_t>{4});

    const auto spans = match_flexible(idx, parse_wildcard_pattern("s?s"));
    CHECK(spans == std::vector<std::pair<std::uint64_t, std::uint64_t>>{{3, 4}, {4, 6}, {6, 7}});
}

TEST_CASE("pivot picks the rarest subpattern") {
    const BwtIndex idx = BwtIndex::build("mississippi", 4);
    WildcardStats stats;
    // "m" occurs once, "i" four times
    (void)match_exact(idx, parse_wildcard_pattern("i?m??i"), &stats);
    CHECK(stats.pivot == 1);
    CHECK(stats.pivot_occurrences == 1);
    CHECK(stats.peak_candidates <= 1);
}

TEST_CASE("exact matches equal the brute-force scan") {
    std::mt19937 rng(12601);
    for (int round = 0; round < 60; ++round) {
        const int sigma = (round % 3 == 0) ? 2 : (round % 3 == 1) ? 4 : 26;
        const std::string text = testkit::random_text(rng, 40 + round * 9, sigma);
        const BwtIndex idx = BwtIndex::build(text, 5);

        std::string raw = testkit::present_pattern(rng, text, 2, 10);
        // punch 1-3 holes (may merge into runs or hit the ends)
        std::uniform_int_distribution<std::size_t> pos_dist(0, raw.size() - 1);
        for (int holes = 1 + round % 3; holes-- > 0;) raw[pos_dist(rng)] = '?';
        if (raw.find_first_not_of('?') == std::string::npos) continue;

        const WildcardPattern pat = parse_wildcard_pattern(raw);
        CHECK(match_exact(idx, pat) == testkit::oracle_wildcard_exact(text, pat));
    }
}

TEST_CASE("flexible matches equal the brute-force scan") {
    std::mt19937 rng(12602);
    for (int round = 0; round < 60; ++round) {
        const int sigma = (round % 2 == 0) ? 2 : 4;
        const std::string text = testkit::random_text(rng, 30 + round * 7, sigma);
        const BwtIndex idx = BwtIndex::build(text, 5);

        std::string raw = testkit::present_pattern(rng, text, 2, 8);
        std::uniform_int_distribution<std::size_t> pos_dist(0, raw.size() - 1);
        for (int holes = 1 + round % 3; holes-- > 0;) raw[pos_dist(rng)] = '?';
        if (raw.find_first_not_of('?') == std::string::npos) continue;

        const WildcardPattern pat = parse_wildcard_pattern(raw);
        CHECK(match_flexible(idx, pat) == testkit::oracle_wildcard_flexible(text, pat));
    }
}

TEST_CASE("edge shapes") {
    const BwtIndex idx = BwtIndex::build("abracadabra", 4);

    // single subpattern, no gaps: plain occurrence listing
    CHECK(match_exact(idx, parse_wildcard_pattern("abra")) ==
          std::vector<std::uint64_t>{1, 8});

    // absent subpattern kills the whole match
    CHECK(match_exact(idx, parse_wildcard_pattern("a?z")).empty());
    CHECK(match_flexible(idx, parse_wildcard_pattern("a?z")).empty());

    // core longer than the text
    CHECK(match_exact(idx, parse_wildcard_pattern("abra????????abra")).empty());

    // a trailing run is dropped outright, so it never disqualifies a start
    CHECK(match_exact(idx, parse_wildcard_pattern("ra???????")) ==
          std::vector<std::uint64_t>{3, 10});
}
