#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "vdm/errors.hpp"
#include "vdm/partition.hpp"

#include <algorithm>
#include <map>
#include <set>

using namespace vdm;

namespace {

// Brute-force Kreweras oracle: the unique maximal partition K of the barred
// points 1..n such that placing rho on odd circle positions and K on even
// ones stays noncrossing on the interleaved 2n-cycle.
bool interleaved_noncrossing(const SetPartition& rho, const SetPartition& bar) {
    const int n = rho.n();
    std::vector<std::vector<int>> blocks;
    for (const auto& b : rho.blocks()) {
        std::vector<int> nb;
        for (int e : b) nb.push_back(2 * e - 1);
        blocks.push_back(nb);
    }
    for (const auto& b : bar.blocks()) {
        std::vector<int> nb;
        for (int e : b) nb.push_back(2 * e);
        blocks.push_back(nb);
    }
    return is_noncrossing(SetPartition(2 * n, blocks));
}

SetPartition kreweras_brute_force(const SetPartition& rho) {
    std::vector<SetPartition> compatible;
    for (const auto& bar : enumerate_partitions(rho.n())) {
        if (interleaved_noncrossing(rho, bar)) compatible.push_back(bar);
    }
    // maximal in the refinement order; verify uniqueness
    SetPartition best = compatible.front();
    for (const auto& cand : compatible) {
        if (refinement_leq(best, cand)) best = cand;
    }
    for (const auto& cand : compatible) {
        REQUIRE(refinement_leq(cand, best));
    }
    return best;
}

} // namespace

TEST_CASE("enumeration counts match Bell numbers") {
    CHECK(enumerate_partitions(1).size() == 1);
    CHECK(enumerate_partitions(1).front() == SetPartition::one_block(1));
    CHECK(enumerate_partitions(4).size() == 15);
    CHECK(enumerate_partitions(7).size() == 877);
    for (int n = 1; n <= 8; ++n) {
        CHECK(static_cast<std::int64_t>(enumerate_partitions(n).size()) == bell_number(n));
    }
    CHECK_THROWS_AS(enumerate_partitions(0), size_error);
    CHECK_THROWS_AS(enumerate_partitions(13), size_error);
}

TEST_CASE("enumeration is deterministic and canonical") {
    auto parts = enumerate_partitions(5);
    std::set<std::string> texts;
    for (const auto& p : parts) texts.insert(p.to_text());
    CHECK(texts.size() == parts.size());
    // restricted-growth order starts at 1_n and ends at 0_n
    CHECK(parts.front() == SetPartition::one_block(5));
    CHECK(parts.back() == SetPartition::singletons(5));
    // stable across calls
    auto again = enumerate_partitions(5);
    CHECK(std::equal(parts.begin(), parts.end(), again.begin()));
}

TEST_CASE("noncrossing test") {
    CHECK_FALSE(is_noncrossing(SetPartition::from_text("1,3/2,4")));
    CHECK(is_noncrossing(SetPartition::from_text("1,2/3,4")));

    int crossing_count = 0;
    for (const auto& p : enumerate_partitions(4)) {
        if (!is_noncrossing(p)) {
            ++crossing_count;
            CHECK(p == SetPartition::from_text("1,3/2,4"));
        }
    }
    CHECK(crossing_count == 1);

    for (int n = 1; n <= 8; ++n) {
        std::int64_t nc = 0;
        for (const auto& p : enumerate_partitions(n)) {
            if (is_noncrossing(p)) ++nc;
        }
        CHECK(nc == catalan_number(n));
    }
}

TEST_CASE("Kreweras complement extremes and size identity") {
    for (int n = 1; n <= 6; ++n) {
        CHECK(kreweras_complement(SetPartition::singletons(n)) == SetPartition::one_block(n));
        CHECK(kreweras_complement(SetPartition::one_block(n)) == SetPartition::singletons(n));
    }
    CHECK_THROWS_AS(kreweras_complement(SetPartition::from_text("1,3/2,4")), domain_error);
}

TEST_CASE("Kreweras complement matches the brute-force oracle for n <= 6") {
    SetPartition example = SetPartition::from_text("1,2/3,4");
    SetPartition k = kreweras_complement(example);
    CHECK(k == kreweras_brute_force(example));
    CHECK(example.block_count() + k.block_count() == 5);

    for (int n = 2; n <= 6; ++n) {
        for (const auto& p : enumerate_partitions(n)) {
            if (!is_noncrossing(p)) continue;
            SetPartition fast = kreweras_complement(p);
            CHECK(fast == kreweras_brute_force(p));
            CHECK(p.block_count() + fast.block_count() == n + 1);
        }
    }
}

TEST_CASE("Kreweras complement is an order-reversing bijection of NC(n)") {
    for (int n = 2; n <= 6; ++n) {
        std::set<std::string> images;
        std::vector<SetPartition> nc;
        for (const auto& p : enumerate_partitions(n)) {
            if (is_noncrossing(p)) nc.push_back(p);
        }
        for (const auto& p : nc) {
            SetPartition k = kreweras_complement(p);
            CHECK(is_noncrossing(k));
            images.insert(k.to_text());
        }
        CHECK(static_cast<std::int64_t>(images.size()) == catalan_number(n));
        for (const auto& a : nc) {
            for (const auto& b : nc) {
                if (refinement_leq(a, b)) {
                    CHECK(refinement_leq(kreweras_complement(b), kreweras_complement(a)));
                }
            }
        }
    }
}

TEST_CASE("refinement order") {
    auto any = SetPartition::from_text("1,3/2/4");
    CHECK(refinement_leq(SetPartition::singletons(4), any));
    CHECK(refinement_leq(any, SetPartition::one_block(4)));
    CHECK(refinement_leq(SetPartition::from_text("1,3/2/4"), SetPartition::from_text("1,3/2,4")));
    CHECK_FALSE(refinement_leq(SetPartition::from_text("1,3/2,4"), SetPartition::from_text("1,3/2/4")));
    CHECK_THROWS_AS(refinement_leq(SetPartition::singletons(3), SetPartition::singletons(4)), domain_error);
}

TEST_CASE("noncrossing counts by block signature") {
    BlockSignature two_pairs;
    two_pairs.n = 4;
    two_pairs.multiplicities = {0, 2, 0, 0};
    CHECK(count_noncrossing_by_signature(two_pairs) == 2);

    BlockSignature one_four;
    one_four.n = 4;
    one_four.multiplicities = {0, 0, 0, 1};
    CHECK(count_noncrossing_by_signature(one_four) == 1);

    BlockSignature three_two;
    three_two.n = 5;
    three_two.multiplicities = {0, 1, 1, 0, 0};
    CHECK(count_noncrossing_by_signature(three_two) == 5);

    // crosscheck against enumeration, and the sum over signatures
    for (int n = 1; n <= 8; ++n) {
        std::map<std::vector<int>, std::int64_t> by_sig;
        for (const auto& p : enumerate_partitions(n)) {
            if (is_noncrossing(p)) ++by_sig[BlockSignature::of(p).multiplicities];
        }
        std::int64_t total = 0;
        for (const auto& [mult, count] : by_sig) {
            BlockSignature sig;
            sig.n = n;
            sig.multiplicities = mult;
            CHECK(count_noncrossing_by_signature(sig) == count);
            total += count;
        }
        CHECK(total == catalan_number(n));
    }

    BlockSignature bad;
    bad.n = 4;
    bad.multiplicities = {1, 2, 0, 0};
    CHECK_THROWS_AS(count_noncrossing_by_signature(bad), domain_error);
}

TEST_CASE("partition from index tuples") {
    CHECK(partition_of_index_tuple({7, 7, 7}) == SetPartition::one_block(3));
    CHECK(partition_of_index_tuple({1, 2, 1, 2}) == SetPartition::from_text("1,3/2,4"));
    CHECK(partition_of_index_tuple({3, 1, 4}) == SetPartition::singletons(3));
    // invariance under relabeling of values
    CHECK(partition_of_index_tuple({9, 5, 9, 5}) == partition_of_index_tuple({1, 2, 1, 2}));
}

TEST_CASE("Bell and Catalan numbers") {
    CHECK(bell_number(0) == 1);
    CHECK(bell_number(6) == 203);
    CHECK(bell_number(7) == 877);
    CHECK(bell_number(12) == 4213597);
    CHECK(catalan_number(5) == 42);
    CHECK(catalan_number(6) == 132);
    CHECK(catalan_number(7) == 429);
    CHECK_THROWS_AS(bell_number(26), size_error);
    CHECK_THROWS_AS(catalan_number(-1), size_error);
}

TEST_CASE("text format round trip and canonical form") {
    auto p = SetPartition(4, {{4, 2}, {3, 1}});
    CHECK(p.to_text() == "1,3/2,4");
    CHECK(SetPartition::from_text("1,3/2,4") == p);
    CHECK_THROWS_AS(SetPartition::from_text("1,3/2,3"), domain_error);
    CHECK_THROWS_AS(SetPartition::from_text("1,4/2"), domain_error);  // 3 missing
    CHECK(SetPartition::from_text("1,3/2").n() == 3);  // n is the max element
}

TEST_CASE("invalid partitions are rejected") {
    CHECK_THROWS_AS(SetPartition(3, {{1, 2}}), domain_error);
    CHECK_THROWS_AS(SetPartition(3, {{1, 2}, {2, 3}}), domain_error);
    CHECK_THROWS_AS(SetPartition(3, {{1, 2}, {3, 4}}), domain_error);
    CHECK_THROWS_AS(SetPartition(0, {}), domain_error);
}
