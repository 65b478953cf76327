#include <doctest.h>

#include <cmath>
#include <set>

#include "expsieve/generators.hpp"

using namespace expsieve;

TEST_CASE("arithmetic sequences") {
    SparseSequence s = make_arithmetic_sequence(5, 3, 4, 100);
    CHECK(s.s == std::vector<uint64_t>{3, 7, 11, 15, 19});
    CHECK(s.bound == 100);
    CHECK_THROWS_AS(make_arithmetic_sequence(5, 3, 0, 100), ValidationError);
    CHECK_THROWS_AS(make_arithmetic_sequence(5, 0, 30, 100), ValidationError); // 120 > 100
    CHECK_THROWS_AS(make_arithmetic_sequence(0, 0, 1, 10), ValidationError);
}

TEST_CASE("geometric gap sequences keep strictness and the bound") {
    for (uint64_t T : {2ull, 10ull, 64ull}) {
        for (double ratio : {1.1, 2.0, 4.0}) {
            uint64_t S = 4 * T * T;
            SparseSequence s = make_geometric_gap_sequence(T, ratio, S);
            REQUIRE(s.size() == T);
            for (size_t i = 1; i < s.s.size(); ++i) CHECK(s.s[i] > s.s[i - 1]);
            CHECK(s.s.back() <= S);
        }
    }
    // gaps really grow on average: the last gap beats the first for a steep ratio
    SparseSequence g = make_geometric_gap_sequence(10, 3.0, 100000);
    CHECK(g.s[9] - g.s[8] > g.s[1] - g.s[0]);
    CHECK_THROWS_AS(make_geometric_gap_sequence(10, 2.0, 5), ValidationError); // S < T-1
    CHECK_THROWS_AS(make_geometric_gap_sequence(10, 0.5, 100), ValidationError);
}

TEST_CASE("random subsets are uniform draws without replacement") {
    SparseSequence s = make_random_subset_sequence(30, 1000, 42);
    REQUIRE(s.size() == 30);
    CHECK(s.bound == 1000);
    std::set<uint64_t> uniq(s.s.begin(), s.s.end());
    CHECK(uniq.size() == 30);
    for (size_t i = 1; i < s.s.size(); ++i) CHECK(s.s[i] > s.s[i - 1]);
    CHECK(s.s.back() <= 1000);

    // same seed, same draw; new seed, essentially surely a new draw
    SparseSequence again = make_random_subset_sequence(30, 1000, 42);
    CHECK(again.s == s.s);
    SparseSequence other = make_random_subset_sequence(30, 1000, 43);
    CHECK(other.s != s.s);

    // drawing everything yields 0..S
    SparseSequence full = make_random_subset_sequence(11, 10, 7);
    for (uint64_t i = 0; i <= 10; ++i) CHECK(full.s[i] == i);

    CHECK_THROWS_AS(make_random_subset_sequence(12, 10, 7), ValidationError); // T > S+1
    CHECK_THROWS_AS(make_random_subset_sequence(0, 10, 7), ValidationError);
}

TEST_CASE("weight generators") {
    WeightSequence ones = make_unit_weights(5);
    REQUIRE(ones.size() == 5);
    for (const auto& g : ones.gamma) CHECK(g == cplx(1, 0));

    WeightSequence signs = make_random_sign_weights(64, 9);
    bool saw_plus = false, saw_minus = false;
    for (const auto& g : signs.gamma) {
        CHECK(g.imag() == 0);
        CHECK(std::abs(std::abs(g.real()) - 1.0) < 1e-15);
        (g.real() > 0 ? saw_plus : saw_minus) = true;
    }
    CHECK(saw_plus);
    CHECK(saw_minus);
    CHECK(make_random_sign_weights(64, 9).gamma == signs.gamma);

    WeightSequence ph = make_random_phase_weights(64, 10);
    for (const auto& g : ph.gamma) CHECK(std::abs(g) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(make_random_phase_weights(64, 10).gamma == ph.gamma);
    CHECK(make_random_phase_weights(64, 11).gamma != ph.gamma);
}
