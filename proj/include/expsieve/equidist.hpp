#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expsieve/expsums.hpp"
#include "expsieve/primes.hpp"

namespace expsieve {

// Points in [0,1) kept as exact rationals num/den over one common denominator,
// so interval counts and discrepancy compare as integers, not rounded doubles.
struct UnitPointSet {
    std::vector<uint64_t> num;
    uint64_t den = 1;

    UnitPointSet() = default;
    UnitPointSet(std::vector<uint64_t> nums, uint64_t den_in);

    // quantizes to k/2^53; doubles from a canonical [0,1) generator are exact
    static UnitPointSet from_doubles(std::span<const double> xs);

    size_t size() const { return num.size(); }
    double point(size_t i) const { return double(num[i]) / double(den); }
};

// {lambda^(s_n mod t_p) mod p / p : n = 1..T}, duplicates kept.
UnitPointSet sequence_A(uint64_t p, uint64_t lambda, uint64_t t_p, const SparseSequence& seq);

// Two-sided discrepancy sup over closed [a,b] of |count/T - (b-a)|. The sup is
// reached (or approached, on the open deficit side) at interval endpoints
// taken from the points themselves, plus 0/1 sentinels; a sorted sweep over
// those candidates is exact in integer arithmetic. D is in [1/T, 1].
struct DiscrepancyResult {
    double D = 0;
    double witness_a = 0; // endpoints of the extremal interval (open limits on
    double witness_b = 0; // the deficit side)
    bool excess_side = true;
    unsigned __int128 d_num = 0; // D = d_num / d_den exactly
    unsigned __int128 d_den = 1;
};

DiscrepancyResult discrepancy_exact(const UnitPointSet& pts);

// Classical explicit bound D <= 1/(H+1) + 3 * sum_{h=1..H} |S_h| / (h*T) with
// S_h = sum_n e(h x_n). Phases reduce mod den exactly before hitting libm.
double erdos_turan_bound(const UnitPointSet& pts, uint64_t H);

struct EquidistRow {
    uint64_t p = 0;
    DiscrepancyResult disc;
    double et_bound = 0;
    uint64_t H = 0;
};

struct EquidistSurvey {
    std::vector<EquidistRow> rows;   // ascending p over the database
    double fraction_poly = 0;        // share with D <= T^(-delta)
    double fraction_log = 0;         // share with D <= (ln T)^(-delta)
    double delta = 0;
    uint64_t H = 0;
};

// Discrepancy of the fractional-power sequence for every prime in the
// database, with empirical smallness fractions against both threshold shapes
// and the per-prime delta_hat = -ln D / ln ln T available from the rows.
EquidistSurvey discrepancy_survey(const OrderDatabase& db, const SparseSequence& seq, double delta,
                                  uint64_t H, int threads = 0);

} // namespace expsieve
