#pragma once

#include <cstdint>
#include <vector>

#include "expsieve/arith.hpp"
#include "expsieve/expsums.hpp"

namespace expsieve {

// Integers with digits prescribed except at the free binary positions:
// members are a + sum_n d_n 2^(s_n) over all digit choices d in {0,1}^T.
struct DigitPattern {
    uint64_t S = 0;      // bit width; free positions live in [0, S)
    uint64_t a = 0;      // fixed part, zero at every free position
    SparseSequence free; // the free positions, strictly increasing

    DigitPattern() = default;
    DigitPattern(uint64_t S_in, uint64_t a_in, SparseSequence free_in);
    uint64_t T() const { return free.size(); }
};

inline constexpr uint64_t kEnumerationCapT = 24;

// All 2^T members in Gray-code order (successive members differ in one bit),
// truncated at limit entries. Exact mode: requires T <= 24 and S <= 63.
std::vector<uint64_t> enumerate_members(const DigitPattern& pat, uint64_t limit = UINT64_MAX);

struct DivisibilityCount {
    uint64_t p = 0;
    uint64_t count = 0;     // members divisible by p, an exact integer
    double main_term = 0;   // 2^T / p
    double deviation = 0;   // count - main term
    double q_envelope = 0;  // max_b |prod_n (1 + e_p(b 2^(s_n)))|, the proven ceiling on |deviation|
};

// Counts members divisible by an odd prime p through the additive-character
// identity: p*N = 2^T + sum_{b=1..p-1} e_p(ab) prod_n (1 + e_p(b 2^(s_n))).
// The float sum must land within 1e-4 of an integer or PrecisionError fires.
DivisibilityCount count_divisible(const DigitPattern& pat, uint64_t p);

// M_p: largest |sum_n e_p(b 2^(s_n))| over units b; digit positions feed the
// base-2 power sum machinery directly.
SumRecord digit_sum_max(const DigitPattern& pat, uint64_t p, uint64_t t_p);

// exp(C * M * ln(T/M + 1)), the envelope exp(O(M_p log(T/M_p + 1))); M = 0 gives 1.
double q_p_bound(double M, uint64_t T, double C);

struct OmegaProduct {
    bool exact = false;
    uint64_t omega = 0;        // distinct primes across all nonzero members (exact mode only)
    uint64_t primes_leq_x = 0; // primes p <= X dividing some member
};

// Exact mode factors every nonzero member (zero is skipped, it divides
// nothing's product) and unions the prime sets.
OmegaProduct omega_product_exact(const DigitPattern& pat, uint64_t X, const Factorizer& fac);

// Survey mode only counts primes p <= X with at least one nonzero member
// divisible (zero skipped, matching exact mode), a lower-bound proxy usable
// when 2^T is far beyond enumeration.
OmegaProduct omega_product_survey(const DigitPattern& pat, uint64_t X, int threads = 0);

} // namespace expsieve
