#include "expsieve/digits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "expsieve/generators.hpp"
#include "expsieve/parallel.hpp"
#include "expsieve/primes.hpp"

namespace expsieve {

DigitPattern::DigitPattern(uint64_t S_in, uint64_t a_in, SparseSequence free_in)
    : S(S_in), a(a_in), free(std::move(free_in)) {
    if (S == 0) throw ValidationError("DigitPattern: width must be positive");
    if (!free.s.empty() && free.s.back() >= S)
        throw ValidationError("DigitPattern: free positions must lie in [0, S)");
    if (S < 64 && a >= (1ull << S))
        throw ValidationError("DigitPattern: fixed part needs more than S bits");
    for (uint64_t pos : free.s)
        if (pos < 64 && (a >> pos) & 1)
            throw ValidationError("DigitPattern: fixed part has a set bit at a free position");
}

std::vector<uint64_t> enumerate_members(const DigitPattern& pat, uint64_t limit) {
    const uint64_t T = pat.T();
    if (T > kEnumerationCapT) {
        std::ostringstream ss;
        ss << "enumerate_members: T=" << T << " exceeds enumeration cap " << kEnumerationCapT;
        throw ResourceError(ss.str());
    }
    if (pat.S > 63)
        throw ResourceError("enumerate_members: members wider than 63 bits");
    uint64_t total = 1ull << T;
    uint64_t n = std::min(total, limit);
    std::vector<uint64_t> out;
    out.reserve(n);
    for (uint64_t k = 0; k < n; ++k) {
        uint64_t gray = k ^ (k >> 1);
        uint64_t v = pat.a;
        for (uint64_t bit = 0; bit < T; ++bit)
            if ((gray >> bit) & 1) v |= 1ull << pat.free.s[bit];
        out.push_back(v);
    }
    return out;
}

DivisibilityCount count_divisible(const DigitPattern& pat, uint64_t p) {
    if (p < 3 || p % 2 == 0 || !is_prime(p))
        throw ValidationError("count_divisible: p must be an odd prime");
    const uint64_t T = pat.T();

    std::vector<uint64_t> pw(T);
    for (uint64_t n = 0; n < T; ++n) pw[n] = pow_mod(2, pat.free.s[n], p);

    std::vector<cplx> tab(p);
    for (uint64_t j = 0; j < p; ++j) {
        double ang = 2.0 * std::numbers::pi * double(j) / double(p);
        tab[j] = cplx(std::cos(ang), std::sin(ang));
    }

    const uint64_t a_mod = pat.a % p;
    double total = std::ldexp(1.0, int(T)); // b = 0 term contributes the full 2^T
    double q_env = 0;
    for (uint64_t b = 1; b < p; ++b) {
        cplx prod(1, 0);
        for (uint64_t n = 0; n < T; ++n) prod *= (1.0 + tab[mul_mod(b, pw[n], p)]);
        q_env = std::max(q_env, std::abs(prod));
        total += (tab[mul_mod(b, a_mod, p)] * prod).real(); // imaginary parts cancel pairwise
    }
    double scaled = total / double(p);
    double rounded = std::round(scaled);
    if (std::abs(scaled - rounded) > 1e-4 || rounded < 0) {
        std::ostringstream ss;
        ss << "count_divisible: character sum " << scaled << " strays " << std::abs(scaled - rounded)
           << " from an integer (limit 1e-4)";
        throw PrecisionError(ss.str());
    }

    DivisibilityCount res;
    res.p = p;
    res.count = uint64_t(rounded);
    res.main_term = std::ldexp(1.0, int(T)) / double(p);
    res.deviation = double(res.count) - res.main_term;
    res.q_envelope = q_env;
    return res;
}

SumRecord digit_sum_max(const DigitPattern& pat, uint64_t p, uint64_t t_p) {
    return sigma_max(p, t_p, pat.free, make_unit_weights(pat.T()), 2);
}

double q_p_bound(double M, uint64_t T, double C) {
    if (M < 0) throw ValidationError("q_p_bound: M must be nonnegative");
    if (M == 0) return 1.0;
    return std::exp(C * M * std::log(double(T) / M + 1.0));
}

namespace {

// The zero member (present exactly when the fixed part is zero) divides into
// nothing's product, so parity has to be decided over the nonzero members.
bool some_nonzero_member_even(const DigitPattern& pat) {
    if (pat.a & 1) return false; // every member is odd
    if (pat.a != 0) return true; // the fixed part itself is a nonzero even member
    for (uint64_t pos : pat.free.s)
        if (pos > 0) return true; // that bit alone makes an even nonzero member
    return false; // members are {0} or {0, 1}
}

} // namespace

OmegaProduct omega_product_exact(const DigitPattern& pat, uint64_t X, const Factorizer& fac) {
    std::vector<uint64_t> members = enumerate_members(pat);
    std::set<uint64_t> primes;
    for (uint64_t v : members) {
        if (v == 0) continue; // zero contributes nothing to the product
        Factorization f = fac.factorize(v); // named: entries() is a view into it
        for (const auto& e : f.entries()) primes.insert(e.prime);
    }
    OmegaProduct res;
    res.exact = true;
    res.omega = primes.size();
    for (uint64_t q : primes)
        if (q <= X) ++res.primes_leq_x;
    return res;
}

OmegaProduct omega_product_survey(const DigitPattern& pat, uint64_t X, int threads) {
    std::vector<uint64_t> primes = sieve_primes(X);
    std::vector<uint8_t> divides(primes.size(), 0);
    // membership of the zero member inflates every divisibility count by one
    const uint64_t zero_hits = pat.a == 0 ? 1 : 0;
    parallel_for_ordered(primes.size(), threads, [&](size_t i) {
        uint64_t p = primes[i];
        if (p == 2) {
            divides[i] = some_nonzero_member_even(pat) ? 1 : 0;
        } else {
            divides[i] = count_divisible(pat, p).count > zero_hits ? 1 : 0;
        }
    });
    OmegaProduct res;
    res.exact = false;
    for (uint8_t d : divides) res.primes_leq_x += d;
    return res;
}

} // namespace expsieve
