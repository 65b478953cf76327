#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "expsieve/errors.hpp"

namespace expsieve {

inline uint64_t mul_mod(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t((__uint128_t(a) * b) % m);
}

// Square-and-multiply; intermediates held in 128 bits so any modulus < 2^64 works.
uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m);

// Deterministic Miller-Rabin, exact for every n < 2^64 (12 fixed witnesses).
bool is_prime(uint64_t n);

struct FactorEntry {
    uint64_t prime;
    uint32_t exponent;
};

// Prime factorization of a positive 64-bit integer, entries sorted by prime.
class Factorization {
public:
    Factorization(uint64_t source, std::vector<FactorEntry> entries);

    uint64_t source() const { return source_; }
    const std::vector<FactorEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    // Multiplies the entries back out; used by tests as the roundtrip check.
    uint64_t reassemble() const;

private:
    uint64_t source_;
    std::vector<FactorEntry> entries_;
};

inline constexpr uint32_t kDefaultSpfLimit = 1u << 20;

// Factoring strategy splits at the smallest-prime-factor table limit:
// table walk below, trial division plus Brent's rho (deterministic parameter
// schedule) above. Size the table to the workload; order-database builds pass
// their own limit so p-1 always factors in-table.
class Factorizer {
public:
    explicit Factorizer(uint32_t spf_limit = kDefaultSpfLimit);

    Factorization factorize(uint64_t n) const;
    uint32_t spf_limit() const { return uint32_t(spf_.size() - 1); }

private:
    std::vector<uint32_t> spf_;
};

// Number of divisors from a factorization.
uint64_t tau(const Factorization& f);

// Multiplicative order of lambda modulo p (p prime, p does not divide lambda),
// computed by stripping prime factors of p-1. Never scans exponents.
uint64_t mult_order(uint64_t lambda, uint64_t p, const Factorization& f_pm1);

// Number of distinct primes dividing the product of the list, computed as the
// union of per-element prime sets. The product itself is never formed.
uint64_t omega_union(std::span<const uint64_t> values, const Factorizer& fac);

// Least h >= 2 generating the full multiplicative group mod p.
uint64_t smallest_primitive_root(uint64_t p, const Factorization& f_pm1);

} // namespace expsieve
