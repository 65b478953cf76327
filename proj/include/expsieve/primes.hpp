#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

#include "expsieve/arith.hpp"

namespace expsieve {

inline constexpr uint64_t kDefaultSieveCap = 1'000'000'000ull;

// Segmented Eratosthenes. Throws ResourceError above the cap.
std::vector<uint64_t> sieve_primes(uint64_t X, uint64_t cap = kDefaultSieveCap);

struct PrimeRecord {
    uint64_t p;       // prime, coprime to the base
    uint64_t t;       // multiplicative order of the base mod p
    uint64_t tau_pm1; // divisor count of p-1
};

// All primes p <= X with p not dividing lambda, together with the order of
// lambda mod p and tau(p-1). Records ascend by p.
struct OrderDatabase {
    uint64_t lambda = 0;
    uint64_t X = 0;
    std::vector<PrimeRecord> records;

    void save(const std::filesystem::path& path) const;
    static OrderDatabase load(const std::filesystem::path& path);
};

OrderDatabase build_order_db(uint64_t lambda, uint64_t X, int threads = 0,
                             uint64_t sieve_cap = kDefaultSieveCap);

// Primes whose order clears the floor: t_p >= ceil(Delta).
std::vector<PrimeRecord> filter_E_Delta(const OrderDatabase& db, double Delta);

// |{p <= X : t_p >= sqrt(X)}| * ln X / X. Hovers near 1 once X is respectable.
double density_check(const OrderDatabase& db);

// |{p <= X : t_p <= Z}|.
uint64_t count_small_orders(const OrderDatabase& db, double Z);

// Dyadic split of the order range [Delta, X]: class j holds primes with
// boundaries[j] <= t_p < boundaries[j+1], boundaries doubling from Delta and
// clamped at X, with X+1 as the final sentinel so the top class is inclusive.
struct DyadicPartition {
    double Delta = 0;
    std::vector<double> boundaries;             // size J+1
    std::vector<std::vector<uint32_t>> classes; // index into db.records, size J
};

DyadicPartition make_partition(const OrderDatabase& db, double Delta);

// Fiber sizes |{p <= X : t_p = r}| keyed by r. Each is at most X/r + 1.
std::map<uint64_t, uint32_t> order_fibers(const OrderDatabase& db);

} // namespace expsieve
