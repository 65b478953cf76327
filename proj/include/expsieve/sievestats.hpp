#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "expsieve/expsums.hpp"

namespace expsieve {

// Aggregate of per-prime squared maxima over a filtered prime set:
// value_V sums m_p^2, value_W divides each term by tau(p-1), and the trivial
// ceiling is |set| * T^2.
struct SieveStatistic {
    uint64_t lambda = 0;
    double value_V = 0;
    double value_W = 0;
    double trivial_bound = 0;
    std::vector<SumRecord> per_prime; // ascending p, aligned with the input records
};

SieveStatistic compute_V(std::span<const PrimeRecord> records, const SparseSequence& seq,
                         const WeightSequence& wt, uint64_t lambda, int threads = 0,
                         MaxStrategy strategy = MaxStrategy::kAuto,
                         uint64_t crossover = kDefaultCrossover);

// sum over k <= K, over residues c coprime to k, of |sum_n gamma_n e_k(c s_n)|^2.
// Computed from residue profiles, so cost grows with K^3 not K^2 T.
double large_sieve_lhs(const SparseSequence& seq, const WeightSequence& wt, uint64_t K);

struct ValidityFlag {
    std::string id;
    bool satisfied = false;
};

struct BoundReport {
    std::string id;
    std::map<std::string, double> params;
    double rhs = 0;
    std::vector<ValidityFlag> validity; // informational; rhs is computed regardless
};

// Closed-form ceiling for the order-filtered statistic driven by an
// admissible pair: (X + T*X^(-delta/(k^2+2)) + (S^(2-2alpha) T X^(-2eta))^(1/(3-2alpha))) * T * X * C,
// the o(1) slot rendered as the constant C. Validity flags:
//   abconditions       (beta+eta)/(1-alpha) <= 1/2 - delta
//   TSX                T^(1+1/(3-2alpha)) >= S * X^(2eta)
//   kassumption        X <= ((T/(S X^(2eta)))^(1/(3-2alpha)) * Delta)^k
//   kassumption_simple X <= (T^(-1/(3-2alpha)^2) * Delta)^k  (sufficient for the above)
//   garaev_range       S <= C * X^(15/14)
BoundReport filtered_sieve_bound(double X, double T, double S, double Delta,
                                 const AdmissiblePair& pair, double eta, double delta, int k,
                                 double C);

// Unfiltered ceiling (X^(1-rho) T^2 + X^(3/2) T^(3/2) + X^(3/4) T^(7/8) S^(1/4)) * C
// with nontriviality flags T > X^(1+eps) and S < T * X^(1+eps).
BoundReport all_primes_sieve_bound(double X, double T, double S, double rho, double C,
                                   double eps = 0.0);

} // namespace expsieve
