#include "expsieve/sievestats.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "expsieve/parallel.hpp"

namespace expsieve {

SieveStatistic compute_V(std::span<const PrimeRecord> records, const SparseSequence& seq,
                         const WeightSequence& wt, uint64_t lambda, int threads,
                         MaxStrategy strategy, uint64_t crossover) {
    SieveStatistic stat;
    stat.lambda = lambda;
    stat.per_prime.resize(records.size());
    parallel_for_ordered(records.size(), threads, [&](size_t i) {
        const PrimeRecord& r = records[i];
        stat.per_prime[i] = sigma_max(r.p, r.t, seq, wt, lambda, strategy, crossover);
    });
    // fold in ascending-p order, independent of thread count
    for (size_t i = 0; i < records.size(); ++i) {
        double sq = stat.per_prime[i].value * stat.per_prime[i].value;
        stat.value_V += sq;
        stat.value_W += sq / double(records[i].tau_pm1);
    }
    double T = double(seq.size());
    stat.trivial_bound = double(records.size()) * T * T;
    return stat;
}

double large_sieve_lhs(const SparseSequence& seq, const WeightSequence& wt, uint64_t K) {
    if (K == 0) throw ValidationError("large_sieve_lhs: K must be positive");
    if (seq.size() != wt.size()) throw ValidationError("large_sieve_lhs: length mismatch");
    double total = 0;
    for (uint64_t k = 1; k <= K; ++k) {
        ResidueProfile prof = residue_profile(seq, wt, k);
        for (uint64_t c = 1; c <= k; ++c) {
            if (std::gcd(c, k) != 1) continue;
            cplx acc(0, 0);
            for (uint64_t x = 0; x < k; ++x) {
                if (prof.w[x] == cplx(0, 0)) continue;
                double ang = 2.0 * std::numbers::pi * double(mul_mod(c, x, k)) / double(k);
                acc += prof.w[x] * cplx(std::cos(ang), std::sin(ang));
            }
            total += std::norm(acc);
        }
    }
    return total;
}

BoundReport filtered_sieve_bound(double X, double T, double S, double Delta,
                                 const AdmissiblePair& pair, double eta, double delta, int k,
                                 double C) {
    if (!(X > 1 && T > 0 && S > 0 && Delta >= 1 && C > 0))
        throw ValidationError("filtered_sieve_bound: X>1, T>0, S>0, Delta>=1, C>0 required");
    if (!(eta > 0 && delta > 0)) throw ValidationError("filtered_sieve_bound: eta, delta must be positive");
    if (k < 1) throw ValidationError("filtered_sieve_bound: k must be >= 1");

    const double alpha = pair.alpha, beta = pair.beta;
    const double q = 3.0 - 2.0 * alpha;

    BoundReport rep;
    rep.id = "filtered-sieve-bound";
    rep.params = {{"X", X},     {"T", T},     {"S", S},   {"Delta", Delta}, {"alpha", alpha},
                  {"beta", beta}, {"eta", eta}, {"delta", delta}, {"k", double(k)}, {"C", C}};

    double middle = T * std::pow(X, -delta / (double(k) * k + 2.0));
    double third = std::pow(std::pow(S, 2.0 - 2.0 * alpha) * T * std::pow(X, -2.0 * eta), 1.0 / q);
    rep.rhs = (X + middle + third) * T * X * C;

    double xi = std::pow(T / (S * std::pow(X, 2.0 * eta)), 1.0 / q);
    rep.validity = {
        {"abconditions", (beta + eta) / (1.0 - alpha) <= 0.5 - delta},
        {"TSX", std::pow(T, 1.0 + 1.0 / q) >= S * std::pow(X, 2.0 * eta)},
        {"kassumption", X <= std::pow(xi * Delta, double(k))},
        {"kassumption_simple", X <= std::pow(std::pow(T, -1.0 / (q * q)) * Delta, double(k))},
        {"garaev_range", S <= C * std::pow(X, 15.0 / 14.0)},
    };
    return rep;
}

BoundReport all_primes_sieve_bound(double X, double T, double S, double rho, double C, double eps) {
    if (!(X > 1 && T > 0 && S > 0 && C > 0))
        throw ValidationError("all_primes_sieve_bound: X>1, T>0, S>0, C>0 required");
    if (!(rho > 0 && rho < 0.5))
        throw ValidationError("all_primes_sieve_bound: rho must lie in (0, 1/2)");

    BoundReport rep;
    rep.id = "all-primes-sieve-bound";
    rep.params = {{"X", X}, {"T", T}, {"S", S}, {"rho", rho}, {"C", C}, {"eps", eps}};
    rep.rhs = (std::pow(X, 1.0 - rho) * T * T + std::pow(X, 1.5) * std::pow(T, 1.5) +
               std::pow(X, 0.75) * std::pow(T, 7.0 / 8.0) * std::pow(S, 0.25)) *
              C;
    rep.validity = {
        {"T_above_X", T > std::pow(X, 1.0 + eps)},
        {"S_below_TX", S < T * std::pow(X, 1.0 + eps)},
    };
    return rep;
}

} // namespace expsieve
