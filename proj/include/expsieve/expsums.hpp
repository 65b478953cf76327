#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "expsieve/arith.hpp"
#include "expsieve/primes.hpp"

namespace expsieve {

using cplx = std::complex<double>;

// Strictly increasing exponent sequence s_1 < ... < s_T <= bound.
struct SparseSequence {
    std::vector<uint64_t> s;
    uint64_t bound = 0;

    SparseSequence() = default;
    SparseSequence(std::vector<uint64_t> s_in, uint64_t bound_in);
    uint64_t size() const { return s.size(); }
};

// Complex weights with |gamma_n| <= 1 (a hair of slack for rounding).
struct WeightSequence {
    std::vector<cplx> gamma;

    WeightSequence() = default;
    explicit WeightSequence(std::vector<cplx> g);
    uint64_t size() const { return gamma.size(); }
};

// Weight mass per residue class of the exponents: w(x) = sum over s_n = x mod r.
struct ResidueProfile {
    uint64_t modulus = 0;
    std::vector<cplx> w;
};

ResidueProfile residue_profile(const SparseSequence& seq, const WeightSequence& wt, uint64_t r);

// Number of pairs (n1, n2) with s_{n1} = s_{n2} mod r; equals the sum of
// squared class sizes.
uint64_t pair_count_V(const SparseSequence& seq, uint64_t r);

// sigma_p(a) = sum_n gamma_n * e_p(a * lambda^(s_n mod t_p)), accumulated in
// index order. a = 0 short-circuits to sum(gamma). Exponents are always
// reduced mod t_p before powering.
cplx sigma_eval(uint64_t p, uint64_t t_p, const SparseSequence& seq, const WeightSequence& wt,
                uint64_t lambda, uint64_t a);

enum class MaxStrategy { kAuto, kDirect, kTransform };

inline constexpr uint64_t kDefaultCrossover = 4096; // direct below, chirp transform at or above
inline constexpr uint64_t kTransformCap = 1ull << 24;

// Determinism rule for argmax ties: |sigma(a)| ties are exact facts here
// (conjugate pairs for real weights, Gauss sums), but the two evaluation
// strategies land on them with different rounding noise. We therefore pick
// the smallest a whose squared magnitude is within relative 2e-9 of the
// maximum; both strategies agree as long as they agree to ~1e-12, and the
// reported value is |sigma| at that a.
struct SumRecord {
    uint64_t p = 0;
    uint64_t a = 0;  // argmax in [1, p-1]
    double value = 0;
};

SumRecord sigma_max(uint64_t p, uint64_t t_p, const SparseSequence& seq, const WeightSequence& wt,
                    uint64_t lambda, MaxStrategy strategy = MaxStrategy::kAuto,
                    uint64_t crossover = kDefaultCrossover);

// All of sigma_p(a) for a = 0..p-1 at once, by whichever strategy is asked.
std::vector<cplx> sigma_spectrum(uint64_t p, uint64_t t_p, const SparseSequence& seq,
                                 const WeightSequence& wt, uint64_t lambda,
                                 MaxStrategy strategy = MaxStrategy::kAuto,
                                 uint64_t crossover = kDefaultCrossover);

// max over a in [1, p-1] of |sum_{x=1..t} e_p(a g^x)| for g of verified
// multiplicative order t mod p.
SumRecord subgroup_sum_max(uint64_t p, uint64_t g, uint64_t t, const Factorizer& fac,
                           MaxStrategy strategy = MaxStrategy::kAuto,
                           uint64_t crossover = kDefaultCrossover);

// An (alpha, beta) exponent pair asserting the subgroup bound t^alpha * p^(beta+o(1)).
struct AdmissiblePair {
    double alpha = 0;
    double beta = 0;
    std::string label;

    AdmissiblePair(double a, double b, std::string l);

    static AdmissiblePair korobov();                   // (0, 1/2)
    static AdmissiblePair heath_brown_konyagin_a();    // (5/8, 1/8)
    static AdmissiblePair heath_brown_konyagin_b();    // (3/8, 1/4)
    static AdmissiblePair shkredov();                  // (1/2, 1/6)
    static AdmissiblePair bgk(double theta, double zeta); // (1-theta, zeta*theta)
    static AdmissiblePair by_label(const std::string& label); // catalog lookup (bgk excluded)
};

struct ScanRow {
    uint64_t p = 0;
    uint64_t t = 0;
    uint64_t a = 0;     // argmax of the subgroup sum
    double m = 0;       // its magnitude
    double bound = 0;   // C * t^alpha * p^beta
    double ratio = 0;   // m / (t^alpha * p^beta)
    bool flagged = false;
};

// Subgroup-sum maxima for every prime in the database, scored against the
// pair's t^alpha * p^beta envelope; rows with ratio > C get flagged.
std::vector<ScanRow> admissible_scan(const OrderDatabase& db, const AdmissiblePair& pair, double C,
                                     int threads = 0, MaxStrategy strategy = MaxStrategy::kAuto,
                                     uint64_t crossover = kDefaultCrossover);

struct ExceptionalRow {
    uint64_t ell = 0;
    uint64_t g = 0;     // order-t element used, h^((ell-1)/t) for h the least primitive root
    uint64_t a = 0;
    double value = 0;
    double rhs = 0;
    bool exceptional = false;
};

struct ExceptionalScan {
    uint64_t t = 0;
    int k = 0;
    double U = 0;
    double C = 0;
    uint64_t ell_max = 0;
    std::vector<ExceptionalRow> rows; // primes ell = 1 mod t, ascending
    uint64_t total = 0;
    uint64_t exceptional = 0;
    double budget = 0; // U / ln(U)
};

// Order-t subgroup sums across primes ell = 1 mod t up to ell_max, compared
// with rhs = C * t * ell^(1/(2k^2)) * (t^(-1/k) + U^(-1/k^2)). Exceedances are
// counted, never asserted away.
ExceptionalScan exceptional_count(uint64_t t, int k, double U, double C, uint64_t ell_max,
                                  int threads = 0);

} // namespace expsieve
