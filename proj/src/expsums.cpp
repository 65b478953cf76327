#include "expsieve/expsums.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "expsieve/fft.hpp"
#include "expsieve/parallel.hpp"

namespace expsieve {

SparseSequence::SparseSequence(std::vector<uint64_t> s_in, uint64_t bound_in)
    : s(std::move(s_in)), bound(bound_in) {
    for (size_t i = 1; i < s.size(); ++i)
        if (s[i] <= s[i - 1]) throw ValidationError("SparseSequence: exponents must strictly increase");
    if (!s.empty() && s.back() > bound)
        throw ValidationError("SparseSequence: exponents exceed the declared bound");
}

WeightSequence::WeightSequence(std::vector<cplx> g) : gamma(std::move(g)) {
    for (const cplx& v : gamma)
        if (std::abs(v) > 1.0 + 1e-12) throw ValidationError("WeightSequence: |gamma| must be <= 1");
}

ResidueProfile residue_profile(const SparseSequence& seq, const WeightSequence& wt, uint64_t r) {
    if (r == 0) throw ValidationError("residue_profile: modulus must be positive");
    if (r > (1ull << 26)) {
        std::ostringstream ss;
        ss << "residue_profile: modulus " << r << " exceeds allocation cap " << (1ull << 26);
        throw ResourceError(ss.str());
    }
    if (seq.size() != wt.size()) throw ValidationError("residue_profile: length mismatch");
    ResidueProfile prof;
    prof.modulus = r;
    prof.w.assign(r, cplx(0, 0));
    for (size_t n = 0; n < seq.s.size(); ++n) prof.w[seq.s[n] % r] += wt.gamma[n];
    return prof;
}

uint64_t pair_count_V(const SparseSequence& seq, uint64_t r) {
    if (r == 0) throw ValidationError("pair_count_V: modulus must be positive");
    std::vector<uint64_t> res;
    res.reserve(seq.s.size());
    for (uint64_t v : seq.s) res.push_back(v % r);
    std::sort(res.begin(), res.end());
    uint64_t V = 0, run = 0;
    for (size_t i = 0; i < res.size(); ++i) {
        ++run;
        if (i + 1 == res.size() || res[i + 1] != res[i]) {
            V += run * run;
            run = 0;
        }
    }
    return V;
}

namespace {

void check_sigma_args(uint64_t p, uint64_t t_p, const SparseSequence& seq,
                      const WeightSequence& wt, uint64_t lambda) {
    if (p < 2) throw ValidationError("sigma: p must be a prime >= 2");
    if (lambda % p == 0) throw ValidationError("sigma: p divides the base");
    if (t_p == 0 || t_p >= p) throw ValidationError("sigma: order out of range");
    if (pow_mod(lambda, t_p, p) != 1) throw ValidationError("sigma: t_p is not an order of the base");
    if (seq.size() != wt.size()) throw ValidationError("sigma: sequence/weight length mismatch");
}

// weight mass landing on each residue lambda^(s_n mod t_p) mod p, dense over [0, p)
std::vector<cplx> power_profile(uint64_t p, uint64_t t_p, const SparseSequence& seq,
                                const WeightSequence& wt, uint64_t lambda) {
    std::vector<cplx> prof(p, cplx(0, 0));
    if (t_p <= 4 * seq.size() + 4) {
        std::vector<uint64_t> pw(t_p);
        pw[0] = 1;
        for (uint64_t j = 1; j < t_p; ++j) pw[j] = mul_mod(pw[j - 1], lambda % p, p);
        for (size_t n = 0; n < seq.s.size(); ++n) prof[pw[seq.s[n] % t_p]] += wt.gamma[n];
    } else {
        for (size_t n = 0; n < seq.s.size(); ++n)
            prof[pow_mod(lambda, seq.s[n] % t_p, p)] += wt.gamma[n];
    }
    return prof;
}

std::vector<cplx> unit_circle_table(uint64_t p) {
    std::vector<cplx> tab(p);
    for (uint64_t j = 0; j < p; ++j) {
        double ang = 2.0 * std::numbers::pi * double(j) / double(p);
        tab[j] = cplx(std::cos(ang), std::sin(ang));
    }
    return tab;
}

// spectrum[a] = sum_u prof[u] * e_p(a*u), all a, straight from the definition.
// Index stepping keeps a*u mod p exact without any multiplies in the loop.
std::vector<cplx> spectrum_direct(uint64_t p, const std::vector<cplx>& prof) {
    std::vector<cplx> tab = unit_circle_table(p);
    std::vector<cplx> spec(p, cplx(0, 0));
    for (uint64_t u = 0; u < p; ++u) {
        cplx c = prof[u];
        if (c == cplx(0, 0)) continue;
        uint64_t idx = 0;
        for (uint64_t a = 0; a < p; ++a) {
            spec[a] += c * tab[idx];
            idx += u;
            if (idx >= p) idx -= p;
        }
    }
    return spec;
}

std::vector<cplx> spectrum_of_profile(uint64_t p, const std::vector<cplx>& prof,
                                      MaxStrategy strategy, uint64_t crossover) {
    bool transform = false;
    switch (strategy) {
        case MaxStrategy::kDirect: transform = false; break;
        case MaxStrategy::kTransform: transform = true; break;
        case MaxStrategy::kAuto: transform = p >= crossover; break;
    }
    if (transform) {
        if (p > kTransformCap) {
            std::ostringstream ss;
            ss << "sigma: transform length " << p << " exceeds cap " << kTransformCap;
            throw ResourceError(ss.str());
        }
        return czt_eplus(prof);
    }
    return spectrum_direct(p, prof);
}

SumRecord max_of_spectrum(uint64_t p, const std::vector<cplx>& spec) {
    double best2 = 0;
    for (uint64_t a = 1; a < p; ++a) best2 = std::max(best2, std::norm(spec[a]));
    const double gate = best2 * (1.0 - 2e-9);
    for (uint64_t a = 1; a < p; ++a) {
        if (std::norm(spec[a]) >= gate)
            return SumRecord{p, a, std::abs(spec[a])};
    }
    return SumRecord{p, 1, 0.0}; // p = 2 with empty weights lands here
}

} // namespace

cplx sigma_eval(uint64_t p, uint64_t t_p, const SparseSequence& seq, const WeightSequence& wt,
                uint64_t lambda, uint64_t a) {
    check_sigma_args(p, t_p, seq, wt, lambda);
    if (a >= p) throw ValidationError("sigma_eval: a must lie in [0, p-1]");
    if (a == 0) {
        cplx acc(0, 0);
        for (const cplx& g : wt.gamma) acc += g;
        return acc;
    }
    cplx acc(0, 0);
    for (size_t n = 0; n < seq.s.size(); ++n) {
        uint64_t u = pow_mod(lambda, seq.s[n] % t_p, p);
        double ang = 2.0 * std::numbers::pi * double(mul_mod(a, u, p)) / double(p);
        acc += wt.gamma[n] * cplx(std::cos(ang), std::sin(ang));
    }
    return acc;
}

std::vector<cplx> sigma_spectrum(uint64_t p, uint64_t t_p, const SparseSequence& seq,
                                 const WeightSequence& wt, uint64_t lambda,
                                 MaxStrategy strategy, uint64_t crossover) {
    check_sigma_args(p, t_p, seq, wt, lambda);
    return spectrum_of_profile(p, power_profile(p, t_p, seq, wt, lambda), strategy, crossover);
}

SumRecord sigma_max(uint64_t p, uint64_t t_p, const SparseSequence& seq, const WeightSequence& wt,
                    uint64_t lambda, MaxStrategy strategy, uint64_t crossover) {
    return max_of_spectrum(p, sigma_spectrum(p, t_p, seq, wt, lambda, strategy, crossover));
}

namespace {

std::vector<cplx> subgroup_profile(uint64_t p, uint64_t g, uint64_t t) {
    std::vector<cplx> prof(p, cplx(0, 0));
    uint64_t acc = g % p;
    for (uint64_t z = 0; z < t; ++z) {
        prof[acc] += 1.0;
        acc = mul_mod(acc, g, p);
    }
    return prof;
}

SumRecord subgroup_max_trusted(uint64_t p, uint64_t g, uint64_t t, MaxStrategy strategy,
                               uint64_t crossover) {
    return max_of_spectrum(p, spectrum_of_profile(p, subgroup_profile(p, g, t), strategy, crossover));
}

} // namespace

SumRecord subgroup_sum_max(uint64_t p, uint64_t g, uint64_t t, const Factorizer& fac,
                           MaxStrategy strategy, uint64_t crossover) {
    if (p < 2 || !is_prime(p)) throw ValidationError("subgroup_sum_max: p must be prime");
    if (g % p == 0) throw ValidationError("subgroup_sum_max: g must be a unit mod p");
    if (t == 0 || (p - 1) % t != 0) throw ValidationError("subgroup_sum_max: t must divide p-1");
    if (pow_mod(g, t, p) != 1) throw ValidationError("subgroup_sum_max: g^t != 1, order check failed");
    Factorization ft = fac.factorize(t); // named: entries() is a view into it
    for (const auto& e : ft.entries())
        if (pow_mod(g, t / e.prime, p) == 1)
            throw ValidationError("subgroup_sum_max: order of g is a proper divisor of t");
    return subgroup_max_trusted(p, g, t, strategy, crossover);
}

AdmissiblePair::AdmissiblePair(double a, double b, std::string l)
    : alpha(a), beta(b), label(std::move(l)) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ValidationError("AdmissiblePair: need 0 <= alpha < 1");
    if (!(beta >= 0.0 && beta <= 0.5)) throw ValidationError("AdmissiblePair: need 0 <= beta <= 1/2");
}

AdmissiblePair AdmissiblePair::korobov() { return {0.0, 0.5, "korobov"}; }
AdmissiblePair AdmissiblePair::heath_brown_konyagin_a() { return {5.0 / 8.0, 1.0 / 8.0, "heath-brown-konyagin-a"}; }
AdmissiblePair AdmissiblePair::heath_brown_konyagin_b() { return {3.0 / 8.0, 1.0 / 4.0, "heath-brown-konyagin-b"}; }
AdmissiblePair AdmissiblePair::shkredov() { return {0.5, 1.0 / 6.0, "shkredov"}; }

AdmissiblePair AdmissiblePair::bgk(double theta, double zeta) {
    if (!(theta > 0.0 && theta <= 1.0)) throw ValidationError("AdmissiblePair::bgk: need 0 < theta <= 1");
    if (!(zeta > 0.0)) throw ValidationError("AdmissiblePair::bgk: need zeta > 0");
    std::ostringstream l;
    l << "bgk(theta=" << theta << ",zeta=" << zeta << ")";
    return {1.0 - theta, zeta * theta, l.str()};
}

AdmissiblePair AdmissiblePair::by_label(const std::string& label) {
    if (label == "korobov") return korobov();
    if (label == "heath-brown-konyagin-a") return heath_brown_konyagin_a();
    if (label == "heath-brown-konyagin-b") return heath_brown_konyagin_b();
    if (label == "shkredov") return shkredov();
    throw ValidationError("AdmissiblePair: unknown label \"" + label +
                          "\" (korobov | heath-brown-konyagin-a | heath-brown-konyagin-b | "
                          "shkredov)");
}

std::vector<ScanRow> admissible_scan(const OrderDatabase& db, const AdmissiblePair& pair, double C,
                                     int threads, MaxStrategy strategy, uint64_t crossover) {
    if (!(C > 0)) throw ValidationError("admissible_scan: C must be positive");
    std::vector<ScanRow> rows(db.records.size());
    parallel_for_ordered(db.records.size(), threads, [&](size_t i) {
        const PrimeRecord& r = db.records[i];
        SumRecord m = subgroup_max_trusted(r.p, db.lambda % r.p, r.t, strategy, crossover);
        double envelope = std::pow(double(r.t), pair.alpha) * std::pow(double(r.p), pair.beta);
        ScanRow& row = rows[i];
        row.p = r.p;
        row.t = r.t;
        row.a = m.a;
        row.m = m.value;
        row.bound = C * envelope;
        row.ratio = m.value / envelope;
        row.flagged = row.ratio > C;
    });
    return rows;
}

ExceptionalScan exceptional_count(uint64_t t, int k, double U, double C, uint64_t ell_max,
                                  int threads) {
    if (t == 0) throw ValidationError("exceptional_count: t must be positive");
    if (k < 1) throw ValidationError("exceptional_count: k must be >= 1");
    if (!(U > 1.0)) throw ValidationError("exceptional_count: U must exceed 1");
    if (!(C > 0.0)) throw ValidationError("exceptional_count: C must be positive");

    ExceptionalScan scan;
    scan.t = t;
    scan.k = k;
    scan.U = U;
    scan.C = C;
    scan.ell_max = ell_max;
    scan.budget = U / std::log(U);

    std::vector<uint64_t> ells;
    for (uint64_t ell : sieve_primes(ell_max))
        if (ell % t == 1 % t) ells.push_back(ell);

    scan.rows.resize(ells.size());
    Factorizer fac(uint32_t(std::min<uint64_t>(std::max<uint64_t>(ell_max, 2), 100'000'000ull)));
    const double exp_ell = 1.0 / (2.0 * double(k) * double(k));
    const double defect = std::pow(double(t), -1.0 / double(k)) +
                          std::pow(U, -1.0 / (double(k) * double(k)));

    parallel_for_ordered(ells.size(), threads, [&](size_t i) {
        uint64_t ell = ells[i];
        ExceptionalRow& row = scan.rows[i];
        row.ell = ell;
        row.rhs = C * double(t) * std::pow(double(ell), exp_ell) * defect;
        if (ell == 2) {
            row.g = 1;
            row.a = 1;
            row.value = 1.0; // the only character value: e_2(1*1) with t = 1
        } else {
            Factorization f = fac.factorize(ell - 1);
            uint64_t h = smallest_primitive_root(ell, f);
            row.g = pow_mod(h, (ell - 1) / t, ell);
            SumRecord m = subgroup_max_trusted(ell, row.g, t, MaxStrategy::kAuto, kDefaultCrossover);
            row.a = m.a;
            row.value = m.value;
        }
        row.exceptional = row.value > row.rhs;
    });

    scan.total = scan.rows.size();
    for (const auto& r : scan.rows) scan.exceptional += r.exceptional ? 1 : 0;
    return scan;
}

} // namespace expsieve
