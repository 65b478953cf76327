#include "expsieve/equidist.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "expsieve/parallel.hpp"

namespace expsieve {

UnitPointSet::UnitPointSet(std::vector<uint64_t> nums, uint64_t den_in)
    : num(std::move(nums)), den(den_in) {
    if (den == 0) throw ValidationError("UnitPointSet: denominator must be positive");
    for (uint64_t v : num)
        if (v >= den) throw ValidationError("UnitPointSet: points must lie in [0,1)");
}

UnitPointSet UnitPointSet::from_doubles(std::span<const double> xs) {
    const double scale = 0x1.0p53;
    std::vector<uint64_t> nums;
    nums.reserve(xs.size());
    for (double x : xs) {
        if (!(x >= 0.0 && x < 1.0)) throw ValidationError("UnitPointSet: points must lie in [0,1)");
        nums.push_back(uint64_t(x * scale));
    }
    return UnitPointSet(std::move(nums), uint64_t(scale));
}

UnitPointSet sequence_A(uint64_t p, uint64_t lambda, uint64_t t_p, const SparseSequence& seq) {
    if (p < 2) throw ValidationError("sequence_A: p must be a prime >= 2");
    if (lambda % p == 0) throw ValidationError("sequence_A: p divides the base");
    if (t_p == 0 || pow_mod(lambda, t_p, p) != 1)
        throw ValidationError("sequence_A: t_p is not an order of the base");
    std::vector<uint64_t> nums(seq.s.size());
    for (size_t n = 0; n < seq.s.size(); ++n) nums[n] = pow_mod(lambda, seq.s[n] % t_p, p);
    return UnitPointSet(std::move(nums), p);
}

DiscrepancyResult discrepancy_exact(const UnitPointSet& pts) {
    const size_t T = pts.size();
    if (T == 0) throw ValidationError("discrepancy_exact: need at least one point");
    const __int128 d = __int128(pts.den);
    const __int128 Ts = __int128(T);

    std::vector<uint64_t> v(pts.num);
    std::sort(v.begin(), v.end());

    // Excess side: closed [v_i, v_j] holds j-i+1 points, value numerator over
    // T*den is (j-i+1)*den - (v_j - v_i)*T; split into a j-part plus the best
    // i-key v_i*T - i*den seen so far.
    __int128 best_plus = 0;
    size_t plus_i = 0, plus_j = 0;
    {
        __int128 best_key = 0;
        size_t best_key_i = 0;
        bool have = false;
        for (size_t j = 0; j < T; ++j) {
            __int128 key = __int128(v[j]) * Ts - __int128(j) * d;
            if (!have || key > best_key) {
                best_key = key;
                best_key_i = j;
                have = true;
            }
            __int128 cand = __int128(j + 1) * d - __int128(v[j]) * Ts + best_key;
            if (j == 0 || cand > best_plus) {
                best_plus = cand;
                plus_i = best_key_i;
                plus_j = j;
            }
        }
    }

    // Deficit side: open (e_i, e_j) over the points extended by sentinels at 0
    // and 1 holds j-i-1 points; numerator is (e_j - e_i)*T - (j-i-1)*den.
    __int128 best_minus = 0;
    size_t minus_i = 0, minus_j = 0;
    {
        auto e = [&](size_t k) -> __int128 {
            if (k == 0) return 0;
            if (k == T + 1) return d;
            return __int128(v[k - 1]);
        };
        __int128 best_key = 0; // e_0*T - 0*den
        size_t best_key_i = 0;
        bool first = true;
        for (size_t j = 1; j <= T + 1; ++j) {
            __int128 cand = (e(j) * Ts - __int128(j) * d) - best_key + d;
            if (first || cand > best_minus) {
                best_minus = cand;
                minus_i = best_key_i;
                minus_j = j;
                first = false;
            }
            __int128 key = e(j) * Ts - __int128(j) * d;
            if (key < best_key) {
                best_key = key;
                best_key_i = j;
            }
        }
    }

    DiscrepancyResult res;
    res.d_den = (unsigned __int128)(Ts * d);
    if (best_plus >= best_minus) {
        res.excess_side = true;
        res.d_num = (unsigned __int128)best_plus;
        res.witness_a = double(v[plus_i]) / double(pts.den);
        res.witness_b = double(v[plus_j]) / double(pts.den);
    } else {
        res.excess_side = false;
        res.d_num = (unsigned __int128)best_minus;
        auto at = [&](size_t k) { return k == 0 ? 0.0 : (k == T + 1 ? 1.0 : double(v[k - 1]) / double(pts.den)); };
        res.witness_a = at(minus_i);
        res.witness_b = at(minus_j);
    }
    res.D = double(res.d_num) / double(res.d_den);
    return res;
}

double erdos_turan_bound(const UnitPointSet& pts, uint64_t H) {
    const size_t T = pts.size();
    if (T == 0) throw ValidationError("erdos_turan_bound: need at least one point");
    if (H == 0) throw ValidationError("erdos_turan_bound: H must be at least 1");
    double bound = 1.0 / double(H + 1);
    for (uint64_t h = 1; h <= H; ++h) {
        cplx acc(0, 0);
        for (size_t n = 0; n < T; ++n) {
            uint64_t j = mul_mod(h % pts.den, pts.num[n], pts.den);
            double ang = 2.0 * std::numbers::pi * double(j) / double(pts.den);
            acc += cplx(std::cos(ang), std::sin(ang));
        }
        bound += 3.0 * std::abs(acc) / (double(h) * double(T));
    }
    return bound;
}

EquidistSurvey discrepancy_survey(const OrderDatabase& db, const SparseSequence& seq, double delta,
                                  uint64_t H, int threads) {
    if (!(delta > 0)) throw ValidationError("discrepancy_survey: delta must be positive");
    if (seq.size() == 0) throw ValidationError("discrepancy_survey: empty sequence");

    EquidistSurvey survey;
    survey.delta = delta;
    survey.H = H;
    survey.rows.resize(db.records.size());
    parallel_for_ordered(db.records.size(), threads, [&](size_t i) {
        const PrimeRecord& r = db.records[i];
        UnitPointSet pts = sequence_A(r.p, db.lambda, r.t, seq);
        EquidistRow& row = survey.rows[i];
        row.p = r.p;
        row.disc = discrepancy_exact(pts);
        row.et_bound = erdos_turan_bound(pts, H);
        row.H = H;
    });

    double T = double(seq.size());
    double thresh_poly = std::pow(T, -delta);
    double thresh_log = std::pow(std::log(T), -delta);
    size_t n_poly = 0, n_log = 0;
    for (const auto& row : survey.rows) {
        if (row.disc.D <= thresh_poly) ++n_poly;
        if (row.disc.D <= thresh_log) ++n_log;
    }
    if (!survey.rows.empty()) {
        survey.fraction_poly = double(n_poly) / double(survey.rows.size());
        survey.fraction_log = double(n_log) / double(survey.rows.size());
    }
    return survey;
}

} // namespace expsieve
