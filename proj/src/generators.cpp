#include "expsieve/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace expsieve {

SparseSequence make_arithmetic_sequence(uint64_t T, uint64_t start, uint64_t step, uint64_t S) {
    if (T == 0) throw ValidationError("arithmetic sequence: T must be positive");
    if (step == 0) throw ValidationError("arithmetic sequence: step must be positive");
    std::vector<uint64_t> s(T);
    for (uint64_t n = 0; n < T; ++n) s[n] = start + n * step;
    return SparseSequence(std::move(s), S); // ctor rejects overshoot of S
}

SparseSequence make_geometric_gap_sequence(uint64_t T, double ratio, uint64_t S) {
    if (T == 0) throw ValidationError("geometric-gap sequence: T must be positive");
    if (!(ratio > 1.0)) throw ValidationError("geometric-gap sequence: ratio must exceed 1");
    if (S + 1 < T) throw ValidationError("geometric-gap sequence: need S >= T-1");
    std::vector<uint64_t> s(T);
    if (T == 1) {
        s[0] = 0;
    } else {
        double denom = std::pow(ratio, double(T - 1)) - 1.0;
        for (uint64_t n = 0; n < T; ++n) {
            double frac = (std::pow(ratio, double(n)) - 1.0) / denom;
            uint64_t v = uint64_t(std::floor(frac * double(S)));
            if (n > 0 && v <= s[n - 1]) v = s[n - 1] + 1; // keep strictly increasing
            s[n] = std::min(v, S);
        }
        // ramp collisions near the top can only be repaired downwards
        for (uint64_t n = T; n-- > 1;)
            if (s[n - 1] >= s[n]) s[n - 1] = s[n] - 1;
    }
    return SparseSequence(std::move(s), S);
}

SparseSequence make_random_subset_sequence(uint64_t T, uint64_t S, uint64_t seed) {
    if (T == 0) throw ValidationError("random subset sequence: T must be positive");
    if (T > S + 1) throw ValidationError("random subset sequence: T exceeds |{0..S}|");
    std::mt19937_64 rng(seed);
    std::set<uint64_t> chosen;
    for (uint64_t j = S + 1 - T; j <= S; ++j) {
        uint64_t r = rng() % (j + 1);
        if (!chosen.insert(r).second) chosen.insert(j);
    }
    std::vector<uint64_t> s(chosen.begin(), chosen.end());
    return SparseSequence(std::move(s), S);
}

WeightSequence make_unit_weights(uint64_t T) {
    return WeightSequence(std::vector<cplx>(T, cplx(1.0, 0.0)));
}

WeightSequence make_random_sign_weights(uint64_t T, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<cplx> g(T);
    for (auto& v : g) v = (rng() & 1) ? cplx(1.0, 0.0) : cplx(-1.0, 0.0);
    return WeightSequence(std::move(g));
}

WeightSequence make_random_phase_weights(uint64_t T, uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<cplx> g(T);
    for (auto& v : g) {
        double u = double(rng() >> 11) * 0x1.0p-53; // uniform in [0,1)
        double ang = 2.0 * std::numbers::pi * u;
        v = cplx(std::cos(ang), std::sin(ang));
    }
    return WeightSequence(std::move(g));
}

} // namespace expsieve
