#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "expsieve/errors.hpp"
#include "expsieve/fft.hpp"

using namespace expsieve;

namespace {

// naive DFT with the e^(+2 pi i a u / m) kernel, the transform's contract
std::vector<cplx> dft_naive(const std::vector<cplx>& x) {
    const size_t m = x.size();
    std::vector<cplx> out(m);
    for (size_t a = 0; a < m; ++a) {
        cplx acc = 0;
        for (size_t u = 0; u < m; ++u) {
            double ang = 2.0 * std::numbers::pi * double((a * u) % m) / double(m);
            acc += x[u] * cplx(std::cos(ang), std::sin(ang));
        }
        out[a] = acc;
    }
    return out;
}

} // namespace

TEST_CASE("power-of-two FFT inverts itself") {
    std::mt19937_64 rng(5);
    for (size_t n : {1ull, 2ull, 8ull, 64ull, 1024ull}) {
        std::vector<cplx> x(n);
        for (auto& v : x) v = cplx(double(rng() % 1000) / 500 - 1, double(rng() % 1000) / 500 - 1);
        std::vector<cplx> y = x;
        fft_pow2(y, -1);
        fft_pow2(y, +1);
        for (size_t i = 0; i < n; ++i) CHECK(std::abs(y[i] / double(n) - x[i]) < 1e-12);
    }
}

TEST_CASE("power-of-two FFT rejects other lengths") {
    std::vector<cplx> x(6);
    CHECK_THROWS_AS(fft_pow2(x, -1), ValidationError);
}

TEST_CASE("chirp transform equals the naive DFT at every length to 64") {
    std::mt19937_64 rng(6);
    for (size_t m = 1; m <= 64; ++m) {
        std::vector<cplx> x(m);
        for (auto& v : x) v = cplx(double(rng() % 2000) / 1000 - 1, double(rng() % 2000) / 1000 - 1);
        auto got = czt_eplus(x);
        auto want = dft_naive(x);
        REQUIRE(got.size() == m);
        for (size_t i = 0; i < m; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
    }
}

TEST_CASE("chirp transform stays accurate at a large prime length") {
    const size_t m = 10007;
    std::mt19937_64 rng(7);
    std::vector<cplx> x(m);
    for (auto& v : x) v = cplx(double(rng() % 2000) / 1000 - 1, double(rng() % 2000) / 1000 - 1);
    auto got = czt_eplus(x);

    // spot-check rows of the DFT matrix rather than all of them
    for (size_t a : {0ull, 1ull, 137ull, 5003ull, 10006ull}) {
        cplx want = 0;
        for (size_t u = 0; u < m; ++u) {
            double ang = 2.0 * std::numbers::pi * double((a * u) % m) / double(m);
            want += x[u] * cplx(std::cos(ang), std::sin(ang));
        }
        CHECK(std::abs(got[a] - want) < 1e-8 * std::sqrt(double(m)));
    }

    // Parseval over the whole spectrum
    double in = 0, out = 0;
    for (const auto& v : x) in += std::norm(v);
    for (const auto& v : got) out += std::norm(v);
    CHECK(out == doctest::Approx(in * double(m)).epsilon(1e-10));
}
