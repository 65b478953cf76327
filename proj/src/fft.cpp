#include "expsieve/fft.hpp"

#include <bit>
#include <numbers>

#include "expsieve/errors.hpp"

namespace expsieve {

void fft_pow2(std::vector<cplx>& a, int sign) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw ValidationError("fft_pow2: size must be a power of two");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * std::numbers::pi / double(len);
        cplx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                cplx u = a[i + k];
                cplx v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

std::vector<cplx> czt_eplus(const std::vector<cplx>& x) {
    const size_t m = x.size();
    if (m == 0) return {};
    if (m == 1) return x;

    // chirp b_k = exp(+i*pi*k^2/m); k^2 is reduced mod 2m first, since the
    // phase has period 2m in k^2 and k^2 itself overflows no matter the type
    const uint64_t period = 2 * uint64_t(m);
    auto chirp = [&](uint64_t k) {
        uint64_t k2 = (__uint128_t(k) * k) % period;
        double ang = std::numbers::pi * double(k2) / double(m);
        return cplx(std::cos(ang), std::sin(ang));
    };

    size_t L = std::bit_ceil(2 * m - 1);
    std::vector<cplx> f(L, cplx(0, 0)), g(L, cplx(0, 0));
    for (size_t k = 0; k < m; ++k) f[k] = x[k] * chirp(k);
    for (size_t k = 0; k < m; ++k) {
        cplx c = std::conj(chirp(k));
        g[k] = c;
        if (k) g[L - k] = c; // negative lags wrap
    }

    fft_pow2(f, -1);
    fft_pow2(g, -1);
    for (size_t i = 0; i < L; ++i) f[i] *= g[i];
    fft_pow2(f, +1);

    std::vector<cplx> out(m);
    const double inv = 1.0 / double(L);
    for (size_t j = 0; j < m; ++j) out[j] = f[j] * inv * chirp(j);
    return out;
}

} // namespace expsieve
