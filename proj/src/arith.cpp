#include "expsieve/arith.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace expsieve {

uint64_t pow_mod(uint64_t base, uint64_t exp, uint64_t m) {
    if (m == 0) throw ValidationError("pow_mod: modulus must be positive");
    if (m == 1) return 0;
    uint64_t r = 1;
    base %= m;
    while (exp) {
        if (exp & 1) r = mul_mod(r, base, m);
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    return r;
}

namespace {

bool mr_witness(uint64_t n, uint64_t d, int s, uint64_t a) {
    uint64_t x = pow_mod(a % n, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < s; ++i) {
        x = mul_mod(x, x, n);
        if (x == n - 1) return false;
    }
    return true; // composite witnessed
}

} // namespace

bool is_prime(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // This witness set decides primality for every n < 3.3e24, hence all of u64.
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (mr_witness(n, d, s, a)) return false;
    }
    return true;
}

Factorization::Factorization(uint64_t source, std::vector<FactorEntry> entries)
    : source_(source), entries_(std::move(entries)) {
    if (source_ == 0) throw ValidationError("Factorization: source must be positive");
    uint64_t prev = 0;
    for (const auto& e : entries_) {
        if (e.prime <= prev) throw ValidationError("Factorization: entries must be sorted by prime");
        if (e.exponent == 0) throw ValidationError("Factorization: zero exponent");
        prev = e.prime;
    }
}

uint64_t Factorization::reassemble() const {
    uint64_t n = 1;
    for (const auto& e : entries_)
        for (uint32_t i = 0; i < e.exponent; ++i) n *= e.prime;
    return n;
}

Factorizer::Factorizer(uint32_t spf_limit) {
    if (spf_limit < 2) spf_limit = 2;
    spf_.assign(size_t(spf_limit) + 1, 0);
    for (uint32_t i = 2; i <= spf_limit; ++i) {
        if (spf_[i] == 0) {
            for (uint64_t j = i; j <= spf_limit; j += i)
                if (spf_[j] == 0) spf_[j] = i;
        }
    }
}

namespace {

// Brent's cycle variant of Pollard's rho. The polynomial increment c walks a
// fixed schedule, so the factor found for a given n never depends on anything
// external; factorizations are reproducible run to run.
uint64_t rho_brent(uint64_t n, uint64_t c) {
    auto f = [n, c](uint64_t x) { return (mul_mod(x, x, n) + c) % n; };
    uint64_t x = 2, y = 2, d = 1, q = 1, ys = y;
    uint64_t r = 1;
    const uint64_t batch = 128;
    while (d == 1) {
        x = y;
        for (uint64_t i = 0; i < r; ++i) y = f(y);
        uint64_t k = 0;
        while (k < r && d == 1) {
            ys = y;
            uint64_t lim = std::min(batch, r - k);
            for (uint64_t i = 0; i < lim; ++i) {
                y = f(y);
                if (y == x) return n; // cycle closed barren; caller moves to the next c
                uint64_t diff = x > y ? x - y : y - x;
                q = mul_mod(q, diff, n);
            }
            d = std::gcd(q, n);
            k += lim;
        }
        r <<= 1;
    }
    if (d == n) {
        // batched gcd overshot; redo the last stretch one step at a time
        d = 1;
        while (d == 1) {
            ys = f(ys);
            uint64_t diff = x > ys ? x - ys : ys - x;
            d = std::gcd(diff, n);
            if (diff == 0) return n;
        }
    }
    return d;
}

void factor_large(uint64_t n, std::vector<uint64_t>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out.push_back(n); return; }
    uint64_t d = n;
    for (uint64_t c = 1; d == n; ++c) d = rho_brent(n, c);
    factor_large(d, out);
    factor_large(n / d, out);
}

} // namespace

Factorization Factorizer::factorize(uint64_t n) const {
    if (n == 0) throw ValidationError("factorize: n must be positive");
    const uint64_t source = n;
    std::vector<FactorEntry> entries;
    auto push = [&entries](uint64_t p) {
        if (!entries.empty() && entries.back().prime == p) {
            ++entries.back().exponent;
        } else {
            entries.push_back({p, 1});
        }
    };

    if (n < spf_.size()) {
        while (n > 1) {
            uint64_t p = spf_[n];
            push(p);
            n /= p;
        }
        return Factorization(source, std::move(entries));
    }

    // strip primes readable straight off the table
    for (uint64_t p = 2; p * p <= n && p < spf_.size(); ++p) {
        if (spf_[p] != p) continue;
        while (n % p == 0) { push(p); n /= p; }
        if (n < spf_.size()) break;
    }
    if (n > 1 && n < spf_.size()) {
        while (n > 1) {
            uint64_t p = spf_[n];
            push(p);
            n /= p;
        }
    } else if (n > 1) {
        std::vector<uint64_t> large;
        factor_large(n, large);
        std::sort(large.begin(), large.end());
        for (uint64_t p : large) push(p);
    }

    std::sort(entries.begin(), entries.end(),
              [](const FactorEntry& a, const FactorEntry& b) { return a.prime < b.prime; });
    // merge duplicates that sorting may have made adjacent
    std::vector<FactorEntry> merged;
    for (const auto& e : entries) {
        if (!merged.empty() && merged.back().prime == e.prime)
            merged.back().exponent += e.exponent;
        else
            merged.push_back(e);
    }
    return Factorization(source, std::move(merged));
}

uint64_t tau(const Factorization& f) {
    uint64_t t = 1;
    for (const auto& e : f.entries()) t *= (e.exponent + 1);
    return t;
}

uint64_t mult_order(uint64_t lambda, uint64_t p, const Factorization& f_pm1) {
    if (p < 2) throw ValidationError("mult_order: p must be a prime >= 2");
    if (lambda % p == 0) throw ValidationError("mult_order: order undefined, p divides lambda");
    if (f_pm1.source() != p - 1) throw ValidationError("mult_order: factorization is not of p-1");
    uint64_t t = p - 1;
    for (const auto& e : f_pm1.entries()) {
        for (uint32_t i = 0; i < e.exponent; ++i) {
            if (pow_mod(lambda, t / e.prime, p) == 1)
                t /= e.prime;
            else
                break;
        }
    }
    return t;
}

uint64_t omega_union(std::span<const uint64_t> values, const Factorizer& fac) {
    std::set<uint64_t> primes;
    for (uint64_t v : values) {
        if (v == 0) throw ValidationError("omega_union: elements must be positive");
        if (v == 1) continue;
        // keep the factorization alive; entries() is a view into it
        Factorization f = fac.factorize(v);
        for (const auto& e : f.entries()) primes.insert(e.prime);
    }
    return primes.size();
}

uint64_t smallest_primitive_root(uint64_t p, const Factorization& f_pm1) {
    if (p == 2) return 1;
    if (f_pm1.source() != p - 1) throw ValidationError("smallest_primitive_root: factorization is not of p-1");
    for (uint64_t h = 2; h < p; ++h) {
        bool ok = true;
        for (const auto& e : f_pm1.entries()) {
            if (pow_mod(h, (p - 1) / e.prime, p) == 1) { ok = false; break; }
        }
        if (ok) return h;
    }
    throw ValidationError("smallest_primitive_root: no generator found (p not prime?)");
}

} // namespace expsieve
