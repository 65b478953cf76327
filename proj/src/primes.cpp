#include "expsieve/primes.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "expsieve/parallel.hpp"
#include "expsieve/report.hpp"

namespace expsieve {

std::vector<uint64_t> sieve_primes(uint64_t X, uint64_t cap) {
    if (X > cap) {
        std::ostringstream ss;
        ss << "sieve_primes: X=" << X << " exceeds cap " << cap;
        throw ResourceError(ss.str());
    }
    std::vector<uint64_t> primes;
    if (X < 2) return primes;

    uint64_t root = uint64_t(std::sqrt(double(X))) + 2;
    while (root * root > X + 1) --root;
    std::vector<uint8_t> base(root + 1, 1);
    std::vector<uint64_t> base_primes;
    for (uint64_t i = 2; i <= root; ++i) {
        if (!base[i]) continue;
        base_primes.push_back(i);
        for (uint64_t j = i * i; j <= root; j += i) base[j] = 0;
    }

    const uint64_t seg = 1u << 20;
    std::vector<uint8_t> mark(seg);
    for (uint64_t lo = 2; lo <= X; lo += seg) {
        uint64_t hi = std::min(X, lo + seg - 1);
        std::fill(mark.begin(), mark.begin() + (hi - lo + 1), 1);
        for (uint64_t p : base_primes) {
            if (p * p > hi) break;
            uint64_t start = std::max(p * p, ((lo + p - 1) / p) * p);
            for (uint64_t j = start; j <= hi; j += p) mark[j - lo] = 0;
        }
        for (uint64_t v = lo; v <= hi; ++v)
            if (mark[v - lo]) primes.push_back(v);
    }
    return primes;
}

OrderDatabase build_order_db(uint64_t lambda, uint64_t X, int threads, uint64_t sieve_cap) {
    if (lambda < 2) throw ValidationError("build_order_db: base must be >= 2");
    OrderDatabase db;
    db.lambda = lambda;
    db.X = X;

    std::vector<uint64_t> primes = sieve_primes(X, sieve_cap);
    std::erase_if(primes, [lambda](uint64_t p) { return lambda % p == 0; });
    if (primes.empty()) return db;

    // the table covers every p-1 we will factor, up to the 1e8 memory guard
    uint32_t limit = uint32_t(std::min<uint64_t>(std::max<uint64_t>(X, 2), 100'000'000ull));
    Factorizer fac(limit);

    db.records.resize(primes.size());
    parallel_for_ordered(primes.size(), threads, [&](size_t i) {
        uint64_t p = primes[i];
        Factorization f = fac.factorize(p - 1);
        db.records[i] = PrimeRecord{p, mult_order(lambda, p, f), tau(f)};
    });
    return db;
}

namespace {

void put_u64_le(std::string& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(char((v >> (8 * i)) & 0xff));
}

uint64_t get_u64_le(const unsigned char* b) {
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
    return v;
}

} // namespace

void OrderDatabase::save(const std::filesystem::path& path) const {
    std::string payload;
    payload.reserve(records.size() * 24);
    for (const auto& r : records) {
        put_u64_le(payload, r.p);
        put_u64_le(payload, r.t);
        put_u64_le(payload, r.tau_pm1);
    }
    nlohmann::json header = {
        {"lambda", lambda},
        {"X", X},
        {"count", records.size()},
        {"checksum", fnv1a64_hex(std::span<const unsigned char>(
                         reinterpret_cast<const unsigned char*>(payload.data()), payload.size()))},
    };
    atomic_write(path, header.dump() + "\n" + payload);
}

OrderDatabase OrderDatabase::load(const std::filesystem::path& path) {
    std::string data = read_file(path);
    size_t nl = data.find('\n');
    if (nl == std::string::npos) throw ValidationError("order db: missing header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(data.substr(0, nl));
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("order db: bad header: ") + e.what());
    }

    OrderDatabase db;
    db.lambda = header.at("lambda").get<uint64_t>();
    db.X = header.at("X").get<uint64_t>();
    uint64_t count = header.at("count").get<uint64_t>();
    std::string want = header.at("checksum").get<std::string>();

    const size_t need = size_t(count) * 24;
    if (data.size() - nl - 1 != need) throw ValidationError("order db: truncated payload");
    auto* bytes = reinterpret_cast<const unsigned char*>(data.data()) + nl + 1;
    if (fnv1a64_hex(std::span<const unsigned char>(bytes, need)) != want)
        throw ValidationError("order db: checksum mismatch");

    db.records.resize(count);
    for (size_t i = 0; i < count; ++i) {
        const unsigned char* rec = bytes + i * 24;
        db.records[i] = PrimeRecord{get_u64_le(rec), get_u64_le(rec + 8), get_u64_le(rec + 16)};
    }
    uint64_t prev = 0;
    for (const auto& r : db.records) {
        if (r.p <= prev || r.t == 0 || r.t >= r.p || r.tau_pm1 == 0)
            throw ValidationError("order db: malformed record");
        prev = r.p;
    }
    return db;
}

std::vector<PrimeRecord> filter_E_Delta(const OrderDatabase& db, double Delta) {
    if (Delta < 1.0) throw ValidationError("filter_E_Delta: Delta must be >= 1");
    uint64_t floor_t = uint64_t(std::ceil(Delta));
    std::vector<PrimeRecord> out;
    for (const auto& r : db.records)
        if (r.t >= floor_t) out.push_back(r);
    return out;
}

double density_check(const OrderDatabase& db) {
    if (db.X < 100) throw ValidationError("density_check: X must be >= 100");
    auto big = filter_E_Delta(db, std::sqrt(double(db.X)));
    return double(big.size()) * std::log(double(db.X)) / double(db.X);
}

uint64_t count_small_orders(const OrderDatabase& db, double Z) {
    uint64_t cap = Z < 1.0 ? 0 : uint64_t(std::floor(Z));
    uint64_t n = 0;
    for (const auto& r : db.records)
        if (r.t <= cap) ++n;
    return n;
}

DyadicPartition make_partition(const OrderDatabase& db, double Delta) {
    if (Delta < 1.0 || double(db.X) < Delta)
        throw ValidationError("make_partition: need 1 <= Delta <= X");
    DyadicPartition part;
    part.Delta = Delta;

    double X = double(db.X);
    part.boundaries.push_back(Delta);
    while (part.boundaries.back() < X)
        part.boundaries.push_back(std::min(2.0 * part.boundaries.back(), X));
    if (part.boundaries.size() == 1) part.boundaries.push_back(X); // Delta == X
    part.boundaries.back() = X + 1.0; // top class closes at t_p = X inclusive

    size_t J = part.boundaries.size() - 1;
    part.classes.assign(J, {});
    for (uint32_t i = 0; i < db.records.size(); ++i) {
        double t = double(db.records[i].t);
        if (t < Delta) continue;
        // classes are few (log2(X/Delta)); linear probe is fine
        for (size_t j = 0; j < J; ++j) {
            if (t >= part.boundaries[j] && t < part.boundaries[j + 1]) {
                part.classes[j].push_back(i);
                break;
            }
        }
    }
    return part;
}

std::map<uint64_t, uint32_t> order_fibers(const OrderDatabase& db) {
    std::map<uint64_t, uint32_t> fib;
    for (const auto& r : db.records) ++fib[r.t];
    return fib;
}

} // namespace expsieve
