#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "expsieve/primes.hpp"
#include "expsieve/report.hpp"

using namespace expsieve;

TEST_CASE("sieve_primes matches a naive sieve up to 100000") {
    const uint64_t X = 100000;
    std::vector<bool> comp(X + 1, false);
    std::vector<uint64_t> naive;
    for (uint64_t n = 2; n <= X; ++n) {
        if (comp[n]) continue;
        naive.push_back(n);
        for (uint64_t m = n * n; m <= X; m += n) comp[m] = true;
    }
    auto got = sieve_primes(X);
    CHECK(got == naive);
}

TEST_CASE("prime counts at pinned checkpoints") {
    CHECK(sieve_primes(1).size() == 0);
    CHECK(sieve_primes(2).size() == 1);
    CHECK(sieve_primes(100).size() == 25);
    CHECK(sieve_primes(1000000).size() == 78498);
}

TEST_CASE("sieve_primes refuses to blow past its cap") {
    CHECK_THROWS_AS(sieve_primes(2'000'000'000ull), ResourceError);
    CHECK(sieve_primes(2'000'000ull, 3'000'000ull).size() == 148933);
}

TEST_CASE("order database for lambda=2, X=10") {
    OrderDatabase db = build_order_db(2, 10);
    CHECK(db.lambda == 2);
    CHECK(db.X == 10);
    REQUIRE(db.records.size() == 3); // p=2 dropped, 2 | lambda
    CHECK(db.records[0].p == 3);
    CHECK(db.records[0].t == 2);
    CHECK(db.records[0].tau_pm1 == 2);
    CHECK(db.records[1].p == 5);
    CHECK(db.records[1].t == 4);
    CHECK(db.records[1].tau_pm1 == 3);
    CHECK(db.records[2].p == 7);
    CHECK(db.records[2].t == 3);
    CHECK(db.records[2].tau_pm1 == 4);
}

TEST_CASE("order database drops exactly the primes dividing the base") {
    OrderDatabase db = build_order_db(6, 50);
    for (const auto& r : db.records) {
        CHECK(6 % r.p != 0);
        CHECK(pow_mod(6, r.t, r.p) == 1);
    }
    OrderDatabase db3 = build_order_db(3, 5);
    REQUIRE(db3.records.size() == 2); // p=2 and p=5 survive
    CHECK(db3.records[0].p == 2);
    CHECK(db3.records[0].t == 1); // 3 = 1 mod 2
    CHECK(db3.records[1].p == 5);
    CHECK(db3.records[1].t == 4);
}

TEST_CASE("order database records satisfy order minimality") {
    OrderDatabase db = build_order_db(2, 2000);
    Factorizer fac;
    for (const auto& r : db.records) {
        CHECK(is_prime(r.p));
        CHECK(r.t >= 1);
        CHECK((r.p - 1) % r.t == 0);
        CHECK(pow_mod(2, r.t, r.p) == 1);
        auto f = fac.factorize(r.p - 1);
        CHECK(tau(f) == r.tau_pm1);
        for (const auto& e : f.entries()) {
            if (r.t % e.prime == 0) CHECK(pow_mod(2, r.t / e.prime, r.p) != 1);
        }
    }
}

TEST_CASE("save and load roundtrip, checksum catches corruption") {
    OrderDatabase db = build_order_db(2, 500);
    auto path = std::filesystem::temp_directory_path() / "expsieve_test_orders.odb";
    db.save(path);
    OrderDatabase back = OrderDatabase::load(path);
    CHECK(back.lambda == db.lambda);
    CHECK(back.X == db.X);
    REQUIRE(back.records.size() == db.records.size());
    for (size_t i = 0; i < db.records.size(); ++i) {
        CHECK(back.records[i].p == db.records[i].p);
        CHECK(back.records[i].t == db.records[i].t);
        CHECK(back.records[i].tau_pm1 == db.records[i].tau_pm1);
    }

    // flip one payload byte; the stored checksum must notice
    std::string raw = read_file(path);
    raw[raw.size() - 5] ^= 0x40;
    std::ofstream(path, std::ios::binary) << raw;
    CHECK_THROWS_AS(OrderDatabase::load(path), ValidationError);
    std::filesystem::remove(path);
}

TEST_CASE("load rejects a missing file") {
    CHECK_THROWS_AS(OrderDatabase::load("/nonexistent/orders.odb"), ValidationError);
}

TEST_CASE("filter_E_Delta keeps exactly the orders clearing ceil(Delta)") {
    OrderDatabase db = build_order_db(2, 100);
    auto picked = filter_E_Delta(db, 6.2); // floor is ceil(6.2) = 7
    for (const auto& r : picked) CHECK(r.t >= 7);
    uint64_t dropped = db.records.size() - picked.size();
    uint64_t expect_dropped = 0;
    for (const auto& r : db.records)
        if (r.t < 7) ++expect_dropped;
    CHECK(dropped == expect_dropped);

    // integer Delta uses itself as the floor
    auto exact = filter_E_Delta(db, 4.0);
    for (const auto& r : exact) CHECK(r.t >= 4);
    CHECK_THROWS_AS(filter_E_Delta(db, 0.5), ValidationError);
}

TEST_CASE("density check sits near 1 for lambda=2") {
    OrderDatabase db = build_order_db(2, 100000);
    double ratio = density_check(db);
    CHECK(ratio > 0.8);
    CHECK(ratio < 1.2);
    OrderDatabase tiny = build_order_db(2, 50);
    CHECK_THROWS_AS(density_check(tiny), ValidationError);
}

TEST_CASE("count_small_orders obeys the quadratic ceiling") {
    // orders t <= Z over all p: each t contributes at most t primes
    // (p divides lambda^t - 1), so the count is at most Z(Z+1)/2.
    OrderDatabase db = build_order_db(2, 100000);
    for (double Z : {3.0, 5.0, 10.0, 16.9, 40.0}) {
        uint64_t c = count_small_orders(db, Z);
        double zf = std::floor(Z);
        CHECK(double(c) <= zf * (zf + 1) / 2);
    }
    // brute recount at one Z
    uint64_t brute = 0;
    for (const auto& r : db.records)
        if (double(r.t) <= 10.0) ++brute;
    CHECK(count_small_orders(db, 10.0) == brute);
}

TEST_CASE("dyadic partition covers the filtered range exactly once") {
    OrderDatabase db = build_order_db(2, 5000);
    DyadicPartition part = make_partition(db, 3.0);
    REQUIRE(part.boundaries.size() == part.classes.size() + 1);
    CHECK(part.boundaries.front() == 3.0);
    CHECK(part.boundaries.back() == double(db.X + 1));
    for (size_t j = 0; j + 1 < part.boundaries.size(); ++j)
        CHECK(part.boundaries[j] < part.boundaries[j + 1]);

    std::vector<uint32_t> seen(db.records.size(), 0);
    for (size_t j = 0; j < part.classes.size(); ++j) {
        for (uint32_t idx : part.classes[j]) {
            REQUIRE(idx < db.records.size());
            ++seen[idx];
            double t = double(db.records[idx].t);
            CHECK(t >= part.boundaries[j]);
            CHECK(t < part.boundaries[j + 1]);
        }
    }
    for (size_t i = 0; i < db.records.size(); ++i) {
        uint32_t want = db.records[i].t >= 3 ? 1 : 0;
        CHECK(seen[i] == want);
    }
}

TEST_CASE("order fibers are small: at most X/r + 1 primes share an order") {
    OrderDatabase db = build_order_db(2, 20000);
    auto fibers = order_fibers(db);
    uint64_t total = 0;
    for (const auto& [r, cnt] : fibers) {
        CHECK(double(cnt) <= double(db.X) / double(r) + 1);
        total += cnt;
    }
    CHECK(total == db.records.size());
}
