#include "oracles.hpp"

#include "klooster/error.hpp"
#include "klooster/sums.hpp"

#include <doctest.h>

#include <random>

using namespace klooster;

namespace {

bool near(std::complex<double> a, std::complex<double> b, double tol) { return std::abs(a - b) <= tol; }

CyclotomicInteger integer(i64 c, i64 k) { return CyclotomicInteger::from_integer(c, k); }

ExponentHistogram from_counts(i64 c, std::vector<i64> counts) {
    ExponentHistogram h(c);
    h.counts = std::move(counts);
    return h;
}

} // namespace

TEST_CASE("kloosterman_histogram examples") {
    CHECK(kloosterman_histogram(5, 7, 1).counts == std::vector<i64>{1});
    for (i64 c : {1, 6, 12, 13}) {
        const auto h = kloosterman_histogram(0, 0, c);
        CHECK(h.counts[0] == oracle::count_coprime(c));
        CHECK(h.total() == oracle::count_coprime(c));
    }
    // a = 2, 3 land on 0; a = 1 on 2; a = 4 on 3.
    CHECK(kloosterman_histogram(1, 1, 5).counts == std::vector<i64>{2, 0, 1, 1, 0});
}

TEST_CASE("kloosterman examples") {
    CHECK(kloosterman(1, 1, 2).exact == integer(2, 1));
    CHECK(kloosterman(1, 1, 3).exact == integer(3, -1));
    CHECK(near(kloosterman(1, 1, 3).approx, {-1.0, 0.0}, 1e-12));
    for (i64 c = 1; c <= 30; ++c)
        CHECK(kloosterman(0, 0, c).exact == integer(c, oracle::count_coprime(c)));
    CHECK_THROWS_AS(kloosterman(1, 1, 0), OutOfRange);
}

TEST_CASE("kloosterman matches term-by-term summation") {
    for (i64 c = 1; c <= 40; ++c)
        for (i64 m = -3; m < c; m += 2)
            for (i64 n = 0; n < c; n += 3)
                REQUIRE(near(kloosterman(m, n, c).approx, oracle::kloosterman(m, n, c), 1e-9));
}

TEST_CASE("arguments are reduced modulo c before multiplying") {
    const i64 big = (i64(1) << 62) + 12345;
    for (i64 c : {7, 60, 997}) {
        CHECK(kloosterman(big, -big, c).exact == kloosterman(mod(big, c), mod(-big, c), c).exact);
        CHECK(xi_sum(big, big, -big, c).exact == xi_sum(mod(big, c), mod(big, c), mod(-big, c), c).exact);
    }
}

TEST_CASE("SumValue invariants") {
    for (i64 c = 1; c <= 60; ++c)
        for (i64 m = 0; m < c; m += 5)
            for (i64 n = 0; n < c; n += 7) {
                const auto s = kloosterman(m, n, c);
                REQUIRE(s.exact.has_value());
                REQUIRE(s.field_modulus == c);
                REQUIRE(near(s.approx, to_complex(*s.exact), 1e-9 * double(s.terms + 1)));
                REQUIRE(std::abs(s.approx.imag()) <= 1e-9 * double(c));
                const auto x = xi_sum(m, n, (m + n) % c, c);
                REQUIRE(std::abs(x.approx.imag()) <= 1e-9 * double(c));
            }
}

TEST_CASE("exact backend respects the degree cap") {
    CHECK_FALSE(kloosterman(1, 1, 10007).exact.has_value());
    CHECK(kloosterman(1, 1, 10007, {.exact_degree_cap = 20000}).exact.has_value());
    CHECK_FALSE(kloosterman(1, 1, 7, {.exact = false}).exact.has_value());
    CHECK_FALSE(kloosterman(1, 1, 7, {.exact_degree_cap = 5}).exact.has_value());
    CHECK(kloosterman(1, 1, 7, {.exact_degree_cap = 6}).exact.has_value());
}

TEST_CASE("ramanujan") {
    for (i64 c = 1; c <= 40; ++c) {
        const auto r1 = ramanujan(1, c);
        CHECK(r1.closed_form == moebius(u64(c)));
        CHECK(r1.sum.exact == integer(c, r1.closed_form));
        const auto r0 = ramanujan(0, c);
        CHECK(r0.closed_form == oracle::count_coprime(c));
        CHECK(r0.sum.exact == integer(c, r0.closed_form));
    }
    // Units 1, 3 mod 4: e(2/4) + e(6/4) = -2.
    const auto brute = oracle::kloosterman(2, 0, 4);
    CHECK(near(brute, {-2.0, 0.0}, 1e-12));
    const auto r = ramanujan(2, 4);
    CHECK(r.closed_form == -2);
    CHECK(r.sum.exact == integer(4, -2));
}

TEST_CASE("xi_sum examples") {
    for (i64 c = 1; c <= 25; ++c)
        for (i64 m = 0; m < c; ++m)
            for (i64 n = 0; n < c; ++n)
                REQUIRE(xi_sum(m, n, 1, c).exact == kloosterman(m, n, c).exact);

    const std::vector<i64> zero_pairs{1, 3, 5, 8, 9, 15, 13, 20, 21, 27, 21, 40};
    for (i64 c = 1; c <= 12; ++c) {
        const auto x = xi_sum(0, 0, 0, c);
        CHECK(x.terms == zero_pairs[std::size_t(c - 1)]);
        CHECK(x.exact == integer(c, zero_pairs[std::size_t(c - 1)]));
    }

    const auto brute = oracle::xi_double_loop(1, 1, 2, 4);
    CHECK(xi_histogram(1, 1, 2, 4).counts == brute);
    CHECK(xi_sum(1, 1, 2, 4).exact == reduce(from_counts(4, brute)));
    CHECK(near(xi_sum(1, 1, 2, 4).approx, oracle::xi(1, 1, 2, 4), 1e-12));
}

TEST_CASE("xi pair enumeration matches the double loop for c <= 50") {
    for (i64 c = 1; c <= 50; ++c)
        for (i64 k = 0; k < c; ++k) {
            const i64 m = (3 * k + 1) % c, n = (5 * k + 2) % c;
            REQUIRE(xi_histogram(m, n, k, c).counts == oracle::xi_double_loop(m, n, k, c));
        }
}

TEST_CASE("twisted_kloosterman") {
    // Trivial character mod 1 gives the plain sum.
    const auto trivial = character(1, 0);
    for (i64 c = 1; c <= 20; ++c)
        CHECK(twisted_kloosterman(trivial, 3, 5, c).exact == kloosterman(3, 5, c).exact);

    CHECK(twisted_kloosterman(character(3, 1), 0, 0, 3).exact->is_zero());

    // chi mod 4 non-principal: e(1/4) - e(3/4) = 2i.
    const auto chi4 = character(4, 1);
    const auto v = twisted_kloosterman(chi4, 1, 0, 4);
    CHECK(near(v.approx, {0.0, 2.0}, 1e-12));
    CHECK(v.field_modulus == 4);
    CHECK(v.exact == CyclotomicInteger(4, {0, 2}));

    CHECK_THROWS_AS(twisted_kloosterman(chi4, 1, 1, 6), ModulusIncompatible);

    // Field modulus folds in the character order.
    const auto chi5 = character(5, 1);
    CHECK(twisted_field_modulus(chi5, 10) == 20);
    for (i64 m = 0; m < 10; ++m) {
        std::complex<double> brute = 0;
        for (i64 x = 0; x < 10; ++x) {
            if (oracle::slow_gcd(x, 10) != 1)
                continue;
            const auto w = *chi5.eval(x);
            brute += oracle::e(w.num, w.den) * oracle::e(m * x + 3 * oracle::search_inverse(x, 10), 10);
        }
        const auto s = twisted_kloosterman(chi5, m, 3, 10);
        CHECK(near(s.approx, brute, 1e-9));
        CHECK(near(to_complex(*s.exact), brute, 1e-9));
    }
}

TEST_CASE("kloosterman_crt") {
    for (i64 p : {2, 3, 101, 997})
        CHECK(near(kloosterman_crt(5, 7, p), kloosterman(5, 7, p).approx, 1e-9));
    CHECK(near(kloosterman_crt(1, 1, 15), oracle::kloosterman(1, 1, 15), 1e-9));
    for (i64 c : {1, 12, 360, 30030})
        CHECK(near(kloosterman_crt(0, 0, c), {double(euler_phi(u64(c))), 0.0}, 1e-6));

    std::mt19937_64 rng(99);
    std::uniform_int_distribution<i64> c_dist(1, 20000);
    for (int i = 0; i < 100; ++i) {
        const i64 c = c_dist(rng);
        const i64 m = std::uniform_int_distribution<i64>(0, c - 1)(rng);
        const i64 n = std::uniform_int_distribution<i64>(0, c - 1)(rng);
        REQUIRE(near(kloosterman_crt(m, n, c), kloosterman(m, n, c, {.exact = false}).approx, 1e-6));
    }
}

TEST_CASE("selberg_rhs examples") {
    // gcd(m, n, c) = 1 leaves the single term S(mn, 1; c).
    CHECK(selberg_rhs(3, 5, 7).exact == kloosterman(15, 1, 7).exact);
    CHECK(selberg_rhs(2, 2, 2).exact == integer(2, 1));
    CHECK(kloosterman(4, 1, 2).exact == integer(2, -1));
    for (i64 c = 1; c <= 30; ++c)
        CHECK(selberg_rhs(0, 0, c).exact == integer(c, oracle::count_coprime(c)));
}

TEST_CASE("xi right-hand sides") {
    for (i64 c = 1; c <= 16; ++c)
        for (i64 m = 0; m < c; ++m)
            for (i64 n = 0; n < c; ++n)
                REQUIRE(xi_rhs_mn(m, n, 1, c).exact == selberg_rhs(m, n, c).exact);

    CHECK(xi_rhs_mn(3, 5, 2, 7).exact == kloosterman(15, 2, 7).exact);
    CHECK(xi_rhs_mk(3, 5, 2, 7).exact == kloosterman(6, 5, 7).exact);

    const auto brute = reduce(from_counts(4, oracle::xi_double_loop(2, 2, 1, 4)));
    CHECK(xi_rhs_mn(2, 2, 1, 4).exact == brute);
    CHECK(xi_rhs_mk(2, 2, 1, 4).exact == brute);
    CHECK(near(xi_rhs_mn(2, 2, 1, 4).approx, oracle::xi(2, 2, 1, 4), 1e-12));
}

TEST_CASE("kloosterman symmetry in m and n for c <= 60") {
    for (i64 c = 1; c <= 60; ++c)
        for (i64 m = 0; m < c; ++m)
            for (i64 n = m + 1; n < c; ++n)
                REQUIRE(equal_exact(*kloosterman(m, n, c).exact, *kloosterman(n, m, c).exact));
}

TEST_CASE("Weil bound for primes below 100") {
    for (i64 p = 2; p < 100; ++p) {
        if (!is_prime(u64(p)))
            continue;
        for (i64 m = 1; m < p; ++m)
            for (i64 n = 1; n < p; ++n)
                REQUIRE(std::abs(kloosterman(m, n, p, {.exact = false}).approx) <= 2 * std::sqrt(double(p)) + 1e-6);
    }
}
