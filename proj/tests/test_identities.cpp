#include "oracles.hpp"

#include "klooster/error.hpp"
#include "klooster/identities.hpp"

#include <doctest.h>

using namespace klooster;

namespace {

bool same_reports(const std::vector<IdentityReport>& a, const std::vector<IdentityReport>& b) {
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto &x = a[i].params, &y = b[i].params;
        if (x.m != y.m || x.n != y.n || x.k != y.k || x.c != y.c || a[i].lhs.exact != b[i].lhs.exact)
            return false;
    }
    return true;
}

} // namespace

TEST_CASE("parse_identity round-trips") {
    for (auto id : {IdentityId::selberg, IdentityId::xi_selberg_mn, IdentityId::xi_selberg_mk,
                    IdentityId::xi_symmetry, IdentityId::xi_reduces_to_s, IdentityId::twisted_candidate})
        CHECK(parse_identity(to_string(id)) == id);
    CHECK_FALSE(parse_identity("nonsense").has_value());
}

TEST_CASE("verify_selberg examples") {
    const auto r = verify_selberg(2, 2, 2);
    CHECK(r.status == Status::pass);
    CHECK(r.exact_equal);
    CHECK(r.backend == Backend::exact);
    CHECK(r.lhs.exact == CyclotomicInteger::from_integer(2, 1));

    const auto z = verify_selberg(0, 0, 12);
    CHECK(z.status == Status::pass);
    CHECK(z.lhs.exact == CyclotomicInteger::from_integer(12, 4));

    // Reports always carry the governing c and the reduced arguments.
    const auto big = verify_selberg(25, -1, 12);
    CHECK(big.params.c == 12);
    CHECK(big.status == Status::pass);
}

TEST_CASE("report invariant: exact verdicts match float difference") {
    for (i64 c = 1; c <= 20; ++c)
        for (i64 m = 0; m < c; ++m)
            for (i64 n = 0; n < c; ++n) {
                const auto r = verify_selberg(m, n, c);
                REQUIRE(r.exact_equal == (r.status == Status::pass));
                REQUIRE(r.abs_diff <= 1e-9 * double(c));
            }
}

TEST_CASE("float backend") {
    VerifyOptions opts;
    opts.backend = Backend::float_;
    const auto r = verify_selberg(6, 10, 12, opts);
    CHECK(r.backend == Backend::float_);
    CHECK(r.status == Status::pass);
    CHECK(r.abs_diff < 1e-9);
    CHECK(std::abs(r.lhs.approx - std::complex<double>(-2.0, 0.0)) < 1e-9);

    // The float backend works past the exact degree cap.
    CHECK(verify_selberg(3, 9, 2 * 3 * 3 * 1009, opts).status == Status::pass);
}

TEST_CASE("exact backend refuses when the field is too large") {
    CHECK_THROWS_AS(verify_selberg(1, 1, 10007), ExactUnavailable);
    VerifyOptions opts;
    opts.sums.exact_degree_cap = 4;
    CHECK_THROWS_AS(verify_selberg(1, 1, 7, opts), ExactUnavailable);
}

TEST_CASE("xi verifiers") {
    const auto both = verify_xi_selberg(2, 2, 1, 4);
    CHECK(both[0].id == IdentityId::xi_selberg_mn);
    CHECK(both[1].id == IdentityId::xi_selberg_mk);
    CHECK(both[0].status == Status::pass);
    CHECK(both[1].status == Status::pass);

    for (const auto& r : verify_xi_selberg(2, 4, 2, 4))
        CHECK(r.status == Status::pass);
    for (i64 c = 1; c <= 12; ++c)
        for (const auto& r : verify_xi_selberg(0, 0, 0, c))
            CHECK(r.status == Status::pass);
    const auto k1 = verify_xi_selberg(3, 5, 1, 9)[0];
    CHECK(k1.lhs.exact == verify_selberg(3, 5, 9).lhs.exact);
    CHECK(k1.rhs.exact == verify_selberg(3, 5, 9).rhs.exact);

    const auto sym = verify_xi_symmetry(1, 2, 3, 5);
    CHECK(sym.status == Status::pass);
    CHECK(std::abs(sym.lhs.approx - std::complex<double>(0.381966011250105, 0)) < 1e-9);
    CHECK(verify_xi_symmetry(0, 1, 2, 4).lhs.exact == CyclotomicInteger::from_integer(4, -2));

    const auto one = verify_xi_reduces_to_s(3, 4, 12);
    CHECK(one.status == Status::pass);
    CHECK(one.lhs.exact->is_zero());
}

TEST_CASE("twisted candidate") {
    const auto trivial = character(1, 0);
    for (auto w : all_weights)
        CHECK(verify_twisted_candidate(trivial, w, 2, 4, 8).status == Status::pass);

    const auto chi4 = character(4, 1);
    const auto r = verify_twisted_candidate(chi4, Weight::one, 1, 0, 4);
    CHECK(std::abs(r.lhs.approx - std::complex<double>(0, 2)) < 1e-12);
    REQUIRE(r.params.chi.has_value());
    CHECK(r.params.chi->modulus == 4);
    CHECK(r.params.weight == Weight::one);
    CHECK_THROWS_AS(verify_twisted_candidate(chi4, Weight::chi, 1, 1, 6), ModulusIncompatible);
}

TEST_CASE("proof trace examples") {
    for (double s : proof_trace_selberg(1, 1, 1).stages)
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    for (double s : proof_trace_selberg(2, 2, 2).stages)
        CHECK(s == doctest::Approx(1.0).epsilon(1e-12));

    const auto t = proof_trace_selberg(1, 1, 5);
    for (double s : t.stages)
        CHECK(s == doctest::Approx(0.381966011250105).epsilon(1e-9));
    CHECK(t.max_deviation < 1e-9);

    const auto u = proof_trace_selberg(6, 10, 12);
    for (double s : u.stages)
        CHECK(s == doctest::Approx(-2.0).epsilon(1e-9));

    const auto v = proof_trace_selberg(3, 4, 12);
    for (double s : v.stages)
        CHECK(std::abs(s) < 1e-9);

    CHECK_NOTHROW(proof_trace_selberg(1, 1, 30));
    CHECK_THROWS_AS(proof_trace_selberg(1, 1, 31), TraceCapExceeded);
    CHECK_THROWS_AS(proof_trace_selberg(1, 1, 0), TraceCapExceeded);
    CHECK_NOTHROW(proof_trace_selberg(1, 1, 40, 40));
}

TEST_CASE("proof trace stages agree for c <= 20") {
    for (i64 c = 1; c <= 20; ++c)
        for (i64 m = 0; m < c; m += 3)
            for (i64 n = 0; n < c; n += 2) {
                const auto t = proof_trace_selberg(m, n, c);
                REQUIRE(t.max_deviation < 1e-6);
                REQUIRE(std::abs(t.stages[0] - oracle::kloosterman(m, n, c).real()) < 1e-9);
            }
}

TEST_CASE("sweeps") {
    SweepRanges empty;
    empty.c_max = 0;
    const auto none = sweep(IdentityId::selberg, empty);
    CHECK(none.total_cases == 0);
    CHECK(none.failures.empty());

    SweepRanges r;
    r.c_max = 12;
    const auto s = sweep(IdentityId::selberg, r);
    i64 expected = 0;
    for (i64 c = 1; c <= 12; ++c)
        expected += c * c;
    CHECK(s.total_cases == expected);
    CHECK(s.failures.empty());

    r.nontrivial_gcd_only = true;
    const auto g = sweep(IdentityId::selberg, r);
    CHECK(g.total_cases + g.filtered == expected);
    CHECK(g.total_cases < expected);

    SweepRanges x;
    x.c_min = 5;
    x.c_max = 9;
    for (auto id : {IdentityId::xi_selberg_mn, IdentityId::xi_selberg_mk, IdentityId::xi_symmetry}) {
        const auto out = sweep(id, x);
        CHECK(out.total_cases == 125 + 216 + 343 + 512 + 729);
        CHECK(out.failures.empty());
    }
}

TEST_CASE("sweep output does not depend on the number of jobs") {
    SweepRanges r;
    r.c_max = 16;
    r.chi_modulus = 4;
    const auto one = sweep(IdentityId::twisted_candidate, r, 1);
    const auto many = sweep(IdentityId::twisted_candidate, r, 8);
    CHECK(one.total_cases == many.total_cases);
    CHECK(one.filtered == many.filtered);
    CHECK(same_reports(one.failures, many.failures));
    CHECK_FALSE(one.failures.empty());
}

TEST_CASE("twisted explorer") {
    const auto principal = explore_twisted(1, 1, 20, 2);
    REQUIRE(principal.tallies.size() == 3);
    for (const auto& t : principal.tallies) {
        CHECK(t.fails == 0);
        CHECK(t.holds == principal.cases);
    }
    CHECK(principal.counterexamples.empty());

    for (i64 big_n : {3, 4, 5}) {
        const auto e1 = explore_twisted(big_n, 1, 40, 1, 5);
        const auto e4 = explore_twisted(big_n, 1, 40, 4, 5);
        CHECK(e1.tallies.size() == 3 * std::size_t(oracle::count_coprime(big_n)));
        for (std::size_t i = 0; i < e1.tallies.size(); ++i) {
            CHECK(e1.tallies[i].holds + e1.tallies[i].fails == e1.cases);
            CHECK(e1.tallies[i].holds == e4.tallies[i].holds);
        }
        CHECK(e1.counterexamples.size() <= 5);
        CHECK(same_reports(e1.counterexamples, e4.counterexamples));
    }
}
