#include "klooster/sums.hpp"

#include "klooster/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace klooster {

namespace {

void require_modulus(i64 c, const char* op) {
    if (c < 1)
        throw OutOfRange(std::string(op) + ": modulus must be positive, got " + std::to_string(c));
}

SumValue finish(const ExponentHistogram& h, const SumOptions& opts) {
    SumValue v;
    v.field_modulus = h.modulus;
    v.terms = h.total();
    v.approx = to_complex(h);
    if (opts.exact && i64(euler_phi(u64(h.modulus))) <= opts.exact_degree_cap)
        v.exact = reduce(h);
    return v;
}

// S(m, n; q) summed directly in double precision.
std::complex<double> kloosterman_float_direct(i64 m, i64 n, i64 q) {
    double re = 0.0, im = 0.0;
    for (i64 a = 0; a < q; ++a) {
        if (gcd(a, q) != 1)
            continue;
        const i64 j = mod(i128(m) * a + i128(n) * mod_inverse(a, q), q);
        const double angle = 2.0 * std::numbers::pi * double(j) / double(q);
        re += std::cos(angle);
        im += std::sin(angle);
    }
    return {re, im};
}

// sum_{d | g} d * term(d), each term at modulus c/d lifted to modulus c.
template <class Term>
SumValue divisor_sum(i64 g, i64 c, const SumOptions& opts, Term term) {
    SumValue out;
    out.field_modulus = c;
    const bool exact = opts.exact && i64(euler_phi(u64(c))) <= opts.exact_degree_cap;
    if (exact)
        out.exact = CyclotomicInteger(c);
    for (i64 d : divisors(g)) {
        SumValue t = term(d);
        out.approx += double(d) * t.approx;
        out.terms += t.terms;
        if (exact)
            out.exact = add(*out.exact, scale(BigInt(d), lift(*t.exact, c)));
    }
    return out;
}

// (a/d)(b/d) reduced modulo c/d.
i64 quotient_product(i64 a, i64 b, i64 d, i64 c) { return mod(i128(a / d) * (b / d), c / d); }

} // namespace

ExponentHistogram kloosterman_histogram(i64 m, i64 n, i64 c) {
    require_modulus(c, "kloosterman");
    m = mod(m, c);
    n = mod(n, c);
    ExponentHistogram h(c);
    for (i64 a = 0; a < c; ++a) {
        if (gcd(a, c) != 1)
            continue;
        h.counts[std::size_t(mod(i128(m) * a + i128(n) * mod_inverse(a, c), c))] += 1;
    }
    return h;
}

SumValue kloosterman(i64 m, i64 n, i64 c, const SumOptions& opts) {
    return finish(kloosterman_histogram(m, n, c), opts);
}

std::complex<double> kloosterman_crt(i64 m, i64 n, i64 c) {
    require_modulus(c, "kloosterman_crt");
    m = mod(m, c);
    n = mod(n, c);
    std::complex<double> product{1.0, 0.0};
    for (const auto& pp : factorize(u64(c)).factors) {
        i64 q = 1;
        for (int e = 0; e < pp.exponent; ++e)
            q *= i64(pp.prime);
        // S(m, n; q r) = S(m r^{-1}, n r^{-1}; q) S(m q^{-1}, n q^{-1}; r), gcd(q, r) = 1.
        const i64 cofactor_inverse = mod_inverse(c / q, q);
        product *= kloosterman_float_direct(mulmod(m, cofactor_inverse, q),
                                            mulmod(n, cofactor_inverse, q), q);
    }
    return product;
}

i64 ramanujan_closed_form(i64 m, i64 c) {
    require_modulus(c, "ramanujan");
    i64 total = 0;
    for (i64 d : divisors(gcd(m, c)))
        total += d * moebius(u64(c / d));
    return total;
}

RamanujanValue ramanujan(i64 m, i64 c, const SumOptions& opts) {
    return {kloosterman(m, 0, c, opts), ramanujan_closed_form(m, c)};
}

ExponentHistogram xi_histogram(i64 m, i64 n, i64 k, i64 c) {
    require_modulus(c, "xi_sum");
    m = mod(m, c);
    n = mod(n, c);
    k = mod(k, c);
    ExponentHistogram h(c);
    for (i64 x = 0; x < c; ++x) {
        // x y = k (mod c) is solvable iff g | k, with g solutions spaced c/g apart.
        const i64 g = gcd(x, c);
        if (k % g != 0)
            continue;
        const i64 step = c / g;
        const i64 y0 = mulmod(k / g, mod_inverse(x / g, step), step);
        const i64 base = mod(i128(m) * x + i128(n) * y0, c);
        const i64 stride = mulmod(n, step, c);
        i64 j = base;
        for (i64 t = 0; t < g; ++t) {
            h.counts[std::size_t(j)] += 1;
            j += stride;
            if (j >= c)
                j -= c;
        }
    }
    return h;
}

SumValue xi_sum(i64 m, i64 n, i64 k, i64 c, const SumOptions& opts) {
    return finish(xi_histogram(m, n, k, c), opts);
}

i64 twisted_field_modulus(const DirichletCharacter& chi, i64 c) { return lcm(c, chi.order()); }

SumValue twisted_kloosterman(const DirichletCharacter& chi, i64 m, i64 n, i64 c,
                             const SumOptions& opts) {
    require_modulus(c, "twisted_kloosterman");
    if (c % chi.modulus() != 0)
        throw ModulusIncompatible("twisted_kloosterman: character modulus " +
                                  std::to_string(chi.modulus()) + " does not divide " +
                                  std::to_string(c));
    m = mod(m, c);
    n = mod(n, c);
    const i64 field = twisted_field_modulus(chi, c);
    ExponentHistogram h(field);
    for (i64 x = 0; x < c; ++x) {
        if (gcd(x, c) != 1)
            continue;
        const RootOfUnity w = *chi.eval(x);
        const i64 j = mod(i128(m) * x + i128(n) * mod_inverse(x, c), c);
        h.add(w.num * (field / w.den) + j * (field / c));
    }
    return finish(h, opts);
}

SumValue selberg_rhs(i64 m, i64 n, i64 c, const SumOptions& opts) {
    return xi_rhs_mn(m, n, 1, c, opts);
}

SumValue xi_rhs_mn(i64 m, i64 n, i64 k, i64 c, const SumOptions& opts) {
    require_modulus(c, "xi_rhs_mn");
    m = mod(m, c);
    n = mod(n, c);
    k = mod(k, c);
    return divisor_sum(gcd(m, n, c), c, opts, [&](i64 d) {
        return kloosterman(quotient_product(m, n, d, c), k, c / d, opts);
    });
}

SumValue xi_rhs_mk(i64 m, i64 n, i64 k, i64 c, const SumOptions& opts) {
    require_modulus(c, "xi_rhs_mk");
    m = mod(m, c);
    n = mod(n, c);
    k = mod(k, c);
    return divisor_sum(gcd(m, k, c), c, opts, [&](i64 d) {
        return kloosterman(quotient_product(m, k, d, c), n, c / d, opts);
    });
}

} // namespace klooster
