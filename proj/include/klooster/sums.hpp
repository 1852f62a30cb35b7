#pragma once

#include "klooster/characters.hpp"
#include "klooster/cyclotomic.hpp"

#include <complex>
#include <optional>

namespace klooster {

struct SumOptions {
    /// Skip the exact backend when phi(field modulus) exceeds this.
    i64 exact_degree_cap = 5000;
    /// Float backend only.
    bool exact = true;
};

/// Value of an exponential sum. `exact` is absent when the exact backend was skipped.
struct SumValue {
    std::optional<CyclotomicInteger> exact;
    std::complex<double> approx{0.0, 0.0};
    i64 field_modulus = 1;
    i64 terms = 0;
};

/// counts[j] = #{a unit mod c : m a + n a^{-1} = j (mod c)}.
ExponentHistogram kloosterman_histogram(i64 m, i64 n, i64 c);
/// S(m, n; c).
SumValue kloosterman(i64 m, i64 n, i64 c, const SumOptions& opts = {});

/// S(m, n; c) in double precision by multiplicativity over the prime powers of c.
std::complex<double> kloosterman_crt(i64 m, i64 n, i64 c);

/// S(m, 0; c) by direct summation, together with sum_{d | (m, c)} d mu(c / d).
struct RamanujanValue {
    SumValue sum;
    i64 closed_form = 0;
};
RamanujanValue ramanujan(i64 m, i64 c, const SumOptions& opts = {});
i64 ramanujan_closed_form(i64 m, i64 c);

/// Xi_k(m, n; c): sum over x y = k (mod c) of e((m x + n y) / c).
ExponentHistogram xi_histogram(i64 m, i64 n, i64 k, i64 c);
SumValue xi_sum(i64 m, i64 n, i64 k, i64 c, const SumOptions& opts = {});

/// S_chi(m, n; c) = sum over units x mod c of chi(x) e((m x + n x^{-1}) / c), carried in
/// Z[zeta_L] with L = lcm(c, ord chi). Throws ModulusIncompatible unless N | c.
SumValue twisted_kloosterman(const DirichletCharacter& chi, i64 m, i64 n, i64 c,
                             const SumOptions& opts = {});
i64 twisted_field_modulus(const DirichletCharacter& chi, i64 c);

/// sum_{d | (m, n, c)} d S((m/d)(n/d), 1; c/d), lifted to modulus c.
SumValue selberg_rhs(i64 m, i64 n, i64 c, const SumOptions& opts = {});
/// sum_{d | (m, n, c)} d S((m/d)(n/d), k; c/d).
SumValue xi_rhs_mn(i64 m, i64 n, i64 k, i64 c, const SumOptions& opts = {});
/// sum_{d | (m, k, c)} d S((m/d)(k/d), n; c/d).
SumValue xi_rhs_mk(i64 m, i64 n, i64 k, i64 c, const SumOptions& opts = {});

} // namespace klooster
