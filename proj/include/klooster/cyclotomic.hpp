#pragma once

#include "klooster/modarith.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace klooster {

using BigInt = boost::multiprecision::cpp_int;

/// Dense integer polynomial, coefficient i multiplies x^i.
using IntPoly = std::vector<i64>;

/// Unreduced value sum_j counts[j] * zeta_c^j.
struct ExponentHistogram {
    i64 modulus = 1;
    std::vector<i64> counts;

    ExponentHistogram() : counts(1, 0) {}
    explicit ExponentHistogram(i64 c);

    void add(i64 exponent, i64 count = 1) { counts[std::size_t(klooster::mod(exponent, modulus))] += count; }
    i64 total() const;
};

/// Canonical element of Z[zeta_c]: power-basis coefficients modulo Phi_c.
class CyclotomicInteger {
public:
    CyclotomicInteger() : CyclotomicInteger(1) {}
    explicit CyclotomicInteger(i64 c);
    CyclotomicInteger(i64 c, std::vector<BigInt> coeffs);

    static CyclotomicInteger from_integer(i64 c, const BigInt& k);

    i64 modulus() const { return modulus_; }
    const std::vector<BigInt>& coeffs() const { return coeffs_; }
    std::size_t degree() const { return coeffs_.size(); }

    bool is_zero() const;
    /// The rational integer k when the value is k * 1.
    bool is_rational_integer() const;

    std::string to_string() const;

    friend bool operator==(const CyclotomicInteger&, const CyclotomicInteger&) = default;

private:
    i64 modulus_;
    std::vector<BigInt> coeffs_;
};

/// Coefficients of Phi_c, memoized process-wide; safe to call concurrently.
std::shared_ptr<const IntPoly> cyclotomic_poly(i64 c);

CyclotomicInteger reduce(const ExponentHistogram& h);
/// Reduces sum_j coeffs[j] zeta_c^j for a length-c coefficient vector.
CyclotomicInteger reduce(i64 c, std::vector<BigInt> coeffs);

/// Image under zeta_{c'} -> zeta_c^{c/c'}. Throws NotDivisor unless v.modulus() | target.
CyclotomicInteger lift(const CyclotomicInteger& v, i64 target);

/// Multiplication by the root of unity zeta_c^shift.
CyclotomicInteger rotate(const CyclotomicInteger& v, i64 shift);

CyclotomicInteger add(const CyclotomicInteger& x, const CyclotomicInteger& y);
CyclotomicInteger sub(const CyclotomicInteger& x, const CyclotomicInteger& y);
CyclotomicInteger scale(const BigInt& k, const CyclotomicInteger& x);

/// Throws ModulusMismatch when the moduli differ; lift first.
bool equal_exact(const CyclotomicInteger& x, const CyclotomicInteger& y);

std::complex<double> to_complex(const CyclotomicInteger& v);
std::complex<double> to_complex(const ExponentHistogram& h);

} // namespace klooster
