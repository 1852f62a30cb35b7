#include "klooster/cyclotomic.hpp"

#include "klooster/error.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <shared_mutex>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <utility>

namespace klooster {

ExponentHistogram::ExponentHistogram(i64 c) : modulus(c), counts(std::size_t(c), 0) {
    if (c < 1)
        throw OutOfRange("ExponentHistogram: modulus must be positive");
}

i64 ExponentHistogram::total() const {
    i64 t = 0;
    for (i64 v : counts)
        t += v;
    return t;
}

CyclotomicInteger::CyclotomicInteger(i64 c) : modulus_(c) {
    if (c < 1)
        throw OutOfRange("CyclotomicInteger: modulus must be positive");
    coeffs_.assign(std::size_t(euler_phi(u64(c))), BigInt(0));
}

CyclotomicInteger::CyclotomicInteger(i64 c, std::vector<BigInt> coeffs)
    : modulus_(c), coeffs_(std::move(coeffs)) {
    if (c < 1)
        throw OutOfRange("CyclotomicInteger: modulus must be positive");
    if (coeffs_.size() != euler_phi(u64(c)))
        throw OutOfRange("CyclotomicInteger: expected phi(c) coefficients");
}

CyclotomicInteger CyclotomicInteger::from_integer(i64 c, const BigInt& k) {
    CyclotomicInteger v(c);
    v.coeffs_[0] = k;
    return v;
}

bool CyclotomicInteger::is_zero() const {
    for (const auto& a : coeffs_)
        if (a != 0)
            return false;
    return true;
}

bool CyclotomicInteger::is_rational_integer() const {
    for (std::size_t i = 1; i < coeffs_.size(); ++i)
        if (coeffs_[i] != 0)
            return false;
    return true;
}

std::string CyclotomicInteger::to_string() const {
    std::ostringstream os;
    os << "mod " << modulus_ << " [";
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        os << (i ? "," : "") << coeffs_[i];
    os << "]";
    return os.str();
}

namespace {

IntPoly checked_div_exact(IntPoly num, const IntPoly& den) {
    // den is monic; num is divisible by den over Z.
    const std::size_t k = den.size() - 1;
    const std::size_t n = num.size() - 1;
    IntPoly q(n - k + 1, 0);
    for (std::size_t i = n + 1; i-- > k;) {
        const i64 lead = num[i];
        q[i - k] = lead;
        if (lead == 0)
            continue;
        for (std::size_t j = 0; j <= k; ++j) {
            if (den[j] == 0)
                continue;
            i64 prod;
            if (__builtin_mul_overflow(lead, den[j], &prod) ||
                __builtin_sub_overflow(num[i - k + j], prod, &num[i - k + j]))
                throw std::overflow_error("cyclotomic_poly: coefficient overflow");
        }
    }
    for (std::size_t i = 0; i < k; ++i)
        if (num[i] != 0)
            throw std::logic_error("cyclotomic_poly: inexact division");
    return q;
}

IntPoly compute_cyclotomic(i64 c) {
    if (c == 1)
        return {-1, 1};
    auto f = factorize(u64(c));
    if (!f.squarefree()) {
        // Phi_c(x) = Phi_r(x^{c/r}) with r the radical of c.
        i64 r = 1;
        for (const auto& pp : f.factors)
            r *= i64(pp.prime);
        const i64 stretch = c / r;
        auto base = cyclotomic_poly(r);
        IntPoly out(std::size_t((base->size() - 1) * stretch + 1), 0);
        for (std::size_t i = 0; i < base->size(); ++i)
            out[i * std::size_t(stretch)] = (*base)[i];
        return out;
    }
    IntPoly p(std::size_t(c) + 1, 0);
    p[0] = -1;
    p[std::size_t(c)] = 1;
    for (u64 d : divisors(f)) {
        if (i64(d) == c)
            break;
        p = checked_div_exact(std::move(p), *cyclotomic_poly(i64(d)));
    }
    return p;
}

struct PolyCache {
    std::shared_mutex mu;
    std::unordered_map<i64, std::shared_ptr<const IntPoly>> table;
};

PolyCache& poly_cache() {
    static PolyCache cache;
    return cache;
}

struct Term {
    std::size_t index;
    i64 coeff;
};

std::vector<Term> lower_terms(const IntPoly& phi) {
    std::vector<Term> t;
    for (std::size_t i = 0; i + 1 < phi.size(); ++i)
        if (phi[i] != 0)
            t.push_back({i, phi[i]});
    return t;
}

// Remainder of w modulo monic phi, in place. Returns false on int64 overflow.
bool reduce_checked(std::vector<i64>& w, const IntPoly& phi) {
    const std::size_t deg = phi.size() - 1;
    const auto terms = lower_terms(phi);
    for (std::size_t j = w.size(); j-- > deg;) {
        const i64 lead = w[j];
        if (lead == 0)
            continue;
        w[j] = 0;
        const std::size_t shift = j - deg;
        for (const auto& t : terms) {
            i64 prod;
            if (__builtin_mul_overflow(lead, t.coeff, &prod) ||
                __builtin_sub_overflow(w[shift + t.index], prod, &w[shift + t.index]))
                return false;
        }
    }
    return true;
}

void reduce_big(std::vector<BigInt>& w, const IntPoly& phi) {
    const std::size_t deg = phi.size() - 1;
    const auto terms = lower_terms(phi);
    for (std::size_t j = w.size(); j-- > deg;) {
        if (w[j] == 0)
            continue;
        const BigInt lead = w[j];
        w[j] = 0;
        const std::size_t shift = j - deg;
        for (const auto& t : terms)
            w[shift + t.index] -= lead * t.coeff;
    }
}

CyclotomicInteger reduce_small(i64 c, std::vector<i64> w) {
    const auto phi = cyclotomic_poly(c);
    const std::size_t deg = phi->size() - 1;
    std::vector<i64> backup = w;
    if (reduce_checked(w, *phi)) {
        std::vector<BigInt> out(w.begin(), w.begin() + std::ptrdiff_t(deg));
        return CyclotomicInteger(c, std::move(out));
    }
    std::vector<BigInt> big(backup.begin(), backup.end());
    reduce_big(big, *phi);
    big.resize(deg);
    return CyclotomicInteger(c, std::move(big));
}

std::complex<double> root(i64 j, i64 c) {
    const double angle = 2.0 * std::numbers::pi * double(j) / double(c);
    return {std::cos(angle), std::sin(angle)};
}

} // namespace

std::shared_ptr<const IntPoly> cyclotomic_poly(i64 c) {
    if (c < 1)
        throw OutOfRange("cyclotomic_poly: c must be positive");
    auto& cache = poly_cache();
    {
        std::shared_lock lock(cache.mu);
        auto it = cache.table.find(c);
        if (it != cache.table.end())
            return it->second;
    }
    // Computed outside the lock: the recursion re-enters the cache.
    auto poly = std::make_shared<const IntPoly>(compute_cyclotomic(c));
    std::unique_lock lock(cache.mu);
    return cache.table.emplace(c, std::move(poly)).first->second;
}

CyclotomicInteger reduce(const ExponentHistogram& h) {
    if (std::ssize(h.counts) != h.modulus)
        throw OutOfRange("reduce: histogram length must equal its modulus");
    return reduce_small(h.modulus, h.counts);
}

CyclotomicInteger reduce(i64 c, std::vector<BigInt> coeffs) {
    if (c < 1)
        throw OutOfRange("reduce: modulus must be positive");
    if (std::ssize(coeffs) > c)
        throw OutOfRange("reduce: more coefficients than the modulus");
    coeffs.resize(std::size_t(c), BigInt(0));
    bool fits = true;
    std::vector<i64> small(coeffs.size());
    for (std::size_t i = 0; i < coeffs.size() && fits; ++i) {
        if (coeffs[i] > std::numeric_limits<i64>::max() || coeffs[i] < std::numeric_limits<i64>::min())
            fits = false;
        else
            small[i] = static_cast<i64>(coeffs[i]);
    }
    if (fits)
        return reduce_small(c, std::move(small));
    const auto phi = cyclotomic_poly(c);
    reduce_big(coeffs, *phi);
    coeffs.resize(phi->size() - 1);
    return CyclotomicInteger(c, std::move(coeffs));
}

CyclotomicInteger lift(const CyclotomicInteger& v, i64 target) {
    if (target < 1 || target % v.modulus() != 0)
        throw NotDivisor("lift: " + std::to_string(v.modulus()) + " does not divide " +
                         std::to_string(target));
    if (target == v.modulus())
        return v;
    const std::size_t stride = std::size_t(target / v.modulus());
    std::vector<BigInt> spread(std::size_t(target), BigInt(0));
    for (std::size_t j = 0; j < v.coeffs().size(); ++j)
        spread[j * stride] = v.coeffs()[j];
    return reduce(target, std::move(spread));
}

CyclotomicInteger rotate(const CyclotomicInteger& v, i64 shift) {
    const i64 c = v.modulus();
    std::vector<BigInt> spread(std::size_t(c), BigInt(0));
    for (std::size_t j = 0; j < v.coeffs().size(); ++j)
        spread[std::size_t(mod(i128(j) + shift, c))] = v.coeffs()[j];
    return reduce(c, std::move(spread));
}

namespace {

void require_same_modulus(const CyclotomicInteger& x, const CyclotomicInteger& y, const char* op) {
    if (x.modulus() != y.modulus())
        throw ModulusMismatch(std::string(op) + ": moduli " + std::to_string(x.modulus()) + " and " +
                              std::to_string(y.modulus()) + " differ");
}

} // namespace

CyclotomicInteger add(const CyclotomicInteger& x, const CyclotomicInteger& y) {
    require_same_modulus(x, y, "add");
    std::vector<BigInt> out = x.coeffs();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] += y.coeffs()[i];
    return CyclotomicInteger(x.modulus(), std::move(out));
}

CyclotomicInteger sub(const CyclotomicInteger& x, const CyclotomicInteger& y) {
    require_same_modulus(x, y, "sub");
    std::vector<BigInt> out = x.coeffs();
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] -= y.coeffs()[i];
    return CyclotomicInteger(x.modulus(), std::move(out));
}

CyclotomicInteger scale(const BigInt& k, const CyclotomicInteger& x) {
    std::vector<BigInt> out = x.coeffs();
    for (auto& a : out)
        a *= k;
    return CyclotomicInteger(x.modulus(), std::move(out));
}

bool equal_exact(const CyclotomicInteger& x, const CyclotomicInteger& y) {
    require_same_modulus(x, y, "equal_exact");
    return x.coeffs() == y.coeffs();
}

std::complex<double> to_complex(const CyclotomicInteger& v) {
    std::complex<double> z{0.0, 0.0};
    for (std::size_t j = 0; j < v.coeffs().size(); ++j) {
        if (v.coeffs()[j] == 0)
            continue;
        z += v.coeffs()[j].convert_to<double>() * root(i64(j), v.modulus());
    }
    return z;
}

std::complex<double> to_complex(const ExponentHistogram& h) {
    std::complex<double> z{0.0, 0.0};
    for (std::size_t j = 0; j < h.counts.size(); ++j)
        if (h.counts[j] != 0)
            z += double(h.counts[j]) * root(i64(j), h.modulus);
    return z;
}

} // namespace klooster
