#include "klooster/modarith.hpp"

#include "klooster/error.hpp"

#include <algorithm>
#include <string>

namespace klooster {

i64 gcd(i64 a, i64 b) {
    u64 x = a < 0 ? u64(0) - u64(a) : u64(a);
    u64 y = b < 0 ? u64(0) - u64(b) : u64(b);
    while (y != 0) {
        u64 r = x % y;
        x = y;
        y = r;
    }
    return i64(x);
}

i64 gcd(i64 a, i64 b, i64 c) { return gcd(gcd(a, b), c); }

i64 lcm(i64 a, i64 b) {
    if (a == 0 || b == 0)
        return 0;
    i64 g = gcd(a, b);
    i64 x = a < 0 ? -a : a;
    i64 y = b < 0 ? -b : b;
    return (x / g) * y;
}

i64 mod(i128 a, i64 c) {
    i128 r = a % c;
    if (r < 0)
        r += c;
    return i64(r);
}

i64 mulmod(i64 a, i64 b, i64 c) { return mod(i128(a) * b, c); }

u64 powmod(u64 base, u64 exp, u64 c) {
    if (c == 1)
        return 0;
    u64 result = 1;
    base %= c;
    while (exp) {
        if (exp & 1)
            result = u64(u128(result) * base % c);
        base = u64(u128(base) * base % c);
        exp >>= 1;
    }
    return result;
}

i64 mod_inverse(i64 a, i64 c) {
    if (c < 1)
        throw OutOfRange("mod_inverse: modulus must be positive, got " + std::to_string(c));
    if (c == 1)
        return 0;
    i64 old_r = mod(a, c), r = c;
    i64 old_s = 1, s = 0;
    while (r != 0) {
        i64 q = old_r / r;
        i64 t = old_r - q * r;
        old_r = r;
        r = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1)
        throw NotInvertible("mod_inverse: " + std::to_string(a) + " is not a unit modulo " +
                            std::to_string(c));
    return mod(old_s, c);
}

bool is_prime(u64 n) {
    if (n < 2)
        return false;
    for (u64 p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        if (n % p == 0)
            return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // These twelve bases are sufficient for every n < 3.3 * 10^24.
    for (u64 a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1)
            continue;
        bool composite = true;
        for (int i = 1; i < s; ++i) {
            x = u64(u128(x) * x % n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite)
            return false;
    }
    return true;
}

u64 Factorization::expand() const {
    u64 v = 1;
    for (const auto& pp : factors)
        for (int i = 0; i < pp.exponent; ++i)
            v *= pp.prime;
    return v;
}

bool Factorization::squarefree() const {
    return std::all_of(factors.begin(), factors.end(),
                       [](const PrimePower& pp) { return pp.exponent == 1; });
}

namespace {

// Strips every power of p from n, recording it.
void strip(u64& n, u64 p, Factorization& f) {
    if (n % p != 0)
        return;
    int e = 0;
    while (n % p == 0) {
        n /= p;
        ++e;
    }
    f.factors.push_back({p, e});
}

} // namespace

Factorization factorize(u64 n) {
    if (n == 0)
        throw OutOfRange("factorize: n must be positive");
    if (n > (u64(1) << 63))
        throw OutOfRange("factorize: n exceeds 2^63");
    Factorization f;
    f.value = n;
    strip(n, 2, f);
    strip(n, 3, f);
    strip(n, 5, f);
    // 6k +- 1 wheel from 7: steps alternate 4, 2.
    u64 p = 7;
    bool step_four = true;
    bool cofactor_prime = n > 1 && is_prime(n);
    while (n > 1) {
        if (cofactor_prime || p > n / p) {
            f.factors.push_back({n, 1});
            break;
        }
        u64 before = n;
        strip(n, p, f);
        if (n != before)
            cofactor_prime = n > 1 && is_prime(n);
        p += step_four ? 4 : 2;
        step_four = !step_four;
    }
    return f;
}

std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> out{1};
    for (const auto& pp : f.factors) {
        std::size_t base = out.size();
        u64 power = 1;
        for (int e = 1; e <= pp.exponent; ++e) {
            power *= pp.prime;
            for (std::size_t i = 0; i < base; ++i)
                out.push_back(out[i] * power);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<i64> divisors(i64 n) {
    auto ds = divisors(factorize(u64(n)));
    return {ds.begin(), ds.end()};
}

int moebius(u64 n) {
    auto f = factorize(n);
    if (!f.squarefree())
        return 0;
    return f.factors.size() % 2 == 0 ? 1 : -1;
}

u64 euler_phi(const Factorization& f) {
    u64 phi = 1;
    for (const auto& pp : f.factors) {
        phi *= pp.prime - 1;
        for (int e = 1; e < pp.exponent; ++e)
            phi *= pp.prime;
    }
    return phi;
}

u64 euler_phi(u64 n) { return euler_phi(factorize(n)); }

i64 crt_combine(i64 r1, i64 c1, i64 r2, i64 c2) {
    if (c1 < 1 || c2 < 1)
        throw OutOfRange("crt_combine: moduli must be positive");
    if (gcd(c1, c2) != 1)
        throw ModuliNotCoprime("crt_combine: gcd(" + std::to_string(c1) + ", " +
                               std::to_string(c2) + ") > 1");
    // x = r1 + c1 * t with t = (r2 - r1) * c1^{-1} mod c2
    i64 t = mulmod(mod(i128(r2) - r1, c2), mod_inverse(c1, c2), c2);
    return mod(i128(mod(r1, c1)) + i128(c1) * t, c1 * c2);
}

} // namespace klooster
