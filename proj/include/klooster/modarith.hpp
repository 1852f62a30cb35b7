#pragma once

#include <cstdint>
#include <vector>

namespace klooster {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

/// Non-negative gcd; gcd(0, 0) = 0.
i64 gcd(i64 a, i64 b);
/// gcd(0, 0, c) = c, so "d | (m, n, c)" ranges over all divisors of c when m = n = 0.
i64 gcd(i64 a, i64 b, i64 c);
i64 lcm(i64 a, i64 b);

/// Canonical residue of a in [0, c).
i64 mod(i128 a, i64 c);
i64 mulmod(i64 a, i64 b, i64 c);
u64 powmod(u64 base, u64 exp, u64 c);

/// Inverse of a modulo c in [0, c); returns 0 for c = 1.
/// Throws NotInvertible when gcd(a, c) > 1.
i64 mod_inverse(i64 a, i64 c);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(u64 n);

struct PrimePower {
    u64 prime = 0;
    int exponent = 0;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

struct Factorization {
    u64 value = 1;
    std::vector<PrimePower> factors; // primes strictly increasing

    u64 expand() const;
    bool squarefree() const;
};

/// Trial division with a 2-4 wheel, plus a primality test on the cofactor.
/// Throws OutOfRange for n = 0 or n > 2^63.
Factorization factorize(u64 n);

std::vector<u64> divisors(const Factorization& f);
std::vector<i64> divisors(i64 n);

int moebius(u64 n);
u64 euler_phi(u64 n);
u64 euler_phi(const Factorization& f);

/// The x in [0, c1 c2) with x = r1 (mod c1) and x = r2 (mod c2).
/// Throws ModuliNotCoprime when gcd(c1, c2) > 1.
i64 crt_combine(i64 r1, i64 c1, i64 r2, i64 c2);

} // namespace klooster
