import cmath
import math

import pytest

import klooster


def brute_kloosterman(m, n, c):
    total = 0
    for a in range(c):
        if math.gcd(a, c) == 1:
            total += cmath.exp(2j * math.pi * (m * a + n * pow(a, -1, c)) / c)
    return total


def test_kloosterman_examples():
    s = klooster.kloosterman(1, 1, 3)
    assert s.exact == klooster.CyclotomicInteger.from_integer(3, -1)
    assert abs(s.approx + 1) < 1e-12
    assert s.field_modulus == 3
    assert klooster.kloosterman(1, 1, 20011).exact is None


@pytest.mark.parametrize("c", [1, 2, 12, 35, 64])
def test_kloosterman_matches_brute_force(c):
    for m in range(0, c, 3):
        for n in range(0, c, 5):
            s = klooster.kloosterman(m, n, c)
            assert abs(s.approx - brute_kloosterman(m, n, c)) < 1e-9
            assert abs(complex(s.exact) - s.approx) < 1e-9
            assert abs(klooster.kloosterman_crt(m, n, c) - s.approx) < 1e-9


def test_cyclotomic():
    assert klooster.cyclotomic_poly(12) == [1, 0, -1, 0, 1]
    x = klooster.CyclotomicInteger(4, [0, 1])
    assert abs(complex(x) - 1j) < 1e-12
    big = klooster.CyclotomicInteger.from_integer(5, 10**30)
    assert big.coeffs[0] == 10**30
    assert (big - big).is_zero()


def test_identities():
    assert klooster.verify_selberg(2, 2, 2).passed
    assert klooster.verify_selberg(6, 10, 12, backend="float").passed
    mn, mk = klooster.verify_xi_selberg(2, 2, 1, 4)
    assert mn.passed and mk.passed
    assert klooster.verify_xi_symmetry(1, 2, 3, 5).passed
    summary = klooster.sweep("selberg", c_max=12, jobs=2)
    assert summary["total_cases"] == sum(c * c for c in range(1, 13))
    assert summary["failures"] == []


def test_characters_and_twisted():
    chars = klooster.characters(5)
    assert len(chars) == 4
    assert chars[0].is_principal()
    assert chars[1](2) == (1, 4)
    assert chars[1](5) is None
    chi = klooster.character(4, 1)
    assert abs(klooster.twisted_kloosterman(chi, 1, 0, 4).approx - 2j) < 1e-12
    ex = klooster.explore_twisted(3, c_max=30)
    assert all(t["holds"] + t["fails"] == ex["cases"] for t in ex["tallies"])


def test_ramanujan_and_trace():
    s, closed = klooster.ramanujan(2, 4)
    assert closed == -2
    assert s.exact == klooster.CyclotomicInteger.from_integer(4, -2)
    stages = klooster.proof_trace(1, 1, 5)
    assert max(stages) - min(stages) < 1e-9


def test_errors():
    with pytest.raises(klooster.KloosterError):
        klooster.mod_inverse(2, 4)
    with pytest.raises(klooster.KloosterError):
        klooster.proof_trace(1, 1, 31)
    with pytest.raises(ValueError):
        klooster.verify_selberg(1, 1, 5, backend="gmp")
