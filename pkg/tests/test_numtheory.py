from __future__ import annotations

from math import gcd, isqrt

import pytest
from hypothesis import given
from hypothesis import strategies as st

from maxdet.numtheory import (
    factorize,
    field,
    is_prime,
    is_self_conjugate,
    is_square,
    legendre,
    multiplicative_order,
    prime_power,
    primes_up_to,
    solve_c27d,
    squarefree_split,
    sum_two_squares,
    SUPPORTED_PRIME_POWERS,
)


def trial_primes(n):
    return [p for p in range(2, n + 1) if all(p % d for d in range(2, isqrt(p) + 1))]


def test_primes_up_to():
    assert primes_up_to(1000) == trial_primes(1000)
    assert [p for p in range(2000) if is_prime(p)] == trial_primes(1999)


def test_large_primes():
    assert is_prime(2**61 - 1)
    assert not is_prime(2**61 + 1)
    assert not is_prime(3215031751)  # strong pseudoprime to bases 2, 3, 5, 7


@given(st.integers(1, 10**12))
def test_factorize_product(n):
    f = factorize(n)
    prod = 1
    for p, e in f.factors:
        assert is_prime(p)
        prod *= p**e
    assert prod == n


@given(st.integers(1, 10**9))
def test_squarefree_split(n):
    s, t = squarefree_split(n)
    assert s * s * t == n
    assert all(e == 1 for _, e in factorize(t).factors)


@given(st.integers(-500, 500), st.sampled_from(trial_primes(200)[1:]))
def test_legendre_euler(a, p):
    e = pow(a, (p - 1) // 2, p)
    assert legendre(a, p) == {0: 0, 1: 1, p - 1: -1}[e]


def test_sum_two_squares():
    reps = {a * a + b * b for a in range(60) for b in range(60)}
    for n in range(1, 3000):
        ok, ab = sum_two_squares(n)
        assert ok == (n in reps)
        if ok:
            assert ab[0] ** 2 + ab[1] ** 2 == n


def test_order_and_self_conjugacy():
    assert multiplicative_order(2, 7) == 3
    assert multiplicative_order(3, 7) == 6
    assert is_self_conjugate(2, 3)  # 2 = -1 mod 3
    assert not is_self_conjugate(2, 7)  # 2 has odd order mod 7
    for q in (2, 5, 11):
        brute = any(pow(q, t, 9) == 8 for t in range(1, 9))
        assert is_self_conjugate(q, 3, 2) == brute


def test_c27d():
    for p in primes_up_to(400):
        if p % 3 == 1:
            r = solve_c27d(p)
            assert r.c * r.c + 27 * r.d * r.d == 4 * p and r.c % 3 == 1


def test_is_square():
    assert [n for n in range(50) if is_square(n)] == [0, 1, 4, 9, 16, 25, 36, 49]


@pytest.mark.parametrize("q", [2, 3, 5, 7, *SUPPORTED_PRIME_POWERS])
def test_finite_fields(q):
    assert prime_power(q) is not None
    f = field(q)
    els = list(f.elements())
    for x in els:
        assert f.add[x][f.neg(x)] == 0
        if x:
            assert f.mul[x][f.inv(x)] == 1
    # the multiplicative group is cyclic, generated by gamma
    assert len({f.exp(k) for k in range(q - 1)}) == q - 1
    assert sum(f.is_square(x) for x in els if x) == ((q - 1) // 2 if q % 2 else q - 1)


def test_prime_power_rejects():
    assert prime_power(6) is None
    assert prime_power(12) is None
    assert gcd(*prime_power(49)) >= 1
