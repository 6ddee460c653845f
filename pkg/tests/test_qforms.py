from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from itertools import product

import pytest

from maxdet.numtheory import primes_up_to, squarefree_split
from maxdet.qforms import (
    INFINITY,
    QuadForm,
    Verdict,
    alpha_beta_form,
    alpha_beta_invariant,
    hilbert_local,
    hm_invariant,
    is_rational_gram,
    odd_symbol_failure,
    pall_invariant,
    polarize,
    relevant_places,
)


def _sqfree(a: int) -> int:
    s = 1 if a > 0 else -1
    return s * squarefree_split(abs(a))[1]


@lru_cache(maxsize=None)
def hilbert_bruteforce(a: int, b: int, p: int) -> int:
    """+1 iff z^2 = a x^2 + b y^2 has a primitive solution modulo a high power of p."""
    a, b = _sqfree(a), _sqfree(b)
    mod = p**3 if p > 2 else 2**6
    squares = {}
    for z in range(mod):
        squares.setdefault(z * z % mod, []).append(z)
    for x, y in product(range(mod), repeat=2):
        t = (a * x * x + b * y * y) % mod
        for z in squares.get(t, ()):
            if x % p or y % p or z % p:
                return 1
    return -1


def random_nonzero(rng, bound=60):
    while True:
        a = rng.randint(-bound, bound)
        if a:
            return a


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_hilbert_matches_bruteforce(p):
    vals = [a for a in range(-15, 16) if a and _sqfree(a) == a]
    for a in vals:
        for b in vals:
            assert hilbert_local(a, b, p) == hilbert_bruteforce(a, b, p), (a, b, p)


def test_hilbert_reciprocity_500_pairs():
    rng = random.Random(1)
    for _ in range(500):
        a = Fraction(random_nonzero(rng, 10**4), rng.randint(1, 50))
        b = Fraction(random_nonzero(rng, 10**4), rng.randint(1, 50))
        prod = 1
        for v in relevant_places(a, b):
            prod *= hilbert_local(a, b, v)
        assert prod == 1


def test_hilbert_basic_identities():
    rng = random.Random(2)
    for _ in range(200):
        a, b, c = (random_nonzero(rng) for _ in range(3))
        for v in (INFINITY, 2, 3, 5, 7, 11):
            assert hilbert_local(a, b, v) == hilbert_local(b, a, v)
            assert hilbert_local(a, -a, v) == 1
            assert hilbert_local(a, b * c, v) == hilbert_local(a, b, v) * hilbert_local(a, c, v)
            assert hilbert_local(a * 49, b, v) == hilbert_local(a, b, v)


def random_unimodular(rng, n):
    """Product of elementary integer matrices and signed permutations."""
    t = [[int(i == j) for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2)
        c = rng.randint(-3, 3)
        for r in range(n):
            t[r][j] += c * t[r][i]
    return t


def random_rational_invertible(rng, n):
    while True:
        t = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(n)] for _ in range(n)]
        if QuadForm.of([[sum(t[k][i] * t[k][j] for k in range(n)) for j in range(n)] for i in range(n)]).det() != 0:
            return t


def random_pd_form(rng, n):
    m = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        m[i][i] += 9
    return QuadForm.of([[sum(m[i][k] * m[j][k] for k in range(n)) + (i == j) * rng.randint(1, 5) for j in range(n)] for i in range(n)])


def test_congruence_invariance_100_transforms():
    rng = random.Random(3)
    for _ in range(100):
        n = rng.randint(2, 5)
        q = random_pd_form(rng, n)
        t = random_rational_invertible(rng, n)
        q2 = q.congruent(t)
        d1, d2 = polarize(q), polarize(q2)
        places = relevant_places(*d1.diag, *d2.diag)
        for v in places:
            assert hm_invariant(d1, v) == hm_invariant(d2, v)
            assert pall_invariant(q, v) == pall_invariant(q2, v)


def test_polarize_is_a_congruence():
    rng = random.Random(4)
    for _ in range(30):
        q = random_pd_form(rng, 4)
        d = polarize(q)
        assert d.transform is not None
        back = q.congruent(d.transform)
        assert [back.entries[i][i] for i in range(4)] == list(d.diag)
        assert all(back.entries[i][j] == 0 for i in range(4) for j in range(4) if i != j)


def test_pall_and_hm_agree_for_square_determinant():
    # for positive-definite A with square determinant the two invariants coincide at odd primes
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(2, 5)
        m = [[rng.randint(-4, 4) + 7 * (i == j) for j in range(n)] for i in range(n)]
        q = QuadForm.of([[sum(m[i][k] * m[j][k] for k in range(n)) for j in range(n)] for i in range(n)])
        d = polarize(q)
        for v in relevant_places(*d.diag)[2:]:
            assert pall_invariant(q, v) == hm_invariant(d, v)


def test_pall_identity_at_odd_primes():
    for n in range(1, 7):
        q = QuadForm.of([[int(i == j) for j in range(n)] for i in range(n)])
        assert all(pall_invariant(q, p) == 1 for p in (3, 5, 7, 11))
        # the leading factor (-1, -1) survives at 2 and at infinity
        assert pall_invariant(q, 2) == pall_invariant(q, INFINITY) == -1


def test_invariants_of_plane_order_six():
    # the order-6 projective plane Gram 6 I + J at v = 43: the 3-adic invariant disagrees with the identity's
    form = alpha_beta_form(6, 1, 43)
    assert alpha_beta_invariant(6, 1, 43, 3) == pall_invariant(form, 3) == -1


def test_pall_rejects_indefinite():
    with pytest.raises(ValueError):
        pall_invariant(QuadForm.of([[1, 0], [0, -1]]), 3)


@pytest.mark.parametrize("d", range(1, 9))
def test_alpha_beta_closed_form(d):
    for alpha, beta in ((3, 1), (5, 2), (6, -1), (7, 3), (2, 1)):
        if alpha + beta * d <= 0:
            continue
        dform = polarize(alpha_beta_form(alpha, beta, d))
        for v in relevant_places(alpha, beta, d, alpha + beta * d, d - 1 if d > 1 else 1):
            assert alpha_beta_invariant(alpha, beta, d, v) == hm_invariant(dform, v), (alpha, beta, d, v)


def test_rational_gram_decisions():
    # 2 I_1 is not a rational Gram (det not a square); 2 I_2 = M M^t with M = [[1,1],[1,-1]]
    assert is_rational_gram(QuadForm.of([[2]])).verdict is Verdict.INFEASIBLE
    assert is_rational_gram(QuadForm.of([[2, 0], [0, 2]])).verdict is Verdict.FEASIBLE
    # 3 I_4 = M M^t via quaternion multiplication, but 3 I_2 has (3,3)_3 = -1
    assert is_rational_gram(QuadForm.of([[3 if i == j else 0 for j in range(4)] for i in range(4)])).verdict is Verdict.FEASIBLE
    rep = is_rational_gram(QuadForm.of([[3, 0], [0, 3]]))
    assert rep.verdict is Verdict.INFEASIBLE and rep.reason.data["prime"] == 3


def test_hm_small_examples():
    assert hm_invariant([3, 3], 3) == -1
    assert all(hm_invariant([1] * 5, v) == 1 for v in (INFINITY, 2, 3, 5))
    for d in range(1, 11):
        dform = polarize(alpha_beta_form(1, 1, d))
        for p in primes_up_to(50):
            assert hm_invariant(dform, p) == hilbert_local(d, d + 1, p)


def test_odd_symbol_failure():
    assert odd_symbol_failure(6, -1) == 3
    assert odd_symbol_failure(5, -1) is None
    for p in primes_up_to(60)[1:]:
        assert (odd_symbol_failure(p, -1) == p) == (p % 4 == 3)
