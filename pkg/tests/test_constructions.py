from __future__ import annotations

from math import comb

import numpy as np
import pytest

from maxdet.constructions import (
    ConstructionError,
    CirculantPair,
    are_orthogonal,
    barba_from_circulant_ew,
    border,
    bundled_circulant_pairs,
    bush,
    butson_2p,
    ccdl,
    circulant,
    complex_paley,
    core,
    dawson_4p,
    dawson_conditions,
    ew_from_barba,
    fourier,
    gh_field,
    gw_from_bh3,
    gw_paley,
    is_latin,
    kronecker,
    mols_from_gh,
    paley_core,
    scarpis,
    turyn,
    wedge_weighing,
)
from maxdet.exactalg import RootMatrix, det_abs2, parse_rum
from maxdet.numtheory import legendre

from helpers import gram_is, numeric_gram, random_monomial

DAWSON_TRIPLES = {11: (4, 1, 6), 13: (2, 6, 1), 17: (1, 5, 6), 19: (4, 1, 11), 23: (1, 21, 16),
                  37: (9, 5, 1), 43: (3, 11, 1), 53: (10, 11, 1), 67: (3, 2, 1)}

UNREAL_BH33 = RootMatrix.make([[1, 1, 2], [1, 2, 1], [2, 1, 1]], 3)


@pytest.mark.parametrize("n", range(1, 13))
def test_fourier(n):
    assert gram_is(fourier(n), n, 0)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_butson_2p(p):
    h = butson_2p(p)
    assert h.n == 2 * p and h.m == p and gram_is(h, 2 * p, 0)


@pytest.mark.parametrize("p", sorted(DAWSON_TRIPLES))
def test_dawson(p):
    h = dawson_4p(p, DAWSON_TRIPLES[p])
    assert h.n == 4 * p and gram_is(h, 4 * p, 0)


def test_dawson_conditions_listed():
    conds = dawson_conditions(11, DAWSON_TRIPLES[11])
    for _label, value, want in conds:
        assert legendre(value, 11) == want


def test_dawson_bad_triple():
    with pytest.raises(ConstructionError):
        dawson_4p(11, (1, 1, 1))


@pytest.mark.parametrize("q", [5, 9, 13])
def test_complex_paley(q):
    h = complex_paley(q)
    assert h.n == q + 1 and h.m == 4 and gram_is(h, q + 1, 0)


@pytest.mark.parametrize("q,m", [(7, 3), (13, 3), (13, 4), (5, 4), (9, 4), (7, 6)])
def test_paley_core_gram(q, m):
    c = paley_core(q, m)
    # zero diagonal, off-diagonal unimodular: Q Q* = qI - J
    assert gram_is(c, q - 1, -1)


def test_gw_paley_7_3():
    w = gw_paley(7, 3)
    assert w.n == 8 and gram_is(w, 7, 0)


@pytest.mark.parametrize("h,g", [(3, 2), (5, 4), (4, 3)])
def test_scarpis(h, g):
    out = scarpis(fourier(h), gh_field(g))
    assert out.n == h * (h - 1) and gram_is(out, out.n, 0)


def test_bush_fourier3():
    b = bush(fourier(3))
    assert b.n == 9 and gram_is(b, 9, 0)
    z = np.exp(2j * np.pi * np.array(b.rows) / 3)
    assert np.allclose(z.sum(axis=1), 3)


def test_turyn_on_bh64():
    h = complex_paley(5)  # a BH(6, 4)
    t = turyn(h)
    assert t.n == 12 and t.m == 2 and gram_is(t, 12, 0)


def test_ccdl_unreal_bh33():
    out = ccdl(UNREAL_BH33)
    assert out.n == 12 and out.m == 2 and gram_is(out, 12, 0)


def test_ccdl_rejects_real_entries():
    with pytest.raises(ConstructionError, match="unreal"):
        ccdl(fourier(3))


@pytest.mark.parametrize("pair", bundled_circulant_pairs(), ids=lambda p: str(p.n))
def test_barba_from_circulant_pairs(pair):
    b = barba_from_circulant_ew(pair)
    n = pair.n
    assert gram_is(b, n, 1)
    assert det_abs2(b) == (2 * n - 1) * (n - 1) ** (n - 1)


def test_circulant_pair_validation():
    with pytest.raises(ConstructionError):
        CirculantPair.from_signs("+++", "+++")


def test_ew_from_barba():
    b5 = parse_rum(open(_corpus("B_5_m2.rum")).read())
    ew = ew_from_barba(b5)
    assert ew.n == 10
    assert det_abs2(ew) == 18**2 * 8**8


def _corpus(name):
    from maxdet.cli import corpus_dir

    return corpus_dir() / name


def test_border_and_core_determinants():
    b = bush(fourier(3))
    out, rep = border(b)
    assert rep.checked and det_abs2(out) == rep.value
    c, rep2 = core(fourier(5))
    assert c.n == 4 and det_abs2(c) == 5**3 == rep2.value


def test_wedge_weighing():
    h = RootMatrix.make([[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 1, 1], [0, 1, 1, 0]], 2)
    w2 = wedge_weighing(h, 2)
    assert w2.n == comb(4, 2) and gram_is(w2, 4, 0)


def test_gw_from_bh3():
    w = gw_from_bh3(fourier(3))
    assert w.n == 3 and gram_is(w, 3, 0)
    w6 = gw_from_bh3(butson_2p(3))
    assert w6.n == 15 and gram_is(w6, 12, 0)


def test_kronecker_and_circulant():
    k = kronecker(fourier(2), fourier(3))
    assert k.m == 6 and gram_is(k, 6, 0)
    c = circulant([0, 0, 1], 2)
    assert c.rows[1] == (1, 0, 0)


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 9])
def test_mols(q):
    sq = mols_from_gh(q)
    assert len(sq) == q - 1
    assert all(is_latin(s) for s in sq)
    assert all(are_orthogonal(a, b) for i, a in enumerate(sq) for b in sq[i + 1:])


def test_outputs_survive_monomial_equivalence(rng):
    h = butson_2p(5)
    for _ in range(5):
        assert gram_is(random_monomial(rng, h), 10, 0)
