"""One test per acceptance criterion; each prints a PASS/FAIL line (also summarised at the end)."""
from __future__ import annotations

import time
from contextlib import contextmanager

import numpy as np
import pytest

from maxdet.analysis import classify_gram, paley_det, verify
from maxdet.cli import corpus_dir
from maxdet.constructions import (
    barba_from_circulant_ew,
    bundled_circulant_pairs,
    bush,
    butson_2p,
    ccdl,
    complex_paley,
    dawson_4p,
    fourier,
    gh_field,
    gw_paley,
    is_barba,
    is_hadamard,
    is_weighing,
    paley_core,
    scarpis,
    turyn,
)
from maxdet.exactalg import RootMatrix, det_abs2, det_exact, gram, parse_rum
from maxdet.feasibility import GDD_TABLES, butson_pf, gdd_scan, plane_orders_blocked, quh, tamura_scan
from maxdet.numtheory import is_prime, primes_up_to
from maxdet.search import (
    S12P_MINUS,
    S12P_PLUS,
    EnumStats,
    certify_max,
    exhaustive_maxdet,
    paley_submatrix,
    residue_pattern,
    residue_sweep,
)

from conftest import ACCEPTANCE
from gdd_reference import load_reference, reason_matches


@contextmanager
def criterion(k: int, text: str, limit_s: float):
    t0 = time.perf_counter()
    try:
        yield
        dt = time.perf_counter() - t0
        assert dt < limit_s, f"took {dt:.1f} s, limit {limit_s} s"
    except BaseException as exc:
        dt = time.perf_counter() - t0
        ACCEPTANCE[k] = ("FAIL", f"{text} [{dt:.2f} s] {str(exc).splitlines()[0][:160] if str(exc) else type(exc).__name__}")
        print(f"CRITERION {k}: FAIL {text}")
        raise
    ACCEPTANCE[k] = ("PASS", f"{text} [{dt:.2f} s]")
    print(f"CRITERION {k}: PASS {text} [{dt:.2f} s]")


def load(name: str) -> RootMatrix:
    return parse_rum((corpus_dir() / name).read_text(), name)


# 1 -----------------------------------------------------------------------

PLANE_ORDERS = [6, 14, 21, 22, 30, 33, 38, 42, 46, 54, 57, 62, 66, 69, 70, 77, 78, 86, 93, 94]


def test_criterion_01_plane_orders():
    with criterion(1, "plane orders blocked below 100", 1.0):
        assert plane_orders_blocked(100) == PLANE_ORDERS


# 2 -----------------------------------------------------------------------

TABLE_ROWS = {"m2mod4_neven": 26, "m2mod4_neven_resolvable": 22, "modd_neven": 32,
              "modd_nodd": 33, "modd_neven_rsquare_resolvable": 21, "modd_nodd_resolvable": 31}


def test_criterion_02_gdd_tables():
    ref = load_reference()
    with criterion(2, "GDD infeasibility tables row-for-row with reasons", 30.0):
        for name, count in TABLE_ROWS.items():
            rows = gdd_scan(**GDD_TABLES[name])
            assert len(rows) == count, (name, len(rows))
            assert [g.astuple() for g, _ in rows] == [r for r, _ in ref[name]], name
            for (g, rep), (_, printed) in zip(rows, ref[name]):
                assert reason_matches(printed, rep), (name, g.astuple(), printed, str(rep.reason))


# 3 -----------------------------------------------------------------------

TAMURA_PRINTED = {73, 241, 757, 1057, 1561, 14281, 14521, 17557, 20881, 25441, 28057, 3673,
                  50401, 57841, 78121, 97657}


def test_criterion_03_tamura():
    with criterion(3, "Ehlich block Gram scan m < 10^5 equals the printed set", 60.0):
        assert set(tamura_scan(10**5)) == TAMURA_PRINTED


# 4 -----------------------------------------------------------------------


def test_criterion_04_butson():
    with criterion(4, "BH(n,3) and BH(n,5) nonexistence zeros", 1.0):
        z3 = {n for n in range(3, 121, 3) if butson_pf(n, 3).infeasible}
        z5 = {n for n in range(5, 101, 5) if butson_pf(n, 5).infeasible}
        assert z3 == {15, 33, 45, 51, 69, 87, 99, 105}
        assert z5 == {15, 35, 45, 65, 75, 85, 95}


# 5 -----------------------------------------------------------------------

QUH_PRINTED = {7: [17, 31, 41, 47, 51, 73], 11: [13, 39, 61, 65, 73, 83], 19: [29, 31, 41, 59, 71, 79],
               23: [5, 15, 19, 35, 43, 45], 31: [17, 23, 51, 69, 73, 79], 43: [5, 7, 15, 19, 21, 35]}


def test_criterion_05_quh():
    with criterion(5, "QUH(n,q) nonexistence, first six n per q", 1.0):
        for q, want in QUH_PRINTED.items():
            got = [n for n in range(1, 200, 2) if quh(n, q).infeasible][:6]
            assert got == want, q


# 6 -----------------------------------------------------------------------

DAWSON_TRIPLES = {11: (4, 1, 6), 13: (2, 6, 1), 17: (1, 5, 6), 19: (4, 1, 11), 23: (1, 21, 16),
                  37: (9, 5, 1), 43: (3, 11, 1), 53: (10, 11, 1), 67: (3, 2, 1)}


def test_criterion_06_constructions():
    with criterion(6, "every construction passes its exact Gram identity", 30.0):
        outs = [fourier(n) for n in range(1, 13)]
        outs += [butson_2p(p) for p in (3, 5, 7, 11, 13)]
        outs += [dawson_4p(p, t) for p, t in DAWSON_TRIPLES.items()]
        outs += [complex_paley(q) for q in (5, 9, 13)]
        outs += [scarpis(fourier(3), gh_field(2)), scarpis(fourier(5), gh_field(4)), bush(fourier(3))]
        outs.append(turyn(complex_paley(5)))
        outs.append(ccdl(RootMatrix.make([[1, 1, 2], [1, 2, 1], [2, 1, 1]], 3)))
        for h in outs:
            assert is_hadamard(h)
        assert is_weighing(gw_paley(7, 3), 7)
        pairs = bundled_circulant_pairs()
        assert len(pairs) == 4
        for pr in pairs:
            assert is_barba(barba_from_circulant_ew(pr))


# 7 -----------------------------------------------------------------------


def test_criterion_07_determinant_corpus():
    with criterion(7, "appendix determinants match the tables", 60.0):
        assert det_abs2(load("M_5.rum")) == 1701
        assert det_abs2(load("B_7.rum")) == 13 * 6**6
        assert det_abs2(load("M_11.rum")) == 3**9 * 7 * 19 * 3**10
        b19 = load("B_19_m4.rum")
        # fourth-root table lists |det|^2 / 2^(n-1)
        assert det_abs2(b19) == 37 * 18**18 == 3**36 * 37 * 2 ** (19 - 1)
        assert det_abs2(b19.lift(12)) == det_abs2(b19)


# 8 -----------------------------------------------------------------------


def test_criterion_08_paley_determinant():
    with criterion(8, "Paley determinant closed form, p = 1 mod 3, p <= 37", 120.0):
        for p in (p for p in primes_up_to(37) if p % 3 == 1):
            a = paley_det(p, compute=False)
            q = paley_core(p, 3)
            m1 = RootMatrix.make([[1 if i == j else e for j, e in enumerate(r)] for i, r in enumerate(q.rows)], 3)
            d = det_exact(m1.to_cyc())
            assert (d * d.conj()).to_int() == a.predicted_abs_det_sq, p


# 9 -----------------------------------------------------------------------


def test_criterion_09_order_five_certificate():
    with criterion(9, "order-5 certificate: 42 candidates, 37 eliminated by norm/divisibility", 600.0):
        stats = EnumStats()
        cert = certify_max(5, 3, load("M_5.rum"), stats)
        assert cert.certified and not cert.survivors
        assert exhaustive_maxdet(5, 3).det_sq == 1701
        above = [e for e in cert.eliminations if e.det_sq > 1701]
        by_arith = [e for e in above if e.reason in ("NORM_OBSTRUCTION", "DIVISIBILITY")]
        assert len(above) == 42, f"{len(above)} candidate Grams above 1701"
        assert len(by_arith) == 37, f"{len(by_arith)} eliminated by norm/divisibility"


# 10 ----------------------------------------------------------------------


def test_criterion_10_residue_patterns():
    with criterion(10, "4p residue sweep to 15061; 12p patterns for 10 primes in (263, 10^4]", 60.0):
        want = [7, 29, 31, 41, 47, 59, 61] + [p for p in primes_up_to(15061) if p >= 71]
        assert residue_sweep(15061) == want
        spot = [p for p in primes_up_to(10**4) if p > 263][:10]
        found = [p for p in spot if residue_pattern(p, S12P_PLUS, S12P_MINUS) is not None]
        assert found == spot, f"12p pattern found for {len(found)} of {spot}"


# 11 ----------------------------------------------------------------------


def test_criterion_11_paley_submatrix():
    with criterion(11, "12x12 Hadamard submatrices of Paley cores for 971, 983, 997", 600.0):
        for p in (971, 983, 997):
            assert 300 < p < 1000 and is_prime(p)
            hit = paley_submatrix(p, 12, 700, seed=1)
            assert hit is not None, p
            h = np.array(hit.matrix())
            assert np.array_equal(h @ h.T, 12 * np.eye(12, dtype=int)), p


# 12 ----------------------------------------------------------------------


def test_criterion_12_property_suites(rng):
    import test_analysis
    import test_constructions
    import test_qforms

    with criterion(12, "Hilbert reciprocity, congruence invariance, monomial invariance, divisibility, MOLS", 60.0):
        test_qforms.test_hilbert_reciprocity_500_pairs()
        test_qforms.test_congruence_invariance_100_transforms()
        for name in ("B_7.rum", "BH_12.rum", "M_5.rum"):
            test_analysis.test_classification_monomial_invariance(name, rng)
        test_analysis.test_divisibility_on_random_matrices()
        for q in (3, 4, 5, 7, 8, 9):
            test_constructions.test_mols(q)
