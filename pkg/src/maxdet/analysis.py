"""Determinant bounds, Gram-pattern classification and closed-form determinant checks."""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import prod

from .exactalg import (
    CycInt,
    CycMatrix,
    RootMatrix,
    charpoly_int,
    det_exact,
    det_abs2,
    gram,
    is_hermitian,
    root_exponent,
)
from .numtheory import CubicDecomp, is_prime, solve_c27d

SIGMA_CAP = 2_000_000  # multisets examined for general m

EHLICH_CONST = Fraction(4 * 11**6, 7**7)


# --------------------------------------------------------------------------
# sigma and bounds


@dataclass(frozen=True)
class SigmaValue:
    """Minimal squared modulus of a root sum when it is not a rational integer."""

    abs2: CycInt
    approx: float


def sigma(m: int, n: int):
    """Minimal |sum of n m-th roots|: an int for m in {2,3,4,6}, a SigmaValue otherwise."""
    if m < 2 or n < 1:
        raise ValueError("sigma needs m >= 2, n >= 1")
    if m in (2, 4):
        return n % 2
    if m == 3:
        return 0 if n % 3 == 0 else 1
    if m == 6:
        return 0 if n > 1 else 1
    count = 1
    for k in range(1, m):
        count = count * (n + k) // k
    if count > SIGMA_CAP:
        raise ValueError(f"sigma({m}, {n}) needs {count} multisets, over the cap {SIGMA_CAP}")
    best = None
    for combo in combinations_with_replacement(range(m), n):
        c = [0] * m
        for k in combo:
            c[k] += 1
        z = CycInt.of(c, m)
        a = abs(complex(z)) ** 2
        if best is None or a < best[1] - 1e-12:
            best = (z.abs2(), a)
    return SigmaValue(best[0], best[1])


@dataclass(frozen=True)
class BoundReport:
    n: int
    m: int
    sigma: object
    hadamard_sq: int
    barba_sq: int | float
    ew_sq: int | None
    ehlich_sq: Fraction | None
    applicable: str

    @property
    def governing_sq(self):
        return {
            "hadamard": self.hadamard_sq,
            "barba": self.barba_sq,
            "ew": self.ew_sq,
            "ehlich": self.ehlich_sq,
        }[self.applicable]

    def to_dict(self) -> dict:
        s = self.sigma
        return {
            "n": self.n,
            "m": self.m,
            "sigma": s if isinstance(s, int) else s.approx ** 0.5,
            "hadamard_sq": self.hadamard_sq,
            "barba_sq": self.barba_sq,
            "ew_sq": self.ew_sq,
            "ehlich_sq": None if self.ehlich_sq is None else str(self.ehlich_sq),
            "applicable": self.applicable,
        }


def _applicable(n: int, m: int, sig) -> str:
    if m == 2:
        r = n % 4
        if r == 0 or n <= 2:
            return "hadamard"
        if r == 1:
            return "barba"
        if r == 2:
            return "ew"
        return "ehlich" if n >= 63 else "barba"
    if m == 3:
        return "hadamard" if n % 3 == 0 else "barba"
    if m == 4:
        return "hadamard" if n % 2 == 0 else "barba"
    if m == 6:
        return "hadamard" if n > 1 else "barba"
    return "barba"


def bounds(n: int, m: int) -> BoundReport:
    """All squared determinant bounds for an order-n matrix over m-th roots."""
    if n < 1:
        raise ValueError("n must be positive")
    sig = sigma(m, n)
    if isinstance(sig, int):
        barba = (n + (n - 1) * sig) * (n - sig) ** (n - 1)
    else:
        s = sig.approx ** 0.5
        barba = (n + (n - 1) * s) * (n - s) ** (n - 1)
    ew = (2 * n - 2) ** 2 * (n - 2) ** (n - 2) if n >= 2 else None
    ehlich = EHLICH_CONST * n * (n - 1) ** 6 * Fraction(n - 3) ** (n - 7) if n >= 7 else None
    return BoundReport(n, m, sig, n**n, barba, ew, ehlich, _applicable(n, m, sig))


def ehlich_block_det(n: int, parts) -> int:
    """det of the block Gram with diagonal n, 3 inside blocks of sizes parts, -1 across."""
    parts = list(parts)
    if not parts or any(r < 1 for r in parts):
        raise ValueError("parts must be a nonempty list of positive sizes")
    size, s = sum(parts), len(parts)
    val = Fraction(n - 3) ** (size - s) * prod(n - 3 + 4 * r for r in parts)
    val *= 1 - sum(Fraction(r, n - 3 + 4 * r) for r in parts)
    if val.denominator != 1:
        raise ArithmeticError("block determinant is not integral")
    return val.numerator


def ehlich_block_matrix(n: int, parts) -> list[list[int]]:
    label = [b for b, r in enumerate(parts) for _ in range(r)]
    k = len(label)
    return [[n if i == j else (3 if label[i] == label[j] else -1) for j in range(k)] for i in range(k)]


# --------------------------------------------------------------------------
# Gram classification


@dataclass(frozen=True)
class GramClass:
    tag: str
    blocks: tuple[int, ...] = ()
    conjugator: tuple[int, ...] | None = None  # unit exponents over lcm(2, m)
    note: str = ""


def _unit_exponent(z: CycInt) -> int | None:
    """Exponent k over lcm(2,m) with z = +-zeta_m^j, or None when z is not a unit root."""
    m = z.m
    big = m if m % 2 == 0 else 2 * m
    try:
        k = root_exponent(z)
        if k is not None:
            return k * (big // m)
    except ValueError:
        pass
    try:
        k = root_exponent(-z)
    except ValueError:
        return None
    if k is None or m % 2 == 0:
        return None
    return (k * 2 + m) % big


def _cliques(adj: list[list[bool]]) -> list[list[int]] | None:
    """Components of adj when every component is a clique, else None."""
    n = len(adj)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        comp = [s] + [j for j in range(n) if adj[s][j]]
        for v in comp:
            if seen[v]:
                return None
            seen[v] = True
        cs = set(comp)
        for v in comp:
            if {j for j in range(n) if adj[v][j]} | {v} != cs:
                return None
        comps.append(sorted(comp))
    return comps


def conjugate_to_pattern(g: CycMatrix, target: list[list[int]]) -> tuple[int, ...] | None:
    """Units d with conj(d_i) g_ij d_j = target_ij, found along a BFS tree; None if impossible."""
    n = len(g)
    m = g[0][0].m
    d: list[CycInt | None] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = CycInt.from_int(1, m)
        queue = deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                t = target[i][j]
                if j == i or d[j] is not None or t == 0:
                    continue
                if not g[i][j]:
                    return None
                # conj(d_i) g_ij d_j = t  =>  d_j = d_i conj(g_ij) / t  (|g_ij| = |t|)
                try:
                    dj = (d[i] * g[i][j].conj()).exact_div_int(t)
                except ArithmeticError:
                    return None
                if _unit_exponent(dj) is None:
                    return None
                d[j] = dj
                queue.append(j)
    for i in range(n):
        for j in range(n):
            if d[i].conj() * g[i][j] * d[j] != target[i][j]:
                return None
    return tuple(_unit_exponent(x) for x in d)


def classify_gram(g: CycMatrix) -> GramClass:
    """Recognise the Gram patterns of Hadamard, Barba, EW, D(k) and weighing matrices.

    Matching is up to simultaneous permutation and diagonal unit conjugation, so the
    tag depends only on the monomial class of the underlying matrix.
    """
    if not is_hermitian(g):
        raise ValueError("classify_gram expects a Hermitian matrix")
    n = len(g)
    diag = {g[i][i] for i in range(n)}
    if len(diag) != 1 or not next(iter(diag)).is_rational():
        return GramClass("OTHER", note="non-constant diagonal")
    dval = g[0][0].to_int()
    off = [[None if i == j else g[i][j].abs2() for j in range(n)] for i in range(n)]
    vals = {z for r in off for z in r if z is not None}
    if n == 1 or vals == {CycInt.zero(g[0][0].m)}:
        return GramClass("HADAMARD" if dval == n else f"GW({dval})", (n,), tuple([0] * n))
    if not all(v.is_rational() for v in vals):
        return GramClass("OTHER", note="irrational inner products")
    a2 = [[None if x is None else x.to_int() for x in r] for r in off]
    ivals = {x for r in a2 for x in r if x is not None}

    def attempt(tag, big, inside, across):
        adj = [[i != j and a2[i][j] == big for j in range(n)] for i in range(n)]
        comps = _cliques(adj)
        if comps is None:
            return None
        label = {v: b for b, c in enumerate(comps) for v in c}
        target = [[dval if i == j else (inside if label[i] == label[j] else across) for j in range(n)]
                  for i in range(n)]
        conj = conjugate_to_pattern(g, target)
        if conj is None:
            return None
        return comps, conj

    if ivals == {1} and dval == n:
        res = attempt("BARBA", 1, 1, 1)
        if res:
            return GramClass("BARBA", (n,), res[1])
    if n % 2 == 0 and dval == n and ivals <= {0, 4}:
        res = attempt("EW", 4, 2, 0)
        if res and sorted(len(c) for c in res[0]) == [n // 2, n // 2]:
            return GramClass("EW", (n // 2, n // 2), res[1])
    if n % 7 == 0 and dval == n and ivals <= {1, 9}:
        k = n // 7
        res = attempt("D", 9, 3, -1)
        if res and sorted(len(c) for c in res[0]) == [k] * 7:
            return GramClass(f"EHLICH_D({k})", tuple([k] * 7), res[1])
    # report the block structure of the largest-modulus inner products
    big = max(ivals)
    adj = [[i != j and a2[i][j] == big for j in range(n)] for i in range(n)]
    comps = _components(adj)
    return GramClass("OTHER", tuple(sorted((len(c) for c in comps), reverse=True)),
                     note=f"blocks of |<r_i,r_j>|^2 = {big}")


def _components(adj: list[list[bool]]) -> list[list[int]]:
    n = len(adj)
    seen = [False] * n
    out = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        stack, comp = [s], []
        while stack:
            v = stack.pop()
            comp.append(v)
            for j in range(n):
                if adj[v][j] and not seen[j]:
                    seen[j] = True
                    stack.append(j)
        out.append(sorted(comp))
    return out


# --------------------------------------------------------------------------
# divisibility


@dataclass(frozen=True)
class DivisibilityReport:
    prime: int
    det_sq: int
    charpoly: tuple[int, ...]


def divisibility_check(mat: RootMatrix) -> DivisibilityReport:
    """Assert p^(n-1) | |det|^2 and p^(i-1) | a_i for p = 3 (m=3) or p = 2 (m=4)."""
    p = {3: 3, 4: 2}.get(mat.m)
    if p is None:
        raise ValueError("divisibility_check needs m in {3, 4}")
    n = mat.n
    g = gram(mat)
    cp = charpoly_int(g)
    d2 = abs(cp[-1])
    if d2 % p ** (n - 1):
        raise ArithmeticError(f"{p}^{n - 1} does not divide |det|^2 = {d2}")
    for i in range(1, n + 1):
        if cp[i] % p ** (i - 1):
            raise ArithmeticError(f"charpoly coefficient a_{i} = {cp[i]} not divisible by {p}^{i - 1}")
    return DivisibilityReport(p, d2, tuple(cp))


# --------------------------------------------------------------------------
# Paley determinant


@dataclass(frozen=True)
class PaleyAnalysis:
    p: int
    decomp: CubicDecomp
    period_cubic: tuple[Fraction, Fraction, Fraction, Fraction]  # x^3 + x^2 - f x - e
    base: int
    predicted_abs_det_sq: int
    computed_abs_det_sq: int | None
    bordered_sq: int
    bordered_computed_sq: int | None


def _period_cubic(p: int, c: int) -> tuple[Fraction, ...]:
    f = (p - 1) // 3
    return (Fraction(1), Fraction(1), Fraction(-f), -Fraction(p * (c + 3) - 1, 27))


def paley_base(p: int, c: int) -> int:
    a = p + 2
    return a**3 - 3 * a**2 - 3 * (p - 1) * a + (3 + c) * p - 1


def paley_det(p: int, compute: bool = True, bordered: bool = False) -> PaleyAnalysis:
    """Closed form for |det(Q + wI)|^2 and its bordered version, cross-checked exactly."""
    from .constructions import gw_paley, paley_core

    if not is_prime(p) or p % 3 != 1:
        raise ValueError("paley_det needs a prime p = 1 mod 3")
    dec = solve_c27d(p)
    cubic = _period_cubic(p, dec.c)
    base = paley_base(p, dec.c)
    # independent route: prod ((p+2) + 3 eta_i) = -27 P(-(p+2)/3)
    x = Fraction(-(p + 2), 3)
    via_periods = -27 * (cubic[0] * x**3 + cubic[1] * x**2 + cubic[2] * x + cubic[3])
    if via_periods != base:
        raise ArithmeticError(f"period cubic gives {via_periods}, closed form {base}")
    f = (p - 1) // 3
    pred = base**f
    bpred = (p * p + p + 1) * pred
    comp = bcomp = None
    if compute:
        q = paley_core(p, 3)
        m1 = RootMatrix.make([[1 if i == j else e for j, e in enumerate(r)] for i, r in enumerate(q.rows)], 3)
        comp = det_abs2(m1)
        if comp != pred:
            raise ArithmeticError(f"closed form {pred} != exact {comp} at p={p}")
    if bordered:
        w = gw_paley(p, 3)
        m2 = RootMatrix.make([[1 if (i == j and e is None) else e for j, e in enumerate(r)]
                              for i, r in enumerate(w.rows)], 3)
        bcomp = det_abs2(m2)
        if bcomp != bpred:
            raise ArithmeticError(f"bordered closed form {bpred} != exact {bcomp} at p={p}")
    return PaleyAnalysis(p, dec, cubic, base, pred, comp, bpred, bcomp)


# --------------------------------------------------------------------------
# verification of claims

_CLAIM = re.compile(r"^\s*([A-Za-z_]+)\s*(?:\(\s*([-0-9^*x ]+)\s*\))?\s*$")


@dataclass
class VerifyResult:
    ok: bool
    claim: str
    found: str
    diagnostics: dict = field(default_factory=dict)


def _int_expr(s: str) -> int:
    """Integer from '1701', '3^9*7*19' style products."""
    total = 1
    for factor in re.split(r"[*x]", s.replace(" ", "")):
        if "^" in factor:
            b, e = factor.split("^")
            total *= int(b) ** int(e)
        else:
            total *= int(factor)
    return total


def normalize_claim(claim: str) -> tuple[str, int | None]:
    mt = _CLAIM.match(claim)
    if not mt:
        raise ValueError(f"unrecognised claim {claim!r}")
    name = mt.group(1).upper()
    arg = mt.group(2)
    if name in ("EHLICH", "D"):
        name = "EHLICH_D"
    if name in ("MAXDET", "RECORD", "EHLICH_D", "GW") and arg is None:
        raise ValueError(f"claim {name} needs an argument")
    return name, (_int_expr(arg) if arg is not None else None)


def verify(mat: RootMatrix, claim: str) -> VerifyResult:
    """Recompute the Gram matrix and check it against a classification tag or a |det|^2 value."""
    name, arg = normalize_claim(claim)
    g = gram(mat)
    cls = classify_gram(g)
    diag = {"n": mat.n, "m": mat.m, "class": cls.tag}
    if cls.blocks:
        diag["blocks"] = list(cls.blocks)
    if name in ("MAXDET", "RECORD"):
        value = det_exact(g).to_int()
        diag["det_sq"] = value
        ok = value == arg
        if not ok:
            diag["error"] = f"Gram mismatch: |det|^2 = {value}, claimed {arg}"
        return VerifyResult(ok, f"{name}({arg})", cls.tag, diag)
    want = name if arg is None else f"{name}({arg})"
    ok = cls.tag == want
    if not ok:
        diag["error"] = f"Gram mismatch: classified {cls.tag}, claimed {want}"
    return VerifyResult(ok, want, cls.tag, diag)


__all__ = [
    "SigmaValue", "sigma", "BoundReport", "bounds", "ehlich_block_det", "ehlich_block_matrix",
    "GramClass", "classify_gram", "DivisibilityReport", "divisibility_check", "PaleyAnalysis",
    "paley_det", "paley_base", "conjugate_to_pattern", "VerifyResult", "verify", "normalize_claim",
]
