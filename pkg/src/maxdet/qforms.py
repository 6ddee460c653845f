"""Rational quadratic forms: diagonalization, Hilbert symbols and local invariants."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Sequence, Union

from .numtheory import is_square, legendre, prime_factors

INFINITY = "inf"
TWO = 2
Place = Union[int, str]


class Verdict(str, Enum):
    FEASIBLE = "FEASIBLE"
    FEASIBLE_UNKNOWN = "FEASIBLE_UNKNOWN"
    INFEASIBLE = "INFEASIBLE"
    NOT_APPLICABLE = "NOT_APPLICABLE"


@dataclass(frozen=True)
class Reason:
    """Tagged obstruction certificate, e.g. Reason('SYMBOL', {'prime': 3})."""

    kind: str
    data: dict = field(default_factory=dict)

    def __str__(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in self.data.items())
        return f"{self.kind}({args})"


@dataclass(frozen=True)
class FeasibilityReport:
    verdict: Verdict
    reason: Reason | None = None
    note: str = ""

    @property
    def infeasible(self) -> bool:
        return self.verdict is Verdict.INFEASIBLE

    def to_dict(self) -> dict:
        d = {"verdict": self.verdict.value}
        if self.reason is not None:
            d["reason"] = {"kind": self.reason.kind, **{k: _jsonable(v) for k, v in self.reason.data.items()}}
        if self.note:
            d["note"] = self.note
        return d


def _jsonable(v):
    if isinstance(v, Fraction):
        return str(v)
    return v


def feasible_unknown(note: str = "") -> FeasibilityReport:
    return FeasibilityReport(Verdict.FEASIBLE_UNKNOWN, None, note)


def infeasible(kind: str, note: str = "", **data) -> FeasibilityReport:
    return FeasibilityReport(Verdict.INFEASIBLE, Reason(kind, data), note)


# --------------------------------------------------------------------------
# forms


@dataclass(frozen=True)
class QuadForm:
    entries: tuple[tuple[Fraction, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence]) -> QuadForm:
        ent = tuple(tuple(Fraction(x) for x in r) for r in rows)
        n = len(ent)
        if any(len(r) != n for r in ent):
            raise ValueError("quadratic form matrix must be square")
        if any(ent[i][j] != ent[j][i] for i in range(n) for j in range(n)):
            raise ValueError("quadratic form matrix must be symmetric")
        return cls(ent)

    @property
    def n(self) -> int:
        return len(self.entries)

    def det(self) -> Fraction:
        return _det_frac([list(r) for r in self.entries])

    def congruent(self, t: Sequence[Sequence]) -> QuadForm:
        """T^t Q T."""
        tt = [[Fraction(x) for x in r] for r in t]
        return QuadForm(tuple(tuple(r) for r in _mat_mul(_transpose(tt), _mat_mul([list(r) for r in self.entries], tt))))


@dataclass(frozen=True)
class DiagonalForm:
    diag: tuple[Fraction, ...]
    transform: tuple[tuple[Fraction, ...], ...] | None = None


def _transpose(a):
    return [list(r) for r in zip(*a)]


def _mat_mul(a, b):
    bt = list(zip(*b))
    return [[sum((x * y for x, y in zip(r, c)), Fraction(0)) for c in bt] for r in a]


def _det_frac(a) -> Fraction:
    n = len(a)
    a = [list(map(Fraction, r)) for r in a]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                for j in range(k, n):
                    a[i][j] -= f * a[k][j]
    return det


def polarize(q: QuadForm) -> DiagonalForm:
    """Diagonalize by symmetric elimination; returns D and T with T^t Q T = D."""
    n = q.n
    a = [list(r) for r in q.entries]
    t = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in t:
            r[i], r[j] = r[j], r[i]

    def add_to(k: int, j: int, c: Fraction) -> None:
        # basis vector e_k <- e_k + c e_j
        for col in range(n):
            a[k][col] += c * a[j][col]
        for row in range(n):
            a[row][k] += c * a[row][j]
        for r in t:
            r[k] += c * r[j]

    for k in range(n):
        if a[k][k] == 0:
            j = next((j for j in range(k + 1, n) if a[j][j] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    raise ValueError("singular quadratic form")
                add_to(k, j, Fraction(1))  # x + y substitution
        piv = a[k][k]
        for i in range(k + 1, n):
            if a[i][k]:
                add_to(i, k, -a[i][k] / piv)
    return DiagonalForm(tuple(a[i][i] for i in range(n)), tuple(tuple(r) for r in t))


# --------------------------------------------------------------------------
# Hilbert symbols


def _to_int_class(x) -> int:
    """Integer in the same square class as the nonzero rational x."""
    x = Fraction(x)
    if x == 0:
        raise ValueError("Hilbert symbol of zero")
    return x.numerator * x.denominator


def _split(a: int, p: int) -> tuple[int, int]:
    k = 0
    while a % p == 0:
        a //= p
        k += 1
    return k, a


def hilbert_local(a, b, v: Place) -> int:
    """Local Hilbert symbol (a, b)_v at a prime, at 2 or at INFINITY."""
    a, b = _to_int_class(a), _to_int_class(b)
    if v == INFINITY:
        return -1 if a < 0 and b < 0 else 1
    p = int(v)
    al, u = _split(a, p)
    be, w = _split(b, p)
    if p == 2:
        eps = lambda x: ((x - 1) // 2) % 2  # noqa: E731
        omg = lambda x: ((x * x - 1) // 8) % 2  # noqa: E731
        e = eps(u) * eps(w) + al * omg(w) + be * omg(u)
        return -1 if e % 2 else 1
    s = -1 if (al * be * ((p - 1) // 2)) % 2 else 1
    if be % 2:
        s *= legendre(u, p)
    if al % 2:
        s *= legendre(w, p)
    return s


def relevant_places(*xs) -> list[Place]:
    """INFINITY, 2 and every odd prime dividing a numerator or denominator."""
    primes: set[int] = {2}
    for x in xs:
        x = Fraction(x)
        primes.update(prime_factors(x.numerator))
        primes.update(prime_factors(x.denominator))
    return [INFINITY] + sorted(primes)


def hm_invariant(d: DiagonalForm | Sequence, v: Place) -> int:
    diag = d.diag if isinstance(d, DiagonalForm) else tuple(Fraction(x) for x in d)
    s = 1
    for i in range(len(diag)):
        for j in range(i + 1, len(diag)):
            s *= hilbert_local(diag[i], diag[j], v)
    return s


def leading_minors(q: QuadForm) -> list[Fraction]:
    return [_det_frac([list(r[:k]) for r in q.entries[:k]]) for k in range(1, q.n + 1)]


def pall_invariant(q: QuadForm, v: Place) -> int:
    """c_v from leading principal minors; restricted to positive-definite input."""
    deltas = leading_minors(q)
    if any(d <= 0 for d in deltas):
        raise ValueError("pall_invariant is restricted to positive-definite forms")
    s = hilbert_local(-1, -deltas[-1], v)
    for i in range(len(deltas) - 1):
        s *= hilbert_local(deltas[i], -deltas[i + 1], v)
    return s


def alpha_beta_invariant(alpha, beta, d: int, v: Place) -> int:
    """Closed-form invariant of alpha I_d + beta J_d."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    if alpha == 0 or alpha + beta * d == 0:
        raise ValueError("alpha I + beta J is singular")
    if d == 1:
        return 1
    s = hilbert_local((alpha + beta * d) * d, alpha ** (d - 1) * d, v)
    if comb(d - 1, 2) % 2:
        s *= hilbert_local(alpha, -1, v)
    if d % 2:
        s *= hilbert_local(alpha, d, v)
    s *= hilbert_local(d - 1, d, v)
    return s


def alpha_beta_form(alpha, beta, d: int) -> QuadForm:
    return QuadForm.of([[alpha + beta if i == j else beta for j in range(d)] for i in range(d)])


def is_positive_definite(q: QuadForm) -> bool:
    return all(x > 0 for x in leading_minors(q))


def is_rational_square(x: Fraction) -> bool:
    x = Fraction(x)
    return x >= 0 and is_square(x.numerator) and is_square(x.denominator)


def is_rational_gram(q: QuadForm) -> FeasibilityReport:
    """Decide whether Q = M M^t for a rational M (Q positive definite)."""
    if not is_positive_definite(q):
        raise ValueError("is_rational_gram expects a positive-definite form")
    det = q.det()
    if not is_rational_square(det):
        return infeasible("NON_SQUARE", value=det)
    dform = polarize(q)
    for v in relevant_places(*dform.diag):
        if v in (INFINITY, 2):
            continue
        if hm_invariant(dform, v) == -1:
            return infeasible("SYMBOL", prime=v)
    return FeasibilityReport(Verdict.FEASIBLE)


def odd_symbol_failure(a: int, b: int) -> int | None:
    """Smallest odd prime p with (a,b)_p = -1, or None."""
    for p in relevant_places(a, b)[2:]:
        if hilbert_local(a, b, p) == -1:
            return p
    return None


__all__ = [
    "INFINITY", "TWO", "Verdict", "Reason", "FeasibilityReport", "QuadForm", "DiagonalForm",
    "polarize", "hilbert_local", "hm_invariant", "pall_invariant", "alpha_beta_invariant",
    "alpha_beta_form", "is_rational_gram", "relevant_places", "odd_symbol_failure",
]
