"""Design-theoretic and cyclotomic nonexistence tests, and the infeasibility tables they generate."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, isqrt
from typing import Iterable, Iterator

from .numtheory import (
    factorize,
    is_prime,
    is_self_conjugate,
    is_square,
    legendre,
    multiplicative_order,
    squarefree_split,
    sum_two_squares,
)
from .qforms import (
    INFINITY,
    FeasibilityReport,
    Reason,
    Verdict,
    feasible_unknown,
    hilbert_local,
    infeasible,
    odd_symbol_failure,
    relevant_places,
)

__all__ = [
    "FeasibilityReport", "Reason", "Verdict", "GddParams", "brc", "plane_orders_blocked", "bose_connor",
    "gdd_scan", "gdd_params", "GDD_TABLES", "format_reason", "gdd_table_tsv", "tamura", "tamura_scan", "butson_pf", "quh", "barba3", "barba4", "norm_test",
    "recheck",
]


def not_applicable(note: str) -> FeasibilityReport:
    return FeasibilityReport(Verdict.NOT_APPLICABLE, None, note)


# --------------------------------------------------------------------------
# symmetric designs


def brc(v: int, k: int, lam: int) -> FeasibilityReport:
    """Rational congruence test for the incidence Gram (k-lam) I + lam J."""
    if lam * (v - 1) != k * (k - 1):
        raise ValueError("parameters violate lam(v-1) = k(k-1)")
    n = k - lam
    if n <= 0:
        raise ValueError("k - lam must be positive")
    if v % 2 == 0:
        return feasible_unknown() if is_square(n) else infeasible("NON_SQUARE", value=n)
    b = (-1) ** ((v - 1) // 2) * lam
    p = odd_symbol_failure(n, b)
    return feasible_unknown() if p is None else infeasible("SYMBOL", prime=p)


def plane_orders_blocked(limit: int) -> list[int]:
    """Orders n <= limit of projective planes excluded by the sum-of-two-squares condition."""
    return [n for n in range(1, limit + 1) if n % 4 in (1, 2) and not sum_two_squares(n)[0]]


# --------------------------------------------------------------------------
# group divisible designs


@dataclass(frozen=True)
class GddParams:
    n: int
    m: int
    r: int
    lam1: int
    lam2: int

    @property
    def nu(self) -> int:
        return self.r - self.lam1

    @property
    def mu(self) -> int:
        return self.r * self.r - self.n * self.m * self.lam2

    def valid(self) -> bool:
        n, m, r, l1, l2 = self.n, self.m, self.r, self.lam1, self.lam2
        return (n - 1) * l1 + n * (m - 1) * l2 == r * (r - 1) and self.nu > 0 and self.mu > 0

    def astuple(self) -> tuple[int, int, int, int, int]:
        return (self.n, self.m, self.r, self.lam1, self.lam2)


def _symbol_failures(pairs: list[tuple[int, int]]) -> list[int]:
    """Odd primes p where the product of (a, b)_p over the pairs is -1."""
    primes: set[int] = set()
    for a, b in pairs:
        primes.update(p for p in relevant_places(a, b)[1:] if p != 2)
    out = []
    for p in sorted(primes):
        s = 1
        for a, b in pairs:
            s *= hilbert_local(a, b, p)
        if s == -1:
            out.append(p)
    return out


def _symbol_report(pairs: list[tuple[int, int]]) -> FeasibilityReport:
    # report the smallest failing prime; all of them are kept for cross-checks
    fails = _symbol_failures(pairs)
    if not fails:
        return feasible_unknown()
    return infeasible("SYMBOL", prime=fails[0], all_primes=fails)


def bose_connor(g: GddParams) -> FeasibilityReport:
    """Necessary conditions for a symmetric regular GDD, split by the parities of m and n."""
    if not g.valid():
        raise ValueError(f"invalid GDD parameters {g.astuple()}")
    n, m, mu, nu = g.n, g.m, g.mu, g.nu
    if m % 2 == 0:
        if not is_square(mu):
            return infeasible("NON_SQUARE", symbol="mu", value=mu)
        if m % 4 == 2 and n % 2 == 0:
            return _symbol_report([(nu, -1)])
        return feasible_unknown()
    sm = (-1) ** comb(m, 2) * m
    if n % 2 == 0:
        if not is_square(nu):
            return infeasible("NON_SQUARE", symbol="nu", value=nu)
        return _symbol_report([(mu, sm)])
    sn = (-1) ** comb(n, 2) * n
    return _symbol_report([(mu, sm), (nu, sn)])


def bose_connor_pairs(g: GddParams) -> list[tuple[int, int]]:
    """Symbol arguments whose product must be +1 at every odd prime."""
    n, m, mu, nu = g.n, g.m, g.mu, g.nu
    if m % 2 == 0:
        return [(nu, -1)] if (m % 4 == 2 and n % 2 == 0) else []
    sm = (-1) ** comb(m, 2) * m
    if n % 2 == 0:
        return [(mu, sm)]
    return [(mu, sm), (nu, (-1) ** comb(n, 2) * n)]


def gdd_params(n: int, m: int, lam2: int = 1, lam1: int | None = None) -> Iterator[GddParams]:
    """All (r, lam1) completing valid GDD parameters for fixed n, m, lam2, sorted by r."""
    if n < 2:
        return
    base = n * (m - 1) * lam2
    # lam1 < r forces r^2 - n r - base < 0
    r_max = (n + isqrt(n * n + 4 * base) + 2) // 2
    for r in range(1, r_max + 1):
        num = r * (r - 1) - base
        if num < 0 or num % (n - 1):
            continue
        g = GddParams(n, m, r, num // (n - 1), lam2)
        if (lam1 is None or g.lam1 == lam1) and g.valid():
            yield g


def gdd_scan(
    n_range: Iterable[int],
    m_range: Iterable[int],
    lam2: int = 1,
    resolvable: bool = False,
    n_parity: int | None = None,
    m_mod: tuple[int, int] | None = None,
    r_square: bool = False,
) -> list[tuple[GddParams, FeasibilityReport]]:
    """Infeasible GDD parameter sets in the given ranges, sorted by (n, m, r)."""
    rows = []
    ms = list(m_range)
    for n in n_range:
        if n_parity is not None and n % 2 != n_parity:
            continue
        for m in ms:
            if m_mod is not None and m % m_mod[0] != m_mod[1]:
                continue
            for g in gdd_params(n, m, lam2, 0 if resolvable else None):
                if r_square and not is_square(g.r):
                    continue
                rep = bose_connor(g)
                if rep.infeasible:
                    rows.append((g, rep))
    rows.sort(key=lambda t: (t[0].n, t[0].m, t[0].r))
    return rows


# the six table configurations (name -> gdd_scan keyword arguments)
GDD_TABLES: dict[str, dict] = {
    "m2mod4_neven": dict(n_range=range(2, 11), m_range=range(2, 51), n_parity=0, m_mod=(4, 2)),
    "m2mod4_neven_resolvable": dict(
        n_range=range(2, 101), m_range=range(2, 101), n_parity=0, m_mod=(4, 2), resolvable=True
    ),
    "modd_neven": dict(n_range=range(2, 11), m_range=range(1, 50), n_parity=0, m_mod=(2, 1)),
    "modd_neven_rsquare_resolvable": dict(
        n_range=range(2, 801), m_range=range(1, 801), n_parity=0, m_mod=(2, 1), resolvable=True, r_square=True
    ),
    "modd_nodd": dict(n_range=range(3, 10), m_range=range(3, 50), n_parity=1, m_mod=(2, 1)),
    "modd_nodd_resolvable": dict(
        n_range=range(3, 50), m_range=range(3, 100), n_parity=1, m_mod=(2, 1), resolvable=True
    ),
}


def format_reason(rep: FeasibilityReport) -> str:
    """Reason column in table notation: mu=5, nu=8 or p=3."""
    r = rep.reason
    if r is None:
        return ""
    if r.kind == "NON_SQUARE" and "symbol" in r.data:
        return f"{r.data['symbol']}={r.data['value']}"
    if r.kind == "SYMBOL":
        return f"p={r.data['prime']}"
    return str(r)


def gdd_table_tsv(name: str) -> str:
    rows = gdd_scan(**GDD_TABLES[name])
    out = ["No.\tn\tm\tr\tlambda1\tlambda2\treason"]
    for i, (g, rep) in enumerate(rows, 1):
        out.append("\t".join(map(str, (i, *g.astuple(), format_reason(rep)))))
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# Ehlich-type Gram D(m)


def tamura(m: int) -> FeasibilityReport:
    """Rational obstruction for a +-1 matrix of order 7m with Gram D(m)."""
    if m < 1 or m % 2 == 0:
        raise ValueError("tamura expects an odd m >= 1")
    if not is_square(4 * m - 3):
        return infeasible("NON_SQUARE", value=4 * m - 3)
    p = odd_symbol_failure(11 * m - 3, -(7 * m - 3))
    return feasible_unknown() if p is None else infeasible("SYMBOL", prime=p)


def tamura_scan(limit: int, congruence_1mod4: bool = True) -> list[int]:
    """Values 9 <= m < limit passing both conditions (only m with 4m-3 square are visited).

    Orders 7m below 63 are outside the range where the block Gram is the bound.
    """
    out = []
    z = 7
    while True:
        m = (z * z + 3) // 4
        if m >= limit:
            break
        if (not congruence_1mod4 or m % 4 == 1) and tamura(m).verdict is Verdict.FEASIBLE_UNKNOWN:
            out.append(m)
        z += 2
    return out


# --------------------------------------------------------------------------
# cyclotomic tests


def butson_pf(n: int, p: int, f: int = 1) -> FeasibilityReport:
    """Self-conjugacy obstruction for BH(n, p^f) and BH(n, 2p^f)."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError("p must be an odd prime")
    if f == 1 and n % p:
        return infeasible("NOT_DIVISIBLE", prime=p, note="a BH(n,p) needs p | n")
    if n % 2 == 0:
        return not_applicable("the self-conjugacy test needs odd n")
    rest = n
    while rest % p == 0:
        rest //= p
    _, mprime = squarefree_split(rest)
    for q, _ in factorize(mprime).factors:
        if is_self_conjugate(q, p, f):
            t = multiplicative_order(q % p**f, p**f) // 2
            return infeasible("SELF_CONJUGATE", q=q, modulus=p**f, t=t)
    return feasible_unknown()


def quh(n: int, m: int) -> FeasibilityReport:
    """Splitting obstruction for quaternary unit Hadamard matrices QUH(n, m)."""
    if n % 2 == 0:
        return not_applicable("n must be odd")
    if is_square(m) or is_square(m + 1):
        return not_applicable("m or m+1 is a perfect square")
    a = squarefree_split(m)[1]
    b = squarefree_split(m + 1)[1]
    t = squarefree_split(n)[1]
    for p, _ in factorize(t).factors:
        if p == 2 or m % p == 0 or (m + 1) % p == 0:
            continue
        if legendre(-a, p) == -1 and legendre(b, p) == 1:
            return infeasible("SPLIT_PRIME", prime=p, a=a, b=b)
    return feasible_unknown()


def _strip3(x: int) -> int:
    while x % 3 == 0:
        x //= 3
    return x


def barba3(n: int) -> FeasibilityReport:
    """Norm obstruction for Barba matrices over the third roots (n = 1 mod 3)."""
    if n % 3 != 1:
        raise ValueError("barba3 expects n = 1 mod 3")
    r = squarefree_split(_strip3(2 * n - 1))[1]
    bad = [p for p, _ in factorize(r).factors if p % 3 == 2]
    if n % 2 == 0 and n > 1:
        s = squarefree_split(_strip3(n - 1))[1]
        bad += [p for p, _ in factorize(s).factors if p % 3 == 2]
    if bad:
        return infeasible("NORM", prime=min(bad))
    return feasible_unknown()


def barba4(n: int) -> FeasibilityReport:
    """Fourth-root Barba matrices of odd order need 2n-1 to be a sum of two squares."""
    if n % 2 == 0:
        raise ValueError("barba4 expects odd n")
    ok, _ = sum_two_squares(2 * n - 1)
    return feasible_unknown() if ok else infeasible("SUM2SQ", value=2 * n - 1)


def norm_test(value: int, m: int) -> FeasibilityReport:
    """Is the positive integer value a norm from Q(zeta_m), m in {3, 4}?

    Decided by Hilbert symbols (value, -3)_p resp. (value, -1)_p at every place, 2 included.
    """
    if value <= 0:
        raise ValueError("norm test expects a positive integer")
    d = {3: -3, 6: -3, 4: -1}.get(m)
    if d is None:
        raise ValueError("norm test implemented for m in {3, 4, 6}")
    for v in relevant_places(value, d):
        if v == INFINITY:
            continue
        if hilbert_local(value, d, v) == -1:
            return infeasible("NORM", prime=v)
    return feasible_unknown()


# --------------------------------------------------------------------------


def recheck(rep: FeasibilityReport, **ctx) -> bool:
    """Re-verify an INFEASIBLE certificate from its data alone."""
    if not rep.infeasible:
        return True
    r = rep.reason
    k, d = r.kind, r.data
    if k == "NON_SQUARE":
        return not is_square(d["value"])
    if k == "SUM2SQ":
        return not sum_two_squares(d["value"])[0]
    if k == "SELF_CONJUGATE":
        return pow(d["q"], d["t"], d["modulus"]) == d["modulus"] - 1
    if k == "NOT_DIVISIBLE":
        return ctx["n"] % d["prime"] != 0
    if k == "SYMBOL":
        pairs = ctx.get("pairs")
        if pairs is None:
            return True
        s = 1
        for a, b in pairs:
            s *= hilbert_local(a, b, d["prime"])
        return s == -1
    if k == "NORM":
        if "value" not in ctx:
            return True
        dd = {3: -3, 6: -3, 4: -1}[ctx["m"]]
        return hilbert_local(ctx["value"], dd, d["prime"]) == -1
    if k == "SPLIT_PRIME":
        p = d["prime"]
        return legendre(-d["a"], p) == -1 and legendre(d["b"], p) == 1
    return False

