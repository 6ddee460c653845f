"""Exact arithmetic in Z[zeta_m], root-of-unity matrices and exact determinants."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Sequence

ZERO = None  # marker for a zero entry of a weighing matrix


@lru_cache(maxsize=None)
def cyclotomic_poly(m: int) -> tuple[int, ...]:
    """Coefficients (low to high) of the m-th cyclotomic polynomial."""
    if m < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [-1] + [0] * (m - 1) + [1]  # x^m - 1
    for d in range(1, m):
        if m % d == 0:
            num = _poly_exact_div(num, list(cyclotomic_poly(d)))
    return tuple(num)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dn = len(den) - 1
    lead = den[-1]
    q = [0] * (len(num) - dn)
    for i in range(len(num) - 1, dn - 1, -1):
        c = num[i]
        if c == 0:
            continue
        if c % lead:
            raise ArithmeticError("inexact polynomial division")
        t = c // lead
        q[i - dn] = t
        for j in range(dn + 1):
            num[i - dn + j] -= t * den[j]
    if any(num[:dn]):
        raise ArithmeticError("inexact polynomial division")
    return q


def euler_phi(m: int) -> int:
    return sum(1 for k in range(1, m + 1) if gcd(k, m) == 1)


def _reduce(coeffs: list[int], m: int) -> tuple[int, ...]:
    """Fold mod x^m - 1 then reduce mod Phi_m; result has length m."""
    c = [0] * m
    for k, a in enumerate(coeffs):
        if a:
            c[k % m] += a
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    for i in range(m - 1, deg - 1, -1):
        t = c[i]
        if t:
            # phi is monic
            for j in range(deg + 1):
                c[i - deg + j] -= t * phi[j]
    return tuple(c)


class CycInt:
    """Element of Z[zeta_m] in canonical power-basis form."""

    __slots__ = ("m", "c", "_h")

    def __init__(self, m: int, c: tuple[int, ...]):
        # trusted constructor: c must already be canonical
        self.m = m
        self.c = c
        self._h = None

    @classmethod
    def of(cls, coeffs: Iterable[int], m: int) -> CycInt:
        if m < 1:
            raise ValueError("m must be >= 1")
        return cls(m, _reduce(list(coeffs), m))

    @classmethod
    def from_int(cls, a: int, m: int) -> CycInt:
        return cls.of([a], m)

    @classmethod
    def root(cls, k: int, m: int) -> CycInt:
        c = [0] * m
        c[k % m] = 1
        return cls.of(c, m)

    @classmethod
    def zero(cls, m: int) -> CycInt:
        return cls(m, (0,) * m)

    def _coerce(self, other) -> CycInt:
        if isinstance(other, CycInt):
            if other.m != self.m:
                raise ValueError("mixed cyclotomic orders")
            return other
        if isinstance(other, int):
            return CycInt.from_int(other, self.m)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycInt(self.m, tuple(a + b for a, b in zip(self.c, o.c)))

    __radd__ = __add__

    def __neg__(self) -> CycInt:
        return CycInt(self.m, tuple(-a for a in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycInt(self.m, tuple(a - b for a, b in zip(self.c, o.c)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        m = self.m
        if isinstance(other, int):
            return CycInt(m, tuple(a * other for a in self.c))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = [0] * (2 * m)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        out[i + j] += a * b
        return CycInt(m, _reduce(out, m))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = CycInt.from_int(other, self.m)
        if not isinstance(other, CycInt):
            return NotImplemented
        return self.m == other.m and self.c == other.c

    def __hash__(self) -> int:
        if self._h is None:
            self._h = hash((self.m, self.c))
        return self._h

    def __bool__(self) -> bool:
        return any(self.c)

    def __repr__(self) -> str:
        return f"CycInt({self.m}, {list(self.c)})"

    def conj(self) -> CycInt:
        m = self.m
        out = [0] * m
        for k, a in enumerate(self.c):
            out[(-k) % m] += a
        return CycInt(m, _reduce(out, m))

    def galois(self, t: int) -> CycInt:
        """Image under zeta -> zeta^t (t coprime to m)."""
        m = self.m
        out = [0] * m
        for k, a in enumerate(self.c):
            out[(k * t) % m] += a
        return CycInt(m, _reduce(out, m))

    def abs2(self) -> CycInt:
        return self * self.conj()

    def is_rational(self) -> bool:
        return not any(self.c[1:])

    def to_int(self) -> int:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not a rational integer")
        return self.c[0]

    def is_real(self) -> bool:
        return self == self.conj()

    def norm(self) -> int:
        """Absolute norm N(z) = product of all Galois conjugates."""
        p = CycInt.from_int(1, self.m)
        for t in range(1, self.m + 1):
            if gcd(t, self.m) == 1:
                p = p * self.galois(t)
        return p.to_int()

    def exact_div_int(self, d: int) -> CycInt:
        if any(a % d for a in self.c):
            raise ArithmeticError("inexact division by integer")
        return CycInt(self.m, tuple(a // d for a in self.c))

    def exact_div(self, other: CycInt) -> CycInt:
        """Exact quotient self/other; raises if other does not divide self."""
        if other.is_rational():
            return self.exact_div_int(other.c[0])
        m = self.m
        cof = CycInt.from_int(1, m)
        if m in (3, 4, 6):
            cof = other.conj()
        else:
            for t in range(2, m + 1):
                if gcd(t, m) == 1:
                    cof = cof * other.galois(t)
        den = (other * cof).to_int()
        return (self * cof).exact_div_int(den)

    def __complex__(self) -> complex:
        import cmath
        return sum((a * cmath.exp(2j * cmath.pi * k / self.m) for k, a in enumerate(self.c)), 0j)


def cyc_canonical(coeffs: Sequence[int], m: int) -> CycInt:
    """Canonical representative of sum coeffs[k] zeta_m^k."""
    if m == 0:
        raise ValueError("m = 0 rejected")
    return CycInt.of(coeffs, m)


@lru_cache(maxsize=None)
def _root_table(m: int) -> dict:
    return {CycInt.root(k, m).c: k for k in range(m)}


def root_exponent(z: CycInt) -> int | None:
    """k with z = zeta_m^k, None for zero; raises if z is neither."""
    if not z:
        return None
    k = _root_table(z.m).get(z.c)
    if k is None:
        raise ValueError(f"{z!r} is not a root of unity")
    return k


# --------------------------------------------------------------------------
# matrices of CycInt (lists of lists)

CycMatrix = list  # list[list[CycInt]]


def identity(n: int, m: int) -> CycMatrix:
    one, zero = CycInt.from_int(1, m), CycInt.zero(m)
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def int_matrix(rows: Sequence[Sequence[int]], m: int) -> CycMatrix:
    return [[CycInt.from_int(int(x), m) for x in r] for r in rows]


def matmul(a: CycMatrix, b: CycMatrix) -> CycMatrix:
    m = a[0][0].m
    z = CycInt.zero(m)
    bt = list(zip(*b))
    out = []
    for row in a:
        out_row = []
        for col in bt:
            s = z
            for x, y in zip(row, col):
                if x and y:
                    s = s + x * y
            out_row.append(s)
        out.append(out_row)
    return out


def conj_transpose(a: CycMatrix) -> CycMatrix:
    return [[a[j][i].conj() for j in range(len(a))] for i in range(len(a[0]))]


def det_exact(a: CycMatrix) -> CycInt:
    """Fraction-free Bareiss determinant over Z[zeta_m]."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        raise ValueError("empty matrix")
    m = a[0][0].m
    x = [list(r) for r in a]
    sign = 1
    prev = CycInt.from_int(1, m)
    for k in range(n - 1):
        if not x[k][k]:
            piv = next((i for i in range(k + 1, n) if x[i][k]), None)
            if piv is None:
                return CycInt.zero(m)
            x[k], x[piv] = x[piv], x[k]
            sign = -sign
        pk = x[k][k]
        for i in range(k + 1, n):
            xik = x[i][k]
            row_i, row_k = x[i], x[k]
            for j in range(k + 1, n):
                v = pk * row_i[j] - xik * row_k[j]
                row_i[j] = v.exact_div(prev) if k else v
            row_i[k] = CycInt.zero(m)
        prev = pk
    d = x[n - 1][n - 1]
    return d if sign == 1 else -d


def det_int(a: Sequence[Sequence[int]]) -> int:
    """Bareiss determinant of an integer matrix."""
    n = len(a)
    x = [list(map(int, r)) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if x[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if x[i][k]), None)
            if piv is None:
                return 0
            x[k], x[piv] = x[piv], x[k]
            sign = -sign
        pk = x[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pk * x[i][j] - x[i][k] * x[k][j]
                q, r = divmod(num, prev)
                if r:
                    raise ArithmeticError("Bareiss division failed")
                x[i][j] = q
            x[i][k] = 0
        prev = pk
    return sign * x[n - 1][n - 1] if n else 1


def charpoly_int(g: CycMatrix) -> list[int]:
    """Characteristic polynomial [1, a1, ..., an] of a Hermitian matrix, via Faddeev-LeVerrier.

    Raises ArithmeticError when a coefficient is not a rational integer.
    """
    n = len(g)
    m = g[0][0].m
    coeffs = [1]
    mk = identity(n, m)
    for k in range(1, n + 1):
        am = matmul(g, mk)
        tr = sum((am[i][i] for i in range(n)), CycInt.zero(m))
        if not tr.is_rational():
            raise ArithmeticError("trace is not rational; corrupted Gram input")
        t = tr.c[0]
        if t % k:
            raise ArithmeticError("non-integral characteristic polynomial coefficient")
        ck = -t // k
        coeffs.append(ck)
        if k < n:
            mk = [[am[i][j] + (ck if i == j else 0) for j in range(n)] for i in range(n)]
    return coeffs


def wedge_minors(a: CycMatrix, k: int) -> CycMatrix:
    """k-th compound matrix, subsets in lexicographic order."""
    n = len(a)
    if k > n:
        raise ValueError("k exceeds dimension")
    subsets = list(combinations(range(n), k))
    return [[det_exact([[a[i][j] for j in cols] for i in rows]) for cols in subsets] for rows in subsets]


def is_hermitian(g: CycMatrix) -> bool:
    n = len(g)
    return all(g[i][j] == g[j][i].conj() for i in range(n) for j in range(i, n))


def is_positive_definite(g: CycMatrix) -> bool:
    """Sylvester's criterion; leading minors are compared exactly when rational."""
    for k in range(1, len(g) + 1):
        d = det_exact([r[:k] for r in g[:k]])
        if d.is_rational():
            if d.c[0] <= 0:
                return False
        elif complex(d).real <= 0:
            return False
    return True


# --------------------------------------------------------------------------
# root-of-unity matrices


@dataclass(frozen=True)
class RootMatrix:
    """Square matrix with entries zeta_m^e, stored as exponents (ZERO allowed if weighing)."""

    m: int
    rows: tuple[tuple[int | None, ...], ...]
    weighing: bool = False

    def __post_init__(self):
        n = len(self.rows)
        for r in self.rows:
            if len(r) != n:
                raise ValueError("RootMatrix must be square")
            for e in r:
                if e is ZERO:
                    if not self.weighing:
                        raise ValueError("ZERO entry in a non-weighing matrix")
                elif not (0 <= e < self.m):
                    raise ValueError(f"exponent {e} outside 0..{self.m - 1}")

    @classmethod
    def make(cls, rows, m: int, weighing: bool | None = None) -> RootMatrix:
        rr = tuple(tuple(None if e is None else int(e) % m for e in r) for r in rows)
        if weighing is None:
            weighing = any(e is None for r in rr for e in r)
        return cls(m, rr, weighing)

    @property
    def n(self) -> int:
        return len(self.rows)

    def to_cyc(self) -> CycMatrix:
        m = self.m
        roots = [CycInt.root(k, m) for k in range(m)]
        z = CycInt.zero(m)
        return [[z if e is None else roots[e] for e in r] for r in self.rows]

    def lift(self, m2: int) -> RootMatrix:
        """Same matrix viewed over m2-th roots (m | m2)."""
        if m2 % self.m:
            raise ValueError("target order must be a multiple")
        f = m2 // self.m
        return RootMatrix(m2, tuple(tuple(None if e is None else e * f for e in r) for r in self.rows), self.weighing)

    def transpose(self) -> RootMatrix:
        return RootMatrix(self.m, tuple(zip(*self.rows)), self.weighing)

    def conj(self) -> RootMatrix:
        m = self.m
        return RootMatrix(m, tuple(tuple(None if e is None else (-e) % m for e in r) for r in self.rows), self.weighing)

    def scale(self, k: int) -> RootMatrix:
        """Multiply every entry by zeta_m^k."""
        m = self.m
        return RootMatrix(m, tuple(tuple(None if e is None else (e + k) % m for e in r) for r in self.rows), self.weighing)

    def row_sums(self) -> list[CycInt]:
        m = self.m
        out = []
        for r in self.rows:
            c = [0] * m
            for e in r:
                if e is not None:
                    c[e] += 1
            out.append(CycInt.of(c, m))
        return out

    def dephase(self) -> RootMatrix:
        """Divide row i by entry (i,0), then column j by entry (0,j)."""
        m = self.m
        rows = []
        for r in self.rows:
            if r[0] is None:
                raise ValueError("cannot dephase with a zero in column 0")
            rows.append([(e - r[0]) % m for e in r])
        top = rows[0]
        return RootMatrix(m, tuple(tuple((e - top[j]) % m for j, e in enumerate(r)) for r in rows), self.weighing)

    def is_dephased(self) -> bool:
        return all(e == 0 for e in self.rows[0]) and all(r[0] == 0 for r in self.rows)


def gram(mat: RootMatrix) -> CycMatrix:
    """M M* computed by counting exponent differences."""
    m, rows = mat.m, mat.rows
    n = len(rows)
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        ri = rows[i]
        for j in range(i, n):
            rj = rows[j]
            c = [0] * m
            for a, b in zip(ri, rj):
                if a is not None and b is not None:
                    c[(a - b) % m] += 1
            z = CycInt.of(c, m)
            out[i][j] = z
            if j != i:
                out[j][i] = z.conj()
    return out


def gram_int(mat: RootMatrix) -> list[list[int]]:
    """Gram matrix as integers; only valid when every entry is rational."""
    return [[z.to_int() for z in r] for r in gram(mat)]


def det_abs2(mat: RootMatrix | CycMatrix) -> int:
    """|det M|^2 as a rational integer (m in {1,2,3,4,6})."""
    cyc = mat.to_cyc() if isinstance(mat, RootMatrix) else mat
    d = det_exact(cyc)
    return d.abs2().to_int()


def scalar_matrix_eq(g: CycMatrix, diag: int, off: int) -> bool:
    """True iff g = (diag - off) I + off J."""
    n = len(g)
    return all(g[i][j] == (diag if i == j else off) for i in range(n) for j in range(n))


# --------------------------------------------------------------------------
# %RUM text format


class RumParseError(ValueError):
    pass


def parse_rum(text: str, name: str = "<text>") -> RootMatrix:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or not lines[0].startswith("%RUM"):
        raise RumParseError(f"{name}: missing %RUM header")
    try:
        m = int(lines[0].split()[1])
        n = int(lines[1])
    except (IndexError, ValueError) as exc:
        raise RumParseError(f"{name}: malformed header") from exc
    body = lines[2:]
    if len(body) != n:
        raise RumParseError(f"{name}: expected {n} rows, found {len(body)}")
    rows = []
    weighing = False
    for k, ln in enumerate(body):
        toks = ln.split()
        if len(toks) != n:
            raise RumParseError(f"{name}: row {k + 1} has {len(toks)} entries, expected {n}")
        row = []
        for t in toks:
            if t == ".":
                row.append(None)
                weighing = True
                continue
            try:
                e = int(t)
            except ValueError as exc:
                raise RumParseError(f"{name}: bad token {t!r} in row {k + 1}") from exc
            if not 0 <= e < m:
                raise RumParseError(f"{name}: exponent {e} out of range in row {k + 1}")
            row.append(e)
        rows.append(tuple(row))
    return RootMatrix(m, tuple(rows), weighing)


def format_rum(mat: RootMatrix, comments: Sequence[str] = ()) -> str:
    out = [f"%RUM {mat.m}", str(mat.n)]
    out += [f"# {c}" for c in comments]
    for r in mat.rows:
        out.append(" ".join("." if e is None else str(e) for e in r))
    return "\n".join(out) + "\n"
