"""Explicit matrix constructions and morphisms; every output is verified before it is returned."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb, lcm

from .exactalg import (
    CycInt,
    RootMatrix,
    conj_transpose,
    det_abs2,
    gram,
    matmul,
    root_exponent,
    scalar_matrix_eq,
    wedge_minors,
)
from .numtheory import SmallField, field, is_prime, legendre


class ConstructionError(ValueError):
    """Raised when inputs violate a construction's hypotheses or its output fails verification."""


# --------------------------------------------------------------------------
# verification helpers


def is_hadamard(h: RootMatrix) -> bool:
    return not h.weighing and scalar_matrix_eq(gram(h), h.n, 0)


def is_weighing(w: RootMatrix, weight: int) -> bool:
    return scalar_matrix_eq(gram(w), weight, 0)


def is_barba(b: RootMatrix) -> bool:
    return not b.weighing and scalar_matrix_eq(gram(b), b.n, 1)


def is_ew(w: RootMatrix) -> bool:
    """Gram equals diag((n-2)I + 2J, (n-2)I + 2J) with blocks of size n/2."""
    n = w.n
    if n % 2 or w.weighing:
        return False
    h = n // 2
    g = gram(w)
    for i in range(n):
        for j in range(n):
            same = (i < h) == (j < h)
            want = (n if i == j else 2) if same else 0
            if g[i][j] != want:
                return False
    return True


def _require(ok: bool, what: str) -> None:
    if not ok:
        raise ConstructionError(f"verification failed: {what}")


def negate(h: RootMatrix) -> RootMatrix:
    if h.m % 2:
        raise ConstructionError("negation needs an even root order")
    return h.scale(h.m // 2)


def circulant(first_row, m: int) -> RootMatrix:
    n = len(first_row)
    return RootMatrix.make([[first_row[(j - i) % n] for j in range(n)] for i in range(n)], m)


# --------------------------------------------------------------------------
# basic families


def fourier(n: int) -> RootMatrix:
    if n < 1:
        raise ConstructionError("fourier needs n >= 1")
    return RootMatrix.make([[i * j for j in range(n)] for i in range(n)], n)


def kronecker(h1: RootMatrix, h2: RootMatrix) -> RootMatrix:
    m = lcm(h1.m, h2.m)
    a, b = h1.lift(m), h2.lift(m)
    rows = []
    for r1 in a.rows:
        for r2 in b.rows:
            rows.append([None if x is None or y is None else x + y for x in r1 for y in r2])
    out = RootMatrix.make(rows, m, a.weighing or b.weighing)
    if is_hadamard(h1) and is_hadamard(h2):
        _require(is_hadamard(out), "Kronecker product of Hadamard matrices")
    return out


def paley_core(q: int, m: int) -> RootMatrix:
    """Q[x,y] = chi(x - y) for the order-m character of F_q; zero diagonal."""
    if m < 2:
        raise ConstructionError("paley_core needs m >= 2")
    if (q - 1) % m:
        raise ConstructionError(f"{m} does not divide {q}-1")
    f = field(q)
    rows = [[None if x == y else f.log[f.sub(x, y)] % m for y in range(q)] for x in range(q)]
    out = RootMatrix.make(rows, m, True)
    g = gram(out)
    _require(scalar_matrix_eq(g, q - 1, -1), "Q Q* = qI - J")
    _require(all(not s for s in out.row_sums()), "Q J = 0")
    return out


def _border(core_rows, corner, m: int, weighing: bool) -> RootMatrix:
    n = len(core_rows)
    rows = [[corner] + [0] * n] + [[0] + list(r) for r in core_rows]
    return RootMatrix.make(rows, m, weighing)


def gw_paley(q: int, m: int) -> RootMatrix:
    """Bordered generalised Paley core: a GW(q+1, q; m)."""
    core_ = paley_core(q, m)
    out = _border(core_.rows, None, m, True)
    _require(is_weighing(out, q), f"W W* = {q} I")
    return out


def complex_paley(q: int) -> RootMatrix:
    """iQ - I bordered by ones, a BH(q+1, 4)."""
    if q % 4 != 1:
        raise ConstructionError("complex_paley needs q = 1 mod 4")
    qc = paley_core(q, 2)
    core_rows = [[2 if e is None else (1 if e == 0 else 3) for e in r] for r in qc.rows]
    out = _border(core_rows, 0, 4, False)
    _require(is_hadamard(out), "BH(q+1, 4)")
    return out


# --------------------------------------------------------------------------
# Gauss-sum constructions over the p-th roots


def _gauss_block(p: int, a: int, sign: int) -> list[list[int]]:
    """Exponents of sign * (1/sigma_p) F* D^a F, which must be p-th roots of unity.

    Entry (i,j) equals legendre(a) * zeta^(-(j-i)^2 / (4a)).
    """
    a %= p
    if a == 0:
        raise ConstructionError("Gauss block with a = 0 mod p is not unimodular")
    if sign * legendre(a, p) != 1:
        raise ConstructionError(f"block sign for a={a} yields negated roots")
    inv4a = pow(4 * a, -1, p)
    return [[(-((j - i) ** 2) * inv4a) % p for j in range(p)] for i in range(p)]


def _diag_fourier(p: int, a: int) -> list[list[int]]:
    """Exponents of D^a F with D = diag(zeta^(i^2))."""
    return [[(a * i * i + i * j) % p for j in range(p)] for i in range(p)]


def _assemble(blocks: list[list[list[list[int]]]], m: int) -> RootMatrix:
    rows = []
    for brow in blocks:
        for k in range(len(brow[0])):
            rows.append([e for blk in brow for e in blk[k]])
    return RootMatrix.make(rows, m)


def _smallest_nonresidue(p: int) -> int:
    return next(s for s in range(2, p) if legendre(s, p) == -1)


def butson_2p(p: int) -> RootMatrix:
    """BH(2p, p) from a 2x2 sign template and Gauss-sum blocks."""
    if p == 2 or not is_prime(p):
        raise ConstructionError("butson_2p needs an odd prime")
    s = _smallest_nonresidue(p)
    # block-diagonal factor times the 2x2 template: the top-left block is F itself
    blocks = [
        [_diag_fourier(p, 0), _diag_fourier(p, s - 1)],
        [_gauss_block(p, 1, 1), _gauss_block(p, s, -1)],
    ]
    out = _assemble(blocks, p)
    _require(is_hadamard(out), f"BH({2 * p},{p})")
    return out


_H4_SIGNS = ((1, 1, 1, 1), (1, 1, -1, -1), (1, -1, 1, -1), (1, -1, -1, 1))


def dawson_conditions(p: int, triple: tuple[int, int, int]) -> list[tuple[str, int, int]]:
    """The nine residue conditions as (label, value, required symbol), in stated order."""
    al, be, ga = triple
    return [
        ("alpha+1", al + 1, 1), ("beta+4", be + 4, 1), ("gamma+9", ga + 9, 1),
        ("alpha+4", al + 4, -1), ("alpha+9", al + 9, -1), ("beta+1", be + 1, -1),
        ("beta+9", be + 9, -1), ("gamma+1", ga + 1, -1), ("gamma+4", ga + 4, -1),
    ]


def dawson_4p(p: int, triple: tuple[int, int, int]) -> RootMatrix:
    if p == 2 or not is_prime(p):
        raise ConstructionError("dawson_4p needs an odd prime")
    if any(t % p == 0 for t in triple):
        raise ConstructionError("alpha, beta, gamma must be nonzero mod p")
    for label, value, want in dawson_conditions(p, triple):
        got = legendre(value, p)
        if got != want:
            raise ConstructionError(f"residue condition violated: legendre({label}, {p}) = {got}, need {want:+d}")
    exps = (0,) + tuple(triple)
    shifts = (0, 1, 4, 9)
    blocks = [[_diag_fourier(p, e) for e in exps]]
    for r in range(1, 4):
        blocks.append([_gauss_block(p, exps[c] + shifts[r], _H4_SIGNS[r][c]) for c in range(4)])
    out = _assemble(blocks, p)
    _require(is_hadamard(out), f"BH({4 * p},{p})")
    return out


# --------------------------------------------------------------------------
# generalised Hadamard matrices over (F_q, +)


@dataclass(frozen=True)
class GhMatrix:
    """Square matrix over the additive group of a small field."""

    group: SmallField
    entries: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.entries)

    def is_gh(self) -> bool:
        f, rows = self.group, self.entries
        n, q = self.n, f.q
        if n % q:
            return False
        t = n // q
        for i in range(n):
            for j in range(i + 1, n):
                counts = [0] * q
                for a, b in zip(rows[i], rows[j]):
                    counts[f.sub(a, b)] += 1
                if any(c != t for c in counts):
                    return False
        return True

    def is_normalized(self) -> bool:
        return all(x == 0 for x in self.entries[0]) and all(r[0] == 0 for r in self.entries)

    def normalized(self) -> GhMatrix:
        f = self.group
        top = self.entries[0]
        rows = [[f.sub(x, top[j]) for j, x in enumerate(r)] for r in self.entries]
        rows = [[f.sub(x, r[0]) for x in r] for r in rows]
        return GhMatrix(f, tuple(tuple(r) for r in rows))


def gh_field(q: int) -> GhMatrix:
    """Multiplication table x*y of F_q, a GH(q, (F_q,+))."""
    try:
        f = field(q)
    except ValueError as exc:
        raise ConstructionError(str(exc)) from exc
    out = GhMatrix(f, tuple(tuple(f.mul[x][y] for y in range(q)) for x in range(q)))
    _require(out.is_gh(), f"GH({q})")
    return out


def normalize_scarpis(h: RootMatrix, g: GhMatrix) -> tuple[RootMatrix, GhMatrix]:
    return h.dephase(), g.normalized()


def scarpis(h: RootMatrix, g: GhMatrix) -> RootMatrix:
    """BH(n(n+1), m) from a dephased BH(n+1, m) and a normalized GH(n) over a group of order n."""
    n = h.n - 1
    if g.n != n or g.group.q != n:
        raise ConstructionError(f"GH matrix must have order and group size {n}")
    if not h.is_dephased():
        raise ConstructionError("H must be dephased (see normalize_scarpis)")
    if not g.is_normalized():
        raise ConstructionError("G must have identity first row and column (see normalize_scarpis)")
    c = [r[1:] for r in h.rows[1:]]
    add = g.group.add
    rows = []
    for r in range(n):
        rows.append([0] * n + [c[r][jb] for jb in range(n) for _ in range(n)])
    for ib in range(n):
        for r in range(n):
            row = list(c[ib])
            for jb in range(n):
                row += c[add[r][g.entries[ib][jb]]]
            rows.append(row)
    out = RootMatrix.make(rows, h.m)
    _require(is_hadamard(out), f"BH({n * (n + 1)},{h.m})")
    return out


def mols_from_gh(q: int) -> list[list[list[int]]]:
    """q-1 mutually orthogonal Latin squares read off the regular representation of GH(q)."""
    g = gh_field(q)
    add = g.group.add
    return [[[add[x][g.entries[k][j]] for x in range(q)] for j in range(q)] for k in range(1, q)]


def is_latin(sq) -> bool:
    n = len(sq)
    full = set(range(n))
    return all(set(r) == full for r in sq) and all(set(c) == full for c in zip(*sq))


def are_orthogonal(a, b) -> bool:
    n = len(a)
    return len({(a[i][j], b[i][j]) for i in range(n) for j in range(n)}) == n * n


# --------------------------------------------------------------------------
# Bush-type matrices, borders and cores


@dataclass(frozen=True)
class DetReport:
    value: int
    formula: str
    checked: bool


def bush(h: RootMatrix) -> RootMatrix:
    """Block-circulant matrix of the rank-one projections r_i* r_i; row sum n."""
    if not h.is_dephased():
        raise ConstructionError("bush needs a dephased matrix")
    n, m = h.n, h.m
    e = [[[(r[b] - r[a]) % m for b in range(n)] for a in range(n)] for r in h.rows]
    rows = []
    for bi in range(n):
        for a in range(n):
            rows.append([x for bj in range(n) for x in e[(bj - bi) % n][a]])
    out = RootMatrix.make(rows, m)
    _require(is_hadamard(out), f"BH({n * n},{m})")
    _require(all(s == n for s in out.row_sums()), "constant row sum n")
    return out


def border(h: RootMatrix, check_limit: int = 16) -> tuple[RootMatrix, DetReport]:
    """Border a constant-row-sum Hadamard matrix with ones; |det|^2 = (n+1-2Re s) n^n."""
    sums = h.row_sums()
    s = sums[0]
    if any(x != s for x in sums):
        raise ConstructionError("border needs constant row sum")
    if not is_hadamard(h):
        raise ConstructionError("border needs a Hadamard matrix")
    n = h.n
    two_re = s + s.conj()
    if not two_re.is_rational():
        raise ConstructionError("2 Re(s) is irrational for this root order")
    value = (n + 1 - two_re.to_int()) * n**n
    out = _border(h.rows, 0, h.m, False)
    checked = False
    if n <= check_limit:
        _require(det_abs2(out) == value, "bordered determinant formula")
        checked = True
    return out, DetReport(value, f"(n+1-2Re(s))*n^n with n={n}, 2Re(s)={two_re.to_int()}", checked)


def core(h: RootMatrix) -> tuple[RootMatrix, DetReport]:
    """Core of the dephased matrix; |det|^2 = (n+1)^(n-1) for order-n core."""
    if not is_hadamard(h):
        raise ConstructionError("core needs a Hadamard matrix")
    d = h.dephase()
    c = RootMatrix.make([r[1:] for r in d.rows[1:]], h.m)
    n = c.n
    value = (n + 1) ** (n - 1)
    got = det_abs2(c)
    _require(got == value, "core determinant")
    return c, DetReport(value, f"(n+1)^(n-1) with n={n}", True)


# --------------------------------------------------------------------------
# morphisms


_TURYN_AB = {0: (1, 0), 1: (0, 1), 2: (-1, 0), 3: (0, -1)}


def turyn(h: RootMatrix, require_hadamard: bool = True) -> RootMatrix:
    """[[A+B, -A+B], [A-B, A+B]] for H = A + iB over the fourth roots."""
    if h.weighing or 4 % h.m:
        raise ConstructionError("turyn needs entries in {1, i, -1, -i}")
    if require_hadamard and not is_hadamard(h):
        raise ConstructionError("turyn needs a BH(n, 4)")
    x = h.lift(4)
    n = x.n
    a = [[_TURYN_AB[e][0] for e in r] for r in x.rows]
    b = [[_TURYN_AB[e][1] for e in r] for r in x.rows]

    def exp(v: int) -> int:
        return 0 if v == 1 else 1

    rows = []
    for i in range(n):
        rows.append([exp(a[i][j] + b[i][j]) for j in range(n)] + [exp(-a[i][j] + b[i][j]) for j in range(n)])
    for i in range(n):
        rows.append([exp(a[i][j] - b[i][j]) for j in range(n)] + [exp(a[i][j] + b[i][j]) for j in range(n)])
    out = RootMatrix.make(rows, 2)
    if require_hadamard:
        _require(is_hadamard(out), f"BH({2 * n},2)")
    return out


_CCDL_H4 = ((1, 0, 0, 0), (1, 1, 0, 1), (1, 1, 1, 0), (1, 0, 1, 1))  # exponents over {1,-1}


def ccdl(h: RootMatrix) -> RootMatrix:
    """BH(4n, 2) from an unreal BH(n, 6) via omega -> H4, omega^2 -> H4^T."""
    if h.weighing or 6 % h.m:
        raise ConstructionError("ccdl needs sixth-root entries")
    x = h.lift(6)
    if any(e in (0, 3) for r in x.rows for e in r):
        raise ConstructionError("ccdl needs an unreal matrix: a real entry is present")
    if not is_hadamard(x):
        raise ConstructionError("ccdl needs a BH(n, 6)")
    h4 = _CCDL_H4
    h4t = tuple(zip(*h4))
    # zeta6 = -omega^2, zeta6^2 = omega, zeta6^4 = omega^2, zeta6^5 = -omega
    table = {2: (h4, 0), 4: (h4t, 0), 1: (h4t, 1), 5: (h4, 1)}
    n = x.n
    rows = []
    for i in range(n):
        for a in range(4):
            row = []
            for j in range(n):
                blk, flip = table[x.rows[i][j]]
                row += [(v + flip) % 2 for v in blk[a]]
            rows.append(row)
    out = RootMatrix.make(rows, 2)
    _require(is_hadamard(out), f"BH({4 * n},2)")
    return out


# --------------------------------------------------------------------------
# Barba and EW matrices


@dataclass(frozen=True)
class CirculantPair:
    """First rows of circulant R, S with R R^T + S S^T = (2n-2)I + 2J."""

    n: int
    row_r: tuple[int, ...]
    row_s: tuple[int, ...]

    def __post_init__(self):
        if len(self.row_r) != self.n or len(self.row_s) != self.n:
            raise ConstructionError("row length mismatch")
        if any(v not in (1, -1) for v in self.row_r + self.row_s):
            raise ConstructionError("rows must be +-1")
        n = self.n
        for k in range(n):
            acf = sum(self.row_r[i] * self.row_r[(i + k) % n] + self.row_s[i] * self.row_s[(i + k) % n] for i in range(n))
            want = 2 * n if k == 0 else 2
            if acf != want:
                raise ConstructionError(f"pair Gram identity fails at shift {k}: {acf} != {want}")

    @classmethod
    def from_signs(cls, a: str, b: str) -> CirculantPair:
        conv = {"+": 1, "-": -1}
        return cls(len(a), tuple(conv[c] for c in a), tuple(conv[c] for c in b))


def bundled_circulant_pairs() -> list[CirculantPair]:
    """The circulant EW pairs shipped in corpus/circulant_pairs.txt."""
    from importlib import resources

    text = (resources.files("maxdet") / "corpus" / "circulant_pairs.txt").read_text()
    out = []
    for line in text.splitlines():
        if line.strip() and not line.startswith("#"):
            n, a, b = line.split()
            pair = CirculantPair.from_signs(a, b)
            if pair.n != int(n):
                raise ConstructionError(f"declared order {n} does not match rows of length {pair.n}")
            out.append(pair)
    return out


def barba_from_circulant_ew(pair: CirculantPair) -> RootMatrix:
    """B = (R'-S')/2 + i(R'+S')/2 with R' = R^T and S' = P S (P the reversal)."""
    n = pair.n
    r = [[pair.row_r[(i - j) % n] for j in range(n)] for i in range(n)]  # R^T
    s = [[pair.row_s[(j - (n - 1 - i)) % n] for j in range(n)] for i in range(n)]  # P S
    enc = {(1, 1): 1, (-1, -1): 3, (1, -1): 0, (-1, 1): 2}
    out = RootMatrix.make([[enc[(r[i][j], s[i][j])] for j in range(n)] for i in range(n)], 4)
    _require(is_barba(out), f"Barba Gram (n-1)I + J at order {n}")
    return out


def ew_from_barba(b: RootMatrix) -> RootMatrix:
    """[[B, B], [-B, B]] for a real Barba matrix B."""
    if b.m != 2 or not is_barba(b):
        raise ConstructionError("ew_from_barba needs a real Barba matrix")
    rows = [list(r) + list(r) for r in b.rows] + [[(e + 1) % 2 for e in r] + list(r) for r in b.rows]
    out = RootMatrix.make(rows, 2)
    _require(is_ew(out), "EW Gram block structure")
    return out


# --------------------------------------------------------------------------
# exterior powers


def _minors_to_roots(minors, divisor: CycInt, m: int) -> RootMatrix:
    rows = []
    for r in minors:
        row = []
        for z in r:
            try:
                row.append(root_exponent(z.exact_div(divisor)))
            except (ArithmeticError, ValueError) as exc:
                raise ConstructionError("minors are not uniformly divisible; input is not Hadamard") from exc
        rows.append(row)
    return RootMatrix.make(rows, m, True)


def wedge_weighing(h: RootMatrix, k: int) -> RootMatrix:
    """W(C(n,k), n^k / 2^(2k-2)) from a real Hadamard matrix, k in {2, 3}."""
    if k not in (2, 3):
        raise ConstructionError("k must be 2 or 3")
    if h.m != 2 or not is_hadamard(h):
        raise ConstructionError("wedge_weighing needs a real Hadamard matrix")
    n = h.n
    minors = wedge_minors(h.to_cyc(), k)
    out = _minors_to_roots(minors, CycInt.from_int(2 ** (k - 1), 2), 2)
    weight = n**k // 4 ** (k - 1)
    _require(is_weighing(out, weight), f"W({comb(n, k)},{weight})")
    return out


def gw_from_bh3(h: RootMatrix) -> RootMatrix:
    """GW(C(n,2), n^2/3; 6) as the exterior square of a BH(n,3) divided by sqrt(-3)."""
    if h.m != 3 or not is_hadamard(h):
        raise ConstructionError("gw_from_bh3 needs a BH(n,3)")
    x = h.lift(6)
    sqrt_m3 = CycInt.root(2, 6) - CycInt.root(4, 6)  # omega - omega^2
    out = _minors_to_roots(wedge_minors(x.to_cyc(), 2), sqrt_m3, 6)
    n = h.n
    _require(is_weighing(out, n * n // 3), f"GW({comb(n, 2)},{n * n // 3};6)")
    return out


def gram_product(a: RootMatrix, b: RootMatrix):
    """A B* as a CycInt matrix (helper for block-orthogonality checks)."""
    return matmul(a.to_cyc(), conj_transpose(b.to_cyc()))


CONSTRUCTORS = {
    "fourier": (fourier, (int,)),
    "paley-core": (paley_core, (int, int)),
    "gw-paley": (gw_paley, (int, int)),
    "complex-paley": (complex_paley, (int,)),
    "butson-2p": (butson_2p, (int,)),
    "bush-fourier": (lambda n: bush(fourier(n)), (int,)),
    "core-fourier": (lambda n: core(fourier(n))[0], (int,)),
    "turyn-complex-paley": (lambda q: turyn(complex_paley(q)), (int,)),
    "scarpis-fourier": (lambda q: scarpis(fourier(q + 1), gh_field(q)), (int,)),
}
