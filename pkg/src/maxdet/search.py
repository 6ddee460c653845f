"""Certified maximal-determinant search and the randomized/residue searches for Butson matrices."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, permutations, product
from math import comb

import numpy as np

from .analysis import divisibility_check, sigma
from .exactalg import CycInt, RootMatrix, charpoly_int, det_abs2, det_exact, gram
from .numtheory import factorize, is_prime, is_square, legendre, squarefree_part

R_MAX = 6
EXHAUSTIVE_BUDGET = 3_000_000  # |Phi|^r vectors evaluated per d-hat
CANON_PERM_LIMIT = 50_000


# --------------------------------------------------------------------------
# candidate inner products


@dataclass
class CandidateSet:
    """Every inner product of two length-n rows over mu_m, ordered for extension."""

    m: int
    n: int
    Phi: list[CycInt]
    abs2: dict[CycInt, int]
    c: int

    @classmethod
    def build(cls, n: int, m: int) -> CandidateSet:
        if m not in (2, 3, 4, 6):
            raise ValueError("candidate sets are built for m in {2, 3, 4, 6}")
        vals = set()
        for combo in combinations_with_replacement(range(m), n):
            cnt = [0] * m
            for k in combo:
                cnt[k] += 1
            vals.add(CycInt.of(cnt, m))
        a2 = {v: v.abs2().to_int() for v in vals}
        order = sorted(vals, key=lambda v: (-a2[v], v.c))
        return cls(m, n, order, a2, sigma(m, n))

    @property
    def usable(self) -> list[CycInt]:
        """Values a positive-definite Gram can hold off the diagonal (|v| < n)."""
        return [v for v in self.Phi if self.abs2[v] < self.n * self.n]


@dataclass(frozen=True)
class PruneBound:
    d_hat: int
    bound: int
    exhaustive: bool = True


def _cplx(g) -> np.ndarray:
    return np.array([[complex(z) for z in r] for r in g], dtype=complex)


def _adjugate(a: np.ndarray) -> tuple[np.ndarray, float]:
    d = np.linalg.det(a).real
    return np.linalg.inv(a) * d, d


def _min_form(adj: np.ndarray, vals: np.ndarray, r: int, budget: int = EXHAUSTIVE_BUDGET) -> tuple[int, bool]:
    """min over gamma in vals^r of gamma* adj gamma (an integer), plus exhaustiveness flag."""
    k = len(vals)
    if r <= R_MAX and k**r <= budget:
        best = None
        # chunk over the first coordinate to bound memory
        rest = np.array(list(product(range(k), repeat=r - 1)), dtype=np.int64).reshape(-1, r - 1) if r > 1 else None
        for i0 in range(k):
            if rest is None:
                g = vals[[i0]].reshape(1, 1)
            else:
                g = np.concatenate([np.full((rest.shape[0], 1), vals[i0]), vals[rest]], axis=1)
            q = np.einsum("ki,ij,kj->k", g.conj(), adj, g).real
            mq = q.min()
            best = mq if best is None else min(best, mq)
        return int(round(best)), True
    # relaxation: gamma* A gamma >= lambda_min(A) |gamma|^2 >= lambda_min(A) r c^2
    lam = float(np.linalg.eigvalsh(adj).min())
    cmin = float(np.abs(vals).min())
    lower = lam * r * cmin * cmin
    return int(np.floor(lower - 1e-6 * max(1.0, abs(lower)))) - 1, False


def mk_bound(d, cands: CandidateSet, ell: int, values=None) -> PruneBound:
    """Upper bound on det of any ell x ell extension of the r x r Gram block d.

    `values` restricts the entries allowed in the extension (default: every usable value).
    """
    r = len(d)
    n, c = cands.n, cands.c
    if not r < ell <= n:
        raise ValueError("need r < ell <= n")
    a = _cplx(d)
    if np.linalg.eigvalsh(a).min() <= 0:
        raise ValueError("D is not positive definite")
    det_d = det_exact(d).to_int()
    if c == 0:
        # Fischer and Hadamard: det M <= det D * n^(ell - r)
        return PruneBound(0, det_d * n ** (ell - r))
    adj, _ = _adjugate(a)
    vals = np.array([complex(v) for v in (cands.usable if values is None else values)])
    q, exact = _min_form(adj, vals, r)
    d_hat = c * det_d - q
    bound = (n - c) ** (ell - r - 1) * ((n - c) * det_d + (ell - r) * max(0, d_hat))
    return PruneBound(d_hat, bound, exact)


# --------------------------------------------------------------------------
# canonical form under monomial conjugation


class _Codes:
    """Integer codes for Phi values with rotation and conjugation tables."""

    def __init__(self, cands: CandidateSet):
        m = cands.m
        self.m = m
        vals = list(cands.Phi)
        zero = CycInt.zero(m)
        if zero not in vals:
            vals.append(zero)
        self.vals = vals
        self.index = {v: i for i, v in enumerate(vals)}
        roots = [CycInt.root(k, m) for k in range(m)]
        self.rot = [[self.index[v * roots[k]] for k in range(m)] for v in vals]
        self.cj = [self.index[v.conj()] for v in vals]
        self.zero = self.index[zero]
        self.a2 = [v.abs2().to_int() for v in vals]


def _canon_one(code, order, codes: _Codes) -> tuple:
    """Least encoding for a fixed vertex order, minimised over unit conjugations.

    Each vertex's unit is forced by its first nonzero entry with an already placed
    vertex, since distinct rotations of a nonzero value are distinct. A vertex that
    starts a new component takes unit 1 without loss. The remaining case, an unplaced
    vertex joined to earlier ones only through later vertices, is branched over.
    """
    k = len(order)
    m, rot, zero = codes.m, codes.rot, codes.zero
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i in range(k):
        for j in range(i + 1, k):
            if code[order[i]][order[j]] != zero:
                parent[find(i)] = find(j)
    first_in_comp = {}
    for i in range(k):
        first_in_comp.setdefault(find(i), i)

    def run(i, d, out):
        if i == k:
            return tuple(out)
        if d[i] is None:
            if first_in_comp[find(i)] == i:
                choices = (0,)
            else:
                choices = range(m)
            best = None
            for t in choices:
                d2 = list(d)
                d2[i] = t
                enc = run(i, d2, out)
                if best is None or enc < best:
                    best = enc
            return best
        oi = order[i]
        d = list(d)
        out = list(out)
        for j in range(i + 1, k):
            x = code[oi][order[j]]
            if x == zero:
                out.append(x)
                continue
            if d[j] is None:
                # conj(u^{d_i}) x u^{t} = x u^{t - d_i}
                y, t = min((rot[x][(t - d[i]) % m], t) for t in range(m))
                out.append(y)
                d[j] = t
            else:
                out.append(rot[x][(d[j] - d[i]) % m])
        return run(i + 1, d, out)

    return run(0, [None] * k, [])


def canonical_form(code, codes: _Codes, limit: int = CANON_PERM_LIMIT) -> tuple:
    """Lexicographically least encoding over symmetric permutations and unit conjugations.

    Vertices are first grouped by an isomorphism-invariant signature; permutations are
    searched only inside groups. Past `limit` permutations the key falls back to the
    identity order inside groups, which can only fail to merge equivalent matrices.
    """
    k = len(code)
    sig = [tuple(sorted(codes.a2[code[i][j]] for j in range(k) if j != i)) for i in range(k)]
    groups: dict[tuple, list[int]] = {}
    for i in range(k):
        groups.setdefault(sig[i], []).append(i)
    keys = sorted(groups, reverse=True)
    blocks = [groups[s] for s in keys]
    total = 1
    for b in blocks:
        for t in range(2, len(b) + 1):
            total *= t
    if total > limit:
        order = [v for b in blocks for v in b]
        return (k, tuple(keys), _canon_one(code, order, codes))
    best = None
    for choice in product(*(permutations(b) for b in blocks)):
        order = [v for b in choice for v in b]
        enc = _canon_one(code, order, codes)
        if best is None or enc < best:
            best = enc
    return (k, tuple(keys), best)


# --------------------------------------------------------------------------
# Gram enumeration


@dataclass
class EnumStats:
    nodes: list[int] = field(default_factory=list)  # surviving classes per size
    pruned: int = 0
    phi_levels: list[int] = field(default_factory=list)


def _gram_from_code(code, codes: _Codes, n: int) -> list[list[CycInt]]:
    m = codes.m
    nn = CycInt.from_int(n, m)
    return [[nn if i == j else codes.vals[code[i][j]] for j in range(len(code))] for i in range(len(code))]


def gram_enumerate(n: int, m: int, det_lower_sq: int, stats: EnumStats | None = None,
                   shrink: bool = True, prune: bool = True):
    """Yield every candidate n x n Gram (up to m-isomorphism) with det >= det_lower_sq.

    Level by level over sizes, with the extension bound applied at every size below n.
    `prune=False` keeps every positive-definite block (used to audit the pruning).
    For m = 2 the determinant must also be a perfect square.
    """
    cands = CandidateSet.build(n, m)
    codes = _Codes(cands)
    usable = [codes.index[v] for v in cands.usable]
    stats = stats if stats is not None else EnumStats()
    cvals = np.array([complex(codes.vals[i]) for i in range(len(codes.vals))])
    c = cands.c
    level = {canonical_form([[codes.zero]], codes): [[codes.zero]]}
    stats.nodes.append(1)
    for size in range(1, n):
        new: dict[tuple, list[list[int]]] = {}
        seen_vals: set[int] = set()
        uv = np.array(usable, dtype=np.int64)
        for code in level.values():
            g = _gram_from_code(code, codes, n)
            a = _cplx(g)
            adj, det_d = _adjugate(a)
            det_d = det_exact(g).to_int()
            k = len(uv)
            idx = np.array(list(product(range(k), repeat=size)), dtype=np.int64).reshape(-1, size)
            gam = cvals[uv[idx]]
            q = np.einsum("ki,ij,kj->k", gam.conj(), adj, gam).real
            det_new = n * det_d - q
            ext = size + 1
            if ext == n:
                keep = det_new >= det_lower_sq - 0.5
            else:
                # cheap necessary condition from d-hat <= c det
                cheap = (n - c) ** (n - ext - 1) * ((n - c) + (n - ext) * c) * det_new if c else det_new * n ** (n - ext)
                keep = (det_new > 0.5) & ((cheap >= det_lower_sq - 0.5) | (not prune))
            stats.pruned += int((~keep).sum())
            for row in idx[keep]:
                col = [int(uv[t]) for t in row]
                child = [list(r) + [col[i]] for i, r in enumerate(code)]
                child.append([codes.cj[x] for x in col] + [codes.zero])
                key = canonical_form(child, codes)
                if key in new:
                    continue
                cg = _gram_from_code(child, codes, n)
                dval = det_exact(cg).to_int()
                if dval <= 0:
                    continue
                if ext == n:
                    if dval < det_lower_sq:
                        continue
                    if m == 2 and not is_square(dval):
                        # a real Gram has det(M)^2 as determinant
                        continue
                elif prune and mk_bound(cg, cands, n, [codes.vals[u] for u in usable]).bound < det_lower_sq:
                    stats.pruned += 1
                    continue
                new[key] = child
        for child in new.values():
            for r in child:
                for x in r:
                    seen_vals.update(codes.rot[x])
                    seen_vals.update(codes.rot[codes.cj[x]])
        if shrink and prune and size + 1 < n:
            # values absent from every surviving block cannot appear deeper either
            usable = [u for u in usable if u in seen_vals]
        stats.phi_levels.append(len(usable))
        stats.nodes.append(len(new))
        level = new
    for key in sorted(level):
        yield _gram_from_code(level[key], codes, n)


# --------------------------------------------------------------------------
# certificates


@dataclass
class Elimination:
    gram: list
    det_sq: int
    reason: str
    detail: dict


@dataclass
class Certificate:
    n: int
    m: int
    target_det_sq: int
    candidates: int
    survivors: list
    eliminations: list[Elimination]

    @property
    def certified(self) -> bool:
        return not self.survivors

    def reason_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for e in self.eliminations:
            out[e.reason] = out.get(e.reason, 0) + 1
        return out


def norm_obstruction(value: int, m: int) -> int | None:
    """Prime inert in Q(zeta_m) dividing the squarefree part of value, or None."""
    bad = {3: 2, 6: 2, 4: 3}[m]
    for p in factorize(squarefree_part(value)).primes():
        if p % {3: 3, 6: 3, 4: 4}[m] == bad:
            return p
    return None


def eliminate(g, m: int, target: int) -> Elimination | None:
    """Reason a candidate Gram cannot come from a mu_m matrix beating the target, or None."""
    n = len(g)
    d = det_exact(g).to_int()
    if d <= target:
        return Elimination(g, d, "REALIZED_SMALLER", {"det": d, "target": target})
    p = norm_obstruction(d, m)
    if p is not None:
        return Elimination(g, d, "NORM_OBSTRUCTION", {"prime": p})
    q = {3: 3, 6: 3, 4: 2}[m]
    if d % q ** (n - 1):
        return Elimination(g, d, "DIVISIBILITY", {"prime": q, "power": n - 1})
    cp = charpoly_int(g)
    for i in range(1, n + 1):
        if cp[i] % q ** (i - 1):
            return Elimination(g, d, "CHARPOLY", {"index": i, "coefficient": cp[i]})
    return None


def recheck_elimination(e: Elimination, m: int) -> bool:
    n = len(e.gram)
    d = det_exact(e.gram).to_int()
    if d != e.det_sq:
        return False
    if e.reason == "REALIZED_SMALLER":
        return d <= e.detail["target"]
    if e.reason == "NORM_OBSTRUCTION":
        p = e.detail["prime"]
        return squarefree_part(d) % p == 0 and norm_obstruction(p, m) == p
    if e.reason == "DIVISIBILITY":
        return d % e.detail["prime"] ** (n - 1) != 0
    if e.reason == "CHARPOLY":
        i = e.detail["index"]
        q = {3: 3, 6: 3, 4: 2}[m]
        return charpoly_int(e.gram)[i] % q ** (i - 1) != 0
    return False


def certify_max(n: int, m: int, target: RootMatrix, stats: EnumStats | None = None) -> Certificate:
    """Enumerate Grams at or above the target's |det|^2 and eliminate every one above it."""
    if m not in (3, 4):
        raise ValueError("certify_max handles m in {3, 4}")
    if target.n != n or target.m != m:
        raise ValueError("target matrix has the wrong shape or root order")
    divisibility_check(target)
    t = det_abs2(target)
    survivors, elim = [], []
    count = 0
    for g in gram_enumerate(n, m, t, stats):
        d = det_exact(g).to_int()
        if d > t:
            count += 1
        e = eliminate(g, m, t)
        if e is None:
            survivors.append(g)
        else:
            elim.append(e)
    return Certificate(n, m, t, count, survivors, elim)


# --------------------------------------------------------------------------
# brute-force oracle


@dataclass(frozen=True)
class ExhaustiveResult:
    det_sq: int
    witness: RootMatrix
    examined: int


def exhaustive_maxdet(n: int, m: int, budget: int = 5_000_000) -> ExhaustiveResult:
    """Maximum |det|^2 over mu_m matrices, searching dephased matrices with sorted distinct rows."""
    if n == 1:
        return ExhaustiveResult(1, RootMatrix.make([[0]], m), 1)
    rows = list(product(range(m), repeat=n - 1))
    total = comb(len(rows), n - 1)
    if total > budget:
        raise ValueError(f"exhaustive search needs {total} cases, budget {budget}")
    roots = np.exp(2j * np.pi * np.arange(m) / m)
    vecs = np.concatenate([np.ones((len(rows), 1)), roots[np.array(rows)]], axis=1)
    top = np.ones(n, dtype=complex)
    best, best_idx = -1.0, None
    combos = itertools.combinations(range(len(rows)), n - 1)
    chunk = 200_000
    while True:
        block = np.array(list(itertools.islice(combos, chunk)), dtype=np.int64)
        if block.size == 0:
            break
        mats = np.empty((len(block), n, n), dtype=complex)
        mats[:, 0, :] = top
        mats[:, 1:, :] = vecs[block]
        d2 = np.abs(np.linalg.det(mats)) ** 2
        i = int(d2.argmax())
        if d2[i] > best + 0.5:
            best, best_idx = float(d2[i]), block[i]
    w = RootMatrix.make([[0] * n] + [[0] + list(rows[t]) for t in best_idx], m)
    exact = det_abs2(w)
    if abs(exact - best) > 0.5 + 1e-9 * best:
        raise ArithmeticError("floating determinant disagrees with exact value")
    return ExhaustiveResult(exact, w, total)


# --------------------------------------------------------------------------
# orthogonality graphs and cliques


@dataclass
class Graph:
    n: int
    adj: list[int]  # bitsets

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.adj[i] >> j & 1)

    def edges(self) -> int:
        return sum(bin(a).count("1") for a in self.adj) // 2


def orth_graph(rows) -> Graph:
    """Vertices are rows; edges join orthogonal pairs."""
    arr = np.asarray(rows, dtype=np.int64)
    if arr.ndim != 2:
        raise ValueError("rows must have equal length")
    ip = arr @ arr.T
    n = len(arr)
    adj = []
    for i in range(n):
        nz = np.flatnonzero(ip[i] == 0)
        b = 0
        for j in nz:
            if j != i:
                b |= 1 << int(j)
        adj.append(b)
    return Graph(n, adj)


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _color_bound(cand: int, adj: list[int]) -> tuple[list[int], list[int]]:
    """Greedy sequential colouring; returns vertices and their colour numbers ascending."""
    order, colors = [], []
    uncolored = cand
    color = 0
    while uncolored:
        color += 1
        avail = uncolored
        while avail:
            v = (avail & -avail).bit_length() - 1
            avail &= ~(1 << v)
            avail &= ~adj[v]
            uncolored &= ~(1 << v)
            order.append(v)
            colors.append(color)
    return order, colors


def max_clique(g: Graph, k: int | None = None) -> list[int] | None:
    """Maximum clique by colouring branch and bound; with k, the first clique of size k or None."""
    adj = g.adj
    best: list[int] = []
    target = k

    def expand(clique: list[int], cand: int) -> bool:
        nonlocal best
        order, colors = _color_bound(cand, adj)
        for idx in range(len(order) - 1, -1, -1):
            if len(clique) + colors[idx] <= len(best):
                return False
            if target is not None and len(clique) + colors[idx] < target:
                return False
            v = order[idx]
            nc = clique + [v]
            sub = cand & adj[v]
            if sub:
                if expand(nc, sub):
                    return True
            elif len(nc) > len(best):
                best = nc
                if target is not None and len(best) >= target:
                    return True
            cand &= ~(1 << v)
        return False

    if g.n == 0:
        return [] if not k else None
    if target is not None:
        # degrees below k-1 can never sit in a k-clique; peel them iteratively
        alive = (1 << g.n) - 1
        changed = True
        while changed:
            changed = False
            for v in _bits(alive):
                if bin(adj[v] & alive).count("1") < target - 1:
                    alive &= ~(1 << v)
                    changed = True
        if target <= 1:
            return [0] if g.n else None
        expand([], alive)
        return sorted(best) if len(best) >= target else None
    expand([], (1 << g.n) - 1)
    if not best:
        best = [0]
    return sorted(best)


def clique_oracle(g: Graph) -> int:
    """Clique number by brute force over subsets (small graphs only)."""
    best = 1 if g.n else 0
    for size in range(2, g.n + 1):
        found = False
        for sub in itertools.combinations(range(g.n), size):
            if all(g.has_edge(a, b) for a, b in itertools.combinations(sub, 2)):
                found = True
                break
        if not found:
            break
        best = size
    return best


# --------------------------------------------------------------------------
# Hadamard submatrices of the Paley core


@dataclass(frozen=True)
class SubmatrixHit:
    p: int
    rows: tuple[int, ...]
    cols: tuple[int, ...]
    trials: int

    def matrix(self) -> list[list[int]]:
        return [[legendre(i - j, self.p) for j in self.cols] for i in self.rows]


def _is_hadamard_pm(h) -> bool:
    a = np.asarray(h, dtype=np.int64)
    return bool((a @ a.T == len(a) * np.eye(len(a), dtype=np.int64)).all())


def paley_submatrix(p: int, h: int, row_sample: int | None = None, seed: int = 0,
                    max_trials: int = 1000) -> SubmatrixHit | None:
    """Random column sets of the Paley core, then an h-clique among orthogonal restricted rows."""
    if not is_prime(p) or p < 3:
        raise ValueError("p must be an odd prime")
    if h > p - h or h < 1:
        return None
    rng = random.Random(seed)
    chi = np.array([0] + [legendre(x, p) for x in range(1, p)], dtype=np.int64)
    for trial in range(1, max_trials + 1):
        cols = sorted(rng.sample(range(p), h))
        rest = [i for i in range(p) if i not in set(cols)]
        if row_sample is not None and row_sample < len(rest):
            rest = sorted(rng.sample(rest, row_sample))
        sub = chi[(np.array(rest)[:, None] - np.array(cols)[None, :]) % p]
        clique = max_clique(orth_graph(sub), h)
        if clique is None:
            continue
        rows = tuple(rest[i] for i in clique)
        hit = SubmatrixHit(p, rows, tuple(cols), trial)
        if not _is_hadamard_pm(hit.matrix()):
            raise AssertionError("clique does not give a Hadamard submatrix")
        return hit
    return None


# --------------------------------------------------------------------------
# quadratic residue patterns

S4P_PLUS = (0, 6, 16)
S4P_MINUS = (3, 8, 11)

S12P_PLUS = (0, 11, 13, 28, 45, 64, 67, 69, 75, 85, 108, 120, 124, 132, 133, 144, 160, 164,
             172, 181, 183, 184, 189, 199, 200, 204, 208, 213, 216, 220, 228, 231, 244, 304, 308,
             316, 389, 391, 451)
S12P_MINUS = (24, 37, 39, 52, 56, 84, 88, 96, 101, 103, 109, 119, 139, 141, 147, 157, 171, 227,
              229, 235, 245, 252, 256, 259, 264, 276, 277, 279, 285, 295, 331, 333, 339, 360, 364, 420)


def residue_pattern(p: int, s_plus, s_minus) -> int | None:
    """Smallest r mod p with (r+a|p) = +1 on s_plus and -1 on s_minus, or None."""
    if p < 3 or not is_prime(p):
        return None
    plus = {a % p for a in s_plus}
    minus = {a % p for a in s_minus}
    if plus & minus:
        return None
    qr = np.zeros(p, dtype=np.int8)
    qr[(np.arange(1, p) ** 2) % p] = 1
    chi = np.where(qr == 1, 1, -1).astype(np.int8)
    chi[0] = 0
    r = np.arange(p)
    ok = np.ones(p, dtype=bool)
    for a in plus:
        ok &= chi[(r + a) % p] == 1
    for a in minus:
        ok &= chi[(r + a) % p] == -1
    hits = np.flatnonzero(ok)
    return int(hits[0]) if hits.size else None


def residue_sweep(limit: int, s_plus=S4P_PLUS, s_minus=S4P_MINUS) -> list[int]:
    """Primes p <= limit admitting a residue pattern."""
    from .numtheory import primes_up_to

    return [p for p in primes_up_to(limit) if residue_pattern(p, s_plus, s_minus) is not None]


__all__ = [
    "CandidateSet", "PruneBound", "mk_bound", "canonical_form", "gram_enumerate", "EnumStats",
    "Certificate", "Elimination", "certify_max", "eliminate", "recheck_elimination",
    "norm_obstruction", "exhaustive_maxdet", "ExhaustiveResult", "Graph", "orth_graph",
    "max_clique", "clique_oracle", "paley_submatrix", "SubmatrixHit", "residue_pattern",
    "residue_sweep", "S4P_PLUS", "S4P_MINUS", "S12P_PLUS", "S12P_MINUS",
]
