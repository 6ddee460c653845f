"""Shared random generators for the test suite."""
from __future__ import annotations

import random

from maxdet.exactalg import RootMatrix


def random_root_matrix(rng: random.Random, n: int, m: int) -> RootMatrix:
    return RootMatrix.make([[rng.randrange(m) for _ in range(n)] for _ in range(n)], m)


def random_monomial(rng: random.Random, mat: RootMatrix) -> RootMatrix:
    """P D1 M D2 Q for random permutations P, Q and unit diagonals D1, D2."""
    n, m = mat.n, mat.m
    rp, cp = list(range(n)), list(range(n))
    rng.shuffle(rp)
    rng.shuffle(cp)
    dr = [rng.randrange(m) for _ in range(n)]
    dc = [rng.randrange(m) for _ in range(n)]
    rows = [[(mat.rows[rp[i]][cp[j]] + dr[i] + dc[j]) % m for j in range(n)] for i in range(n)]
    return RootMatrix.make(rows, m)


def to_complex(mat: RootMatrix):
    """Floating-point image of a RootMatrix (zeros for weighing entries)."""
    import numpy as np

    z = np.zeros((mat.n, mat.n), dtype=complex)
    for i, r in enumerate(mat.rows):
        for j, e in enumerate(r):
            if e is not None:
                z[i, j] = np.exp(2j * np.pi * e / mat.m)
    return z


def numeric_gram(mat: RootMatrix):
    z = to_complex(mat)
    return z @ z.conj().T


def gram_is(mat: RootMatrix, diag: float, off: float, tol: float = 1e-8) -> bool:
    import numpy as np

    n = mat.n
    want = off * np.ones((n, n)) + (diag - off) * np.eye(n)
    return bool(np.allclose(numeric_gram(mat), want, atol=tol * n))
