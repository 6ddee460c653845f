"""Random-restart clique search for h x h Hadamard submatrices of Paley cores."""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from _config import dump, parse_config

from maxdet.search import paley_submatrix


@dataclass
class SubmatrixConfig:
    primes: list[int] = field(default_factory=lambda: [971, 983, 997])
    h: int = 12
    rows: int = 700
    seed: int = 1
    max_trials: int = 1000


def run(cfg: SubmatrixConfig) -> dict:
    out = {}
    for p in cfg.primes:
        t0 = time.perf_counter()
        hit = paley_submatrix(p, cfg.h, cfg.rows, seed=cfg.seed, max_trials=cfg.max_trials)
        rec = {"seconds": round(time.perf_counter() - t0, 2)}
        if hit is None:
            rec["found"] = False
        else:
            h = np.array(hit.matrix())
            rec.update(found=True, trials=hit.trials, rows=list(hit.rows), cols=list(hit.cols),
                       verified=bool(np.array_equal(h @ h.T, cfg.h * np.eye(cfg.h, dtype=int))))
        out[str(p)] = rec
    return out


if __name__ == "__main__":
    cfg = parse_config(SubmatrixConfig)
    print(dump(cfg, run(cfg)))
