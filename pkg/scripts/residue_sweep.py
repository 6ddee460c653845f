"""Which primes admit the 4p or 12p quadratic residue pattern."""
from __future__ import annotations

from dataclasses import dataclass

from _config import dump, parse_config

from maxdet.numtheory import primes_up_to
from maxdet.search import S4P_MINUS, S4P_PLUS, S12P_MINUS, S12P_PLUS, residue_pattern

PATTERNS = {"4p": (S4P_PLUS, S4P_MINUS), "12p": (S12P_PLUS, S12P_MINUS)}


@dataclass
class SweepConfig:
    pattern: str = "4p"
    start: int = 3
    stop: int = 15061


def run(cfg: SweepConfig) -> dict:
    plus, minus = PATTERNS[cfg.pattern]
    primes = [p for p in primes_up_to(cfg.stop) if p >= cfg.start]
    hits = {p: residue_pattern(p, plus, minus) for p in primes}
    found = [p for p, r in hits.items() if r is not None]
    missing = [p for p, r in hits.items() if r is None]
    return {"constraints": len(plus) + len(minus), "primes": len(primes), "found": len(found),
            "missing": missing if len(missing) <= 50 else missing[:50] + ["..."],
            "first_shifts": {str(p): hits[p] for p in found[:20]}}


if __name__ == "__main__":
    cfg = parse_config(SweepConfig)
    print(dump(cfg, run(cfg)))
