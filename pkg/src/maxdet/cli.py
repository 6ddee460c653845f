"""Command-line front end: constructions, verification, bounds, feasibility tests, tables and searches.

Exit codes: 0 on success or an inconclusive feasibility test, 1 when a verification fails or a
feasibility test proves nonexistence (``--lenient`` maps the latter to 0), 2 on usage errors.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Sequence

from . import constructions as cons
from . import feasibility as feas
from . import search
from .analysis import bounds, classify_gram, verify
from .exactalg import RumParseError, det_abs2, format_rum, gram, parse_rum
from .qforms import FeasibilityReport

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass
class RunReport:
    command: str
    parameters: dict
    outputs: dict = field(default_factory=dict)
    ok: bool = True
    seed: int | None = None
    corpus_checksums: dict = field(default_factory=dict)
    timing: float | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2, default=_json_default)


def _json_default(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, (set, frozenset, tuple)):
        return list(v)
    return str(v)


def pool_size() -> int:
    try:
        return max(1, int(os.environ.get("MAXDET_THREADS", "1")))
    except ValueError:
        return 1


def _pool_map(fn: Callable, items: list) -> list:
    k = pool_size()
    if k == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=k) as ex:
        return list(ex.map(fn, items))


# --------------------------------------------------------------------------
# corpus


def corpus_dir() -> Path:
    return Path(str(resources.files("maxdet") / "corpus"))


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def resolve_matrix_path(name: str) -> Path:
    """A literal path, or a bundled corpus file given as 'corpus/B_7.rum' or 'B_7'."""
    p = Path(name)
    if p.exists():
        return p
    stem = p.name if p.suffix else p.name + ".rum"
    q = corpus_dir() / stem
    if q.exists():
        return q
    raise FileNotFoundError(name)


def read_claims(directory: Path) -> list[tuple[str, str]]:
    rows = []
    for line in (directory / "claims.tsv").read_text().splitlines()[1:]:
        if line.strip():
            f, c = line.split("\t")
            rows.append((f, c))
    return rows


def _check_one(item: tuple[str, str, str]) -> dict:
    path, fname, claim = item
    entry = {"file": fname, "claim": claim}
    try:
        mat = parse_rum(Path(path).read_text(), fname)
    except RumParseError as exc:
        entry.update(ok=False, error=f"parse error: {exc}")
        return entry
    res = verify(mat, claim)
    entry.update(ok=res.ok, found=res.found)
    if not res.ok:
        entry["error"] = res.diagnostics.get("error", "Gram mismatch")
    return entry


def corpus_check(directory: str | Path | None = None) -> RunReport:
    """Verify every matrix listed in claims.tsv against its claimed tag."""
    d = Path(directory) if directory is not None else corpus_dir()
    claims = read_claims(d)
    items = [(str(d / f), f, c) for f, c in claims]
    results = _pool_map(_check_one, items)
    failures = [r for r in results if not r["ok"]]
    rep = RunReport("corpus", {"directory": d.name})
    rep.outputs = {"total": len(results), "passed": len(results) - len(failures), "results": results}
    rep.ok = not failures
    rep.corpus_checksums = {f: _sha256(d / f) for f, _ in claims}
    return rep


# --------------------------------------------------------------------------
# subcommands; each returns a RunReport


def _feas_report(rep: FeasibilityReport) -> dict:
    return rep.to_dict()


FEASIBILITY_TESTS: dict[str, tuple[Callable, tuple[str, ...]]] = {
    "brc": (feas.brc, ("v", "k", "lam")),
    "gdd": (lambda n, m, r, l1, l2: feas.bose_connor(feas.GddParams(n, m, r, l1, l2)), ("n", "m", "r", "lam1", "lam2")),
    "tamura": (feas.tamura, ("m",)),
    "butson": (feas.butson_pf, ("n", "p", "f")),
    "quh": (feas.quh, ("n", "m")),
    "barba3": (feas.barba3, ("n",)),
    "barba4": (feas.barba4, ("n",)),
    "norm": (feas.norm_test, ("value", "m")),
}


def cmd_feasible(a) -> RunReport:
    fn, names = FEASIBILITY_TESTS[a.test]
    vals = list(a.args)
    if a.test == "butson" and len(vals) == 2:
        vals.append(1)
    if len(vals) != len(names):
        raise _Usage(f"feasible {a.test} expects {len(names)} integers: {' '.join(names)}")
    params = dict(zip(names, vals))
    rep = fn(*vals)
    r = RunReport("feasible", {"test": a.test, **params}, {"report": _feas_report(rep)})
    r.ok = not rep.infeasible or a.lenient
    r.outputs["text"] = f"{rep.verdict.value}" + (f" {rep.reason}" if rep.reason else "") + (
        f" ({rep.note})" if rep.note else "")
    return r


def cmd_bounds(a) -> RunReport:
    b = bounds(a.n, a.m)
    d = b.to_dict()
    text = "\n".join(f"{k}\t{v}" for k, v in d.items())
    return RunReport("bounds", {"n": a.n, "m": a.m}, {**d, "text": text})


def cmd_construct(a) -> RunReport:
    if a.name not in cons.CONSTRUCTORS:
        raise _Usage(f"unknown construction {a.name!r}; choose from {', '.join(sorted(cons.CONSTRUCTORS))}")
    fn, types = cons.CONSTRUCTORS[a.name]
    if len(a.args) != len(types):
        raise _Usage(f"construct {a.name} expects {len(types)} integer argument(s)")
    mat = fn(*a.args)
    text = format_rum(mat, [f"{a.name} {' '.join(map(str, a.args))}"])
    out = {"n": mat.n, "m": mat.m, "class": classify_gram(gram(mat)).tag, "sha256": hashlib.sha256(text.encode()).hexdigest()}
    if a.output:
        Path(a.output).write_text(text)
        out["path"] = a.output
    else:
        out["matrix"] = text
    out["text"] = text if not a.output else f"wrote {a.output} ({out['class']})"
    return RunReport("construct", {"name": a.name, "args": list(a.args)}, out)


def _lookup_claim(path: Path) -> str | None:
    claims = path.parent / "claims.tsv"
    if claims.exists():
        for f, c in read_claims(path.parent):
            if f == path.name:
                return c
    return None


def cmd_verify(a) -> RunReport:
    try:
        path = resolve_matrix_path(a.file)
    except FileNotFoundError:
        raise _Usage(f"no such matrix file: {a.file}")
    r = RunReport("verify", {"file": path.name, "claim": a.claim})
    r.corpus_checksums = {path.name: _sha256(path)}
    try:
        mat = parse_rum(path.read_text(), path.name)
    except RumParseError as exc:
        r.ok = False
        r.outputs = {"error": f"parse error: {exc}", "text": f"FAIL {path.name}: parse error: {exc}"}
        return r
    claim = a.claim or _lookup_claim(path)
    if claim is None:
        tag = classify_gram(gram(mat)).tag
        r.outputs = {"class": tag, "det_sq": det_abs2(mat), "text": f"{path.name}: {tag}"}
        return r
    try:
        res = verify(mat, claim)
    except ValueError as exc:
        raise _Usage(str(exc))
    r.parameters["claim"] = claim
    r.ok = res.ok
    r.outputs = {"found": res.found, "diagnostics": res.diagnostics}
    msg = "OK" if res.ok else "FAIL"
    r.outputs["text"] = f"{msg} {path.name}: claim {res.claim}, found {res.found}" + (
        "" if res.ok else f"; {res.diagnostics.get('error', '')}")
    return r


def cmd_tables(a) -> RunReport:
    params = {"table": a.table}
    if a.table == "planes":
        vals = feas.plane_orders_blocked(a.limit or 100)
        params["limit"] = a.limit or 100
        return RunReport("tables", params, {"orders": vals, "text": " ".join(map(str, vals))})
    if a.table == "tamura":
        lim = a.limit or 100_000
        vals = sorted(feas.tamura_scan(lim))
        params["limit"] = lim
        return RunReport("tables", params, {"values": vals, "text": " ".join(map(str, vals))})
    if a.table == "butson":
        lim = a.limit or 120
        p = a.prime or 3
        zeros = [n for n in range(1, lim + 1) if n % p == 0 and feas.butson_pf(n, p).infeasible]
        params.update(limit=lim, prime=p)
        return RunReport("tables", params, {"infeasible": zeros, "text": " ".join(map(str, zeros))})
    if a.table in feas.GDD_TABLES:
        tsv = feas.gdd_table_tsv(a.table)
        return RunReport("tables", params, {"rows": tsv.count("\n") - 1, "tsv": tsv, "text": tsv.rstrip("\n")})
    raise _Usage(f"unknown table {a.table!r}; choose from planes, tamura, butson, {', '.join(feas.GDD_TABLES)}")


def cmd_search(a) -> RunReport:
    kind = a.kind
    if kind == "exhaustive":
        res = search.exhaustive_maxdet(a.n, a.m)
        out = {"det_sq": res.det_sq, "examined": res.examined, "witness": format_rum(res.witness)}
        out["text"] = f"max |det|^2 = {res.det_sq} ({res.examined} matrices)\n" + out["witness"].rstrip()
        return RunReport("search exhaustive", {"n": a.n, "m": a.m}, out)
    if kind == "gram":
        stats = search.EnumStats()
        grams = list(search.gram_enumerate(a.n, a.m, a.lower, stats))
        from .exactalg import det_exact

        dets = sorted((det_exact(g).to_int() for g in grams), reverse=True)
        out = {"count": len(grams), "dets": dets, "nodes": stats.nodes, "pruned": stats.pruned}
        out["text"] = f"{len(grams)} Gram classes with |det|^2 >= {a.lower}: {dets}"
        return RunReport("search gram", {"n": a.n, "m": a.m, "lower": a.lower}, out)
    if kind == "certify":
        path = resolve_matrix_path(a.target)
        mat = parse_rum(path.read_text(), path.name)
        cert = search.certify_max(mat.n, mat.m, mat)
        out = {"target_det_sq": cert.target_det_sq, "candidates": cert.candidates,
               "survivors": len(cert.survivors), "reasons": cert.reason_counts(), "certified": cert.certified}
        out["text"] = (f"target {cert.target_det_sq}: {cert.candidates} candidate Grams, reasons "
                       f"{cert.reason_counts()}, survivors {len(cert.survivors)}")
        r = RunReport("search certify", {"target": path.name}, out, ok=cert.certified)
        r.corpus_checksums = {path.name: _sha256(path)}
        return r
    if kind == "paley-sub":
        hit = search.paley_submatrix(a.p, a.h, a.rows, seed=a.seed, max_trials=a.max_trials)
        params = {"p": a.p, "h": a.h, "rows": a.rows, "max_trials": a.max_trials}
        if hit is None:
            return RunReport("search paley-sub", params, {"found": False, "text": "no submatrix found"}, ok=False, seed=a.seed)
        out = {"found": True, "rows": list(hit.rows), "cols": list(hit.cols), "trials": hit.trials}
        out["text"] = f"rows {list(hit.rows)}\ncols {list(hit.cols)}\ntrials {hit.trials}"
        return RunReport("search paley-sub", params, out, seed=a.seed)
    if kind == "residue":
        sets = {"4p": (search.S4P_PLUS, search.S4P_MINUS), "12p": (search.S12P_PLUS, search.S12P_MINUS)}[a.pattern]
        from .numtheory import primes_up_to

        primes = [p for p in primes_up_to(a.limit) if p >= a.start]
        rs = _pool_map(_ResiduePattern(*sets), primes)
        hits = {p: r for p, r in zip(primes, rs) if r is not None}
        out = {"primes": list(hits), "shifts": {str(p): r for p, r in hits.items()}}
        out["text"] = f"{len(hits)} primes admit the {a.pattern} pattern: {list(hits)}"
        return RunReport("search residue", {"pattern": a.pattern, "start": a.start, "limit": a.limit}, out)
    raise _Usage(f"unknown search kind {kind!r}")


@dataclass(frozen=True)
class _ResiduePattern:
    s_plus: tuple
    s_minus: tuple

    def __call__(self, p: int):
        return search.residue_pattern(p, self.s_plus, self.s_minus)


def cmd_corpus(a) -> RunReport:
    rep = corpus_check(a.dir)
    lines = []
    for r in rep.outputs["results"]:
        lines.append(("PASS " if r["ok"] else "FAIL ") + f"{r['file']}\t{r['claim']}" + ("" if r["ok"] else f"\t{r['error']}"))
    lines.append(f"{rep.outputs['passed']}/{rep.outputs['total']} passed")
    rep.outputs["text"] = "\n".join(lines)
    return rep


# --------------------------------------------------------------------------


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a RunReport as JSON")
    common.add_argument("--timing", action="store_true", help="include wall time in the JSON report")

    p = _Parser(prog="maxdet", description="Maximal determinant and unit Hadamard matrix toolkit.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("construct", parents=[common], help="build a matrix and print it in RUM format")
    s.add_argument("name", help=", ".join(sorted(cons.CONSTRUCTORS)))
    s.add_argument("args", nargs="*", type=int)
    s.add_argument("-o", "--output")
    s.set_defaults(fn=cmd_construct)

    s = sub.add_parser("verify", parents=[common], help="check a RUM matrix against a claim (exit 1 on mismatch)")
    s.add_argument("file")
    s.add_argument("--claim", help="BARBA, HADAMARD, EW, GW(w), EHLICH_D(k), MAXDET(v) or RECORD(v)")
    s.set_defaults(fn=cmd_verify)

    s = sub.add_parser("bounds", parents=[common], help="squared determinant bounds")
    s.add_argument("n", type=int)
    s.add_argument("m", type=int)
    s.set_defaults(fn=cmd_bounds)

    s = sub.add_parser("feasible", parents=[common], help="nonexistence tests (exit 1 when infeasible)")
    s.add_argument("test", choices=sorted(FEASIBILITY_TESTS))
    s.add_argument("args", nargs="*", type=int)
    s.add_argument("--lenient", action="store_true", help="exit 0 even for an infeasible verdict")
    s.set_defaults(fn=cmd_feasible)

    s = sub.add_parser("tables", parents=[common], help="regenerate nonexistence tables")
    s.add_argument("table", help="planes, tamura, butson or a GDD table name")
    s.add_argument("--limit", type=int)
    s.add_argument("--prime", type=int)
    s.set_defaults(fn=cmd_tables)

    s = sub.add_parser("search", parents=[common], help="Gram enumeration, certificates and combinatorial searches")
    ss = s.add_subparsers(dest="kind", parser_class=_Parser)
    t = ss.add_parser("gram", parents=[common])
    t.add_argument("n", type=int)
    t.add_argument("m", type=int)
    t.add_argument("lower", type=int, help="lower bound on |det|^2")
    t = ss.add_parser("certify", parents=[common])
    t.add_argument("target", help="RUM file of the claimed maximal matrix")
    t = ss.add_parser("exhaustive", parents=[common])
    t.add_argument("n", type=int)
    t.add_argument("m", type=int)
    t = ss.add_parser("paley-sub", parents=[common])
    t.add_argument("p", type=int)
    t.add_argument("--h", type=int, default=12)
    t.add_argument("--rows", type=int, default=700)
    t.add_argument("--seed", type=int, default=1)
    t.add_argument("--max-trials", type=int, default=1000)
    t = ss.add_parser("residue", parents=[common])
    t.add_argument("limit", type=int)
    t.add_argument("--pattern", choices=("4p", "12p"), default="4p")
    t.add_argument("--start", type=int, default=2)
    s.set_defaults(fn=cmd_search)

    s = sub.add_parser("corpus", parents=[common], help="verify every bundled matrix against its claim")
    s.add_argument("--dir", help="alternative corpus directory containing claims.tsv")
    s.set_defaults(fn=cmd_corpus)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
        if a.command is None or (a.command == "search" and a.kind is None):
            raise _Usage("a subcommand is required; see --help")
        t0 = time.perf_counter()
        rep = a.fn(a)
    except _Usage as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if a.timing:
        rep.timing = round(time.perf_counter() - t0, 6)
    if a.json:
        rep.outputs.pop("text", None)
        print(rep.to_json())
    else:
        print(rep.outputs.get("text", ""))
    return EXIT_OK if rep.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
