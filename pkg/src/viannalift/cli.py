"""Command line front end: ``viannalift {tree,potential,newton,verify,distinguish,render}``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import potentials
from .lattice import affine_length, invariants, is_fano
from .markov import InvalidTriple, enumerate_tree, parent_triple, parse_triple, sorted_triple
from .potentials import PotentialRecord, vianna
from .render import UnsupportedDim, render
from .verify import IdentityFailed, distinguish, verify_theorem, wall_crossing_check

ENV_OUT = "VIANNALIFT_OUT"
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_INTEGRITY = 3


class IntegrityError(RuntimeError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    max_entry: int | None
    dims: tuple[int, ...]
    out: Path | None
    workers: int
    fmt: str


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# -- potential cache -----------------------------------------------------------


def cache_path(out: Path, triple: Sequence[int], n: int) -> Path:
    a, b, c = sorted_triple(triple)
    return out / "cache" / f"{a}_{b}_{c}_n{n}.json"


def _digest(record_json: dict) -> str:
    return hashlib.sha256(json.dumps(record_json, sort_keys=True).encode()).hexdigest()


def write_cache(out: Path, rec: PotentialRecord) -> Path:
    path = cache_path(out, rec.triple, rec.dim)
    if path.exists():
        return path
    path.parent.mkdir(parents=True, exist_ok=True)
    body = rec.to_json()
    tmp = path.with_suffix(".tmp")
    tmp.write_text(dumps({"sha256": _digest(body), "record": body}))
    tmp.replace(path)
    return path


def read_cache(path: Path) -> PotentialRecord:
    try:
        data = json.loads(path.read_text())
        body = data["record"]
        stored = data["sha256"]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise IntegrityError(f"{path}: unreadable cache entry ({exc})") from exc
    if _digest(body) != stored:
        raise IntegrityError(f"{path}: sha256 mismatch")
    try:
        rec = PotentialRecord.from_json(body)
    except Exception as exc:
        raise IntegrityError(f"{path}: malformed record ({exc})") from exc
    if cache_path(path.parent.parent, rec.triple, rec.dim) != path:
        raise IntegrityError(f"{path}: record is for {rec.triple}, n = {rec.dim}")
    return rec


def load_cache(out: Path | None) -> int:
    """Check every cached record and seed the in-memory memo with it."""
    if out is None or not (out / "cache").is_dir():
        return 0
    count = 0
    for path in sorted((out / "cache").glob("*.json")):
        rec = read_cache(path)
        with potentials._memo_lock:
            potentials._memo.setdefault((sorted_triple(rec.triple), rec.dim), rec)
        count += 1
    return count


def get_record(triple, n: int, out: Path | None) -> PotentialRecord:
    if out is not None:
        path = cache_path(out, triple, n)
        if path.exists():
            return read_cache(path)
    rec = vianna(triple, n)
    if out is not None:
        write_cache(out, rec)
    return rec


# -- output helpers ------------------------------------------------------------


def table(rows: list[list[str]], header: list[str]) -> str:
    cols = [header] + rows
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for r in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip())
    return "\n".join(lines) + "\n"


def emit(text: str, cfg: RunConfig, filename: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / filename).write_text(text)
    print(cfg.out / filename)


def _tstr(t) -> str:
    return ",".join(str(x) for x in t)


# -- commands ------------------------------------------------------------------


def cmd_tree(cfg: RunConfig) -> int:
    nodes = enumerate_tree(cfg.max_entry)
    if cfg.fmt == "table":
        rows = [[_tstr(nd.key), _tstr(nd.triple), "".join(map(str, nd.path)) or "-"] for nd in nodes]
        text = table(rows, ["triple", "ordered", "path"])
    else:
        text = dumps([dict(nd.to_json(), sorted=[str(x) for x in nd.key]) for nd in nodes])
    emit(text, cfg, f"tree_max{cfg.max_entry}.{_ext(cfg)}")
    return 0


def _ext(cfg: RunConfig) -> str:
    return "txt" if cfg.fmt == "table" else "json"


def cmd_potential(cfg: RunConfig, triple) -> int:
    n = cfg.dims[0]
    rec = get_record(triple, n, cfg.out)
    if cfg.fmt == "table":
        text = f"{_tstr(rec.triple)} n={n}\n{rec.poly}\n"
    else:
        text = dumps(rec.to_json())
    emit(text, cfg, f"potential_{'_'.join(map(str, rec.triple))}_n{n}.{_ext(cfg)}")
    return 0


def cmd_newton(cfg: RunConfig, triple) -> int:
    n = cfg.dims[0]
    rec = get_record(triple, n, cfg.out)
    p = rec.newton
    inv = invariants(p)
    data = {
        "triple": [str(x) for x in rec.triple],
        "dim": n,
        "vertices": [list(v) for v in p.vertices],
        "edges": [{"from": list(a), "to": list(b), "length": str(L)}
                  for (a, b), L in ((s, _len(s)) for s in p.edge_segments())],
        "triangle": [list(v) for v in rec.triangle.vertices],
        "invariants": inv.to_json(),
        "fano": is_fano(p).to_json(),
    }
    if cfg.fmt == "table":
        rows = [[str(list(a)), str(list(b)), str(_len((a, b)))] for a, b in p.edge_segments()]
        text = table(rows, ["from", "to", "length"])
    else:
        text = dumps(data)
    emit(text, cfg, f"newton_{'_'.join(map(str, rec.triple))}_n{n}.{_ext(cfg)}")
    return 0


def _len(seg) -> int:
    return affine_length(*seg)


def _verify_one(job) -> dict:
    triple, n = job
    report = verify_theorem(triple, n).to_json()
    parent = parent_triple(triple)
    if parent is None:
        report["wall_crossing"] = {"passed": True, "skipped": True}
    else:
        try:
            wall_crossing_check(parent, triple, n)
            report["wall_crossing"] = {"passed": True, "skipped": False, "parent": [str(x) for x in sorted_triple(parent)]}
        except IdentityFailed as exc:
            report["wall_crossing"] = {"passed": False, "skipped": False, "difference": str(exc.difference)}
    report["ok"] = report["ok"] and report["wall_crossing"]["passed"]
    return report


def _run(jobs, fn, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=1))


def cmd_verify(cfg: RunConfig) -> int:
    load_cache(cfg.out)
    triples = [nd.key for nd in enumerate_tree(cfg.max_entry)]
    jobs = [(t, n) for n in cfg.dims for t in triples]
    reports = _run(jobs, _verify_one, cfg.workers)
    reports.sort(key=lambda r: (r["dim"], [int(x) for x in r["triple"]]))
    for r in reports:
        r.pop("seconds", None)
    if cfg.out is not None:
        for t, n in jobs:
            write_cache(cfg.out, vianna(t, n))
    ok = all(r["ok"] for r in reports)
    if cfg.fmt == "table":
        names = [c["name"] for c in reports[0]["clauses"]] if reports else []
        rows = []
        for r in reports:
            marks = {c["name"]: ("skip" if c["skipped"] else "ok" if c["passed"] else "FAIL") for c in r["clauses"]}
            wc = r["wall_crossing"]
            rows.append(
                [_tstr(r["triple"]), str(r["dim"])] + [marks[nm] for nm in names]
                + ["skip" if wc["skipped"] else "ok" if wc["passed"] else "FAIL"]
            )
        text = table(rows, ["triple", "n"] + names + ["wall-crossing"])
        text += f"{'all clauses pass' if ok else 'FAILURES'}: {len(reports)} reports\n"
    else:
        text = dumps({"ok": ok, "reports": reports})
    emit(text, cfg, f"verify_max{cfg.max_entry}_n{'-'.join(map(str, cfg.dims))}.{_ext(cfg)}")
    return 0 if ok else EXIT_FAIL


def _distinguish_one(job) -> list[dict]:
    triples, n = job
    return [r.to_json() for r in distinguish(triples, n)]


def cmd_distinguish(cfg: RunConfig, triples) -> int:
    load_cache(cfg.out)
    if not triples:
        triples = [nd.key for nd in enumerate_tree(cfg.max_entry)]
    triples = [sorted_triple(t) for t in triples]
    results = _run([(triples, n) for n in cfg.dims], _distinguish_one, cfg.workers)
    ok = True
    out = []
    for n, rows in zip(cfg.dims, results):
        for r in rows:
            same = r["left"] == r["right"]
            r["dim"] = n
            r["certified"] = r["equivalent"] == same and r["method"] != "unsupported-shape"
            ok &= r["certified"]
            out.append(r)
    if cfg.fmt == "table":
        rows = [[_tstr(r["left"]), _tstr(r["right"]), str(r["dim"]), r["method"],
                 "equivalent" if r["equivalent"] else "distinct"] for r in out]
        text = table(rows, ["left", "right", "n", "method", "verdict"])
    else:
        text = dumps({"ok": ok, "pairs": out})
    emit(text, cfg, f"distinguish_n{'-'.join(map(str, cfg.dims))}.{_ext(cfg)}")
    return 0 if ok else EXIT_FAIL


def cmd_render(cfg: RunConfig, triple) -> int:
    n = cfg.dims[0]
    rec = get_record(triple, n, cfg.out)
    svg = render(rec.newton, f"Newt W for ({_tstr(rec.triple)}), n = {n}")
    emit(svg, cfg, f"newton_{'_'.join(map(str, rec.triple))}_n{n}.svg")
    return 0


# -- argument parsing ------------------------------------------------------------


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {v}")
    return v


def _dims(text: str) -> tuple[int, ...]:
    try:
        ds = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed dimension list {text!r}")
    if not ds or any(d < 2 for d in ds):
        raise argparse.ArgumentTypeError("dimensions must be >= 2")
    return ds


def _triple(text: str):
    try:
        return parse_triple(text)
    except InvalidTriple as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, default=None,
                        help=f"output directory (default: ${ENV_OUT}, else stdout)")
    common.add_argument("--format", choices=("json", "table"), default="json", dest="fmt")
    common.add_argument("--workers", type=_positive, default=1)

    parser = argparse.ArgumentParser(prog="viannalift", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tree", parents=[common], help="enumerate Markov triples")
    p.add_argument("--max", type=_positive, required=True, dest="max_entry")

    for name, helptext in (("potential", "disk potential of one torus"),
                           ("newton", "Newton polytope of one potential"),
                           ("render", "SVG of the Newton polytope (n = 2 or 3)")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("triple", type=_triple)
        p.add_argument("--dim", type=_dims, default=(2,), dest="dims")

    p = sub.add_parser("verify", parents=[common], help="check every clause over a range of triples")
    p.add_argument("--max", type=_positive, required=True, dest="max_entry")
    p.add_argument("--dims", "--dim", type=_dims, default=(2, 3), dest="dims")

    p = sub.add_parser("distinguish", parents=[common], help="pairwise non-equivalence certificates")
    p.add_argument("triples", type=_triple, nargs="*")
    p.add_argument("--max", type=_positive, default=None, dest="max_entry")
    p.add_argument("--dims", "--dim", type=_dims, default=(3,), dest="dims")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    out = args.out
    if out is None and os.environ.get(ENV_OUT):
        out = Path(os.environ[ENV_OUT])
    if args.command in ("potential", "newton", "render") and len(args.dims) != 1:
        parser.error("--dim takes a single dimension here")
    if args.command == "distinguish" and not args.triples and args.max_entry is None:
        parser.error("give triples or --max")
    cfg = RunConfig(args.command, getattr(args, "max_entry", None), args.dims if hasattr(args, "dims") else (),
                    out, args.workers, args.fmt)
    try:
        if cfg.command == "tree":
            return cmd_tree(cfg)
        if cfg.command == "potential":
            return cmd_potential(cfg, args.triple)
        if cfg.command == "newton":
            return cmd_newton(cfg, args.triple)
        if cfg.command == "verify":
            return cmd_verify(cfg)
        if cfg.command == "distinguish":
            return cmd_distinguish(cfg, args.triples)
        if cfg.command == "render":
            return cmd_render(cfg, args.triple)
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return EXIT_INTEGRITY
    except UnsupportedDim as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
