"""Command line front end: decompose, verify, oracle, random, cuboid."""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import oracle
from . import perm as P
from .blocks import BLOCK7, EVEN10, Block, Decomposition
from .cuboid import build_cuboid, case_classify
from .errors import ParseError, PreconditionError, RevBlocksError
from .even import decompose10
from .perm import Perm
from .synth import decompose7

EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_PRECONDITION = 0, 1, 2, 3


class InputError(Exception):
    pass


# ------------------------------------------------------------------ parsing


def parse_perm(text: str, fmt: str = "images", n: int | None = None) -> Perm:
    if fmt == "images":
        return P.parse_images(text)
    if fmt == "cycles":
        body = text.strip()
        if not body and n is not None:
            return P.identity(n)
        return P.parse_cycles(body, n)
    raise ParseError(f"unknown format {fmt!r}")


def emit_perm(p: Perm, fmt: str = "images") -> str:
    return P.format_images(p) if fmt == "images" else P.format_cycles(p) + "\n"


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(str(exc)) from exc


# ------------------------------------------------------------------ reports


def decomposition_json(d: Decomposition, verified: bool | None, images: bool = False) -> dict:
    blocks = []
    for b in d.blocks:
        entry = {"dim": b.dim, "inner_cycles": P.format_cycles(b.inner), "parity": b.parity()}
        if images:
            entry["inner_images"] = b.inner.image.tolist()
        blocks.append(entry)
    stats = {k: v for k, v in sorted(d.stats.items())}
    return {
        "n": d.n, "mode": d.mode, "source_digest": d.source_digest,
        "blocks": blocks, "verified": verified, "stats": stats,
    }


def decomposition_from_json(obj: dict) -> Decomposition:
    n = int(obj["n"])
    blocks = []
    for b in obj["blocks"]:
        if "inner_images" in b:
            inner = Perm(n - 1, b["inner_images"])
        else:
            inner = parse_perm(b["inner_cycles"], "cycles", n - 1)
        blocks.append(Block(int(b["dim"]), inner))
    return Decomposition(n, obj.get("mode", BLOCK7), blocks, obj.get("source_digest", ""))


def _dump(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _write(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# --------------------------------------------------------------- decompose


def _decompose_one(args: tuple) -> tuple[int, dict]:
    text, fmt, n_hint, mode, r1, verify, images, figures, stem = args
    try:
        sigma = parse_perm(text, fmt, n_hint)
    except (ParseError, PreconditionError) as exc:
        return EXIT_INPUT, {"error": f"input: {exc}"}
    try:
        if mode == EVEN10:
            d = decompose10(sigma, r1, verify=False)
        else:
            if sigma.n < 4:
                raise PreconditionError("block7 needs n >= 4")
            d = decompose7(sigma, r1, verify=False)
    except PreconditionError as exc:
        return EXIT_PRECONDITION, {"error": str(exc)}
    report = None
    if verify:
        report = oracle.verify_decomposition(sigma, d)
    out = decomposition_json(d, report.ok if report else None, images)
    if d.n < 6 and mode == BLOCK7:
        out["fallback"] = True
    if report is not None:
        out["verify"] = report.as_dict()
    if figures:
        out["figures"] = _figures_for(sigma, d, r1, Path(figures), stem)
    code = EXIT_OK if report is None or report.ok else EXIT_VERIFY
    return code, out


def _figures_for(sigma: Perm, d: Decomposition, r1: int, root: Path, stem: str) -> list[str]:
    from .figures import plot_cuboid, plot_cycle_pattern

    root.mkdir(parents=True, exist_ok=True)
    r2 = next(i for i in P.iter_dims(sigma.n, [r1]))
    files = [
        plot_cycle_pattern(P.cycle_pattern(sigma), root / f"{stem}_pattern.png", "input cycle pattern"),
        plot_cuboid(build_cuboid(sigma, r1, r2), root / f"{stem}_cuboid.png"),
    ]
    return [str(f) for f in files]


def cmd_decompose(a: argparse.Namespace) -> int:
    src = Path(a.input)
    if a.input != "-" and src.is_dir():
        paths = sorted(p for p in src.iterdir() if p.is_file())
        jobs = [(_read(str(p)), a.format, a.n, a.mode, a.r1, not a.no_verify, a.images,
                 a.figures, p.stem) for p in paths]
        if a.jobs > 1:
            with ProcessPoolExecutor(a.jobs) as ex:
                results = list(ex.map(_decompose_one, jobs))
        else:
            results = [_decompose_one(j) for j in jobs]
        report = {"results": [dict(r, file=p.name) for p, (_, r) in zip(paths, results)]}
        _write(_dump(report), a.output)
        return max((c for c, _ in results), default=EXIT_OK)
    try:
        text = _read(a.input)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    stem = "stdin" if a.input == "-" else src.stem
    code, out = _decompose_one((text, a.format, a.n, a.mode, a.r1, not a.no_verify, a.images,
                                a.figures, stem))
    if "error" in out:
        print(f"error: {out['error']}", file=sys.stderr)
        return code
    _write(_dump(out), a.output)
    return code


# ------------------------------------------------------------------ others


def cmd_verify(a: argparse.Namespace) -> int:
    try:
        sigma = parse_perm(_read(a.input), a.format, a.n)
        d = decomposition_from_json(json.loads(_read(a.decomposition)))
        rep = oracle.verify_decomposition(sigma, d)
    except (InputError, ParseError, PreconditionError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _write(_dump(rep.as_dict()), a.output)
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_oracle(a: argparse.Namespace) -> int:
    params: dict = {"lemma": a.lemma, "n": a.n}
    detail: dict = {}
    if a.lemma == "35free":
        ok = oracle.brute_35free(a.n, 1, 2, a.samples, a.seed, a.jobs, detail)
        params.update(samples=a.samples, seed=a.seed)
    elif a.lemma == "new1tight":
        ok = oracle.brute_new1tight(a.n)
        detail["instance"] = P.format_cycles(oracle.tight_instance(a.n))
    elif a.lemma == "badcase":
        ok = oracle.brute_badcase_invariants(a.samples, a.seed)
        params.update(samples=a.samples, seed=a.seed)
    else:
        ok = oracle.calibrate_taxonomy()
    _write(_dump({"params": params, "passed": ok, "detail": detail}), a.output)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_random(a: argparse.Namespace) -> int:
    if not 1 <= a.n <= P.WIDTH_CAP:
        print(f"error: width {a.n} outside [1, {P.WIDTH_CAP}]", file=sys.stderr)
        return EXIT_INPUT
    p = P.random_perm(a.n, np.random.default_rng(a.seed), even=a.even)
    _write(emit_perm(p, a.format), a.output)
    return EXIT_OK


def cmd_cuboid(a: argparse.Namespace) -> int:
    try:
        sigma = parse_perm(_read(a.input), a.format, a.n)
    except (InputError, ParseError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    n = sigma.n
    pairs = [(a.r1, a.r2)] if a.r1 and a.r2 else [
        (i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j
        if not a.r1 or i == a.r1
    ]
    entries = []
    for r1, r2 in pairs:
        try:
            cub = build_cuboid(sigma, r1, r2)
        except PreconditionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PRECONDITION
        e = {
            "r1": r1, "r2": r2, "counts": list(cub.counts.as_tuple()),
            "black": [int(x) for x in np.flatnonzero(cub.color)],
        }
        try:
            e["case"] = case_classify(cub.counts)
        except PreconditionError:
            e["case"] = None
        if a.figures:
            from .figures import plot_cuboid

            root = Path(a.figures)
            root.mkdir(parents=True, exist_ok=True)
            e["figure"] = str(plot_cuboid(cub, root / f"cuboid_{r1}_{r2}.png"))
        entries.append(e)
    if a.text:
        lines = [f"r1={e['r1']} r2={e['r2']} counts={e['counts']} case={e['case']} "
                 f"black={','.join(P.bitstring(x, n) for x in e['black'])}" for e in entries]
        _write("\n".join(lines) + "\n", a.output)
    else:
        _write(_dump({"n": n, "cuboids": entries}), a.output)
    return EXIT_OK


# ------------------------------------------------------------------ parser


def _input_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=["images", "cycles"], default="images")
    p.add_argument("--n", type=int, default=None, help="width for cycle input")
    p.add_argument("--output", default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="revblocks", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    d = sub.add_parser("decompose", help="decompose a permutation (file, directory or -)")
    d.add_argument("input")
    _input_flags(d)
    d.add_argument("--mode", choices=[BLOCK7, EVEN10], default=BLOCK7)
    d.add_argument("--r1", type=int, default=1)
    d.add_argument("--no-verify", action="store_true")
    d.add_argument("--images", action="store_true", help="also list inner image tables")
    d.add_argument("--jobs", type=int, default=1)
    d.add_argument("--figures", default=None, metavar="DIR")
    d.set_defaults(func=cmd_decompose)

    v = sub.add_parser("verify", help="check a decomposition JSON against a permutation")
    v.add_argument("input")
    v.add_argument("decomposition")
    _input_flags(v)
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("oracle", help="run a brute-force oracle")
    o.add_argument("--lemma", choices=["35free", "new1tight", "badcase", "taxonomy"], required=True)
    o.add_argument("--n", type=int, default=4)
    o.add_argument("--samples", type=int, default=1000)
    o.add_argument("--seed", type=int, default=0)
    o.add_argument("--jobs", type=int, default=1)
    o.add_argument("--output", default=None)
    o.set_defaults(func=cmd_oracle)

    r = sub.add_parser("random", help="reproducible random permutation")
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--even", action="store_true")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--format", choices=["images", "cycles"], default="images")
    r.add_argument("--output", default=None)
    r.set_defaults(func=cmd_random)

    c = sub.add_parser("cuboid", help="dump colored cuboids")
    c.add_argument("action", choices=["dump"])
    c.add_argument("input")
    _input_flags(c)
    c.add_argument("--r1", type=int, default=None)
    c.add_argument("--r2", type=int, default=None)
    c.add_argument("--text", action="store_true")
    c.add_argument("--figures", default=None, metavar="DIR")
    c.set_defaults(func=cmd_cuboid)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    a = ap.parse_args(argv)
    try:
        return a.func(a)
    except RevBlocksError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
