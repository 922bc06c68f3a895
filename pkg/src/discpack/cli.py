"""Command line pipeline: build, verify, probe, render.

Exit codes: 0 success (all checks pass), 1 verification failure, 2 malformed
input or bad arguments, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys

from .analysis import directional_quotients, find_flip_witness
from .document import DocumentError, dumps_canonical, load_tree, save_tree
from .geometry import Disc, Point, UnitDirection
from .hierarchy import (
    DiscTree,
    LevelSpec,
    ResourceCapExceeded,
    build_hierarchy,
    indicator,
    locate,
)
from .packing import PLANE, DiscRegion, enlarge
from .render import save_svg
from .verify import run_verification

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_MALFORMED = 2
EXIT_RESOURCE_CAP = 3


class CliError(Exception):
    """Bad command input; maps to exit code 2."""


def _parse_point(text: str) -> Point:
    try:
        xs, ys = text.split(",")
        return Point(float(xs), float(ys))
    except ValueError as exc:
        raise CliError(f"cannot parse point {text!r}: expected 'x,y'") from exc


def _parse_direction(text: str) -> UnitDirection:
    try:
        xs, ys = text.split(",")
        return UnitDirection.of(float(xs), float(ys))
    except ValueError as exc:
        raise CliError(f"cannot parse direction {text!r}: expected 'dx,dy'") from exc


def _parse_region(text: str):
    if text == "plane":
        return PLANE
    if text.startswith("disc:"):
        try:
            cx, cy, r = (float(v) for v in text[len("disc:"):].split(","))
            return DiscRegion(Disc(Point(cx, cy), r))
        except ValueError as exc:
            raise CliError(f"cannot parse region {text!r}: expected 'disc:cx,cy,r'") from exc
    raise CliError(f"unknown region {text!r} (use 'plane' or 'disc:cx,cy,r')")


def _parse_counts(text: str) -> tuple[int, ...]:
    try:
        counts = tuple(int(v) for v in text.split(","))
    except ValueError as exc:
        raise CliError(f"cannot parse per-level counts {text!r}") from exc
    if not counts or any(c < 1 for c in counts):
        raise CliError("per-level counts must be positive integers")
    return counts


def _load(path: str) -> DiscTree:
    return load_tree(path)


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _cmd_build(args: argparse.Namespace) -> int:
    counts = _parse_counts(args.per_level)
    if args.levels is not None and args.levels != len(counts):
        raise CliError(
            f"--levels {args.levels} disagrees with {len(counts)} per-level entries"
        )
    spec = LevelSpec(counts, cap=args.cap)
    tree = build_hierarchy(spec, _parse_region(args.region))
    save_tree(tree, args.out)
    _emit(
        {
            "out": args.out,
            "levels": [len(level) for level in tree.levels],
            "total_discs": tree.total_discs(),
        }
    )
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    tree = _load(args.document)
    report = run_verification(tree, samples=args.samples, seed=args.seed)
    payload = report.to_json()
    text = dumps_canonical(payload)
    sys.stdout.write(text)
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(text)
    return EXIT_OK if report.overall_pass else EXIT_CHECK_FAILED


def _cmd_probe(args: argparse.Namespace) -> int:
    tree = _load(args.document)
    if args.probe == "chi":
        p = _parse_point(args.point)
        reading = indicator(tree, p)
        path = locate(tree, p)
        _emit(
            {
                "probe": "chi",
                "point": [p.x, p.y],
                "value": reading.value,
                "certainty": reading.certainty,
                "depth": reading.depth,
                "boundary": reading.boundary,
                "chain": [[n.level, n.index] for n in path.chain],
            }
        )
        return EXIT_OK
    if args.probe == "quotient":
        p = _parse_point(args.point)
        u = _parse_direction(args.dir)
        oracle = lambda q: float(indicator(tree, q).value)
        samples = directional_quotients(oracle, p, u, args.hmin, args.hmax, args.samples)
        _emit(
            {
                "probe": "quotient",
                "point": [p.x, p.y],
                "dir": [u.ux, u.uy],
                "samples": [[s.h, s.quotient] for s in samples],
                "max_quotient": max(s.quotient for s in samples),
            }
        )
        return EXIT_OK
    if args.probe == "witness":
        p = _parse_point(args.point)
        search = find_flip_witness(tree, p, args.eps, args.cutoff)
        payload = {
            "probe": "witness",
            "point": [p.x, p.y],
            "eps": args.eps,
            "cutoff": args.cutoff,
            "status": search.status,
            "base_value": search.base_value,
            "candidates": search.candidates,
            "message": search.message,
        }
        if search.witness is not None:
            w = search.witness
            payload["witness"] = {
                "point": [w.point.x, w.point.y],
                "distance": w.distance,
                "quotient": w.quotient,
                "disc": [w.level, w.index],
            }
        _emit(payload)
        return EXIT_OK
    if args.probe == "blocked":
        from .analysis import angular_blockage

        p = _parse_point(args.point)
        ps = tree.root_packing()
        report = angular_blockage(ps, enlarge(ps), p)
        _emit(
            {
                "probe": "blocked",
                "point": [p.x, p.y],
                "total": report.total,
                "exempt": list(report.exempt),
                "entries": [[e.index, e.theta, e.bound] for e in report.entries],
            }
        )
        return EXIT_OK
    raise CliError(f"unknown probe {args.probe!r}")


def _cmd_render(args: argparse.Namespace) -> int:
    tree = _load(args.document)
    save_svg(tree, args.out, show_enlarged=args.show_enlarged)
    _emit({"out": args.out, "discs": tree.total_discs()})
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="discpack",
        description="Build, verify, probe and render iterated disc packings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build a tree and write its document")
    b.add_argument("--levels", type=int, default=None, help="expected number of levels")
    b.add_argument("--per-level", required=True, help="comma-separated per-level counts")
    b.add_argument("--out", required=True, help="output document path")
    b.add_argument("--region", default="plane", help="plane | disc:cx,cy,r")
    b.add_argument("--cap", type=int, default=1_000_000, help="total disc budget")
    b.set_defaults(func=_cmd_build)

    v = sub.add_parser("verify", help="run the verification suite on a document")
    v.add_argument("document")
    v.add_argument("--samples", type=int, default=1000)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--report", default=None, help="also write the report JSON here")
    v.set_defaults(func=_cmd_verify)

    p = sub.add_parser("probe", help="query a document")
    p.add_argument("document")
    psub = p.add_subparsers(dest="probe", required=True)

    chi = psub.add_parser("chi", help="indicator value with certainty")
    chi.add_argument("--point", required=True)

    quo = psub.add_parser("quotient", help="directional difference quotients")
    quo.add_argument("--point", required=True)
    quo.add_argument("--dir", required=True)
    quo.add_argument("--hmin", type=float, required=True)
    quo.add_argument("--hmax", type=float, required=True)
    quo.add_argument("--samples", type=int, default=None)

    wit = psub.add_parser("witness", help="nearby indicator flip witness")
    wit.add_argument("--point", required=True)
    wit.add_argument("--eps", type=float, required=True)
    wit.add_argument("--cutoff", type=int, default=3)

    blk = psub.add_parser("blocked", help="blocked-direction angular measure")
    blk.add_argument("--point", required=True)

    p.set_defaults(func=_cmd_probe)

    r = sub.add_parser("render", help="write an SVG figure")
    r.add_argument("document")
    r.add_argument("--out", required=True)
    r.add_argument("--show-enlarged", action="store_true")
    r.set_defaults(func=_cmd_render)
    return parser


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Join '--point -1,-1' into '--point=-1,-1' so argparse does not read
    the negative coordinate as an option."""
    value_flags = {"--point", "--dir"}
    out: list[str] = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in value_flags and i + 1 < len(argv):
            nxt = argv[i + 1]
            if nxt.startswith("-") and len(nxt) > 1 and (nxt[1].isdigit() or nxt[1] == "."):
                out.append(f"{tok}={nxt}")
                i += 2
                continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    if argv is None:
        argv = sys.argv[1:]
    args = parser.parse_args(_glue_negative_values(list(argv)))
    if getattr(args, "command", None) == "probe" and args.probe == "quotient":
        if args.samples is None:
            # Default to roughly halving steps across the range.
            import math as _math

            args.samples = max(2, int(_math.log2(args.hmax / args.hmin)) + 1)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except DocumentError as exc:
        print(f"error: malformed document: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except ResourceCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MALFORMED


if __name__ == "__main__":
    sys.exit(main())
