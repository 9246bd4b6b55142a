"""Command-line front end.

    hdc cube     -c star.conf [-o out.csv]     classic datacube
    hdc hcube    -c star.conf [-o out.csv]     hierarchical datacube
    hdc closed   -c star.conf [-o out.csv]     closed datacube
    hdc query    -c star.conf -t TUPLE         answer one cell from the closed cube
    hdc stats    -c star.conf                  cube sizes and ratios
    hdc verify   -c star.conf                  brute-force self checks
    hdc validate -c star.conf                  load, check, and summarize

Exit codes: 0 success, 1 validation failure, 2 verification mismatch,
3 I/O trouble, guard refusal, or bad usage.  The environment variable
HDC_SIZE_GUARD overrides the space-enumeration guard.

Tuple specs are comma-separated, one slot per dimension in config order:
a value label, ``#`` followed by a value id, or ``ALL`` / ``*`` for the
whole dimension.  Labels containing commas must be addressed by id.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .closure import closed_cube, cube_stats, query, write_closed_csv
from .cube import (
    Warehouse,
    aggregate_rows,
    cover,
    cube_classic,
    cube_hierarchical,
    write_cells_csv,
)
from .errors import (
    HdcError,
    IngestError,
    ShapeError,
    SizeGuardError,
    UnknownValueError,
)
from .hierarchy import ROOT_ID
from .ingest import load_warehouse, validate
from .verify import run_verification

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_VERIFICATION = 2
EXIT_IO = 3


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems on the I/O exit code."""

    def error(self, message: str):
        print(f"error: usage: {message}", file=sys.stderr)
        raise SystemExit(EXIT_IO)


def _fail(kind: str, message: str) -> None:
    print(f"error: {kind}: {message}", file=sys.stderr)


def parse_cell_spec(w: Warehouse, spec: str) -> tuple[int, ...]:
    """Resolve a comma-separated tuple spec against the warehouse."""
    parts = [p.strip() for p in spec.split(",")]
    hs = w.ctx.hierarchies
    if len(parts) != len(hs):
        raise ShapeError(
            f"tuple spec has {len(parts)} slot(s), expected {len(hs)}"
        )
    out: list[int] = []
    for h, part in zip(hs, parts):
        if part in ("*", "ALL") or part == f"ALL_{h.name}":
            out.append(ROOT_ID)
        elif part.startswith("#"):
            try:
                v = int(part[1:])
            except ValueError:
                raise UnknownValueError(
                    f"{h.name}: {part!r} is not an id reference"
                ) from None
            if v not in h:
                raise UnknownValueError(f"{h.name}: no value with id {v}")
            out.append(v)
        else:
            out.append(h.resolve_label(part))
    return tuple(out)


def _open_output(path: str | None):
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_csv(write, w: Warehouse, out_path: str | None) -> None:
    stream, owned = _open_output(out_path)
    try:
        write(w, stream)
    finally:
        if owned:
            stream.close()


def _format_measures(w: Warehouse, values: Sequence[float]) -> str:
    return " ".join(
        f"{spec.name}={value!r}" for spec, value in zip(w.measures, values)
    )


def cmd_cube(args) -> int:
    w = load_warehouse(args.config)
    relation = cube_classic(w)
    _write_csv(lambda wh, s: write_cells_csv(wh, relation, s), w, args.output)
    return EXIT_OK


def cmd_hcube(args) -> int:
    w = load_warehouse(args.config)
    relation = cube_hierarchical(w)
    _write_csv(lambda wh, s: write_cells_csv(wh, relation, s), w, args.output)
    return EXIT_OK


def cmd_closed(args) -> int:
    w = load_warehouse(args.config)
    cc = closed_cube(w)
    _write_csv(lambda wh, s: write_closed_csv(wh, cc, s), w, args.output)
    return EXIT_OK


def cmd_query(args) -> int:
    w = load_warehouse(args.config)
    cell = parse_cell_spec(w, args.tuple)
    if args.naive:
        rows = cover(w, cell)
        if not rows:
            print("EMPTY-CELL")
            return EXIT_OK
        print(_format_measures(w, aggregate_rows(w, rows)))
        return EXIT_OK
    cc = closed_cube(w)
    answer = query(cc, w, cell)
    if answer is None:
        print("EMPTY-CELL")
    else:
        print(_format_measures(w, answer))
    return EXIT_OK


def cmd_stats(args) -> int:
    w = load_warehouse(args.config)
    stats = cube_stats(
        w, cube_classic(w), cube_hierarchical(w), closed_cube(w)
    )
    print(stats.format())
    return EXIT_OK


def cmd_verify(args) -> int:
    w = load_warehouse(args.config)
    report = run_verification(
        w, isotonicity_samples=args.samples, seed=args.seed
    )
    print(report.format())
    return EXIT_OK if report.ok else EXIT_VERIFICATION


def cmd_validate(args) -> int:
    w = load_warehouse(args.config)
    report = validate(w)
    print(report.format())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="hdc",
        description="hierarchical datacube engine",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("-c", "--config", required=True,
                       help="star-schema config file")
        p.set_defaults(handler=handler)
        return p

    for name, handler, text in (
        ("cube", cmd_cube, "materialize the classic datacube as CSV"),
        ("hcube", cmd_hcube, "materialize the hierarchical datacube as CSV"),
        ("closed", cmd_closed, "materialize the closed datacube as CSV"),
    ):
        p = add(name, handler, text)
        p.add_argument("-o", "--output", help="output file (default stdout)")

    p = add("query", cmd_query, "answer one cell from the closed cube")
    p.add_argument("-t", "--tuple", required=True,
                   help="cell spec: label, #id, or ALL/* per dimension")
    p.add_argument("--naive", action="store_true",
                   help="aggregate the fact table directly instead")

    add("stats", cmd_stats, "print cube sizes and compression ratios")

    p = add("verify", cmd_verify, "run the brute-force self checks")
    p.add_argument("--samples", type=int, default=10_000,
                   help="sampled pairs for the isotonicity check")
    p.add_argument("--seed", type=int, default=0,
                   help="seed for the sampled checks")

    add("validate", cmd_validate, "validate the star schema and summarize")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except IngestError as exc:
        for problem in exc.problems:
            _fail("validation", problem)
        return EXIT_VALIDATION
    except SizeGuardError as exc:
        _fail("guard", str(exc))
        return EXIT_IO
    except HdcError as exc:
        _fail("validation", str(exc))
        return EXIT_VALIDATION
    except OSError as exc:
        _fail("io", str(exc))
        return EXIT_IO


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
