"""Brute-force self checks for a loaded warehouse.

These run the expensive routes the engine's fast paths are meant to agree
with: full-space enumeration against the closed-form size, the closure
axioms checked pointwise over the whole space, and closed-cube query
answers compared with direct aggregation over each cell's cover.  They are
meant for desk-sized instances; enumeration respects the size guard.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .closure import closed_cube, closure_of, query
from .cube import Warehouse, aggregate_rows, cover, cube_hierarchical
from .hierarchy import ROOT_ID
from .lattice import (
    Cell,
    check_size_guard,
    generalizes,
    iter_space,
    space_size,
)

TOL = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[CheckResult, ...]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def format(self) -> str:
        return "\n".join(
            f"{'ok' if c.passed else 'FAIL'} {c.name}: {c.detail}"
            for c in self.checks
        )


def _random_cell(rng: random.Random, w: Warehouse) -> tuple[int, ...]:
    return tuple(
        rng.choice([ROOT_ID] + sorted(v for v in h if v != ROOT_ID))
        for h in w.ctx.hierarchies
    )


def _random_generalization(
    rng: random.Random, w: Warehouse, u: tuple[int, ...]
) -> tuple[int, ...]:
    return tuple(
        rng.choice(h.ancestor_path(v))
        for h, v in zip(w.ctx.hierarchies, u)
    )


def run_verification(
    w: Warehouse,
    isotonicity_samples: int = 10_000,
    seed: int = 0,
    guard: int | None = None,
) -> VerificationReport:
    """Run every self check and report one line of detail per check."""
    checks: list[CheckResult] = []
    ctx = w.ctx

    check_size_guard(ctx, guard)

    expected = space_size(ctx)
    counted = sum(1 for _ in iter_space(ctx, guard))
    checks.append(
        CheckResult(
            "space-size",
            counted == expected,
            f"enumerated {counted}, closed form {expected}",
        )
    )

    memo: dict[Cell, Cell] = {}

    def closed_of(t: Cell) -> Cell:
        got = memo.get(t)
        if got is None:
            got = closure_of(w, t)
            memo[t] = got
        return got

    extensive = 0
    idempotent = 0
    total = 0
    for t in iter_space(ctx, guard):
        c = closed_of(t)
        total += 1
        if generalizes(ctx, t, c):
            extensive += 1
        if closed_of(c) == c:
            idempotent += 1
    checks.append(
        CheckResult(
            "closure-extensive",
            extensive == total,
            f"{extensive}/{total} cells precede their closure",
        )
    )
    checks.append(
        CheckResult(
            "closure-idempotent",
            idempotent == total,
            f"{idempotent}/{total} closures are fixpoints",
        )
    )

    rng = random.Random(seed)
    iso_ok = 0
    for _ in range(isotonicity_samples):
        u = _random_cell(rng, w)
        t = _random_generalization(rng, w, u)
        if generalizes(ctx, closed_of(t), closed_of(u)):
            iso_ok += 1
    checks.append(
        CheckResult(
            "closure-isotone",
            iso_ok == isotonicity_samples,
            f"{iso_ok}/{isotonicity_samples} ordered pairs stay ordered",
        )
    )

    cc = closed_cube(w)
    hcube = cube_hierarchical(w, guard)
    mismatches = 0
    for cell, stored in hcube.cells:
        answered = query(cc, w, cell)
        if answered is None:
            mismatches += 1
            continue
        direct = aggregate_rows(w, cover(w, cell))
        for spec, a, b in zip(w.measures, answered, direct):
            if spec.function == "AVG":
                if abs(a - b) > TOL:
                    mismatches += 1
                    break
            elif a != b:
                mismatches += 1
                break
    checks.append(
        CheckResult(
            "closed-query-lossless",
            mismatches == 0,
            f"{hcube.cell_count - mismatches}/{hcube.cell_count} populated "
            f"cells answered exactly from the closed cube",
        )
    )

    return VerificationReport(tuple(checks))
