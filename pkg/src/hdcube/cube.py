"""Star-schema warehouse and the two datacubes built over it.

A warehouse couples a lattice context with a fact table: each fact row
references one value per dimension (at any level, never ALL) and carries
one 64-bit float per measure column.  ``cube_classic`` materializes the
classic operator, one cuboid per dimension subset grouped on stored
values.  ``cube_hierarchical`` materializes one cell for every space tuple
whose cover is non-empty, i.e. every roll-up along the dimension trees.
Cells with an empty cover are never emitted by either cube.

Aggregation is deterministic: SUM and AVG accumulate left to right in
row-id order, so repeated runs produce byte-identical output.
"""

from __future__ import annotations

import csv
import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

from .errors import EmptyCoverError, HdcError, ShapeError, UnknownValueError
from .hierarchy import ROOT_ID
from .lattice import (
    Cell,
    LatticeContext,
    cell_sort_key,
    check_size_guard,
    is_empty,
)

AGGREGATES = ("SUM", "MAX", "MIN", "AVG", "COUNT")


@dataclass(frozen=True)
class MeasureSpec:
    """One measure column and the aggregate applied to it."""

    name: str
    function: str

    def __post_init__(self):
        if self.function not in AGGREGATES:
            raise HdcError(
                f"measure {self.name}: unknown aggregate {self.function!r}, "
                f"expected one of {', '.join(AGGREGATES)}"
            )


@dataclass(frozen=True)
class Fact:
    """One fact row: its id, one value id per dimension, one float per measure."""

    row_id: int
    values: tuple[int, ...]
    measures: tuple[float, ...]


class Warehouse:
    """Immutable star schema instance: dimensions plus a fact table.

    Facts are kept sorted by row id, which fixes the accumulation order
    everywhere downstream.
    """

    def __init__(
        self,
        ctx: LatticeContext,
        measures: Sequence[MeasureSpec],
        facts: Iterable[Fact],
        name: str | None = None,
    ):
        self.ctx = ctx
        self.name = name
        self.measures = tuple(measures)
        self.facts = tuple(sorted(facts, key=lambda f: f.row_id))
        seen: dict[int, Fact] = {}
        for f in self.facts:
            if f.row_id in seen:
                raise HdcError(f"duplicate fact row id {f.row_id}")
            seen[f.row_id] = f
            if len(f.values) != ctx.dim_count:
                raise ShapeError(
                    f"fact {f.row_id}: {len(f.values)} dimension values, "
                    f"expected {ctx.dim_count}"
                )
            if len(f.measures) != len(self.measures):
                raise ShapeError(
                    f"fact {f.row_id}: {len(f.measures)} measure values, "
                    f"expected {len(self.measures)}"
                )
            for h, v in zip(ctx.hierarchies, f.values):
                if v == ROOT_ID:
                    raise UnknownValueError(
                        f"fact {f.row_id}: dimension {h.name} references the "
                        f"ALL root"
                    )
                if v not in h:
                    raise UnknownValueError(
                        f"fact {f.row_id}: dimension {h.name} has no value {v}"
                    )
        self._by_row = seen

    @property
    def dimension_names(self) -> tuple[str, ...]:
        return self.ctx.dimension_names

    @property
    def measure_names(self) -> tuple[str, ...]:
        return tuple(m.name for m in self.measures)

    def fact(self, row_id: int) -> Fact:
        try:
            return self._by_row[row_id]
        except KeyError:
            raise UnknownValueError(f"no fact row with id {row_id}") from None

    def measure_index(self, name: str) -> int:
        for i, m in enumerate(self.measures):
            if m.name == name:
                return i
        raise UnknownValueError(f"no measure named {name!r}")

    def distinct_fact_cells(self) -> tuple[tuple[int, ...], ...]:
        """Distinct dimensional tuples stored in the fact table, sorted."""
        return tuple(sorted({f.values for f in self.facts}, key=cell_sort_key))

    def __repr__(self) -> str:
        return (
            f"Warehouse(dims={list(self.dimension_names)}, "
            f"facts={len(self.facts)})"
        )


def cover(w: Warehouse, t: Cell) -> tuple[int, ...]:
    """Row ids of the facts the cell covers, ascending.

    A fact is covered when the cell generalizes the fact's dimensional
    tuple slot by slot.  The all-empty cell covers nothing.
    """
    w.ctx.check_cell(t)
    if is_empty(t):
        return ()
    hs = w.ctx.hierarchies
    out = [
        f.row_id
        for f in w.facts
        if all(h.is_ancestor(a, b) for h, a, b in zip(hs, t, f.values))
    ]
    return tuple(out)


def aggregate(w: Warehouse, spec: MeasureSpec, rows: Iterable[int]) -> float:
    """Apply one measure's aggregate over a set of fact rows.

    Rows are processed in ascending row-id order; SUM and AVG fold left to
    right so results are reproducible bit for bit.  Raises
    ``EmptyCoverError`` for an empty row set.
    """
    ordered = sorted(set(rows))
    if not ordered:
        raise EmptyCoverError(f"aggregate {spec.function}({spec.name}) over no rows")
    col = w.measure_index(spec.name)
    values = [w.fact(r).measures[col] for r in ordered]
    fn = spec.function
    if fn == "COUNT":
        return float(len(values))
    if fn == "MAX":
        return max(values)
    if fn == "MIN":
        return min(values)
    total = 0.0
    for v in values:
        total += v
    if fn == "SUM":
        return total
    return total / len(values)  # AVG


@dataclass(frozen=True)
class CubeRelation:
    """A materialized cube: ordered cells with one float per measure."""

    dimension_names: tuple[str, ...]
    measure_names: tuple[str, ...]
    cells: tuple[tuple[Cell, tuple[float, ...]], ...]

    @property
    def cell_count(self) -> int:
        return len(self.cells)

    @property
    def byte_size(self) -> int:
        return relation_bytes(
            self.cell_count, len(self.dimension_names), len(self.measure_names)
        )

    def as_dict(self) -> dict[Cell, tuple[float, ...]]:
        return {cell: m for cell, m in self.cells}


def relation_bytes(cell_count: int, dims: int, measures: int) -> int:
    """Stored size under the flat encoding: every field is a 4-byte word."""
    return cell_count * (dims + measures) * 4


def aggregate_rows(w: Warehouse, rows: Sequence[int]) -> tuple[float, ...]:
    return tuple(aggregate(w, spec, rows) for spec in w.measures)


def cube_classic(w: Warehouse) -> CubeRelation:
    """The classic datacube: one cuboid per dimension subset.

    Facts group by their stored values on the subset; the remaining slots
    hold ALL.  Cuboids are emitted largest subset first, subsets of equal
    size in left-to-right dimension order, and cells within a cuboid sort
    by value id.  The empty subset aggregates the whole fact table into a
    single all-ALL cell.
    """
    n = w.ctx.dim_count
    bottom = w.ctx.bottom()
    cells: list[tuple[Cell, tuple[float, ...]]] = []
    for size in range(n, -1, -1):
        for subset in itertools.combinations(range(n), size):
            groups: dict[tuple[int, ...], list[int]] = {}
            for f in w.facts:
                key = tuple(f.values[i] for i in subset)
                groups.setdefault(key, []).append(f.row_id)
            block = []
            for key, rows in groups.items():
                cell = list(bottom)
                for i, v in zip(subset, key):
                    cell[i] = v
                block.append((tuple(cell), aggregate_rows(w, rows)))
            block.sort(key=lambda item: cell_sort_key(item[0]))
            cells.extend(block)
    return CubeRelation(w.dimension_names, w.measure_names, tuple(cells))


def cube_hierarchical(w: Warehouse, guard: int | None = None) -> CubeRelation:
    """The hierarchical datacube: every space cell with a non-empty cover.

    Each fact contributes to the product of its slots' ancestor chains, so
    the result extends the classic cube with all roll-ups along the
    dimension trees.  Accumulation runs fact by fact in row-id order,
    matching a from-scratch aggregation of each cell's cover exactly.
    Refuses with ``SizeGuardError`` when the space exceeds the guard.
    """
    check_size_guard(w.ctx, guard)
    hs = w.ctx.hierarchies
    specs = w.measures
    acc: dict[tuple[int, ...], list] = {}
    for f in w.facts:
        chains = [h.ancestor_path(v) for h, v in zip(hs, f.values)]
        for cell in itertools.product(*chains):
            state = acc.get(cell)
            if state is None:
                # SUM/AVG seed with 0.0 + value to mirror aggregate()'s fold.
                state = [
                    [0.0 + mv, 1] if spec.function == "AVG" else
                    1 if spec.function == "COUNT" else
                    0.0 + mv if spec.function == "SUM" else mv
                    for spec, mv in zip(specs, f.measures)
                ]
                acc[cell] = state
            else:
                for k, (spec, mv) in enumerate(zip(specs, f.measures)):
                    fn = spec.function
                    if fn == "SUM":
                        state[k] += mv
                    elif fn == "MAX":
                        if mv > state[k]:
                            state[k] = mv
                    elif fn == "MIN":
                        if mv < state[k]:
                            state[k] = mv
                    elif fn == "AVG":
                        state[k][0] += mv
                        state[k][1] += 1
                    else:  # COUNT
                        state[k] += 1
    cells = []
    for cell in sorted(acc, key=cell_sort_key):
        state = acc[cell]
        out = tuple(
            state[k][0] / state[k][1] if spec.function == "AVG"
            else float(state[k])
            for k, spec in enumerate(specs)
        )
        cells.append((cell, out))
    return CubeRelation(w.dimension_names, w.measure_names, tuple(cells))


def cuboid_order(
    w: Warehouse, finer: Iterable[str], coarser: Iterable[str]
) -> bool:
    """True when the first cuboid rolls up to the second (superset test).

    Cuboids are named by dimension-name sets; unknown names raise.
    """
    known = set(w.dimension_names)
    a, b = set(finer), set(coarser)
    for name in a | b:
        if name not in known:
            raise UnknownValueError(f"no dimension named {name!r}")
    return b <= a


def render_value(w: Warehouse, dim_index: int, value: int) -> str:
    """Display form of one slot: its label, falling back to the id."""
    h = w.ctx.hierarchies[dim_index]
    label = h.label(value)
    return label if label else str(value)


def write_cells_csv(
    w: Warehouse,
    relation: CubeRelation,
    stream: TextIO,
) -> None:
    """Write a cube relation as RFC 4180 CSV.

    Header row names dimensions then measures; ALL slots render as the
    root label, the all-empty cell renders as EMPTY in every dimension
    column with blank measures.  Output is deterministic.
    """
    writer = csv.writer(stream)
    writer.writerow(list(relation.dimension_names) + list(relation.measure_names))
    blank_measures = [""] * len(relation.measure_names)
    for cell, measures in relation.cells:
        if is_empty(cell):
            writer.writerow(
                ["EMPTY"] * len(relation.dimension_names) + blank_measures
            )
        else:
            row = [render_value(w, i, v) for i, v in enumerate(cell)]
            row.extend(repr(m) for m in measures)
            writer.writerow(row)
