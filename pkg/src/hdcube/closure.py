"""Cube closure and the closed datacube.

The closure of a cell is the meet of all fact tuples the cell covers: the
most specific cell that still covers exactly the same facts.  Cells whose
cover is empty close to the all-empty cell.  The fixpoints of this operator
form the closed cube, a lossless condensation of the hierarchical datacube:
any cell's aggregate is recovered by taking the meet of the closed cells
that specialize it and reading that cell's stored measures.

The closed set is computed by meet saturation: the distinct fact tuples are
closed cells, and the meet of two closed cells is closed, so saturating the
fact tuples under pairwise meets yields every fixpoint except the all-empty
sentinel, which is appended last.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, TextIO

from .cube import (
    CubeRelation,
    Warehouse,
    aggregate_rows,
    cover,
    relation_bytes,
    write_cells_csv,
)
from .errors import HdcError, ShapeError
from .lattice import (
    Cell,
    EMPTY_TUPLE,
    cell_sort_key,
    generalizes,
    is_empty,
    meet,
)


def closure_of(w: Warehouse, t: Cell) -> Cell:
    """Meet of the fact tuples covered by t; all-empty for an empty cover."""
    w.ctx.check_cell(t)
    if is_empty(t):
        return EMPTY_TUPLE
    ctx = w.ctx
    hs = ctx.hierarchies
    acc: Cell = EMPTY_TUPLE
    for f in w.facts:
        if all(h.is_ancestor(a, b) for h, a, b in zip(hs, t, f.values)):
            acc = meet(ctx, acc, f.values)
    return acc


@dataclass(frozen=True)
class ClosedCube:
    """The closed cells with their measures, plus the all-empty sentinel.

    ``cells`` maps each concrete closed cell to its measure vector; the
    sentinel is kept out of the mapping and materializes only in the
    exported relation, where it closes the listing with blank measures.
    """

    dimension_names: tuple[str, ...]
    measure_names: tuple[str, ...]
    cells: dict[tuple[int, ...], tuple[float, ...]]

    @property
    def cell_count(self) -> int:
        """Stored rows, the sentinel included."""
        return len(self.cells) + 1

    @property
    def byte_size(self) -> int:
        return relation_bytes(
            self.cell_count, len(self.dimension_names), len(self.measure_names)
        )

    def ordered_cells(self) -> tuple[tuple[Cell, tuple[float, ...]], ...]:
        out: list[tuple[Cell, tuple[float, ...]]] = [
            (cell, self.cells[cell])
            for cell in sorted(self.cells, key=cell_sort_key)
        ]
        out.append((EMPTY_TUPLE, ()))
        return tuple(out)

    def relation(self) -> CubeRelation:
        return CubeRelation(
            self.dimension_names, self.measure_names, self.ordered_cells()
        )


def closed_cube(w: Warehouse) -> ClosedCube:
    """Saturate the distinct fact tuples under pairwise meets.

    Every new meet re-enters the worklist until no pair produces an unseen
    cell.  Measures are then aggregated once per closed cell over its
    cover.
    """
    ctx = w.ctx
    base = list(w.distinct_fact_cells())
    closed: set[tuple[int, ...]] = set(base)
    frontier = base
    while frontier:
        snapshot = tuple(closed)
        fresh: list[tuple[int, ...]] = []
        for t in frontier:
            for u in snapshot:
                m = meet(ctx, t, u)
                if m not in closed:
                    closed.add(m)
                    fresh.append(m)
        frontier = fresh
    measured = {
        cell: aggregate_rows(w, cover(w, cell))
        for cell in sorted(closed, key=cell_sort_key)
    }
    return ClosedCube(w.dimension_names, w.measure_names, measured)


def query(cc: ClosedCube, w: Warehouse, t: Cell) -> Optional[tuple[float, ...]]:
    """Answer a point query from the closed cube alone.

    Takes the meet of the closed cells that specialize t; that meet is t's
    closure, so its stored measures are exactly t's aggregate.  Returns
    ``None`` when no concrete closed cell specializes t (an empty cell).
    """
    ctx = w.ctx
    ctx.check_cell(t)
    if is_empty(t):
        raise ShapeError("queries take a concrete cell, not the all-empty cell")
    acc: Cell = EMPTY_TUPLE
    for u in cc.cells:
        if generalizes(ctx, t, u):
            acc = meet(ctx, acc, u)
    if is_empty(acc):
        return None
    try:
        return cc.cells[acc]
    except KeyError:
        raise HdcError(
            f"closed cube is not meet-closed: missing {acc!r}"
        ) from None


@dataclass(frozen=True)
class CubeStats:
    """Tuple counts, byte sizes, and size ratios of the three cubes."""

    fact_count: int
    dim_count: int
    measure_count: int
    classic_cells: int
    classic_bytes: int
    hierarchical_cells: int
    hierarchical_bytes: int
    closed_cells: int
    closed_bytes: int

    @property
    def classic_over_closed(self) -> float:
        return self.classic_bytes / self.closed_bytes

    @property
    def hierarchical_over_closed(self) -> float:
        return self.hierarchical_bytes / self.closed_bytes

    def format(self) -> str:
        lines = [
            f"facts                {self.fact_count}",
            f"dimensions           {self.dim_count}",
            f"measures             {self.measure_count}",
            f"classic cube         {self.classic_cells} cells, "
            f"{self.classic_bytes} bytes",
            f"hierarchical cube    {self.hierarchical_cells} cells, "
            f"{self.hierarchical_bytes} bytes",
            f"closed cube          {self.closed_cells} cells, "
            f"{self.closed_bytes} bytes",
            f"classic / closed     {self.classic_over_closed:.2f}",
            f"hierarchical / closed {self.hierarchical_over_closed:.2f}",
        ]
        return "\n".join(lines)


def cube_stats(
    w: Warehouse,
    classic: CubeRelation,
    hierarchical: CubeRelation,
    closed: ClosedCube,
) -> CubeStats:
    return CubeStats(
        fact_count=len(w.facts),
        dim_count=w.ctx.dim_count,
        measure_count=len(w.measures),
        classic_cells=classic.cell_count,
        classic_bytes=classic.byte_size,
        hierarchical_cells=hierarchical.cell_count,
        hierarchical_bytes=hierarchical.byte_size,
        closed_cells=closed.cell_count,
        closed_bytes=closed.byte_size,
    )


def write_closed_csv(w: Warehouse, cc: ClosedCube, stream: TextIO) -> None:
    """CSV form of the closed cube; the sentinel row closes the file."""
    write_cells_csv(w, cc.relation(), stream)
