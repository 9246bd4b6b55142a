"""The cube lattice spanned by a fixed list of dimension trees.

A cell of the space is a tuple holding one value id per dimension (the root
id standing for ALL), plus one distinguished all-empty tuple that sits above
everything else.  Cells are ordered by componentwise ancestry: ``t`` precedes
``u`` when every slot of ``t`` is an ancestor of the matching slot of ``u``.
This module implements that order, its meet (componentwise nearest common
ancestor), the product and semiproduct set operators, the attribute-set
embedding with its rank, the atoms and coatoms, and guarded enumeration of
the whole space.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import HdcError, ShapeError, SizeGuardError
from .hierarchy import Hierarchy, ROOT_ID

DEFAULT_SIZE_GUARD = 10_000_000
SIZE_GUARD_ENV = "HDC_SIZE_GUARD"


class _EmptyTuple:
    """The unique all-empty cell; compares above every other cell."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "EMPTY_TUPLE"


EMPTY_TUPLE = _EmptyTuple()

Cell = Union[tuple[int, ...], _EmptyTuple]


def is_empty(cell: Cell) -> bool:
    return cell is EMPTY_TUPLE or isinstance(cell, _EmptyTuple)


@dataclass(frozen=True)
class LatticeContext:
    """The ordered dimension list a space is built over."""

    hierarchies: tuple[Hierarchy, ...]

    @property
    def dim_count(self) -> int:
        return len(self.hierarchies)

    @property
    def dimension_names(self) -> tuple[str, ...]:
        return tuple(h.name for h in self.hierarchies)

    def bottom(self) -> tuple[int, ...]:
        """The all-ALL cell, least element of the space."""
        return (ROOT_ID,) * self.dim_count

    def check_cell(self, cell: Cell) -> Cell:
        if is_empty(cell):
            return cell
        if not isinstance(cell, tuple) or len(cell) != self.dim_count:
            raise ShapeError(
                f"cell {cell!r} does not match {self.dim_count} dimension(s)"
            )
        return cell


def cell_sort_key(cell: Cell):
    """Deterministic cell order: ALL before real values slotwise, empty last."""
    if is_empty(cell):
        return (1,)
    return (0, tuple((0, 0) if v == ROOT_ID else (1, v) for v in cell))


def generalizes(ctx: LatticeContext, t: Cell, u: Cell) -> bool:
    """True when t precedes u in the specialization order (t is coarser)."""
    ctx.check_cell(t)
    ctx.check_cell(u)
    if is_empty(u):
        return True
    if is_empty(t):
        return False
    return all(
        h.is_ancestor(a, b) for h, a, b in zip(ctx.hierarchies, t, u)
    )


def meet(ctx: LatticeContext, t: Cell, u: Cell) -> Cell:
    """Greatest common generalization: componentwise nearest common ancestor.

    The all-empty cell is the identity.
    """
    ctx.check_cell(t)
    ctx.check_cell(u)
    if is_empty(t):
        return u
    if is_empty(u):
        return t
    return tuple(
        h.common_ancestor(a, b) for h, a, b in zip(ctx.hierarchies, t, u)
    )


def product(ctx: LatticeContext, t: Cell, u: Cell) -> tuple[Cell, ...]:
    """Nearest common specializations, combined across dimensions.

    Every slot pair is resolved to its nearest common descendants; the
    results combine by Cartesian product.  If any slot pair has no common
    descendant the cells share no specialization and the result collapses
    to the all-empty cell alone.
    """
    ctx.check_cell(t)
    ctx.check_cell(u)
    if is_empty(t) or is_empty(u):
        return (EMPTY_TUPLE,)
    per_dim = [
        h.common_descendants(a, b) for h, a, b in zip(ctx.hierarchies, t, u)
    ]
    if any(not values for values in per_dim):
        return (EMPTY_TUPLE,)
    return tuple(itertools.product(*per_dim))


def semiproduct(ctx: LatticeContext, t: Cell, u: Cell) -> tuple[Cell, ...]:
    """Same-level refinement: slotwise union of children, combined.

    Defined only for cells whose slots pair up on equal levels; any slot
    pair on unequal levels, or with no children at all, collapses the
    result to the all-empty cell alone.
    """
    ctx.check_cell(t)
    ctx.check_cell(u)
    if is_empty(t) or is_empty(u):
        return (EMPTY_TUPLE,)
    per_dim = [
        h.nearest_descendants(a, b) for h, a, b in zip(ctx.hierarchies, t, u)
    ]
    if any(not values for values in per_dim):
        return (EMPTY_TUPLE,)
    return tuple(itertools.product(*per_dim))


def attribute_pairs(ctx: LatticeContext, t: Cell) -> frozenset[tuple[int, int]]:
    """Order embedding into sets of (dimension index, value id) pairs.

    A cell maps to every non-root ancestor of each of its slots; the
    all-empty cell maps to every pair of the whole space plus a marker no
    concrete cell can reach, so cell order coincides with subset order on
    the images for every pair of cells.  Without the marker a space whose
    hierarchies are all single chains would give its deepest concrete
    cell the same image as the all-empty cell.
    """
    ctx.check_cell(t)
    if is_empty(t):
        return frozenset(
            (i, v)
            for i, h in enumerate(ctx.hierarchies)
            for v in h if v != ROOT_ID
        ) | {(-1, ROOT_ID)}
    pairs: list[tuple[int, int]] = []
    for i, (h, v) in enumerate(zip(ctx.hierarchies, t)):
        pairs.extend((i, a) for a in h.ancestor_path(v)[1:])
    return frozenset(pairs)


def rank(ctx: LatticeContext, t: Cell) -> int:
    """Size of the attribute-set image; the all-empty cell sits one above
    the highest-ranked coatom."""
    if is_empty(t):
        return 1 + sum(h.max_leaf_level() for h in ctx.hierarchies)
    return len(attribute_pairs(ctx, t))


def atoms(ctx: LatticeContext) -> tuple[tuple[int, ...], ...]:
    """Cells covering the bottom: one level-1 value, ALL everywhere else."""
    out: list[tuple[int, ...]] = []
    bottom = ctx.bottom()
    for i, h in enumerate(ctx.hierarchies):
        for v in h.level_values(1) if h.depth > 1 else ():
            out.append(bottom[:i] + (v,) + bottom[i + 1:])
    return tuple(out)


def coatoms(ctx: LatticeContext) -> tuple[tuple[int, ...], ...]:
    """Maximal concrete cells: every slot at a childless value."""
    per_dim = [h.leaves() for h in ctx.hierarchies]
    return tuple(itertools.product(*per_dim))


def space_size(ctx: LatticeContext) -> int:
    """Closed form: each dimension contributes its domain plus ALL, and the
    all-empty cell adds one."""
    return math.prod(h.domain_size + 1 for h in ctx.hierarchies) + 1


def resolve_size_guard(guard: int | None = None) -> int:
    """Effective guard: explicit argument, else environment, else default."""
    if guard is not None:
        return guard
    raw = os.environ.get(SIZE_GUARD_ENV)
    if raw is None:
        return DEFAULT_SIZE_GUARD
    try:
        return int(raw)
    except ValueError:
        raise HdcError(
            f"{SIZE_GUARD_ENV} must be an integer, got {raw!r}"
        ) from None


def check_size_guard(ctx: LatticeContext, guard: int | None = None) -> int:
    size = space_size(ctx)
    effective = resolve_size_guard(guard)
    if size > effective:
        raise SizeGuardError(size, effective)
    return size


def iter_space(ctx: LatticeContext, guard: int | None = None) -> Iterator[Cell]:
    """Every cell of the space, deterministically ordered.

    Slots iterate ALL first then ids ascending, dimensions nest left to
    right, and the all-empty cell comes last.  Refuses with
    ``SizeGuardError`` when the space exceeds the guard.
    """
    check_size_guard(ctx, guard)
    choices = [
        (ROOT_ID,) + tuple(sorted(v for v in h if v != ROOT_ID))
        for h in ctx.hierarchies
    ]
    yield from itertools.product(*choices)
    yield EMPTY_TUPLE
