"""One hierarchical dimension: a rooted tree of values with named levels.

Every dimension carries a synthetic ALL value at level 0 that generalizes
the whole domain; real values sit at levels 1 and deeper, each with a single
parent on the level above it.  The tree induces the ancestor order used by
the cube lattice, and this module holds all single-dimension operators:
the ancestor test, nearest common ancestor, nearest common descendants,
same-level nearest descendants, and the most general / most specific value
sets.

Values are addressed by integer id.  Id 0 is reserved for the ALL root of
every dimension; data files must not use it.  Labels are display strings
and play no structural role (duplicates are legal, lookups by label raise
when ambiguous).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Optional

from .errors import (
    AmbiguousLabelError,
    DegenerateHierarchyError,
    HierarchyStructureError,
    InvalidLevelError,
    UnknownValueError,
)

ROOT_ID = 0


@dataclass(frozen=True)
class LevelTuple:
    """A value's ancestor chain spread over the dimension's level slots.

    ``slots[e - 1]`` holds the ancestor at level ``e``, or ``None`` where the
    chain has no value for that level.  For trees built from path tables the
    filled slots always form a prefix.
    """

    slots: tuple[Optional[int], ...]


class Hierarchy:
    """Immutable value tree for a single dimension.

    ``level_names`` names the levels below the root, most general first.
    ``entries`` yields ``(value_id, level, parent_id, label)`` rows in any
    order; ``parent_id`` is ``ROOT_ID`` for values attached directly under
    the ALL root.  Construction validates the whole structure and raises
    ``HierarchyStructureError`` on the first violation.
    """

    def __init__(
        self,
        name: str,
        level_names: Iterable[str],
        entries: Iterable[tuple[int, int, int, str]],
    ):
        self.name = name
        names = tuple(str(n) for n in level_names)
        root_label = f"ALL_{name}"
        self.levels: tuple[str, ...] = (root_label,) + names
        if len(set(self.levels)) != len(self.levels):
            raise HierarchyStructureError(f"{name}: duplicate level names")

        self._level: dict[int, int] = {ROOT_ID: 0}
        self._parent: dict[int, int] = {}
        self._label: dict[int, str] = {ROOT_ID: root_label}
        rows = [tuple(e) for e in entries]

        for value, level, parent, label in rows:
            if value == ROOT_ID:
                raise HierarchyStructureError(
                    f"{name}: id {ROOT_ID} is reserved for the ALL root"
                )
            if value in self._parent:
                raise HierarchyStructureError(f"{name}: duplicate value id {value}")
            if not 1 <= level < self.depth:
                raise HierarchyStructureError(
                    f"{name}: value {value} has level {level}, "
                    f"schema depth is {self.depth}"
                )
            self._level[value] = level
            self._parent[value] = parent
            self._label[value] = str(label)

        for value, level, parent, _ in rows:
            if parent != ROOT_ID and parent not in self._parent:
                raise HierarchyStructureError(
                    f"{name}: value {value} names unknown parent {parent}"
                )
            if self._level[parent] >= level:
                raise HierarchyStructureError(
                    f"{name}: value {value} at level {level} has parent "
                    f"{parent} at level {self._level[parent]}"
                )

        kids: dict[int, list[int]] = {}
        for value, parent in self._parent.items():
            kids.setdefault(parent, []).append(value)
        self._children: dict[int, tuple[int, ...]] = {
            v: tuple(sorted(kids.get(v, ()))) for v in self._level
        }

        by_level: dict[int, list[int]] = {}
        for value, level in self._level.items():
            if value != ROOT_ID:
                by_level.setdefault(level, []).append(value)
        self._by_level: dict[int, tuple[int, ...]] = {
            e: tuple(sorted(vs)) for e, vs in by_level.items()
        }

        # Root paths, eager: parents were validated above, levels strictly
        # decrease along a chain, so the recursion always terminates.
        self._path: dict[int, tuple[int, ...]] = {ROOT_ID: (ROOT_ID,)}
        for value in sorted(self._parent, key=self._level.get):
            self._path[value] = self._path[self._parent[value]] + (value,)
        self._ancestors: dict[int, frozenset[int]] = {
            v: frozenset(p) for v, p in self._path.items()
        }

        by_label: dict[str, list[int]] = {}
        for value, label in self._label.items():
            by_label.setdefault(label, []).append(value)
        self._by_label: dict[str, tuple[int, ...]] = {
            lab: tuple(sorted(vs)) for lab, vs in by_label.items()
        }

    # ── basic accessors ────────────────────────────────────────────────

    @property
    def depth(self) -> int:
        return len(self.levels)

    @property
    def domain_size(self) -> int:
        """Number of values below the root."""
        return len(self._parent)

    def __contains__(self, value: int) -> bool:
        return value in self._level

    def __iter__(self) -> Iterator[int]:
        """All value ids including the root, by (level, id)."""
        return iter(sorted(self._level, key=lambda v: (self._level[v], v)))

    def _require(self, value: int) -> int:
        if value not in self._level:
            raise UnknownValueError(f"{self.name}: no value with id {value}")
        return value

    def level_of(self, value: int) -> int:
        return self._level[self._require(value)]

    def level_index(self, level_name: str) -> int:
        try:
            return self.levels.index(level_name)
        except ValueError:
            raise InvalidLevelError(
                f"{self.name}: no level named {level_name!r}"
            ) from None

    def level_values(self, level: int) -> tuple[int, ...]:
        """All value ids on one level, ascending.  Level 0 is the root."""
        if not 0 <= level < self.depth:
            raise InvalidLevelError(
                f"{self.name}: level {level} outside schema of depth {self.depth}"
            )
        if level == 0:
            return (ROOT_ID,)
        return self._by_level.get(level, ())

    def label(self, value: int) -> str:
        return self._label[self._require(value)]

    def parent(self, value: int) -> Optional[int]:
        """Parent id, or None for the root."""
        self._require(value)
        return self._parent.get(value)

    def children(self, value: int) -> tuple[int, ...]:
        return self._children[self._require(value)]

    def ancestor_path(self, value: int) -> tuple[int, ...]:
        """Chain from the root down to the value itself, inclusive."""
        return self._path[self._require(value)]

    def leaves(self) -> tuple[int, ...]:
        """Childless values, ascending; the root itself if the domain is empty."""
        empty = [v for v in self._children if not self._children[v]]
        if self._parent:
            empty = [v for v in empty if v != ROOT_ID]
        return tuple(sorted(empty))

    def max_leaf_level(self) -> int:
        return max((self._level[v] for v in self.leaves()), default=0)

    def resolve_label(self, label: str) -> int:
        matches = self._by_label.get(label, ())
        if not matches:
            raise UnknownValueError(f"{self.name}: no value labelled {label!r}")
        if len(matches) > 1:
            raise AmbiguousLabelError(
                f"{self.name}: label {label!r} matches ids {list(matches)}"
            )
        return matches[0]

    # ── order and operators ────────────────────────────────────────────

    def is_ancestor(self, x: int, y: int) -> bool:
        """True when x lies on y's chain to the root (reflexively)."""
        self._require(x)
        return x in self._ancestors[self._require(y)]

    def common_ancestor(self, x: int, y: int) -> int:
        """Nearest common ancestor, by walking both chains upward."""
        a, b = self._require(x), self._require(y)
        while a != b:
            if self._level[a] >= self._level[b]:
                a = self._parent.get(a, ROOT_ID)
            else:
                b = self._parent.get(b, ROOT_ID)
        return a

    def common_descendants(self, x: int, y: int) -> tuple[int, ...]:
        """Nearest common descendants; empty tuple when there are none.

        Equal arguments yield the argument itself.  Otherwise only strict
        common descendants count, so two distinct comparable values yield
        the nearest values below the deeper one, and incomparable values
        yield nothing (the tree gives their subtrees no common value).
        """
        self._require(x), self._require(y)
        if x == y:
            return (x,)
        if self.is_ancestor(x, y):
            deeper = y
        elif self.is_ancestor(y, x):
            deeper = x
        else:
            return ()
        below: list[int] = []
        stack = list(self._children[deeper])
        while stack:
            v = stack.pop()
            below.append(v)
            stack.extend(self._children[v])
        if not below:
            return ()
        nearest = min(self._level[v] for v in below)
        return tuple(sorted(v for v in below if self._level[v] == nearest))

    def nearest_descendants(self, x: int, y: int) -> tuple[int, ...]:
        """Union of the two values' children; defined on equal levels only."""
        self._require(x), self._require(y)
        if self._level[x] != self._level[y]:
            return ()
        return tuple(sorted(set(self._children[x]) | set(self._children[y])))

    def most_general(self) -> tuple[int, ...]:
        """Values on level 1, the coarsest real level."""
        if self.depth < 2:
            raise DegenerateHierarchyError(f"{self.name}: no levels below the root")
        return self.level_values(1)

    def most_specific(self) -> tuple[int, ...]:
        """Values on the deepest level of the schema."""
        if self.depth < 2:
            raise DegenerateHierarchyError(f"{self.name}: no levels below the root")
        return self.level_values(self.depth - 1)

    # ── level tuples ───────────────────────────────────────────────────

    def level_tuple(self, value: int) -> LevelTuple:
        """Spread the value's ancestor chain over the schema's level slots."""
        slots: list[Optional[int]] = [None] * (self.depth - 1)
        for v in self.ancestor_path(value)[1:]:
            slots[self._level[v] - 1] = v
        return LevelTuple(tuple(slots))

    def filled_level_names(self, lt: LevelTuple) -> tuple[str, ...]:
        """Names of the levels a level tuple actually fills, top-down."""
        if len(lt.slots) != self.depth - 1:
            raise InvalidLevelError(
                f"{self.name}: level tuple has {len(lt.slots)} slots, "
                f"schema has {self.depth - 1}"
            )
        return tuple(
            self.levels[e + 1] for e, v in enumerate(lt.slots) if v is not None
        )

    def __repr__(self) -> str:
        return (
            f"Hierarchy({self.name!r}, depth={self.depth}, "
            f"values={self.domain_size})"
        )
