"""Exception types shared across the engine."""

from __future__ import annotations


class HdcError(Exception):
    """Base class for every error raised by this package."""


class UnknownValueError(HdcError):
    """A value id or label does not exist in the dimension it was used with."""


class AmbiguousLabelError(HdcError):
    """A label matches more than one value of a dimension."""


class InvalidLevelError(HdcError):
    """A level index or level name is outside the dimension's schema."""


class DegenerateHierarchyError(HdcError):
    """The dimension has no levels below the ALL root."""


class HierarchyStructureError(HdcError):
    """The value tree violates a structural invariant (bad parent, bad level)."""


class ShapeError(HdcError):
    """A tuple's arity does not match the dimension list it is used with."""


class EmptyCoverError(HdcError):
    """An aggregate was requested over an empty set of fact rows."""


class SizeGuardError(HdcError):
    """An enumeration was refused because the space exceeds the size guard."""

    def __init__(self, count: int, guard: int):
        self.count = count
        self.guard = guard
        super().__init__(
            f"space holds {count} tuples, which exceeds the size guard of {guard}"
        )


class IngestError(HdcError):
    """One or more validation failures while reading external data.

    ``problems`` lists every failure found, each prefixed with its source
    file and line where that is known.
    """

    def __init__(self, source: str, problems: list[str]):
        self.source = source
        self.problems = list(problems)
        head = f"{source}: {len(self.problems)} validation failure(s)"
        super().__init__("\n".join([head, *self.problems]))
