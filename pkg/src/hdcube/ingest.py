"""Loading a warehouse from CSV path tables, a fact table, and an INI config.

Dimension files are path tables: an id column, one column per level from the
most general to the most specific, and a trailing label column.  Each row
defines the value whose id sits in the deepest filled level cell (that cell
must repeat the id) and asserts the full ancestor chain in the cells before
it; the filled cells must form a contiguous prefix.  Cross-row consistency
is enforced: a value may be defined once, every ancestor mentioned anywhere
must have a defining row, and all mentions must agree on its level and
parent.

Fact files carry a row id, one value id per dimension in config order, and
measure columns addressed by header name; extra columns are ignored, which
lets one file serve configs with different measure selections.

The config is an INI file:

    [warehouse]
    name = OM3

    [dimension:Player]
    file = d_player.csv
    levels = Country, Region, City

    [facts]
    file = facts.csv
    measures = Time:SUM, Score:MAX

Dimension sections appear in dimension order; paths resolve relative to the
config file.  All load failures raise ``IngestError`` carrying every
problem found, each tagged with file and line.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, TextIO

from configparser import ConfigParser, Error as ConfigError

from .cube import AGGREGATES, Fact, MeasureSpec, Warehouse
from .errors import HdcError, HierarchyStructureError, IngestError
from .hierarchy import Hierarchy, ROOT_ID
from .lattice import LatticeContext


@dataclass(frozen=True)
class DimensionConfig:
    name: str
    path: Path
    level_names: tuple[str, ...]


@dataclass(frozen=True)
class StarConfig:
    dimensions: tuple[DimensionConfig, ...]
    fact_path: Path
    measures: tuple[MeasureSpec, ...]
    name: str | None = None


def read_config(path: str | Path) -> StarConfig:
    """Parse and validate a star-schema config file."""
    path = Path(path)
    problems: list[str] = []
    parser = ConfigParser()
    parser.optionxform = str  # keep option and measure names case-sensitive
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh, source=str(path))
    except OSError as exc:
        raise IngestError(str(path), [f"cannot read config: {exc}"]) from exc
    except ConfigError as exc:
        raise IngestError(str(path), [f"malformed config: {exc}"]) from exc

    base = path.parent
    dimensions: list[DimensionConfig] = []
    fact_path: Path | None = None
    measures: list[MeasureSpec] = []
    name: str | None = None

    for section in parser.sections():
        if section == "warehouse":
            name = parser.get(section, "name", fallback=None)
        elif section.startswith("dimension:"):
            dim_name = section.split(":", 1)[1].strip()
            if not dim_name:
                problems.append(f"section [{section}]: empty dimension name")
                continue
            if any(d.name == dim_name for d in dimensions):
                problems.append(f"duplicate dimension name {dim_name!r}")
                continue
            file_opt = parser.get(section, "file", fallback=None)
            levels_opt = parser.get(section, "levels", fallback=None)
            if not file_opt:
                problems.append(f"dimension {dim_name}: missing file option")
            levels = tuple(
                s.strip() for s in (levels_opt or "").split(",") if s.strip()
            )
            if not levels:
                problems.append(f"dimension {dim_name}: missing or empty levels")
            if file_opt and levels:
                dimensions.append(
                    DimensionConfig(dim_name, base / file_opt, levels)
                )
        elif section == "facts":
            file_opt = parser.get(section, "file", fallback=None)
            measures_opt = parser.get(section, "measures", fallback=None)
            if not file_opt:
                problems.append("facts: missing file option")
            else:
                fact_path = base / file_opt
            for item in (s.strip() for s in (measures_opt or "").split(",")):
                if not item:
                    continue
                col, sep, fn = item.partition(":")
                if not sep or not col.strip() or not fn.strip():
                    problems.append(
                        f"facts: measure {item!r} is not of the form Name:FN"
                    )
                    continue
                fn = fn.strip().upper()
                if fn not in AGGREGATES:
                    problems.append(
                        f"facts: measure {col.strip()!r} uses unknown "
                        f"aggregate {fn!r}"
                    )
                    continue
                measures.append(MeasureSpec(col.strip(), fn))
        else:
            problems.append(f"unknown section [{section}]")

    if not dimensions:
        problems.append("config declares no dimensions")
    if fact_path is None and not any(p.startswith("facts:") for p in problems):
        problems.append("config declares no [facts] section")
    if not measures:
        problems.append("config declares no measures")
    if problems:
        raise IngestError(str(path), problems)
    return StarConfig(tuple(dimensions), fact_path, tuple(measures), name)


def _read_rows(path: Path) -> list[list[str]]:
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            return list(csv.reader(fh))
    except OSError as exc:
        raise IngestError(str(path), [f"cannot read file: {exc}"]) from exc


def load_dimension(
    path: str | Path, name: str, level_names: Iterable[str]
) -> Hierarchy:
    """Load one dimension from its path table."""
    path = Path(path)
    levels = tuple(level_names)
    rows = _read_rows(path)
    problems: list[str] = []
    if not rows:
        raise IngestError(str(path), ["empty file, expected a header row"])
    header = rows[0]
    if len(header) < 3:
        raise IngestError(
            str(path),
            [
                "header must hold an id column, at least one level column "
                "and a label column"
            ],
        )
    if tuple(h.strip() for h in header[1:-1]) != levels:
        raise IngestError(
            str(path),
            [
                f"level columns {header[1:-1]} do not match configured "
                f"levels {list(levels)}"
            ],
        )

    width = len(header)
    # value id -> (level, parent, label, line); ancestors asserted elsewhere
    defined: dict[int, tuple[int, int, str, int]] = {}
    asserted: list[tuple[int, int, int, int]] = []

    for line_no, row in enumerate(rows[1:], start=2):
        where = f"{path.name}:{line_no}"
        if len(row) != width:
            problems.append(
                f"{where}: {len(row)} fields, header has {width}"
            )
            continue
        id_text = row[0].strip()
        label = row[-1]
        cells = [c.strip() for c in row[1:-1]]
        try:
            value_id = int(id_text)
        except ValueError:
            problems.append(f"{where}: id {id_text!r} is not an integer")
            continue
        filled = [j for j, c in enumerate(cells) if c != ""]
        if not filled:
            problems.append(f"{where}: no level cell is filled")
            continue
        deepest = max(filled)
        if filled != list(range(deepest + 1)):
            problems.append(
                f"{where}: filled level cells are not a contiguous prefix"
            )
            continue
        try:
            chain = [int(cells[j]) for j in range(deepest + 1)]
        except ValueError:
            problems.append(f"{where}: non-integer level cell")
            continue
        if chain[deepest] != value_id:
            problems.append(
                f"{where}: id {value_id} differs from deepest level "
                f"cell {chain[deepest]}"
            )
            continue
        if value_id == ROOT_ID:
            problems.append(f"{where}: id {ROOT_ID} is reserved for ALL")
            continue
        if value_id in defined:
            problems.append(
                f"{where}: value {value_id} already defined on line "
                f"{defined[value_id][3]}"
            )
            continue
        parent = chain[deepest - 1] if deepest > 0 else ROOT_ID
        defined[value_id] = (deepest + 1, parent, label, line_no)
        for j in range(deepest):
            up = chain[j - 1] if j > 0 else ROOT_ID
            asserted.append((chain[j], j + 1, up, line_no))

    for value_id, level, parent, line_no in asserted:
        where = f"{path.name}:{line_no}"
        if value_id == ROOT_ID:
            problems.append(f"{where}: id {ROOT_ID} is reserved for ALL")
            continue
        record = defined.get(value_id)
        if record is None:
            problems.append(
                f"{where}: value {value_id} appears as an ancestor but no "
                f"row defines it"
            )
            continue
        have_level, have_parent, _, def_line = record
        if have_level != level:
            problems.append(
                f"{where}: value {value_id} used at level {level} but "
                f"defined at level {have_level} (line {def_line})"
            )
        elif have_parent != parent:
            problems.append(
                f"{where}: value {value_id} used with parent {parent} but "
                f"defined with parent {have_parent} (line {def_line})"
            )

    if problems:
        raise IngestError(str(path), problems)
    entries = [
        (value_id, level, parent, label)
        for value_id, (level, parent, label, _) in sorted(defined.items())
    ]
    try:
        return Hierarchy(name, levels, entries)
    except HierarchyStructureError as exc:
        raise IngestError(str(path), [str(exc)]) from exc


def load_facts(
    path: str | Path,
    ctx: LatticeContext,
    measures: Iterable[MeasureSpec],
    name: str | None = None,
) -> Warehouse:
    """Load the fact table and assemble the warehouse."""
    path = Path(path)
    specs = tuple(measures)
    rows = _read_rows(path)
    problems: list[str] = []
    if not rows:
        raise IngestError(str(path), ["empty file, expected a header row"])
    header = [h.strip() for h in rows[0]]
    n_dims = ctx.dim_count
    if len(header) < 1 + n_dims:
        raise IngestError(
            str(path),
            [
                f"header has {len(header)} columns, expected a row id plus "
                f"{n_dims} dimension columns"
            ],
        )
    measure_cols: dict[str, int] = {}
    tail = header[1 + n_dims:]
    for spec in specs:
        if spec.name not in tail:
            problems.append(
                f"{path.name}: no measure column named {spec.name!r}"
            )
        else:
            measure_cols[spec.name] = 1 + n_dims + tail.index(spec.name)
    if problems:
        raise IngestError(str(path), problems)

    width = len(rows[0])
    facts: list[Fact] = []
    seen: dict[int, int] = {}
    for line_no, row in enumerate(rows[1:], start=2):
        where = f"{path.name}:{line_no}"
        if len(row) != width:
            problems.append(f"{where}: {len(row)} fields, header has {width}")
            continue
        try:
            row_id = int(row[0])
        except ValueError:
            problems.append(f"{where}: row id {row[0]!r} is not an integer")
            continue
        if row_id in seen:
            problems.append(
                f"{where}: duplicate row id {row_id} (line {seen[row_id]})"
            )
            continue
        seen[row_id] = line_no
        ok = True
        values: list[int] = []
        for i, h in enumerate(ctx.hierarchies):
            cell = row[1 + i].strip()
            try:
                v = int(cell)
            except ValueError:
                problems.append(
                    f"{where}: dimension {h.name}: {cell!r} is not an id"
                )
                ok = False
                continue
            if v == ROOT_ID:
                problems.append(
                    f"{where}: dimension {h.name}: facts may not reference ALL"
                )
                ok = False
            elif v not in h:
                problems.append(
                    f"{where}: dimension {h.name}: no value with id {v}"
                )
                ok = False
            else:
                values.append(v)
        meas: list[float] = []
        for spec in specs:
            cell = row[measure_cols[spec.name]].strip()
            try:
                meas.append(float(cell))
            except ValueError:
                problems.append(
                    f"{where}: measure {spec.name}: {cell!r} is not a number"
                )
                ok = False
        if ok:
            facts.append(Fact(row_id, tuple(values), tuple(meas)))

    if problems:
        raise IngestError(str(path), problems)
    return Warehouse(ctx, specs, facts, name=name)


def load_warehouse(config: StarConfig | str | Path) -> Warehouse:
    """Load everything a config names and return the assembled warehouse."""
    if not isinstance(config, StarConfig):
        config = read_config(config)
    hierarchies = tuple(
        load_dimension(d.path, d.name, d.level_names) for d in config.dimensions
    )
    ctx = LatticeContext(hierarchies)
    return load_facts(config.fact_path, ctx, config.measures, name=config.name)


# ── validation report ──────────────────────────────────────────────────


@dataclass(frozen=True)
class DimensionSummary:
    name: str
    depth: int
    domain_size: int
    level_counts: tuple[tuple[str, int], ...]


@dataclass(frozen=True)
class ValidationReport:
    warehouse_name: str | None
    dimensions: tuple[DimensionSummary, ...]
    fact_count: int
    measure_names: tuple[str, ...]
    referenced_levels: tuple[tuple[str, tuple[tuple[int, int], ...]], ...]
    warnings: tuple[str, ...]

    def format(self) -> str:
        lines: list[str] = []
        title = self.warehouse_name or "warehouse"
        lines.append(f"{title}: {len(self.dimensions)} dimension(s), "
                     f"{self.fact_count} fact(s), "
                     f"{len(self.measure_names)} measure(s)")
        for dim in self.dimensions:
            lines.append(
                f"  dimension {dim.name}: depth {dim.depth}, "
                f"{dim.domain_size} value(s)"
            )
            for level_name, count in dim.level_counts:
                lines.append(f"    {level_name}: {count}")
        for dim_name, histogram in self.referenced_levels:
            parts = ", ".join(
                f"level {level}: {count}" for level, count in histogram
            )
            lines.append(f"  facts reference {dim_name} at {parts or 'nothing'}")
        for warning in self.warnings:
            lines.append(f"  warning: {warning}")
        return "\n".join(lines)


def validate(w: Warehouse) -> ValidationReport:
    """Re-check structural invariants and summarize the loaded warehouse.

    Raises ``HdcError`` if any invariant fails; returns the summary with
    non-fatal observations as warnings.
    """
    warnings: list[str] = []
    summaries: list[DimensionSummary] = []
    for h in w.ctx.hierarchies:
        for v in h:
            if v == ROOT_ID:
                if h.level_of(v) != 0:
                    raise HdcError(f"{h.name}: root is not on level 0")
                continue
            p = h.parent(v)
            if p is None or p not in h:
                raise HdcError(f"{h.name}: value {v} has no parent")
            if h.level_of(p) >= h.level_of(v):
                raise HdcError(f"{h.name}: value {v} does not deepen its parent")
            if h.ancestor_path(v)[0] != ROOT_ID:
                raise HdcError(f"{h.name}: value {v} does not reach the root")
        counts = []
        for level in range(1, h.depth):
            n = len(h.level_values(level))
            counts.append((h.levels[level], n))
            if n == 0:
                warnings.append(f"{h.name}: level {h.levels[level]} has no values")
        summaries.append(
            DimensionSummary(h.name, h.depth, h.domain_size, tuple(counts))
        )

    histograms: list[tuple[str, tuple[tuple[int, int], ...]]] = []
    for i, h in enumerate(w.ctx.hierarchies):
        seen: dict[int, int] = {}
        for f in w.facts:
            level = h.level_of(f.values[i])
            seen[level] = seen.get(level, 0) + 1
        histograms.append((h.name, tuple(sorted(seen.items()))))
    if not w.facts:
        warnings.append("fact table is empty")

    return ValidationReport(
        warehouse_name=w.name,
        dimensions=tuple(summaries),
        fact_count=len(w.facts),
        measure_names=w.measure_names,
        referenced_levels=tuple(histograms),
        warnings=tuple(warnings),
    )


def export_dimension(h: Hierarchy, stream: TextIO) -> None:
    """Write a hierarchy back out as a path table.

    Reloading the output with the same level names reproduces the
    hierarchy exactly (ids, levels, parents, labels).
    """
    writer = csv.writer(stream)
    writer.writerow(["Id", *h.levels[1:], "Label"])
    n_levels = h.depth - 1
    for v in sorted(set(h) - {ROOT_ID}):
        cells = [""] * n_levels
        for a in h.ancestor_path(v)[1:]:
            cells[h.level_of(a) - 1] = str(a)
        writer.writerow([str(v), *cells, h.label(v)])


def export_dimension_text(h: Hierarchy) -> str:
    buf = io.StringIO()
    export_dimension(h, buf)
    return buf.getvalue()
