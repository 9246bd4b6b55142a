"""Hierarchical datacube engine.

Dimensions are rooted value trees; a warehouse couples them with a fact
table; the cube lattice orders all multidimensional roll-ups; and the
closed cube condenses the hierarchical datacube losslessly, answering any
cell through closure.
"""

from .errors import (
    AmbiguousLabelError,
    DegenerateHierarchyError,
    EmptyCoverError,
    HdcError,
    HierarchyStructureError,
    IngestError,
    InvalidLevelError,
    ShapeError,
    SizeGuardError,
    UnknownValueError,
)
from .hierarchy import Hierarchy, LevelTuple, ROOT_ID
from .lattice import (
    Cell,
    EMPTY_TUPLE,
    LatticeContext,
    atoms,
    attribute_pairs,
    cell_sort_key,
    coatoms,
    generalizes,
    is_empty,
    iter_space,
    meet,
    product,
    rank,
    semiproduct,
    space_size,
)
from .cube import (
    AGGREGATES,
    CubeRelation,
    Fact,
    MeasureSpec,
    Warehouse,
    aggregate,
    aggregate_rows,
    cover,
    cube_classic,
    cube_hierarchical,
    cuboid_order,
    relation_bytes,
    write_cells_csv,
)
from .closure import (
    ClosedCube,
    CubeStats,
    closed_cube,
    closure_of,
    cube_stats,
    query,
    write_closed_csv,
)
from .ingest import (
    DimensionConfig,
    StarConfig,
    ValidationReport,
    export_dimension,
    export_dimension_text,
    load_dimension,
    load_facts,
    load_warehouse,
    read_config,
    validate,
)
from .verify import VerificationReport, run_verification

__version__ = "0.1.0"

__all__ = [
    "AGGREGATES",
    "AmbiguousLabelError",
    "Cell",
    "ClosedCube",
    "CubeRelation",
    "CubeStats",
    "DegenerateHierarchyError",
    "DimensionConfig",
    "EMPTY_TUPLE",
    "EmptyCoverError",
    "Fact",
    "HdcError",
    "Hierarchy",
    "HierarchyStructureError",
    "IngestError",
    "InvalidLevelError",
    "LatticeContext",
    "LevelTuple",
    "MeasureSpec",
    "ROOT_ID",
    "ShapeError",
    "SizeGuardError",
    "StarConfig",
    "UnknownValueError",
    "ValidationReport",
    "VerificationReport",
    "Warehouse",
    "aggregate",
    "aggregate_rows",
    "atoms",
    "attribute_pairs",
    "cell_sort_key",
    "closed_cube",
    "closure_of",
    "coatoms",
    "cover",
    "cube_classic",
    "cube_hierarchical",
    "cube_stats",
    "cuboid_order",
    "export_dimension",
    "export_dimension_text",
    "generalizes",
    "is_empty",
    "iter_space",
    "load_dimension",
    "load_facts",
    "load_warehouse",
    "meet",
    "product",
    "query",
    "rank",
    "read_config",
    "relation_bytes",
    "run_verification",
    "semiproduct",
    "space_size",
    "validate",
    "write_cells_csv",
    "write_closed_csv",
]
