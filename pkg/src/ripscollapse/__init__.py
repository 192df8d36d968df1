"""Strong-collapse acceleration for persistent homology of Rips snapshots.

The library represents simplicial complexes by their maximal simplices,
collapses each Rips snapshot to its core, assembles the cores into a tower
of inclusions and edge contractions, converts the tower to an equivalent
filtration, and reduces it to a persistence diagram.  An uncollapsed twin of
the pipeline serves as the verification oracle.
"""

from .collapse import (
    CollapseTrace,
    CoreResult,
    RetractionMap,
    core,
    find_dominating_column,
    find_dominating_row,
    nerve_step,
    replay_trace,
    trace_events_from_text,
    trace_to_text,
)
from .complexes import (
    DEFAULT_EXPANSION_CAP,
    ComplexMatrix,
    ComplexStats,
    Simplex,
    as_simplex,
    simplex_faces,
)
from .errors import (
    CollapseConsistencyError,
    EmptyComplexError,
    ExpansionCapError,
    FiltrationOrderError,
    FormatError,
    RipsCollapseError,
    SimplexError,
    TowerOpError,
)
from .persistence import (
    BoundaryMatrix,
    PersistenceDiagram,
    betti_numbers,
    bottleneck_distance,
    compute_persistence,
    filtration_from_snapshots,
    oracle_pipeline,
    snapshot_filtration,
)
from .pipeline import (
    CompareReport,
    DimensionVerdict,
    PipelineResult,
    PipelineTimings,
    SnapshotStats,
    compare_pipelines,
    run_pipeline,
    stats_to_csv,
)
from .rips import (
    SnapshotSchedule,
    as_grades,
    count_rips_simplices,
    maximal_cliques,
    neighborhood_bitsets,
    pairwise_distances,
    rips_snapshot,
    rips_snapshots,
    validate_distance_matrix,
)
from .tower import (
    Contract,
    ElementaryOp,
    Filtration,
    Include,
    Tower,
    assemble_core_tower,
    tower_to_filtration,
)

__version__ = "0.1.0"

__all__ = [
    "BoundaryMatrix",
    "CollapseConsistencyError",
    "CollapseTrace",
    "CompareReport",
    "ComplexMatrix",
    "ComplexStats",
    "Contract",
    "CoreResult",
    "DEFAULT_EXPANSION_CAP",
    "DimensionVerdict",
    "ElementaryOp",
    "EmptyComplexError",
    "ExpansionCapError",
    "Filtration",
    "FiltrationOrderError",
    "FormatError",
    "Include",
    "PersistenceDiagram",
    "PipelineResult",
    "PipelineTimings",
    "RetractionMap",
    "RipsCollapseError",
    "Simplex",
    "SimplexError",
    "SnapshotSchedule",
    "SnapshotStats",
    "Tower",
    "TowerOpError",
    "as_grades",
    "as_simplex",
    "assemble_core_tower",
    "betti_numbers",
    "bottleneck_distance",
    "compare_pipelines",
    "compute_persistence",
    "core",
    "count_rips_simplices",
    "filtration_from_snapshots",
    "find_dominating_column",
    "find_dominating_row",
    "maximal_cliques",
    "nerve_step",
    "neighborhood_bitsets",
    "oracle_pipeline",
    "pairwise_distances",
    "replay_trace",
    "rips_snapshot",
    "rips_snapshots",
    "run_pipeline",
    "simplex_faces",
    "snapshot_filtration",
    "stats_to_csv",
    "tower_to_filtration",
    "trace_events_from_text",
    "trace_to_text",
    "validate_distance_matrix",
]
