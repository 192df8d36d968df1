"""End-to-end snapshot pipeline.

The accelerated path builds the Rips snapshot at every grade, strong-collapses
each one to its core (snapshots are independent, so a worker pool may handle
them concurrently), assembles the cores into a tower, converts the tower to an
equivalent filtration and reduces it.  The uncollapsed twin skips collapsing
and reduces the first-appearance filtration of the fully expanded snapshots —
the same construction the verification oracle uses — so the two diagrams can
be compared per dimension.

Worker count never affects the output: results are merged in snapshot order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from time import perf_counter
from typing import Callable, Iterable, Sequence, TypeVar

import numpy as np

from .collapse import core
from .complexes import DEFAULT_EXPANSION_CAP, ComplexStats
from .persistence import (
    PersistenceDiagram,
    bottleneck_distance,
    compute_persistence,
    filtration_from_snapshots,
)
from .rips import SnapshotSchedule, as_grades, rips_snapshot, validate_distance_matrix
from .tower import Filtration, Include, Tower, assemble_core_tower, tower_to_filtration

_T = TypeVar("_T")


@dataclass(frozen=True, slots=True)
class SnapshotStats:
    """Size of one snapshot before and after collapsing."""

    grade: float
    before: ComplexStats
    after: ComplexStats


@dataclass(frozen=True, slots=True)
class PipelineTimings:
    """The three timed phases, in seconds."""

    collapse_max: float  # slowest single-snapshot collapse (MCT)
    assembly: float  # tower assembly + conversion to a filtration (AT)
    reduction: float  # boundary-matrix reduction (PDT)


@dataclass(frozen=True, slots=True)
class PipelineResult:
    diagram: PersistenceDiagram
    tower: Tower
    filtration: Filtration
    snapshots: tuple[SnapshotStats, ...]
    timings: PipelineTimings


def _map_ordered(
    fn: Callable[[float], _T], items: Sequence[float], workers: int
) -> list[_T]:
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def run_pipeline(
    D: np.ndarray,
    sched: SnapshotSchedule | Iterable[float],
    *,
    workers: int = 1,
    collapse: bool = True,
    cap: int = DEFAULT_EXPANSION_CAP,
    include_zero_pairs: bool = False,
) -> PipelineResult:
    """Run the snapshot pipeline on a distance matrix.

    With ``collapse=False`` the snapshots are expanded as-is instead of being
    collapsed first; the resulting tower is inclusions only and the stats
    report each snapshot unchanged.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    D = validate_distance_matrix(D)
    grades = as_grades(sched)

    if collapse:

        def job(g: float) -> tuple[ComplexStats, object, float]:
            snapshot = rips_snapshot(D, g)
            t0 = perf_counter()
            result = core(snapshot)
            return snapshot.stats(), result, perf_counter() - t0

        results = _map_ordered(job, grades, workers)
        stats = tuple(
            SnapshotStats(g, before, res.matrix.stats())
            for g, (before, res, _) in zip(grades, results)
        )
        collapse_max = max(elapsed for _, _, elapsed in results)
        t0 = perf_counter()
        tower = assemble_core_tower(
            [res.matrix for _, res, _ in results],
            [res.retraction for _, res, _ in results],
            grades,
            cap,
        )
        filtration = tower_to_filtration(tower)
        assembly = perf_counter() - t0
    else:
        snapshots = _map_ordered(lambda g: rips_snapshot(D, g), grades, workers)
        stats = tuple(
            SnapshotStats(g, s.stats(), s.stats())
            for g, s in zip(grades, snapshots)
        )
        collapse_max = 0.0
        t0 = perf_counter()
        filtration = filtration_from_snapshots(snapshots, grades, cap)
        tower = Tower(tuple(Include(s, g) for s, g in filtration.cells))
        assembly = perf_counter() - t0

    t0 = perf_counter()
    diagram = compute_persistence(filtration, include_zero_pairs=include_zero_pairs)
    reduction = perf_counter() - t0
    return PipelineResult(
        diagram,
        tower,
        filtration,
        stats,
        PipelineTimings(collapse_max, assembly, reduction),
    )


STATS_CSV_HEADER = "grade,v_before,m_before,d_before,v_after,m_after,d_after"


def stats_to_csv(snapshots: Iterable[SnapshotStats]) -> str:
    """Per-snapshot size statistics as CSV."""
    lines = [STATS_CSV_HEADER]
    for s in snapshots:
        b, a = s.before, s.after
        lines.append(
            f"{s.grade!r},{b.n_vertices},{b.n_maximal},{b.dimension},"
            f"{a.n_vertices},{a.n_maximal},{a.dimension}"
        )
    return "\n".join(lines) + "\n"


@dataclass(frozen=True, slots=True)
class DimensionVerdict:
    dim: int
    equal: bool
    bottleneck: float


@dataclass(frozen=True, slots=True)
class CompareReport:
    collapsed: PersistenceDiagram
    uncollapsed: PersistenceDiagram
    verdicts: tuple[DimensionVerdict, ...]

    @property
    def equal(self) -> bool:
        return all(v.equal for v in self.verdicts)


def compare_pipelines(
    D: np.ndarray,
    sched: SnapshotSchedule | Iterable[float],
    *,
    workers: int = 1,
    cap: int = DEFAULT_EXPANSION_CAP,
) -> CompareReport:
    """Run the collapsed and uncollapsed pipelines and compare the diagrams."""
    collapsed = run_pipeline(D, sched, workers=workers, collapse=True, cap=cap)
    uncollapsed = run_pipeline(D, sched, workers=workers, collapse=False, cap=cap)
    a, b = collapsed.diagram, uncollapsed.diagram
    dims = sorted(set(a.dimensions()) | set(b.dimensions()))
    verdicts = tuple(
        DimensionVerdict(
            dim,
            sorted(a.in_dimension(dim)) == sorted(b.in_dimension(dim)),
            bottleneck_distance(a, b, dim),
        )
        for dim in dims
    )
    return CompareReport(a, b, verdicts)
