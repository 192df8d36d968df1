"""Persistence diagrams via GF(2) boundary-matrix reduction.

Cells are ordered by (grade, dimension, lexicographic vertex order); the
boundary matrix is packed into 64-bit words and reduced column-by-column,
one dimension block at a time (columns of different dimensions never
interact).  The optional twist mode processes dimensions top-down and skips
columns already known to die, producing the identical diagram.

This module also hosts the validation tooling mandated around the diagrams:
Betti numbers of a single complex, the uncollapsed snapshot-filtration
oracle, and exact bottleneck distance.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from ._kernels import _BIT, reduce_block
from .complexes import (
    DEFAULT_EXPANSION_CAP,
    ComplexMatrix,
    Simplex,
)
from .errors import FiltrationOrderError
from .rips import SnapshotSchedule, as_grades, rips_snapshot, validate_distance_matrix
from .tower import Filtration

# Refuse reductions whose packed boundary blocks would not fit comfortably
# in memory; at that size the expansion cap has usually fired already.
_MAX_BLOCK_BYTES = 1 << 30


@dataclass(frozen=True, slots=True)
class PersistenceDiagram:
    """Multiset of (dimension, birth, death) triples, death possibly inf."""

    pairs: tuple[tuple[int, float, float], ...]

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, float, float]]) -> "PersistenceDiagram":
        prepared = []
        for dim, birth, death in pairs:
            if death < birth:
                raise ValueError(f"death {death} precedes birth {birth}")
            prepared.append((int(dim), float(birth), float(death)))
        return cls(tuple(sorted(prepared)))

    def __len__(self) -> int:
        return len(self.pairs)

    def dimensions(self) -> tuple[int, ...]:
        return tuple(sorted({dim for dim, _, _ in self.pairs}))

    def in_dimension(self, dim: int) -> tuple[tuple[float, float], ...]:
        return tuple((b, d) for k, b, d in self.pairs if k == dim)

    def finite(self, dim: int) -> tuple[tuple[float, float], ...]:
        return tuple((b, d) for k, b, d in self.pairs if k == dim and math.isfinite(d))

    def essential_births(self, dim: int) -> tuple[float, ...]:
        return tuple(b for k, b, d in self.pairs if k == dim and math.isinf(d))


@dataclass(frozen=True, slots=True)
class BoundaryMatrix:
    """Cells in reduction order plus, per cell, its sorted face indices."""

    cells: tuple[tuple[Simplex, float], ...]
    columns: tuple[tuple[int, ...], ...]

    @classmethod
    def from_filtration(cls, filtration: Filtration) -> "BoundaryMatrix":
        order = sorted(
            range(len(filtration.cells)),
            key=lambda i: (
                filtration.cells[i][1],
                len(filtration.cells[i][0]),
                filtration.cells[i][0],
            ),
        )
        cells = tuple(filtration.cells[i] for i in order)
        index: dict[Simplex, int] = {}
        columns: list[tuple[int, ...]] = []
        for i, (s, _) in enumerate(cells):
            if s in index:
                raise FiltrationOrderError(f"duplicate cell {s}", i)
            faces = []
            for j in range(len(s)):
                face = s[:j] + s[j + 1 :]
                if not face:
                    continue
                if face not in index:
                    raise FiltrationOrderError(f"cell {s} is missing face {face}", i)
                faces.append(index[face])
            index[s] = i
            columns.append(tuple(sorted(faces)))
        return cls(cells, tuple(columns))


def _reduce(matrix: BoundaryMatrix, use_twist: bool):
    """Run the packed reduction; return (pairs, essential) as global indices."""
    cells = matrix.cells
    n = len(cells)
    dim_of = [len(s) - 1 for s, _ in cells]
    max_dim = max(dim_of, default=-1)

    by_dim: list[list[int]] = [[] for _ in range(max_dim + 1)]
    for i, d in enumerate(dim_of):
        by_dim[d].append(i)

    killed = np.zeros(n, np.bool_)
    is_destroyer = np.zeros(n, np.bool_)
    pairs: list[tuple[int, int]] = []

    dims = range(max_dim, 0, -1) if use_twist else range(1, max_dim + 1)
    for p in dims:
        cols_g = by_dim[p]
        rows_g = by_dim[p - 1]
        if not cols_g:
            continue
        n_words = (len(rows_g) + 63) // 64
        if len(cols_g) * n_words * 8 > _MAX_BLOCK_BYTES:
            raise RuntimeError(
                f"boundary block for dimension {p} exceeds the memory guard; "
                f"reduce the schedule or the expansion cap"
            )
        local_of = np.full(n, -1, np.int64)
        local_of[rows_g] = np.arange(len(rows_g), dtype=np.int64)

        faces_flat = np.asarray(
            [f for g in cols_g for f in matrix.columns[g]], dtype=np.int64
        )
        faces_local = local_of[faces_flat]
        col_idx = np.repeat(np.arange(len(cols_g), dtype=np.int64), p + 1)
        R = np.zeros((len(cols_g), n_words), np.uint64)
        np.bitwise_or.at(R, (col_idx, faces_local >> 6), _BIT[faces_local & 63])

        skip = np.zeros(len(cols_g), np.bool_)
        if use_twist:
            for j, g in enumerate(cols_g):
                if killed[g]:
                    skip[j] = True
        pivot_of_row = np.full(len(rows_g), -1, np.int64)
        pair_local = np.empty(len(cols_g), np.int64)
        reduce_block(R, skip, pivot_of_row, pair_local)

        for j, g in enumerate(cols_g):
            if skip[j]:
                continue
            l = pair_local[j]
            if l >= 0:
                creator = rows_g[l]
                pairs.append((creator, g))
                killed[creator] = True
                is_destroyer[g] = True

    essential = [i for i in range(n) if not killed[i] and not is_destroyer[i]]
    return pairs, essential


def compute_persistence(
    filtration: Filtration,
    *,
    include_zero_pairs: bool = False,
    use_twist: bool = False,
) -> PersistenceDiagram:
    """Persistence diagram of a filtration over the two-element field.

    Zero-length pairs (birth equal to death) are computed but left out of
    the diagram unless *include_zero_pairs* is set; essential classes get an
    infinite death.  *use_twist* enables the clearing optimisation, which
    never changes the result.
    """
    matrix = BoundaryMatrix.from_filtration(filtration)
    pairs, essential = _reduce(matrix, use_twist)
    cells = matrix.cells
    out: list[tuple[int, float, float]] = []
    for creator, destroyer in pairs:
        birth = cells[creator][1]
        death = cells[destroyer][1]
        if birth == death and not include_zero_pairs:
            continue
        out.append((len(cells[creator][0]) - 1, birth, death))
    for i in essential:
        out.append((len(cells[i][0]) - 1, cells[i][1], math.inf))
    return PersistenceDiagram.from_pairs(out)


def betti_numbers(
    matrix: ComplexMatrix, cap: int = DEFAULT_EXPANSION_CAP
) -> tuple[int, ...]:
    """Betti numbers over GF(2), indices 0 through the complex dimension."""
    cells = matrix.expand_all_simplices(cap)
    filtration = Filtration(tuple((s, 0.0) for s in cells))
    diagram = compute_persistence(filtration)
    betti = [0] * (matrix.stats().dimension + 1)
    for dim, _, death in diagram.pairs:
        if math.isinf(death):
            betti[dim] += 1
    return tuple(betti)


def filtration_from_snapshots(
    snapshots: Sequence[ComplexMatrix],
    grades: Sequence[float],
    cap: int = DEFAULT_EXPANSION_CAP,
) -> Filtration:
    """First-appearance filtration of fully expanded nested snapshots.

    Every simplex of every snapshot appears once, graded by the first
    snapshot containing it; cells of one grade are ordered by (dimension,
    lexicographic).
    """
    if len(snapshots) != len(grades):
        raise ValueError("snapshots and grades must have equal length")
    seen: set[Simplex] = set()
    cells: list[tuple[Simplex, float]] = []
    for snapshot, g in zip(snapshots, grades):
        for s in snapshot.expand_all_simplices(cap):
            if s not in seen:
                seen.add(s)
                cells.append((s, float(g)))
    return Filtration(tuple(cells))


def snapshot_filtration(
    D: np.ndarray,
    sched: SnapshotSchedule | Iterable[float],
    cap: int = DEFAULT_EXPANSION_CAP,
) -> Filtration:
    """Uncollapsed filtration of the snapshot sequence of ``D``."""
    D = validate_distance_matrix(D)
    grades = as_grades(sched)
    snapshots = [rips_snapshot(D, g) for g in grades]
    return filtration_from_snapshots(snapshots, grades, cap)


def oracle_pipeline(
    D: np.ndarray,
    sched: SnapshotSchedule | Iterable[float],
    cap: int = DEFAULT_EXPANSION_CAP,
) -> PersistenceDiagram:
    """Ground-truth diagram of the snapshot sequence, with no collapsing."""
    return compute_persistence(snapshot_filtration(D, sched, cap))


# -- bottleneck distance ---------------------------------------------------


def _hopcroft_karp(adj: Sequence[Sequence[int]], n_left: int, n_right: int) -> int:
    """Maximum bipartite matching size."""
    match_l = [-1] * n_left
    match_r = [-1] * n_right
    inf = float("inf")
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 4 * (n_left + n_right) + 1000))

    def try_augment(u: int, dist: list[float]) -> bool:
        for v in adj[u]:
            w = match_r[v]
            if w == -1 or (dist[w] == dist[u] + 1 and try_augment(w, dist)):
                match_l[u] = v
                match_r[v] = u
                return True
        dist[u] = inf
        return False

    size = 0
    while True:
        dist = [inf] * n_left
        queue = [u for u in range(n_left) if match_l[u] == -1]
        for u in queue:
            dist[u] = 0
        reachable_free = False
        qi = 0
        while qi < len(queue):
            u = queue[qi]
            qi += 1
            for v in adj[u]:
                w = match_r[v]
                if w == -1:
                    reachable_free = True
                elif dist[w] == inf:
                    dist[w] = dist[u] + 1
                    queue.append(w)
        if not reachable_free:
            return size
        for u in range(n_left):
            if match_l[u] == -1 and try_augment(u, dist):
                size += 1


def _finite_matching_feasible(
    a_pts: Sequence[tuple[float, float]],
    b_pts: Sequence[tuple[float, float]],
    r: float,
) -> bool:
    """Can all finite points be matched within radius r (diagonal allowed)?"""
    n, m = len(a_pts), len(b_pts)
    adj: list[list[int]] = [[] for _ in range(n + m)]
    for i, (ab, ad) in enumerate(a_pts):
        for j, (bb, bd) in enumerate(b_pts):
            if max(abs(ab - bb), abs(ad - bd)) <= r:
                adj[i].append(j)
        if (ad - ab) / 2.0 <= r:
            adj[i].append(m + i)
    for j, (bb, bd) in enumerate(b_pts):
        if (bd - bb) / 2.0 <= r:
            adj[n + j].append(j)
        adj[n + j].extend(range(m, m + n))
    return _hopcroft_karp(adj, n + m, m + n) == n + m


def bottleneck_distance(
    A: PersistenceDiagram, B: PersistenceDiagram, dim: int
) -> float:
    """Exact bottleneck distance between the dimension-*dim* parts of A and B.

    Finite points may be matched to the diagonal; essential classes match
    only essential classes (infinity when their counts differ).  The finite
    part is solved by binary search over the achievable radii with a
    Hopcroft-Karp feasibility test; the essential part is the minimax of the
    sorted birth pairing.
    """
    a_ess = sorted(A.essential_births(dim))
    b_ess = sorted(B.essential_births(dim))
    if len(a_ess) != len(b_ess):
        return math.inf
    ess = max((abs(x - y) for x, y in zip(a_ess, b_ess)), default=0.0)

    a_fin = A.finite(dim)
    b_fin = B.finite(dim)
    if not a_fin and not b_fin:
        return ess

    candidates = {0.0}
    for ab, ad in a_fin:
        candidates.add((ad - ab) / 2.0)
        for bb, bd in b_fin:
            candidates.add(max(abs(ab - bb), abs(ad - bd)))
    for bb, bd in b_fin:
        candidates.add((bd - bb) / 2.0)
    ordered = sorted(candidates)

    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _finite_matching_feasible(a_fin, b_fin, ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(ess, ordered[lo])
