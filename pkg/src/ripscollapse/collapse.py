"""Strong collapse of complexes given by their maximal simplices.

A vertex ``v`` is dominated by a vertex ``w`` when every maximal simplex
containing ``v`` also contains ``w``; deleting a dominated vertex preserves
the homotopy type.  Dually, a column whose vertex set is contained in
another column's is redundant.  :func:`core` alternates row and column
deletion phases, driven by FIFO queues of candidates, until neither applies.
With the deterministic tie-breaks used here (smallest candidate wins; on
equal sets the larger id is removed) the result is a function of the input,
and ids of surviving rows and columns are preserved.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

import numpy as np

from ._kernels import collapse_kernel
from .complexes import ComplexMatrix, Simplex, as_simplex
from .errors import CollapseConsistencyError, FormatError

RowEvent = tuple[str, int, int]  # ("row" | "col", removed id, dominating id)


@dataclass(frozen=True, slots=True)
class RetractionMap:
    """Vertex map sending each vertex of a complex to its core survivor.

    ``target`` maps every vertex of the input complex to a vertex of the
    core; core vertices map to themselves.  The map is idempotent and the
    composition of the individual domination steps that removed vertices.
    """

    target: dict[int, int]

    def __post_init__(self) -> None:
        for v, w in self.target.items():
            if w not in self.target or self.target[w] != w:
                raise CollapseConsistencyError(
                    f"retraction target {w} of vertex {v} is not a fixed point"
                )

    @classmethod
    def identity(cls, vertices: Iterable[int]) -> "RetractionMap":
        return cls({v: v for v in vertices})

    def __call__(self, v: int) -> int:
        return self.target[v]

    def apply_to(self, simplex: Iterable[int]) -> Simplex:
        """Image of a simplex under the map (duplicate targets merge)."""
        return as_simplex(set(self.target[v] for v in simplex))

    def fixed_points(self) -> tuple[int, ...]:
        return tuple(sorted(v for v, w in self.target.items() if v == w))

    def is_identity(self) -> bool:
        return all(v == w for v, w in self.target.items())


@dataclass(frozen=True, slots=True)
class CollapseTrace:
    """Ordered log of one collapse run.

    ``events`` interleaves row and column removals exactly as they were
    executed; ``rounds`` counts the row/column phases that ran.  The work
    counters record how many domination candidates each phase kind examined,
    for the complexity smoke tests.
    """

    events: tuple[RowEvent, ...]
    rounds: int
    row_phases: int = 0
    col_phases: int = 0
    row_candidate_tests: int = 0
    col_candidate_tests: int = 0

    @property
    def removed_rows(self) -> tuple[int, ...]:
        return tuple(e[1] for e in self.events if e[0] == "row")

    @property
    def removed_cols(self) -> tuple[int, ...]:
        return tuple(e[1] for e in self.events if e[0] == "col")


@dataclass(frozen=True, slots=True)
class CoreResult:
    """Core complex together with the retraction onto it and the run log."""

    matrix: ComplexMatrix
    retraction: RetractionMap
    trace: CollapseTrace

    def __iter__(self) -> Iterator:
        return iter((self.matrix, self.retraction, self.trace))


def _csr_positions(matrix: ComplexMatrix):
    """Flatten the incidence structure into positional CSR arrays."""
    vids = matrix.vertex_ids
    cids = matrix.column_ids
    vpos = {v: i for i, v in enumerate(vids)}
    cpos = {c: i for i, c in enumerate(cids)}

    row_ptr = np.zeros(len(vids) + 1, np.int64)
    row_entries = []
    for i, v in enumerate(vids):
        cols = matrix.row(v)
        row_entries.extend(cpos[c] for c in cols)
        row_ptr[i + 1] = row_ptr[i] + len(cols)

    col_ptr = np.zeros(len(cids) + 1, np.int64)
    col_entries = []
    for i, c in enumerate(cids):
        verts = matrix.column(c)
        col_entries.extend(vpos[v] for v in verts)
        col_ptr[i + 1] = col_ptr[i] + len(verts)

    return (
        vids,
        cids,
        row_ptr,
        np.asarray(row_entries, np.int64),
        col_ptr,
        np.asarray(col_entries, np.int64),
    )


def core(matrix: ComplexMatrix) -> CoreResult:
    """Collapse *matrix* to its core.

    The returned matrix keeps the surviving row and column ids of the input;
    the retraction maps every input vertex to its survivor.  Running
    :func:`core` on the result again changes nothing.
    """
    vids, cids, row_ptr, row_entries, col_ptr, col_entries = _csr_positions(matrix)
    alive_r, alive_c, ev_kind, ev_removed, ev_by, n_ev, counters = collapse_kernel(
        row_ptr, row_entries, col_ptr, col_entries
    )

    events = []
    dominator: dict[int, int] = {}
    for i in range(n_ev):
        if ev_kind[i] == 0:
            removed, by = vids[ev_removed[i]], vids[ev_by[i]]
            events.append(("row", removed, by))
            dominator[removed] = by
        else:
            events.append(("col", cids[ev_removed[i]], cids[ev_by[i]]))

    alive_vertex = {vids[i] for i in range(len(vids)) if alive_r[i]}
    core_cols = {
        cids[i]: tuple(v for v in matrix.column(cids[i]) if v in alive_vertex)
        for i in range(len(cids))
        if alive_c[i]
    }
    core_matrix = ComplexMatrix.from_columns(core_cols)

    target: dict[int, int] = {}
    for v in vids:
        u = v
        chain = []
        while u in dominator:
            chain.append(u)
            u = dominator[u]
            if u in target:
                u = target[u]
                break
        for x in chain:
            target[x] = u
        target[v] = u
    retraction = RetractionMap(target)

    trace = CollapseTrace(
        events=tuple(events),
        rounds=int(counters[0]),
        row_phases=int(counters[1]),
        col_phases=int(counters[2]),
        row_candidate_tests=int(counters[3]),
        col_candidate_tests=int(counters[4]),
    )
    return CoreResult(core_matrix, retraction, trace)


def find_dominating_row(matrix: ComplexMatrix, v: int) -> int | None:
    """Smallest vertex dominating *v* in *matrix*, or ``None``.

    A vertex ``w`` dominates ``v`` when ``row(v)`` is contained in
    ``row(w)``; when the two rows are equal, only the smaller id counts as
    the dominator, so exactly one of an equal pair is removable.
    """
    row_v = matrix.row(v)
    set_v = set(row_v)
    n_v = len(row_v)
    for w in matrix.column(row_v[0]):
        if w == v:
            continue
        row_w = matrix.row(w)
        if len(row_w) < n_v:
            continue
        if len(row_w) == n_v and w > v:
            continue
        if set_v.issubset(row_w):
            return w
    return None


def find_dominating_column(matrix: ComplexMatrix, c: int) -> int | None:
    """Smallest column containing column *c*'s vertex set, or ``None``.

    Mirrors :func:`find_dominating_row` on the transpose: equal columns keep
    the smaller id.
    """
    col_c = matrix.column(c)
    set_c = set(col_c)
    n_c = len(col_c)
    for d in matrix.row(col_c[0]):
        if d == c:
            continue
        col_d = matrix.column(d)
        if len(col_d) < n_c:
            continue
        if len(col_d) == n_c and d > c:
            continue
        if set_c.issubset(col_d):
            return d
    return None


def nerve_step(matrix: ComplexMatrix) -> ComplexMatrix:
    """One nerve: drop non-maximal rows, then transpose.

    The new matrix has the old column ids as vertices and the kept old
    vertex ids as columns (each column listing the maximal simplices that
    vertex belonged to).  Equal rows keep the smallest id.  Applying this
    twice yields the full subcomplex of the input spanned by the vertices
    that survive the first step; on a core it returns the input itself.
    """
    rows = {v: matrix.row(v) for v in matrix.vertex_ids}
    row_sets = {v: set(r) for v, r in rows.items()}
    kept = [
        v
        for v in rows
        if not any(
            w != v
            and row_sets[v] <= row_sets[w]
            and (len(rows[w]) > len(rows[v]) or w < v)
            for w in matrix.column(rows[v][0])
        )
    ]
    return ComplexMatrix.from_columns({v: rows[v] for v in kept})


def replay_trace(
    matrix: ComplexMatrix, events: Iterable[RowEvent], check: bool = False
) -> ComplexMatrix:
    """Apply recorded removal events to *matrix* and return the result.

    With ``check=True`` every event is verified: the removed and dominating
    objects must be alive and the domination containment must hold at that
    moment; violations raise :class:`CollapseConsistencyError`.
    """
    cols = {cid: set(s) for cid, s in matrix.columns_sorted()}
    rows = {v: set(matrix.row(v)) for v in matrix.vertex_ids}
    for kind, removed, by in events:
        if kind == "row":
            if removed not in rows or by not in rows:
                raise CollapseConsistencyError(
                    f"row event ({removed} -> {by}) references a dead vertex"
                )
            if check and not rows[removed] <= rows[by]:
                raise CollapseConsistencyError(
                    f"vertex {removed} is not dominated by {by} at its event"
                )
            for c in rows.pop(removed):
                cols[c].discard(removed)
        elif kind == "col":
            if removed not in cols or by not in cols:
                raise CollapseConsistencyError(
                    f"column event ({removed} -> {by}) references a dead column"
                )
            if check and not cols[removed] <= cols[by]:
                raise CollapseConsistencyError(
                    f"column {removed} is not contained in {by} at its event"
                )
            for v in cols.pop(removed):
                rows[v].discard(removed)
        else:
            raise CollapseConsistencyError(f"unknown event kind {kind!r}")
    return ComplexMatrix.from_columns(
        {cid: tuple(sorted(vs)) for cid, vs in cols.items()}
    )


def trace_to_text(trace: CollapseTrace) -> str:
    """Dump trace events, one ``r <removed> <by>`` / ``c <removed> <by>`` line each."""
    return "".join(f"{kind[0]} {removed} {by}\n" for kind, removed, by in trace.events)


def trace_events_from_text(text: str) -> tuple[RowEvent, ...]:
    """Parse the output of :func:`trace_to_text` back into event tuples."""
    events: list[RowEvent] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3 or parts[0] not in ("r", "c"):
            raise FormatError(f"bad trace line {line!r}", lineno)
        try:
            removed, by = int(parts[1]), int(parts[2])
        except ValueError:
            raise FormatError(f"bad trace ids in {line!r}", lineno) from None
        events.append(("row" if parts[0] == "r" else "col", removed, by))
    return tuple(events)
