"""Simplicial complexes represented by their maximal simplices.

A complex is stored as a sparse 0/1 incidence structure between vertices
(rows) and maximal simplices (columns).  Only the maximal simplices are
materialised; every lower face is implicit.  This keeps the representation
proportional to the number of maximal simplices instead of the total cell
count, which is what makes strong collapse cheap on clique-like complexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Iterator, Mapping

from .errors import EmptyComplexError, ExpansionCapError, SimplexError

VertexId = int

# A simplex is a non-empty tuple of distinct vertex ids in strictly
# increasing order.  Plain tuples keep hashing/comparison cheap and make the
# lexicographic orderings used elsewhere trivial.
Simplex = tuple[VertexId, ...]

#: Default ceiling on the number of cells a full expansion may produce.
DEFAULT_EXPANSION_CAP = 10**7


def as_simplex(vertices: Iterable[int]) -> Simplex:
    """Normalise *vertices* into a valid simplex tuple.

    Vertices are sorted; duplicates or negative ids are rejected.
    """
    verts = tuple(sorted(vertices))
    if not verts:
        raise SimplexError("a simplex needs at least one vertex")
    for v in verts:
        if not isinstance(v, int) or isinstance(v, bool):
            raise SimplexError(f"vertex ids must be integers, got {v!r}")
        if v < 0:
            raise SimplexError(f"vertex ids must be non-negative, got {v}")
    for a, b in zip(verts, verts[1:]):
        if a == b:
            raise SimplexError(f"duplicate vertex {a} in simplex")
    return verts


def simplex_faces(s: Simplex) -> Iterator[Simplex]:
    """Yield the codimension-1 faces of *s* (empty for vertices)."""
    if len(s) == 1:
        return
    for i in range(len(s)):
        yield s[:i] + s[i + 1 :]


@dataclass(frozen=True, slots=True)
class ComplexStats:
    """Size summary of a complex: vertex/maximal-simplex counts, dimension
    and the largest number of maximal simplices sharing one vertex."""

    n_vertices: int
    n_maximal: int
    dimension: int
    max_cofaces: int


class ComplexMatrix:
    """Immutable vertex-by-maximal-simplex incidence matrix.

    Rows are indexed by vertex id, columns by simplex id.  Row ``v`` holds
    the ids of the maximal simplices containing ``v``; column ``c`` holds the
    vertex set of maximal simplex ``c``.  Ids are stable: operations that
    shrink a complex keep the surviving ids unchanged and never reuse ids.

    Instances built through :meth:`from_simplex_list` are canonical (no
    column contains another, no duplicates).  :meth:`from_columns` trusts the
    caller and is used for intermediate states of the collapse machinery,
    where columns may temporarily be nested.
    """

    __slots__ = ("_cols", "_rows")

    def __init__(self, cols: Mapping[int, Simplex], *, _trusted: bool = False) -> None:
        if not _trusted:
            raise TypeError(
                "use ComplexMatrix.from_simplex_list or ComplexMatrix.from_columns"
            )
        self._cols: dict[int, Simplex] = dict(cols)
        rows: dict[int, list[int]] = {}
        for cid in sorted(self._cols):
            for v in self._cols[cid]:
                rows.setdefault(v, []).append(cid)
        self._rows: dict[int, tuple[int, ...]] = {
            v: tuple(cids) for v, cids in sorted(rows.items())
        }

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_simplex_list(cls, simplices: Iterable[Iterable[int]]) -> "ComplexMatrix":
        """Build a canonical complex from an iterable of simplices.

        Exact duplicates are dropped, simplices contained in another are
        dropped, and the survivors are numbered 0..m-1 in order of first
        appearance.
        """
        unique: list[Simplex] = []
        seen: set[Simplex] = set()
        for raw in simplices:
            s = as_simplex(raw)
            if s not in seen:
                seen.add(s)
                unique.append(s)
        if not unique:
            raise EmptyComplexError()
        as_sets = [frozenset(s) for s in unique]
        survivors = [
            s
            for i, s in enumerate(unique)
            if not any(j != i and as_sets[i] < as_sets[j] for j in range(len(unique)))
        ]
        return cls({cid: s for cid, s in enumerate(survivors)}, _trusted=True)

    @classmethod
    def from_columns(cls, cols: Mapping[int, Iterable[int]]) -> "ComplexMatrix":
        """Build a complex with explicit column ids, trusting maximality.

        Vertex tuples are still validated and sorted.  Intended for
        intermediate states (e.g. nerve transposes) where columns may be
        nested in each other on purpose.
        """
        if not cols:
            raise EmptyComplexError()
        prepared: dict[int, Simplex] = {}
        for cid, verts in cols.items():
            if not isinstance(cid, int) or cid < 0:
                raise SimplexError(f"column ids must be non-negative integers, got {cid!r}")
            prepared[cid] = as_simplex(verts)
        return cls(prepared, _trusted=True)

    # -- accessors ------------------------------------------------------

    @property
    def vertex_ids(self) -> tuple[int, ...]:
        """Vertex ids in increasing order."""
        return tuple(self._rows)

    @property
    def column_ids(self) -> tuple[int, ...]:
        """Column (maximal simplex) ids in increasing order."""
        return tuple(sorted(self._cols))

    def row(self, v: int) -> tuple[int, ...]:
        """Ids of the maximal simplices containing vertex *v*."""
        return self._rows[v]

    def column(self, c: int) -> Simplex:
        """Vertex set of maximal simplex *c*."""
        return self._cols[c]

    def has_vertex(self, v: int) -> bool:
        return v in self._rows

    def columns_sorted(self) -> list[tuple[int, Simplex]]:
        """``(column id, vertex tuple)`` pairs in increasing column id."""
        return [(cid, self._cols[cid]) for cid in sorted(self._cols)]

    def maximal_simplices(self) -> list[Simplex]:
        """Vertex tuples of the maximal simplices, in column id order."""
        return [s for _, s in self.columns_sorted()]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ComplexMatrix):
            return NotImplemented
        return self._cols == other._cols

    def __hash__(self) -> int:
        return hash(tuple(sorted(self._cols.items())))

    def __repr__(self) -> str:
        cols = ", ".join(f"{cid}:{list(s)}" for cid, s in self.columns_sorted())
        return f"ComplexMatrix({{{cols}}})"

    # -- queries --------------------------------------------------------

    def stats(self) -> ComplexStats:
        """Vertex/maximal counts, dimension, and max cofaces per vertex."""
        return ComplexStats(
            n_vertices=len(self._rows),
            n_maximal=len(self._cols),
            dimension=max(len(s) for s in self._cols.values()) - 1,
            max_cofaces=max(len(r) for r in self._rows.values()),
        )

    def contains_simplex(self, s: Iterable[int]) -> bool:
        """True iff *s* is a face of some maximal simplex (maximal or not)."""
        simplex = as_simplex(s)
        first = simplex[0]
        if first not in self._rows:
            return False
        target = set(simplex)
        return any(target.issubset(self._cols[cid]) for cid in self._rows[first])

    def expand_all_simplices(self, cap: int = DEFAULT_EXPANSION_CAP) -> list[Simplex]:
        """All faces of all maximal simplices, sorted by (dimension, lex).

        Refuses to run when the projected output (sum of subset counts over
        the columns, an upper bound on the true total) exceeds *cap*.
        """
        projected = sum(2 ** len(s) - 1 for s in self._cols.values())
        if projected > cap:
            raise ExpansionCapError(projected, cap)
        cells: set[Simplex] = set()
        for s in self._cols.values():
            for k in range(1, len(s) + 1):
                cells.update(combinations(s, k))
        return sorted(cells, key=lambda c: (len(c), c))


# Module-level aliases so the operations read as plain functions where that
# flows better (e.g. in the pipeline code).

def from_simplex_list(simplices: Iterable[Iterable[int]]) -> ComplexMatrix:
    return ComplexMatrix.from_simplex_list(simplices)


def stats(matrix: ComplexMatrix) -> ComplexStats:
    return matrix.stats()


def contains_simplex(matrix: ComplexMatrix, s: Iterable[int]) -> bool:
    return matrix.contains_simplex(s)


def expand_all_simplices(
    matrix: ComplexMatrix, cap: int = DEFAULT_EXPANSION_CAP
) -> list[Simplex]:
    return matrix.expand_all_simplices(cap)
