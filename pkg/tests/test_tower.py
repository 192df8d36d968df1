"""Tower assembly from cores and the coning conversion to filtrations."""

import math
import random

import pytest

from ripscollapse.collapse import RetractionMap, core
from ripscollapse.complexes import ComplexMatrix
from ripscollapse.errors import CollapseConsistencyError, TowerOpError
from ripscollapse.persistence import compute_persistence, oracle_pipeline
from ripscollapse.rips import pairwise_distances, rips_snapshot
from ripscollapse.tower import (
    Contract,
    Filtration,
    Include,
    Tower,
    assemble_core_tower,
    tower_to_filtration,
)

UNIT_SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]

TABLE_COLUMNS = [(1, 2), (1, 4), (0, 1, 3), (3, 4), (4, 5)]


def _pipeline_tower(points, grades):
    D = pairwise_distances(points)
    results = [core(rips_snapshot(D, g)) for g in grades]
    return assemble_core_tower(
        [res.matrix for res in results],
        [res.retraction for res in results],
        grades,
    )


def test_single_snapshot_tower_is_expanded_core():
    res = core(ComplexMatrix.from_simplex_list(TABLE_COLUMNS))
    tower = assemble_core_tower([res.matrix], [res.retraction], [0.0])
    assert tower.ops == (
        Include((1,), 0.0),
        Include((3,), 0.0),
        Include((4,), 0.0),
        Include((1, 3), 0.0),
        Include((1, 4), 0.0),
        Include((3, 4), 0.0),
    )
    tower.validate()


def test_identical_snapshots_add_no_ops():
    res = core(ComplexMatrix.from_simplex_list(TABLE_COLUMNS))
    tower = assemble_core_tower(
        [res.matrix, res.matrix],
        [res.retraction, res.retraction],
        [0.0, 1.0],
    )
    assert all(op.grade == 0.0 for op in tower.ops)
    assert len(tower.ops) == 6


def test_unit_square_tower_ops():
    tower = _pipeline_tower(UNIT_SQUARE, [0.5, 1.0, 1.5])
    assert tower.ops == (
        Include((0,), 0.5),
        Include((1,), 0.5),
        Include((2,), 0.5),
        Include((3,), 0.5),
        Include((0, 1), 1.0),
        Include((0, 3), 1.0),
        Include((1, 2), 1.0),
        Include((2, 3), 1.0),
        Contract(1, 0, 1.5),
        Contract(2, 0, 1.5),
        Contract(3, 0, 1.5),
    )
    tower.validate()


def test_contract_into_vertex_absent_from_tower_includes_it_first():
    # first core is the vertex 0, the next snapshot retracts everything onto
    # vertex 1, which the tower has never seen: it must be included on the fly
    cores = [
        ComplexMatrix.from_simplex_list([(0,)]),
        ComplexMatrix.from_simplex_list([(1,)]),
    ]
    retractions = [RetractionMap({0: 0}), RetractionMap({0: 1, 1: 1, 2: 1})]
    tower = assemble_core_tower(cores, retractions, [0.0, 1.0])
    assert tower.ops == (
        Include((0,), 0.0),
        Include((1,), 1.0),
        Contract(0, 1, 1.0),
    )
    tower.validate()


def test_returning_point_id_gets_a_fresh_tower_id():
    # point 1 is contracted away at grade 1 and reappears in the last core;
    # its id may not be reused, so the tower shows a brand-new vertex instead
    cores = [
        ComplexMatrix.from_simplex_list([(0,), (1,)]),
        ComplexMatrix.from_simplex_list([(0,)]),
        ComplexMatrix.from_simplex_list([(0,), (1,)]),
    ]
    retractions = [
        RetractionMap({0: 0, 1: 1}),
        RetractionMap({0: 0, 1: 0}),
        RetractionMap({0: 0, 1: 1}),
    ]
    tower = assemble_core_tower(cores, retractions, [0.0, 1.0, 2.0])
    assert tower.ops == (
        Include((0,), 0.0),
        Include((1,), 0.0),
        Contract(1, 0, 1.0),
        Include((2,), 2.0),
    )
    diagram = compute_persistence(tower_to_filtration(tower))
    assert diagram.pairs == ((0, 0.0, 1.0), (0, 0.0, math.inf), (0, 2.0, math.inf))


def test_assemble_input_validation():
    res = core(ComplexMatrix.from_simplex_list([(0, 1)]))
    with pytest.raises(ValueError):
        assemble_core_tower([res.matrix], [res.retraction, res.retraction], [0.0])
    with pytest.raises(ValueError):
        assemble_core_tower([], [], [])
    with pytest.raises(ValueError):
        assemble_core_tower(
            [res.matrix, res.matrix], [res.retraction, res.retraction], [1.0, 1.0]
        )


def test_assemble_rejects_retraction_missing_a_point():
    cores = [
        ComplexMatrix.from_simplex_list([(0,)]),
        ComplexMatrix.from_simplex_list([(5,)]),
    ]
    retractions = [RetractionMap({0: 0}), RetractionMap({5: 5})]
    with pytest.raises(CollapseConsistencyError):
        assemble_core_tower(cores, retractions, [0.0, 1.0])


def test_tower_validate_rejects_bad_ops():
    with pytest.raises(TowerOpError):
        Tower((Include((0,), 1.0), Include((1,), 0.0))).validate()
    with pytest.raises(TowerOpError):
        Tower((Include((0,), 0.0), Include((0,), 0.0))).validate()
    with pytest.raises(TowerOpError):
        Tower((Include((0,), 0.0), Contract(0, 0, 1.0))).validate()
    with pytest.raises(TowerOpError):
        Tower((Include((0,), 0.0), Contract(1, 0, 1.0))).validate()
    with pytest.raises(TowerOpError):
        Tower((Include((0, 1), 0.0), Contract(0, 1, 1.0), Contract(0, 1, 2.0))).validate()


def test_includes_only_tower_converts_verbatim():
    tower = Tower((Include((2, 5), 0.0), Include((7,), 1.5)))
    f = tower_to_filtration(tower)
    assert f.cells == (((2,), 0.0), ((5,), 0.0), ((2, 5), 0.0), ((7,), 1.5))
    f.validate()


def test_contract_of_dominated_edge_needs_no_cone_cells():
    tower = Tower((Include((0, 1), 0.0), Contract(0, 1, 1.0)))
    f = tower_to_filtration(tower)
    assert f.cells == (((0,), 0.0), ((1,), 0.0), ((0, 1), 0.0))
    diagram = compute_persistence(f, include_zero_pairs=True)
    assert diagram.pairs == ((0, 0.0, 0.0), (0, 0.0, math.inf))


def test_coning_adds_the_closed_star_with_the_new_apex():
    tower = Tower((Include((0, 1, 2), 0.0), Include((3,), 0.0), Contract(0, 3, 1.0)))
    f = tower_to_filtration(tower)
    added = [(s, g) for s, g in f.cells if g == 1.0]
    assert added == [
        ((0, 3), 1.0),
        ((1, 3), 1.0),
        ((2, 3), 1.0),
        ((0, 1, 3), 1.0),
        ((0, 2, 3), 1.0),
        ((1, 2, 3), 1.0),
        ((0, 1, 2, 3), 1.0),
    ]
    f.validate()
    diagram = compute_persistence(f)
    assert diagram.pairs == ((0, 0.0, 1.0), (0, 0.0, math.inf))


def test_include_after_contract_is_rewritten_through_the_alias():
    tower = Tower(
        (Include((0, 1), 0.0), Contract(0, 1, 1.0), Include((0, 2), 2.0))
    )
    f = tower_to_filtration(tower)
    assert f.cells == (
        ((0,), 0.0),
        ((1,), 0.0),
        ((0, 1), 0.0),
        ((2,), 2.0),
        ((1, 2), 2.0),
    )
    f.validate()


def test_contract_resolving_to_itself_is_a_no_op():
    tower = Tower((Include((0, 1), 0.0), Contract(0, 1, 1.0), Contract(1, 0, 2.0)))
    f = tower_to_filtration(tower)
    assert f.cells == (((0,), 0.0), ((1,), 0.0), ((0, 1), 0.0))


def test_contract_of_unknown_vertex_is_rejected():
    tower = Tower((Include((0, 1), 0.0), Contract(9, 0, 1.0)))
    with pytest.raises(TowerOpError):
        tower_to_filtration(tower)
    tower = Tower((Include((0, 1), 0.0), Contract(0, 9, 1.0)))
    with pytest.raises(TowerOpError):
        tower_to_filtration(tower)


def test_every_tower_prefix_stays_downward_closed():
    tower = _pipeline_tower(UNIT_SQUARE, [0.5, 1.0, 1.5])
    f = tower_to_filtration(tower)
    for stop in range(1, len(f.cells) + 1):
        Filtration(f.cells[:stop]).validate()


def test_conversion_matches_uncollapsed_pipeline_on_random_clouds():
    rng = random.Random(2025)
    for _ in range(10):
        n = rng.randint(2, 8)
        pts = [(rng.uniform(0, 2), rng.uniform(0, 2)) for _ in range(n)]
        grades = [0.3, 0.8, 1.4]
        tower = _pipeline_tower(pts, grades)
        tower.validate()
        D = pairwise_distances(pts)
        got = compute_persistence(tower_to_filtration(tower))
        assert got.pairs == oracle_pipeline(D, grades).pairs
