import dataclasses

import pytest

from services import ssq
from services.catalog import CheckStatus, quadratic_strata
from services.errors import (
    AmbiguityError,
    ContradictionError,
    DataError,
    InconsistencyError,
    IntegrityError,
    UnsupportedSizeError,
)
from services.ssq import DifferentialSpec, E1Table, Origin, PoincarePolynomial


@pytest.mark.parametrize(
    "k, support",
    [
        (6, [(1, 29), (4, 22), (6, 15), (8, 11), (9, 5)]),
        (5, [(1, 24), (4, 17), (6, 15), (7, 10), (7, 7), (8, 10), (9, 5)]),
        (2, [(1, 9), (4, 10), (6, 7), (8, 7), (9, 5)]),
    ],
)
def test_first_page_support(k, support):
    table = ssq.assemble_e1(quadratic_strata(), k, ambient_dim=6 * k)
    assert table.support() == sorted(support)
    assert all(table.get(cell) == 1 for cell in support)


def test_two_forms_force_two_differentials():
    table = ssq.assemble_e1(quadratic_strata(), 2, ambient_dim=12)
    forced = ssq.force_by_dimension(table)
    assert [(d.page, d.source, d.target, d.rank) for d in forced] == [
        (3, (9, 5), (6, 7), 1),
        (4, (8, 7), (4, 10), 1),
    ]
    assert all(d.origin is Origin.FORCED for d in forced)


def test_odd_k_uses_the_known_differential():
    result = ssq.quadratic_pipeline(5)
    known = [d for d in result.differentials if d.origin is Origin.KNOWN]
    assert [(d.page, d.source, d.target) for d in known] == [(1, (8, 10), (7, 10))]


@pytest.mark.parametrize("k", range(2, 13))
def test_pipeline_matches_closed_form(k):
    assert ssq.quadratic_pipeline(k).poincare == ssq.theorem1_closed_form(k)


@pytest.mark.parametrize("k", range(2, 13))
def test_differentials_preserve_euler_characteristic(k):
    result = ssq.quadratic_pipeline(k)
    assert result.e1.euler_characteristic() == result.einf.euler_characteristic()


def test_closed_forms():
    assert str(ssq.theorem1_closed_form(2)) == "1 + t"
    assert ssq.theorem1_closed_form(3).as_dict() == {0: 2, 2: 2, 3: 1, 5: 1}
    assert ssq.theorem1_closed_form(4).as_dict() == {0: 1, 3: 2, 6: 2, 9: 1}


def test_sweep_reports_every_k():
    rows = ssq.theorem_sweep(2, 12)
    assert [r.k for r in rows] == list(range(2, 13))
    assert all(r.match for r in rows)
    with pytest.raises(UnsupportedSizeError):
        ssq.theorem_sweep(1, 4)


@pytest.mark.parametrize("k", range(3, 11))
def test_stiefel_pipeline(k):
    assert ssq.stiefel_poincare(k) == ssq.stiefel_closed_form(k)


def test_stiefel_values():
    assert ssq.stiefel_poincare(4).as_dict() == {0: 1, 3: 2, 6: 1}
    assert ssq.stiefel_poincare(3).as_dict() == {0: 2, 3: 2}


def test_small_k_is_rejected():
    with pytest.raises(UnsupportedSizeError):
        ssq.quadratic_pipeline(1)
    with pytest.raises(UnsupportedSizeError):
        ssq.stiefel_pipeline(2)


def test_one_form_dualizes_to_two_components():
    assert ssq.alexander_dual({5: 1}, 6).as_dict() == {0: 2}


def test_alexander_dual_needs_room():
    with pytest.raises(IntegrityError):
        ssq.alexander_dual({6: 1}, 6)


def test_poincare_polynomial():
    p = PoincarePolynomial([(0, 1), (3, 2), (3, 1)])
    assert p.as_dict() == {0: 1, 3: 3}
    assert str(p) == "1 + 3t^3"
    assert p.degree == 3
    assert p.value_at_one() == 4
    with pytest.raises(IntegrityError):
        PoincarePolynomial({-1: 1})


def test_table_integrity():
    with pytest.raises(IntegrityError):
        E1Table({(1, 0): -1}, 0, 2)
    with pytest.raises(IntegrityError):
        E1Table({(3, 0): 1}, 0, 2)


def test_differential_beyond_available_rank():
    table = E1Table({(2, 0): 1, (1, 0): 1}, 0, 2)
    ok = ssq.apply_differentials(table, [DifferentialSpec(1, (2, 0), 1)])
    assert ok.support() == []
    with pytest.raises(ContradictionError):
        ssq.apply_differentials(table, [DifferentialSpec(1, (2, 0), 2)])
    with pytest.raises(ContradictionError):
        ssq.apply_differentials(table, [DifferentialSpec(2, (2, 0), 1)])


def test_unknown_entries_block_application():
    table = E1Table({(1, 0): 1}, 0, 1, unknowns={"x": [(1, 1)]})
    with pytest.raises(DataError):
        ssq.apply_differentials(table, [])
    assert table.with_values({"x": 2}).get((1, 1)) == 2


def test_forcing_needs_an_ambient_dimension():
    with pytest.raises(DataError):
        ssq.force_by_dimension(E1Table({(1, 4): 1}, 0, 1))


def test_forcing_without_a_pattern():
    with pytest.raises(InconsistencyError):
        ssq.force_by_dimension(E1Table({(1, 4): 1}, 0, 1, ambient_dim=5))


def test_forcing_with_two_patterns():
    table = E1Table({(1, 4): 1, (2, 4): 1, (3, 3): 1, (4, 3): 1}, 0, 4, ambient_dim=5)
    with pytest.raises(AmbiguityError) as info:
        ssq.force_by_dimension(table)
    assert len(info.value.candidates) == 2


def test_link_solve():
    link = ssq.link_pipeline()
    assert link.unknown_value == 0
    assert link.d2_rank == 1
    assert link.link_homology == {0: 1, 13: 1}
    assert link.consistent
    patterns = [(d.source, d.target) for d in link.one_form.differentials]
    assert patterns == [((7, 3), (4, 5)), ((9, 5), (6, 7))]


@pytest.mark.parametrize("r", range(1, 7))
def test_self_join_is_a_sphere(r):
    result = ssq.self_join_pipeline(r)
    assert result.match
    assert result.total == {0: 1, 2 * r - 1: 1}
    assert [report.base for report in result.columns] == [f"B(S1,{j})" for j in range(1, r + 1)]
    assert result.columns_pass
    if r <= ssq.JOIN_MODEL_MAX_R:
        assert result.model == result.total


def test_join_of_triangles():
    assert ssq.join_of_triangles(1) == {0: 1, 1: 1}
    assert ssq.join_of_triangles(2) == {0: 1, 3: 1}


def test_self_join_match_needs_the_column_checks():
    result = ssq.self_join_pipeline(2)
    failed = dataclasses.replace(result.columns[1], status=CheckStatus.FAIL)
    broken = dataclasses.replace(result, columns=[result.columns[0], failed])
    assert broken.total == broken.expected
    assert not broken.match
    assert broken.to_dict()["columns"][1]["status"] == "fail"
    assert not dataclasses.replace(result, model={0: 1}).match


def test_solver_reports_ambiguity():
    table = E1Table({(2, 1): 1, (3, 0): 1, (1, 1): 1}, 0, 3)
    with pytest.raises(AmbiguityError):
        ssq.solve_by_consistency(table, {3: 1})


def test_pipeline_result_serializes():
    payload = ssq.quadratic_pipeline(6).to_dict()
    assert payload["parity"] == "even"
    assert len(payload["e1"]) == 5
    assert payload["poincare"] == [[0, 1], [5, 1], [9, 1], [14, 1], [16, 1], [21, 1]]
