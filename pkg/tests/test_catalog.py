import dataclasses

import pytest

from data.strata_data import QUADRATIC_STRATA
from services import catalog as cat
from services.catalog import CheckStatus, DegreeTerm, StratumDescriptor
from services.chainlab import borel_moore
from services.complexes import load_pair
from services.errors import DataError, UnsupportedSizeError


@pytest.mark.parametrize(
    "a, b, expected",
    [
        ("or", "or", "trivial"),
        ("or", "pm", "or+pm"),
        ("pm", "or", "or+pm"),
        ("or+pm", "pm", "or"),
        ("trivial", "pm", "pm"),
    ],
)
def test_tensor_tag(a, b, expected):
    assert cat.tensor_tag(a, b) == expected


def test_unknown_tag():
    with pytest.raises(DataError):
        cat.tensor_tag("or", "sign")


@pytest.mark.parametrize(
    "name, twist, expected",
    [
        ("point", "trivial", {0: 1}),
        ("point", "or+pm", {0: 1}),
        ("RP2", "trivial", {0: 1}),
        ("RP2", "or", {2: 1}),
        ("RP2-dual", "or", {2: 1}),
        ("open-interval", "trivial", {1: 1}),
        ("mobius", "trivial", {}),
        ("mobius", "or", {1: 1, 2: 1}),
        ("B(S1,1)", "trivial", {0: 1, 1: 1}),
        ("I(RP2,2)", "trivial", {}),
        ("I(RP2,2)", "or", {1: 1, 4: 1}),
        ("B(RP2,2)", "trivial", {}),
        ("B(RP2,2)", "pm", {}),
        ("B(RP2,2)", "or", {1: 1, 4: 1}),
        ("B(RP2,2)", "or+pm", {}),
    ],
)
def test_model_homology(name, twist, expected):
    assert cat.get_model(name).bm_homology(twist) == expected


@pytest.mark.parametrize("j", [2, 3, 4, 5])
def test_circle_configurations(j):
    model = cat.get_model(f"B(S1,{j})")
    assert model.bm_homology("pm") == {j - 1: 1, j: 1}
    assert model.bm_homology("or") == model.bm_homology("pm")
    assert model.bm_homology("trivial").get(j, 0) == (1 if j % 2 else 0)


def test_cover_splits_into_sign_components():
    rows = cat.cover_splitting_check()
    assert [row["twist"] for row in rows] == ["trivial", "or"]
    assert all(row["split"] for row in rows)


def test_unknown_model():
    with pytest.raises(DataError):
        cat.get_model("S2")


def test_ordered_configurations_are_bounded():
    with pytest.raises(UnsupportedSizeError):
        cat.model_ordered_config(4)


def test_cited_model():
    model = cat.get_model("Bx(RP2,4)")
    assert not model.constructed
    assert model.bm_homology("pm") == {}
    with pytest.raises(DataError):
        model.bm_homology("or")
    with pytest.raises(DataError):
        model.build()


def test_list_models_does_not_build():
    names = [m["name"] for m in cat.list_models()]
    assert "B(RP2,2)" in names and "Bx(RP2,4)" in names
    heavy = {m["name"] for m in cat.list_models() if m["heavy"]}
    assert heavy == {"I(RP2,3)", "B(RP2,3)"}


def test_dump_model_round_trips_through_text():
    pair, cocycles = load_pair(cat.dump_model("RP2"))
    assert pair.f_vector() == [6, 15, 10]
    assert set(cocycles) == {"trivial", "or", "pm", "or+pm"}


def test_quotient_dump_lists_the_group():
    text = cat.dump_model("B(RP2,2)")
    assert text.count("# group ") == 2


@pytest.mark.parametrize("descriptor", cat.quadratic_strata() + cat.linear_strata(), ids=str)
def test_parity_law(descriptor):
    assert descriptor.obeys_parity_law()


def test_degree_terms():
    column = cat.quadratic_strata()[3]
    assert column.p == 4
    assert column.homology_at(2) == {14: 1}
    assert column.homology_at(3) == {15: 1}
    assert column.shift(2) == 12
    assert DegreeTerm(8, 3, 1).degree(6) == 26


def test_descriptor_validation():
    record = dict(QUADRATIC_STRATA[0])
    with pytest.raises(DataError):
        StratumDescriptor.from_record({**record, "bm_homology": {"even": [[0, 6, 1]]}})
    with pytest.raises(DataError):
        StratumDescriptor.from_record({**record, "base": "nowhere"})
    with pytest.raises(DataError):
        StratumDescriptor.from_record({**record, "summand_twist": "sign"})
    with pytest.raises(DataError):
        StratumDescriptor.from_record({k: v for k, v in record.items() if k != "twist"})


def test_parity_filter():
    assert len(cat.quadratic_strata("odd")) == 9
    with pytest.raises(DataError):
        cat.quadratic_strata("third")


@pytest.mark.parametrize("k", range(0, 7))
def test_selfcheck_statuses(k):
    statuses = {d.p: cat.stratum_selfcheck(d, k).status for d in cat.quadratic_strata()}
    assert statuses[3] is CheckStatus.DEFERRED
    assert statuses[5] is CheckStatus.TRUSTED
    for p in (1, 2, 4, 6, 7, 8, 9):
        assert statuses[p] is CheckStatus.PASS


@pytest.mark.long
@pytest.mark.parametrize("k", [2, 3])
def test_selfcheck_of_three_point_column(k):
    report = cat.stratum_selfcheck(cat.quadratic_strata()[2], k, allow_heavy=True)
    assert report.status is CheckStatus.PASS


@pytest.mark.long
def test_three_point_models():
    assert cat.get_model("B(RP2,3)").bm_homology("trivial") == {}
    assert cat.get_model("B(RP2,3)").bm_homology("pm") == {}


def test_self_join_strata():
    strata = cat.self_join_strata(3)
    assert [d.p for d in strata] == [1, 2, 3]
    assert strata[2].homology_at(0) == {4: 1, 5: 1}
    with pytest.raises(UnsupportedSizeError):
        cat.self_join_strata(7)


@pytest.mark.parametrize("column", cat.self_join_strata(6), ids=str)
def test_self_join_columns_match_circle_configurations(column):
    report = cat.stratum_selfcheck(column, 0)
    assert report.base == f"B(S1,{column.p})"
    assert report.status is CheckStatus.PASS
    assert report.computed == {2 * column.p - 2: 1, 2 * column.p - 1: 1}


def test_tampered_column_fails():
    column = next(
        d for d in cat.quadratic_strata()
        if d.base.constructed and not d.base.heavy and d.homology_at(2)
    )
    tampered = dataclasses.replace(column, fiber_cell_dim=column.fiber_cell_dim + 1)
    report = cat.stratum_selfcheck(tampered, 2)
    assert report.status is CheckStatus.FAIL
    assert report.mismatched_degrees
    assert report.to_dict()["status"] == "fail"


def test_closure_of_two_point_space_is_rationally_a_point():
    closure = cat.model_ordered_config(2).without_sub()
    assert not closure.sub
    assert borel_moore(closure) == [1, 0, 0, 0, 0]


def test_model_homology_is_reused():
    model = cat.get_model("mobius")
    first = model.bm_homology("or")
    first[99] = 1
    assert model.bm_homology("or") == {1: 1, 2: 1}


@pytest.mark.long
def test_ordered_three_point_model():
    assert cat.get_model("I(RP2,3)").bm_homology("trivial") == {}
