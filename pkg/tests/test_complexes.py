import pytest

from data.models_data import RP2_ORIENTATION_NEGATIVE_EDGES, RP2_TRIANGLES
from services.chainlab import (
    ChainComplexQ,
    borel_moore,
    boundary_matrices,
    homology_dims,
    orbit_complex,
)
from services.complexes import (
    SignCocycle,
    SimplicialPair,
    barycentric_subdivision,
    cone,
    cycle_graph,
    dump_pair,
    face_closure,
    join,
    load_pair,
    mapping_torus,
    point,
    power,
    product,
    pullback,
    seam_cocycle,
    simplex,
    simplex_rel_boundary,
    sphere0,
    suspension,
)
from services.errors import CocycleMismatchError, DataError, IntegrityError
from services.exactlin import SparseMatrix


@pytest.fixture
def rp2():
    pair = SimplicialPair.from_facets(RP2_TRIANGLES, name="RP2")
    orientation = SignCocycle(pair, {e: -1 for e in RP2_ORIENTATION_NEGATIVE_EDGES}, name="or")
    return pair, orientation


def test_face_closure_of_a_triangle():
    assert len(face_closure([(2, 0, 1)])) == 7


def test_pair_rejects_unordered_simplex():
    with pytest.raises(IntegrityError):
        SimplicialPair([(1, 0)])


def test_pair_rejects_missing_face():
    with pytest.raises(IntegrityError):
        SimplicialPair([(0,), (0, 1)])


def test_sub_must_lie_in_k():
    with pytest.raises(IntegrityError):
        SimplicialPair([(0,), (1,)], [(2,)], n_vertices=3)


def test_rp2_model(rp2):
    pair, orientation = rp2
    assert pair.f_vector() == [6, 15, 10]
    assert orientation.monodromy([0, 1, 2]) == -1
    assert borel_moore(pair) == [1, 0, 0]
    assert borel_moore(pair, orientation) == [0, 0, 1]
    assert boundary_matrices(pair).euler_characteristic() == 1


def test_non_flat_cocycle_is_rejected():
    with pytest.raises(IntegrityError):
        SignCocycle(simplex(2), {(0, 1): -1})


def test_cocycle_on_a_non_edge():
    with pytest.raises(CocycleMismatchError):
        SignCocycle(cycle_graph(4), {(0, 2): -1})


def test_cocycle_attached_to_another_complex():
    cocycle = SignCocycle.trivial(cycle_graph(3))
    with pytest.raises(CocycleMismatchError):
        boundary_matrices(cycle_graph(4), cocycle)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_open_simplex_is_a_cell(n):
    expected = [0] * n + [1]
    assert borel_moore(simplex_rel_boundary(n)) == expected


def test_circle_with_and_without_twist():
    circle = cycle_graph(5)
    assert borel_moore(circle) == [1, 1]
    twisted = SignCocycle(circle, {(0, 4): -1})
    assert borel_moore(circle, twisted) == [0, 0]


def test_gauge_does_not_change_homology(rp2):
    pair, orientation = rp2
    for vertex in range(pair.n_vertices):
        assert borel_moore(pair, orientation.gauge(vertex)) == [0, 0, 1]


def test_tensor_of_orientation_with_itself_is_trivial(rp2):
    _, orientation = rp2
    assert orientation.tensor(orientation).is_trivial()


def test_torus_and_open_square():
    circle = cycle_graph(3)
    torus = product(circle, circle)
    assert torus.f_vector() == [9, 27, 18]
    assert borel_moore(torus) == [1, 2, 1]
    interval = simplex_rel_boundary(1)
    assert borel_moore(product(interval, interval)) == [0, 0, 1]
    assert borel_moore(power(interval, 3)) == [0, 0, 0, 1]


def test_product_labels_are_flattened():
    square = power(simplex(1), 3)
    assert square.labels[0] == (0, 0, 0)
    assert square.labels[-1] == (1, 1, 1)


def test_diagonal_of_a_square():
    _, diagonal = product(simplex(1), simplex(1), with_diagonal=True)
    assert sorted(diagonal) == [(0,), (0, 3), (3,)]


def test_joins():
    assert borel_moore(suspension(sphere0())) == [1, 1]
    assert borel_moore(cone(cycle_graph(4))) == [1, 0, 0]
    assert borel_moore(join(cycle_graph(3), cycle_graph(3))) == [1, 0, 0, 1]


def test_join_needs_complexes():
    open_edge = simplex_rel_boundary(1)
    with pytest.raises(DataError):
        join(open_edge, cycle_graph(3))
    with pytest.raises(DataError):
        cone(open_edge)
    assert join(open_edge.without_sub(), point()).f_vector() == [3, 3, 1]


def test_subdivision_keeps_twisted_homology(rp2):
    pair, orientation = rp2
    subdivided, anchors = barycentric_subdivision(pair)
    assert subdivided.n_vertices == 31
    pulled = pullback(orientation, subdivided, anchors)
    pulled.check_flat()
    assert borel_moore(subdivided, pulled) == [0, 0, 1]
    assert borel_moore(subdivided) == [1, 0, 0]


def test_subdivision_keeps_relative_homology():
    subdivided, _ = barycentric_subdivision(simplex_rel_boundary(2))
    assert borel_moore(subdivided) == [0, 0, 1]


def test_mapping_torus_of_a_point_is_a_circle():
    assert borel_moore(mapping_torus(1)) == [1, 1]


def test_moebius_band():
    torus = mapping_torus(2)
    assert borel_moore(torus) == [0, 0, 0]
    assert borel_moore(torus, seam_cocycle(torus, -1)) == [0, 1, 1]


def test_text_format_keeps_pair_and_cocycle(rp2):
    pair, orientation = rp2
    loaded, cocycles = load_pair(dump_pair(pair, {"or": orientation}))
    assert loaded.same_complex(pair)
    assert cocycles["or"].negative_edges == orientation.negative_edges


def test_boundary_must_square_to_zero():
    one = SparseMatrix.identity(1)
    with pytest.raises(IntegrityError):
        ChainComplexQ.from_boundaries([1, 1, 1], [one, one])


def test_boundary_shapes_are_checked():
    with pytest.raises(IntegrityError):
        ChainComplexQ.from_boundaries([1, 2], [SparseMatrix.identity(1)])


def test_point_homology():
    assert homology_dims(boundary_matrices(point())) == [1]


def test_antipodal_quotient_of_a_hexagon():
    hexagon = cycle_graph(6)
    antipode = [(i + 3) % 6 for i in range(6)]
    group = [list(range(6)), antipode]
    assert homology_dims(orbit_complex(hexagon, group)) == [1, 1]
    assert homology_dims(orbit_complex(hexagon, group, character=[1, -1])) == [0, 0]


def test_orbit_complex_needs_a_free_action():
    triangle = cycle_graph(3)
    with pytest.raises(IntegrityError):
        orbit_complex(triangle, [[0, 1, 2], [0, 1, 2]])
