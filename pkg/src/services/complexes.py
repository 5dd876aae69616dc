"""
Finite simplicial pairs (K, L) and rank-1 sign local systems on them.

A pair models the open space |K| minus |L|, so Borel-Moore homology of that
space is the relative homology of the pair. Vertices are integers
``0..n_vertices-1``; every simplex is a strictly increasing tuple of them.
Optional labels carry the meaning of a vertex (for example the coordinate
tuple of a vertex of a product).
"""

import itertools
import logging
from collections import defaultdict
from typing import Hashable, Iterable, Sequence

from services.errors import CocycleMismatchError, DataError, IntegrityError

logger = logging.getLogger(__name__)

Simplex = tuple[int, ...]


def face_closure(facets: Iterable[Sequence[int]]) -> set[Simplex]:
    """
    Closes a collection of simplices under taking faces.
    Args:
        facets (Iterable[Sequence[int]]): Simplices given as vertex lists.
    Returns:
        set[Simplex]: Every nonempty face of every input simplex.
    """
    by_dim: dict[int, set[Simplex]] = defaultdict(set)
    for facet in facets:
        simplex = tuple(sorted(facet))
        if simplex:
            by_dim[len(simplex) - 1].add(simplex)
    if not by_dim:
        return set()
    for d in range(max(by_dim), 0, -1):
        lower = by_dim[d - 1]
        for simplex in by_dim[d]:
            for i in range(len(simplex)):
                lower.add(simplex[:i] + simplex[i + 1 :])
    closed: set[Simplex] = set()
    for simplices in by_dim.values():
        closed |= simplices
    return closed


def _as_tuple(label: Hashable) -> tuple:
    return label if isinstance(label, tuple) else (label,)


class SimplicialPair:
    """
    A compact simplicial complex K with a subcomplex L.

    Instances are treated as immutable once built.
    """

    def __init__(
        self,
        simplices: Iterable[Sequence[int]],
        sub: Iterable[Sequence[int]] = (),
        *,
        n_vertices: int | None = None,
        labels: Sequence[Hashable] | None = None,
        name: str = "",
        validate: bool = True,
    ):
        self.simplices: frozenset[Simplex] = frozenset(tuple(s) for s in simplices)
        self.sub: frozenset[Simplex] = frozenset(tuple(s) for s in sub)
        top_vertex = max((s[-1] for s in self.simplices if s), default=-1)
        self.n_vertices = top_vertex + 1 if n_vertices is None else n_vertices
        self.labels: tuple = (
            tuple(labels) if labels is not None else tuple(range(self.n_vertices))
        )
        self.name = name
        self._by_dim: dict[tuple[int, bool], list[Simplex]] = {}
        if validate:
            self.validate()

    @classmethod
    def from_facets(
        cls,
        facets: Iterable[Sequence[int]],
        sub_facets: Iterable[Sequence[int]] = (),
        **kwargs,
    ) -> "SimplicialPair":
        """Builds the pair generated by the given facets of K and of L."""
        simplices = face_closure(facets)
        sub = face_closure(sub_facets)
        return cls(simplices, sub, **kwargs)

    def validate(self):
        """
        Checks the pair invariants.
        Raises:
            IntegrityError: If a simplex is not strictly increasing, a vertex is
                out of range, K or L is not closed under faces, or L is not in K.
        """
        if len(self.labels) != self.n_vertices:
            raise IntegrityError(
                f"{len(self.labels)} labels given for {self.n_vertices} vertices"
            )
        for simplex in self.simplices:
            if not simplex:
                raise IntegrityError("The empty simplex cannot be stored")
            if any(a >= b for a, b in zip(simplex, simplex[1:])):
                raise IntegrityError(f"Simplex {simplex} is not strictly increasing")
            if simplex[0] < 0 or simplex[-1] >= self.n_vertices:
                raise IntegrityError(f"Simplex {simplex} has a vertex out of range")
        if not self.sub <= self.simplices:
            extra = sorted(self.sub - self.simplices)[:3]
            raise IntegrityError(f"Subcomplex simplices {extra} are not in K")
        for family, what in ((self.simplices, "K"), (self.sub, "L")):
            for simplex in family:
                if len(simplex) < 2:
                    continue
                for i in range(len(simplex)):
                    face = simplex[:i] + simplex[i + 1 :]
                    if face not in family:
                        raise IntegrityError(
                            f"{what} is not closed under faces: {face} missing below {simplex}"
                        )

    @property
    def dimension(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def simplices_of_dim(self, d: int, relative: bool = False) -> list[Simplex]:
        """
        Lists the d-simplices of K, or of K minus L when ``relative`` is set,
        in lexicographic order.
        """
        key = (d, relative)
        if key not in self._by_dim:
            chosen = (
                s
                for s in self.simplices
                if len(s) == d + 1 and not (relative and s in self.sub)
            )
            self._by_dim[key] = sorted(chosen)
        return self._by_dim[key]

    def edges(self) -> list[Simplex]:
        return self.simplices_of_dim(1)

    def f_vector(self, relative: bool = False) -> list[int]:
        return [
            len(self.simplices_of_dim(d, relative)) for d in range(self.dimension + 1)
        ]

    def maximal_simplices(self) -> list[Simplex]:
        faces = set()
        for simplex in self.simplices:
            if len(simplex) > 1:
                faces.update(simplex[:i] + simplex[i + 1 :] for i in range(len(simplex)))
        return sorted(self.simplices - faces)

    def same_complex(self, other: "SimplicialPair") -> bool:
        return self is other or (
            self.n_vertices == other.n_vertices and self.simplices == other.simplices
        )

    def renamed(self, name: str) -> "SimplicialPair":
        return SimplicialPair(
            self.simplices,
            self.sub,
            n_vertices=self.n_vertices,
            labels=self.labels,
            name=name,
            validate=False,
        )

    def with_sub(self, sub: Iterable[Sequence[int]]) -> "SimplicialPair":
        return SimplicialPair(
            self.simplices,
            sub,
            n_vertices=self.n_vertices,
            labels=self.labels,
            name=self.name,
        )

    def without_sub(self) -> "SimplicialPair":
        return self.with_sub(())

    def label_index(self) -> dict[Hashable, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def __repr__(self) -> str:
        return (
            f"SimplicialPair({self.name or 'unnamed'}, vertices={self.n_vertices}, "
            f"f={self.f_vector()}, sub={len(self.sub)})"
        )


class SignCocycle:
    """
    A flat assignment of signs to the edges of a complex.

    Edges that are not listed carry the sign +1, so the cocycle is always
    total on the 1-skeleton.
    """

    def __init__(
        self,
        pair: SimplicialPair,
        edge_signs: dict[tuple[int, int], int] | None = None,
        *,
        name: str = "",
        check: bool = True,
    ):
        self.pair = pair
        self.name = name
        negative: set[Simplex] = set()
        edges = pair.simplices
        for (u, v), sign in (edge_signs or {}).items():
            edge = (min(u, v), max(u, v))
            if u == v or edge not in edges:
                raise CocycleMismatchError(
                    f"Edge {edge} is not an edge of {pair.name or 'the complex'}"
                )
            if sign not in (1, -1):
                raise DataError(f"Edge sign must be +1 or -1, got {sign} on {edge}")
            if sign == -1:
                negative.add(edge)
        self.negative_edges: frozenset[Simplex] = frozenset(negative)
        if check:
            self.check_flat()

    @classmethod
    def trivial(cls, pair: SimplicialPair) -> "SignCocycle":
        return cls(pair, name="trivial", check=False)

    def sign(self, u: int, v: int) -> int:
        if u == v:
            return 1
        edge = (u, v) if u < v else (v, u)
        return -1 if edge in self.negative_edges else 1

    def is_trivial(self) -> bool:
        return not self.negative_edges

    def check_flat(self):
        """
        Raises:
            IntegrityError: If the sign product around some triangle is -1.
        """
        if not self.negative_edges:
            return
        for a, b, c in self.pair.simplices_of_dim(2):
            if self.sign(a, b) * self.sign(b, c) * self.sign(a, c) != 1:
                raise IntegrityError(
                    f"Cocycle {self.name or ''} is not flat on triangle {(a, b, c)}"
                )

    def signs(self) -> dict[Simplex, int]:
        return {edge: self.sign(*edge) for edge in self.pair.edges()}

    def attached_to(self, pair: SimplicialPair) -> bool:
        return self.pair.same_complex(pair)

    def tensor(self, other: "SignCocycle") -> "SignCocycle":
        return tensor_cocycles(self, other)

    def gauge(self, vertex: int) -> "SignCocycle":
        """Flips every edge incident to ``vertex``; the local system is unchanged."""
        flipped = {}
        for u, v in self.pair.edges():
            sign = self.sign(u, v)
            if vertex in (u, v):
                sign = -sign
            if sign == -1:
                flipped[(u, v)] = -1
        return SignCocycle(self.pair, flipped, name=f"{self.name}~{vertex}")

    def monodromy(self, loop: Sequence[int]) -> int:
        """Product of the signs along a closed vertex path."""
        result = 1
        for u, v in zip(loop, list(loop[1:]) + [loop[0]]):
            result *= self.sign(u, v)
        return result

    def __repr__(self) -> str:
        return f"SignCocycle({self.name or 'unnamed'}, negative={len(self.negative_edges)})"


def tensor_cocycles(first: SignCocycle, second: SignCocycle) -> SignCocycle:
    """
    Pointwise product of two cocycles on the same complex.
    Raises:
        CocycleMismatchError: If the cocycles live on different complexes.
    """
    if not first.pair.same_complex(second.pair):
        raise CocycleMismatchError("Cannot tensor cocycles attached to different complexes")
    negative = first.negative_edges ^ second.negative_edges
    names = [n for n in (first.name, second.name) if n and n != "trivial"]
    return SignCocycle(
        first.pair,
        {edge: -1 for edge in negative},
        name="*".join(names) or "trivial",
        check=False,
    )


def pullback(
    cocycle: SignCocycle, pair: SimplicialPair, vertex_map: Sequence[int], name: str = ""
) -> SignCocycle:
    """
    Pulls a cocycle back along a simplicial map given on vertices.
    Args:
        cocycle (SignCocycle): Cocycle on the target complex.
        pair (SimplicialPair): Source complex.
        vertex_map (Sequence[int]): Target vertex of each source vertex.
        name (str): Name of the result.
    Returns:
        SignCocycle: The pulled back cocycle on ``pair``.
    """
    negative = {
        (u, v): -1
        for u, v in pair.edges()
        if cocycle.sign(vertex_map[u], vertex_map[v]) == -1
    }
    return SignCocycle(pair, negative, name=name or cocycle.name, check=False)


# Elementary complexes


def point() -> SimplicialPair:
    return SimplicialPair([(0,)], name="point")


def simplex(n: int) -> SimplicialPair:
    return SimplicialPair.from_facets([tuple(range(n + 1))], name=f"simplex{n}")


def simplex_rel_boundary(n: int) -> SimplicialPair:
    """The closed n-simplex relative to its boundary, a model of the open n-ball."""
    facet = tuple(range(n + 1))
    boundary = [facet[:i] + facet[i + 1 :] for i in range(n + 1)] if n > 0 else []
    return SimplicialPair.from_facets([facet], boundary, name=f"open_simplex{n}")


def sphere0() -> SimplicialPair:
    return SimplicialPair([(0,), (1,)], name="S0")


def cycle_graph(n: int) -> SimplicialPair:
    """A circle triangulated as an n-gon, n >= 3."""
    if n < 3:
        raise DataError(f"A cycle graph needs at least 3 vertices, got {n}")
    edges = [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)]
    return SimplicialPair.from_facets(edges, name=f"C{n}")


# Constructions


def product(
    a: SimplicialPair, b: SimplicialPair, *, with_diagonal: bool = False
) -> SimplicialPair | tuple[SimplicialPair, frozenset[Simplex]]:
    """
    Staircase triangulation of |a| x |b|.

    Vertex (i, j) gets index ``i * b.n_vertices + j`` so the vertex order is
    lexicographic. A simplex of the product lies in the subcomplex when its
    projection to a lies in a.sub or its projection to b lies in b.sub.
    Args:
        a (SimplicialPair): First factor.
        b (SimplicialPair): Second factor.
        with_diagonal (bool): Also return the diagonal subcomplex; requires
            ``a`` and ``b`` to be the same complex.
    Returns:
        SimplicialPair | tuple: The product, and the diagonal when requested.
    """
    nb = b.n_vertices
    facets = []
    for sa in a.maximal_simplices():
        for sb in b.maximal_simplices():
            m, n = len(sa) - 1, len(sb) - 1
            for right_steps in itertools.combinations(range(m + n), m):
                i = j = 0
                chain = [sa[0] * nb + sb[0]]
                steps = set(right_steps)
                for step in range(m + n):
                    if step in steps:
                        i += 1
                    else:
                        j += 1
                    chain.append(sa[i] * nb + sb[j])
                facets.append(chain)
    simplices = face_closure(facets)
    sub = set()
    if a.sub or b.sub:
        for s in simplices:
            proj_a = tuple(sorted({v // nb for v in s}))
            proj_b = tuple(sorted({v % nb for v in s}))
            if proj_a in a.sub or proj_b in b.sub:
                sub.add(s)
    labels = [
        _as_tuple(la) + _as_tuple(lb) for la in a.labels for lb in b.labels
    ]
    result = SimplicialPair(
        simplices,
        sub,
        n_vertices=a.n_vertices * nb,
        labels=labels,
        name=f"{a.name}x{b.name}",
        validate=False,
    )
    logger.info("product %s: f-vector %s", result.name, result.f_vector())
    if not with_diagonal:
        return result
    if not a.same_complex(b):
        raise DataError("The diagonal is only defined for a product of a complex with itself")
    diagonal = frozenset(s for s in simplices if all(v // nb == v % nb for v in s))
    return result, diagonal


def power(a: SimplicialPair, j: int) -> SimplicialPair:
    """j-fold staircase product with flattened coordinate labels."""
    if j < 1:
        raise DataError(f"Power exponent must be at least 1, got {j}")
    result = a
    for _ in range(j - 1):
        result = product(result, a)
    assert isinstance(result, SimplicialPair)
    return result


def coordinate_diagonal(pair: SimplicialPair, r: int, s: int) -> frozenset[Simplex]:
    """Simplices of a power whose vertices all have equal coordinates r and s."""
    labels = pair.labels
    return frozenset(
        simplex
        for simplex in pair.simplices
        if all(labels[v][r] == labels[v][s] for v in simplex)
    )


def coordinate_projection(pair: SimplicialPair, coordinate: int) -> list[int]:
    return [label[coordinate] for label in pair.labels]


def coordinate_permutation(pair: SimplicialPair, perm: Sequence[int]) -> list[int]:
    """
    Vertex map of the coordinate permutation ``x -> (x[perm[0]], x[perm[1]], ...)``
    on a power complex.
    """
    index = pair.label_index()
    return [index[tuple(label[p] for p in perm)] for label in pair.labels]


def join(a: SimplicialPair, b: SimplicialPair) -> SimplicialPair:
    """
    Join of two complexes. Vertices of b are renumbered after those of a.
    Raises:
        DataError: If either pair has a nonempty subcomplex; the join of
            pairs is not defined here.
    """
    for pair in (a, b):
        if pair.sub:
            raise DataError(f"Join is defined for complexes, {pair.name or 'a pair'} has a subcomplex")
    offset = a.n_vertices
    a_faces = [()] + sorted(a.simplices)
    b_faces = [()] + [tuple(v + offset for v in s) for s in sorted(b.simplices)]
    simplices = [sa + sb for sa in a_faces for sb in b_faces if sa or sb]
    labels = [(0, la) for la in a.labels] + [(1, lb) for lb in b.labels]
    return SimplicialPair(
        simplices,
        (),
        n_vertices=offset + b.n_vertices,
        labels=labels,
        name=f"{a.name}*{b.name}",
        validate=False,
    )


def cone(a: SimplicialPair) -> SimplicialPair:
    return join(a, point())


def suspension(a: SimplicialPair) -> SimplicialPair:
    return join(a, sphere0())


def barycentric_subdivision(
    pair: SimplicialPair,
) -> tuple[SimplicialPair, list[int]]:
    """
    First barycentric subdivision of a pair.
    Args:
        pair (SimplicialPair): The pair to subdivide.
    Returns:
        tuple[SimplicialPair, list[int]]: The subdivided pair, whose vertices
        are the simplices of K ordered by dimension, and the vertex map
        sending each barycenter to the minimal vertex of its simplex.
    """
    ordered = sorted(pair.simplices, key=lambda s: (len(s), s))
    index = {s: i for i, s in enumerate(ordered)}
    facets = []
    for top in pair.maximal_simplices():
        for perm in itertools.permutations(top):
            chain = [index[tuple(sorted(perm[: i + 1]))] for i in range(len(perm))]
            facets.append(chain)
    simplices = face_closure(facets)
    sub = {s for s in simplices if ordered[s[-1]] in pair.sub}
    subdivided = SimplicialPair(
        simplices,
        sub,
        n_vertices=len(ordered),
        labels=ordered,
        name=f"sd({pair.name})",
        validate=False,
    )
    anchors = [s[0] for s in ordered]
    return subdivided, anchors


def mapping_torus(n: int, shift: int = 1) -> SimplicialPair:
    """
    Mapping torus of (closed (n-1)-simplex, its boundary) under the cyclic
    vertex shift i -> i + shift mod n.

    Three layers of the simplex are joined by staircase prisms; the last
    prism is glued back to layer 0 through the shift. The open part models the
    space of n-point subsets of a circle.
    """
    if n < 1:
        raise DataError(f"Mapping torus needs n >= 1, got {n}")

    def vertex(layer: int, i: int) -> int:
        if layer == 3:
            return (i + shift) % n
        return layer * n + i

    def prism(face: Sequence[int]) -> list[list[int]]:
        chains = []
        for layer in range(3):
            for a in range(len(face)):
                chain = [vertex(layer, v) for v in face[: a + 1]]
                chain += [vertex(layer + 1, v) for v in face[a:]]
                chains.append(chain)
        return chains

    full = list(range(n))
    facets = prism(full)
    sub_facets = []
    if n > 1:
        for m in range(n):
            sub_facets.extend(prism([v for v in full if v != m]))
    labels = [(layer, i) for layer in range(3) for i in range(n)]
    return SimplicialPair.from_facets(
        facets, sub_facets, n_vertices=3 * n, labels=labels, name=f"torus{n}"
    )


def seam_cocycle(torus: SimplicialPair, sign: int, name: str = "") -> SignCocycle:
    """Cocycle of a mapping torus carrying ``sign`` on every edge crossing the seam."""
    n = torus.n_vertices // 3
    if sign == 1:
        return SignCocycle.trivial(torus)
    seam = {(u, v): -1 for u, v in torus.edges() if u // n == 0 and v // n == 2}
    return SignCocycle(torus, seam, name=name)


# Text format


def dump_pair(pair: SimplicialPair, cocycles: dict[str, SignCocycle] | None = None) -> str:
    """
    Serializes a pair as text: one simplex per line tagged ``K`` (in K minus L)
    or ``L``, then one ``cocycle NAME`` block per cocycle with ``edge u v sign``
    lines covering every edge.
    """
    lines = [f"# {pair.name}", f"vertices {pair.n_vertices}"]
    for d in range(pair.dimension + 1):
        for s in pair.simplices_of_dim(d):
            tag = "L" if s in pair.sub else "K"
            lines.append(f"{tag} {' '.join(map(str, s))}")
    for name, cocycle in (cocycles or {}).items():
        lines.append(f"cocycle {name}")
        for u, v in pair.edges():
            lines.append(f"edge {u} {v} {cocycle.sign(u, v)}")
    return "\n".join(lines) + "\n"


def load_pair(text: str) -> tuple[SimplicialPair, dict[str, SignCocycle]]:
    """
    Parses the text format written by ``dump_pair``.
    Raises:
        DataError: On an unknown line tag or malformed numbers.
    """
    name, n_vertices = "", None
    simplices, sub = [], []
    raw_cocycles: dict[str, dict[tuple[int, int], int]] = {}
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            name = name or line[1:].strip()
            continue
        tag, *fields = line.split()
        try:
            values = [int(f) for f in fields] if tag != "cocycle" else []
        except ValueError:
            raise DataError(f"Line {number}: non-integer field in '{line}'")
        if tag == "vertices":
            n_vertices = values[0]
        elif tag in ("K", "L"):
            simplices.append(tuple(values))
            if tag == "L":
                sub.append(tuple(values))
        elif tag == "cocycle":
            current = fields[0]
            raw_cocycles[current] = {}
        elif tag == "edge":
            if current is None:
                raise DataError(f"Line {number}: edge outside a cocycle block")
            u, v, sign = values
            raw_cocycles[current][(u, v)] = sign
        else:
            raise DataError(f"Line {number}: unknown tag '{tag}'")
    pair = SimplicialPair(simplices, sub, n_vertices=n_vertices, name=name)
    cocycles = {
        cname: SignCocycle(pair, signs, name=cname)
        for cname, signs in raw_cocycles.items()
    }
    return pair, cocycles
