"""
Twisted relative chain complexes over the rationals.

Generators of degree d are the d-simplices of K that are not in L, in
lexicographic order. A sign cocycle twists the boundary: the coefficient of
a simplex lives at its minimal vertex, so only face 0 (which drops that
vertex) picks up the sign of the edge (v0, v1).
"""

import logging
from typing import Sequence

from services.complexes import SignCocycle, SimplicialPair, Simplex
from services.errors import CocycleMismatchError, IntegrityError
from services.exactlin import SparseMatrix, compose, rank

logger = logging.getLogger(__name__)


class ChainComplexQ:
    """
    Finite chain complex of rational vector spaces.

    ``boundaries[i]`` is the matrix of C_i -> C_{i-1}; ``boundaries[0]`` is the
    zero map out of C_0.
    """

    def __init__(self, dims: list[int], boundaries: list[SparseMatrix], *, check: bool = True):
        if len(boundaries) != len(dims):
            raise IntegrityError(
                f"{len(boundaries)} boundary matrices given for {len(dims)} chain groups"
            )
        for i, (dim, matrix) in enumerate(zip(dims, boundaries)):
            expected_rows = dims[i - 1] if i > 0 else 0
            if matrix.shape != (expected_rows, dim):
                raise IntegrityError(
                    f"Boundary {i} has shape {matrix.shape}, expected {(expected_rows, dim)}"
                )
        self.dims = list(dims)
        self.boundaries = list(boundaries)
        if check:
            self.check_square_zero()

    @classmethod
    def from_boundaries(cls, dims: list[int], boundaries: list[SparseMatrix], **kwargs):
        """Builds a complex from the boundaries of degrees 1 and up."""
        if not dims:
            return cls([], [], **kwargs)
        return cls(dims, [SparseMatrix(0, dims[0])] + list(boundaries), **kwargs)

    @property
    def top_degree(self) -> int:
        return len(self.dims) - 1

    def boundary(self, i: int) -> SparseMatrix:
        return self.boundaries[i]

    def check_square_zero(self):
        """
        Raises:
            IntegrityError: If some composite boundary is nonzero.
        """
        for i in range(1, len(self.dims) - 1):
            if not compose(self.boundaries[i], self.boundaries[i + 1]).is_zero():
                raise IntegrityError(f"Boundary does not square to zero in degree {i + 1}")

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * d for i, d in enumerate(self.dims))

    def __repr__(self) -> str:
        return f"ChainComplexQ(dims={self.dims})"


def boundary_matrices(
    pair: SimplicialPair, cocycle: SignCocycle | None = None, *, check: bool = True
) -> ChainComplexQ:
    """
    Relative twisted chain complex of a pair.
    Args:
        pair (SimplicialPair): The pair (K, L).
        cocycle (SignCocycle | None): Local system on K; trivial when omitted.
        check (bool): Verify that the boundary squares to zero.
    Returns:
        ChainComplexQ: Complex generated by the simplices of K minus L.
    Raises:
        CocycleMismatchError: If the cocycle belongs to another complex.
    """
    if cocycle is None:
        cocycle = SignCocycle.trivial(pair)
    elif not cocycle.attached_to(pair):
        raise CocycleMismatchError(
            f"Cocycle {cocycle.name or ''} is attached to {cocycle.pair.name or 'another complex'}, "
            f"not to {pair.name or 'this complex'}"
        )
    top = pair.dimension
    if top < 0:
        return ChainComplexQ([], [])
    generators = [pair.simplices_of_dim(d, relative=True) for d in range(top + 1)]
    index = [{s: i for i, s in enumerate(g)} for g in generators]
    boundaries = [SparseMatrix(0, len(generators[0]))]
    for d in range(1, top + 1):
        lower = index[d - 1]
        entries = []
        for col, simplex in enumerate(generators[d]):
            for j in range(d + 1):
                row = lower.get(simplex[:j] + simplex[j + 1 :])
                if row is None:
                    continue
                coefficient = -1 if j % 2 else 1
                if j == 0:
                    coefficient *= cocycle.sign(simplex[0], simplex[1])
                entries.append((row, col, coefficient))
        boundaries.append(SparseMatrix(len(generators[d - 1]), len(generators[d]), entries))
    logger.debug(
        "chain complex of %s with %s: dims %s",
        pair.name,
        cocycle.name,
        [len(g) for g in generators],
    )
    return ChainComplexQ([len(g) for g in generators], boundaries, check=check)


def homology_dims(complex_: ChainComplexQ) -> list[int]:
    """
    Betti numbers of a chain complex.
    Args:
        complex_ (ChainComplexQ): The complex.
    Returns:
        list[int]: dim ker d_i - rank d_{i+1} for every degree.
    Raises:
        IntegrityError: If the boundary does not square to zero.
    """
    complex_.check_square_zero()
    ranks = [rank(b) for b in complex_.boundaries] + [0]
    return [dim - ranks[i] - ranks[i + 1] for i, dim in enumerate(complex_.dims)]


def borel_moore(pair: SimplicialPair, cocycle: SignCocycle | None = None) -> list[int]:
    """Borel-Moore homology of |K| minus |L| with coefficients twisted by ``cocycle``."""
    return homology_dims(boundary_matrices(pair, cocycle))


def _sort_sign(values: Sequence[int]) -> int:
    sign = 1
    values = list(values)
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            if values[i] > values[j]:
                sign = -sign
    return sign


def orbit_complex(
    pair: SimplicialPair,
    group: Sequence[Sequence[int]],
    cocycle: SignCocycle | None = None,
    character: Sequence[int] | None = None,
    *,
    check: bool = True,
) -> ChainComplexQ:
    """
    Chain complex of the quotient of a pair by a finite group of simplicial
    automorphisms acting freely on K minus L.

    Each group element is a vertex map; it must send simplices to simplices,
    preserve L, and fix the cocycle. The local system on the quotient is the
    cocycle with the group acting through ``character``.
    Args:
        pair (SimplicialPair): The covering pair.
        group (Sequence[Sequence[int]]): Vertex maps of all group elements,
            the identity included.
        cocycle (SignCocycle | None): Invariant cocycle on K; trivial if omitted.
        character (Sequence[int] | None): Sign of each group element; all +1 if omitted.
        check (bool): Verify that the boundary squares to zero.
    Returns:
        ChainComplexQ: Complex generated by one representative per orbit.
    Raises:
        IntegrityError: If the action is not free off L, does not preserve L,
            or does not fix the cocycle.
    """
    if cocycle is None:
        cocycle = SignCocycle.trivial(pair)
    elif not cocycle.attached_to(pair):
        raise CocycleMismatchError("Cocycle is attached to another complex")
    if character is None:
        character = [1] * len(group)
    if len(character) != len(group):
        raise IntegrityError("The character needs one sign per group element")

    for g in group:
        for u, v in pair.edges():
            if cocycle.sign(g[u], g[v]) != cocycle.sign(u, v):
                raise IntegrityError(f"Cocycle {cocycle.name} is not invariant on edge {(u, v)}")

    top = pair.dimension
    if top < 0:
        return ChainComplexQ([], [])
    # simplex -> (orbit representative index, sign of the simplex relative to it)
    orbit_of: list[dict[Simplex, tuple[int, int]]] = []
    dims = []
    for d in range(top + 1):
        assigned: dict[Simplex, tuple[int, int]] = {}
        n_orbits = 0
        for simplex in pair.simplices_of_dim(d, relative=True):
            if simplex in assigned:
                continue
            for g, eps in zip(group, character):
                image = [g[v] for v in simplex]
                target = tuple(sorted(image))
                if target in pair.sub or target not in pair.simplices:
                    raise IntegrityError(f"Group does not act on K minus L at {simplex}")
                if target in assigned:
                    raise IntegrityError(f"Action is not free on {simplex}")
                coefficient = eps * _sort_sign(image) * cocycle.sign(image[0], target[0])
                assigned[target] = (n_orbits, coefficient)
            n_orbits += 1
        orbit_of.append(assigned)
        dims.append(n_orbits)

    boundaries = [SparseMatrix(0, dims[0])]
    for d in range(1, top + 1):
        representatives: dict[int, Simplex] = {}
        for simplex, (orbit, coefficient) in orbit_of[d].items():
            if coefficient == 1 and orbit not in representatives:
                representatives[orbit] = simplex
        lower = orbit_of[d - 1]
        entries = []
        for orbit in range(dims[d]):
            simplex = representatives[orbit]
            for j in range(d + 1):
                face = simplex[:j] + simplex[j + 1 :]
                hit = lower.get(face)
                if hit is None:
                    continue
                coefficient = -1 if j % 2 else 1
                if j == 0:
                    coefficient *= cocycle.sign(simplex[0], simplex[1])
                entries.append((hit[0], orbit, coefficient * hit[1]))
        boundaries.append(SparseMatrix(dims[d - 1], dims[d], entries))
    logger.info("orbit complex of %s under %d elements: dims %s", pair.name, len(group), dims)
    return ChainComplexQ(dims, boundaries, check=check)
