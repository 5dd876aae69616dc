"""
Certified numerics for systems of real quadratic forms on R^3.

Forms are even, so every search runs over a hemisphere cover of the unit
sphere. A cell is discarded when a Lipschitz bound proves some form is
nonzero on it; the bound for a form with matrix A on the unit sphere is
2 * ||A||_F times the chordal distance.
"""

import json
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from numpy.random import PCG64, Generator, SeedSequence
from scipy.optimize import least_squares, root
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from data.models_data import (
    DEGREE_ONE_CIRCLES,
    DEGREE_ZERO_WITNESS,
    FORM_ORDER,
)
from services.errors import (
    ArityError,
    CensusError,
    DataError,
    DegenerateInputError,
    PreconditionError,
    RegularValueNotFoundError,
    UnsupportedSizeError,
)

logger = logging.getLogger(__name__)

ZERO_TOLERANCE = 1e-12
MAX_CELLS = 2_000_000
MAX_RETRIES = 20
CONDITION_LIMIT = 1e8
PATH_DEPTH = 10
SLACK_RATIO = 0.25
# Extra subdivision levels spent on a cluster before its value is rejected.
UNIQUENESS_LEVELS = 6

_UPPER = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]

# Four octant faces covering the closed upper hemisphere.
_HEMISPHERE = np.array(
    [
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
        [[0, 1, 0], [-1, 0, 0], [0, 0, 1]],
        [[-1, 0, 0], [0, -1, 0], [0, 0, 1]],
        [[0, -1, 0], [1, 0, 0], [0, 0, 1]],
    ],
    dtype=float,
)


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric form stored by its upper triangle a11, a12, a13, a22, a23, a33."""

    coefficients: tuple[float, float, float, float, float, float]

    def __post_init__(self):
        if len(self.coefficients) != 6:
            raise DataError(f"A form needs 6 coefficients, got {len(self.coefficients)}")
        values = tuple(float(c) for c in self.coefficients)
        if not all(math.isfinite(c) for c in values):
            raise DataError(f"Form coefficients must be finite, got {values}")
        object.__setattr__(self, "coefficients", values)

    @classmethod
    def from_matrix(cls, matrix) -> "QuadraticForm":
        m = np.asarray(matrix, dtype=float)
        sym = (m + m.T) / 2
        return cls(tuple(sym[i, j] for i, j in _UPPER))

    @property
    def matrix(self) -> np.ndarray:
        m = np.zeros((3, 3))
        for (i, j), c in zip(_UPPER, self.coefficients):
            m[i, j] = m[j, i] = c
        return m

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(x @ self.matrix @ x)


@dataclass(frozen=True)
class QuadraticSystem:
    forms: tuple[QuadraticForm, ...]

    def __post_init__(self):
        if not self.forms:
            raise DegenerateInputError("A system of zero forms vanishes everywhere")
        object.__setattr__(self, "forms", tuple(self.forms))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "QuadraticSystem":
        return cls(tuple(QuadraticForm(tuple(row)) for row in rows))

    @classmethod
    def from_matrices(cls, matrices) -> "QuadraticSystem":
        return cls(tuple(QuadraticForm.from_matrix(m) for m in matrices))

    @property
    def k(self) -> int:
        return len(self.forms)

    @property
    def matrices(self) -> np.ndarray:
        return np.stack([f.matrix for f in self.forms])

    def rows(self) -> list[list[float]]:
        return [list(f.coefficients) for f in self.forms]

    def evaluate(self, points) -> np.ndarray:
        """Values of every form at every point; shape (n, k)."""
        return _evaluate(self.matrices, np.atleast_2d(np.asarray(points, dtype=float)))

    def frobenius_norms(self) -> np.ndarray:
        return np.linalg.norm(self.matrices, axis=(1, 2))

    def scaled(self, factors: Sequence[float]) -> "QuadraticSystem":
        return QuadraticSystem.from_matrices(
            [c * m for c, m in zip(factors, self.matrices)]
        )

    def rotated(self, rotation) -> "QuadraticSystem":
        """The system x -> F(R x)."""
        r = np.asarray(rotation, dtype=float)
        return QuadraticSystem.from_matrices([r.T @ m @ r for m in self.matrices])

    def interpolate(self, other: "QuadraticSystem", t: float) -> "QuadraticSystem":
        return QuadraticSystem.from_matrices(
            (1 - t) * self.matrices + t * other.matrices
        )

    def to_dict(self) -> dict:
        return {"k": self.k, "forms": self.rows()}


def _evaluate(matrices: np.ndarray, points: np.ndarray) -> np.ndarray:
    return np.einsum("ni,kij,nj->nk", points, matrices, points)


def _normalize(points: np.ndarray) -> np.ndarray:
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def _subdivide(cells: np.ndarray) -> np.ndarray:
    v0, v1, v2 = cells[:, 0], cells[:, 1], cells[:, 2]
    m01 = _normalize(v0 + v1)
    m12 = _normalize(v1 + v2)
    m02 = _normalize(v0 + v2)
    children = [
        np.stack([v0, m01, m02], axis=1),
        np.stack([m01, v1, m12], axis=1),
        np.stack([m02, m12, v2], axis=1),
        np.stack([m01, m12, m02], axis=1),
    ]
    return np.concatenate(children)


# Results


@dataclass
class CertifiedNonResultant:
    min_lower_bound: float
    depth: int
    cells: int


@dataclass
class CommonZeroWitness:
    point: np.ndarray
    residual: float
    depth: int


@dataclass
class Inconclusive:
    depth_reached: int
    cells: int


CertResult = CertifiedNonResultant | CommonZeroWitness | Inconclusive


def result_to_dict(result: CertResult) -> dict:
    if isinstance(result, CertifiedNonResultant):
        return {
            "verdict": "non-resultant",
            "min_lower_bound": result.min_lower_bound,
            "depth": result.depth,
            "cells": result.cells,
        }
    if isinstance(result, CommonZeroWitness):
        return {
            "verdict": "common-zero",
            "point": [float(c) for c in result.point],
            "residual": result.residual,
            "depth": result.depth,
        }
    return {"verdict": "inconclusive", "depth": result.depth_reached, "cells": result.cells}


# Subdivision search


@dataclass
class _Search:
    status: str
    depth: int
    cells: int
    lower_bound: float = math.inf
    survivors: np.ndarray | None = None
    centers: np.ndarray | None = None
    radii: np.ndarray | None = None
    witness: np.ndarray | None = None
    residual: float = math.inf


def _search(
    matrices: np.ndarray,
    *,
    max_depth: int,
    max_cells: int,
    slack: np.ndarray | None = None,
    positive: np.ndarray | None = None,
    witness_tolerance: float | None = None,
    start: np.ndarray | None = None,
) -> _Search:
    """
    Breadth-first subdivision of the hemisphere.

    A cell is discarded when some form of ``matrices`` is provably nonzero on
    it, or when the form ``positive`` is provably negative on it. Status is
    "excluded" (nothing left), "witness" (a common zero was refined),
    "survivors" (cells left at max_depth), "slack" (the slack dominates the
    spatial bound) or "overflow" (too many cells).
    The search starts from the hemisphere cover unless ``start`` cells are given.
    """
    lipschitz = 2 * np.linalg.norm(matrices, axis=(1, 2))
    if slack is None:
        slack = np.zeros(len(matrices))
    if positive is not None:
        positive_lipschitz = 2 * np.linalg.norm(positive)
    cells = _HEMISPHERE.copy() if start is None else start
    lower = math.inf
    visited = 0
    for depth in range(max_depth + 1):
        visited += len(cells)
        centers = _normalize(cells.sum(axis=1))
        radii = np.linalg.norm(cells - centers[:, None, :], axis=2).max(axis=1)
        values = _evaluate(matrices, centers)
        margins = np.abs(values) - radii[:, None] * lipschitz[None, :] - slack[None, :]
        best = margins.max(axis=1)
        if positive is not None:
            sign_margin = -np.einsum("ni,ij,nj->n", centers, positive, centers)
            best = np.maximum(best, sign_margin - positive_lipschitz * radii)
        dropped = best > 0
        if dropped.any():
            lower = min(lower, float(best[dropped].min()))
        keep = ~dropped
        if not keep.any():
            logger.debug("search excluded everything at depth %d after %d cells", depth, visited)
            return _Search("excluded", depth, visited, lower_bound=lower)
        cells, centers, radii = cells[keep], centers[keep], radii[keep]

        if witness_tolerance is not None:
            found = _witness(matrices, cells, centers, witness_tolerance)
            if found is not None:
                point, residual = found
                return _Search("witness", depth, visited, witness=point, residual=residual)
        if slack.any() and (lipschitz * radii.max()).max() < SLACK_RATIO * slack.max():
            return _Search("slack", depth, visited)
        if depth == max_depth:
            return _Search("survivors", depth, visited, survivors=cells, centers=centers, radii=radii)
        if 4 * len(cells) + visited > max_cells:
            logger.info("search stopped at depth %d: %d live cells", depth, len(cells))
            return _Search("overflow", depth, visited)
        cells = _subdivide(cells)
        logger.debug("depth %d: %d live cells", depth + 1, len(cells))
    raise AssertionError("unreachable")


def _refine_zero(matrices: np.ndarray, start: np.ndarray) -> tuple[np.ndarray, float]:
    def residual(x):
        return np.append(np.einsum("kij,i,j->k", matrices, x, x), x @ x - 1.0)

    def jacobian(x):
        return np.vstack([2 * matrices @ x, 2 * x])

    solution = least_squares(
        residual, start, jac=jacobian, method="trf", ftol=1e-14, xtol=1e-14, gtol=1e-14
    )
    point = solution.x / np.linalg.norm(solution.x)
    return point, float(np.abs(_evaluate(matrices, point[None])).max())


def _witness(matrices, cells, centers, tolerance) -> tuple[np.ndarray, float] | None:
    candidates = np.concatenate([centers, cells.reshape(-1, 3)])
    sizes = np.abs(_evaluate(matrices, candidates)).max(axis=1)
    for index in np.argsort(sizes, kind="stable")[:3]:
        point, residual = _refine_zero(matrices, candidates[index])
        if residual <= tolerance:
            return point, residual
    return None


def _witness_tolerance(matrices: np.ndarray, zero_tolerance: float) -> float:
    return zero_tolerance * (1 + float(np.linalg.norm(matrices, axis=(1, 2)).max()))


def certify_nonresultant(
    system: QuadraticSystem,
    max_depth: int,
    *,
    max_cells: int = MAX_CELLS,
    zero_tolerance: float = ZERO_TOLERANCE,
) -> CertResult:
    """
    Decides whether the forms have a common zero on the sphere.
    Args:
        system (QuadraticSystem): The forms.
        max_depth (int): Subdivision levels below the initial cover.
        max_cells (int): Budget of visited cells.
        zero_tolerance (float): Relative residual accepted for a witness.
    Returns:
        CertResult: A certified lower bound of max_i |f_i| on the sphere, a
        refined common zero, or Inconclusive.
    Raises:
        DataError: If max_depth < 1.
    """
    if max_depth < 1:
        raise DataError(f"max_depth must be at least 1, got {max_depth}")
    matrices = system.matrices
    outcome = _search(
        matrices,
        max_depth=max_depth,
        max_cells=max_cells,
        witness_tolerance=_witness_tolerance(matrices, zero_tolerance),
    )
    if outcome.status == "excluded":
        return CertifiedNonResultant(outcome.lower_bound, outcome.depth, outcome.cells)
    if outcome.status == "witness":
        return CommonZeroWitness(outcome.witness, outcome.residual, outcome.depth)
    return Inconclusive(outcome.depth, outcome.cells)


def is_certified(result: CertResult) -> bool:
    return isinstance(result, CertifiedNonResultant)


# Paths


@dataclass
class PathResult:
    certified: bool
    t_star: float | None = None
    intervals: int = 0
    depth_reached: int = 0

    def to_dict(self) -> dict:
        return {
            "certified": self.certified,
            "t_star": self.t_star,
            "intervals": self.intervals,
            "depth": self.depth_reached,
        }


def certify_path(
    start: QuadraticSystem,
    end: QuadraticSystem,
    max_depth: int,
    *,
    spatial_depth: int = PATH_DEPTH,
    max_cells: int = MAX_CELLS,
    check_endpoints: bool = True,
) -> PathResult:
    """
    Certifies that the segment (1 - t) F + t G avoids the resultant.

    Intervals of t are split depth first. On an interval of half-length h
    around m, form i moves by at most h * ||B_i - A_i||_F on the sphere, which
    is added as slack to the spatial search of F_m.
    Raises:
        ArityError: If the systems have different numbers of forms.
        PreconditionError: If an endpoint is not certified non-resultant.
    """
    if start.k != end.k:
        raise ArityError(f"Cannot join systems of {start.k} and {end.k} forms")
    if check_endpoints:
        for name, system in (("start", start), ("end", end)):
            if not is_certified(certify_nonresultant(system, spatial_depth, max_cells=max_cells)):
                raise PreconditionError(f"The {name} system is not certified non-resultant")
    a_mat, b_mat = start.matrices, end.matrices
    spread = np.linalg.norm(b_mat - a_mat, axis=(1, 2))
    stack = [(0.0, 1.0, 0)]
    intervals = 0
    deepest = 0
    while stack:
        a, b, depth = stack.pop()
        intervals += 1
        deepest = max(deepest, depth)
        middle = (a + b) / 2
        matrices = start.interpolate(end, middle).matrices
        outcome = _search(
            matrices,
            max_depth=spatial_depth,
            max_cells=max_cells,
            slack=(b - a) / 2 * spread,
        )
        if outcome.status == "excluded":
            continue
        if depth >= max_depth:
            logger.info("path failed near t=%.6f after %d intervals", middle, intervals)
            return PathResult(False, middle, intervals, deepest)
        stack.append((middle, b, depth + 1))
        stack.append((a, middle, depth + 1))
    return PathResult(True, None, intervals, deepest)


# Degree


class _Rejected(Exception):
    """The candidate value is not usable as a regular value."""


@dataclass
class DegreeResult:
    degree: int
    value: np.ndarray
    preimages: list[np.ndarray]
    attempts: int

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "value": [float(c) for c in self.value],
            "preimages": [[float(c) for c in p] for p in self.preimages],
            "attempts": self.attempts,
        }


def _canonical(point: np.ndarray) -> np.ndarray:
    return point if point[np.argmax(np.abs(point))] > 0 else -point


def _parallel_forms(matrices: np.ndarray, value: np.ndarray) -> np.ndarray:
    """Two forms whose common zeros are the points where F(x) is parallel to ``value``."""
    m = int(np.argmax(np.abs(value)))
    return np.stack(
        [value[m] * matrices[j] - value[j] * matrices[m] for j in range(3) if j != m]
    )


def solve_preimages(
    system: QuadraticSystem,
    value,
    max_depth: int,
    *,
    max_cells: int = MAX_CELLS,
    condition_limit: float = CONDITION_LIMIT,
) -> list[np.ndarray]:
    """
    Points of RP^2 where F(x) is a positive multiple of ``value``.
    Args:
        system (QuadraticSystem): Three forms.
        value: Target direction in R^3.
        max_depth (int): Subdivision depth of the search.
        max_cells (int): Budget of visited cells.
        condition_limit (float): Largest accepted Jacobian condition number.
    Returns:
        list[np.ndarray]: One unit representative per preimage.
    Raises:
        ArityError: If the system does not have three forms.
        RegularValueNotFoundError: If ``value`` is not a usable regular value.
    """
    if system.k != 3:
        raise ArityError(f"Preimages are defined for 3 forms, got {system.k}")
    try:
        return _preimages(system.matrices, np.asarray(value, dtype=float), max_depth, max_cells, condition_limit)
    except _Rejected as e:
        raise RegularValueNotFoundError(str(e))


def _contraction(parallel: np.ndarray, x: np.ndarray, jacobian: np.ndarray) -> float:
    """
    Bound kappa with |J(x)^-1 (J(y) - J(x))| <= kappa |y - x| for the map
    y -> (parallel forms, |y|^2 - 1), whose Jacobian is linear in y.
    """
    inverse = np.linalg.inv(jacobian)
    blocks = [
        inverse @ np.vstack([2 * parallel[:, :, i], 2 * np.eye(3)[i]]) for i in range(3)
    ]
    return float(np.sqrt(sum(np.linalg.norm(block, 2) ** 2 for block in blocks)))


def _hull(centers: np.ndarray, radii: np.ndarray, x: np.ndarray) -> float:
    near = np.minimum(np.linalg.norm(centers - x, axis=1), np.linalg.norm(centers + x, axis=1))
    return float((near + radii).max())


def _unique_in_cluster(
    parallel, along, survivors, centers, radii, x, jacobian, max_cells
) -> bool:
    """
    Certifies that the cells hold at most one preimage up to sign. With
    kappa * h < 1 on the ball of radius h around x that contains them, the map
    is injective there. Cells are subdivided further while the ball is too wide.
    """
    kappa = _contraction(parallel, x, jacobian)
    for level in range(UNIQUENESS_LEVELS + 1):
        if kappa * _hull(centers, radii, x) < 1:
            return True
        if level == UNIQUENESS_LEVELS:
            break
        outcome = _search(
            parallel, max_depth=0, max_cells=max_cells, positive=along, start=_subdivide(survivors)
        )
        if outcome.status == "excluded":
            return True
        if outcome.status != "survivors":
            break
        survivors, centers, radii = outcome.survivors, outcome.centers, outcome.radii
    logger.debug("cluster at %s: kappa %.3g, hull %.3g", np.round(x, 6).tolist(), kappa, _hull(centers, radii, x))
    return False


def _preimages(matrices, value, max_depth, max_cells, condition_limit) -> list[np.ndarray]:
    norm = np.linalg.norm(value)
    if norm == 0:
        raise _Rejected("the zero vector is not a direction")
    value = value / norm
    parallel = _parallel_forms(matrices, value)
    along = np.einsum("k,kij->ij", value, matrices)
    outcome = _search(parallel, max_depth=max_depth, max_cells=max_cells, positive=along)
    if outcome.status == "excluded":
        return []
    if outcome.status != "survivors":
        raise _Rejected(f"the preimage search ended with '{outcome.status}'")
    survivors, centers, radii = outcome.survivors, outcome.centers, outcome.radii
    n = len(centers)
    reach = 4 * float(radii.max())
    tree = cKDTree(np.vstack([centers, -centers]))
    pairs = tree.query_pairs(reach, output_type="ndarray")
    graph = csr_matrix(
        (np.ones(len(pairs)), (pairs[:, 0] % n, pairs[:, 1] % n)), shape=(n, n)
    )
    n_clusters, labels = connected_components(graph, directed=False)

    def system_and_jacobian(x):
        values = np.append(np.einsum("kij,i,j->k", parallel, x, x), x @ x - 1.0)
        jacobian = np.vstack([2 * parallel @ x, 2 * x])
        return values, jacobian

    roots: list[np.ndarray] = []
    for cluster in range(n_clusters):
        in_cluster = labels == cluster
        members = centers[in_cluster]
        sizes = np.abs(_evaluate(parallel, members)).max(axis=1)
        start = members[int(np.argmin(sizes))]
        solution = root(system_and_jacobian, start, jac=True, method="hybr")
        if not solution.success:
            raise _Rejected(f"refinement did not converge: {solution.message}")
        x = solution.x / np.linalg.norm(solution.x)
        _, jacobian = system_and_jacobian(x)
        if np.linalg.cond(jacobian) > condition_limit:
            raise _Rejected("a preimage is degenerate")
        distance = min(
            np.linalg.norm(members - x, axis=1).min(), np.linalg.norm(members + x, axis=1).min()
        )
        if distance > reach:
            raise _Rejected("refinement left its cluster")
        if not _unique_in_cluster(
            parallel, along, survivors[in_cluster], members, radii[in_cluster], x, jacobian, max_cells
        ):
            raise _Rejected("a cluster is not certified to hold a single preimage")
        for other in roots:
            if min(np.linalg.norm(other - x), np.linalg.norm(other + x)) < 1e-8:
                raise _Rejected("two clusters refine to the same point")
        roots.append(_canonical(x))
    return [x for x in roots if x @ along @ x > 0]


def mod2_degree(
    system: QuadraticSystem,
    value=None,
    max_depth: int = 10,
    *,
    seed: int = 0,
    max_retries: int = MAX_RETRIES,
    max_cells: int = MAX_CELLS,
    condition_limit: float = CONDITION_LIMIT,
    check: bool = True,
) -> int:
    """Parity of the number of preimages of a regular value of RP^2 -> S^2, x -> F(x)/|F(x)|."""
    return degree_details(
        system,
        value,
        max_depth,
        seed=seed,
        max_retries=max_retries,
        max_cells=max_cells,
        condition_limit=condition_limit,
        check=check,
    ).degree


def degree_details(
    system: QuadraticSystem,
    value=None,
    max_depth: int = 10,
    *,
    seed: int = 0,
    max_retries: int = MAX_RETRIES,
    max_cells: int = MAX_CELLS,
    condition_limit: float = CONDITION_LIMIT,
    check: bool = True,
) -> DegreeResult:
    """
    Mod 2 degree with the preimages behind it. Rejected values are replaced
    by Gaussian directions drawn from PCG64(seed).
    Raises:
        ArityError: If the system does not have three forms.
        PreconditionError: If ``check`` is set and the system is not certified
            non-resultant at ``max_depth``.
        RegularValueNotFoundError: If every candidate value is rejected.
    """
    if system.k != 3:
        raise ArityError(f"The degree is defined for 3 forms, got {system.k}")
    if check and not is_certified(certify_nonresultant(system, max_depth, max_cells=max_cells)):
        raise PreconditionError("The system is not certified non-resultant")
    rng = Generator(PCG64(seed))
    candidate = rng.standard_normal(3) if value is None else np.asarray(value, dtype=float)
    matrices = system.matrices
    for attempt in range(1, max_retries + 2):
        try:
            preimages = _preimages(matrices, candidate, max_depth, max_cells, condition_limit)
            unit = candidate / np.linalg.norm(candidate)
            return DegreeResult(len(preimages) % 2, unit, preimages, attempt)
        except _Rejected as e:
            logger.info("value %s rejected: %s", np.round(candidate, 6).tolist(), e)
            candidate = rng.standard_normal(3)
    raise RegularValueNotFoundError(f"No regular value found in {max_retries} retries")


# Census


def random_system(k: int, seed: SeedSequence) -> QuadraticSystem:
    return QuadraticSystem.from_rows(Generator(PCG64(seed)).standard_normal((k, 6)))


@dataclass
class CensusReport:
    k: int
    seed: int
    depth: int
    samples: int
    draws: int
    classes: dict[str, int]
    unclassified: int
    paths: dict[str, int] = field(default_factory=dict)
    cross_class: dict[str, int] = field(default_factory=dict)
    violations: int = 0

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "seed": self.seed,
            "depth": self.depth,
            "samples": self.samples,
            "draws": self.draws,
            "classes": dict(self.classes),
            "unclassified": self.unclassified,
            "paths": dict(self.paths),
            "cross_class": dict(self.cross_class),
            "violations": self.violations,
        }


def component_census(
    k: int,
    n_samples: int,
    seed: int,
    depth: int,
    *,
    threads: int = 1,
    path_depth: int = PATH_DEPTH,
    max_cells: int = MAX_CELLS,
    max_retries: int = MAX_RETRIES,
    cross_probes: int = 3,
    max_draw_factor: int = 20,
) -> CensusReport:
    """
    Samples Gaussian systems, keeps the certified ones, sorts them into
    classes (by mod 2 degree when k = 3) and tries certified straight paths
    between random partners of the same class. A certified path between
    different classes is a violation.
    Raises:
        UnsupportedSizeError: If k is not 2 or 3.
        DataError: If n_samples < 1.
        CensusError: If no draw could be certified.
    """
    if k not in (2, 3):
        raise UnsupportedSizeError(f"The census supports k = 2, 3, got {k}")
    if n_samples < 1:
        raise DataError(f"n_samples must be positive, got {n_samples}")
    draw_seq, match_seq = SeedSequence(seed).spawn(2)
    match_rng = Generator(PCG64(match_seq))

    def certify(child: SeedSequence):
        system = random_system(k, child)
        return system, certify_nonresultant(system, depth, max_cells=max_cells)

    systems: list[QuadraticSystem] = []
    draws = 0
    with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
        while len(systems) < n_samples and draws < max_draw_factor * n_samples:
            batch = draw_seq.spawn(n_samples - len(systems))
            draws += len(batch)
            for system, result in executor.map(certify, batch):
                if is_certified(result) and len(systems) < n_samples:
                    systems.append(system)
            logger.info("census: %d certified of %d draws", len(systems), draws)
        if not systems:
            raise CensusError(f"No certified sample in {draws} draws at depth {depth}")

        labels: list[str | None]
        if k == 3:
            degree_seeds = [int(s.generate_state(1)[0]) for s in match_seq.spawn(len(systems))]

            def classify(item):
                system, degree_seed = item
                try:
                    return str(
                        mod2_degree(
                            system,
                            None,
                            depth,
                            seed=degree_seed,
                            max_retries=max_retries,
                            max_cells=max_cells,
                            check=False,
                        )
                    )
                except RegularValueNotFoundError:
                    return None

            labels = list(executor.map(classify, zip(systems, degree_seeds)))
        else:
            labels = ["all"] * len(systems)

        classes: dict[str, list[int]] = {}
        for index, label in enumerate(labels):
            if label is not None:
                classes.setdefault(label, []).append(index)

        within = []
        for label in sorted(classes):
            members = [classes[label][i] for i in match_rng.permutation(len(classes[label]))]
            within.extend(zip(members[0::2], members[1::2]))
        across = []
        names = sorted(classes)
        if len(names) >= 2:
            for _ in range(cross_probes):
                a = classes[names[0]][int(match_rng.integers(len(classes[names[0]])))]
                b = classes[names[1]][int(match_rng.integers(len(classes[names[1]])))]
                across.append((a, b))

        def connect(pair):
            a, b = pair
            return certify_path(
                systems[a],
                systems[b],
                path_depth,
                spatial_depth=depth,
                max_cells=max_cells,
                check_endpoints=False,
            ).certified

        within_results = list(executor.map(connect, within))
        across_results = list(executor.map(connect, across))

    violations = sum(across_results)
    if violations:
        logger.error("census found %d certified paths between different classes", violations)
    return CensusReport(
        k=k,
        seed=seed,
        depth=depth,
        samples=len(systems),
        draws=draws,
        classes={label: len(members) for label, members in sorted(classes.items())},
        unclassified=sum(1 for label in labels if label is None),
        paths={"attempted": len(within), "certified": sum(within_results)},
        cross_class={"attempted": len(across), "certified": violations},
        violations=violations,
    )


# Input and witnesses


def load_system(path: str) -> QuadraticSystem:
    """
    Reads a system from ``{"k": 3, "forms": [[a11, a12, a13, a22, a23, a33], ...]}``.
    Raises:
        FileNotFoundError: If the file does not exist.
        DataError: If the file is not valid JSON or does not describe a system.
    """
    try:
        with open(path, "r") as system_file:
            data = json.load(system_file)
    except FileNotFoundError:
        raise FileNotFoundError(f"The system file '{path}' does not exist.")
    except json.JSONDecodeError:
        raise DataError(f"The system file '{path}' is not valid JSON.")
    return system_from_dict(data, source=path)


def system_from_dict(data, source: str = "input") -> QuadraticSystem:
    if not isinstance(data, dict) or "forms" not in data:
        raise DataError(f"{source}: expected an object with a 'forms' list")
    forms = data["forms"]
    if not isinstance(forms, list) or any(
        not isinstance(row, list) or len(row) != len(FORM_ORDER) for row in forms
    ):
        raise DataError(f"{source}: every form needs {len(FORM_ORDER)} coefficients {FORM_ORDER}")
    if "k" in data and data["k"] != len(forms):
        raise DataError(f"{source}: k={data['k']} but {len(forms)} forms are given")
    try:
        return QuadraticSystem.from_rows(forms)
    except (TypeError, ValueError) as e:
        raise DataError(f"{source}: {e}")


def dump_system(system: QuadraticSystem) -> str:
    return json.dumps(system.to_dict())


def circle_form(center: Sequence[float], radius: float) -> QuadraticForm:
    """(x - a z)^2 + (y - b z)^2 - r^2 z^2: the circle of the affine chart z = 1."""
    a, b = center
    return QuadraticForm((1.0, 0.0, -a, 1.0, -b, a * a + b * b - radius * radius))


def degree_zero_witness() -> QuadraticSystem:
    return QuadraticSystem.from_rows(DEGREE_ZERO_WITNESS)


def degree_one_witness() -> QuadraticSystem:
    radius = DEGREE_ONE_CIRCLES["radius"]
    return QuadraticSystem(tuple(circle_form(c, radius) for c in DEGREE_ONE_CIRCLES["centers"]))
