"""
Spectral sequence of a filtered resolution.

Columns come from stratum descriptors, differentials are recorded by rank
only, and the surviving total Borel-Moore homology is turned into the
Poincare polynomial of the complement by Alexander duality.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from data.strata_data import KNOWN_DIFFERENTIALS, LINK_TARGETS, LINK_UNKNOWNS
from services.catalog import (
    CheckStatus,
    SelfCheckReport,
    StratumDescriptor,
    linear_strata,
    parity_of,
    quadratic_strata,
    self_join_strata,
    stratum_selfcheck,
)
from services.chainlab import borel_moore
from services.complexes import cycle_graph, join
from services.errors import (
    AmbiguityError,
    ContradictionError,
    DataError,
    InconsistencyError,
    IntegrityError,
    UnsupportedSizeError,
    VerificationError,
)

logger = logging.getLogger(__name__)

Cell = tuple[int, int]


class Origin(Enum):
    KNOWN = "known"
    FORCED = "forced"
    SOLVED = "solved"


@dataclass(frozen=True)
class DifferentialSpec:
    """A differential d^page out of ``source`` of the given rank."""

    page: int
    source: Cell
    rank: int
    origin: Origin = Origin.KNOWN
    citation: str = ""

    @property
    def target(self) -> Cell:
        p, q = self.source
        return p - self.page, q + self.page - 1

    def to_dict(self) -> dict:
        return {
            "page": self.page,
            "source": list(self.source),
            "target": list(self.target),
            "rank": self.rank,
            "origin": self.origin.value,
            "citation": self.citation,
        }


@dataclass
class E1Table:
    """
    Finitely supported grid of dimensions. ``unknowns`` maps a variable name
    to the cells whose dimension equals the value of that variable.
    """

    entries: dict[Cell, int]
    k: int
    n_columns: int
    ambient_dim: int | None = None
    unknowns: dict[str, list[Cell]] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {cell: dim for cell, dim in self.entries.items() if dim}
        for (p, q), dim in self.entries.items():
            if dim < 0:
                raise IntegrityError(f"Negative dimension {dim} at {(p, q)}")
            if not 1 <= p <= self.n_columns:
                raise IntegrityError(f"Column {p} outside 1..{self.n_columns}")

    def get(self, cell: Cell) -> int:
        return self.entries.get(cell, 0)

    def support(self) -> list[Cell]:
        return sorted(self.entries)

    def is_concrete(self) -> bool:
        return not self.unknowns

    def total(self) -> dict[int, int]:
        """Total degree p + q -> summed dimension."""
        result: dict[int, int] = {}
        for (p, q), dim in self.entries.items():
            result[p + q] = result.get(p + q, 0) + dim
        return dict(sorted(result.items()))

    def euler_characteristic(self) -> int:
        return sum((-1) ** ((p + q) % 2) * dim for (p, q), dim in self.entries.items())

    def with_entries(self, entries: dict[Cell, int]) -> "E1Table":
        return E1Table(entries, self.k, self.n_columns, self.ambient_dim, dict(self.unknowns))

    def with_values(self, values: dict[str, int]) -> "E1Table":
        """Substitutes values for the unknown entries."""
        entries = dict(self.entries)
        for name, cells in self.unknowns.items():
            if name not in values:
                raise DataError(f"No value given for the unknown '{name}'")
            for cell in cells:
                entries[cell] = entries.get(cell, 0) + values[name]
        return E1Table(entries, self.k, self.n_columns, self.ambient_dim)

    def to_rows(self) -> list[dict]:
        return [{"p": p, "q": q, "dim": dim} for (p, q), dim in sorted(self.entries.items())]


@dataclass(frozen=True, init=False)
class PoincarePolynomial:
    coefficients: tuple[tuple[int, int], ...]

    def __init__(self, coefficients: dict[int, int] | Iterable[tuple[int, int]] = ()):
        items = coefficients.items() if isinstance(coefficients, dict) else coefficients
        merged: dict[int, int] = {}
        for degree, coefficient in items:
            merged[degree] = merged.get(degree, 0) + coefficient
        for degree, coefficient in merged.items():
            if degree < 0 or coefficient < 0:
                raise IntegrityError(
                    f"Poincare polynomial term {coefficient}*t^{degree} is not admissible"
                )
        object.__setattr__(
            self, "coefficients", tuple(sorted((d, c) for d, c in merged.items() if c))
        )

    def as_dict(self) -> dict[int, int]:
        return dict(self.coefficients)

    def coefficient(self, degree: int) -> int:
        return self.as_dict().get(degree, 0)

    @property
    def degree(self) -> int:
        return self.coefficients[-1][0] if self.coefficients else -1

    def value_at_one(self) -> int:
        return sum(c for _, c in self.coefficients)

    def to_pairs(self) -> list[list[int]]:
        return [[d, c] for d, c in self.coefficients]

    def __str__(self) -> str:
        if not self.coefficients:
            return "0"
        terms = []
        for degree, coefficient in self.coefficients:
            if degree == 0:
                terms.append(str(coefficient))
                continue
            power = "t" if degree == 1 else f"t^{degree}"
            terms.append(power if coefficient == 1 else f"{coefficient}{power}")
        return " + ".join(terms)


def _laurent(*terms: int) -> dict[int, int]:
    result: dict[int, int] = {}
    for degree in terms:
        result[degree] = result.get(degree, 0) + 1
    return result


def _multiply(*factors: dict[int, int]) -> dict[int, int]:
    result = {0: 1}
    for factor in factors:
        product: dict[int, int] = {}
        for a, x in result.items():
            for b, y in factor.items():
                product[a + b] = product.get(a + b, 0) + x * y
        result = product
    return result


def _add(*summands: dict[int, int]) -> dict[int, int]:
    result: dict[int, int] = {}
    for summand in summands:
        for degree, coefficient in summand.items():
            result[degree] = result.get(degree, 0) + coefficient
    return result


# Assembly and differentials


def assemble_e1(
    strata: Sequence[StratumDescriptor], k: int, *, ambient_dim: int | None = None
) -> E1Table:
    """
    First page of the spectral sequence of a filtration.
    Args:
        strata (Sequence[StratumDescriptor]): Columns 1..n in order.
        k (int): Number of forms.
        ambient_dim (int | None): Dimension of the ambient space, if any.
    Returns:
        E1Table: Entry (p, q) is the Borel-Moore group of stratum p in
        total degree p + q.
    Raises:
        DataError: If the columns are not consecutive or a descriptor has no
            data for the parity of k.
    """
    if k < 0:
        raise DataError(f"k must be nonnegative, got {k}")
    columns = [d.p for d in strata]
    if columns != list(range(1, len(strata) + 1)):
        raise DataError(f"Strata must cover columns 1..{len(strata)} in order, got {columns}")
    entries: dict[Cell, int] = {}
    for descriptor in strata:
        for degree, dim in descriptor.homology_at(k).items():
            cell = (descriptor.p, degree - descriptor.p)
            entries[cell] = entries.get(cell, 0) + dim
    return E1Table(entries, k, len(strata), ambient_dim)


def apply_differentials(table: E1Table, specs: Sequence[DifferentialSpec]) -> E1Table:
    """
    Applies differentials page by page; each removes its rank from the
    source and from the target.
    Raises:
        DataError: If the table still has unknown entries.
        ContradictionError: If a rank exceeds what is left at either end.
    """
    if not table.is_concrete():
        raise DataError(f"Table has unknown entries {sorted(table.unknowns)}")
    entries = dict(table.entries)
    for spec in sorted(specs, key=lambda s: (s.page, s.source)):
        if spec.page < 1 or spec.rank < 0:
            raise ContradictionError(f"Invalid differential {spec}")
        target = spec.target
        if target[0] < 1:
            raise ContradictionError(f"d^{spec.page} from {spec.source} leaves the table")
        available = min(entries.get(spec.source, 0), entries.get(target, 0))
        if spec.rank > available:
            raise ContradictionError(
                f"d^{spec.page}: {spec.source} -> {target} of rank {spec.rank} "
                f"exceeds the available dimension {available}"
            )
        entries[spec.source] = entries.get(spec.source, 0) - spec.rank
        entries[target] = entries.get(target, 0) - spec.rank
    return table.with_entries(entries)


def admissible_pairs(table: E1Table) -> list[tuple[Cell, Cell]]:
    """
    Pairs (source, target) of nonzero cells that some differential d^r with
    r >= 1 could connect.
    """
    cells = table.support()
    pairs = []
    for source in cells:
        for target in cells:
            if target[0] < source[0] and sum(target) == sum(source) - 1:
                pairs.append((source, target))
    return pairs


def _spec_for(source: Cell, target: Cell, rank: int, origin: Origin) -> DifferentialSpec:
    return DifferentialSpec(source[0] - target[0], source, rank, origin)


def _patterns(
    table: E1Table, pairs: list[tuple[Cell, Cell]]
) -> Iterable[list[tuple[tuple[Cell, Cell], int]]]:
    """Every assignment of ranks to ``pairs`` that fits the dimensions of the table."""
    choices = [range(min(table.get(s), table.get(t)) + 1) for s, t in pairs]
    for ranks in itertools.product(*choices):
        used: dict[Cell, int] = {}
        feasible = True
        for (source, target), r in zip(pairs, ranks):
            for cell in (source, target):
                used[cell] = used.get(cell, 0) + r
                if used[cell] > table.get(cell):
                    feasible = False
        if feasible:
            yield [(pair, r) for pair, r in zip(pairs, ranks) if r]


def force_by_dimension(table: E1Table) -> list[DifferentialSpec]:
    """
    Differentials forced by the vanishing of everything at or above the
    ambient dimension.
    Returns:
        list[DifferentialSpec]: The unique pattern killing every such cell,
        empty when there is none to kill.
    Raises:
        DataError: If the table has no ambient dimension.
        InconsistencyError: If no pattern kills all of them.
        AmbiguityError: If several patterns do.
    """
    if table.ambient_dim is None:
        raise DataError("Forcing by dimension needs the ambient dimension")
    high = {cell for cell in table.support() if sum(cell) >= table.ambient_dim}
    if not high:
        return []
    pairs = [pair for pair in admissible_pairs(table) if high & set(pair)]
    solutions = []
    for pattern in _patterns(table, pairs):
        killed: dict[Cell, int] = {}
        for (source, target), r in pattern:
            killed[source] = killed.get(source, 0) + r
            killed[target] = killed.get(target, 0) + r
        if all(killed.get(cell, 0) == table.get(cell) for cell in high):
            solutions.append(pattern)
    if not solutions:
        raise InconsistencyError(
            f"No differentials kill the cells {sorted(high)} above dimension {table.ambient_dim}"
        )
    if len(solutions) > 1:
        candidates = [
            [_spec_for(s, t, r, Origin.FORCED) for (s, t), r in pattern] for pattern in solutions
        ]
        raise AmbiguityError(
            f"{len(solutions)} differential patterns kill the cells {sorted(high)}", candidates
        )
    specs = [_spec_for(s, t, r, Origin.FORCED) for (s, t), r in solutions[0]]
    for spec in specs:
        logger.info("forced d^%d: %s -> %s, rank %d", spec.page, spec.source, spec.target, spec.rank)
    return sorted(specs, key=lambda s: (s.page, s.source))


@dataclass
class Assignment:
    values: dict[str, int]
    differentials: list[DifferentialSpec]

    def to_dict(self) -> dict:
        return {
            "values": dict(self.values),
            "differentials": [d.to_dict() for d in self.differentials],
        }


def solve_by_consistency(
    table: E1Table,
    target: dict[int, int],
    *,
    value_range: Sequence[int] = (0, 1),
) -> Assignment:
    """
    Finds the values of the unknown entries and the differentials for which
    the surviving total homology equals ``target``.
    Args:
        table (E1Table): Page with possibly unknown entries.
        target (dict[int, int]): Expected total degree -> dimension.
        value_range (Sequence[int]): Values tried for each unknown.
    Returns:
        Assignment: The unique solution; differentials have nonzero rank.
    Raises:
        InconsistencyError: If nothing matches the target.
        AmbiguityError: If several assignments match it.
    """
    wanted = {d: n for d, n in target.items() if n}
    names = sorted(table.unknowns)
    solutions = []
    for values in itertools.product(value_range, repeat=len(names)):
        assigned = dict(zip(names, values))
        concrete = table.with_values(assigned)
        for pattern in _patterns(concrete, admissible_pairs(concrete)):
            specs = [_spec_for(s, t, r, Origin.SOLVED) for (s, t), r in pattern]
            if apply_differentials(concrete, specs).total() == wanted:
                solutions.append(Assignment(assigned, sorted(specs, key=lambda s: (s.page, s.source))))
    if not solutions:
        raise InconsistencyError(f"No assignment reaches the total homology {wanted}")
    if len(solutions) > 1:
        raise AmbiguityError(
            f"{len(solutions)} assignments reach the total homology {wanted}",
            [s.to_dict() for s in solutions],
        )
    solution = solutions[0]
    logger.info("consistency solve: values %s, %d differentials", solution.values, len(solution.differentials))
    return solution


def positional_check(table: E1Table) -> list[tuple[Cell, Cell]]:
    """Pairs of surviving cells still connected by an admissible differential."""
    return admissible_pairs(table)


def alexander_dual(bm_total: dict[int, int], ambient_dim: int) -> PoincarePolynomial:
    """
    Cohomology of the complement of a closed subset of R^ambient_dim from its
    Borel-Moore homology: degree D goes to ambient_dim - D - 1, plus the unit
    in degree 0.
    Raises:
        IntegrityError: If some dual degree is negative.
    """
    coefficients = {0: 1}
    for degree, dim in bm_total.items():
        dual = ambient_dim - degree - 1
        if dim and dual < 0:
            raise IntegrityError(
                f"Borel-Moore degree {degree} has no dual inside dimension {ambient_dim}"
            )
        if dim:
            coefficients[dual] = coefficients.get(dual, 0) + dim
    return PoincarePolynomial(coefficients)


def total_and_dualize(einf: E1Table) -> PoincarePolynomial:
    if einf.ambient_dim is None:
        raise DataError("Dualizing needs the ambient dimension")
    return alexander_dual(einf.total(), einf.ambient_dim)


# Pipelines


def known_differentials(k: int) -> list[DifferentialSpec]:
    parity = parity_of(k)
    return [
        DifferentialSpec(
            page=record["page"],
            source=(record["source_p"], record["q_offset"] + record["q_slope"] * k),
            rank=record["rank"],
            origin=Origin.KNOWN,
            citation=record["citation"],
        )
        for record in KNOWN_DIFFERENTIALS
        if record["parity"] == parity
    ]


@dataclass
class PipelineResult:
    k: int
    e1: E1Table
    differentials: list[DifferentialSpec]
    einf: E1Table
    poincare: PoincarePolynomial

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "parity": parity_of(self.k),
            "e1": self.e1.to_rows(),
            "differentials": [d.to_dict() for d in self.differentials],
            "einf": self.einf.to_rows(),
            "poincare": self.poincare.to_pairs(),
        }


def _run(table: E1Table, known: list[DifferentialSpec]) -> PipelineResult:
    after_known = apply_differentials(table, known)
    forced = force_by_dimension(after_known)
    einf = apply_differentials(after_known, forced)
    leftover = positional_check(einf)
    if leftover:
        raise VerificationError(
            f"k={table.k}: undeclared differentials could connect {leftover}",
            {"k": table.k, "pairs": [[list(s), list(t)] for s, t in leftover]},
        )
    return PipelineResult(table.k, table, known + forced, einf, total_and_dualize(einf))


def quadratic_pipeline(k: int) -> PipelineResult:
    """
    Cohomology of the space of k quadratic forms on R^3 without common zeros.
    Raises:
        UnsupportedSizeError: If k < 2; smaller k is handled by the link solve.
    """
    if k < 2:
        raise UnsupportedSizeError(f"The quadratic pipeline needs k >= 2, got {k}")
    table = assemble_e1(quadratic_strata(), k, ambient_dim=6 * k)
    return _run(table, known_differentials(k))


def stiefel_poincare(k: int) -> PoincarePolynomial:
    """Cohomology of the space of k linear forms on R^3 spanning the dual space."""
    return stiefel_pipeline(k).poincare


def stiefel_pipeline(k: int) -> PipelineResult:
    if k < 3:
        raise UnsupportedSizeError(f"The linear pipeline needs k >= 3, got {k}")
    table = assemble_e1(linear_strata(), k, ambient_dim=3 * k)
    return _run(table, [])


def stiefel_closed_form(k: int) -> PoincarePolynomial:
    if k < 3:
        raise UnsupportedSizeError(f"The linear closed form needs k >= 3, got {k}")
    if k % 2 == 0:
        return PoincarePolynomial(_multiply(_laurent(0, k - 1), _laurent(0, 2 * k - 5)))
    return PoincarePolynomial(_multiply(_laurent(0, k - 3), _laurent(0, 2 * k - 3)))


def theorem1_closed_form(k: int) -> PoincarePolynomial:
    """
    Published Poincare polynomial for k quadratic forms.
    Raises:
        UnsupportedSizeError: If k < 2.
    """
    if k < 2:
        raise UnsupportedSizeError(f"The closed form needs k >= 2, got {k}")
    if k == 2:
        return PoincarePolynomial({0: 1, 1: 1})
    if k % 2 == 0:
        return PoincarePolynomial(
            _multiply(_laurent(0, k - 1), _laurent(0, 3 * k - 9, 5 * k - 14))
        )
    return PoincarePolynomial(
        _add(
            _laurent(0, k - 1),
            _multiply(_laurent(3 * k - 7), _laurent(0, k - 5), _laurent(0, 2 * k - 3)),
        )
    )


@dataclass
class SweepRow:
    k: int
    pipeline: PoincarePolynomial
    closed_form: PoincarePolynomial

    @property
    def match(self) -> bool:
        return self.pipeline == self.closed_form

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "pipeline": self.pipeline.to_pairs(),
            "closed_form": self.closed_form.to_pairs(),
            "match": self.match,
        }


def theorem_sweep(k_min: int, k_max: int) -> list[SweepRow]:
    if k_min < 2 or k_max < k_min:
        raise UnsupportedSizeError(f"Sweep range must satisfy 2 <= k_min <= k_max, got {k_min}..{k_max}")
    rows = [
        SweepRow(k, quadratic_pipeline(k).poincare, theorem1_closed_form(k))
        for k in range(k_min, k_max + 1)
    ]
    for row in rows:
        if not row.match:
            logger.warning("k=%d: pipeline %s differs from %s", row.k, row.pipeline, row.closed_form)
    return rows


@dataclass
class LinkResult:
    one_form: Assignment
    unknown_value: int
    d2_rank: int
    zero_forms: E1Table
    d2: DifferentialSpec
    link_homology: dict[int, int]
    zero_forms_solve: Assignment

    @property
    def consistent(self) -> bool:
        solved = [d for d in self.zero_forms_solve.differentials if d.rank]
        return solved == [DifferentialSpec(self.d2.page, self.d2.source, self.d2.rank, Origin.SOLVED)]

    def to_dict(self) -> dict:
        return {
            "unknown": {LINK_UNKNOWNS["variable"]: self.unknown_value},
            "one_form": self.one_form.to_dict(),
            "d2": self.d2.to_dict(),
            "k0_e1": self.zero_forms.to_rows(),
            "link_homology": {str(d): n for d, n in self.link_homology.items()},
            "consistent": self.consistent,
        }


def link_pipeline() -> LinkResult:
    """
    Homology of the link of the whole-plane stratum.

    The one-form sequence, whose total is known, fixes the unknown entries
    of the ninth column; their absence means the second differential of the
    zero-form sequence is an isomorphism.
    """
    variable = LINK_UNKNOWNS["variable"]
    strata = quadratic_strata()
    table = assemble_e1(strata, 1, ambient_dim=6)
    table = apply_differentials(table, known_differentials(1))
    table.unknowns = {variable: [tuple(cell) for cell in LINK_UNKNOWNS["entries"]]}
    target = {int(d): n for d, n in LINK_TARGETS["k1"].items()}
    one_form = solve_by_consistency(table, target)
    value = one_form.values[variable]

    zero_forms = assemble_e1(strata[:-1], 0)
    d2 = DifferentialSpec(2, (6, 3), 1 - value, Origin.SOLVED)
    link = apply_differentials(zero_forms, [d2]).total()
    expected = {int(d): n for d, n in LINK_TARGETS["k0"].items()}
    zero_forms_solve = solve_by_consistency(zero_forms, expected)
    result = LinkResult(one_form, value, d2.rank, zero_forms, d2, link, zero_forms_solve)
    if link != expected or not result.consistent:
        raise VerificationError(
            f"Link homology {link} differs from {expected}", result.to_dict()
        )
    logger.info("link solve: %s = %d, d2 rank %d, homology %s", variable, value, d2.rank, link)
    return result


# Largest r for which the join of triangles is built as a check.
JOIN_MODEL_MAX_R = 3


@dataclass
class SelfJoinResult:
    """
    The solved self-join sequence with two independent checks: each column
    recomputed from its configuration model, and for small r the homology
    of an explicit join of triangles.
    """

    r: int
    e1: E1Table
    assignment: Assignment
    total: dict[int, int]
    expected: dict[int, int]
    columns: list[SelfCheckReport] = field(default_factory=list)
    model: dict[int, int] | None = None

    @property
    def columns_pass(self) -> bool:
        return all(report.status is CheckStatus.PASS for report in self.columns)

    @property
    def match(self) -> bool:
        model_agrees = self.model is None or self.model == self.total
        return self.total == self.expected and self.columns_pass and model_agrees

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "e1": self.e1.to_rows(),
            "differentials": [d.to_dict() for d in self.assignment.differentials],
            "total": {str(d): n for d, n in self.total.items()},
            "expected": {str(d): n for d, n in self.expected.items()},
            "columns": [report.to_dict() for report in self.columns],
            "model": None if self.model is None else {str(d): n for d, n in self.model.items()},
            "match": self.match,
        }


def join_of_triangles(r: int) -> dict[int, int]:
    """Homology of the join of r triangle boundaries, a (2r-1)-sphere."""
    joined = cycle_graph(3)
    for _ in range(r - 1):
        joined = join(joined, cycle_graph(3))
    return {d: n for d, n in enumerate(borel_moore(joined)) if n}


def self_join_pipeline(r: int) -> SelfJoinResult:
    """Assembles the r-th self-join of a circle from its strata; it is a (2r-1)-sphere."""
    strata = self_join_strata(r)
    table = assemble_e1(strata, 0)
    expected = {0: 1, 2 * r - 1: 1}
    assignment = solve_by_consistency(table, expected)
    total = apply_differentials(table, assignment.differentials).total()
    columns = [stratum_selfcheck(descriptor, 0) for descriptor in strata]
    model = join_of_triangles(r) if r <= JOIN_MODEL_MAX_R else None
    result = SelfJoinResult(r, table, assignment, total, expected, columns, model)
    logger.info("self-join r=%d: total %s, columns pass %s", r, total, result.columns_pass)
    return result
