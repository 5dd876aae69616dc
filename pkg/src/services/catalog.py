"""
Finite models of the configuration spaces and the stratum tables built on them.

Every space used by a resolution is registered here. A constructed model is
a simplicial pair (or the quotient of one by a free group action) whose
Borel-Moore homology is computed exactly; a cited model only carries its
graded dimensions and the reason they are trusted.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Callable, NamedTuple, Sequence

from data.models_data import RP2_ORIENTATION_NEGATIVE_EDGES, RP2_TRIANGLES
from data.strata_data import LINEAR_STRATA, QUADRATIC_STRATA, SELF_JOIN_MAX_R
from services.chainlab import borel_moore, homology_dims, orbit_complex
from services.complexes import (
    SignCocycle,
    SimplicialPair,
    coordinate_diagonal,
    coordinate_permutation,
    coordinate_projection,
    dump_pair,
    mapping_torus,
    point,
    power,
    pullback,
    seam_cocycle,
    simplex_rel_boundary,
    tensor_cocycles,
)
from services.errors import DataError, UnsupportedSizeError

logger = logging.getLogger(__name__)

TWIST_TAGS = ("trivial", "or", "pm", "or+pm")
PARITIES = ("even", "odd")
MAX_SLOPE = 5


class Provenance(Enum):
    CONSTRUCTED = "constructed"
    CITED = "cited"


def _tag_generators(tag: str) -> frozenset[str]:
    if tag not in TWIST_TAGS:
        raise DataError(f"Unknown twist tag '{tag}', expected one of {TWIST_TAGS}")
    return frozenset() if tag == "trivial" else frozenset(tag.split("+"))


def tensor_tag(a: str, b: str) -> str:
    """
    Tensor product of two rank-1 local systems named by their tags.
    Examples:
        ``tensor_tag("or", "or") == "trivial"``, ``tensor_tag("or", "pm") == "or+pm"``.
    """
    generators = _tag_generators(a) ^ _tag_generators(b)
    if not generators:
        return "trivial"
    return "+".join(g for g in ("or", "pm") if g in generators)


def parity_of(k: int) -> str:
    return "even" if k % 2 == 0 else "odd"


def _sparse(dims: Sequence[int]) -> dict[int, int]:
    return {degree: dim for degree, dim in enumerate(dims) if dim}


# Built models


@dataclass
class PairModel:
    """A pair (K, L) with one cocycle per supported twist tag."""

    pair: SimplicialPair
    cocycles: dict[str, SignCocycle]

    @property
    def twists(self) -> tuple[str, ...]:
        return tuple(self.cocycles)

    def bm_homology(self, twist: str) -> dict[int, int]:
        if twist not in self.cocycles:
            raise DataError(f"Model {self.pair.name} has no '{twist}' local system")
        return _sparse(borel_moore(self.pair, self.cocycles[twist]))

    def dump(self) -> str:
        return dump_pair(self.pair, self.cocycles)


@dataclass
class OrbitModel:
    """
    Quotient of a pair by a finite group acting freely off the subcomplex.

    A twist is an invariant cocycle on the cover together with a character
    of the group.
    """

    cover: SimplicialPair
    group: list[list[int]]
    systems: dict[str, tuple[SignCocycle, list[int]]]

    @property
    def twists(self) -> tuple[str, ...]:
        return tuple(self.systems)

    def bm_homology(self, twist: str) -> dict[int, int]:
        if twist not in self.systems:
            raise DataError(f"Model {self.cover.name} has no '{twist}' local system")
        cocycle, character = self.systems[twist]
        return _sparse(homology_dims(orbit_complex(self.cover, self.group, cocycle, character)))

    def dump(self) -> str:
        lines = [f"# quotient by {len(self.group)} vertex maps"]
        lines += [f"# group {' '.join(map(str, g))}" for g in self.group]
        cocycles = {tag: cocycle for tag, (cocycle, _) in self.systems.items()}
        return dump_pair(self.cover, cocycles) + "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SpaceModel:
    name: str
    provenance: Provenance
    description: str
    builder: Callable[[], PairModel | OrbitModel] | None = None
    twists: tuple[str, ...] = TWIST_TAGS
    cited: dict[str, dict[int, int]] = field(default_factory=dict)
    citation: str = ""
    heavy: bool = False

    @property
    def constructed(self) -> bool:
        return self.provenance is Provenance.CONSTRUCTED

    def build(self) -> PairModel | OrbitModel:
        if self.builder is None:
            raise DataError(f"Model {self.name} is cited and has no finite complex")
        return _build(self.name)

    def bm_homology(self, twist: str = "trivial") -> dict[int, int]:
        """
        Borel-Moore homology of the space as ``{degree: dimension}``.
        Raises:
            DataError: If the model has no local system with this tag.
        """
        _tag_generators(twist)
        if not self.constructed:
            if twist not in self.cited:
                raise DataError(f"No cited homology of {self.name} with '{twist}' coefficients")
            return dict(self.cited[twist])
        return dict(_homology(self.name, twist))


# Builders


def _rp2_pair(name: str) -> tuple[SimplicialPair, SignCocycle]:
    pair = SimplicialPair.from_facets(RP2_TRIANGLES, name=name)
    orientation = SignCocycle(
        pair, {edge: -1 for edge in RP2_ORIENTATION_NEGATIVE_EDGES}, name="or"
    )
    return pair, orientation


def _rp2_model(name: str) -> PairModel:
    pair, orientation = _rp2_pair(name)
    trivial = SignCocycle.trivial(pair)
    # A single point has no permutations, so "pm" is trivial.
    return PairModel(
        pair, {"trivial": trivial, "or": orientation, "pm": trivial, "or+pm": orientation}
    )


def _point_model() -> PairModel:
    pair = point()
    trivial = SignCocycle.trivial(pair)
    return PairModel(pair, {tag: trivial for tag in TWIST_TAGS})


def _interval_model() -> PairModel:
    pair = simplex_rel_boundary(1).renamed("open-interval")
    return PairModel(pair, {"trivial": SignCocycle.trivial(pair)})


def _circle_config_model(j: int, name: str) -> PairModel:
    """
    Unordered j-point configurations on a circle. The monodromy is a cyclic
    shift of the points, of sign (-1)^(j-1); it also reverses the orientation
    of the open simplex fiber exactly when it is odd, so "or" equals "pm".
    """
    torus = mapping_torus(j).renamed(name)
    twisted = seam_cocycle(torus, (-1) ** (j - 1), name="pm")
    trivial = SignCocycle.trivial(torus)
    return PairModel(
        torus, {"trivial": trivial, "pm": twisted, "or": twisted, "or+pm": trivial}
    )


def model_ordered_config(j: int) -> SimplicialPair:
    """
    Ordered configurations of j distinct points of RP^2: the staircase power
    of the six-vertex model relative to the union of its pairwise diagonals.
    Raises:
        UnsupportedSizeError: If j is not 2 or 3.
    """
    if j not in (2, 3):
        raise UnsupportedSizeError(f"Ordered configuration models exist for j = 2, 3, got {j}")
    return _ordered_cover(j)


@lru_cache(maxsize=None)
def _ordered_cover(j: int) -> SimplicialPair:
    rp2, _ = _rp2_pair("RP2")
    full = power(rp2, j)
    diagonal: set = set()
    for r, s in itertools.combinations(range(j), 2):
        diagonal |= coordinate_diagonal(full, r, s)
    result = SimplicialPair(
        full.simplices,
        diagonal,
        n_vertices=full.n_vertices,
        labels=full.labels,
        name=f"I(RP2,{j})",
        validate=False,
    )
    logger.info("ordered configuration model %s: f-vector %s", result.name, result.f_vector())
    return result


def _product_orientation(pair: SimplicialPair, j: int) -> SignCocycle:
    _, orientation = _rp2_pair("RP2")
    factors = [
        pullback(orientation, pair, coordinate_projection(pair, c), name="or")
        for c in range(j)
    ]
    result = factors[0]
    for factor in factors[1:]:
        result = tensor_cocycles(result, factor)
    return SignCocycle(pair, {edge: -1 for edge in result.negative_edges}, name="or", check=False)


def _ordered_config_model(j: int) -> PairModel:
    pair = model_ordered_config(j)
    return PairModel(
        pair, {"trivial": SignCocycle.trivial(pair), "or": _product_orientation(pair, j)}
    )


def _permutation_sign(perm: Sequence[int]) -> int:
    inversions = sum(
        1 for a, b in itertools.combinations(range(len(perm)), 2) if perm[a] > perm[b]
    )
    return -1 if inversions % 2 else 1


def _unordered_config_model(j: int) -> OrbitModel:
    """
    Unordered configurations as the orbit complex of the coordinate
    permutations. Permuting two-dimensional factors preserves orientation,
    so "or" uses the trivial character.
    """
    cover = model_ordered_config(j)
    perms = list(itertools.permutations(range(j)))
    group = [coordinate_permutation(cover, perm) for perm in perms]
    signs = [_permutation_sign(perm) for perm in perms]
    unit = [1] * len(perms)
    trivial = SignCocycle.trivial(cover)
    orientation = _product_orientation(cover, j)
    systems = {
        "trivial": (trivial, unit),
        "pm": (trivial, signs),
        "or": (orientation, unit),
        "or+pm": (orientation, signs),
    }
    return OrbitModel(cover, group, systems)


MODELS: dict[str, SpaceModel] = {}


def _register(model: SpaceModel):
    MODELS[model.name] = model


_register(SpaceModel("point", Provenance.CONSTRUCTED, "a single vertex", _point_model))
_register(
    SpaceModel(
        "RP2",
        Provenance.CONSTRUCTED,
        "six-vertex real projective plane",
        lambda: _rp2_model("RP2"),
    )
)
_register(
    SpaceModel(
        "RP2-dual",
        Provenance.CONSTRUCTED,
        "projective plane of lines in R^3",
        lambda: _rp2_model("RP2-dual"),
    )
)
_register(
    SpaceModel(
        "open-interval",
        Provenance.CONSTRUCTED,
        "segment relative to its endpoints",
        _interval_model,
        twists=("trivial",),
    )
)
_register(
    SpaceModel(
        "mobius",
        Provenance.CONSTRUCTED,
        "open Moebius band, two unordered points on a circle",
        lambda: _circle_config_model(2, "mobius"),
    )
)
for _j in range(1, SELF_JOIN_MAX_R + 1):
    _register(
        SpaceModel(
            f"B(S1,{_j})",
            Provenance.CONSTRUCTED,
            f"{_j} unordered points on a circle",
            (lambda j=_j: _circle_config_model(j, f"B(S1,{j})")),
        )
    )
_register(
    SpaceModel(
        "I(RP2,2)",
        Provenance.CONSTRUCTED,
        "ordered pairs of distinct points of RP^2",
        lambda: _ordered_config_model(2),
        twists=("trivial", "or"),
    )
)
_register(
    SpaceModel(
        "I(RP2,3)",
        Provenance.CONSTRUCTED,
        "ordered triples of distinct points of RP^2",
        lambda: _ordered_config_model(3),
        twists=("trivial", "or"),
        heavy=True,
    )
)
_register(
    SpaceModel(
        "B(RP2,2)",
        Provenance.CONSTRUCTED,
        "unordered pairs of distinct points of RP^2",
        lambda: _unordered_config_model(2),
    )
)
_register(
    SpaceModel(
        "B(RP2-dual,2)",
        Provenance.CONSTRUCTED,
        "unordered pairs of distinct lines in R^3",
        lambda: _unordered_config_model(2),
    )
)
_register(
    SpaceModel(
        "B(RP2,3)",
        Provenance.CONSTRUCTED,
        "unordered triples of distinct points of RP^2",
        lambda: _unordered_config_model(3),
        heavy=True,
    )
)
_register(
    SpaceModel(
        "Bx(RP2,4)",
        Provenance.CITED,
        "unordered quadruples of points of RP^2 in general position",
        cited={"trivial": {}, "pm": {}},
        twists=("trivial", "pm"),
        citation=(
            "vanishes on all quadruples and on the collinear ones; "
            "the collinear quadruples retract to a homogeneous 3-manifold "
            "covered 16-fold by SU(2); both twisted coefficient systems are "
            "nonconstant summands of the direct image, so they have no homology"
        ),
    )
)


@lru_cache(maxsize=None)
def _build(name: str) -> PairModel | OrbitModel:
    model = MODELS[name]
    assert model.builder is not None
    logger.info("building model %s", name)
    return model.builder()


@lru_cache(maxsize=None)
def _homology(name: str, twist: str) -> dict[int, int]:
    return _build(name).bm_homology(twist)


def get_model(name: str) -> SpaceModel:
    """
    Raises:
        DataError: If no model has this name.
    """
    model = MODELS.get(name)
    if model is None:
        raise DataError(f"Unknown space model '{name}', see 'catalog list'")
    return model


def list_models() -> list[dict]:
    return [
        {
            "name": model.name,
            "provenance": model.provenance.value,
            "heavy": model.heavy,
            "twists": list(model.twists),
            "description": model.description,
        }
        for model in MODELS.values()
    ]


def dump_model(name: str) -> str:
    """Text format of a constructed model with one cocycle block per twist."""
    return get_model(name).build().dump()


def model_b_rp2_2() -> SpaceModel:
    return get_model("B(RP2,2)")


# Stratum descriptors


class DegreeTerm(NamedTuple):
    offset: int
    slope: int
    dim: int

    def degree(self, k: int) -> int:
        return self.offset + self.slope * k


@dataclass(frozen=True)
class StratumDescriptor:
    """
    One column of a resolution: the open stratum is a bundle over ``base``
    with a vector space fiber of dimension ``fiber_vector_dim * k`` times an
    open cell of dimension ``fiber_cell_dim``.
    """

    p: int
    base: SpaceModel
    fiber_vector_dim: int
    fiber_cell_dim: int
    twist: dict[str, str]
    summand_twist: str
    bm_homology: dict[str, tuple[DegreeTerm, ...]]
    trusted: tuple[str, ...] = ()

    @classmethod
    def from_record(cls, record: dict) -> "StratumDescriptor":
        """
        Raises:
            DataError: On a missing key, an unknown base or twist tag, or a
                slope outside 0..5.
        """
        try:
            homology = {
                parity: tuple(DegreeTerm(*term) for term in terms)
                for parity, terms in record["bm_homology"].items()
            }
            descriptor = cls(
                p=record["p"],
                base=get_model(record["base"]),
                fiber_vector_dim=record["fiber_vector_dim"],
                fiber_cell_dim=record["fiber_cell_dim"],
                twist=dict(record["twist"]),
                summand_twist=record["summand_twist"],
                bm_homology=homology,
                trusted=tuple(record.get("trusted", ())),
            )
        except (KeyError, TypeError) as e:
            raise DataError(f"Malformed stratum record {record.get('p', '?')}: {e}")
        for tag in list(descriptor.twist.values()) + [descriptor.summand_twist]:
            _tag_generators(tag)
        for terms in descriptor.bm_homology.values():
            for term in terms:
                if not 0 <= term.slope <= MAX_SLOPE:
                    raise DataError(
                        f"Column {descriptor.p}: slope {term.slope} outside 0..{MAX_SLOPE}"
                    )
        return descriptor

    def twist_for(self, k: int) -> str:
        parity = parity_of(k)
        if parity not in self.twist:
            raise DataError(f"Column {self.p} has no twist rule for {parity} k")
        return self.twist[parity]

    def shift(self, k: int) -> int:
        return self.fiber_vector_dim * k + self.fiber_cell_dim

    def homology_at(self, k: int) -> dict[int, int]:
        """
        Graded dimensions of the open stratum at a concrete k, keyed by total degree.
        Raises:
            DataError: If the descriptor has no data for the parity of k.
        """
        parity = parity_of(k)
        if parity not in self.bm_homology:
            raise DataError(f"Column {self.p} has no Borel-Moore data for {parity} k")
        result: dict[int, int] = {}
        for term in self.bm_homology[parity]:
            if term.dim:
                degree = term.degree(k)
                result[degree] = result.get(degree, 0) + term.dim
        return result

    def obeys_parity_law(self) -> bool:
        return self.twist.get("even") == tensor_tag(
            self.twist.get("odd", "trivial"), self.summand_twist
        )


def quadratic_strata(parity: str | None = None) -> list[StratumDescriptor]:
    """The nine columns of the resolution for quadratic forms."""
    return _descriptors(QUADRATIC_STRATA, parity)


def linear_strata(parity: str | None = None) -> list[StratumDescriptor]:
    """The three columns of the resolution for linear forms."""
    return _descriptors(LINEAR_STRATA, parity)


def _descriptors(records: list[dict], parity: str | None) -> list[StratumDescriptor]:
    descriptors = [StratumDescriptor.from_record(r) for r in records]
    if parity is None:
        return descriptors
    if parity not in PARITIES:
        raise DataError(f"Parity must be 'even' or 'odd', got '{parity}'")
    for descriptor in descriptors:
        if parity not in descriptor.bm_homology:
            raise DataError(f"Column {descriptor.p} has no data for {parity} k")
    return descriptors


def self_join_strata(r: int) -> list[StratumDescriptor]:
    """
    Strata of the r-th self-join of a circle: column j is the bundle of open
    (j-1)-simplices over j unordered points on the circle, with sign coefficients.
    Raises:
        UnsupportedSizeError: If r is outside 1..6.
    """
    if not 1 <= r <= SELF_JOIN_MAX_R:
        raise UnsupportedSizeError(f"Self-joins are modeled for 1 <= r <= {SELF_JOIN_MAX_R}, got {r}")
    descriptors = []
    for j in range(1, r + 1):
        terms = (DegreeTerm(2 * j - 2, 0, 1), DegreeTerm(2 * j - 1, 0, 1))
        descriptors.append(
            StratumDescriptor(
                p=j,
                base=get_model(f"B(S1,{j})"),
                fiber_vector_dim=0,
                fiber_cell_dim=j - 1,
                twist={"even": "pm", "odd": "pm"},
                summand_twist="trivial",
                bm_homology={"even": terms, "odd": terms},
            )
        )
    return descriptors


class CheckStatus(Enum):
    PASS = "pass"
    FAIL = "fail"
    TRUSTED = "trusted"
    DEFERRED = "deferred"


@dataclass
class SelfCheckReport:
    p: int
    k: int
    base: str
    twist: str
    status: CheckStatus
    expected: dict[int, int]
    computed: dict[int, int] | None = None
    mismatched_degrees: list[int] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "k": self.k,
            "base": self.base,
            "twist": self.twist,
            "status": self.status.value,
            "expected": {str(d): n for d, n in sorted(self.expected.items())},
            "computed": (
                None
                if self.computed is None
                else {str(d): n for d, n in sorted(self.computed.items())}
            ),
            "mismatched_degrees": self.mismatched_degrees,
            "notes": self.notes,
        }


def stratum_selfcheck(
    descriptor: StratumDescriptor, k: int, *, allow_heavy: bool = False
) -> SelfCheckReport:
    """
    Recomputes the Borel-Moore homology of a column from its base model.
    Args:
        descriptor (StratumDescriptor): The column to check.
        k (int): Number of forms.
        allow_heavy (bool): Also build models marked heavy.
    Returns:
        SelfCheckReport: PASS or FAIL for constructed bases, TRUSTED for cited
        ones, DEFERRED for heavy bases when ``allow_heavy`` is not set.
    """
    twist = descriptor.twist_for(k)
    expected = descriptor.homology_at(k)
    base = descriptor.base
    report = SelfCheckReport(
        p=descriptor.p,
        k=k,
        base=base.name,
        twist=twist,
        status=CheckStatus.TRUSTED,
        expected=expected,
        notes=list(descriptor.trusted),
    )
    if not base.constructed:
        report.notes.append(base.citation)
        return report
    if base.heavy and not allow_heavy:
        report.status = CheckStatus.DEFERRED
        return report
    shift = descriptor.shift(k)
    computed = {
        degree + shift: dim for degree, dim in base.bm_homology(twist).items()
    }
    report.computed = computed
    report.mismatched_degrees = sorted(
        d for d in set(expected) | set(computed) if expected.get(d, 0) != computed.get(d, 0)
    )
    report.status = CheckStatus.FAIL if report.mismatched_degrees else CheckStatus.PASS
    logger.info(
        "column %d at k=%d over %s with %s: %s", descriptor.p, k, base.name, twist, report.status.value
    )
    return report


def cover_splitting_check() -> list[dict]:
    """
    Compares the ordered two-point space with the sum of the two sign
    components of the unordered one, for trivial and orientation coefficients.
    """
    ordered = get_model("I(RP2,2)")
    unordered = model_b_rp2_2()
    rows = []
    for tag in ("trivial", "or"):
        cover = ordered.bm_homology(tag)
        plus = unordered.bm_homology(tag)
        minus = unordered.bm_homology(tensor_tag(tag, "pm"))
        total = {
            d: plus.get(d, 0) + minus.get(d, 0) for d in set(plus) | set(minus)
        }
        total = {d: n for d, n in total.items() if n}
        rows.append(
            {"twist": tag, "cover": cover, "plus": plus, "minus": minus, "split": cover == total}
        )
    return rows
