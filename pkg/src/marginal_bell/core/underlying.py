"""Underlying distributions, marginal tables and the local-realism reduction."""
from __future__ import annotations

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import (
    IncompleteMarginalsError,
    InvalidDistributionError,
    InvalidIndexError,
    InvalidScenarioError,
)
from .models import (
    FLOAT_TOLERANCE,
    ArithmeticMode,
    GridIndex,
    Number,
    Outcomes,
    Scenario,
    SettingVector,
    coerce,
    zero,
)
from .scenario import cell_to_flat, flat_to_cell, outcome_bit

logger = logging.getLogger(__name__)

TWO_BY_TWO = Scenario(parties=2, settings=2)


def _check_normalized(values: Sequence[Number], mode: ArithmeticMode, what: str) -> None:
    if any(value < 0 for value in values):
        raise InvalidDistributionError(f"{what} has negative entries")
    total = sum(values, zero(mode))
    if mode is ArithmeticMode.RATIONAL:
        if total != 1:
            raise InvalidDistributionError(f"{what} sums to {total}, expected exactly 1")
    elif abs(total - 1.0) > FLOAT_TOLERANCE:
        raise InvalidDistributionError(f"{what} sums to {total!r}, expected 1")


@dataclass(frozen=True, slots=True)
class UnderlyingDist:
    """Normalized weights ρ(λ) over all cells, stored in flat-index order."""

    scenario: Scenario
    weights: Tuple[Number, ...]
    mode: ArithmeticMode = ArithmeticMode.RATIONAL

    def __post_init__(self) -> None:
        if len(self.weights) != self.scenario.cell_count:
            raise InvalidDistributionError(
                f"expected {self.scenario.cell_count} weights, got {len(self.weights)}"
            )
        weights = tuple(coerce(value, self.mode) for value in self.weights)
        _check_normalized(weights, self.mode, "underlying distribution")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def from_cells(
        cls,
        scenario: Scenario,
        cells: Mapping[GridIndex, Number],
        mode: ArithmeticMode = ArithmeticMode.RATIONAL,
    ) -> "UnderlyingDist":
        """Build from a sparse cell mapping; omitted cells carry weight 0."""

        weights: List[Number] = [zero(mode)] * scenario.cell_count
        for cell, value in cells.items():
            weights[cell_to_flat(scenario, cell)] = coerce(value, mode)
        return cls(scenario=scenario, weights=tuple(weights), mode=mode)

    @classmethod
    def uniform(
        cls, scenario: Scenario, mode: ArithmeticMode = ArithmeticMode.RATIONAL
    ) -> "UnderlyingDist":
        share: Number = (
            Fraction(1, scenario.cell_count)
            if mode is ArithmeticMode.RATIONAL
            else 1.0 / scenario.cell_count
        )
        return cls(scenario=scenario, weights=(share,) * scenario.cell_count, mode=mode)

    @classmethod
    def point_mass(
        cls,
        scenario: Scenario,
        cell: GridIndex,
        mode: ArithmeticMode = ArithmeticMode.RATIONAL,
    ) -> "UnderlyingDist":
        one: Number = Fraction(1) if mode is ArithmeticMode.RATIONAL else 1.0
        return cls.from_cells(scenario, {cell: one}, mode)

    def weight(self, cell: GridIndex) -> Number:
        return self.weights[cell_to_flat(self.scenario, cell)]

    def cells(self) -> Dict[GridIndex, Number]:
        """Nonzero weights keyed by grid index, in flat order."""

        return {
            flat_to_cell(self.scenario, flat): value
            for flat, value in enumerate(self.weights)
            if value != 0
        }


@dataclass(frozen=True, slots=True)
class MarginalTable:
    """Observable distribution P_s(o) for one setting vector, indexed like ``outcome_tuples``."""

    scenario: Scenario
    settings: SettingVector
    probs: Tuple[Number, ...]
    mode: ArithmeticMode = ArithmeticMode.RATIONAL

    def __post_init__(self) -> None:
        self.scenario.validate_settings(self.settings)
        if len(self.probs) != 2**self.scenario.parties:
            raise InvalidDistributionError(
                f"table P_{self.scenario.label(self.settings)} needs "
                f"{2 ** self.scenario.parties} entries, got {len(self.probs)}"
            )
        probs = tuple(coerce(value, self.mode) for value in self.probs)
        _check_normalized(probs, self.mode, f"table P_{self.scenario.label(self.settings)}")
        object.__setattr__(self, "probs", probs)

    def prob(self, outcomes: Sequence[int]) -> Number:
        bits = self.scenario.validate_outcomes(outcomes)
        return self.probs[self.scenario.outcome_index(bits)]

    def items(self) -> Iterable[Tuple[Outcomes, Number]]:
        return zip(self.scenario.outcome_tuples(), self.probs)


@dataclass(frozen=True, slots=True)
class MarginalSet:
    """One table per setting vector, ordered like ``Scenario.setting_vectors``."""

    scenario: Scenario
    tables: Tuple[MarginalTable, ...]
    mode: ArithmeticMode = ArithmeticMode.RATIONAL

    def __post_init__(self) -> None:
        expected = self.scenario.setting_vectors()
        ordered = sorted(self.tables, key=lambda table: self.scenario.setting_index(table.settings))
        present = tuple(table.settings for table in ordered)
        if present != expected:
            missing = sorted(set(expected) - set(present))
            raise IncompleteMarginalsError(
                f"marginal set must hold exactly one table per setting vector; "
                f"missing {missing}, got {len(present)} tables"
            )
        for table in ordered:
            if table.scenario != self.scenario:
                raise IncompleteMarginalsError("table scenario does not match the set")
            if table.mode is not self.mode:
                raise InvalidDistributionError(
                    "tables mix rational and float modes; convert explicitly"
                )
        object.__setattr__(self, "tables", tuple(ordered))

    def table(self, settings: Sequence[int]) -> MarginalTable:
        vector = self.scenario.validate_settings(settings)
        return self.tables[self.scenario.setting_index(vector)]

    def prob(self, settings: Sequence[int], outcomes: Sequence[int]) -> Number:
        return self.table(settings).prob(outcomes)

    def to_float(self) -> "MarginalSet":
        tables = tuple(
            MarginalTable(
                scenario=self.scenario,
                settings=table.settings,
                probs=tuple(float(value) for value in table.probs),
                mode=ArithmeticMode.FLOAT,
            )
            for table in self.tables
        )
        return MarginalSet(scenario=self.scenario, tables=tables, mode=ArithmeticMode.FLOAT)


@dataclass(frozen=True, slots=True)
class SingleSiteSet:
    """Single-party probabilities ``probs[p][k] = (P_{p,k}(0), P_{p,k}(1))``."""

    scenario: Scenario
    probs: Tuple[Tuple[Tuple[Number, Number], ...], ...]
    mode: ArithmeticMode = ArithmeticMode.RATIONAL

    def __post_init__(self) -> None:
        if len(self.probs) != self.scenario.parties or any(
            len(row) != self.scenario.settings for row in self.probs
        ):
            raise InvalidDistributionError("single-site set must cover every party and setting")
        coerced = []
        for party, row in enumerate(self.probs):
            pairs = []
            for setting, pair in enumerate(row):
                values = tuple(coerce(value, self.mode) for value in pair)
                if len(values) != 2:
                    raise InvalidDistributionError("each single-site entry needs two outcomes")
                _check_normalized(values, self.mode, f"P_{party},{setting}")
                pairs.append((values[0], values[1]))
            coerced.append(tuple(pairs))
        object.__setattr__(self, "probs", tuple(coerced))


@dataclass(frozen=True, slots=True)
class FullHiddenVariableDist:
    """W(Λ) over every setting-pair-dependent outcome byte of the two-by-two scenario.

    Bit ``2q`` of the byte is A_ab and bit ``2q + 1`` is B_ab, with ``q = a + 2b``,
    so that ``byte = sum_q q_ab 4**q`` with ``q_ab = A_ab + 2 B_ab``.
    """

    weights: Tuple[Number, ...]
    mode: ArithmeticMode = ArithmeticMode.RATIONAL
    scenario: Scenario = field(default=TWO_BY_TWO)

    BYTE_COUNT = 256

    def __post_init__(self) -> None:
        if self.scenario != TWO_BY_TWO:
            raise InvalidScenarioError("full hidden-variable distributions need n=2, m=2")
        if len(self.weights) != self.BYTE_COUNT:
            raise InvalidDistributionError(
                f"expected {self.BYTE_COUNT} byte weights, got {len(self.weights)}"
            )
        weights = tuple(coerce(value, self.mode) for value in self.weights)
        _check_normalized(weights, self.mode, "full hidden-variable distribution")
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, mode: ArithmeticMode = ArithmeticMode.RATIONAL) -> "FullHiddenVariableDist":
        share: Number = (
            Fraction(1, cls.BYTE_COUNT) if mode is ArithmeticMode.RATIONAL else 1.0 / cls.BYTE_COUNT
        )
        return cls(weights=(share,) * cls.BYTE_COUNT, mode=mode)

    @classmethod
    def point_mass(
        cls, byte: int, mode: ArithmeticMode = ArithmeticMode.RATIONAL
    ) -> "FullHiddenVariableDist":
        if not 0 <= byte < cls.BYTE_COUNT:
            raise InvalidIndexError(f"byte {byte} outside [0, {cls.BYTE_COUNT})")
        one: Number = Fraction(1) if mode is ArithmeticMode.RATIONAL else 1.0
        weights = [zero(mode)] * cls.BYTE_COUNT
        weights[byte] = one
        return cls(weights=tuple(weights), mode=mode)


@dataclass(frozen=True, slots=True)
class LocalReduction:
    """Outcome of :func:`reduce_local`: the reduced ρ, or the mass that blocks it."""

    off_subspace_mass: Number
    rho: Optional[UnderlyingDist] = None

    @property
    def is_local(self) -> bool:
        return self.rho is not None


@dataclass(frozen=True, slots=True)
class FactorizationViolation:
    """One cross-factorization identity P_s(o) P_t(o') = P_s'(..) P_t'(..) that fails."""

    left: Tuple[Tuple[SettingVector, Outcomes], Tuple[SettingVector, Outcomes]]
    right: Tuple[Tuple[SettingVector, Outcomes], Tuple[SettingVector, Outcomes]]
    residual: Number


@dataclass(frozen=True, slots=True)
class FactorizationReport:
    instances_checked: int
    violations: Tuple[FactorizationViolation, ...]

    @property
    def holds(self) -> bool:
        return not self.violations

    @property
    def max_residual(self) -> float:
        return max((float(v.residual) for v in self.violations), default=0.0)


def _table_probs(
    scenario: Scenario, weights: Sequence[Number], settings: SettingVector, mode: ArithmeticMode
) -> Tuple[Number, ...]:
    n = scenario.parties
    probs: List[Number] = [zero(mode)] * (2**n)
    for flat, weight in enumerate(weights):
        if weight == 0:
            continue
        index = 0
        for party, setting in enumerate(settings):
            index = (index << 1) | outcome_bit(scenario, flat, party, setting)
        probs[index] += weight
    return tuple(probs)


def marginalize(rho: UnderlyingDist, settings: Sequence[int]) -> MarginalTable:
    """P_s(o) as the partial sum of ρ over the support of (s, o)."""

    vector = rho.scenario.validate_settings(settings)
    probs = _table_probs(rho.scenario, rho.weights, vector, rho.mode)
    return MarginalTable(scenario=rho.scenario, settings=vector, probs=probs, mode=rho.mode)


def marginalize_all(rho: UnderlyingDist) -> MarginalSet:
    tables = tuple(marginalize(rho, vector) for vector in rho.scenario.setting_vectors())
    return MarginalSet(scenario=rho.scenario, tables=tables, mode=rho.mode)


def product_dist(singles: SingleSiteSet) -> UnderlyingDist:
    """ρ(λ) = prod over (p, k) of P_{p,k}(A_{p,k})."""

    scenario = singles.scenario
    mode = singles.mode
    one: Number = Fraction(1) if mode is ArithmeticMode.RATIONAL else 1.0
    weights: List[Number] = []
    for flat in range(scenario.cell_count):
        weight = one
        for party in range(scenario.parties):
            for setting in range(scenario.settings):
                weight *= singles.probs[party][setting][outcome_bit(scenario, flat, party, setting)]
        weights.append(weight)
    if mode is ArithmeticMode.FLOAT:
        total = sum(weights)
        weights = [weight / total for weight in weights]
    return UnderlyingDist(scenario=scenario, weights=tuple(weights), mode=mode)


def _swap_parties(
    s: SettingVector, o: Outcomes, t: SettingVector, u: Outcomes, parties: Iterable[int]
) -> Tuple[SettingVector, Outcomes, SettingVector, Outcomes]:
    s2, o2, t2, u2 = list(s), list(o), list(t), list(u)
    for party in parties:
        s2[party], t2[party] = t2[party], s2[party]
        o2[party], u2[party] = u2[party], o2[party]
    return tuple(s2), tuple(o2), tuple(t2), tuple(u2)


def check_factorization(
    ms: MarginalSet, tol: Optional[float] = None
) -> FactorizationReport:
    """Check every cross-factorization identity implied by statistical independence.

    For setting vectors ``s < t`` and a nonempty proper subset of the parties on
    which they differ, swapping those parties' settings and outcomes between the
    two factors must leave ``P_s(o) P_t(u)`` unchanged.
    """

    scenario = ms.scenario
    exact = ms.mode is ArithmeticMode.RATIONAL
    threshold = 0.0 if exact else (FLOAT_TOLERANCE if tol is None else tol)
    vectors = scenario.setting_vectors()
    outcomes = scenario.outcome_tuples()
    seen: set[tuple[object, ...]] = set()
    violations: List[FactorizationViolation] = []
    checked = 0

    for s, t in itertools.combinations(vectors, 2):
        differing = [p for p in range(scenario.parties) if s[p] != t[p]]
        for size in range(1, len(differing)):
            for subset in itertools.combinations(differing, size):
                for o in outcomes:
                    for u in outcomes:
                        s2, o2, t2, u2 = _swap_parties(s, o, t, u, subset)
                        left = tuple(sorted(((s, o), (t, u))))
                        right = tuple(sorted(((s2, o2), (t2, u2))))
                        key = tuple(sorted((left, right)))
                        if key in seen:
                            continue
                        seen.add(key)
                        checked += 1
                        lhs = ms.prob(s, o) * ms.prob(t, u)
                        rhs = ms.prob(s2, o2) * ms.prob(t2, u2)
                        residual = abs(lhs - rhs)
                        if residual > threshold:
                            violations.append(
                                FactorizationViolation(
                                    left=((s, o), (t, u)),
                                    right=((s2, o2), (t2, u2)),
                                    residual=residual,
                                )
                            )

    logger.debug(
        "factorization: %d identities checked, %d violated", checked, len(violations)
    )
    return FactorizationReport(instances_checked=checked, violations=tuple(violations))


def _local_byte(flat: int) -> int:
    """Byte of W that replicates the half-byte cell ``flat`` of the two-by-two grid."""

    byte = 0
    for a, b in itertools.product((0, 1), repeat=2):
        q = a + 2 * b
        alice = outcome_bit(TWO_BY_TWO, flat, 0, a)
        bob = outcome_bit(TWO_BY_TWO, flat, 1, b)
        byte |= (alice + 2 * bob) << (2 * q)
    return byte


_LOCAL_BYTES: Tuple[int, ...] = tuple(_local_byte(flat) for flat in range(TWO_BY_TWO.cell_count))


def _byte_bits(byte: int, a: int, b: int) -> Tuple[int, int]:
    q = a + 2 * b
    return (byte >> (2 * q)) & 1, (byte >> (2 * q + 1)) & 1


def embed_local(rho: UnderlyingDist) -> FullHiddenVariableDist:
    """W(Λ) = ρ(λ) on the locality-consistent bytes, 0 elsewhere."""

    if rho.scenario != TWO_BY_TWO:
        raise InvalidScenarioError("embed_local is defined for n=2, m=2 only")
    weights: List[Number] = [zero(rho.mode)] * FullHiddenVariableDist.BYTE_COUNT
    for flat, weight in enumerate(rho.weights):
        weights[_LOCAL_BYTES[flat]] = weight
    return FullHiddenVariableDist(weights=tuple(weights), mode=rho.mode)


def reduce_local(
    w: FullHiddenVariableDist, tol: Optional[float] = None
) -> LocalReduction:
    """Recover ρ when W lives on the locality-consistent subspace.

    Otherwise report how much weight sits off that subspace.
    """

    on_subspace = set(_LOCAL_BYTES)
    off_mass = sum(
        (weight for byte, weight in enumerate(w.weights) if byte not in on_subspace),
        zero(w.mode),
    )
    threshold = 0.0 if w.mode is ArithmeticMode.RATIONAL else (FLOAT_TOLERANCE if tol is None else tol)
    if off_mass > threshold:
        logger.debug("reduce_local: off-subspace mass %s", off_mass)
        return LocalReduction(off_subspace_mass=off_mass)

    weights = [w.weights[byte] for byte in _LOCAL_BYTES]
    if w.mode is ArithmeticMode.FLOAT and off_mass:
        total = sum(weights)
        weights = [weight / total for weight in weights]
    rho = UnderlyingDist(scenario=TWO_BY_TWO, weights=tuple(weights), mode=w.mode)
    return LocalReduction(off_subspace_mass=off_mass, rho=rho)


def full_marginals(w: FullHiddenVariableDist) -> MarginalSet:
    """P_ab(A, B) as the sum of W over bytes with A_ab = A and B_ab = B."""

    tables = []
    for a, b in TWO_BY_TWO.setting_vectors():
        probs: List[Number] = [zero(w.mode)] * 4
        for byte, weight in enumerate(w.weights):
            if weight == 0:
                continue
            alice, bob = _byte_bits(byte, a, b)
            probs[TWO_BY_TWO.outcome_index((alice, bob))] += weight
        tables.append(
            MarginalTable(scenario=TWO_BY_TWO, settings=(a, b), probs=tuple(probs), mode=w.mode)
        )
    return MarginalSet(scenario=TWO_BY_TWO, tables=tuple(tables), mode=w.mode)


def random_rho(
    scenario: Scenario,
    rng: random.Random,
    mode: ArithmeticMode = ArithmeticMode.RATIONAL,
    *,
    sparsity: float = 0.0,
) -> UnderlyingDist:
    """Sample a distribution; ``sparsity`` is the chance a cell is forced to zero."""

    raw: List[int] = []
    for _ in range(scenario.cell_count):
        raw.append(0 if rng.random() < sparsity else rng.randint(0, 20))
    if not any(raw):
        raw[rng.randrange(scenario.cell_count)] = 1
    total = sum(raw)
    weights: Tuple[Number, ...]
    if mode is ArithmeticMode.RATIONAL:
        weights = tuple(Fraction(value, total) for value in raw)
    else:
        weights = tuple(value / total for value in raw)
    return UnderlyingDist(scenario=scenario, weights=weights, mode=mode)


__all__ = [
    "FactorizationReport",
    "FactorizationViolation",
    "FullHiddenVariableDist",
    "LocalReduction",
    "MarginalSet",
    "MarginalTable",
    "SingleSiteSet",
    "TWO_BY_TWO",
    "UnderlyingDist",
    "check_factorization",
    "embed_local",
    "full_marginals",
    "marginalize",
    "marginalize_all",
    "product_dist",
    "random_rho",
    "reduce_local",
]
