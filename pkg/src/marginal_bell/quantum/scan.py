"""Violation scans over measurement axes, the Hardy-state scan and the GHZ check."""
from __future__ import annotations

import dataclasses
import logging
import math
import string
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from marginal_bell.core import (
    FLOAT_TOLERANCE,
    InvalidStateError,
    SettingVector,
    UnsupportedFormError,
    get_config,
)
from marginal_bell.inequality import (
    GhzCorollary,
    LinearForm,
    certify,
    correlation,
    evaluate,
    ghz_corollary,
    n_party_hardy,
    zukowski_form,
)

from .config import ScanProfile, load_scan_profile
from .states import (
    MINUS_X_AXIS,
    MINUS_Y_AXIS,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    AxisChoice,
    BlochAxis,
    PureState,
    born_marginals,
    ghz,
    hardy_state,
)

logger = logging.getLogger(__name__)

MAX_SWEEPS = 50
MAX_REFINE_EVALUATIONS = 200_000
IMPROVEMENT = 1e-15


@dataclass(frozen=True, slots=True)
class ViolationReport:
    """Smallest value of ``form`` found over the scanned axes."""

    form: LinearForm
    best_value: float
    best_axes: AxisChoice
    grid_steps: int
    grid_points: int
    strategy: str
    refined: bool
    converged: bool

    @property
    def violated(self) -> bool:
        return self.best_value < -FLOAT_TOLERANCE


def algebraic_minimum(form: LinearForm) -> Fraction:
    """Lowest value any assignment of probabilities in [0, 1] could give."""

    return form.constant + sum((t.coefficient for t in form.negative_terms), Fraction(0))


def _resolve_profile(
    profile: Optional[str],
    grid_steps: Optional[int],
    full_sphere: Optional[bool],
    refine: Optional[bool],
) -> ScanProfile:
    config = get_config().scan
    if profile is None:
        resolved = dataclasses.replace(
            load_scan_profile(config.profile),
            grid_steps=config.grid_steps,
            refine_tolerance=config.refine_tolerance,
            max_grid_points=config.max_grid_points,
        )
        if config.full_sphere:
            resolved = dataclasses.replace(resolved, full_sphere=True)
    else:
        resolved = load_scan_profile(profile)
    if grid_steps is not None:
        resolved = dataclasses.replace(resolved, grid_steps=grid_steps)
    if full_sphere is not None:
        resolved = dataclasses.replace(resolved, full_sphere=full_sphere)
    if refine is not None:
        resolved = dataclasses.replace(resolved, refine=refine)
    if resolved.grid_steps < 2:
        raise ValueError(f"grid_steps must be at least 2, got {resolved.grid_steps}")
    return resolved


def candidate_axes(profile: ScanProfile) -> Tuple[BlochAxis, ...]:
    """Polar grid ``k pi / steps`` times the profile's azimuths; each pole appears once."""

    candidates: List[BlochAxis] = []
    for k in range(profile.grid_steps + 1):
        theta = k * math.pi / profile.grid_steps
        if k in (0, profile.grid_steps):
            candidates.append(BlochAxis(theta, 0.0))
            continue
        for phi in profile.phi_values():
            candidates.append(BlochAxis(theta, phi))
    return tuple(candidates)


def _setting_weights(form: LinearForm) -> Dict[SettingVector, np.ndarray]:
    n = form.scenario.parties
    weights: Dict[SettingVector, np.ndarray] = {}
    for item in form.terms:
        array = weights.setdefault(item.settings, np.zeros((2,) * n))
        array[item.outcomes] += float(item.coefficient)
    return weights


def _setting_tensor(psi: np.ndarray, eigen: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Weighted outcome sum for every combination of per-party candidate axes."""

    n = psi.ndim
    state = string.ascii_lowercase[:n]
    grid = string.ascii_uppercase[:n]
    outcome = string.ascii_lowercase[n : 2 * n]
    operands = ",".join(f"{grid[p]}{outcome[p]}{state[p]}" for p in range(n))
    amplitudes = np.einsum(
        f"{state},{operands}->{grid}{outcome}", psi, *([eigen] * n), optimize=True
    )
    return np.tensordot(np.abs(amplitudes) ** 2, weights, axes=n)


def _direct_objective(form: LinearForm, state: PureState) -> Callable[[AxisChoice], float]:
    def objective(axes: AxisChoice) -> float:
        return float(evaluate(form, born_marginals(state, axes)))

    return objective


def _choice(indices: Sequence[int], candidates: Sequence[BlochAxis], m: int) -> AxisChoice:
    axes = [candidates[g] for g in indices]
    return AxisChoice(tuple(tuple(axes[p * m : (p + 1) * m]) for p in range(len(axes) // m)))


def _exhaustive(
    constant: float, tensors: Dict[SettingVector, np.ndarray], n: int, m: int, size: int
) -> Tuple[Tuple[int, ...], float]:
    values = np.full((size,) * (n * m), constant)
    for settings, tensor in tensors.items():
        shape = [1] * (n * m)
        for party, setting in enumerate(settings):
            shape[party * m + setting] = size
        values = values + tensor.reshape(shape)
    flat = int(np.argmin(values))
    index = tuple(int(i) for i in np.unravel_index(flat, values.shape))
    return index, float(values[index])


def _sweep(
    value_at: Callable[[Sequence[int]], float], dims: int, size: int
) -> Tuple[Tuple[int, ...], float, int]:
    """Coordinate sweeps from every all-equal start; best result wins, ties go to the smaller index."""

    best_index: Optional[Tuple[int, ...]] = None
    best_value = math.inf
    evaluations = 0
    for start in range(size):
        index = [start] * dims
        current = value_at(index)
        evaluations += 1
        for _ in range(MAX_SWEEPS):
            improved = False
            for axis in range(dims):
                trial = list(index)
                for g in range(size):
                    trial[axis] = g
                    value = value_at(trial)
                    evaluations += 1
                    if value < current - IMPROVEMENT:
                        current, index, improved = value, list(trial), True
            if not improved:
                break
        key = tuple(index)
        if current < best_value - IMPROVEMENT or (
            abs(current - best_value) <= IMPROVEMENT and best_index is not None and key < best_index
        ):
            best_index, best_value = key, current
    assert best_index is not None
    return best_index, best_value, evaluations


def _move(axis: BlochAxis, parameter: str, delta: float) -> BlochAxis:
    if parameter == "theta":
        return BlochAxis.normalized(axis.theta + delta, axis.phi)
    return BlochAxis(axis.theta, axis.phi + delta)


def refine_axes(
    objective: Callable[[AxisChoice], float],
    axes: AxisChoice,
    start_step: float,
    tolerance: float,
) -> Tuple[AxisChoice, float, bool]:
    """Coordinate descent over every (θ, φ), halving the step when no move helps."""

    current = objective(axes)
    step = start_step
    evaluations = 0
    while step >= tolerance:
        improved = False
        for party in range(axes.parties):
            for setting in range(axes.settings):
                for parameter in ("theta", "phi"):
                    for delta in (step, -step):
                        moved = axes.replace(
                            party, setting, _move(axes.axis(party, setting), parameter, delta)
                        )
                        value = objective(moved)
                        evaluations += 1
                        if value < current - IMPROVEMENT:
                            axes, current, improved = moved, value, True
                            break
        if evaluations >= MAX_REFINE_EVALUATIONS:
            logger.warning("refinement stopped after %d evaluations", evaluations)
            return axes, current, False
        if not improved:
            step /= 2
    return axes, current, True


def violation_scan(
    form: LinearForm,
    state: PureState,
    grid_steps: Optional[int] = None,
    *,
    profile: Optional[str] = None,
    full_sphere: Optional[bool] = None,
    refine: Optional[bool] = None,
) -> ViolationReport:
    """Minimize ``form`` over Born-rule marginals of ``state``.

    Every axis ranges over the same candidate set. When the full product grid
    fits ``max_grid_points`` it is evaluated at once and the first minimum in
    index order wins; otherwise coordinate sweeps stand in for it. The grid
    optimum is then refined continuously.

    Only forms ``certify`` proves are scanned; anything else raises
    :class:`UnsupportedFormError`.
    """

    certificate = certify(form)
    if not certificate.proven:
        raise UnsupportedFormError(
            f"{form.name or form.describe()} is not a local inequality "
            f"(negative at cell {certificate.witness})"
        )
    settings = _resolve_profile(profile, grid_steps, full_sphere, refine)
    scenario = form.scenario
    n, m = scenario.parties, scenario.settings
    if state.parties != n:
        raise InvalidStateError(f"form has {n} parties but state has {state.parties} qubits")

    candidates = candidate_axes(settings)
    size = len(candidates)
    eigen = np.stack([axis.eigenvectors().conj() for axis in candidates])
    direct = _direct_objective(form, state)
    constant = float(form.constant)
    weights = _setting_weights(form)

    if size**n <= settings.max_grid_points:
        psi = state.tensor()
        tensors = {s: _setting_tensor(psi, eigen, w) for s, w in weights.items()}

        def value_at(index: Sequence[int]) -> float:
            total = constant
            for s, tensor in tensors.items():
                total += float(tensor[tuple(index[p * m + s[p]] for p in range(n))])
            return total

        if size ** (n * m) <= settings.max_grid_points:
            best_index, best_value = _exhaustive(constant, tensors, n, m, size)
            strategy, evaluated = "exhaustive", size ** (n * m)
        else:
            best_index, best_value, evaluated = _sweep(value_at, n * m, size)
            strategy = "sweep"
    else:
        best_index, best_value, evaluated = _sweep(
            lambda index: direct(_choice(index, candidates, m)), n * m, size
        )
        strategy = "sweep"

    best_axes = _choice(best_index, candidates, m)
    logger.debug(
        "%s grid (%s, %d points): best %.6f", strategy, form.name or "form", evaluated, best_value
    )

    converged = False
    if settings.refine:
        best_axes, best_value, converged = refine_axes(
            direct, best_axes, math.pi / settings.grid_steps, settings.refine_tolerance
        )

    return ViolationReport(
        form=form,
        best_value=best_value,
        best_axes=best_axes,
        grid_steps=settings.grid_steps,
        grid_points=evaluated,
        strategy=strategy,
        refined=settings.refine,
        converged=converged,
    )


@dataclass(frozen=True, slots=True)
class HardyScanReport:
    """Largest P_00(0,0) over real states with the three Hardy zeros built in."""

    probability: float
    coefficients: Tuple[float, float, float]
    state: PureState
    axes: AxisChoice
    zero_residual: float
    form_value: float
    grid_steps: int


def _real_axis(c: float, s: float) -> BlochAxis:
    """Axis whose outcome-0 eigenvector is the real qubit ``c|0> + s|1>``."""

    if c < 0 or (c == 0 and s < 0):
        c, s = -c, -s
    t = math.atan2(s, c)
    return BlochAxis(2 * abs(t), 0.0 if t >= 0 else math.pi)


def hardy_probability(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
    """P_00(0,0) for ``x|00> + y|01> + z|10>`` with the zero-forcing bases."""

    return (x * y * z) ** 2 / ((x**2 + y**2) * (x**2 + z**2))


def hardy_scan(grid_steps: Optional[int] = None) -> HardyScanReport:
    """Scan the unit octant of (x, y, z) and rebuild the optimum as state plus axes.

    Setting 1 of both parties measures z. Bob's setting 0 keeps the vector
    orthogonal to ``x|0> + y|1>`` as outcome 0 and Alice's setting 0 the vector
    orthogonal to ``x|0> + z|1>``, which zeroes P_10(0,0), P_01(0,0) and P_11(1,1).
    """

    steps = get_config().reproduce.hardy_grid_steps if grid_steps is None else grid_steps
    if steps < 2:
        raise ValueError(f"grid_steps must be at least 2, got {steps}")
    angles = (np.arange(steps) + 0.5) * (math.pi / 2) / steps
    u, v = np.meshgrid(angles, angles, indexing="ij")
    x = np.cos(u)
    y = np.sin(u) * np.cos(v)
    z = np.sin(u) * np.sin(v)
    grid = hardy_probability(x, y, z)
    i, j = np.unravel_index(int(np.argmax(grid)), grid.shape)
    best = (float(x[i, j]), float(y[i, j]), float(z[i, j]))

    state = hardy_state(*best)
    bx, by, bz = best
    alice = (_real_axis(-bz, bx), Z_AXIS)
    bob = (_real_axis(-by, bx), Z_AXIS)
    axes = AxisChoice((alice, bob))
    ms = born_marginals(state, axes)
    residual = max(
        float(ms.prob((1, 0), (0, 0))),
        float(ms.prob((0, 1), (0, 0))),
        float(ms.prob((1, 1), (1, 1))),
    )
    probability = float(ms.prob((0, 0), (0, 0)))
    logger.debug("hardy scan: P_00(0,0) = %.6f, zero residual %.2e", probability, residual)
    return HardyScanReport(
        probability=probability,
        coefficients=best,
        state=state,
        axes=axes,
        zero_residual=residual,
        form_value=float(evaluate(n_party_hardy(2), ms)),
        grid_steps=steps,
    )


# Alice and Bob: setting 0 = y, setting 1 = x; Chris: setting 0 = -y, setting 1 = -x.
GHZ_AXES = AxisChoice(
    (
        (Y_AXIS, X_AXIS),
        (Y_AXIS, X_AXIS),
        (MINUS_Y_AXIS, MINUS_X_AXIS),
    )
)

ZUKOWSKI_BOUND = -2.0


@dataclass(frozen=True, slots=True)
class GhzReport:
    correlations: Tuple[Tuple[str, float], ...]
    lhs: float
    form_value: float
    corollary: GhzCorollary
    axes: AxisChoice
    bound: float = ZUKOWSKI_BOUND

    @property
    def violated(self) -> bool:
        return self.lhs < self.bound - FLOAT_TOLERANCE


def ghz_check(state: Optional[PureState] = None, axes: AxisChoice = GHZ_AXES) -> GhzReport:
    """``C_111 - C_001 - C_010 - C_100`` on the GHZ state against the local bound -2."""

    ms = born_marginals(state or ghz(3), axes)
    labels = ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1))
    values = {s: float(correlation(ms.table(s))) for s in labels}
    lhs = values[(1, 1, 1)] - values[(0, 0, 1)] - values[(0, 1, 0)] - values[(1, 0, 0)]
    return GhzReport(
        correlations=tuple(("C_" + "".join(map(str, s)), values[s]) for s in labels),
        lhs=lhs,
        form_value=float(evaluate(zukowski_form(), ms)),
        corollary=ghz_corollary(),
        axes=axes,
    )


__all__ = [
    "GHZ_AXES",
    "GhzReport",
    "HardyScanReport",
    "ViolationReport",
    "ZUKOWSKI_BOUND",
    "algebraic_minimum",
    "candidate_axes",
    "ghz_check",
    "hardy_probability",
    "hardy_scan",
    "refine_axes",
    "violation_scan",
]
