"""Angle maximization, parameter sweeps and violation thresholds.

Every correlator is a sinusoid K + Re(C e^{i theta}) in any single angle, so
coordinate updates are exact: K and C fall out of three evaluations at
theta in {0, pi/2, pi} and the per-coordinate optimum is -arg(C) or its
antipode.  A coarse grid seeds the ascent so it starts in the right basin.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .bell_ops import AngleSet, bell_side_matrix
from .chsh import (
    ChshReport,
    TSIRELSON_BOUND,
    canonical_preset,
    chsh,
    coherent_damping,
    correlator_closed_form,
)
from .fock import DensityMatrix, FockSpace, StateVector
from .states import (
    CoherentSuperposition,
    GenericPair,
    Noon,
    StateSpec,
    TwoModeSqueezed,
    Werner,
    build_state,
    canonical_bell_pairs,
    default_space,
)

TWO_PI = 2.0 * math.pi

_SPEC_TYPES = (GenericPair, Noon, CoherentSuperposition, TwoModeSqueezed, Werner)

ASCENT_TOL = 1e-12
MAX_SWEEPS = 200


class BracketingError(ValueError):
    """The objective does not change sign on the requested interval."""


@dataclass(frozen=True)
class OptimizationResult:
    best_angles: AngleSet
    best_abs_chsh: float
    iterations: int
    converged: bool
    objective_history: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {
            "best_angles": self.best_angles.to_dict(),
            "best_abs_chsh": self.best_abs_chsh,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _correlator_fn(target, method: str, space: Optional[FockSpace]):
    """A fast E(alpha, beta) evaluator for the chosen route."""
    if method == "closed_form":
        if not isinstance(target, _SPEC_TYPES):
            raise ValueError("the closed-form method needs a state spec")
        spec = target
        return lambda a, b: correlator_closed_form(spec, a, b)
    if method != "matrix":
        raise ValueError(f"method must be 'matrix' or 'closed_form', got {method!r}")

    if isinstance(target, _SPEC_TYPES):
        if space is None:
            space = default_space(target)
        state = build_state(target, space)
        pair_a, pair_b = canonical_bell_pairs(target)
    else:
        state = target
        pair_a, pair_b = (0, 1), (0, 1)

    if isinstance(state, StateVector):
        psi = state.grid()
        dim_a, dim_b = psi.shape

        def evaluate(a: float, b: float) -> float:
            mat_a = bell_side_matrix(dim_a, pair_a, a)
            mat_b = bell_side_matrix(dim_b, pair_b, b)
            return float(np.vdot(psi, mat_a @ psi @ mat_b.T).real)

    elif isinstance(state, DensityMatrix):
        rho = state.matrix
        dim_a, dim_b = state.space.dim_a, state.space.dim_b

        def evaluate(a: float, b: float) -> float:
            full = np.kron(
                bell_side_matrix(dim_a, pair_a, a), bell_side_matrix(dim_b, pair_b, b)
            )
            return float(np.einsum("ij,ji->", full, rho).real)

    else:
        raise TypeError(f"expected StateVector or DensityMatrix, got {type(state).__name__}")
    return evaluate


def _combination(efun, a1, a2, b1, b2) -> float:
    return efun(a1, b1) + efun(a2, b1) + efun(a1, b2) - efun(a2, b2)


def optimize_angles(
    target: Union[StateSpec, StateVector, DensityMatrix],
    method: str = "closed_form",
    seed_grid_resolution: int = 8,
    space: Optional[FockSpace] = None,
    max_sweeps: int = MAX_SWEEPS,
) -> OptimizationResult:
    """Maximize |CHSH| over the four angles by grid seeding plus exact ascent."""
    if seed_grid_resolution < 4:
        raise ValueError(f"grid resolution must be >= 4, got {seed_grid_resolution}")
    efun = _correlator_fn(target, method, space)

    g = int(seed_grid_resolution)
    thetas = TWO_PI * np.arange(g) / g
    table = np.empty((g, g))
    for i, a in enumerate(thetas):
        for k, b in enumerate(thetas):
            table[i, k] = efun(a, b)
    combo = (
        table[:, None, :, None]
        + table[None, :, :, None]
        + table[:, None, None, :]
        - table[None, :, None, :]
    )
    # first flat maximum = lexicographically smallest maximizing angle tuple
    seed = np.unravel_index(int(np.argmax(np.abs(combo))), combo.shape)
    angles = [float(thetas[i]) for i in seed]
    best = abs(float(combo[seed]))

    history = [best]
    converged = False
    sweeps = 0
    for sweeps in range(1, max_sweeps + 1):
        previous = best
        for coord in range(4):
            def at(theta: float) -> float:
                probe = list(angles)
                probe[coord] = theta
                return _combination(efun, *probe)

            s0, s90, s180 = at(0.0), at(0.5 * math.pi), at(math.pi)
            offset = 0.5 * (s0 + s180)
            c = complex(0.5 * (s0 - s180), offset - s90)
            theta_peak = (-math.atan2(c.imag, c.real)) % TWO_PI
            hi, lo = offset + abs(c), offset - abs(c)
            if abs(hi) >= abs(lo):
                angles[coord] = theta_peak
                best = abs(hi)
            else:
                angles[coord] = (theta_peak + math.pi) % TWO_PI
                best = abs(lo)
        history.append(best)
        if best - previous < ASCENT_TOL:
            converged = True
            break

    best_angles = AngleSet(*angles)
    final = abs(_combination(efun, *angles))
    return OptimizationResult(
        best_angles=best_angles,
        best_abs_chsh=final,
        iterations=sweeps,
        converged=converged,
        objective_history=tuple(history),
    )


def optimal_chsh(family: str, parameter: float) -> float:
    """Closed-form maximum of |CHSH| over the angles.

    Parameters as in :func:`pairchsh.chsh.violation_window`: |z|^2 for the
    coherent family, eta for squeezed, w for werner.  The squeezed maximum
    2 p^4 + 4 sqrt(2) p (1 - p^2) coincides with the sum-preset value.
    """
    p = float(parameter)
    if family == "coherent_superposition":
        return coherent_damping(p) * TSIRELSON_BOUND
    if family == "two_mode_squeezed":
        return 2.0 * p**4 + 4.0 * math.sqrt(2.0) * p * (1.0 - p * p)
    if family == "werner":
        return p * TSIRELSON_BOUND
    raise ValueError(f"no closed-form optimum for family {family!r}")


def find_threshold(family: str, lo: float, hi: float, tolerance: float = 1e-10) -> float:
    """Bisect the closed-form optimal CHSH for the parameter where it crosses 2."""
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    lo, hi = float(lo), float(hi)
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    g_lo = optimal_chsh(family, lo) - 2.0
    g_hi = optimal_chsh(family, hi) - 2.0
    if g_lo == 0.0:
        return lo
    if g_hi == 0.0:
        return hi
    if (g_lo > 0) == (g_hi > 0):
        raise BracketingError(
            f"optimal CHSH - 2 does not change sign on [{lo}, {hi}] for {family}"
        )
    for _ in range(200):
        if hi - lo <= tolerance:
            break
        mid = 0.5 * (lo + hi)
        g_mid = optimal_chsh(family, mid) - 2.0
        if g_mid == 0.0:
            return mid
        if (g_mid > 0) == (g_lo > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


_SWEEP_DOMAINS = {
    # family -> (parameter label, lower, upper, lower-open, upper-open)
    "two_mode_squeezed": ("eta", 0.0, 1.0, True, True),
    "werner": ("w", 0.0, 1.0, True, False),
    "coherent_superposition": ("z_abs", 0.0, math.inf, False, True),
}


def _sweep_spec(family: str, value: float) -> StateSpec:
    if family == "two_mode_squeezed":
        return TwoModeSqueezed(value)
    if family == "werner":
        return Werner(value)
    return CoherentSuperposition(complex(value, 0.0))


@dataclass(frozen=True)
class SweepRow:
    parameter: float
    best_abs_chsh: float
    violation: bool
    best_angles: AngleSet
    report: ChshReport


def parameter_sweep(
    family: str,
    param_from: float,
    param_to: float,
    steps: int,
    per_point_optimize: bool = False,
    method: str = "closed_form",
    space: Optional[FockSpace] = None,
    angles: Optional[AngleSet] = None,
    seed_grid_resolution: int = 8,
) -> list[SweepRow]:
    """Uniform sweep of a family parameter.

    Sweepable parameters: eta (two_mode_squeezed), w (werner) and |z|
    (coherent_superposition).  Each point is evaluated either at fixed angles
    (the family's canonical preset unless ``angles`` is given) or at its own
    optimized angles.
    """
    if family not in _SWEEP_DOMAINS:
        raise ValueError(f"sweepable families are {sorted(_SWEEP_DOMAINS)}, got {family!r}")
    if steps < 2:
        raise ValueError(f"a sweep needs at least 2 steps, got {steps}")
    _, lower, upper, lower_open, upper_open = _SWEEP_DOMAINS[family]
    lo, hi = float(param_from), float(param_to)
    if not lo <= hi:
        raise ValueError(f"need param_from <= param_to, got [{lo}, {hi}]")
    below = lo < lower or (lower_open and lo == lower)
    above = hi > upper or (upper_open and hi == upper)
    if below or above:
        raise ValueError(f"range [{lo}, {hi}] outside the {family} domain")

    rows = []
    for value in np.linspace(lo, hi, int(steps)):
        value = float(value)
        spec = _sweep_spec(family, value)
        if per_point_optimize:
            result = optimize_angles(
                spec, method, seed_grid_resolution=seed_grid_resolution, space=space
            )
            point_angles = result.best_angles
            report = chsh(spec, point_angles, method, space=space)
            best = result.best_abs_chsh
        else:
            point_angles = angles if angles is not None else canonical_preset(spec)
            report = chsh(spec, point_angles, method, space=space)
            best = abs(report.chsh_value)
        rows.append(
            SweepRow(
                parameter=value,
                best_abs_chsh=best,
                violation=best > 2.0,
                best_angles=point_angles,
                report=report,
            )
        )
    return rows
