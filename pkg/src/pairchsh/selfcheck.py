"""Operator-algebra self checks: su(2) relations, dichotomy, side commutation."""

from __future__ import annotations

import numpy as np

from .bell_ops import BellOpSpec, bell_operator, commuting_sides_check, dichotomy_check
from .fock import FockSpace, Side
from .pseudospin import (
    UnitVector,
    pair_count,
    pair_spin,
    spin_dot,
    total_spin,
)

SU2_TOL = 1e-13
DICHOTOMY_TOL = 1e-12

_CYCLES = (("x", "y", "z"), ("y", "z", "x"), ("z", "x", "y"))


def _comm(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b - b @ a


def _su2_residual(dim: int) -> float:
    worst = 0.0
    for n in range(pair_count(dim)):
        mats = {ax: pair_spin(dim, n, ax).matrix for ax in "xyz"}
        for a, b, c in _CYCLES:
            res = np.abs(_comm(mats[a], mats[b]) - 2j * mats[c]).max()
            worst = max(worst, float(res))
    return worst


def _total_residual(dim: int) -> float:
    mats = {ax: total_spin(dim, ax).matrix for ax in "xyz"}
    worst = 0.0
    for a, b, c in _CYCLES:
        res = np.abs(_comm(mats[a], mats[b]) - 2j * mats[c]).max()
        worst = max(worst, float(res))
    return worst


def _cross_pair_residual(dim: int) -> float:
    worst = 0.0
    count = pair_count(dim)
    for m in range(count):
        for n in range(m + 1, count):
            for ax_m in "xyz":
                for ax_n in "xyz":
                    res = np.abs(
                        _comm(pair_spin(dim, m, ax_m).matrix, pair_spin(dim, n, ax_n).matrix)
                    ).max()
                    worst = max(worst, float(res))
    return worst


def _spin_dot_residual(dim: int, rng: np.random.Generator, samples: int) -> float:
    """(u . s)^2 restricted to the pair block must be the identity."""
    worst = 0.0
    for _ in range(samples):
        vec = rng.normal(size=3)
        vec /= np.linalg.norm(vec)
        n = int(rng.integers(0, pair_count(dim)))
        sq = spin_dot(dim, n, UnitVector(*vec)).matrix
        sq = sq @ sq
        block = sq[np.ix_([2 * n, 2 * n + 1], [2 * n, 2 * n + 1])]
        worst = max(worst, float(np.abs(block - np.eye(2)).max()))
    return worst


def algebra_report(space: FockSpace, samples: int = 32, seed: int = 0) -> dict:
    """Residual summary for the operator constructions on ``space``.

    Runs the su(2) relations per pair and for the summed operators, cross-pair
    commutation, squared direction contractions, and sampled measurement
    operators (dichotomy plus cross-side commutation).
    """
    rng = np.random.default_rng(seed)
    dims = sorted({space.dim_a, space.dim_b})
    su2 = max(_su2_residual(d) for d in dims)
    total = max(_total_residual(d) for d in dims)
    cross = max(_cross_pair_residual(d) for d in dims)
    spin_sq = max(_spin_dot_residual(d, rng, samples) for d in dims)

    dichotomy = 0.0
    commuting = 0.0
    for _ in range(samples):
        pair_a = tuple(rng.choice(space.dim_a, size=2, replace=False))
        pair_b = tuple(rng.choice(space.dim_b, size=2, replace=False))
        angle_a, angle_b = rng.uniform(0.0, 2.0 * np.pi, size=2)
        op_a = bell_operator(space, BellOpSpec(Side.A, pair_a, angle_a))
        op_b = bell_operator(space, BellOpSpec(Side.B, pair_b, angle_b))
        dichotomy = max(dichotomy, dichotomy_check(op_a).max_residual)
        dichotomy = max(dichotomy, dichotomy_check(op_b).max_residual)
        commuting = max(commuting, commuting_sides_check(op_a, op_b))

    passed = (
        su2 <= SU2_TOL
        and total <= SU2_TOL
        and cross <= SU2_TOL
        and spin_sq <= DICHOTOMY_TOL
        and dichotomy <= DICHOTOMY_TOL
        and commuting <= SU2_TOL
    )
    return {
        "dims": [space.dim_a, space.dim_b],
        "samples": samples,
        "pair_su2_residual": su2,
        "total_su2_residual": total,
        "cross_pair_residual": cross,
        "spin_dot_square_residual": spin_sq,
        "dichotomy_residual": dichotomy,
        "commuting_sides_residual": commuting,
        "all_passed": bool(passed),
    }
