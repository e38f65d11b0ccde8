"""Pauli-type spin operators on mode pairs of a truncated Fock side.

The canonical pairing groups the number basis as (|2n>, |2n+1>); each pair
carries an su(2) triple.  The factories also accept an arbitrary distinct
mode pair (p, q), of which the canonical pairing is the special case
q = p + 1 with even p.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import ContractError, DimensionError, LinOp, Side

UNIT_TOL = 1e-12

AXES = ("x", "y", "z")


@dataclass(frozen=True)
class UnitVector:
    """Real direction with unit Euclidean norm (tolerance 1e-12)."""

    ux: float
    uy: float
    uz: float

    def __post_init__(self):
        norm_sq = self.ux**2 + self.uy**2 + self.uz**2
        if not math.isfinite(norm_sq) or abs(norm_sq - 1.0) > UNIT_TOL:
            raise ContractError(f"direction must be unit length, got |u|^2 = {norm_sq!r}")


def _checked_pair(dim: int, modes) -> tuple[int, int]:
    p, q = (int(m) for m in modes)
    if p == q:
        raise ValueError(f"mode pair must be two distinct modes, got ({p}, {q})")
    if not (0 <= p < dim and 0 <= q < dim):
        raise IndexError(f"mode pair ({p}, {q}) outside side dimension {dim}")
    return p, q


def spin_on_modes(dim: int, modes, axis: str, side: Side = Side.A) -> LinOp:
    """Pauli x/y/z embedded on the two-dimensional block spanned by ``modes``.

    The z matrix carries +1 on the first listed mode; together with the x and
    y flips this orientation closes the algebra [s_x, s_y] = 2i s_z (and its
    cyclic companions) on every pair block.
    """
    p, q = _checked_pair(dim, modes)
    m = np.zeros((dim, dim), dtype=np.complex128)
    if axis == "x":
        m[q, p] = 1.0
        m[p, q] = 1.0
    elif axis == "y":
        m[q, p] = 1.0j
        m[p, q] = -1.0j
    elif axis == "z":
        m[p, p] = 1.0
        m[q, q] = -1.0
    else:
        raise ValueError(f"axis must be one of {AXES}, got {axis!r}")
    return LinOp(side, m)


def pair_spin(dim: int, n: int, axis: str, side: Side = Side.A) -> LinOp:
    """Spin operator of the canonical pair (|2n>, |2n+1>)."""
    if n < 0 or 2 * n + 1 >= dim:
        raise IndexError(f"pair index {n} outside side dimension {dim}")
    return spin_on_modes(dim, (2 * n, 2 * n + 1), axis, side)


def pair_count(dim: int) -> int:
    if dim < 2 or dim % 2:
        raise DimensionError(f"side dimension must be even and >= 2, got {dim}")
    return dim // 2


def total_spin(dim: int, axis: str, side: Side = Side.A) -> LinOp:
    """Sum of the canonical pair spins over all complete pairs."""
    total = np.zeros((dim, dim), dtype=np.complex128)
    for n in range(pair_count(dim)):
        total += pair_spin(dim, n, axis, side).matrix
    return LinOp(side, total)


def spin_dot_on_modes(dim: int, modes, u: UnitVector, side: Side = Side.A) -> LinOp:
    """u . s on an arbitrary mode pair; Hermitian and involutive on the block."""
    if not isinstance(u, UnitVector):
        u = UnitVector(*u)
    m = (
        u.ux * spin_on_modes(dim, modes, "x", side).matrix
        + u.uy * spin_on_modes(dim, modes, "y", side).matrix
        + u.uz * spin_on_modes(dim, modes, "z", side).matrix
    )
    return LinOp(side, m)


def spin_dot(dim: int, n: int, u: UnitVector, side: Side = Side.A) -> LinOp:
    """u . s for the canonical pair (|2n>, |2n+1>)."""
    if n < 0 or 2 * n + 1 >= dim:
        raise IndexError(f"pair index {n} outside side dimension {dim}")
    return spin_dot_on_modes(dim, (2 * n, 2 * n + 1), u, side)


def rest_identity(dim: int, pair, side: Side = Side.A) -> LinOp:
    """Diagonal identity on every mode except the two listed ones."""
    p, q = _checked_pair(dim, pair)
    diag = np.ones(dim, dtype=np.complex128)
    diag[p] = 0.0
    diag[q] = 0.0
    return LinOp(side, np.diag(diag))
