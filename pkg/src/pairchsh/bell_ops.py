"""Dichotomic measurement operators that act on a single mode pair.

A Bell operator for pair (p, q) at angle t maps
|p> -> e^{it}|q>, |q> -> e^{-it}|p> and leaves every other mode alone.
It is Hermitian, involutive and unitary, so its eigenvalues are +-1, and
operators built for opposite sides commute exactly once lifted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .fock import ContractError, DimensionError, FockSpace, LinOp, Side, lift
from .pseudospin import _checked_pair

DICHOTOMY_TOL = 1e-12

# above this matrix dimension the residual checks switch to sparse products
_SPARSE_CUTOFF = 128


@dataclass(frozen=True)
class AngleSet:
    """The four measurement angles (alpha_1, alpha_2, beta_1, beta_2), radians."""

    alpha1: float
    alpha2: float
    beta1: float
    beta2: float

    def __post_init__(self):
        for name in ("alpha1", "alpha2", "beta1", "beta2"):
            val = float(getattr(self, name))
            if not math.isfinite(val):
                raise ContractError(f"angle {name} must be finite, got {val!r}")
            object.__setattr__(self, name, val)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha1, self.alpha2, self.beta1, self.beta2)

    def to_dict(self) -> dict:
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "beta1": self.beta1,
            "beta2": self.beta2,
        }


# Named angle presets exposed by the CLI.  The plain preset maximizes CHSH
# combinations whose correlators depend on alpha - beta; the -sq variant is
# the matching choice for correlators that depend on alpha + beta.
ANGLE_PRESETS: dict[str, AngleSet] = {
    "paper-choice": AngleSet(0.0, math.pi / 2, math.pi / 4, -math.pi / 4),
    "paper-choice-sq": AngleSet(0.0, math.pi / 2, -math.pi / 4, math.pi / 4),
}


@dataclass(frozen=True)
class BellOpSpec:
    """One measurement operator: side, acted-on mode pair, and angle."""

    side: Side
    pair: tuple[int, int]
    angle: float

    def __post_init__(self):
        side = Side(self.side)
        if side == Side.FULL:
            raise ValueError("a Bell operator spec must name side A or B")
        object.__setattr__(self, "side", side)
        p, q = (int(m) for m in self.pair)
        if p == q:
            raise ValueError(f"mode pair must be distinct, got ({p}, {q})")
        if p < 0 or q < 0:
            raise IndexError(f"mode pair must be nonnegative, got ({p}, {q})")
        object.__setattr__(self, "pair", (p, q))
        angle = float(self.angle)
        if not math.isfinite(angle):
            raise ContractError(f"angle must be finite, got {angle!r}")
        object.__setattr__(self, "angle", angle)


def bell_side_matrix(dim: int, pair, angle: float) -> np.ndarray:
    """One-side matrix e^{it}|q><p| + e^{-it}|p><q| + identity elsewhere."""
    p, q = _checked_pair(dim, pair)
    m = np.eye(dim, dtype=np.complex128)
    m[p, p] = 0.0
    m[q, q] = 0.0
    phase = complex(math.cos(angle), math.sin(angle))
    m[q, p] = phase
    m[p, q] = phase.conjugate()
    return m


def bell_operator(space: FockSpace, spec: BellOpSpec) -> LinOp:
    """The spec's one-side matrix lifted to the full bipartite space."""
    dim = space.side_dim(spec.side)
    side_matrix = bell_side_matrix(dim, spec.pair, spec.angle)
    return lift(LinOp(spec.side, side_matrix), space)


@dataclass(frozen=True)
class DichotomyReport:
    hermitian: bool
    squares_to_identity: bool
    max_residual: float


def _max_abs_sparse(mat: sp.spmatrix) -> float:
    data = mat.tocsr().data
    return float(np.abs(data).max()) if data.size else 0.0


def dichotomy_check(op: LinOp) -> DichotomyReport:
    """Report Hermiticity and involution residuals of an operator."""
    m = op.matrix
    dim = m.shape[0]
    if dim > _SPARSE_CUTOFF:
        s = sp.csr_matrix(m)
        herm_res = _max_abs_sparse(s - s.conjugate().T)
        sq_res = _max_abs_sparse(s @ s - sp.identity(dim, dtype=np.complex128, format="csr"))
    else:
        herm_res = float(np.abs(m - m.conj().T).max())
        sq_res = float(np.abs(m @ m - np.eye(dim)).max())
    return DichotomyReport(
        hermitian=herm_res <= DICHOTOMY_TOL,
        squares_to_identity=sq_res <= DICHOTOMY_TOL,
        max_residual=max(herm_res, sq_res),
    )


def commuting_sides_check(op_a: LinOp, op_b: LinOp) -> float:
    """Max-norm of [op_a, op_b] for two operators on the full space."""
    if op_a.side != Side.FULL or op_b.side != Side.FULL:
        raise DimensionError("commuting_sides_check expects lifted operators")
    if op_a.dim != op_b.dim:
        raise DimensionError(
            f"operators act on different spaces: {op_a.dim} vs {op_b.dim}"
        )
    if op_a.dim > _SPARSE_CUTOFF:
        a = sp.csr_matrix(op_a.matrix)
        b = sp.csr_matrix(op_b.matrix)
        return _max_abs_sparse(a @ b - b @ a)
    a = op_a.matrix
    b = op_b.matrix
    return float(np.abs(a @ b - b @ a).max())
