"""Dense complex linear algebra on truncated bipartite number-state spaces.

Basis convention used everywhere in this package: the product basis element
|x, y> (mode x on side a, mode y on side b) lives at flat index
``x * dim_b + y``, i.e. the side-b index runs fastest.  Both side dimensions
are required to be even so that every retained mode belongs to a complete
(|2n>, |2n+1>) pair.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass
from enum import Enum

import numpy as np

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-10
EIGENVALUE_FLOOR = -1e-10


class DimensionError(ValueError):
    """Operand shapes or declared tensor factors do not line up."""


class ContractError(ValueError):
    """A numerical contract (normalization, Hermiticity, ...) is violated."""


class Side(str, Enum):
    A = "A"
    B = "B"
    FULL = "FULL"


def _as_frozen_complex(values, shape, what: str) -> np.ndarray:
    arr = np.array(values, dtype=np.complex128)
    if arr.shape != shape:
        raise DimensionError(f"{what} must have shape {shape}, got {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FockSpace:
    """Truncated bipartite space keeping modes |0>..|dim-1> on each side."""

    dim_a: int
    dim_b: int

    def __post_init__(self):
        for name, d in (("dim_a", self.dim_a), ("dim_b", self.dim_b)):
            if not isinstance(d, (int, np.integer)) or d < 2 or d % 2:
                raise DimensionError(f"{name} must be an even integer >= 2, got {d!r}")
        object.__setattr__(self, "dim_a", int(self.dim_a))
        object.__setattr__(self, "dim_b", int(self.dim_b))

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def side_dim(self, side: Side) -> int:
        if side == Side.A:
            return self.dim_a
        if side == Side.B:
            return self.dim_b
        return self.dim

    def index(self, x: int, y: int) -> int:
        """Flat product-basis index of |x, y>."""
        if not (0 <= x < self.dim_a and 0 <= y < self.dim_b):
            raise IndexError(
                f"mode pair ({x}, {y}) outside a {self.dim_a}x{self.dim_b} space"
            )
        return x * self.dim_b + y


@dataclass(frozen=True)
class StateVector:
    """Pure state over the product basis, with the truncation mass tracked.

    ``norm_deficit`` is the probability mass cut off by the mode truncation;
    builders guarantee ``<s|s> + norm_deficit == 1``.  States are never
    renormalized, which keeps expectation values honest approximations with a
    computable error bound.
    """

    space: FockSpace
    amplitudes: np.ndarray
    norm_deficit: float = 0.0
    check: InitVar[bool] = True

    def __post_init__(self, check: bool):
        amp = _as_frozen_complex(self.amplitudes, (self.space.dim,), "amplitudes")
        object.__setattr__(self, "amplitudes", amp)
        object.__setattr__(self, "norm_deficit", float(self.norm_deficit))
        if self.norm_deficit < 0:
            raise ContractError("norm_deficit must be nonnegative")
        if check:
            total = float(np.vdot(amp, amp).real) + self.norm_deficit
            if abs(total - 1.0) > NORM_TOL:
                raise ContractError(
                    f"|amplitudes|^2 + norm_deficit = {total!r}, "
                    f"expected 1 within {NORM_TOL}"
                )

    def grid(self) -> np.ndarray:
        """Amplitudes reshaped to a (dim_a, dim_b) array."""
        return self.amplitudes.reshape(self.space.dim_a, self.space.dim_b)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite mixed state."""

    space: FockSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_frozen_complex(
            self.matrix, (self.space.dim, self.space.dim), "density matrix"
        )
        object.__setattr__(self, "matrix", m)
        if float(np.abs(m - m.conj().T).max()) > NORM_TOL:
            raise ContractError("density matrix is not Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > NORM_TOL:
            raise ContractError(f"density matrix trace is {tr!r}, expected 1")
        lo = float(np.linalg.eigvalsh(m).min())
        if lo < EIGENVALUE_FLOOR:
            raise ContractError(f"density matrix has negative eigenvalue {lo!r}")


@dataclass(frozen=True)
class LinOp:
    """Complex square operator tagged with the tensor factor it acts on."""

    side: Side
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator matrix must be square, got shape {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "side", Side(self.side))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def adjoint(self) -> "LinOp":
        return LinOp(self.side, self.matrix.conj().T)

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return float(np.abs(self.matrix - self.matrix.conj().T).max()) <= tol

    def _require_same(self, other: "LinOp"):
        if not isinstance(other, LinOp):
            raise TypeError(f"expected LinOp, got {type(other).__name__}")
        if self.side != other.side or self.dim != other.dim:
            raise DimensionError(
                f"operands act on different factors: "
                f"{self.side.value}/{self.dim} vs {other.side.value}/{other.dim}"
            )

    def __matmul__(self, other: "LinOp") -> "LinOp":
        self._require_same(other)
        return LinOp(self.side, self.matrix @ other.matrix)

    def __add__(self, other: "LinOp") -> "LinOp":
        self._require_same(other)
        return LinOp(self.side, self.matrix + other.matrix)

    def __sub__(self, other: "LinOp") -> "LinOp":
        self._require_same(other)
        return LinOp(self.side, self.matrix - other.matrix)

    def __rmul__(self, scalar) -> "LinOp":
        return LinOp(self.side, complex(scalar) * self.matrix)

    def __neg__(self) -> "LinOp":
        return LinOp(self.side, -self.matrix)


def identity(dim: int, side: Side = Side.A) -> LinOp:
    return LinOp(side, np.eye(dim, dtype=np.complex128))


def basis_state(space: FockSpace, x: int, y: int) -> StateVector:
    """The product basis ket |x, y>."""
    amp = np.zeros(space.dim, dtype=np.complex128)
    amp[space.index(x, y)] = 1.0
    return StateVector(space, amp)


def lift(op: LinOp, space: FockSpace) -> LinOp:
    """Tensor a one-side operator with the identity of the other side."""
    if op.side == Side.FULL:
        raise DimensionError("operator is already lifted to the full space")
    if op.dim != space.side_dim(op.side):
        raise DimensionError(
            f"side {op.side.value} operator of dim {op.dim} does not fit "
            f"a {space.dim_a}x{space.dim_b} space"
        )
    if op.side == Side.A:
        full = np.kron(op.matrix, np.eye(space.dim_b, dtype=np.complex128))
    else:
        full = np.kron(np.eye(space.dim_a, dtype=np.complex128), op.matrix)
    return LinOp(Side.FULL, full)


def apply(op: LinOp, state: StateVector) -> StateVector:
    """Matrix-vector product; the truncation deficit is carried over unchanged."""
    if op.side != Side.FULL:
        raise DimensionError("apply expects an operator lifted to the full space")
    if op.dim != state.space.dim:
        raise DimensionError(
            f"operator dim {op.dim} does not match state dim {state.space.dim}"
        )
    return StateVector(
        state.space, op.matrix @ state.amplitudes, state.norm_deficit, check=False
    )


def inner(s1: StateVector, s2: StateVector) -> complex:
    """<s1|s2>, conjugate-linear in the first argument."""
    if s1.space != s2.space:
        raise DimensionError("states live on different spaces")
    return complex(np.vdot(s1.amplitudes, s2.amplitudes))


def expectation(op: LinOp, state) -> float:
    """<psi|op|psi> for a StateVector, Tr(op rho) for a DensityMatrix.

    The operator must be Hermitian within 1e-10; an imaginary residue below
    that threshold is discarded, anything larger is an error.
    """
    if op.side != Side.FULL:
        raise DimensionError("expectation expects an operator on the full space")
    if not op.is_hermitian():
        raise ContractError("expectation requires a Hermitian operator")
    if isinstance(state, StateVector):
        if op.dim != state.space.dim:
            raise DimensionError("operator and state dimensions differ")
        val = complex(np.vdot(state.amplitudes, op.matrix @ state.amplitudes))
    elif isinstance(state, DensityMatrix):
        if op.dim != state.space.dim:
            raise DimensionError("operator and state dimensions differ")
        val = complex(np.einsum("ij,ji->", op.matrix, state.matrix))
    else:
        raise TypeError(f"expected StateVector or DensityMatrix, got {type(state).__name__}")
    if abs(val.imag) >= HERMITICITY_TOL:
        raise ContractError(f"expectation has imaginary residue {val.imag!r}")
    return val.real


def commutator(p: LinOp, q: LinOp) -> LinOp:
    """pq - qp for operators on the same tensor factor."""
    p._require_same(q)
    return LinOp(p.side, p.matrix @ q.matrix - q.matrix @ p.matrix)
