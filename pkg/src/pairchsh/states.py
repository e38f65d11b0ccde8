"""Builders for the supported state families, with exact truncation tails.

Pure families are never renormalized after truncation; the cut-off mass is
returned as the state's ``norm_deficit`` and is available in closed form via
:func:`tail_bound`.  The coherent-superposition amplitude is called ``z``
throughout to keep it apart from the measurement angle alpha.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np
from scipy.special import gammainc

from .fock import (
    ContractError,
    DensityMatrix,
    DimensionError,
    FockSpace,
    StateVector,
)


def _checked_mode_pair(pair, what: str) -> tuple[int, int]:
    p, q = (int(m) for m in pair)
    if p < 0 or q < 0:
        raise IndexError(f"{what} modes must be nonnegative, got ({p}, {q})")
    if p == q:
        raise ValueError(f"{what} modes must be distinct, got ({p}, {q})")
    return p, q


@dataclass(frozen=True)
class GenericPair:
    """One mode of side a entangled with one mode of side b.

    ``pair_a = (p, q)`` and ``pair_b = (r, s)`` select the orthogonal modes:
    the state is (|p, s> + |q, r>) / sqrt(2).
    """

    pair_a: tuple[int, int]
    pair_b: tuple[int, int]
    family: ClassVar[str] = "generic_pair"

    def __post_init__(self):
        object.__setattr__(self, "pair_a", _checked_mode_pair(self.pair_a, "pair_a"))
        object.__setattr__(self, "pair_b", _checked_mode_pair(self.pair_b, "pair_b"))


@dataclass(frozen=True)
class Noon:
    """(|N, 0> + |0, N>) / sqrt(2)."""

    n: int
    family: ClassVar[str] = "noon"

    def __post_init__(self):
        n = int(self.n)
        if n < 1:
            raise ValueError(f"noon requires n >= 1, got {n}")
        object.__setattr__(self, "n", n)


@dataclass(frozen=True)
class CoherentSuperposition:
    """Symmetrized superposition of |1> with a coherent state of amplitude z."""

    z: complex
    family: ClassVar[str] = "coherent_superposition"

    def __post_init__(self):
        z = complex(self.z)
        if not (math.isfinite(z.real) and math.isfinite(z.imag)):
            raise ValueError(f"z must be finite, got {z!r}")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class TwoModeSqueezed:
    """sqrt(1 - eta^2) * sum_n eta^n |n, n>, with 0 < eta < 1."""

    eta: float
    family: ClassVar[str] = "two_mode_squeezed"

    def __post_init__(self):
        eta = float(self.eta)
        if not (0.0 < eta < 1.0):
            raise ValueError(f"eta must lie strictly inside (0, 1), got {eta!r}")
        object.__setattr__(self, "eta", eta)


@dataclass(frozen=True)
class Werner:
    """Mixture of white noise with the two-mode singlet, weight w.

    The open interval (0, 1) is the nominal domain; w = 1 (pure singlet) is
    accepted so the boundary stays testable.
    """

    w: float
    family: ClassVar[str] = "werner"

    def __post_init__(self):
        w = float(self.w)
        if not (0.0 < w <= 1.0):
            raise ValueError(f"w must lie in (0, 1], got {w!r}")
        object.__setattr__(self, "w", w)


StateSpec = Union[GenericPair, Noon, CoherentSuperposition, TwoModeSqueezed, Werner]

FAMILIES: dict[str, type] = {
    cls.family: cls
    for cls in (GenericPair, Noon, CoherentSuperposition, TwoModeSqueezed, Werner)
}


def _json_number(value, field: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValueError(f"{field} must be a number, got {value!r}")
    return float(value)


def _json_int(value, field: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{field} must be an integer, got {value!r}")
    return value


def _json_pair(value, field: str) -> tuple[int, int]:
    if not isinstance(value, (list, tuple)) or len(value) != 2:
        raise ValueError(f"{field} must be a two-element list, got {value!r}")
    return (_json_int(value[0], field), _json_int(value[1], field))


def _parse_complex(value, field: str) -> complex:
    if isinstance(value, dict):
        if set(value) != {"re", "im"}:
            raise ValueError(f"{field} object needs exactly 're' and 'im'")
        return complex(_json_number(value["re"], field), _json_number(value["im"], field))
    return complex(_json_number(value, field), 0.0)


_REQUIRED_FIELDS = {
    "generic_pair": {"pair_a", "pair_b"},
    "noon": {"n"},
    "coherent_superposition": {"z"},
    "two_mode_squeezed": {"eta"},
    "werner": {"w"},
}


def parse_state_spec(source, *, validate: bool = True) -> StateSpec:
    """Parse the canonical JSON form of a state spec.

    ``source`` may be a JSON string or an already-decoded mapping.  Parsing is
    strict: unknown or missing fields are rejected.  ``validate=False`` skips
    the family's domain check on the scalar parameter (used by sweeps, where
    the spec's own value is a placeholder to be replaced point by point).
    """
    if isinstance(source, (str, bytes)):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ValueError(f"state spec is not valid JSON: {exc}") from exc
    else:
        obj = source
    if not isinstance(obj, dict):
        raise ValueError(f"state spec must be a JSON object, got {type(obj).__name__}")
    family = obj.get("type")
    if family not in FAMILIES:
        raise ValueError(
            f"unknown state type {family!r}; expected one of {sorted(FAMILIES)}"
        )
    required = _REQUIRED_FIELDS[family]
    fields = set(obj) - {"type"}
    if fields != required:
        missing = sorted(required - fields)
        extra = sorted(fields - required)
        parts = []
        if missing:
            parts.append(f"missing fields {missing}")
        if extra:
            parts.append(f"unknown fields {extra}")
        raise ValueError(f"bad {family} spec: " + ", ".join(parts))

    if family == "generic_pair":
        return GenericPair(_json_pair(obj["pair_a"], "pair_a"), _json_pair(obj["pair_b"], "pair_b"))
    if family == "noon":
        return Noon(_json_int(obj["n"], "n"))
    if family == "coherent_superposition":
        return CoherentSuperposition(_parse_complex(obj["z"], "z"))
    if family == "two_mode_squeezed":
        eta = _json_number(obj["eta"], "eta")
        if not validate:
            return _unvalidated(TwoModeSqueezed, eta=eta)
        return TwoModeSqueezed(eta)
    w = _json_number(obj["w"], "w")
    if not validate:
        return _unvalidated(Werner, w=w)
    return Werner(w)


def _unvalidated(cls, **fields):
    spec = object.__new__(cls)
    for key, value in fields.items():
        object.__setattr__(spec, key, value)
    return spec


def state_spec_to_dict(spec: StateSpec) -> dict:
    """Canonical JSON-ready form (inverse of :func:`parse_state_spec`)."""
    if isinstance(spec, GenericPair):
        return {
            "type": spec.family,
            "pair_a": list(spec.pair_a),
            "pair_b": list(spec.pair_b),
        }
    if isinstance(spec, Noon):
        return {"type": spec.family, "n": spec.n}
    if isinstance(spec, CoherentSuperposition):
        return {"type": spec.family, "z": {"re": spec.z.real, "im": spec.z.imag}}
    if isinstance(spec, TwoModeSqueezed):
        return {"type": spec.family, "eta": spec.eta}
    if isinstance(spec, Werner):
        return {"type": spec.family, "w": spec.w}
    raise TypeError(f"not a state spec: {type(spec).__name__}")


def spec_parameter(spec: StateSpec):
    """Scalar parameter shown in reports: eta, w, |z| or N (None for generic)."""
    if isinstance(spec, TwoModeSqueezed):
        return spec.eta
    if isinstance(spec, Werner):
        return spec.w
    if isinstance(spec, CoherentSuperposition):
        return abs(spec.z)
    if isinstance(spec, Noon):
        return float(spec.n)
    return None


def generic_pair_state(space: FockSpace, spec: GenericPair) -> StateVector:
    """(|p, s> + |q, r>) / sqrt(2) for pair_a = (p, q), pair_b = (r, s)."""
    p, q = spec.pair_a
    r, s = spec.pair_b
    amp = np.zeros(space.dim, dtype=np.complex128)
    amp[space.index(p, s)] = 1.0 / math.sqrt(2.0)
    amp[space.index(q, r)] = 1.0 / math.sqrt(2.0)
    return StateVector(space, amp)


def noon_state(space: FockSpace, n: int) -> StateVector:
    """(|n, 0> + |0, n>) / sqrt(2)."""
    n = int(n)
    if n < 1:
        raise ValueError(f"noon requires n >= 1, got {n}")
    if n >= space.dim_a or n >= space.dim_b:
        raise IndexError(f"n = {n} exceeds the cutoff of a {space.dim_a}x{space.dim_b} space")
    amp = np.zeros(space.dim, dtype=np.complex128)
    amp[space.index(n, 0)] = 1.0 / math.sqrt(2.0)
    amp[space.index(0, n)] = 1.0 / math.sqrt(2.0)
    return StateVector(space, amp)


def coherent_amplitudes(z: complex, dim: int) -> np.ndarray:
    """Number-basis coefficients e^{-|z|^2/2} z^n / sqrt(n!) for n < dim."""
    out = np.empty(dim, dtype=np.complex128)
    out[0] = math.exp(-0.5 * abs(z) ** 2)
    for n in range(1, dim):
        out[n] = out[n - 1] * z / math.sqrt(n)
    return out


def coherent_superposition_state(space: FockSpace, z: complex) -> StateVector:
    """Truncation of (|1_a>|z_b> + |z_a>|1_b>) / sqrt(2 (1 + |z|^2 e^{-|z|^2}))."""
    z = complex(z)
    lam = abs(z) ** 2
    norm = 1.0 / math.sqrt(2.0 * (1.0 + lam * math.exp(-lam)))
    grid = np.zeros((space.dim_a, space.dim_b), dtype=np.complex128)
    grid[1, :] += coherent_amplitudes(z, space.dim_b)
    grid[:, 1] += coherent_amplitudes(z, space.dim_a)
    amp = grid.reshape(-1) * norm
    deficit = 1.0 - float(np.vdot(amp, amp).real)
    return StateVector(space, amp, max(deficit, 0.0))


def two_mode_squeezed_state(space: FockSpace, eta: float) -> StateVector:
    """Truncation of sqrt(1 - eta^2) sum_n eta^n |n, n>; deficit eta^(2 dim)."""
    eta = float(eta)
    if not (0.0 < eta < 1.0):
        raise ValueError(f"eta must lie strictly inside (0, 1), got {eta!r}")
    if space.dim_a != space.dim_b:
        raise DimensionError("the squeezed family needs equal side dimensions")
    dim = space.dim_a
    grid = np.zeros((dim, dim), dtype=np.complex128)
    coeff = math.sqrt(1.0 - eta * eta)
    for n in range(dim):
        grid[n, n] = coeff * eta**n
    deficit = eta ** (2 * dim)
    return StateVector(space, grid.reshape(-1), deficit)


def werner_state(w: float) -> DensityMatrix:
    """(1-w)/4 identity plus w times the singlet projector, on a 2x2 space.

    Qubit convention: |+> is mode 1, |-> is mode 0, so the singlet reads
    (|1, 0> - |0, 1>) / sqrt(2).
    """
    w = float(w)
    if not (0.0 < w <= 1.0):
        raise ValueError(f"w must lie in (0, 1], got {w!r}")
    space = FockSpace(2, 2)
    singlet = np.zeros(4, dtype=np.complex128)
    singlet[space.index(1, 0)] = 1.0 / math.sqrt(2.0)
    singlet[space.index(0, 1)] = -1.0 / math.sqrt(2.0)
    rho = (1.0 - w) / 4.0 * np.eye(4, dtype=np.complex128)
    rho += w * np.outer(singlet, singlet.conj())
    return DensityMatrix(space, rho)


def build_state(spec: StateSpec, space: FockSpace):
    """Construct the truncated state of ``spec`` on ``space``."""
    if isinstance(spec, GenericPair):
        return generic_pair_state(space, spec)
    if isinstance(spec, Noon):
        return noon_state(space, spec.n)
    if isinstance(spec, CoherentSuperposition):
        return coherent_superposition_state(space, spec.z)
    if isinstance(spec, TwoModeSqueezed):
        return two_mode_squeezed_state(space, spec.eta)
    if isinstance(spec, Werner):
        if (space.dim_a, space.dim_b) != (2, 2):
            raise DimensionError("the werner family lives on a 2x2 space")
        return werner_state(spec.w)
    raise TypeError(f"not a state spec: {type(spec).__name__}")


@dataclass(frozen=True)
class TruncationBound:
    """Exact probability mass of a family beyond the cutoff."""

    tail_probability: float

    def __post_init__(self):
        if self.tail_probability < 0:
            raise ContractError("tail probability must be nonnegative")


def tail_bound(spec: StateSpec, space: FockSpace) -> TruncationBound:
    """Analytic cut-off mass; matches the builder's norm_deficit exactly."""
    if isinstance(spec, (GenericPair, Noon, Werner)):
        return TruncationBound(0.0)
    if isinstance(spec, CoherentSuperposition):
        lam = abs(spec.z) ** 2
        if lam == 0.0:
            return TruncationBound(0.0)
        # gammainc(D, lam) is the Poisson tail P(N >= D) at mean lam
        tail_a = float(gammainc(space.dim_a, lam))
        tail_b = float(gammainc(space.dim_b, lam))
        return TruncationBound((tail_a + tail_b) / (2.0 * (1.0 + lam * math.exp(-lam))))
    if isinstance(spec, TwoModeSqueezed):
        if space.dim_a != space.dim_b:
            raise DimensionError("the squeezed family needs equal side dimensions")
        return TruncationBound(spec.eta ** (2 * space.dim_a))
    raise TypeError(f"not a state spec: {type(spec).__name__}")


def canonical_bell_pairs(spec: StateSpec) -> tuple[tuple[int, int], tuple[int, int]]:
    """Mode pairs the measurement operators act on for this family."""
    if isinstance(spec, GenericPair):
        return spec.pair_a, spec.pair_b
    if isinstance(spec, Noon):
        return (0, spec.n), (0, spec.n)
    return (0, 1), (0, 1)


def default_space(spec: StateSpec) -> FockSpace:
    """A space large enough for the family at the package's default cutoff."""
    if isinstance(spec, Werner):
        return FockSpace(2, 2)
    need = 2
    if isinstance(spec, Noon):
        need = spec.n + 1
    elif isinstance(spec, GenericPair):
        need = max(*spec.pair_a, *spec.pair_b) + 1
    dim = max(16, need + (need % 2))
    return FockSpace(dim, dim)
