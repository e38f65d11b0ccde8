import numpy as np
import pytest
from hypothesis import given, seed, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pairchsh import (
    ContractError,
    DimensionError,
    FockSpace,
    DensityMatrix,
    LinOp,
    Side,
    StateVector,
    apply,
    basis_state,
    commutator,
    expectation,
    identity,
    inner,
    lift,
)
from pairchsh.pseudospin import pair_spin


def flip(dim, angle=0.0):
    """Hand-built pair (0,1) flip used as an independent reference."""
    m = np.eye(dim, dtype=complex)
    m[0, 0] = m[1, 1] = 0.0
    m[1, 0] = np.exp(1j * angle)
    m[0, 1] = np.exp(-1j * angle)
    return m


def test_space_requires_even_dims():
    FockSpace(2, 4)
    for bad in [(3, 4), (2, 5), (0, 2), (2, 1)]:
        with pytest.raises(DimensionError):
            FockSpace(*bad)


def test_basis_state_examples():
    s = basis_state(FockSpace(4, 4), 0, 1)
    assert s.amplitudes[1] == 1.0
    assert np.count_nonzero(s.amplitudes) == 1
    assert s.norm_deficit == 0.0

    s = basis_state(FockSpace(2, 2), 1, 0)
    assert s.amplitudes[2] == 1.0
    assert np.count_nonzero(s.amplitudes) == 1

    with pytest.raises(IndexError):
        basis_state(FockSpace(2, 2), 2, 0)


def test_index_ordering_side_b_fastest():
    space = FockSpace(4, 6)
    assert space.index(0, 0) == 0
    assert space.index(0, 5) == 5
    assert space.index(1, 0) == 6
    assert space.index(3, 5) == 23


def test_state_vector_norm_contract():
    space = FockSpace(2, 2)
    with pytest.raises(ContractError):
        StateVector(space, np.array([1.0, 1.0, 0.0, 0.0]))
    # deficit makes up the missing mass
    StateVector(space, np.array([0.6, 0.0, 0.0, 0.0]), norm_deficit=0.64)
    with pytest.raises(ContractError):
        StateVector(space, np.zeros(4), norm_deficit=-0.1)


def test_state_vector_is_immutable():
    s = basis_state(FockSpace(2, 2), 0, 0)
    with pytest.raises(ValueError):
        s.amplitudes[0] = 0.0


def test_density_matrix_contracts():
    space = FockSpace(2, 2)
    DensityMatrix(space, np.eye(4) / 4)
    with pytest.raises(ContractError):
        DensityMatrix(space, np.eye(4))  # trace 4
    bad = np.eye(4, dtype=complex) / 4
    bad[0, 1] = 0.3
    with pytest.raises(ContractError):
        DensityMatrix(space, bad)  # not Hermitian
    neg = np.diag([0.7, 0.5, -0.1, -0.1]).astype(complex)
    with pytest.raises(ContractError):
        DensityMatrix(space, neg)


def test_lift_identity_and_flips():
    space = FockSpace(2, 2)
    full = lift(identity(2, Side.A), space)
    assert np.array_equal(full.matrix, np.eye(4))

    lifted_a = lift(LinOp(Side.A, flip(2)), space)
    expected_a = np.zeros((4, 4), dtype=complex)
    for y in range(2):  # permutes (0,y) <-> (1,y)
        expected_a[space.index(1, y), space.index(0, y)] = 1.0
        expected_a[space.index(0, y), space.index(1, y)] = 1.0
    assert np.array_equal(lifted_a.matrix, expected_a)

    lifted_b = lift(LinOp(Side.B, flip(2)), space)
    expected_b = np.zeros((4, 4), dtype=complex)
    for x in range(2):  # permutes (x,0) <-> (x,1)
        expected_b[space.index(x, 1), space.index(x, 0)] = 1.0
        expected_b[space.index(x, 0), space.index(x, 1)] = 1.0
    assert np.array_equal(lifted_b.matrix, expected_b)


def test_lift_rejects_mismatch():
    with pytest.raises(DimensionError):
        lift(identity(4, Side.A), FockSpace(2, 2))
    with pytest.raises(DimensionError):
        lift(lift(identity(2, Side.A), FockSpace(2, 2)), FockSpace(2, 2))


def test_apply_examples():
    space = FockSpace(2, 2)
    s = basis_state(space, 0, 0)
    assert np.array_equal(apply(lift(identity(2, Side.A), space), s).amplitudes, s.amplitudes)

    flipped = apply(lift(LinOp(Side.A, flip(2, 0.0)), space), s)
    assert np.allclose(flipped.amplitudes, basis_state(space, 1, 0).amplitudes)

    rotated = apply(lift(LinOp(Side.A, flip(2, np.pi / 2)), space), s)
    assert np.allclose(rotated.amplitudes, 1j * basis_state(space, 1, 0).amplitudes)


def test_apply_carries_deficit():
    space = FockSpace(2, 2)
    s = StateVector(space, np.array([0.6, 0, 0, 0]), norm_deficit=0.64)
    out = apply(lift(identity(2, Side.A), space), s)
    assert out.norm_deficit == 0.64


def test_inner_examples():
    space = FockSpace(2, 2)
    s01 = basis_state(space, 0, 1)
    s10 = basis_state(space, 1, 0)
    assert inner(s01, s01) == 1.0
    assert inner(s01, s10) == 0.0
    scaled = StateVector(space, 1j * s01.amplitudes)
    assert inner(s01, scaled) == 1j
    assert inner(scaled, s01) == -1j  # conjugate-linear in the first slot
    with pytest.raises(DimensionError):
        inner(s01, basis_state(FockSpace(4, 4), 0, 1))


def test_expectation_examples():
    space = FockSpace(2, 2)
    bell = StateVector(space, np.array([0, 1, 1, 0]) / np.sqrt(2))
    eye_full = lift(identity(2, Side.A), space)
    assert expectation(eye_full, bell) == pytest.approx(1.0, abs=1e-14)

    alpha = 0.4
    for beta, expected in [(alpha, 1.0), (alpha - np.pi / 3, 0.5)]:
        op_a = lift(LinOp(Side.A, flip(2, alpha)), space)
        op_b = lift(LinOp(Side.B, flip(2, beta)), space)
        product = LinOp(Side.FULL, op_a.matrix @ op_b.matrix)
        assert expectation(product, bell) == pytest.approx(expected, abs=1e-12)


def test_expectation_contracts():
    space = FockSpace(2, 2)
    s = basis_state(space, 0, 0)
    non_hermitian = LinOp(Side.FULL, np.diag([1j, 0, 0, 0]).astype(complex))
    with pytest.raises(ContractError):
        expectation(non_hermitian, s)
    with pytest.raises(DimensionError):
        expectation(lift(identity(4, Side.A), FockSpace(4, 4)), s)
    with pytest.raises(DimensionError):
        expectation(identity(2, Side.A), s)


def test_expectation_on_density_matrix():
    space = FockSpace(2, 2)
    rho = DensityMatrix(space, np.eye(4) / 4)
    op = lift(LinOp(Side.A, flip(2, 0.2)), space)
    assert expectation(op, rho) == pytest.approx(0.5, abs=1e-14)  # Tr(A)/4 = 2/4


def test_commutator_examples():
    sx = pair_spin(2, 0, "x")
    sy = pair_spin(2, 0, "y")
    sz = pair_spin(2, 0, "z")
    assert np.abs(commutator(identity(2), sx).matrix).max() == 0.0
    assert np.array_equal(commutator(sx, sy).matrix, 2j * sz.matrix)

    space = FockSpace(4, 4)
    op_a = lift(LinOp(Side.A, flip(4, 0.3)), space)
    op_b = lift(LinOp(Side.B, flip(4, 1.1)), space)
    assert np.abs(commutator(op_a, op_b).matrix).max() == 0.0

    with pytest.raises(DimensionError):
        commutator(identity(2, Side.A), identity(2, Side.B))
    with pytest.raises(DimensionError):
        commutator(identity(2, Side.A), identity(4, Side.A))


@seed(7)
@settings(max_examples=40, deadline=None)
@given(
    mat_a=arrays(np.float64, (4, 4), elements=st.floats(-1, 1)),
    mat_b=arrays(np.float64, (4, 4), elements=st.floats(-1, 1)),
)
def test_lifted_sides_commute_exactly(mat_a, mat_b):
    space = FockSpace(4, 4)
    full_a = lift(LinOp(Side.A, mat_a.astype(complex)), space)
    full_b = lift(LinOp(Side.B, mat_b.astype(complex)), space)
    assert np.abs(commutator(full_a, full_b).matrix).max() == 0.0


@seed(11)
@settings(max_examples=40, deadline=None)
@given(
    re1=arrays(np.float64, 4, elements=st.floats(-1, 1)),
    re2=arrays(np.float64, 4, elements=st.floats(-1, 1)),
    coeff=st.tuples(st.floats(-2, 2), st.floats(-2, 2)),
)
def test_apply_is_linear(re1, re2, coeff):
    space = FockSpace(2, 2)
    op = lift(LinOp(Side.A, flip(2, 0.7)), space)
    a, b = coeff
    s1 = StateVector(space, re1.astype(complex), check=False)
    s2 = StateVector(space, re2.astype(complex), check=False)
    combo = StateVector(space, a * s1.amplitudes + b * s2.amplitudes, check=False)
    lhs = apply(op, combo).amplitudes
    rhs = a * apply(op, s1).amplitudes + b * apply(op, s2).amplitudes
    assert np.abs(lhs - rhs).max() <= 1e-12


def test_expectation_of_hermitian_is_real():
    rng = np.random.default_rng(3)
    space = FockSpace(4, 4)
    for _ in range(20):
        raw = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
        herm = LinOp(Side.FULL, raw + raw.conj().T)
        amp = rng.normal(size=16) + 1j * rng.normal(size=16)
        amp /= np.linalg.norm(amp)
        state = StateVector(space, amp)
        expectation(herm, state)  # would raise on an imaginary residue
