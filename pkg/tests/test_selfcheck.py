import pytest

from pairchsh import FockSpace, algebra_report


@pytest.mark.parametrize("dims", [(8, 8), (16, 16), (4, 8)])
def test_algebra_report_passes(dims):
    report = algebra_report(FockSpace(*dims), samples=12, seed=1)
    assert report["all_passed"]
    assert report["pair_su2_residual"] == 0.0
    assert report["total_su2_residual"] == 0.0
    assert report["cross_pair_residual"] == 0.0
    assert report["spin_dot_square_residual"] <= 1e-14
    assert report["dichotomy_residual"] <= 1e-15
    assert report["commuting_sides_residual"] == 0.0
    assert report["dims"] == list(dims)


def test_algebra_report_is_deterministic():
    a = algebra_report(FockSpace(8, 8), samples=8, seed=3)
    b = algebra_report(FockSpace(8, 8), samples=8, seed=3)
    assert a == b
