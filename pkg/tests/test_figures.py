from pairchsh import ANGLE_PRESETS, CoherentSuperposition, TwoModeSqueezed
from pairchsh.chsh import convergence_table
from pairchsh.figures import convergence_figure, sweep_figure
from pairchsh.optimize import parameter_sweep

PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


def test_sweep_figure_written(tmp_path):
    rows = parameter_sweep("two_mode_squeezed", 0.1, 0.9, 9)
    path = tmp_path / "sweep.png"
    sweep_figure(rows, str(path), parameter_label="eta")
    data = path.read_bytes()
    assert data.startswith(PNG_MAGIC)
    assert len(data) > 5000


def test_convergence_figure_written(tmp_path):
    rows = convergence_table(
        CoherentSuperposition(1.0), [4, 8, 16], ANGLE_PRESETS["paper-choice"]
    )
    path = tmp_path / "conv.png"
    convergence_figure(rows, str(path))
    assert path.read_bytes().startswith(PNG_MAGIC)


def test_empty_rows_rejected(tmp_path):
    import pytest

    with pytest.raises(ValueError):
        sweep_figure([], str(tmp_path / "x.png"))
    with pytest.raises(ValueError):
        convergence_figure([], str(tmp_path / "y.png"))
