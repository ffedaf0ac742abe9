import numpy as np
import pytest

from minphase import fileio
from minphase.config import RunConfig
from minphase.errors import SerializationError
from minphase.signals import TimeGrid, sigma0
from minphase.transforms import BoundaryFunction, FrequencyGrid


def test_signal_csv_roundtrip(tmp_path):
    grid = TimeGrid(1 / 64.0, 257)
    sig = sigma0(grid)
    path = tmp_path / "sig.csv"
    fileio.write_signal_csv(path, sig)
    back = fileio.read_signal_csv(path)
    assert back.grid == sig.grid
    assert np.array_equal(back.values, sig.values)


def test_signal_csv_rejects_bad_header(tmp_path):
    path = tmp_path / "sig.csv"
    path.write_text("time,real,imag\n0.0,1.0,0.0\n")
    with pytest.raises(SerializationError):
        fileio.read_signal_csv(path)


def test_signal_csv_rejects_nonequispaced(tmp_path):
    path = tmp_path / "sig.csv"
    path.write_text("t,re,im\n0.0,1.0,0.0\n0.1,1.0,0.0\n0.3,1.0,0.0\n")
    with pytest.raises(SerializationError) as err:
        fileio.read_signal_csv(path)
    assert ":4:" in str(err.value)  # line number of the bad row


def test_signal_csv_rejects_nonzero_start(tmp_path):
    path = tmp_path / "sig.csv"
    path.write_text("t,re,im\n0.5,1.0,0.0\n0.6,1.0,0.0\n")
    with pytest.raises(SerializationError):
        fileio.read_signal_csv(path)


def test_signal_csv_rejects_empty(tmp_path):
    path = tmp_path / "sig.csv"
    path.write_text("")
    with pytest.raises(SerializationError):
        fileio.read_signal_csv(path)


def test_boundary_csv_roundtrip(tmp_path):
    grid = FrequencyGrid.circle_uniform(64)
    F = BoundaryFunction(grid, np.exp(1j * grid.nodes))
    path = tmp_path / "bnd.csv"
    fileio.write_boundary_csv(path, F)
    text = path.read_text()
    assert text.startswith("#domain=disk_circle\n")
    back = fileio.read_boundary_csv(path)
    assert back.grid.kind == "circle"
    assert np.allclose(back.values, F.values)


def test_boundary_csv_requires_domain(tmp_path):
    path = tmp_path / "bnd.csv"
    path.write_text("y,re,im\n0.0,1.0,0.0\n")
    with pytest.raises(SerializationError):
        fileio.read_boundary_csv(path)


def test_expansion_csv(tmp_path):
    path = tmp_path / "exp.csv"
    fileio.write_expansion_csv(path, np.array([1.0, 0.5j]))
    lines = path.read_text().splitlines()
    assert lines[0] == "n,re,im"
    assert lines[1].startswith("0,1.0,")


def test_config_roundtrip(tmp_path):
    cfg = RunConfig(dt=1 / 128.0, n_freq=4096)
    path = tmp_path / "cfg.json"
    fileio.write_json(path, cfg.to_json())
    back = RunConfig.from_file(path)
    assert back == cfg


def test_config_rejects_unknown_keys(tmp_path):
    path = tmp_path / "cfg.json"
    fileio.write_json(path, {"dt": 0.01, "mystery": 3})
    with pytest.raises(SerializationError) as err:
        RunConfig.from_file(path)
    assert "mystery" in str(err.value)


def test_config_validates_values():
    from minphase.errors import DomainError

    with pytest.raises(DomainError):
        RunConfig(dt=-1.0)
    with pytest.raises(DomainError):
        RunConfig(n_circle=7)


def test_write_is_deterministic(tmp_path):
    grid = TimeGrid(1 / 64.0, 129)
    sig = sigma0(grid)
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    fileio.write_signal_csv(a, sig)
    fileio.write_signal_csv(b, sig)
    assert a.read_bytes() == b.read_bytes()
