import math

import numpy as np
import pytest

import bolab

L = 2 * math.pi


def grid(m):
    return np.arange(m) * L / m


def test_hilbert_of_cosine_is_sine():
    x = grid(64)
    np.testing.assert_allclose(bolab.hilbert_transform(np.cos(3 * x), L), np.sin(3 * x), atol=1e-14)


def test_resonance_examples():
    xi = [3.0, -1.0, -2.0]
    assert bolab.omega_n(xi) == pytest.approx(sum(v * abs(v) for v in xi))
    assert bolab.omega_n(xi) == 4.0
    with pytest.raises(ValueError):
        bolab.omega_n([1.0, 1.0, 1.0])
    stats = bolab.check_res3(2000, [16, 8, 8], seed=3)
    assert 0 < stats["min_ratio"] <= stats["max_ratio"] < 8


def test_partition_of_unity():
    for xi in [0.3, 1.7, 5.0, 100.0]:
        total = bolab.chi(1, xi) + sum(bolab.chi(2**j, xi) for j in range(1, 12))
        assert total == pytest.approx(1.0, abs=1e-14)


def test_solve_conserves_mass_and_momentum():
    x = grid(128)
    u0 = 0.5 * np.cos(x) + 0.2 * np.sin(2 * x)
    out = bolab.solve(u0, L, dt=1e-3, t_final=0.2, snapshot_stride=50)
    assert out["fields"].shape == (5, 128)
    assert out["times"][-1] == pytest.approx(0.2)
    assert abs(out["mass"][-1] - out["mass"][0]) < 1e-12
    assert abs(out["momentum"][-1] / out["momentum"][0] - 1) < 1e-9


def test_travelling_wave_moves_rigidly():
    m, length = 1024, 16 * math.pi
    speed = bolab.periodic_travelling_wave_speed(length, 1.0)
    u0 = bolab.periodic_travelling_wave(m, length, 1.0, length / 2)
    out = bolab.solve(u0, length, dt=1e-3, t_final=0.5, snapshot_stride=500)
    expect = bolab.periodic_travelling_wave(m, length, 1.0, length / 2 + speed * 0.5)
    assert np.linalg.norm(out["fields"][-1] - expect) / np.linalg.norm(expect) < 1e-8


def test_errors_map_to_python_exceptions():
    with pytest.raises(ValueError):
        bolab.solve(np.zeros(100), L, dt=1e-3, t_final=0.1)
    with pytest.raises(ArithmeticError):
        big = 100.0 * np.cos(grid(64) * 20)
        bolab.solve(big, L, dt=0.05, t_final=10.0, dealias=False, cfl=1e9)


def test_cli_in_process():
    code, out, _ = bolab.run_cli(["selftest"])
    assert code == 0
    assert "FAIL" not in out
    code, _, err = bolab.run_cli(["no-such-command"])
    assert code == 1
