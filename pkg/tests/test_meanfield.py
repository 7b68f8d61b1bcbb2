# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

import numpy as np
import pytest

from rmt_qubits import meanfield
from rmt_qubits.dos import Lorentzian
from rmt_qubits.dos import Tabulated
from rmt_qubits.errors import ValidationError

Z = 0.3 + 0.5j


@pytest.fixture
def wide():
    return Lorentzian(1.0)


@pytest.mark.parametrize("z", [Z, -1.2 + 0.2j, 2.5 + 1.0j])
def test_decoupled_pair_has_closed_form(wide, z):
    sample = meanfield.solve_selfconsistent(wide, 1.0, 0.0, z)
    expected_plus = wide.stieltjes(z + 2.0) + wide.stieltjes(z - 2.0)
    assert sample.g_plus == pytest.approx(expected_plus, abs=1e-10)
    assert sample.g_minus == pytest.approx(2.0 * wide.stieltjes(z), abs=1e-10)


def test_pair_lies_in_the_upper_half_plane(wide):
    sample = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z)
    assert sample.g_plus.imag > 0.0
    assert sample.g_minus.imag > 0.0
    assert sample.residual <= meanfield.RESIDUAL_TOL


def test_pair_is_conjugation_symmetric(wide):
    upper = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z)
    lower = meanfield.solve_selfconsistent(wide, 1.0, 0.5, np.conj(Z))
    assert lower.g_plus == pytest.approx(np.conj(upper.g_plus), abs=1e-10)
    assert lower.g_minus == pytest.approx(np.conj(upper.g_minus), abs=1e-10)
    assert lower.g_plus.imag < 0.0


def test_solvers_agree(wide):
    fixed = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z, method="fixed-point")
    root = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z, method="root")
    assert root.method == "root"
    assert fixed.g_plus == pytest.approx(root.g_plus, abs=1e-9)
    assert fixed.g_minus == pytest.approx(root.g_minus, abs=1e-9)


def test_warm_start_reaches_the_same_pair(wide):
    cold = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z)
    near = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z + 0.01)
    warm = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z, initial=(near.g_plus, near.g_minus))
    assert warm.g_plus == pytest.approx(cold.g_plus, abs=1e-9)
    assert warm.g_minus == pytest.approx(cold.g_minus, abs=1e-9)


@pytest.mark.parametrize("eta", [1, -1])
def test_pair_is_the_trace_of_the_block_resolvent(wide, eta):
    sample = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z)
    assert meanfield.resolvent_integral(sample, wide, eta) == pytest.approx(sample.g(eta), abs=1e-8)


def test_tabulated_density():
    hat = Tabulated([-1.0, 0.0, 1.0], [0.0, 1.0, 0.0])
    sample = meanfield.solve_selfconsistent(hat, 0.5, 0.3, 0.2 + 0.3j)
    assert sample.g_plus.imag > 0.0
    assert sample.g_minus.imag > 0.0


def test_big_z(wide):
    sample = meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z)
    assert sample.big_z(1) == pytest.approx(Z + 0.25 * sample.g_plus)
    assert sample.big_z(-1) == pytest.approx(Z + 0.25 * sample.g_minus)


def test_flat_density_is_rejected(flat):
    with pytest.raises(ValidationError):
        meanfield.solve_selfconsistent(flat, 1.0, 0.5, Z)


def test_real_axis_is_rejected(wide):
    with pytest.raises(ValidationError):
        meanfield.solve_selfconsistent(wide, 1.0, 0.5, 0.3 + 1e-8j)


def test_unknown_method(wide):
    with pytest.raises(ValidationError):
        meanfield.solve_selfconsistent(wide, 1.0, 0.5, Z, method="newton")


def test_limiting_density_is_positive():
    values = meanfield.limiting_dos_probe(Lorentzian(0.5), 1.0, 0.3, [-1.0, 0.0, 1.0], epsilon=0.05)
    assert values.shape == (3,)
    assert np.all(values > 0.0)


def test_sign_condition_on_sampled_points(wide, rng):
    for _ in range(1000):
        z = complex(rng.uniform(-4.0, 4.0), rng.choice([-1.0, 1.0]) * 10.0 ** rng.uniform(-2.0, 0.7))
        sample = meanfield.solve_selfconsistent(wide, 1.0, 0.5, z)
        assert sample.g_plus.imag * z.imag > 0.0
        assert sample.g_minus.imag * z.imag > 0.0


def test_pair_decays_like_a_mass_two_transform(wide):
    scaled = []
    for y in np.logspace(-1.0, 4.0, 26):
        sample = meanfield.solve_selfconsistent(wide, 1.0, 0.5, 1j * y)
        scaled.append([y * abs(sample.g_plus), y * abs(sample.g_minus)])
    scaled = np.array(scaled)
    assert np.all(scaled <= 2.0 + 1e-9)
    np.testing.assert_allclose(scaled[-1], [2.0, 2.0], atol=1e-3)


def test_uncoupled_density_has_peaks_at_shifted_energies():
    gamma, epsilon = 0.2, 0.05
    grid = np.linspace(-4.0, 4.0, 801)
    values = meanfield.limiting_dos_probe(Lorentzian(gamma), 1.0, 0.0, grid, eta=1, epsilon=epsilon)
    broadened = Lorentzian(gamma + epsilon)
    np.testing.assert_allclose(values, broadened.eval(grid + 2.0) + broadened.eval(grid - 2.0), atol=1e-8)
    assert grid[np.argmax(values[grid < 0.0])] == pytest.approx(-2.0, abs=0.02)
    assert grid[grid > 0.0][np.argmax(values[grid > 0.0])] == pytest.approx(2.0, abs=0.02)
    assert values[400] < 0.1 * values.max()


def test_limiting_density_obeys_the_sum_rule():
    step = np.pi / 4000
    angles = -0.5 * np.pi + step * (np.arange(4000) + 0.5)
    grid = np.tan(angles)
    values = meanfield.limiting_dos_probe(Lorentzian(0.1), 1.0, 0.3, grid, epsilon=0.05)
    total = np.sum(values / np.cos(angles) ** 2) * step
    assert total == pytest.approx(2.0, abs=5e-3)
