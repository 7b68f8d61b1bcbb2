# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rmt_qubits.errors import InvalidStateError
from rmt_qubits.errors import ValidationError
from rmt_qubits.errors import XFormError
from rmt_qubits.quantifiers import REPORT_FIELDS
from rmt_qubits.quantifiers import concurrence
from rmt_qubits.quantifiers import concurrence_branches
from rmt_qubits.quantifiers import discord
from rmt_qubits.quantifiers import entropy
from rmt_qubits.quantifiers import negativity
from rmt_qubits.quantifiers import report
from rmt_qubits.quantifiers import shannon_bits
from rmt_qubits.states import Bell1
from rmt_qubits.states import Product
from rmt_qubits.states import TwoQubitState
from rmt_qubits.states import Werner
from rmt_qubits.states import build_initial
from rmt_qubits.states import initial_condition

from .strategies import random_x_state
from .strategies import x_states


def binary_entropy(p):
    return -p * np.log2(p) - (1 - p) * np.log2(1 - p)


def test_bell_state_is_maximally_entangled():
    state = build_initial(Bell1(2**-0.5))
    assert negativity(state) == pytest.approx(1.0)
    assert concurrence(state) == pytest.approx(1.0)
    assert discord(state) == pytest.approx(1.0, abs=1e-9)
    assert entropy(state) == pytest.approx(0.0, abs=1e-12)


def test_bell_like_state_at_one_half():
    result = report(build_initial(Bell1(0.5)))
    assert result.concurrence == pytest.approx(np.sqrt(3) / 2, abs=1e-12)
    assert result.discord == pytest.approx(0.811, abs=2e-3)
    assert result.discord == pytest.approx(binary_entropy(0.25), abs=1e-8)
    assert result.entropy <= 1e-10


def test_product_states_have_no_correlations():
    result = report(build_initial(Product(0.4)))
    assert result.negativity == 0.0
    assert result.concurrence == 0.0
    assert result.discord == pytest.approx(0.0, abs=1e-9)
    assert result.entropy == pytest.approx(2 * binary_entropy(0.16))


def test_werner_threshold_has_zero_negativity():
    state = build_initial(Werner(1, 1.0 / 3.0, 2**-0.5))
    assert negativity(state) <= 1e-12
    assert concurrence(state) <= 1e-12
    assert discord(state) > 0.05


@given(x_states())
def test_concurrence_bounds_negativity(state):
    assert concurrence(state) >= negativity(state) - 1e-12


def test_concurrence_and_negativity_vanish_together(rng):
    for _ in range(10_000):
        state = random_x_state(rng)
        conc, neg = concurrence(state), negativity(state)
        assert conc >= neg - 1e-12
        if conc == 0.0:
            assert neg <= 1e-12
        if neg == 0.0:
            assert conc <= 1e-10


def test_weak_coherence_keeps_negativity_positive():
    entries = np.diag([0.5, 0.25, 0.25, 1e-20]).astype(complex)
    entries[1, 2] = entries[2, 1] = 3e-9
    state = TwoQubitState(entries)
    assert concurrence(state) == pytest.approx(2.0 * (3e-9 - np.sqrt(0.5e-20)), rel=1e-9)
    assert negativity(state) > 0.0
    assert negativity(state) == pytest.approx(4.0 * (9e-18 - 0.5e-20), rel=1e-6)


@given(
    st.floats(min_value=0.0, max_value=1.0),
    st.floats(min_value=0.0, max_value=2 * np.pi),
    st.sampled_from(["bell1", "bell2"]),
)
def test_pure_states_have_equal_concurrence_and_negativity(alpha, phase, family):
    state = build_initial(initial_condition(family, alpha, beta_phase=phase))
    assert abs(concurrence(state) - negativity(state)) <= 1e-10


@given(st.floats(min_value=0.5, max_value=1.0), st.floats(min_value=0.05, max_value=0.95))
def test_equal_outer_populations_give_equal_measures(alpha3, alpha):
    state = build_initial(Werner(1, alpha3, alpha))
    assert abs(concurrence(state) - negativity(state)) <= 1e-10


def test_branches_select_the_concurrence():
    state = build_initial(Werner(2, 0.8, 0.6))
    first, second = concurrence_branches(state)
    assert second > 0.0 > first
    assert concurrence(state) == pytest.approx(2 * second)


def test_entropy_closed_form_matches_eigensolver(rng):
    for _ in range(10_000):
        state = random_x_state(rng)
        assert abs(entropy(state) - entropy(state, closed_form=False)) <= 1e-12


def test_entropy_of_maximally_mixed_state():
    assert entropy(TwoQubitState(np.eye(4) / 4)) == pytest.approx(2.0)


def test_shannon_bits_rejects_negative_weights():
    with pytest.raises(InvalidStateError):
        shannon_bits([0.6, 0.5, -0.1])
    assert shannon_bits([0.5, 0.5, -1e-12]) == pytest.approx(1.0)


def test_discord_fast_path_matches_full_search(rng):
    for _ in range(5):
        state = random_x_state(rng)
        fast = discord(state, method="x-fast")
        full = discord(state, method="full")
        assert fast == pytest.approx(full, abs=1e-6)


def test_discord_fast_path_with_complex_coherences():
    state = build_initial(initial_condition("werner", 0.6, alpha3=0.7, k=2, beta_phase=1.1))
    assert discord(state, method="x-fast") == pytest.approx(discord(state, method="full"), abs=1e-6)


def test_discord_of_symmetric_state_is_side_independent():
    state = build_initial(Werner(1, 0.6, 2**-0.5))
    assert discord(state, side="A") == pytest.approx(discord(state, side="B"), abs=1e-8)


def test_discord_of_non_x_state_uses_full_search():
    vector = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
    state = TwoQubitState(np.outer(vector, vector.conj()))
    assert discord(state) == pytest.approx(0.0, abs=1e-8)
    with pytest.raises(XFormError):
        discord(state, method="x-fast")
    with pytest.raises(XFormError):
        negativity(state)


def test_discord_argument_validation():
    state = build_initial(Bell1(0.5))
    with pytest.raises(ValidationError):
        discord(state, side="C")
    with pytest.raises(ValidationError):
        discord(state, method="exhaustive")


def test_report_row_order():
    result = report(build_initial(Bell1(0.5)))
    assert result.as_row() == [getattr(result, name) for name in REPORT_FIELDS]
    assert result.as_tuple() == (result.negativity, result.concurrence, result.entropy, result.discord)
