# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

"""Hypothesis strategies for states, initial conditions and channels."""

import numpy as np
from hypothesis import assume
from hypothesis import strategies as st

from rmt_qubits.bvh import BvhChannel
from rmt_qubits.dos import Lorentzian
from rmt_qubits.states import FAMILIES
from rmt_qubits.states import BlockState
from rmt_qubits.states import from_blocks
from rmt_qubits.states import initial_condition

unit_floats = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_subnormal=False)


def psd_block(values):
    amplitudes = np.array(values[:4]).reshape(2, 2) + 1j * np.array(values[4:]).reshape(2, 2)
    return amplitudes @ amplitudes.conj().T


def random_x_state(rng):
    """X-state with Gram-matrix blocks of Gaussian amplitudes."""
    plus = psd_block(rng.normal(size=8))
    minus = psd_block(rng.normal(size=8))
    total = np.trace(plus).real + np.trace(minus).real
    return from_blocks(BlockState(plus / total, minus / total))


@st.composite
def x_states(draw):
    values = draw(st.lists(unit_floats, min_size=16, max_size=16))
    plus = psd_block(values[:8])
    minus = psd_block(values[8:])
    total = np.trace(plus).real + np.trace(minus).real
    assume(total > 1e-3)
    return from_blocks(BlockState(plus / total, minus / total))


@st.composite
def initial_conditions(draw):
    return initial_condition(
        draw(st.sampled_from(FAMILIES)),
        draw(st.floats(min_value=0.0, max_value=1.0)),
        alpha3=draw(st.floats(min_value=-1.0 / 3.0, max_value=1.0)),
        k=draw(st.sampled_from([1, 2])),
        beta_phase=draw(st.floats(min_value=0.0, max_value=2.0 * np.pi)),
    )


@st.composite
def lorentzian_channels(draw):
    gamma = draw(st.floats(min_value=0.05, max_value=2.0))
    e_env = draw(st.floats(min_value=-3.0, max_value=3.0))
    s = draw(st.floats(min_value=0.5, max_value=2.0))
    return BvhChannel.from_dos(Lorentzian(gamma), e_env, s)
