# Copyright (c) 2026 The rmt-qubits developers.
#
# Released under the MIT license, see the LICENSE file.

import numpy as np
import pytest
from hypothesis import settings

from rmt_qubits.dos import Flat
from rmt_qubits.dos import Lorentzian

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20260417)


@pytest.fixture
def lorentzian():
    return Lorentzian(0.15)


@pytest.fixture
def flat():
    return Flat(1.0)
