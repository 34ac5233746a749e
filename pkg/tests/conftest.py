import sys
from pathlib import Path

import numpy as np
import pytest

# make oracles/helpers importable regardless of how pytest was invoked
sys.path.insert(0, str(Path(__file__).parent))

from tmncell.glucorx import build_glucorx_network
from tmncell.robot import REVOLUTE, DHLink, LinkInertia, RobotModel


@pytest.fixture
def rng():
    return np.random.default_rng(20250811)


@pytest.fixture
def glucorx_net():
    return build_glucorx_network()


@pytest.fixture
def pendulum_model():
    """Point mass 1 kg at the tip of a 1 m massless rod, gravity along -y.

    With q measured from the +x axis the closed forms are B = m l^2,
    g = m G l cos(q), qdd_free = -(G / l) cos(q).
    """
    link = DHLink(a=1.0, alpha=0.0, d=0.0, theta_offset=0.0, kind=REVOLUTE)
    inertia = LinkInertia(mass=1.0, com=(0.0, 0.0, 0.0),
                          tensor=(0.0,) * 9)
    return RobotModel([(link, inertia)], gravity=(0.0, -9.81, 0.0))
