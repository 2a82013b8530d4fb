import numpy as np
import pytest

from irs_seclab.channel import ChannelSet, PathLossParams, Position, RicianParams, Scenario


@pytest.fixture
def wiretap_scenario():
    return Scenario(alice=Position(0, 5), bob=Position(35, 10), eve=Position(75, 10), irs=Position(55, 0),
                    n_elements=8, rician=RicianParams(2.0))


@pytest.fixture
def covert_scenario():
    return Scenario(alice=Position(0, 5), bob=Position(35, 10), willie=Position(75, 10), irs=Position(55, 0),
                    n_elements=2, rician=RicianParams(3.0), path_loss=PathLossParams(4.0, 2.0, -30.0))


def random_channels(rng, n, eve=True, willie=False):
    """Unit-scale random channel set, handy for optimizer checks."""
    def cn(*shape):
        return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)

    return ChannelSet(
        h_ab=complex(cn()), h_ai=cn(n), h_ib=cn(n),
        h_ae=complex(cn()) if eve else None, h_ie=cn(n) if eve else None,
        h_aw=complex(cn()) if willie else None, h_iw=cn(n) if willie else None,
    )
