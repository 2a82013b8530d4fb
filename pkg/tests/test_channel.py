import math

import numpy as np
import pytest

from irs_seclab.channel import (
    ChannelSet, PathLossParams, Position, RicianParams, Scenario, los_channel_set, path_loss,
    sample_channel_set, sample_small_scale,
)
from irs_seclab.errors import InvalidArgumentError


def test_path_loss_values():
    assert path_loss(1.0, 3, 0) == 1.0
    assert path_loss(2.0, 3, 0) == 0.125
    assert path_loss(10.0, 2.5, -30) == pytest.approx(1e-3 * 10 ** -2.5, rel=1e-12)


@pytest.mark.parametrize("d", [0.0, -1.0])
def test_path_loss_rejects_nonpositive_distance(d):
    with pytest.raises(InvalidArgumentError):
        path_loss(d, 2.0, 0.0)


def test_position_must_be_finite():
    with pytest.raises(InvalidArgumentError):
        Position(float("nan"), 0.0)


def test_pure_los_has_unit_magnitude():
    g = sample_small_scale(RicianParams(float("inf")), np.random.default_rng(0), size=100, los_phase=0.3)
    assert np.allclose(np.abs(g), 1.0, atol=0, rtol=1e-15)


def test_rayleigh_limit_is_zero_mean_unit_power():
    g = sample_small_scale(RicianParams(-np.inf), np.random.default_rng(1), size=200_000)
    assert abs(g.mean()) < 0.01
    assert np.mean(np.abs(g) ** 2) == pytest.approx(1.0, rel=0.01)


def test_los_fraction_at_2db():
    p = RicianParams(2.0)
    assert p.los_fraction == pytest.approx(1.5849 / 2.5849, abs=1e-4)
    g = sample_small_scale(p, np.random.default_rng(2), size=1_000_000, los_phase=1.0)
    # the LoS part is the mean; its power share is |E g|^2 / E|g|^2
    share = abs(g.mean()) ** 2 / np.mean(np.abs(g) ** 2)
    assert share == pytest.approx(p.los_fraction, rel=0.01)


def test_rician_scatter_variance():
    p = RicianParams(5.0)
    g = sample_small_scale(p, np.random.default_rng(3), size=1_000_000)
    assert np.var(g) == pytest.approx(p.scatter_fraction, rel=0.02)


def test_empty_surface(wiretap_scenario):
    ch = sample_channel_set(wiretap_scenario.replace(n_elements=0), np.random.default_rng(0))
    assert ch.n_elements == 0
    assert ch.h_ai.shape == (0,) and ch.h_ib.shape == (0,)
    assert isinstance(ch.h_ab, complex)


def test_same_seed_is_bit_identical(wiretap_scenario):
    a = sample_channel_set(wiretap_scenario, np.random.default_rng(42))
    b = sample_channel_set(wiretap_scenario, np.random.default_rng(42))
    for name in ("h_ab", "h_ae", "h_ai", "h_ib", "h_ie"):
        assert np.array_equal(getattr(a, name), getattr(b, name))
    assert a.h_aw is None and a.h_iw is None


def test_direct_link_mean_power(wiretap_scenario):
    ch = sample_channel_set(wiretap_scenario.replace(n_elements=1), np.random.default_rng(5), size=1_000_000)
    want = path_loss(wiretap_scenario.link_distance("ab"), 3.5, -30)
    assert np.mean(np.abs(ch.h_ab) ** 2) == pytest.approx(want, rel=0.01)


def test_cascade_gain_is_product_of_hops(wiretap_scenario):
    sc = wiretap_scenario
    los = los_channel_set(sc.replace(rician=RicianParams(np.inf)))
    prod = sc.link_gain("ai") * sc.link_gain("ib")
    assert np.allclose(np.abs(los.cascade("b")) ** 2, prod, rtol=1e-12)


def test_los_phase_follows_distance():
    sc = Scenario(alice=Position(0, 0), bob=Position(3.05, 0), irs=Position(0, 1), rician=RicianParams(np.inf))
    c = sc.los_coefficient("ab")
    assert np.angle(c) == pytest.approx(np.angle(np.exp(-2j * np.pi * 3.05 / 0.1)), abs=1e-9)


def test_truncate_keeps_prefix(wiretap_scenario):
    ch = sample_channel_set(wiretap_scenario, np.random.default_rng(0))
    sub = ch.truncate(3)
    assert np.array_equal(sub.h_ib, ch.h_ib[:3])
    with pytest.raises(InvalidArgumentError):
        ch.truncate(9)


def test_channel_set_rejects_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        ChannelSet(h_ab=0j, h_ai=np.zeros(2, complex), h_ib=np.zeros(3, complex))


def test_scenario_validation():
    with pytest.raises(InvalidArgumentError):
        Scenario(alice=Position(0, 0), bob=Position(1, 0), irs=Position(0, 1), noise_power=0.0)
    with pytest.raises(InvalidArgumentError):
        Scenario(alice=Position(0, 0), bob=Position(1, 0), irs=Position(0, 1), n_elements=-1)
    with pytest.raises(InvalidArgumentError):
        PathLossParams(ref_gain_db=math.inf)
