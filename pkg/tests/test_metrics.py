import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hazekit.config import DehazeConfig
from hazekit.imgcore import DimensionMismatchError
from hazekit.metrics import (
    aggregate_losses,
    combined_losses,
    extreme_channel,
    loss_adversarial,
    loss_extreme,
    loss_gradient,
    loss_l1,
    psnr,
)
from oracles import extreme_brute, gradient_loss_brute, l1_brute, psnr_brute

seeds = st.integers(0, 2**32 - 1)


def pair(seed, shape=(8, 9, 3)):
    rng = np.random.default_rng(seed)
    return rng.random(shape), rng.random(shape)


def test_extreme_channel_examples():
    np.testing.assert_array_equal(extreme_channel(np.full((5, 5, 3), 0.5), 2), 0.5)
    img = np.full((5, 5, 3), 0.4)
    img[2, 2, 1] = 1.0
    ec = extreme_channel(img, 1)
    assert ec[1:4, 1:4].max() == 0.0
    assert ec[0, 0] == pytest.approx(0.4)


@settings(max_examples=30, deadline=None)
@given(seeds, st.integers(1, 4))
def test_extreme_channel_oracle_and_symmetry(seed, rho):
    I, _ = pair(seed)
    ec = extreme_channel(I, rho)
    assert np.array_equal(ec, extreme_brute(I, rho))
    assert np.array_equal(extreme_channel(1.0 - I, rho), ec)
    assert ec.min() >= 0.0 and ec.max() <= 0.5


def test_loss_extreme_examples():
    I, T = pair(0)
    assert loss_extreme(I, I) == 0.0
    assert loss_extreme(1.0 - T, T) == 0.0
    # phi(I) = 0.1 everywhere, phi(T) = 0 everywhere
    assert loss_extreme(np.full((4, 4, 3), 0.1), np.zeros((4, 4, 3)), 1) == pytest.approx(0.01)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_loss_extreme_inversion(seed):
    I, T = pair(seed)
    assert loss_extreme(I, T) == loss_extreme(1.0 - I, 1.0 - T)


def test_loss_gradient_examples():
    T = np.zeros((1, 2, 3))
    I = T.copy()
    I[0, 1, 0] = 0.2
    assert loss_gradient(I, T) == pytest.approx(0.1)
    assert loss_gradient(T, T) == 0.0


@settings(max_examples=30, deadline=None)
@given(seeds, st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_loss_gradient_offset_invariance_and_oracle(seed, a, b, c):
    I, T = pair(seed)
    assert loss_gradient(I + np.array([a, b, c]), I) == pytest.approx(0.0, abs=1e-12)
    base = loss_gradient(I, T)
    assert loss_gradient(I, T + np.array([a, b, c])) == pytest.approx(base, abs=1e-12)
    assert base == pytest.approx(gradient_loss_brute(I, T), rel=1e-12)


def test_loss_l1_examples():
    I, _ = pair(1)
    assert loss_l1(I, I) == 0.0
    T = np.full((3, 4, 3), 0.4)
    assert loss_l1(T + 0.1, T) == pytest.approx(0.3)
    assert loss_l1(np.ones((2, 2, 3)), np.zeros((2, 2, 3))) == 3.0


def test_loss_adversarial():
    assert loss_adversarial(0.5, 0.5) == pytest.approx(-1.3862943611198906, abs=1e-15)
    assert loss_adversarial(math.exp(-1), 1 - math.exp(-1)) == pytest.approx(-2.0, abs=1e-15)
    assert -1e-9 < loss_adversarial(1 - 1e-12, 1e-12) < 0.0
    for bad in [(0.0, 0.5), (0.5, 1.0), (1.0, 0.2), (0.3, -0.1)]:
        with pytest.raises(ValueError):
            loss_adversarial(*bad)


def test_psnr_examples():
    I, _ = pair(2)
    assert psnr(I, I) == math.inf
    T = np.full((4, 4, 3), 0.3)
    assert psnr(T + 0.1, T) == pytest.approx(20.0)
    assert psnr(np.ones((2, 2, 3)), np.zeros((2, 2, 3))) == 0.0


@pytest.mark.parametrize("seed", range(10))
def test_psnr_l1_agree_with_brute_force(seed):
    I, T = pair(seed, (16, 16, 3))
    assert psnr(I, T) == pytest.approx(psnr_brute(I, T), rel=1e-12)
    assert loss_l1(I, T) == pytest.approx(l1_brute(I, T), rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(seeds)
def test_symmetric_nonnegative(seed):
    I, T = pair(seed)
    for fn in (loss_l1, loss_extreme, loss_gradient, psnr):
        assert fn(I, T) >= 0.0
        assert fn(I, T) == pytest.approx(fn(T, I), rel=1e-12)


def test_mismatch():
    with pytest.raises(DimensionMismatchError):
        loss_l1(np.zeros((2, 2, 3)), np.zeros((2, 3, 3)))


def test_combined_report():
    I, _ = pair(3)
    rep = combined_losses(I, I)
    assert (rep.l1, rep.l_e, rep.l_t, rep.l_d1, rep.l_d) == (0.0, 0.0, 0.0, 0.0, 0.0)
    assert rep.psnr == math.inf and rep.l_adv is None
    assert rep.lines()[:4] == ["psnr=inf", "l1=0.000000", "le=0.000000", "lt=0.000000"]
    rep = combined_losses(I, I, d_real=0.5, d_fake=0.5)
    assert rep.l_d1 == pytest.approx(2 * math.log(0.5))
    with pytest.raises(ValueError):
        combined_losses(I, I, d_real=0.5)


def test_aggregate_arithmetic():
    l_d1, l_d = aggregate_losses(l1=0.05, l_e=0.01, l_t=0.1, l_adv=None, cfg=DehazeConfig())
    assert l_d1 == pytest.approx(2.1)
    assert l_d == pytest.approx(7.1)
    l_d1, _ = aggregate_losses(0.0, 0.01, 0.1, -1.0, DehazeConfig())
    assert l_d1 == pytest.approx(1.1)
