"""Image-pair losses and PSNR on the [0, 1] scale.

Reductions go through ``numpy.sum``/``mean``, which use fixed-block pairwise
summation, so results do not depend on thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from hazekit._window import window_min
from hazekit.config import DehazeConfig
from hazekit.imgcore import check_same_grid


def _pair(I, T) -> tuple[np.ndarray, np.ndarray]:
    I = np.asarray(I, dtype=np.float64)
    T = np.asarray(T, dtype=np.float64)
    check_same_grid(I, T, "image pair")
    if I.shape != T.shape:
        raise ValueError(f"channel mismatch: {I.shape} vs {T.shape}")
    return I, T


def extreme_channel(I: np.ndarray, rho: int = 7, workers: int = 1) -> np.ndarray:
    """Window minimum of ``min_c min(I_c, 1 - I_c)``; values lie in [0, 0.5]."""
    I = np.asarray(I, dtype=np.float64)
    folded = np.minimum(I, 1.0 - I).min(axis=2)
    return window_min(folded, rho, workers)


def loss_extreme(I, T, rho: int = 7) -> float:
    """Mean squared difference between the two extreme channels."""
    I, T = _pair(I, T)
    diff = extreme_channel(I, rho) - extreme_channel(T, rho)
    return float(np.mean(diff * diff))


def _grad_h(x: np.ndarray) -> np.ndarray:
    g = np.zeros_like(x)
    g[:, :-1] = x[:, 1:] - x[:, :-1]
    return g


def _grad_v(x: np.ndarray) -> np.ndarray:
    g = np.zeros_like(x)
    g[:-1] = x[1:] - x[:-1]
    return g


def loss_gradient(I, T) -> float:
    """Sum over pixels and channels of forward-difference gradient gaps, over W*H.

    Gradients are zero in the last column (horizontal) and last row (vertical).
    """
    I, T = _pair(I, T)
    total = np.abs(_grad_h(I) - _grad_h(T)) + np.abs(_grad_v(I) - _grad_v(T))
    return float(np.sum(total) / (I.shape[0] * I.shape[1]))


def loss_l1(I, T) -> float:
    """Per-pixel channel-summed absolute error, averaged over W*H."""
    I, T = _pair(I, T)
    return float(np.sum(np.abs(I - T)) / (I.shape[0] * I.shape[1]))


def loss_adversarial(d_real: float, d_fake: float) -> float:
    """``log D(T) + log(1 - D(I))`` for discriminator outputs in (0, 1)."""
    for name, v in (("d_real", d_real), ("d_fake", d_fake)):
        if not 0.0 < v < 1.0:
            raise ValueError(f"{name} must lie strictly inside (0, 1), got {v}")
    return math.log(d_real) + math.log1p(-d_fake)


def psnr(I, T) -> float:
    """Peak signal-to-noise ratio in dB with peak 1; ``inf`` for identical images."""
    I, T = _pair(I, T)
    mse = float(np.mean((I - T) ** 2))
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(1.0 / mse)


@dataclass(frozen=True)
class LossReport:
    psnr: float
    l1: float
    l_e: float
    l_t: float
    l_adv: float | None = None
    l_d1: float = 0.0
    l_d: float = 0.0

    def lines(self) -> list[str]:
        """``key=value`` lines for the metrics command."""
        out = [
            f"psnr={self.psnr:.6f}" if math.isfinite(self.psnr) else "psnr=inf",
            f"l1={self.l1:.6f}",
            f"le={self.l_e:.6f}",
            f"lt={self.l_t:.6f}",
        ]
        if self.l_adv is not None:
            out.append(f"ladv={self.l_adv:.6f}")
        out += [f"ld1={self.l_d1:.6f}", f"ld={self.l_d:.6f}"]
        return out


def aggregate_losses(l1: float, l_e: float, l_t: float, l_adv: float | None,
                     cfg: DehazeConfig = DehazeConfig()) -> tuple[float, float]:
    """Return ``(L_d1, L_d)`` with ``L_d1 = w_adv*l_adv + w_e*l_e + l_t`` and
    ``L_d = w_R*l1 + L_d1``; the adversarial term is dropped when absent."""
    l_d1 = cfg.w_e * l_e + l_t
    if l_adv is not None:
        l_d1 += cfg.w_adv * l_adv
    return l_d1, cfg.w_R * l1 + l_d1


def combined_losses(I, T, cfg: DehazeConfig = DehazeConfig(),
                    d_real: float | None = None, d_fake: float | None = None) -> LossReport:
    I, T = _pair(I, T)
    l_adv = None
    if d_real is not None or d_fake is not None:
        if d_real is None or d_fake is None:
            raise ValueError("adversarial term needs both d_real and d_fake")
        l_adv = loss_adversarial(d_real, d_fake)
    l1 = loss_l1(I, T)
    l_e = loss_extreme(I, T, cfg.rho)
    l_t = loss_gradient(I, T)
    l_d1, l_d = aggregate_losses(l1, l_e, l_t, l_adv, cfg)
    return LossReport(psnr=psnr(I, T), l1=l1, l_e=l_e, l_t=l_t, l_adv=l_adv, l_d1=l_d1, l_d=l_d)
