"""Scene restoration and synthetic haze under the Koschmieder model.

The hazy image is ``Z = I * t + A * (1 - t)`` with ``t = exp(-beta * depth)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hazekit.imgcore import as_airlight, as_scalar_map, check_same_grid

LIGHT_BETA = (1.2, 2.0)
HEAVY_BETA = (2.5, 3.0)
AIRLIGHT_RANGE = (0.625, 1.0)


def restore(Z: np.ndarray, t: np.ndarray, A, t_floor: float = 0.1) -> np.ndarray:
    """Invert the haze model: ``I = (Z - A) / max(t, t_floor) + A``, clamped to [0, 1]."""
    if not 0.0 < t_floor <= 1.0:
        raise ValueError(f"t_floor must lie in (0, 1], got {t_floor}")
    Z = np.asarray(Z, dtype=np.float64)
    t = as_scalar_map(t, "transmission")
    check_same_grid(Z, t, "hazy image vs transmission")
    A = as_airlight(A)
    out = (Z - A) / np.maximum(t, t_floor)[..., None] + A
    return np.clip(out, 0.0, 1.0)


@dataclass(frozen=True)
class SynthesisParams:
    beta: float
    airlight: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        if not self.beta > 0:
            raise ValueError(f"beta must be > 0, got {self.beta}")
        object.__setattr__(self, "airlight", as_airlight(self.airlight))


def sample_synthesis_params(seed: int, heavy: bool = False) -> SynthesisParams:
    """Draw ``beta`` and a per-channel airlight uniformly from the training ranges.

    Light haze uses ``beta`` in [1.2, 2.0], heavy haze [2.5, 3.0]; each
    airlight channel is independent in [0.625, 1.0]. The generator is
    numpy's PCG64 seeded with ``seed``, so draws are reproducible across
    platforms.
    """
    rng = np.random.default_rng(seed)
    lo, hi = HEAVY_BETA if heavy else LIGHT_BETA
    beta = float(rng.uniform(lo, hi))
    airlight = rng.uniform(*AIRLIGHT_RANGE, size=3)
    return SynthesisParams(beta=beta, airlight=airlight, seed=seed)


def synthesize(I: np.ndarray, depth: np.ndarray, params: SynthesisParams) -> tuple[np.ndarray, np.ndarray]:
    """Render haze over a clean image; returns ``(Z, t)``."""
    I = np.asarray(I, dtype=np.float64)
    depth = as_scalar_map(depth, "depth")
    check_same_grid(I, depth, "clean image vs depth")
    if np.any(depth < 0):
        raise ValueError("depth must be non-negative")
    t = np.exp(-params.beta * depth)
    A = params.airlight
    Z = I * t[..., None] + A * (1.0 - t[..., None])
    return Z, t
