"""Clipped square-window minimum, optionally computed in row strips."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy.ndimage import minimum_filter


def window_min(plane: np.ndarray, radius: int, workers: int = 1) -> np.ndarray:
    """Minimum over the ``(2r+1)^2`` window centred on each pixel.

    The window is clipped at the image border. Edge replication
    (``mode="nearest"``) only repeats values already inside the clipped
    window, so the minimum is identical.
    """
    size = 2 * radius + 1
    height = plane.shape[0]
    if workers <= 1 or height < 2 * workers:
        return minimum_filter(plane, size=size, mode="nearest")

    out = np.empty_like(plane)
    bounds = np.linspace(0, height, workers + 1).astype(int)

    def strip(i: int) -> None:
        lo, hi = bounds[i], bounds[i + 1]
        # halo rows so every output row sees its full clipped window
        src_lo, src_hi = max(0, lo - radius), min(height, hi + radius)
        part = minimum_filter(plane[src_lo:src_hi], size=size, mode="nearest")
        out[lo:hi] = part[lo - src_lo : hi - src_lo]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(strip, range(workers)))
    return out
