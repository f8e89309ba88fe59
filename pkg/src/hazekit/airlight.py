"""Atmospheric light estimation by hierarchical quadtree search."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

AIRLIGHT_FLOOR = 0.01


@dataclass(frozen=True)
class QuadRegion:
    x: int
    y: int
    w: int
    h: int
    score: float = float("nan")

    def view(self, img: np.ndarray) -> np.ndarray:
        return img[self.y : self.y + self.h, self.x : self.x + self.w]


def region_score(img: np.ndarray, region: QuadRegion) -> float:
    """Mean over channels of (channel mean - channel population std)."""
    samples = region.view(img).reshape(-1, img.shape[2])
    return float(np.mean(samples.mean(axis=0) - samples.std(axis=0)))


def split_region(region: QuadRegion) -> list[QuadRegion]:
    """Quarter a region; odd sizes give the extra row/column to the top/left.

    Children come in top-left, top-right, bottom-left, bottom-right order.
    Empty children (a side of length 1) are dropped.
    """
    w0, h0 = (region.w + 1) // 2, (region.h + 1) // 2
    w1, h1 = region.w - w0, region.h - h0
    children = [
        QuadRegion(region.x, region.y, w0, h0),
        QuadRegion(region.x + w0, region.y, w1, h0),
        QuadRegion(region.x, region.y + h0, w0, h1),
        QuadRegion(region.x + w0, region.y + h0, w1, h1),
    ]
    return [c for c in children if c.w > 0 and c.h > 0]


def quadtree_trace(img: np.ndarray, stop_size: int = 32) -> list[QuadRegion]:
    """Regions visited by the search, from the whole image to the final leaf."""
    height, width = img.shape[:2]
    if min(width, height) < 2:
        raise ValueError(f"airlight search needs at least 2x2 pixels, got {width}x{height}")
    if stop_size < 1:
        raise ValueError(f"stop_size must be >= 1, got {stop_size}")
    current = QuadRegion(0, 0, width, height)
    trace = [current]
    while max(current.w, current.h) > stop_size:
        best = None
        for child in split_region(current):
            scored = QuadRegion(child.x, child.y, child.w, child.h, region_score(img, child))
            # strict comparison: earlier quadrant wins ties
            if best is None or scored.score > best.score:
                best = scored
        current = best
        trace.append(current)
    return trace


def estimate_airlight(img: np.ndarray, stop_size: int = 32) -> np.ndarray:
    """Estimate the atmospheric light of a hazy RGB image in ``[0, 1]``.

    The image is quartered repeatedly, descending into the quadrant with the
    highest score, until the region's longer side is at most ``stop_size``.
    Inside that region the pixel closest (Euclidean) to white is returned,
    first in row-major order on ties. Channels equal to zero are raised to
    ``AIRLIGHT_FLOOR`` so that dividing by the airlight stays defined.
    """
    img = np.asarray(img, dtype=np.float64)
    leaf = quadtree_trace(img, stop_size)[-1]
    pixels = leaf.view(img).reshape(-1, img.shape[2])
    dist2 = np.sum((1.0 - pixels) ** 2, axis=1)
    a = pixels[int(np.argmin(dist2))].copy()
    return np.maximum(a, AIRLIGHT_FLOOR)
