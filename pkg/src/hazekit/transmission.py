"""Transmission initialisation (dark direct attenuation) and haze-line averaging."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hazekit._window import window_min
from hazekit.config import DehazeConfig
from hazekit.imgcore import as_airlight, as_scalar_map, check_same_grid

TWO_PI = 2.0 * np.pi


def ddap_transmission(Z: np.ndarray, A, rho: int = 7, workers: int = 1) -> np.ndarray:
    """Initial transmission ``t0 = 1 - windowmin_rho(min_c Z_c / A_c)``.

    The window is the ``(2*rho+1)`` square around each pixel, clipped at the
    border. The result is clamped to ``[0, 1]``; pixels brighter than the
    airlight would otherwise go negative.
    """
    A = as_airlight(A)
    if rho < 0:
        raise ValueError(f"rho must be >= 0, got {rho}")
    Z = np.asarray(Z, dtype=np.float64)
    dark = (Z / A).min(axis=2)
    t0 = 1.0 - window_min(dark, rho, workers)
    return np.clip(t0, 0.0, 1.0)


@dataclass(frozen=True)
class SphericalCoords:
    """Per-pixel spherical coordinates of ``Z(p) - A``.

    ``theta`` is the longitude ``atan2(dG, dR)`` in ``[0, 2pi)``, ``psi`` the
    latitude ``arccos(dB / r)`` in ``[0, pi]``. Both are zero where ``r == 0``
    and such pixels are flagged in ``zero``.
    """

    r: np.ndarray
    theta: np.ndarray
    psi: np.ndarray
    zero: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.r.shape


def to_spherical(Z: np.ndarray, A) -> SphericalCoords:
    d = np.asarray(Z, dtype=np.float64) - np.asarray(A, dtype=np.float64)
    r = np.sqrt(np.sum(d * d, axis=2))
    zero = r == 0.0
    theta = np.mod(np.arctan2(d[..., 1], d[..., 0]), TWO_PI)
    # mod can round tiny negative angles up to exactly 2pi
    theta[theta >= TWO_PI] = 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        cos_psi = np.where(zero, 1.0, d[..., 2] / np.where(zero, 1.0, r))
    psi = np.arccos(np.clip(cos_psi, -1.0, 1.0))
    theta[zero] = 0.0
    psi[zero] = 0.0
    return SphericalCoords(r=r, theta=theta, psi=psi, zero=zero)


@dataclass(frozen=True)
class HazeLineIndex:
    """Partition of the pixels into haze-line subsets.

    Pixel indices are flat row-major offsets. ``order`` lists every pixel
    with ``r > 0`` grouped by subset, and subset ``s`` is
    ``order[offsets[s]:offsets[s + 1]]``. Within a bin the pixels are sorted
    by radius, ties by pixel index, and the bin is cut into contiguous
    subsets.
    """

    shape: tuple[int, int]
    n_theta: int
    n_psi: int
    bin_id: np.ndarray  # per pixel, theta_bin * n_psi + psi_bin; -1 when r == 0
    subset_id: np.ndarray  # per pixel; -1 when r == 0
    order: np.ndarray
    offsets: np.ndarray
    zero_radius: np.ndarray

    @property
    def n_subsets(self) -> int:
        return len(self.offsets) - 1

    @property
    def subsets(self) -> list[np.ndarray]:
        return np.split(self.order, self.offsets[1:-1]) if self.n_subsets else []

    @property
    def bins(self) -> dict[tuple[int, int], np.ndarray]:
        """Non-empty angular bins, keyed ``(theta_bin, psi_bin)``, pixels ascending."""
        pixels = np.flatnonzero(self.bin_id >= 0)
        ids = self.bin_id[pixels]
        srt = np.argsort(ids, kind="stable")
        ids, pixels = ids[srt], pixels[srt]
        uniq, starts = np.unique(ids, return_index=True)
        groups = np.split(pixels, starts[1:])
        return {(int(b) // self.n_psi, int(b) % self.n_psi): g for b, g in zip(uniq, groups)}


def subset_counts(n: int, nu: int) -> list[int]:
    """Sizes of the ``max(1, n // nu)`` near-equal chunks a bin of ``n`` splits into."""
    k = max(1, n // nu)
    q, rem = divmod(n, k)
    return [q + 1] * rem + [q] * (k - rem)


def build_haze_line_index(sph: SphericalCoords, cfg: DehazeConfig = DehazeConfig()) -> HazeLineIndex:
    shape = sph.shape
    r = sph.r.reshape(-1)
    zero = sph.zero.reshape(-1)
    pixels = np.flatnonzero(~zero)

    ti = np.floor(sph.theta.reshape(-1)[pixels] / TWO_PI * cfg.n_theta).astype(np.int64)
    pj = np.floor(sph.psi.reshape(-1)[pixels] / np.pi * cfg.n_psi).astype(np.int64)
    ti = np.minimum(ti, cfg.n_theta - 1)
    pj = np.minimum(pj, cfg.n_psi - 1)
    bins = ti * cfg.n_psi + pj

    bin_id = np.full(r.size, -1, dtype=np.int64)
    bin_id[pixels] = bins
    subset_id = np.full(r.size, -1, dtype=np.int64)

    if pixels.size == 0:
        return HazeLineIndex(shape, cfg.n_theta, cfg.n_psi, bin_id, subset_id,
                             pixels, np.zeros(1, dtype=np.int64), np.flatnonzero(zero))

    # lexsort is stable, so equal (bin, r) keep ascending pixel order
    srt = np.lexsort((r[pixels], bins))
    order = pixels[srt]
    sorted_bins = bins[srt]

    starts = np.flatnonzero(np.r_[True, sorted_bins[1:] != sorted_bins[:-1]])
    sizes = np.diff(np.r_[starts, sorted_bins.size])
    k = np.maximum(1, sizes // cfg.nu)
    q, rem = sizes // k, sizes % k
    first_subset = np.r_[0, np.cumsum(k)[:-1]]

    per = np.repeat(np.arange(starts.size), sizes)
    j = np.arange(sorted_bins.size) - starts[per]
    big = rem[per] * (q[per] + 1)  # elements covered by the larger chunks
    chunk = np.where(j < big, j // (q[per] + 1),
                     rem[per] + (j - big) // q[per])
    sub = first_subset[per] + chunk

    subset_id[order] = sub
    offsets = np.r_[0, np.cumsum(np.bincount(sub, minlength=int(k.sum())))]
    return HazeLineIndex(shape, cfg.n_theta, cfg.n_psi, bin_id, subset_id,
                         order, offsets.astype(np.int64), np.flatnonzero(zero))


def haze_line_ratios(t0: np.ndarray, sph: SphericalCoords, idx: HazeLineIndex) -> np.ndarray:
    """Per-subset ratio ``sum(t0) / sum(r)``."""
    t0 = np.asarray(t0, dtype=np.float64).reshape(-1)
    r = sph.r.reshape(-1)
    # bincount adds in array order, so the sums do not depend on scheduling
    sum_t = np.bincount(idx.subset_id[idx.order], weights=t0[idx.order], minlength=idx.n_subsets)
    sum_r = np.bincount(idx.subset_id[idx.order], weights=r[idx.order], minlength=idx.n_subsets)
    assert np.all(sum_r > 0), "haze-line subset with zero total radius"
    return sum_t / sum_r


def haze_line_average(t0: np.ndarray, sph: SphericalCoords, idx: HazeLineIndex,
                      clip: bool = True) -> np.ndarray:
    """Replace ``t0`` by ``ratio(subset) * r(p)`` on every haze-line subset.

    Pixels with ``r == 0`` have no direction and keep their ``t0``.
    """
    t0 = as_scalar_map(t0, "t0")
    check_same_grid(t0, sph.r, "t0 vs haze-line coordinates")
    ratios = haze_line_ratios(t0, sph, idx)
    flat = t0.reshape(-1).copy()
    members = idx.order
    flat[members] = ratios[idx.subset_id[members]] * sph.r.reshape(-1)[members]
    out = flat.reshape(t0.shape)
    return np.clip(out, 0.0, 1.0) if clip else out


def estimate_transmission(Z: np.ndarray, A, cfg: DehazeConfig = DehazeConfig(),
                          workers: int = 1, skip_hla: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(t0, t)``: the DDAP map and its haze-line averaged refinement.

    With ``skip_hla`` the refinement is skipped and ``t`` is a copy of ``t0``.
    """
    t0 = ddap_transmission(Z, A, cfg.rho, workers)
    if skip_hla:
        return t0, t0.copy()
    sph = to_spherical(Z, A)
    idx = build_haze_line_index(sph, cfg)
    return t0, haze_line_average(t0, sph, idx)
