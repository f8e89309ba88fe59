"""Image containers and file I/O.

Images are plain numpy arrays rather than wrapper objects:

* a *pixel image* is a ``float64`` array of shape ``(H, W, 3)`` (R, G, B)
  with every sample in ``[0, 1]``;
* a *scalar map* is a ``float64`` array of shape ``(H, W)`` (transmission,
  depth, extreme channel, ...);
* an *airlight* is a ``float64`` array of shape ``(3,)`` with ``0 < a_c <= 1``.

Supported files are 8/16-bit RGB or grayscale PNG, binary PPM (P6, and P5
for grayscale) and PFM for lossless float maps. PFM files are written as
single-channel ``Pf``, little-endian (scale ``-1.0``) with rows stored
bottom-to-top.
"""

from __future__ import annotations

import os
import re
from pathlib import Path
from typing import Union

import numpy as np
import png

PathLike = Union[str, os.PathLike]

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


class ImageIOError(OSError):
    """Base class for image read/write failures."""


class UnreadableImageError(ImageIOError):
    """File missing, truncated, or not in a recognised format."""


class UnsupportedBitDepthError(ImageIOError):
    """PNG/PPM sample depth other than 8 or 16 bits."""


class UnsupportedColorTypeError(ImageIOError):
    """PNG color type other than RGB or grayscale (palette, alpha)."""


class MalformedHeaderError(ImageIOError):
    """PFM/PPM header that cannot be parsed or disagrees with the payload."""


class DimensionMismatchError(ValueError):
    """Two arrays that must share a pixel grid do not."""


# ---------------------------------------------------------------------------
# validation helpers
# ---------------------------------------------------------------------------


def as_image(data, name: str = "image") -> np.ndarray:
    """Return ``data`` as a validated float64 ``(H, W, 3)`` pixel image."""
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have shape (H, W, 3), got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite samples")
    if arr.min() < 0.0 or arr.max() > 1.0:
        raise ValueError(f"{name} samples must lie in [0, 1]")
    return arr


def as_scalar_map(data, name: str = "map") -> np.ndarray:
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must have shape (H, W), got {arr.shape}")
    return arr


def as_airlight(values) -> np.ndarray:
    a = np.asarray(values, dtype=np.float64).reshape(-1)
    if a.shape != (3,):
        raise ValueError(f"airlight needs 3 channels, got {a.size}")
    if not np.all(np.isfinite(a)) or np.any(a <= 0.0) or np.any(a > 1.0):
        raise ValueError(f"airlight channels must lie in (0, 1], got {a.tolist()}")
    return a


def check_same_grid(a: np.ndarray, b: np.ndarray, what: str = "inputs") -> None:
    if a.shape[:2] != b.shape[:2]:
        raise DimensionMismatchError(
            f"{what}: {a.shape[1]}x{a.shape[0]} vs {b.shape[1]}x{b.shape[0]}"
        )


# ---------------------------------------------------------------------------
# PNG / PPM
# ---------------------------------------------------------------------------


def _read_png(path: Path) -> tuple[np.ndarray, int]:
    """Return raw samples ``(H, W, planes)`` and the format maximum."""
    try:
        width, height, rows, info = png.Reader(filename=str(path)).read()
        if info.get("palette"):
            raise UnsupportedColorTypeError(f"{path}: palette PNG not supported")
        if info["alpha"]:
            raise UnsupportedColorTypeError(f"{path}: PNG with alpha not supported")
        bitdepth = info["bitdepth"]
        if bitdepth not in (8, 16):
            raise UnsupportedBitDepthError(f"{path}: {bitdepth}-bit PNG not supported")
        planes = info["planes"]
        raw = np.array([np.asarray(row) for row in rows], dtype=np.uint16)
    except png.Error as exc:
        raise UnreadableImageError(f"{path}: {exc}") from exc
    return raw.reshape(height, width, planes), (1 << bitdepth) - 1


_PNM_TOKEN = re.compile(rb"(?:\s|#[^\n]*\n?)*(\S+)")


def _read_pnm(path: Path, blob: bytes) -> tuple[np.ndarray, int]:
    tokens = []
    pos = 0
    for _ in range(4):
        m = _PNM_TOKEN.match(blob, pos)
        if m is None:
            raise MalformedHeaderError(f"{path}: truncated PPM header")
        tokens.append(m.group(1))
        pos = m.end()
    magic = tokens[0]
    planes = {b"P6": 3, b"P5": 1}.get(magic)
    if planes is None:
        raise UnreadableImageError(f"{path}: only binary PPM/PGM (P6/P5) supported")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError as exc:
        raise MalformedHeaderError(f"{path}: bad PPM header") from exc
    if width < 1 or height < 1:
        raise MalformedHeaderError(f"{path}: bad PPM dimensions {width}x{height}")
    if not 0 < maxval < 65536:
        raise UnsupportedBitDepthError(f"{path}: PPM maxval {maxval} out of range")
    # exactly one whitespace byte separates the header from the raster
    pos += 1
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
    count = width * height * planes
    payload = blob[pos : pos + count * dtype.itemsize]
    if len(payload) != count * dtype.itemsize:
        raise UnreadableImageError(f"{path}: truncated PPM raster")
    raw = np.frombuffer(payload, dtype=dtype).astype(np.uint16)
    return raw.reshape(height, width, planes), maxval


def _read_raw(path: PathLike) -> tuple[np.ndarray, int]:
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise UnreadableImageError(f"{path}: {exc.strerror or exc}") from exc
    if blob.startswith(PNG_SIGNATURE):
        return _read_png(path)
    if blob[:2] in (b"P5", b"P6"):
        return _read_pnm(path, blob)
    raise UnreadableImageError(f"{path}: not a PNG or binary PPM file")


def load_image(path: PathLike) -> np.ndarray:
    """Load a PNG or binary PPM as a float64 RGB image in ``[0, 1]``.

    Samples are divided by the format maximum (255, 65535, or the PPM
    maxval). Grayscale input is replicated into all three channels.
    """
    raw, maxval = _read_raw(path)
    img = raw.astype(np.float64) / float(maxval)
    if img.shape[2] == 1:
        img = np.repeat(img, 3, axis=2)
    return img


def quantize8(img: np.ndarray) -> np.ndarray:
    """Clamp to ``[0, 1]`` and round half-up to 8-bit codes."""
    return np.floor(np.clip(img, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def _write_png(path: PathLike, rows: np.ndarray, *, greyscale: bool, bitdepth: int) -> None:
    height, width = rows.shape[0], rows.shape[1]
    writer = png.Writer(width, height, greyscale=greyscale, bitdepth=bitdepth)
    try:
        with open(path, "wb") as fh:
            writer.write(fh, rows.reshape(height, -1))
    except OSError as exc:
        raise ImageIOError(f"{path}: cannot write ({exc.strerror or exc})") from exc


def save_image(img: np.ndarray, path: PathLike) -> None:
    """Write an 8-bit RGB PNG; samples are clamped then rounded half-up."""
    img = np.asarray(img, dtype=np.float64)
    if img.ndim != 3 or img.shape[2] != 3:
        raise ValueError(f"image must have shape (H, W, 3), got {img.shape}")
    _write_png(path, quantize8(img), greyscale=False, bitdepth=8)


# ---------------------------------------------------------------------------
# scalar maps (PFM, PNG16)
# ---------------------------------------------------------------------------


def _read_pfm(path: Path, blob: bytes) -> np.ndarray:
    parts = blob.split(b"\n", 3)
    if len(parts) < 4:
        raise MalformedHeaderError(f"{path}: truncated PFM header")
    magic, dims, scale_line, payload = parts
    if magic.strip() != b"Pf":
        raise MalformedHeaderError(f"{path}: expected single-channel 'Pf' map")
    try:
        width, height = (int(v) for v in dims.split())
        scale = float(scale_line)
    except ValueError as exc:
        raise MalformedHeaderError(f"{path}: bad PFM header") from exc
    if width < 1 or height < 1 or scale == 0.0:
        raise MalformedHeaderError(f"{path}: bad PFM header")
    dtype = np.dtype("<f4") if scale < 0 else np.dtype(">f4")
    if len(payload) != width * height * 4:
        raise MalformedHeaderError(
            f"{path}: payload has {len(payload)} bytes, header implies {width * height * 4}"
        )
    data = np.frombuffer(payload, dtype=dtype).reshape(height, width)
    return np.flipud(data).astype(np.float64)


def load_scalar_map(path: PathLike) -> np.ndarray:
    """Load a PFM (``Pf``) or grayscale PNG map as float64 ``(H, W)``.

    PNG maps are divided by their format maximum (65535 for 16-bit).
    """
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as exc:
        raise UnreadableImageError(f"{path}: {exc.strerror or exc}") from exc
    if blob.startswith(PNG_SIGNATURE):
        raw, maxval = _read_png(path)
        if raw.shape[2] != 1:
            raise UnsupportedColorTypeError(f"{path}: scalar map PNG must be grayscale")
        return raw[:, :, 0].astype(np.float64) / float(maxval)
    if blob.startswith(b"Pf") or blob.startswith(b"PF"):
        return _read_pfm(path, blob)
    raise UnreadableImageError(f"{path}: not a PFM or PNG map")


def save_scalar_map(data: np.ndarray, path: PathLike) -> None:
    """Write a scalar map; ``.png`` paths get 16-bit grayscale, anything else PFM.

    PFM stores float32, so values already representable in float32 round
    trip bit-exactly.
    """
    arr = np.asarray(data)
    if arr.ndim != 2:
        raise ValueError(f"scalar map must have shape (H, W), got {arr.shape}")
    if str(path).lower().endswith(".png"):
        codes = np.floor(np.clip(arr, 0.0, 1.0) * 65535.0 + 0.5).astype(np.uint16)
        _write_png(path, codes, greyscale=True, bitdepth=16)
        return
    height, width = arr.shape
    header = f"Pf\n{width} {height}\n-1.0\n".encode("ascii")
    body = np.ascontiguousarray(np.flipud(arr), dtype="<f4").tobytes()
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(body)
    except OSError as exc:
        raise ImageIOError(f"{path}: cannot write ({exc.strerror or exc})") from exc
