"""Pixel rasters, color conversions, resizing, and the jet colormap.

Conventions used across the package:

- ``Image``: ``uint8`` array, shape ``(H, W, 3)`` for RGB or ``(H, W)`` for a
  single gray channel, row-major.
- ``FloatPlane``: ``float64`` array, shape ``(H, W)``, all samples finite.

Images travel as PNG on disk; float planes use a tiny raw format (``.fpl``,
two little-endian uint32 dims followed by little-endian float32 samples).
"""

from __future__ import annotations

import struct

import numpy as np
from PIL import Image as _PILImage

# ITU-R BT.601 luma weights.
_LUMA_R = 0.299
_LUMA_G = 0.587
_LUMA_B = 0.114


def validate_image(img: np.ndarray) -> np.ndarray:
    """Check Image conventions (uint8, 2-D gray or 3-D RGB) and return it."""
    arr = np.asarray(img)
    if arr.dtype != np.uint8:
        raise ValueError(f"image must be uint8, got {arr.dtype}")
    if arr.ndim == 2:
        pass
    elif arr.ndim == 3 and arr.shape[2] == 3:
        pass
    else:
        raise ValueError(f"image must be (H, W) or (H, W, 3), got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("image dimensions must be >= 1")
    return arr


def validate_plane(plane: np.ndarray) -> np.ndarray:
    """Check FloatPlane conventions (2-D, finite float64) and return it."""
    arr = np.asarray(plane, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"float plane must be 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError("plane dimensions must be >= 1")
    if not np.isfinite(arr).all():
        raise ValueError("float plane contains non-finite samples")
    return arr


def rgb_to_gray(img: np.ndarray) -> np.ndarray:
    """Luminance plane of an RGB image (BT.601 weights), range [0, 255].

    Rejects single-channel input: callers that already have a gray plane
    should not round-trip it through here.
    """
    arr = validate_image(img)
    if arr.ndim != 3:
        raise ValueError("rgb_to_gray expects a 3-channel image")
    f = arr.astype(np.float64)
    return _LUMA_R * f[:, :, 0] + _LUMA_G * f[:, :, 1] + _LUMA_B * f[:, :, 2]


def rgb_to_hsv_array(rgb: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized hexcone RGB -> HSV.

    ``rgb`` is float in [0, 255] with channels last. Returns (h, s, v) with
    h in [0, 1) as a fraction of the full circle, s and v in [0, 1].
    Achromatic pixels get hue 0.
    """
    f = np.asarray(rgb, dtype=np.float64) / 255.0
    r, g, b = f[..., 0], f[..., 1], f[..., 2]
    maxc = np.maximum(np.maximum(r, g), b)
    minc = np.minimum(np.minimum(r, g), b)
    delta = maxc - minc
    v = maxc
    s = np.where(maxc > 0.0, delta / np.where(maxc > 0.0, maxc, 1.0), 0.0)

    # Sector offsets per dominant channel; divide-by-zero is masked out below.
    safe = np.where(delta > 0.0, delta, 1.0)
    h_r = np.mod((g - b) / safe, 6.0)
    h_g = (b - r) / safe + 2.0
    h_b = (r - g) / safe + 4.0
    h = np.where(maxc == r, h_r, np.where(maxc == g, h_g, h_b))
    h = np.where(delta > 0.0, h / 6.0, 0.0)
    h = np.mod(h, 1.0)
    return h, s, v


def hsv_to_rgb_array(h: np.ndarray, s: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Vectorized hexcone HSV -> RGB, returning float in [0, 255] channels-last."""
    h = np.mod(np.asarray(h, dtype=np.float64), 1.0)
    s = np.clip(np.asarray(s, dtype=np.float64), 0.0, 1.0)
    v = np.clip(np.asarray(v, dtype=np.float64), 0.0, 1.0)

    h6 = h * 6.0
    c = v * s
    x = c * (1.0 - np.abs(np.mod(h6, 2.0) - 1.0))
    m = v - c

    sector = np.floor(h6).astype(np.int64) % 6
    z = np.zeros_like(c)
    r = np.choose(sector, [c, x, z, z, x, c])
    g = np.choose(sector, [x, c, c, x, z, z])
    b = np.choose(sector, [z, z, x, c, c, x])
    return np.stack([r + m, g + m, b + m], axis=-1) * 255.0


def rgb_to_hsv(pixel: tuple[int, int, int]) -> tuple[float, float, float]:
    """Single-pixel RGB (8-bit triple) -> (hue, sat, val) per the array form."""
    h, s, v = rgb_to_hsv_array(np.asarray(pixel, dtype=np.float64))
    return float(h), float(s), float(v)


def hsv_to_rgb(hsv: tuple[float, float, float]) -> tuple[int, int, int]:
    """Single-pixel (hue, sat, val) -> rounded 8-bit RGB triple."""
    h, s, v = hsv
    rgb = hsv_to_rgb_array(np.float64(h), np.float64(s), np.float64(v))
    out = np.rint(rgb).astype(np.int64)
    out = np.clip(out, 0, 255)
    return int(out[0]), int(out[1]), int(out[2])


def _axis_coords(n_src: int, n_dst: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Corner-aligned sample positions: lower index, upper index, fraction."""
    if n_dst == 1:
        pos = np.zeros(1, dtype=np.float64)
    else:
        pos = np.arange(n_dst, dtype=np.float64) * ((n_src - 1) / (n_dst - 1))
    lo = np.floor(pos).astype(np.int64)
    lo = np.minimum(lo, n_src - 1)
    hi = np.minimum(lo + 1, n_src - 1)
    frac = pos - lo
    return lo, hi, frac


def resize_bilinear(img: np.ndarray, width: int, height: int) -> np.ndarray:
    """Bilinear resize with corner-aligned sampling.

    Accepts an Image (uint8, rounded output) or a FloatPlane (float64
    output). Resizing to the source dimensions is bit-exact, and constant
    inputs stay constant at any size (interpolation uses the ``a + f*(b-a)``
    form, which is exact when ``a == b``).
    """
    if width < 1 or height < 1:
        raise ValueError("target dimensions must be >= 1")
    arr = np.asarray(img)
    is_image = arr.dtype == np.uint8
    if is_image:
        arr = validate_image(arr)
    else:
        arr = validate_plane(arr)
    src_h, src_w = arr.shape[0], arr.shape[1]

    y_lo, y_hi, fy = _axis_coords(src_h, height)
    x_lo, x_hi, fx = _axis_coords(src_w, width)

    f = arr.astype(np.float64)
    top = f[y_lo]
    bot = f[y_hi]
    if f.ndim == 3:
        rows = top + fy[:, None, None] * (bot - top)
        left = rows[:, x_lo]
        right = rows[:, x_hi]
        out = left + fx[None, :, None] * (right - left)
    else:
        rows = top + fy[:, None] * (bot - top)
        left = rows[:, x_lo]
        right = rows[:, x_hi]
        out = left + fx[None, :] * (right - left)

    if is_image:
        return np.clip(np.rint(out), 0, 255).astype(np.uint8)
    return out


def jet_colormap(v: float | np.ndarray) -> np.ndarray:
    """Blue-to-red heat colormap on [0, 1]; input is clamped.

    Piecewise-linear ramps: blue holds half intensity on [0, 0.25] then
    fades out by 0.5; green is a trapezoid peaking around 0.5; red fades in
    from 0.5 and holds half intensity on [0.75, 1]. The end plateaus are
    clamped at half intensity so that red-minus-blue grows monotonically
    with v (the classic jet ramps at the extremes break that ordering).

    Scalar input yields one uint8 RGB triple; an array of shape S yields
    uint8 of shape S + (3,).
    """
    val = np.clip(np.asarray(v, dtype=np.float64), 0.0, 1.0)
    b = 0.5 * np.clip((0.5 - val) / 0.25, 0.0, 1.0)
    g = np.clip(1.5 - np.abs(4.0 * val - 2.0), 0.0, 1.0)
    r = 0.5 * np.clip((val - 0.5) / 0.25, 0.0, 1.0)
    rgb = np.stack([r, g, b], axis=-1) * 255.0
    return np.rint(rgb).astype(np.uint8)


def read_png(path: str) -> np.ndarray:
    """Load a PNG as an Image (gray stays (H, W); everything else -> RGB)."""
    with _PILImage.open(path) as im:
        if im.mode == "L":
            return np.asarray(im, dtype=np.uint8)
        return np.asarray(im.convert("RGB"), dtype=np.uint8)


def write_png(path: str, img: np.ndarray) -> None:
    """Write an Image to an 8-bit non-interlaced PNG."""
    arr = validate_image(img)
    mode = "L" if arr.ndim == 2 else "RGB"
    # Pillow writes non-interlaced 8-bit PNGs by default, which is all we promise.
    _PILImage.fromarray(arr, mode=mode).save(path, format="PNG")


def write_fpl(path: str, plane: np.ndarray) -> None:
    """Serialize a FloatPlane: <u32 width, <u32 height, then <f32 samples."""
    arr = validate_plane(plane)
    h, w = arr.shape
    with open(path, "wb") as fh:
        fh.write(struct.pack("<II", w, h))
        fh.write(arr.astype("<f4").tobytes())


def read_fpl(path: str) -> np.ndarray:
    """Load a ``.fpl`` float plane written by :func:`write_fpl`."""
    with open(path, "rb") as fh:
        header = fh.read(8)
        if len(header) != 8:
            raise ValueError(f"{path}: truncated .fpl header")
        w, h = struct.unpack("<II", header)
        raw = fh.read()
    expected = w * h * 4
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} payload bytes, got {len(raw)}")
    data = np.frombuffer(raw, dtype="<f4").astype(np.float64)
    return data.reshape(h, w)
