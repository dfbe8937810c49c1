"""Real-time spectral-residual saliency.

The detector works in the frequency domain: take the 2-D FFT of a gray
plane, keep the phase, and replace the log-amplitude spectrum by its
difference from a local average (the residual). Inverse-transforming the
residual spectrum concentrates energy at proto-object locations; squaring,
smoothing, and normalizing gives a [0, 1] saliency map.

Transforms are restricted to square power-of-two sizes (a compact radix-2
implementation is plenty at the 32..128 working sizes used here); arbitrary
input shapes are handled by resizing in and out of the working grid.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

import numpy as np

from .imaging import resize_bilinear, validate_plane

_ALLOWED_WORKING_SIZES = (32, 64, 128)


@dataclass(frozen=True)
class SpectralConfig:
    """Knobs for the saliency pipeline, applied at the working scale."""

    working_size: int = 64
    epsilon: float = 1e-8
    box_kernel: int = 3
    blur_sigma: float = 2.5

    def __post_init__(self) -> None:
        if self.working_size not in _ALLOWED_WORKING_SIZES:
            raise ValueError(f"working_size must be one of {_ALLOWED_WORKING_SIZES}")
        if self.epsilon <= 0.0:
            raise ValueError("epsilon must be > 0")
        if self.box_kernel % 2 == 0 or self.box_kernel < 3:
            raise ValueError("box_kernel must be odd and >= 3")
        if self.blur_sigma <= 0.0:
            raise ValueError("blur_sigma must be > 0")


@dataclass(frozen=True)
class SaliencyMap:
    """Normalized saliency plane; max sample is 1 unless ``degenerate``.

    A degenerate map (flat input, nothing to rank) is all zeros, so that a
    downstream multiplicative blend falls back to uniform attenuation
    instead of dividing by a zero range.
    """

    data: np.ndarray
    degenerate: bool = False

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape  # type: ignore[return-value]


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@functools.lru_cache(maxsize=None)
def _bit_reversal(n: int) -> np.ndarray:
    rev = np.zeros(n, dtype=np.int64)
    bits = n.bit_length() - 1
    for i in range(n):
        r = 0
        x = i
        for _ in range(bits):
            r = (r << 1) | (x & 1)
            x >>= 1
        rev[i] = r
    rev.setflags(write=False)
    return rev


def _fft_rows(a: np.ndarray, inverse: bool) -> np.ndarray:
    """Radix-2 Cooley-Tukey along the last axis of a complex128 array."""
    n = a.shape[-1]
    out = np.ascontiguousarray(a[..., _bit_reversal(n)], dtype=np.complex128)
    sign = 1.0 if inverse else -1.0
    half = 1
    while half < n:
        tw = np.exp(sign * 1j * np.pi * np.arange(half) / half)
        blocks = out.reshape(*out.shape[:-1], n // (2 * half), 2, half)
        even = blocks[..., 0, :].copy()
        odd = blocks[..., 1, :] * tw
        blocks[..., 0, :] = even + odd
        blocks[..., 1, :] = even - odd
        half *= 2
    return out


def _check_square_pow2(shape: tuple[int, ...]) -> None:
    h, w = shape[0], shape[1]
    if h != w or not _is_pow2(h):
        raise ValueError(f"transform requires square power-of-two dims, got {h}x{w}")


def fft2d(plane: np.ndarray) -> np.ndarray:
    """Forward unnormalized 2-D DFT of a square power-of-two plane."""
    arr = np.asarray(plane)
    if arr.ndim != 2:
        raise ValueError("fft2d expects a 2-D array")
    _check_square_pow2(arr.shape)
    rows = _fft_rows(arr.astype(np.complex128), inverse=False)
    cols = _fft_rows(np.ascontiguousarray(rows.T), inverse=False)
    return np.ascontiguousarray(cols.T)


def ifft2d(mat: np.ndarray) -> np.ndarray:
    """Inverse 2-D DFT scaled by 1/(W*H); roundtrips fft2d to ~1e-12."""
    arr = np.asarray(mat)
    if arr.ndim != 2:
        raise ValueError("ifft2d expects a 2-D array")
    _check_square_pow2(arr.shape)
    rows = _fft_rows(arr.astype(np.complex128), inverse=True)
    cols = _fft_rows(np.ascontiguousarray(rows.T), inverse=True)
    return np.ascontiguousarray(cols.T) / (arr.shape[0] * arr.shape[1])


def _pad_edge_1d(plane: np.ndarray, radius: int, axis: int) -> np.ndarray:
    width = [(0, 0), (0, 0)]
    width[axis] = (radius, radius)
    return np.pad(plane, width, mode="edge")


def _correlate_separable(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Apply a normalized 1-D kernel along both axes with clamp-to-edge."""
    radius = len(kernel) // 2
    out = plane
    for axis in (0, 1):
        padded = _pad_edge_1d(out, radius, axis)
        acc = np.zeros_like(out)
        for i, w in enumerate(kernel):
            if axis == 0:
                acc += w * padded[i : i + out.shape[0], :]
            else:
                acc += w * padded[:, i : i + out.shape[1]]
        out = acc
    return out


def box_filter(plane: np.ndarray, k: int) -> np.ndarray:
    """k x k mean filter, clamp-to-edge, weights summing to 1."""
    if k % 2 == 0 or k < 1:
        raise ValueError("box kernel size must be odd and >= 1")
    arr = validate_plane(plane)
    kernel = np.full(k, 1.0 / k, dtype=np.float64)
    return _correlate_separable(arr, kernel)


def gaussian_blur(plane: np.ndarray, sigma: float) -> np.ndarray:
    """Separable Gaussian blur, clamp-to-edge, kernel truncated at 4 sigma.

    The generous truncation keeps the composition property tight: blurring
    twice is close to one blur of sqrt(s1^2 + s2^2).
    """
    if sigma <= 0.0:
        raise ValueError("sigma must be > 0")
    arr = validate_plane(plane)
    radius = max(1, int(np.ceil(4.0 * sigma)))
    xs = np.arange(-radius, radius + 1, dtype=np.float64)
    kernel = np.exp(-0.5 * (xs / sigma) ** 2)
    kernel /= kernel.sum()
    return _correlate_separable(arr, kernel)


def normalize_map(plane: np.ndarray) -> SaliencyMap:
    """Affine rescale to [0, 1]; a flat plane becomes a degenerate zero map."""
    arr = validate_plane(plane)
    lo = float(arr.min())
    hi = float(arr.max())
    if hi == lo:
        return SaliencyMap(np.zeros_like(arr), degenerate=True)
    return SaliencyMap((arr - lo) / (hi - lo), degenerate=False)


def spectral_residual(gray: np.ndarray, cfg: SpectralConfig | None = None) -> SaliencyMap:
    """Saliency map of a gray plane via the spectral residual of its log spectrum.

    Steps: resize to the square working grid, FFT, split magnitude/phase,
    subtract a box-filtered copy of the log magnitude (the residual), then
    invert with the original phase. The squared magnitude of that inverse,
    blurred and rescaled to [0, 1], is the map, resized back to the input
    dims. Flat inputs produce a degenerate all-zero map.
    """
    cfg = cfg or SpectralConfig()
    arr = validate_plane(gray)
    h, w = arr.shape
    min_dim = cfg.working_size // 8
    if h < min_dim or w < min_dim:
        raise ValueError(f"input dims must be >= {min_dim} for working_size {cfg.working_size}")

    if arr.max() == arr.min():
        return SaliencyMap(np.zeros((h, w), dtype=np.float64), degenerate=True)

    n = cfg.working_size
    work = resize_bilinear(arr, n, n)
    spectrum = fft2d(work)
    amplitude = np.abs(spectrum)
    phase = np.angle(spectrum)
    log_amp = np.log(amplitude + cfg.epsilon)
    residual = log_amp - box_filter(log_amp, cfg.box_kernel)
    recovered = ifft2d(np.exp(residual + 1j * phase))
    raw = np.abs(recovered) ** 2
    smooth = gaussian_blur(raw, cfg.blur_sigma)

    # Normalize at working scale, resize to the caller's dims, and normalize
    # again: bilinear resampling can shave the extrema, and the map contract
    # promises min 0 / max 1 at the output size.
    working_map = normalize_map(smooth)
    if working_map.degenerate:
        return SaliencyMap(np.zeros((h, w), dtype=np.float64), degenerate=True)
    resized = resize_bilinear(working_map.data, w, h)
    return normalize_map(resized)
