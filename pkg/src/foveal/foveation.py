"""Saliency-weighted foveation and observation preprocessing.

The blend keeps salient pixels at full intensity and darkens the rest by a
factor that interpolates, via alpha, between black (0) and untouched (1).
The same machinery renders heatmap overlays for inspection, and the
preprocessing entry point turns a raw simulator frame into the small gray
plane the agent consumes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .imaging import jet_colormap, resize_bilinear, rgb_to_gray, validate_image
from .saliency import SaliencyMap, SpectralConfig, spectral_residual

AGENT_FRAME_SIZE = 84


@dataclass(frozen=True)
class FoveationConfig:
    """Blend settings: how much, whether at all, and which blend rule."""

    alpha: float = 0.69
    overlay_weight: float = 0.5
    enabled: bool = True
    literal_additive: bool = False

    def __post_init__(self) -> None:
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must be in [0, 1]")
        if not 0.0 <= self.overlay_weight <= 1.0:
            raise ValueError("overlay_weight must be in [0, 1]")


def _check_map_matches(img: np.ndarray, smap: SaliencyMap) -> np.ndarray:
    mask = smap.data
    if mask.shape != img.shape[:2]:
        raise ValueError(f"saliency map {mask.shape} does not match image {img.shape[:2]}")
    return mask


def blend_foveate(
    img: np.ndarray,
    smap: SaliencyMap,
    alpha: float,
    *,
    literal_additive: bool = False,
) -> np.ndarray:
    """Darken non-salient pixels: out = round(I * (S + alpha*(1 - S))).

    The mask equals 1 wherever S = 1 and interpolates from alpha (at S = 0)
    up to 1, so alpha = 1 is a bit-exact identity and alpha = 0 keeps only
    salient content. ``literal_additive`` switches to out = clamp(I + mask),
    a near-identity brightening kept for comparison.
    """
    arr = validate_image(img)
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must be in [0, 1]")
    mask = _check_map_matches(arr, smap)
    if arr.ndim == 3:
        mask = mask[:, :, None]
    if literal_additive:
        out = arr.astype(np.float64) + (mask + alpha * (1.0 - mask))
        return np.clip(np.rint(out), 0, 255).astype(np.uint8)
    if alpha == 1.0:
        return arr.copy()
    out = arr.astype(np.float64) * (mask + alpha * (1.0 - mask))
    return np.rint(out).astype(np.uint8)


def heatmap_overlay(img: np.ndarray, smap: SaliencyMap, w: float) -> np.ndarray:
    """Alpha-composite a jet rendering of the map over the image.

    out = round((1 - w) * I + w * jet(S)), always RGB; a gray input is
    promoted to three channels first.
    """
    arr = validate_image(img)
    if not 0.0 <= w <= 1.0:
        raise ValueError("overlay weight must be in [0, 1]")
    mask = _check_map_matches(arr, smap)
    if arr.ndim == 2:
        arr = np.stack([arr] * 3, axis=-1)
    heat = jet_colormap(mask).astype(np.float64)
    out = (1.0 - w) * arr.astype(np.float64) + w * heat
    return np.rint(out).astype(np.uint8)


def preprocess_observation(
    raw: np.ndarray,
    cfg: FoveationConfig,
    scfg: SpectralConfig | None = None,
    *,
    out_size: int = 21,
) -> np.ndarray:
    """Raw RGB frame to the agent's input plane.

    Pipeline: saliency on the luminance of the raw frame, foveate at the
    configured alpha (skipped when disabled), resize to the canonical
    84x84 frame, grayscale to [0, 1], then bilinear-downsample to
    ``out_size`` square. Pure: same frame and configs, same output.
    """
    arr = validate_image(raw)
    if arr.ndim != 3:
        raise ValueError("preprocessing expects an RGB frame")
    scfg = scfg or SpectralConfig()
    if cfg.enabled:
        smap = spectral_residual(rgb_to_gray(arr), scfg)
        frame = blend_foveate(arr, smap, cfg.alpha, literal_additive=cfg.literal_additive)
    else:
        frame = arr
    canon = resize_bilinear(frame, AGENT_FRAME_SIZE, AGENT_FRAME_SIZE)
    gray = rgb_to_gray(canon) / 255.0
    if out_size == AGENT_FRAME_SIZE:
        return gray
    return resize_bilinear(gray, out_size, out_size)
