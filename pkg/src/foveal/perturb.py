"""Frame corruptions for transfer testing, in three difficulty tiers.

Easy adds Gaussian pixel noise. Moderate tints frames a fixed hue on a
coin flip. Difficult tints on a coin flip with a fresh uniform hue each
time. Each frame gets its own RNG stream derived from (seed, frame_index),
so results do not depend on evaluation order.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .imaging import hsv_to_rgb_array, rgb_to_hsv_array, validate_image


class PerturbCategory(enum.Enum):
    """Corruption tier; string values are the serialized names."""

    NONE = "none"
    EASY = "easy"
    MODERATE = "moderate"
    DIFFICULT = "difficult"

    @classmethod
    def parse(cls, name: str) -> "PerturbCategory":
        try:
            return cls(name.strip().lower())
        except ValueError:
            valid = ", ".join(c.value for c in cls)
            raise ValueError(f"unknown perturbation category {name!r} (expected {valid})") from None


@dataclass(frozen=True)
class PerturbConfig:
    """Corruption strengths plus the seed all per-frame streams derive from."""

    noise_sigma: float = 10.0
    tint_hue: float = 0.25
    tint_strength: float = 0.6
    coin_p: float = 0.5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.noise_sigma < 0.0:
            raise ValueError("noise_sigma must be >= 0")
        if not 0.0 <= self.tint_hue < 1.0:
            raise ValueError("tint_hue must be in [0, 1)")
        if not 0.0 <= self.tint_strength <= 1.0:
            raise ValueError("tint_strength must be in [0, 1]")
        if not 0.0 <= self.coin_p <= 1.0:
            raise ValueError("coin_p must be in [0, 1]")


def frame_rng(seed: int, frame_index: int) -> np.random.Generator:
    """Independent stream for one frame; order of use does not matter."""
    return np.random.default_rng([seed, frame_index])


def gaussian_noise(img: np.ndarray, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Add N(0, sigma^2) per sample and clamp back to 8-bit range."""
    arr = validate_image(img)
    if sigma < 0.0:
        raise ValueError("sigma must be >= 0")
    if sigma == 0.0:
        return arr.copy()
    noisy = arr.astype(np.float64) + rng.normal(0.0, sigma, size=arr.shape)
    return np.clip(np.rint(noisy), 0, 255).astype(np.uint8)


def tint(img: np.ndarray, hue: float, strength: float) -> np.ndarray:
    """Recolor: force the hue, floor the saturation, keep the value channel."""
    arr = validate_image(img)
    if not 0.0 <= hue < 1.0:
        raise ValueError("hue must be in [0, 1)")
    if not 0.0 <= strength <= 1.0:
        raise ValueError("strength must be in [0, 1]")
    if arr.ndim != 3:
        raise ValueError("tint expects an RGB image")
    _, s, v = rgb_to_hsv_array(arr)
    h = np.full_like(s, hue)
    out = hsv_to_rgb_array(h, np.maximum(s, strength), v)
    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def perturb_frame(
    img: np.ndarray,
    cat: PerturbCategory,
    cfg: PerturbConfig,
    rng: np.random.Generator,
) -> np.ndarray:
    """Apply one category's corruption to one frame using the given stream."""
    arr = validate_image(img)
    if cat is PerturbCategory.NONE:
        return arr.copy()
    if cat is PerturbCategory.EASY:
        return gaussian_noise(arr, cfg.noise_sigma, rng)
    if cat is PerturbCategory.MODERATE:
        if rng.random() < cfg.coin_p:
            return tint(arr, cfg.tint_hue, cfg.tint_strength)
        return arr.copy()
    if cat is PerturbCategory.DIFFICULT:
        if rng.random() < cfg.coin_p:
            return tint(arr, float(rng.random()), cfg.tint_strength)
        return arr.copy()
    raise ValueError(f"unhandled category {cat!r}")
