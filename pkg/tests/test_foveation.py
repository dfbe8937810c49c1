"""Blend math, heatmap overlays, and the observation preprocessing chain."""

import numpy as np
import pytest

from foveal.foveation import (
    AGENT_FRAME_SIZE,
    FoveationConfig,
    blend_foveate,
    heatmap_overlay,
    preprocess_observation,
)
from foveal.imaging import jet_colormap, resize_bilinear, rgb_to_gray
from foveal.saliency import SaliencyMap


def random_frame(rng, h=12, w=12, rgb=True):
    shape = (h, w, 3) if rgb else (h, w)
    return rng.integers(0, 256, size=shape).astype(np.uint8)


def random_map(rng, h=12, w=12):
    return SaliencyMap(rng.random((h, w)))


def test_config_validation():
    with pytest.raises(ValueError):
        FoveationConfig(alpha=1.5)
    with pytest.raises(ValueError):
        FoveationConfig(alpha=-0.1)
    with pytest.raises(ValueError):
        FoveationConfig(overlay_weight=2.0)


def test_blend_alpha_one_is_bit_exact_identity():
    rng = np.random.default_rng(31)
    for rgb in (True, False):
        img = random_frame(rng, rgb=rgb)
        out = blend_foveate(img, random_map(rng), 1.0)
        assert out.dtype == np.uint8
        assert np.array_equal(out, img)
        assert out is not img


def test_blend_full_saliency_is_identity_for_any_alpha():
    rng = np.random.default_rng(32)
    img = random_frame(rng)
    ones = SaliencyMap(np.ones(img.shape[:2]))
    for alpha in (0.0, 0.25, 0.69, 1.0):
        assert np.array_equal(blend_foveate(img, ones, alpha), img)


def test_blend_hand_value():
    # 200 * (0.5 + 0.69 * 0.5) = 200 * 0.845 = 169.
    img = np.full((2, 2), 200, dtype=np.uint8)
    smap = SaliencyMap(np.full((2, 2), 0.5))
    out = blend_foveate(img, smap, 0.69)
    assert (out == 169).all()


def test_blend_alpha_zero_keeps_only_salient_pixels():
    img = np.full((3, 3), 100, dtype=np.uint8)
    smap = SaliencyMap(np.array([[1.0, 0.5, 0.0]] * 3))
    out = blend_foveate(img, smap, 0.0)
    assert np.array_equal(out, np.array([[100, 50, 0]] * 3, dtype=np.uint8))


def test_blend_changes_pixels_exactly_where_map_is_below_one():
    # With bright pixels and a mask gap of at least 0.1, rounding cannot
    # bring a darkened pixel back to its original value.
    rng = np.random.default_rng(33)
    img = rng.integers(50, 256, size=(10, 10)).astype(np.uint8)
    levels = rng.choice([0.0, 0.3, 0.6, 0.9, 1.0], size=(10, 10))
    out = blend_foveate(img, SaliencyMap(levels), 0.0)
    assert np.array_equal(out == img, levels == 1.0)


def test_blend_is_pixelwise_monotone_in_alpha():
    rng = np.random.default_rng(34)
    img = random_frame(rng, h=16, w=16)
    smap = random_map(rng, h=16, w=16)
    prev = blend_foveate(img, smap, 0.0).astype(np.int64)
    for alpha in np.linspace(0.1, 1.0, 10):
        cur = blend_foveate(img, smap, float(alpha)).astype(np.int64)
        assert (cur >= prev).all()
        prev = cur


def test_blend_literal_additive_variant():
    # Additive form shifts by at most one intensity level and clamps.
    img = np.full((2, 2), 200, dtype=np.uint8)
    smap = SaliencyMap(np.full((2, 2), 0.5))
    out = blend_foveate(img, smap, 0.69, literal_additive=True)
    assert (out == 201).all()

    top = np.full((2, 2), 255, dtype=np.uint8)
    out = blend_foveate(top, smap, 1.0, literal_additive=True)
    assert (out == 255).all()


def test_blend_validation():
    rng = np.random.default_rng(35)
    img = random_frame(rng)
    with pytest.raises(ValueError):
        blend_foveate(img, random_map(rng, h=5, w=5), 0.5)
    with pytest.raises(ValueError):
        blend_foveate(img, random_map(rng), 1.2)
    with pytest.raises(ValueError):
        blend_foveate(img.astype(np.float64), random_map(rng), 0.5)


def test_overlay_weight_zero_is_identity_on_rgb():
    rng = np.random.default_rng(36)
    img = random_frame(rng)
    out = heatmap_overlay(img, random_map(rng), 0.0)
    assert np.array_equal(out, img)


def test_overlay_promotes_gray_to_rgb():
    rng = np.random.default_rng(37)
    img = random_frame(rng, rgb=False)
    out = heatmap_overlay(img, random_map(rng), 0.0)
    assert out.shape == img.shape + (3,)
    for c in range(3):
        assert np.array_equal(out[:, :, c], img)


def test_overlay_weight_one_is_pure_heatmap():
    rng = np.random.default_rng(38)
    img = random_frame(rng)
    smap = random_map(rng)
    out = heatmap_overlay(img, smap, 1.0)
    assert np.array_equal(out, jet_colormap(smap.data))


def test_overlay_hand_value():
    # Black image, saturated map, half weight: half of jet(1) = (64, 0, 0).
    img = np.zeros((2, 2, 3), dtype=np.uint8)
    smap = SaliencyMap(np.ones((2, 2)))
    out = heatmap_overlay(img, smap, 0.5)
    assert (out[:, :, 0] == 64).all()
    assert (out[:, :, 1] == 0).all()
    assert (out[:, :, 2] == 0).all()


def test_overlay_validation():
    rng = np.random.default_rng(39)
    with pytest.raises(ValueError):
        heatmap_overlay(random_frame(rng), random_map(rng), 1.5)
    with pytest.raises(ValueError):
        heatmap_overlay(random_frame(rng), random_map(rng, h=3, w=3), 0.5)


def test_preprocess_disabled_equals_plain_resize_chain():
    rng = np.random.default_rng(40)
    raw = random_frame(rng, h=84, w=84)
    cfg = FoveationConfig(enabled=False)
    got = preprocess_observation(raw, cfg)
    canon = resize_bilinear(raw, AGENT_FRAME_SIZE, AGENT_FRAME_SIZE)
    expected = resize_bilinear(rgb_to_gray(canon) / 255.0, 21, 21)
    assert got.shape == (21, 21)
    assert np.array_equal(got, expected)


def test_preprocess_alpha_one_matches_disabled():
    rng = np.random.default_rng(41)
    raw = random_frame(rng, h=60, w=100)
    on = preprocess_observation(raw, FoveationConfig(alpha=1.0, enabled=True))
    off = preprocess_observation(raw, FoveationConfig(enabled=False))
    assert np.array_equal(on, off)


def test_preprocess_foveation_darkens_nonsalient_content():
    rng = np.random.default_rng(42)
    raw = random_frame(rng, h=84, w=84)
    low = preprocess_observation(raw, FoveationConfig(alpha=0.2, enabled=True))
    off = preprocess_observation(raw, FoveationConfig(enabled=False))
    assert low.mean() < off.mean()


def test_preprocess_output_range_and_custom_size():
    rng = np.random.default_rng(43)
    raw = random_frame(rng, h=84, w=84)
    out = preprocess_observation(raw, FoveationConfig(), out_size=84)
    assert out.shape == (84, 84)
    assert out.min() >= 0.0 and out.max() <= 1.0
    small = preprocess_observation(raw, FoveationConfig(), out_size=10)
    assert small.shape == (10, 10)


def test_preprocess_is_pure():
    rng = np.random.default_rng(44)
    raw = random_frame(rng, h=84, w=84)
    cfg = FoveationConfig(alpha=0.69)
    assert np.array_equal(
        preprocess_observation(raw, cfg), preprocess_observation(raw, cfg)
    )


def test_preprocess_rejects_gray_input():
    with pytest.raises(ValueError):
        preprocess_observation(np.zeros((84, 84), dtype=np.uint8), FoveationConfig())
