"""Frequency transforms, smoothing filters, and the saliency pipeline."""

import numpy as np
import pytest

from foveal.saliency import (
    SaliencyMap,
    SpectralConfig,
    box_filter,
    fft2d,
    gaussian_blur,
    ifft2d,
    normalize_map,
    spectral_residual,
)


def dft2d_oracle(plane):
    """Direct O(N^4) transform from the definition, one root table, no FFT."""
    n = plane.shape[0]
    table = [complex(np.exp(-2j * np.pi * k / n)) for k in range(n)]
    out = np.empty((n, n), dtype=np.complex128)
    for u in range(n):
        for v in range(n):
            acc = 0j
            for x in range(n):
                ux = u * x
                row = plane[x]
                for y in range(n):
                    acc += row[y] * table[(ux + v * y) % n]
            out[u, v] = acc
    return out


def test_fft_trivial_cases():
    ones = np.ones((2, 2))
    out = fft2d(ones)
    assert np.allclose(out, [[4.0, 0.0], [0.0, 0.0]], atol=1e-12)

    delta = np.zeros((4, 4))
    delta[0, 0] = 1.0
    assert np.allclose(fft2d(delta), np.ones((4, 4)), atol=1e-12)

    single = np.array([[3.5]])
    assert np.allclose(fft2d(single), [[3.5]], atol=0.0)


def test_fft_matches_direct_dft():
    rng = np.random.default_rng(7)
    for n in (2, 4, 8):
        for _ in range(3):
            plane = rng.standard_normal((n, n))
            got = fft2d(plane)
            want = dft2d_oracle(plane)
            assert np.abs(got - want).max() < 1e-9


def test_fft_roundtrip_identity():
    rng = np.random.default_rng(8)
    for n in (2, 4, 8, 16, 64):
        plane = rng.standard_normal((n, n))
        back = ifft2d(fft2d(plane))
        assert np.abs(back - plane).max() < 1e-9
        assert np.abs(back.imag).max() < 1e-9


def test_fft_parseval_energy():
    rng = np.random.default_rng(9)
    for n in (4, 16):
        plane = rng.standard_normal((n, n))
        spatial = (np.abs(plane) ** 2).sum()
        spectral = (np.abs(fft2d(plane)) ** 2).sum() / (n * n)
        assert abs(spatial - spectral) <= 1e-6 * spatial


def test_fft_linearity_in_scale():
    rng = np.random.default_rng(10)
    plane = rng.standard_normal((8, 8))
    assert np.allclose(fft2d(2.0 * plane), 2.0 * fft2d(plane), atol=1e-12)


def test_fft_rejects_bad_shapes():
    with pytest.raises(ValueError):
        fft2d(np.zeros((3, 3)))
    with pytest.raises(ValueError):
        fft2d(np.zeros((4, 8)))
    with pytest.raises(ValueError):
        fft2d(np.zeros(8))
    with pytest.raises(ValueError):
        ifft2d(np.zeros((6, 6), dtype=np.complex128))


def test_box_filter_constant_and_center_impulse():
    const = np.full((6, 6), 2.5)
    assert np.allclose(box_filter(const, 3), const, atol=1e-12)

    plane = np.zeros((5, 5))
    plane[2, 2] = 9.0
    out = box_filter(plane, 3)
    expected = np.zeros((5, 5))
    expected[1:4, 1:4] = 1.0
    assert np.allclose(out, expected, atol=1e-12)


def test_box_filter_k1_is_identity():
    rng = np.random.default_rng(13)
    plane = rng.standard_normal((7, 9))
    assert np.array_equal(box_filter(plane, 1), plane)


def test_box_filter_rejects_even_or_nonpositive_k():
    plane = np.zeros((4, 4))
    with pytest.raises(ValueError):
        box_filter(plane, 2)
    with pytest.raises(ValueError):
        box_filter(plane, 0)
    with pytest.raises(ValueError):
        box_filter(plane, -3)


def test_gaussian_blur_preserves_constants():
    const = np.full((9, 9), -4.2)
    assert np.allclose(gaussian_blur(const, 2.5), const, atol=1e-12)


def test_gaussian_blur_impulse_is_symmetric():
    plane = np.zeros((21, 21))
    plane[10, 10] = 1.0
    out = gaussian_blur(plane, 1.5)
    assert np.allclose(out, out[::-1, :], atol=1e-12)
    assert np.allclose(out, out[:, ::-1], atol=1e-12)
    assert np.allclose(out, out.T, atol=1e-12)
    assert out[10, 10] == out.max()


def test_gaussian_blur_composition_matches_wider_blur():
    # Two passes approximate one blur of sqrt(s1^2 + s2^2). The semigroup
    # property belongs to Gaussian convolution proper, so compare away from
    # the border where clamp-to-edge padding deliberately changes the math.
    rng = np.random.default_rng(14)
    plane = rng.standard_normal((32, 32))
    sigma = float(np.sqrt(1.0**2 + 1.5**2))
    twice = gaussian_blur(gaussian_blur(plane, 1.0), 1.5)
    once = gaussian_blur(plane, sigma)
    margin = int(np.ceil(4.0 * sigma))
    diff = (twice - once)[margin:-margin, margin:-margin]
    assert np.sqrt(np.mean(diff**2)) <= 1e-3


def test_gaussian_blur_rejects_bad_sigma():
    with pytest.raises(ValueError):
        gaussian_blur(np.zeros((4, 4)), 0.0)
    with pytest.raises(ValueError):
        gaussian_blur(np.zeros((4, 4)), -1.0)


def test_normalize_map_affine_rescale():
    plane = np.array([[0.0, 5.0], [10.0, 2.5]])
    smap = normalize_map(plane)
    assert not smap.degenerate
    assert np.array_equal(smap.data, np.array([[0.0, 0.5], [1.0, 0.25]]))
    assert smap.shape == (2, 2)


def test_normalize_map_flat_input_is_degenerate():
    smap = normalize_map(np.full((3, 4), 7.0))
    assert smap.degenerate
    assert np.array_equal(smap.data, np.zeros((3, 4)))


def test_normalize_map_is_idempotent_on_unit_range():
    rng = np.random.default_rng(15)
    plane = rng.random((6, 6))
    plane[0, 0] = 0.0
    plane[-1, -1] = 1.0
    assert np.array_equal(normalize_map(plane).data, plane)


def test_spectral_config_validation():
    with pytest.raises(ValueError):
        SpectralConfig(working_size=16)
    with pytest.raises(ValueError):
        SpectralConfig(epsilon=0.0)
    with pytest.raises(ValueError):
        SpectralConfig(box_kernel=4)
    with pytest.raises(ValueError):
        SpectralConfig(blur_sigma=0.0)


def test_spectral_residual_constant_input_is_degenerate():
    smap = spectral_residual(np.full((84, 84), 123.0))
    assert smap.degenerate
    assert smap.shape == (84, 84)
    assert np.array_equal(smap.data, np.zeros((84, 84)))


def test_spectral_residual_output_contract():
    rng = np.random.default_rng(16)
    for _ in range(5):
        gray = rng.integers(0, 256, size=(84, 84)).astype(np.float64)
        smap = spectral_residual(gray)
        assert not smap.degenerate
        assert smap.shape == (84, 84)
        assert smap.data.min() == 0.0
        assert smap.data.max() == 1.0


def test_spectral_residual_preserves_input_dims():
    rng = np.random.default_rng(17)
    gray = rng.integers(0, 256, size=(50, 90)).astype(np.float64)
    assert spectral_residual(gray).shape == (50, 90)


def test_spectral_residual_is_pure():
    rng = np.random.default_rng(18)
    gray = rng.integers(0, 256, size=(84, 84)).astype(np.float64)
    a = spectral_residual(gray)
    b = spectral_residual(gray)
    assert np.array_equal(a.data, b.data)


def test_spectral_residual_highlights_isolated_block():
    gray = np.zeros((84, 84))
    gray[40:46, 60:66] = 255.0
    smap = spectral_residual(gray)
    peak = np.unravel_index(np.argmax(smap.data), smap.shape)
    assert abs(peak[0] - 42) <= 4
    assert abs(peak[1] - 62) <= 4


def test_spectral_residual_argmax_survives_brightness_scaling():
    rng = np.random.default_rng(19)
    for _ in range(3):
        gray = rng.integers(0, 256, size=(84, 84)).astype(np.float64)
        base = np.argmax(spectral_residual(gray).data)
        assert np.argmax(spectral_residual(gray * 2.0).data) == base
        assert np.argmax(spectral_residual(gray * 0.5).data) == base


def test_spectral_residual_rejects_tiny_inputs():
    with pytest.raises(ValueError):
        spectral_residual(np.zeros((7, 100)))
    cfg = SpectralConfig(working_size=32)
    smap = spectral_residual(np.random.default_rng(20).random((4, 4)) * 255, cfg)
    assert smap.shape == (4, 4)


def test_saliency_map_dataclass_shape_property():
    smap = SaliencyMap(np.zeros((3, 5)))
    assert smap.shape == (3, 5)
    assert not smap.degenerate
