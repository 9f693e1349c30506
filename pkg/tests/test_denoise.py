import math

import numpy as np
import numpy.testing as npt
import pytest

from thinline.denoise import (
    DEFAULT_EMBOSS_KERNEL,
    auto_sigma,
    dft2,
    emboss,
    fft_highpass,
    gaussian_blur,
    gaussian_kernel,
    idft2,
    sharpen,
    sharpen_kernel,
)


def test_auto_sigma_hand_values():
    assert auto_sigma(3) == pytest.approx(0.8)
    assert auto_sigma(5) == pytest.approx(1.1)
    assert auto_sigma(7) == pytest.approx(1.4)


def test_gaussian_kernel_sums_to_one():
    for size in (3, 5, 7):
        for sigma in (None, 0.6, 1.5, 4.0):
            k = gaussian_kernel(size, sigma)
            assert abs(k.sum() - 1.0) < 1e-6, (size, sigma)


def test_gaussian_kernel_shape_and_symmetry():
    k = gaussian_kernel(5, 1.2)
    assert k.shape == (5, 5)
    npt.assert_array_equal(k, k.T)
    npt.assert_array_equal(k, k[::-1, ::-1])
    assert k[2, 2] == k.max()


def test_gaussian_kernel_ratio_oracle():
    # before normalization the grid is exp(-d^2 / (2 sigma^2)), so the
    # center-to-neighbor ratio survives normalization untouched
    k = gaussian_kernel(3, 1.0)
    assert k[1, 1] / k[1, 0] == pytest.approx(math.e ** 0.5, rel=1e-12)
    assert k[1, 1] / k[0, 0] == pytest.approx(math.e, rel=1e-12)


def test_gaussian_blur_preserves_constant_level():
    img = np.full((16, 16), 0.42)
    npt.assert_allclose(gaussian_blur(img, 5), 0.42, atol=1e-12)


def test_gaussian_blur_of_impulse_reproduces_kernel():
    img = np.zeros((11, 11))
    img[5, 5] = 1.0
    out = gaussian_blur(img, 5, 1.0)
    npt.assert_allclose(out[3:8, 3:8], gaussian_kernel(5, 1.0), atol=1e-12)


def test_gaussian_blur_reduces_noise_variance():
    rng = np.random.default_rng(30)
    img = 0.5 + rng.normal(0.0, 0.1, size=(64, 64))
    assert gaussian_blur(img, 5).var() < 0.25 * img.var()


def test_gaussian_rejects_bad_parameters():
    with pytest.raises(ValueError, match="odd"):
        gaussian_kernel(4)
    with pytest.raises(ValueError, match="odd"):
        gaussian_kernel(-3)
    with pytest.raises(ValueError, match="positive"):
        gaussian_kernel(5, 0.0)


def test_sharpen_kernel_hand_values():
    npt.assert_array_equal(
        sharpen_kernel(5.0),
        [[0.0, -1.0, 0.0], [-1.0, 5.0, -1.0], [0.0, -1.0, 0.0]],
    )
    assert sharpen_kernel(9.0).sum() == pytest.approx(1.0)


def test_sharpen_center_one_is_identity():
    rng = np.random.default_rng(31)
    img = rng.uniform(0.0, 1.0, size=(12, 13))
    assert (sharpen(img, center=1.0) == img).all()


def test_sharpen_preserves_constant_level():
    img = np.full((10, 10), 0.6)
    npt.assert_allclose(sharpen(img), 0.6, atol=1e-12)


def test_sharpen_overshoots_at_a_step():
    """Sharpening deliberately leaves [0, 1]: the dark side of a step
    dips below the darkest input value."""
    img = np.zeros((10, 10))
    img[:, 5:] = 1.0
    out = sharpen(img, center=5.0)
    assert out.min() < 0.0
    assert out.max() > 1.0


def test_sharpen_rejects_center_below_one():
    with pytest.raises(ValueError, match=">= 1"):
        sharpen(np.zeros((5, 5)), center=0.5)


def test_emboss_kernel_shape():
    k = DEFAULT_EMBOSS_KERNEL
    assert k.sum() == -2.0
    # off-center taps are point-antisymmetric about the anchor
    for i in range(3):
        for j in range(3):
            if (i, j) != (1, 1):
                assert k[i, j] == -k[2 - i, 2 - j]


def test_emboss_constant_levels_follow_kernel_sum():
    """A constant image c lands at clip(0.5 + c * sum(K)): zero input
    gives mid-gray, a mid bright input saturates to black."""
    for c in (0.0, 0.1, 0.45, 0.9):
        out = emboss(np.full((8, 8), c))
        want = min(max(0.5 + c * DEFAULT_EMBOSS_KERNEL.sum(), 0.0), 1.0)
        npt.assert_allclose(out, want, atol=1e-12)


def test_emboss_output_stays_in_unit_range():
    rng = np.random.default_rng(32)
    out = emboss(rng.uniform(0.0, 1.0, size=(32, 32)))
    assert out.min() >= 0.0 and out.max() <= 1.0


def test_emboss_highlights_a_vertical_line():
    img = np.full((16, 16), 0.05)
    img[:, 8] = 0.9
    out = emboss(img)
    assert out[8, 7] != out[8, 9]  # relief is directional
    assert out.std() > 0.1


def test_emboss_rejects_wrong_kernel_shape():
    with pytest.raises(ValueError, match="3x3"):
        emboss(np.zeros((8, 8)), kernel=np.zeros((5, 5)))


def test_dft_round_trip():
    rng = np.random.default_rng(33)
    img = rng.uniform(0.0, 1.0, size=(64, 64))
    assert np.abs(idft2(dft2(img)) - img).max() <= 1e-6


def test_dft_dc_bin_is_the_mean():
    rng = np.random.default_rng(34)
    img = rng.uniform(0.0, 1.0, size=(32, 48))
    spec = dft2(img)
    assert spec[16, 24] == pytest.approx(img.mean(), abs=1e-12)


def test_dft_parseval():
    rng = np.random.default_rng(35)
    img = rng.uniform(-1.0, 1.0, size=(24, 40))
    spec = dft2(img)
    h, w = img.shape
    lhs = (np.abs(img) ** 2).sum() / (w * h)
    npt.assert_allclose((np.abs(spec) ** 2).sum(), lhs, rtol=1e-12)


def _cosine_image(w, h, fx_cycles):
    x = np.arange(w)
    row = 0.5 + 0.25 * np.cos(2.0 * np.pi * fx_cycles * x / w)
    return np.tile(row, (h, 1))


def test_fft_highpass_kills_low_frequencies():
    img = _cosine_image(64, 32, fx_cycles=4)
    out = fft_highpass(img, radius=6.0)
    npt.assert_allclose(out, 0.5, atol=1e-9)  # degenerate constant path


def test_fft_highpass_keeps_high_frequencies():
    img = _cosine_image(64, 32, fx_cycles=12)
    out = fft_highpass(img, radius=6.0)
    assert out.min() == pytest.approx(0.0, abs=1e-12)
    assert out.max() == pytest.approx(1.0, abs=1e-12)
    # the surviving wave keeps its period: correlate with the original
    centered = img - img.mean()
    assert (centered * (out - out.mean())).sum() > 0.0


def test_fft_highpass_radius_cut_is_strict():
    """A bin at distance exactly `radius` from DC must survive."""
    img = _cosine_image(64, 32, fx_cycles=4)
    kept = fft_highpass(img, radius=4.0)
    assert kept.max() - kept.min() == pytest.approx(1.0, abs=1e-9)
    killed = fft_highpass(img, radius=4.0 + 1e-9)
    npt.assert_allclose(killed, 0.5, atol=1e-9)


def test_fft_highpass_zero_radius_is_min_max_rescale():
    rng = np.random.default_rng(36)
    img = rng.uniform(0.2, 0.8, size=(16, 16))
    out = fft_highpass(img, radius=0.0)
    expected = (img - img.min()) / (img.max() - img.min())
    npt.assert_allclose(out, expected, atol=1e-9)


def test_fft_highpass_constant_input_degenerates_to_mid_gray():
    out = fft_highpass(np.full((8, 8), 0.7), radius=3.0)
    npt.assert_array_equal(out, np.full((8, 8), 0.5))


def test_fft_highpass_rejects_negative_radius():
    with pytest.raises(ValueError, match=">= 0"):
        fft_highpass(np.zeros((8, 8)), radius=-1.0)
