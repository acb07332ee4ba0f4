import numpy as np
import pytest

from cxrmine.errors import BadDimensions, EmptyImage
from cxrmine.preprocess import (
    LUMA_WEIGHTS,
    GrayImage,
    equalize,
    hflip,
    load_png,
    resize,
    rotate,
    save_png,
)
from cxrmine.rand import SplitMix64


def random_image(rng, width, height):
    rows = [[rng.next_below(256) for _ in range(width)] for _ in range(height)]
    return GrayImage.from_rows(rows)


class TestGrayImage:
    def test_rejects_empty(self):
        with pytest.raises(EmptyImage):
            GrayImage.from_rows([[]])
        with pytest.raises(EmptyImage):
            GrayImage(width=0, height=1, pixels=np.zeros((1, 0), dtype=np.uint8))

    def test_rejects_non_2d_input(self):
        with pytest.raises(ValueError):
            GrayImage.from_rows([])
        with pytest.raises(ValueError):
            GrayImage.from_rows([1, 2, 3])

    def test_rejects_out_of_range_values(self):
        with pytest.raises(ValueError):
            GrayImage.from_rows([[0, 256]])
        with pytest.raises(ValueError):
            GrayImage.from_rows([[-1, 0]])

    def test_rejects_shape_mismatch(self):
        with pytest.raises(ValueError):
            GrayImage(width=3, height=1, pixels=np.zeros((1, 2), dtype=np.uint8))

    def test_pixels_are_frozen(self):
        img = GrayImage.from_rows([[1, 2], [3, 4]])
        with pytest.raises(ValueError):
            img.pixels[0, 0] = 9

    def test_source_mutation_does_not_leak_in(self):
        source = np.array([[1, 2], [3, 4]], dtype=np.uint8)
        img = GrayImage(width=2, height=2, pixels=source)
        source[0, 0] = 99
        assert img.pixels[0, 0] == 1

    def test_equality_is_by_content(self):
        a = GrayImage.from_rows([[1, 2], [3, 4]])
        b = GrayImage.from_rows([[1, 2], [3, 4]])
        c = GrayImage.from_rows([[1, 2], [3, 5]])
        assert a == b
        assert a != c


class TestEqualize:
    def test_two_level_example(self):
        img = GrayImage.from_rows([[10, 10], [20, 20]])
        assert equalize(img).pixels.tolist() == [[0, 0], [255, 255]]

    def test_full_range_extremes_are_fixed(self):
        img = GrayImage.from_rows([[0, 255]])
        out = equalize(img)
        assert out.pixels.tolist() == [[0, 255]]

    def test_constant_image_unchanged(self):
        img = GrayImage.from_rows([[77] * 4] * 3)
        assert equalize(img) == img

    def test_minimum_populated_level_maps_to_zero(self):
        rng = SplitMix64(21)
        for _ in range(20):
            img = random_image(rng, 8, 6)
            out = equalize(img)
            assert out.pixels[img.pixels == img.pixels.min()].min() == 0

    def test_preserves_intensity_ranking(self):
        rng = SplitMix64(22)
        for _ in range(30):
            img = random_image(rng, 10, 7)
            out = equalize(img)
            flat_in = img.pixels.ravel().astype(int)
            flat_out = out.pixels.ravel().astype(int)
            for a in range(len(flat_in)):
                for b in range(len(flat_in)):
                    if flat_in[a] < flat_in[b]:
                        assert flat_out[a] <= flat_out[b]

    def test_equal_inputs_stay_equal(self):
        rng = SplitMix64(23)
        img = random_image(rng, 9, 9)
        out = equalize(img)
        for value in np.unique(img.pixels):
            mapped = np.unique(out.pixels[img.pixels == value])
            assert len(mapped) == 1

    def test_idempotent_on_two_level_images(self):
        img = GrayImage.from_rows([[10, 10], [20, 20]])
        once = equalize(img)
        assert equalize(once) == once


class TestResize:
    def test_identity(self):
        rng = SplitMix64(31)
        img = random_image(rng, 7, 5)
        assert resize(img, 7, 5) == img

    def test_downscale_checkerboard_averages(self):
        img = GrayImage.from_rows([[0, 255], [255, 0]])
        out = resize(img, 1, 1)
        assert out.pixels.tolist() == [[128]]  # 127.5 rounds half away

    def test_upscale_constant(self):
        img = GrayImage.from_rows([[42]])
        out = resize(img, 3, 3)
        assert out.pixels.tolist() == [[42] * 3] * 3

    def test_linear_ramp_values(self):
        img = GrayImage.from_rows([[0, 100]])
        out = resize(img, 4, 1)
        assert out.pixels.tolist() == [[0, 25, 75, 100]]

    def test_bad_dimensions(self):
        img = GrayImage.from_rows([[1]])
        with pytest.raises(BadDimensions):
            resize(img, 0, 4)
        with pytest.raises(BadDimensions):
            resize(img, 4, -1)

    def test_output_shape(self):
        rng = SplitMix64(32)
        img = random_image(rng, 13, 4)
        out = resize(img, 5, 9)
        assert (out.width, out.height) == (5, 9)


class TestHflip:
    def test_reverses_rows(self):
        img = GrayImage.from_rows([[1, 2, 3], [4, 5, 6]])
        assert hflip(img).pixels.tolist() == [[3, 2, 1], [6, 5, 4]]

    def test_involution(self):
        rng = SplitMix64(41)
        img = random_image(rng, 6, 8)
        assert hflip(hflip(img)) == img


class TestRotate:
    def test_zero_degrees_identity(self):
        rng = SplitMix64(51)
        img = random_image(rng, 5, 4)
        assert rotate(img, 0) == img
        assert rotate(img, 360) == img

    def test_right_angle_expand_matches_numpy(self):
        img = GrayImage.from_rows([[1, 2, 3], [4, 5, 6]])
        out = rotate(img, 90, expand=True)
        assert out.pixels.tolist() == np.rot90(img.pixels).tolist()
        assert (out.width, out.height) == (2, 3)

    def test_four_right_angles_compose_to_identity(self):
        rng = SplitMix64(52)
        img = random_image(rng, 6, 3)
        out = img
        for _ in range(4):
            out = rotate(out, 90, expand=True)
        assert out == img

    def test_right_angle_without_expand_keeps_shape(self):
        img = GrayImage.from_rows([[1, 2, 3], [4, 5, 6]])
        out = rotate(img, 90)
        assert (out.width, out.height) == (3, 2)

    def test_square_right_angle_same_result_either_mode(self):
        rng = SplitMix64(53)
        img = random_image(rng, 5, 5)
        assert rotate(img, 90) == rotate(img, 90, expand=True)

    def test_180_reverses_both_axes(self):
        img = GrayImage.from_rows([[1, 2], [3, 4]])
        assert rotate(img, 180).pixels.tolist() == [[4, 3], [2, 1]]

    def test_negative_right_angle(self):
        img = GrayImage.from_rows([[1, 2, 3], [4, 5, 6]])
        out = rotate(img, -90, expand=True)
        assert out.pixels.tolist() == np.rot90(img.pixels, -1).tolist()

    def test_general_angle_expand_dims(self):
        img = GrayImage.from_rows([[255] * 10] * 10)
        out = rotate(img, 45, expand=True)
        # 10 * (cos45 + sin45) ~ 14.14, ceil
        assert out.width == out.height == 15

    def test_general_angle_same_shape_without_expand(self):
        rng = SplitMix64(54)
        img = random_image(rng, 8, 5)
        out = rotate(img, 30)
        assert (out.width, out.height) == (8, 5)

    def test_general_angle_preserves_center_mass(self):
        rows = [[0] * 9 for _ in range(9)]
        rows[4][4] = 200
        img = GrayImage.from_rows(rows)
        out = rotate(img, 30)
        assert out.pixels[4, 4] == 200  # center pixel is a fixed point


class TestPng:
    def test_round_trip(self, tmp_path):
        rng = SplitMix64(61)
        img = random_image(rng, 12, 7)
        path = tmp_path / "img.png"
        save_png(img, path)
        assert load_png(path) == img

    def test_rgb_collapses_by_pinned_luma(self, tmp_path):
        from PIL import Image

        rng = SplitMix64(62)
        raw = np.array(
            [[[rng.next_below(256) for _ in range(3)] for _ in range(6)] for _ in range(4)],
            dtype=np.uint8,
        )
        path = tmp_path / "rgb.png"
        Image.fromarray(raw, mode="RGB").save(path)
        img = load_png(path)
        luma = raw.astype(float) @ np.array(LUMA_WEIGHTS)
        expected = np.floor(luma + 0.5).clip(0, 255).astype(np.uint8)
        assert img.pixels.tolist() == expected.tolist()

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            load_png(tmp_path / "nope.png")
