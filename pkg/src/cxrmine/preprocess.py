"""Deterministic grayscale image preprocessing.

Utilities an upstream scoring pipeline needs to normalize radiographs
before inference: histogram equalization (the classic CDF remap),
bilinear resize, horizontal flip, and rotation. Vertical flip is
deliberately not provided: radiographs are not vertically symmetric,
so flipping them top-to-bottom fabricates anatomy that cannot occur.

All operations are pure and bit-deterministic. Fractional results
round half away from zero. Rotation by a multiple of 90 degrees is an
exact index permutation, never resampled.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from PIL import Image

from .errors import BadDimensions, EmptyImage

# ITU-R 601 luma weights for color-to-grayscale conversion
LUMA_WEIGHTS = (0.299, 0.587, 0.114)


@dataclass(frozen=True, eq=False)
class GrayImage:
    """An 8-bit grayscale image; pixels are row-major (height, width)."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise EmptyImage(f"image dimensions must be positive, got {self.width}x{self.height}")
        arr = np.asarray(self.pixels)
        if arr.shape != (self.height, self.width):
            raise ValueError(
                f"pixel array shape {arr.shape} does not match {self.height}x{self.width}"
            )
        if arr.dtype != np.uint8:
            if not np.issubdtype(arr.dtype, np.integer):
                raise ValueError(f"pixels must be integers, got dtype {arr.dtype}")
            if int(arr.min()) < 0 or int(arr.max()) > 255:
                raise ValueError("pixel values must be in 0..255")
            arr = arr.astype(np.uint8)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @classmethod
    def from_rows(cls, rows) -> "GrayImage":
        arr = np.asarray(rows)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D row list, got {arr.ndim} dimension(s)")
        return cls(width=arr.shape[1], height=arr.shape[0], pixels=arr)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GrayImage):
            return NotImplemented
        return (
            self.width == other.width
            and self.height == other.height
            and bool(np.array_equal(self.pixels, other.pixels))
        )


def _round_half_away(values: np.ndarray) -> np.ndarray:
    """Half-away-from-zero rounding, clipped into the 8-bit range."""
    rounded = np.where(values >= 0, np.floor(values + 0.5), np.ceil(values - 0.5))
    return np.clip(rounded, 0, 255).astype(np.uint8)


def equalize(img: GrayImage) -> GrayImage:
    """Classic histogram equalization via the CDF remap.

    out(v) = round((cdf(v) - cdf_min) / (N - cdf_min) * 255) with
    cdf_min the CDF at the lowest populated intensity. A constant image
    has N = cdf_min and is returned unchanged. The remap is monotone,
    so pixel rank order is always preserved.
    """
    if img.pixels.size == 0:
        raise EmptyImage("cannot equalize an empty image")
    hist = np.bincount(img.pixels.ravel(), minlength=256)
    cdf = np.cumsum(hist)
    n = int(cdf[-1])
    cdf_min = int(cdf[np.nonzero(hist)[0][0]])
    if cdf_min == n:
        return GrayImage(img.width, img.height, img.pixels)
    lut = _round_half_away((cdf - cdf_min) * 255.0 / (n - cdf_min))
    return GrayImage(img.width, img.height, lut[img.pixels])


def resize(img: GrayImage, target_w: int, target_h: int) -> GrayImage:
    """Bilinear resize with half-pixel-center coordinate mapping.

    Output pixel (i, j) samples the source at
    ((j + 0.5) * w/w', (i + 0.5) * h/h') - 0.5 with edge replication;
    resizing to the source dimensions is pixel-identical.
    """
    if target_w < 1 or target_h < 1:
        raise BadDimensions(f"resize target must be positive, got {target_w}x{target_h}")
    src = img.pixels.astype(np.float64)
    xs = (np.arange(target_w) + 0.5) * (img.width / target_w) - 0.5
    ys = (np.arange(target_h) + 0.5) * (img.height / target_h) - 0.5
    x0 = np.floor(xs).astype(np.int64)
    y0 = np.floor(ys).astype(np.int64)
    dx = xs - x0
    dy = ys - y0
    x0c = np.clip(x0, 0, img.width - 1)
    x1c = np.clip(x0 + 1, 0, img.width - 1)
    y0c = np.clip(y0, 0, img.height - 1)
    y1c = np.clip(y0 + 1, 0, img.height - 1)
    top = src[np.ix_(y0c, x0c)] * (1.0 - dx) + src[np.ix_(y0c, x1c)] * dx
    bottom = src[np.ix_(y1c, x0c)] * (1.0 - dx) + src[np.ix_(y1c, x1c)] * dx
    values = top * (1.0 - dy)[:, None] + bottom * dy[:, None]
    return GrayImage(target_w, target_h, _round_half_away(values))


def hflip(img: GrayImage) -> GrayImage:
    """Mirror columns (left-right); an involution."""
    return GrayImage(img.width, img.height, img.pixels[:, ::-1])


def _paste_center(block: np.ndarray, out_h: int, out_w: int) -> np.ndarray:
    """Center a block on a zero canvas, cropping any overflow."""
    out = np.zeros((out_h, out_w), dtype=np.uint8)
    block_h, block_w = block.shape
    off_y = (out_h - block_h) // 2
    off_x = (out_w - block_w) // 2
    src_y = max(0, -off_y)
    src_x = max(0, -off_x)
    dst_y = max(0, off_y)
    dst_x = max(0, off_x)
    copy_h = min(block_h - src_y, out_h - dst_y)
    copy_w = min(block_w - src_x, out_w - dst_x)
    out[dst_y : dst_y + copy_h, dst_x : dst_x + copy_w] = block[
        src_y : src_y + copy_h, src_x : src_x + copy_w
    ]
    return out


def _bilinear_zero_fill(src: np.ndarray, sx: np.ndarray, sy: np.ndarray) -> np.ndarray:
    """Sample src at float coords (sx, sy); outside contributes zero."""
    h, w = src.shape
    x0 = np.floor(sx).astype(np.int64)
    y0 = np.floor(sy).astype(np.int64)
    dx = sx - x0
    dy = sy - y0
    values = np.zeros(sx.shape, dtype=np.float64)
    for off_y, weight_y in ((0, 1.0 - dy), (1, dy)):
        for off_x, weight_x in ((0, 1.0 - dx), (1, dx)):
            xi = x0 + off_x
            yi = y0 + off_y
            valid = (xi >= 0) & (xi < w) & (yi >= 0) & (yi < h)
            sample = src[np.clip(yi, 0, h - 1), np.clip(xi, 0, w - 1)]
            values += np.where(valid, sample, 0.0) * weight_y * weight_x
    return values


def rotate(img: GrayImage, degrees: float, expand: bool = False) -> GrayImage:
    """Rotate counterclockwise about the image center, background 0.

    With expand the canvas grows to contain the rotated bounds;
    otherwise the original canvas is kept and corners are cut. Right
    angles take an exact permutation path (no resampling); other
    angles are bilinear with zero fill.
    """
    angle = degrees % 360.0
    if angle % 90.0 == 0.0:
        rotated = np.rot90(img.pixels, int(angle // 90.0))
        if expand or rotated.shape == img.pixels.shape:
            return GrayImage(rotated.shape[1], rotated.shape[0], rotated)
        return GrayImage(img.width, img.height, _paste_center(rotated, img.height, img.width))

    theta = math.radians(angle)
    cos, sin = math.cos(theta), math.sin(theta)
    if expand:
        out_w = math.ceil(abs(img.width * cos) + abs(img.height * sin))
        out_h = math.ceil(abs(img.width * sin) + abs(img.height * cos))
    else:
        out_w, out_h = img.width, img.height
    # destination pixel centers, relative to the canvas center, mapped
    # back into source coordinates by the inverse rotation (y axis down)
    xs = np.arange(out_w) + 0.5 - out_w / 2.0
    ys = np.arange(out_h) + 0.5 - out_h / 2.0
    grid_x, grid_y = np.meshgrid(xs, ys)
    src_x = grid_x * cos - grid_y * sin + img.width / 2.0 - 0.5
    src_y = grid_x * sin + grid_y * cos + img.height / 2.0 - 0.5
    values = _bilinear_zero_fill(img.pixels.astype(np.float64), src_x, src_y)
    return GrayImage(out_w, out_h, _round_half_away(values))


def load_png(path) -> GrayImage:
    """Read a PNG as 8-bit grayscale.

    Color inputs are converted with the ITU-R 601 luma weights
    0.299/0.587/0.114 (rounded half away from zero), not the codec's
    own approximation, so the conversion is pinned to this package.
    """
    with Image.open(path) as im:
        if im.mode == "L":
            arr = np.asarray(im, dtype=np.uint8)
        elif im.mode == "LA":
            arr = np.asarray(im)[:, :, 0].astype(np.uint8)
        else:
            rgb = np.asarray(im.convert("RGB"), dtype=np.float64)
            arr = _round_half_away(rgb @ np.array(LUMA_WEIGHTS))
    return GrayImage(width=arr.shape[1], height=arr.shape[0], pixels=arr)


def save_png(img: GrayImage, path):
    """Write an 8-bit grayscale PNG."""
    Image.fromarray(np.asarray(img.pixels), mode="L").save(path, format="PNG")
