"""
Image preprocessing primitives
==============================

Deterministic 8-bit grayscale operations: histogram equalization,
bilinear resize, flip, rotation. All pure functions of the pixel grid.
"""

import tempfile
from pathlib import Path

from cxrmine import GrayImage, equalize, hflip, load_png, resize, rotate, save_png

# A washed-out gradient squeezed into a narrow band of levels.
rows = [[90 + (x + y) % 40 for x in range(8)] for y in range(6)]
img = GrayImage.from_rows(rows)
print("input levels:    ", sorted(set(img.pixels.ravel().tolist())))

# Equalization stretches the occupied levels across the full 0..255
# range while preserving their order.
eq = equalize(img)
print("equalized levels:", sorted(set(eq.pixels.ravel().tolist())))

# Bilinear resize with half-pixel centers; a 2x downscale of a
# checkerboard lands exactly on the average.
checker = GrayImage.from_rows([[0, 255], [255, 0]])
print("checker 2x2 -> 1x1:", resize(checker, 1, 1).pixels.tolist())

small = GrayImage.from_rows([[1, 2, 3], [4, 5, 6]])
print("hflip:", hflip(small).pixels.tolist())

# Right angles are exact pixel permutations; anything else resamples.
print("rot90 expanded:", rotate(small, 90, expand=True).pixels.tolist())
print("rot30 same-shape size:", rotate(img, 30).width, "x", rotate(img, 30).height)

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "equalized.png"
    save_png(eq, path)
    assert load_png(path) == eq
    print("png round trip ok:", path.name)
