"""Deterministic attack simulators for robustness benchmarking.

``wavelet_compress`` models wavelet compression as hard thresholding of
detail coefficients; an entropy coding stage is lossless and would not
change the pixels, so none is applied.  ``crop`` blanks a rectangle
while keeping the original geometry, since extraction needs the
full-size raster.
"""

from dataclasses import dataclass

import numpy as np

from .image_io import PlanarImage
from .wavelet import dwt2_forward, dwt2_inverse, threshold_details

__all__ = ["CropRect", "wavelet_compress", "crop"]

_LEVELS = 3


@dataclass(frozen=True)
class CropRect:
    """Axis-aligned rectangle: top-left corner (x, y), extent (w, h)."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        if self.w < 0 or self.h < 0:
            raise ValueError(f"rectangle extent must be >= 0, got {self.w}x{self.h}")
        if self.x < 0 or self.y < 0:
            raise ValueError(f"rectangle origin must be >= 0, got ({self.x}, {self.y})")


def wavelet_compress(img: PlanarImage, t255: float) -> PlanarImage:
    """Compress by zeroing detail coefficients below a threshold.

    ``t255`` is expressed on the 0-255 amplitude scale and divided by 255
    internally, since the pipeline works on unit-range samples.  Each
    channel is thresholded independently over a 3-level decomposition.
    """
    if not t255 >= 0.0:
        raise ValueError(f"threshold must be >= 0, got {t255}")
    t = t255 / 255.0
    out = np.empty_like(img.data)
    for ch in range(img.channels):
        pyr = dwt2_forward(img.data[ch], _LEVELS)
        out[ch] = dwt2_inverse(threshold_details(pyr, t))
    return PlanarImage(np.clip(out, 0.0, 1.0))


def crop(img: PlanarImage, rect: CropRect, fill: float = 0.0) -> PlanarImage:
    """Replace the samples inside ``rect`` with ``fill`` in every channel."""
    if rect.x + rect.w > img.width or rect.y + rect.h > img.height:
        raise ValueError(
            f"rectangle ({rect.x}, {rect.y}, {rect.w}, {rect.h}) exceeds "
            f"image bounds {img.width}x{img.height}"
        )
    if not 0.0 <= fill <= 1.0:
        raise ValueError(f"fill must lie in [0, 1], got {fill}")
    data = img.data.copy()
    data[:, rect.y : rect.y + rect.h, rect.x : rect.x + rect.w] = fill
    return PlanarImage(data)
