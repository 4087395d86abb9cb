"""Quality and fidelity measures: PSNR, Pearson correlation, NC, BER."""

import math
from dataclasses import dataclass

import numpy as np

from .image_io import BitMatrix, PlanarImage

__all__ = ["MetricsReport", "psnr", "pearson", "nc", "ber"]


@dataclass(frozen=True)
class MetricsReport:
    """One row of a benchmark: image fidelity plus watermark recovery."""

    psnr_db: float
    pearson: float
    nc: float
    ber_percent: float


def _check_same_shape(a: PlanarImage, b: PlanarImage) -> None:
    if a.data.shape != b.data.shape:
        raise ValueError(f"image shapes differ: {a.data.shape} vs {b.data.shape}")


def psnr(a: PlanarImage, b: PlanarImage) -> float:
    """Peak signal-to-noise ratio in dB on the 0-255 amplitude scale.

    Computed over all samples of all channels; +inf when the images are
    identical.
    """
    _check_same_shape(a, b)
    mse = np.mean(((a.data - b.data) * 255.0) ** 2)
    if mse == 0.0:
        return math.inf
    return 10.0 * math.log10(255.0**2 / mse)


def pearson(a: PlanarImage, b: PlanarImage) -> float:
    """Pearson correlation over all samples of all channels jointly."""
    _check_same_shape(a, b)
    x = a.data.reshape(-1)
    y = b.data.reshape(-1)
    if np.ptp(x) == 0.0 or np.ptp(y) == 0.0:
        raise ValueError("correlation undefined for a constant image")
    return float(np.corrcoef(x, y)[0, 1])


def nc(w: BitMatrix, w2: BitMatrix) -> float:
    """Normalized correlation between two binary marks of equal shape.

    NC = sum(w * w2) / sqrt(sum(w^2) * sum(w2^2)) over raw {0, 1} bits;
    defined as 0 when ``w2`` carries no ink at all.
    """
    if w.bits.shape != w2.bits.shape:
        raise ValueError(f"shapes differ: {w.bits.shape} vs {w2.bits.shape}")
    n1 = int(w.bits.sum())
    n2 = int(w2.bits.sum())
    if n1 == 0:
        raise ValueError("reference watermark must not be all-zero")
    if n2 == 0:
        return 0.0
    overlap = int((w.bits & w2.bits).sum())
    return overlap / math.sqrt(n1 * n2)


def ber(w: BitMatrix, w2: BitMatrix) -> float:
    """Bit error rate in percent: 100 * mismatches / total bits."""
    if w.bits.shape != w2.bits.shape:
        raise ValueError(f"shapes differ: {w.bits.shape} vs {w2.bits.shape}")
    return 100.0 * float(np.count_nonzero(w.bits != w2.bits)) / w.size
