"""Squared inter-color distances on the HSL cylinder.

Two metrics, switchable everywhere a ``DistanceKind`` is accepted:

* ``EUCLID`` -- the cylindrical Euclidean form

      D_E^2 = 4 S1 S2 sin^2((H1-H2)/2) + (S1-S2)^2 + (L1-L2)^2

* ``PROPOSED`` -- a saturation-gated variant that weights the hue term by
  the chromaticity of both colors and the luminosity term by their
  achromaticity:

      D_P^2 = sqrt(S1 S2) sin^2((H1-H2)/2)
            + sqrt((1-S1)(1-S2)) (L1-L2)^2
            + (S1-S2)^2

  Hue differences between desaturated colors and luminosity differences
  between saturated colors are thereby suppressed.

All hot paths work on squared distances; membership ratios raise squared
distances to half the exponent instead of taking square roots.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .colorspace import HslColor


class DistanceKind(enum.Enum):
    """Selects the squared distance used by clustering and assignment."""

    PROPOSED = "hslp"
    EUCLID = "hsleuclid"


def hue_dist_sq(h1: float, h2: float) -> float:
    """Squared chord distance between two hues: sin^2((h1 - h2)/2).

    2*pi-periodic in both arguments, in [0, 1], maximal for opposed hues.
    """
    return math.sin((h1 - h2) / 2.0) ** 2


def chroma_index(s: float) -> float:
    """Chromaticity index sqrt(s): 0 for gray, 1 for fully saturated."""
    return math.sqrt(s)


def achroma_index(s: float) -> float:
    """Achromaticity index sqrt(1 - s): 1 for gray, 0 for fully saturated."""
    return math.sqrt(1.0 - s)


def multipliers(s1: float, s2: float) -> tuple[float, float]:
    """Gating factors (alpha, beta) for the hue and luminosity terms.

    alpha is the product of the chromaticity indexes, beta the product of
    the achromaticity indexes; both lie in [0, 1].
    """
    return chroma_index(s1) * chroma_index(s2), achroma_index(s1) * achroma_index(s2)


def dist_sq_euclid(q1: HslColor, q2: HslColor) -> float:
    return (
        4.0 * q1.s * q2.s * hue_dist_sq(q1.h, q2.h)
        + (q1.s - q2.s) ** 2
        + (q1.l - q2.l) ** 2
    )


def dist_sq_proposed(q1: HslColor, q2: HslColor) -> float:
    return (
        math.sqrt(q1.s * q2.s) * hue_dist_sq(q1.h, q2.h)
        + math.sqrt((1.0 - q1.s) * (1.0 - q2.s)) * (q1.l - q2.l) ** 2
        + (q1.s - q2.s) ** 2
    )


def dist_sq(q1: HslColor, q2: HslColor, kind: DistanceKind) -> float:
    """Squared distance under the selected metric."""
    if kind is DistanceKind.PROPOSED:
        return dist_sq_proposed(q1, q2)
    return dist_sq_euclid(q1, q2)


def dist_sq_array(a: np.ndarray, b: np.ndarray, kind: DistanceKind) -> np.ndarray:
    """Pairwise squared distances between HSL arrays.

    ``a`` has shape (n, 3), ``b`` shape (k, 3); the result is (n, k).
    Matches the scalar functions entry for entry.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    h1, s1, l1 = a[:, 0:1], a[:, 1:2], a[:, 2:3]
    h2, s2, l2 = b[None, :, 0], b[None, :, 1], b[None, :, 2]
    hue = np.sin((h1 - h2) / 2.0) ** 2
    if kind is DistanceKind.PROPOSED:
        return (
            np.sqrt(s1 * s2) * hue
            + np.sqrt((1.0 - s1) * (1.0 - s2)) * (l1 - l2) ** 2
            + (s1 - s2) ** 2
        )
    return 4.0 * s1 * s2 * hue + (s1 - s2) ** 2 + (l1 - l2) ** 2
