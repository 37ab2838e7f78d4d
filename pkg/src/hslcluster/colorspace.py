"""RGB <-> HSL conversion with an opponent-axis hue.

The forward map used throughout this package is

    H = atan2((B - G)/sqrt(2), (2R - B - G)/sqrt(6)),  H in (-pi, pi]
    L = M / (1 + M - m)
    S = 2(M - m) / (1 + |M - 0.5| + |m - 0.5|)

with M = max(R, G, B), m = min(R, G, B) and R, G, B in [0, 1].  Hue is an
angle on the opponent plane, so grayscale colors (M = m) have no meaningful
hue; atan2(0, 0) = 0 is taken as the grayscale convention.

There is no closed-form inverse (S and L couple M and m through absolute
values), so ``hsl_to_rgb_approx`` inverts by grid search plus local
refinement.  It is a debugging/rendering aid, not a hot-path operation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_SQRT2 = math.sqrt(2.0)
_SQRT6 = math.sqrt(6.0)


def normalize_hue(h: float) -> float:
    """Reduce an angle in radians to (-pi, pi]."""
    h = math.remainder(h, math.tau)
    if h <= -math.pi:
        h += math.tau
    return h


@dataclass(frozen=True)
class RgbColor:
    """A point in the unit RGB cube."""

    r: float
    g: float
    b: float

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = getattr(self, name)
            if not (0.0 <= v <= 1.0):
                raise ValueError(f"channel {name}={v!r} outside [0, 1]")

    @classmethod
    def from_8bit(cls, r: int, g: int, b: int) -> "RgbColor":
        """Map 8-bit channels to [0, 1] by v/255."""
        for v in (r, g, b):
            if not (0 <= v <= 255):
                raise ValueError(f"8-bit channel {v!r} outside [0, 255]")
        return cls(r / 255.0, g / 255.0, b / 255.0)


@dataclass(frozen=True)
class HslColor:
    """Hue (radians, (-pi, pi]), saturation and luminosity (both [0, 1]).

    Hue is normalized on construction; saturation/luminosity out of range
    are rejected.
    """

    h: float
    s: float
    l: float

    def __post_init__(self):
        object.__setattr__(self, "h", normalize_hue(self.h))
        if not (0.0 <= self.s <= 1.0):
            raise ValueError(f"saturation {self.s!r} outside [0, 1]")
        if not (0.0 <= self.l <= 1.0):
            raise ValueError(f"luminosity {self.l!r} outside [0, 1]")


def rgb_to_hsl(c: RgbColor) -> HslColor:
    """Convert an RGB color to HSL.

    Grayscale inputs (r == g == b) map to h=0, s=0, l=r exactly.
    """
    big = max(c.r, c.g, c.b)
    small = min(c.r, c.g, c.b)
    # grouping keeps grayscale exact (l = r) and hue exactly antisymmetric
    # under a green/blue swap
    h = math.atan2((c.b - c.g) / _SQRT2, (2.0 * c.r - (c.b + c.g)) / _SQRT6)
    l = big / (1.0 + (big - small))
    s = 2.0 * (big - small) / (1.0 + abs(big - 0.5) + abs(small - 0.5))
    # The formulas keep s, l inside [0, 1]; clipping only guards ulp drift.
    return HslColor(h, min(max(s, 0.0), 1.0), min(max(l, 0.0), 1.0))


def rgb_to_hsl_array(rgb: np.ndarray) -> np.ndarray:
    """Vectorized conversion: (..., 3) array of [0, 1] channels -> (..., 3) HSL.

    Matches ``rgb_to_hsl`` channel for channel (up to libm rounding).
    """
    rgb = np.asarray(rgb, dtype=np.float64)
    r, g, b = rgb[..., 0], rgb[..., 1], rgb[..., 2]
    big = np.max(rgb, axis=-1)
    small = np.min(rgb, axis=-1)
    h = np.arctan2((b - g) / _SQRT2, (2.0 * r - (b + g)) / _SQRT6)
    h = np.where(h <= -np.pi, h + 2.0 * np.pi, h)
    l = big / (1.0 + (big - small))
    s = 2.0 * (big - small) / (1.0 + np.abs(big - 0.5) + np.abs(small - 0.5))
    return np.stack([h, np.clip(s, 0.0, 1.0), np.clip(l, 0.0, 1.0)], axis=-1)


def _inversion_error(hsl: np.ndarray, q: HslColor) -> np.ndarray:
    """Squared mismatch between candidate HSL values and a target.

    The hue term is the squared half-angle chord scaled by the chroma of
    both colors, so hue mismatch is ignored exactly where hue carries no
    information (either color gray).
    """
    h, s, l = hsl[..., 0], hsl[..., 1], hsl[..., 2]
    hue_term = np.sqrt(s * q.s) * np.sin((h - q.h) / 2.0) ** 2
    return hue_term + (s - q.s) ** 2 + (l - q.l) ** 2


_GRID_STEPS = 33  # >= 32 steps per channel
_grid_cache: tuple[np.ndarray, np.ndarray] | None = None


def _rgb_grid() -> tuple[np.ndarray, np.ndarray]:
    global _grid_cache
    if _grid_cache is None:
        axis = np.linspace(0.0, 1.0, _GRID_STEPS)
        rr, gg, bb = np.meshgrid(axis, axis, axis, indexing="ij")
        rgb = np.stack([rr.ravel(), gg.ravel(), bb.ravel()], axis=-1)
        _grid_cache = (rgb, rgb_to_hsl_array(rgb))
    return _grid_cache


_BOX_OFFSETS = None


def _box_offsets() -> np.ndarray:
    global _BOX_OFFSETS
    if _BOX_OFFSETS is None:
        axis = np.linspace(-1.0, 1.0, 9)
        or_, og, ob = np.meshgrid(axis, axis, axis, indexing="ij")
        _BOX_OFFSETS = np.stack([or_.ravel(), og.ravel(), ob.ravel()], axis=-1)
    return _BOX_OFFSETS


def hsl_to_rgb_approx(q: HslColor, tol: float = 1e-2) -> RgbColor:
    """Approximately invert ``rgb_to_hsl`` by search.

    Coarse grid search over the RGB cube, then a shrinking-box local search
    on ``_inversion_error``: a 9x9x9 grid around the incumbent, recentered
    while the optimum sits on the box edge and halved otherwise.  The box
    moves diagonally, which this map's curved valleys require; an
    axis-at-a-time search stalls in them.  For targets in the achievable
    gamut the round trip is within ``tol`` per channel; for unachievable
    (s, l) pairs the nearest achievable point is returned.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    grid_rgb, grid_hsl = _rgb_grid()
    point = grid_rgb[int(np.argmin(_inversion_error(grid_hsl, q)))]

    offsets = _box_offsets()
    width = 1.0 / (_GRID_STEPS - 1)
    incumbent = float(_inversion_error(rgb_to_hsl_array(point[None, :]), q)[0])
    for _ in range(300):
        if width <= tol * 1e-2:
            break
        candidates = np.clip(point[None, :] + width * offsets, 0.0, 1.0)
        errors = _inversion_error(rgb_to_hsl_array(candidates), q)
        best = int(np.argmin(errors))
        if errors[best] < incumbent:
            moved = np.abs(candidates[best] - point)
            point = candidates[best]
            incumbent = float(errors[best])
            # a move that reached the box edge may want to go further:
            # recenter at the same width instead of tightening
            if np.all(moved < 0.999 * width):
                width /= 2.0
        else:
            width /= 2.0
    return RgbColor(float(point[0]), float(point[1]), float(point[2]))
