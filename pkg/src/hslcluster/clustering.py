"""Fuzzy c-means over weighted HSL color samples.

Samples are unique colors with positive integer pixel counts; the counts
enter every sum homogeneously, so clustering weighted unique colors is
identical to clustering the raw pixels.

The alternation is: seed k centers, then repeat (membership update,
center update) until memberships or centers stop moving.  Memberships use
the inverse-power ratio rule with fuzzifier omega in (1, 1.5); centers use
a chroma-weighted circular mean for hue, an achromaticity-weighted mean
for luminosity, and a plain weighted mean for saturation.

The center updates are not exact coordinate minimizers of the recorded
objective when the saturation-gated distance is selected (the gating
factors themselves depend on the center saturations), so the objective
history is reported but monotone decrease is not guaranteed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .colorspace import HslColor
from .distance import DistanceKind, dist_sq_array

ClusterCenter = HslColor


@dataclass(frozen=True)
class WeightedSample:
    """A unique color plus the number of pixels carrying it."""

    color: HslColor
    weight: int = 1

    def __post_init__(self):
        if self.weight < 1:
            raise ValueError(f"weight must be >= 1, got {self.weight!r}")


@dataclass(frozen=True)
class ClusterConfig:
    k: int
    omega: float = 1.3
    max_iters: int = 100
    tol: float = 1e-5
    seed: int = 42
    distance: DistanceKind = DistanceKind.PROPOSED
    eps_sing: float = 1e-12

    def __post_init__(self):
        if self.k < 1:
            raise ValueError(f"k must be >= 1, got {self.k!r}")
        if not (1.0 < self.omega < 1.5):
            raise ValueError(f"omega must lie strictly inside (1, 1.5), got {self.omega!r}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters!r}")
        if self.tol <= 0.0:
            raise ValueError(f"tol must be positive, got {self.tol!r}")
        if self.seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {self.seed!r}")
        if self.eps_sing <= 0.0:
            raise ValueError(f"eps_sing must be positive, got {self.eps_sing!r}")
        if not isinstance(self.distance, DistanceKind):
            raise TypeError(f"distance must be a DistanceKind, got {self.distance!r}")


@dataclass
class ClusterResult:
    centers: list[HslColor]
    memberships: np.ndarray
    iterations: int
    objective_history: list[float] = field(default_factory=list)


def _sample_arrays(samples) -> tuple[np.ndarray, np.ndarray]:
    hsl = np.array([(s.color.h, s.color.s, s.color.l) for s in samples], dtype=np.float64)
    weights = np.array([s.weight for s in samples], dtype=np.float64)
    return hsl, weights


def _center_array(centers) -> np.ndarray:
    return np.array([(c.h, c.s, c.l) for c in centers], dtype=np.float64)


def _to_centers(arr: np.ndarray) -> list[HslColor]:
    return [HslColor(float(h), float(s), float(l)) for h, s, l in arr]


def init_centers(samples, k: int, seed: int, kind: DistanceKind) -> list[HslColor]:
    """Seed k centers from the sample colors by weighted farthest-point sampling.

    The first center is drawn with probability proportional to weight; each
    further center with probability proportional to weight times squared
    distance to the nearest center already chosen.  When every remaining
    color sits at zero distance from the chosen set (possible under the
    saturation-gated metric), the draw falls back to weights alone over the
    colors not yet chosen.  Deterministic for a fixed seed.
    """
    hsl, weights = _sample_arrays(samples)
    n = len(hsl)
    distinct = len(np.unique(hsl, axis=0))
    if k > distinct:
        raise ValueError(f"k={k} exceeds the {distinct} distinct sample colors")

    rng = np.random.default_rng(seed)
    first = int(rng.choice(n, p=weights / weights.sum()))
    chosen = [first]
    available = ~np.all(hsl == hsl[first], axis=1)
    dmin = dist_sq_array(hsl, hsl[first : first + 1], kind)[:, 0]
    for _ in range(1, k):
        probs = weights * dmin
        total = probs.sum()
        if total <= 0.0:
            probs = weights * available
            total = probs.sum()
        idx = int(rng.choice(n, p=probs / total))
        chosen.append(idx)
        available &= ~np.all(hsl == hsl[idx], axis=1)
        dmin = np.minimum(dmin, dist_sq_array(hsl, hsl[idx : idx + 1], kind)[:, 0])
    return [HslColor(*map(float, hsl[i])) for i in chosen]


def _memberships_from_dsq(dsq: np.ndarray, omega: float, eps_sing: float) -> np.ndarray:
    """Membership rows from squared distances to the centers.

    Regular rows: w_ij = (d2_ij / d2_min)^(-1/(omega-1)) normalized over j,
    which equals the ratio rule 1/(1 + sum_{m != j} (D_ij/D_im)^(2/(omega-1)))
    without ever forming a square root or a base below one.  Rows containing
    a squared distance below eps_sing split membership equally over those
    centers instead.
    """
    n, k = dsq.shape
    w = np.zeros((n, k), dtype=np.float64)
    singular = dsq < eps_sing
    sing_rows = singular.any(axis=1)

    reg = ~sing_rows
    if reg.any():
        d = dsq[reg]
        ratios = d / d.min(axis=1, keepdims=True)
        inv = ratios ** (-1.0 / (omega - 1.0))
        w[reg] = inv / inv.sum(axis=1, keepdims=True)
    if sing_rows.any():
        hits = singular[sing_rows].astype(np.float64)
        w[sing_rows] = hits / hits.sum(axis=1, keepdims=True)
    return w


def update_memberships(samples, centers, cfg: ClusterConfig) -> np.ndarray:
    """One membership update: an (n, k) row-stochastic matrix."""
    hsl, _ = _sample_arrays(samples)
    dsq = dist_sq_array(hsl, _center_array(centers), cfg.distance)
    return _memberships_from_dsq(dsq, cfg.omega, cfg.eps_sing)


def _update_centers_arrays(
    hsl: np.ndarray,
    weights: np.ndarray,
    memberships: np.ndarray,
    omega: float,
    eps_sing: float,
    previous: np.ndarray,
) -> np.ndarray:
    """Center update on raw arrays; ``previous`` supplies degenerate fallbacks."""
    hue, sat, lum = hsl[:, 0], hsl[:, 1], hsl[:, 2]
    u = weights[:, None] * memberships**omega  # effective weights (n, k)
    chroma = np.sqrt(sat)
    achroma = np.sqrt(1.0 - sat)

    sin_sum = (u * (chroma * np.sin(hue))[:, None]).sum(axis=0)
    cos_sum = (u * (chroma * np.cos(hue))[:, None]).sum(axis=0)
    resultant = np.hypot(sin_sum, cos_sum)
    h_new = np.arctan2(sin_sum, cos_sum)
    h_new = np.where(h_new <= -np.pi, h_new + 2.0 * np.pi, h_new)
    # Hue is undefined when the chroma-weighted resultant vanishes (all
    # members gray, or exact cancellation): keep the previous hue.
    h_new = np.where(resultant < eps_sing, previous[:, 0], h_new)

    u_total = u.sum(axis=0)
    s_den = np.where(u_total < eps_sing, 1.0, u_total)
    s_new = (u * sat[:, None]).sum(axis=0) / s_den
    s_new = np.where(u_total < eps_sing, previous[:, 1], s_new)

    a_total = (u * achroma[:, None]).sum(axis=0)
    l_den = np.where(a_total < eps_sing, 1.0, a_total)
    l_new = (u * (achroma * lum)[:, None]).sum(axis=0) / l_den
    l_new = np.where(a_total < eps_sing, previous[:, 2], l_new)

    return np.stack(
        [h_new, np.clip(s_new, 0.0, 1.0), np.clip(l_new, 0.0, 1.0)], axis=-1
    )


def update_centers(samples, memberships, cfg: ClusterConfig, previous_centers) -> list[HslColor]:
    """One center update from a row-stochastic membership matrix.

    Each center keeps its previous hue when its members carry no chroma,
    its previous luminosity when they carry no achromaticity, and the whole
    previous center when it has no effective members at all.
    """
    hsl, weights = _sample_arrays(samples)
    arr = _update_centers_arrays(
        hsl,
        weights,
        np.asarray(memberships, dtype=np.float64),
        cfg.omega,
        cfg.eps_sing,
        _center_array(previous_centers),
    )
    return _to_centers(arr)


def objective(samples, memberships, centers, cfg: ClusterConfig) -> float:
    """Weighted fuzzy within-cluster dispersion.

    J = sum_i t_i sum_j w_ij^omega D^2(sample_i, center_j); zero exactly
    when every sample coincides with a center of full membership.
    """
    hsl, weights = _sample_arrays(samples)
    dsq = dist_sq_array(hsl, _center_array(centers), cfg.distance)
    w = np.asarray(memberships, dtype=np.float64)
    return float((weights[:, None] * w**cfg.omega * dsq).sum())


def run(samples, cfg: ClusterConfig) -> ClusterResult:
    """Cluster weighted samples into cfg.k fuzzy clusters.

    Stops when the largest per-entry membership change drops below
    cfg.tol, when the largest center displacement (measured by the
    configured squared distance) drops below cfg.tol**2, or after
    cfg.max_iters iterations.  The returned memberships are recomputed
    against the final centers, so argmax rows agree with nearest-center
    assignment.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("cannot cluster an empty sample list")
    hsl, weights = _sample_arrays(samples)
    carr = _center_array(init_centers(samples, cfg.k, cfg.seed, cfg.distance))

    history: list[float] = []
    w_prev: np.ndarray | None = None
    iterations = 0
    dsq = dist_sq_array(hsl, carr, cfg.distance)
    for _ in range(cfg.max_iters):
        iterations += 1
        w = _memberships_from_dsq(dsq, cfg.omega, cfg.eps_sing)
        new_carr = _update_centers_arrays(hsl, weights, w, cfg.omega, cfg.eps_sing, carr)
        new_dsq = dist_sq_array(hsl, new_carr, cfg.distance)
        history.append(float((weights[:, None] * w**cfg.omega * new_dsq).sum()))

        shift = float(
            dist_sq_array(carr, new_carr, cfg.distance).diagonal().max()
        )
        converged = shift < cfg.tol**2 or (
            w_prev is not None and float(np.abs(w - w_prev).max()) < cfg.tol
        )
        carr, dsq, w_prev = new_carr, new_dsq, w
        if converged:
            break

    final_w = _memberships_from_dsq(dsq, cfg.omega, cfg.eps_sing)
    return ClusterResult(
        centers=_to_centers(carr),
        memberships=final_w,
        iterations=iterations,
        objective_history=history,
    )
