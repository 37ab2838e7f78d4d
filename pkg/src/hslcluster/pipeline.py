"""Image ingestion, color histogram, hard assignment, and reduced output.

Supported interchange formats are 8-bit RGB PNG (no alpha) and binary PPM
(P6, maxval 255).  Pixels are mapped to the unit cube by v/255; clustering
runs over the image's unique colors weighted by their pixel counts, which
is mathematically identical to clustering every pixel.
"""
from __future__ import annotations

import io
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image as PILImage

from .clustering import ClusterConfig, ClusterResult, WeightedSample, run
from .colorspace import HslColor, rgb_to_hsl_array
from .distance import DistanceKind, dist_sq_array

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ImageFormatError(Exception):
    """Unsupported or malformed image data."""


@dataclass
class Image:
    """An 8-bit RGB raster; ``pixels`` has shape (height, width, 3) uint8."""

    width: int
    height: int
    pixels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("image dimensions must be positive")
        self.pixels = np.asarray(self.pixels, dtype=np.uint8)
        if self.pixels.shape != (self.height, self.width, 3):
            raise ValueError(
                f"pixel array shape {self.pixels.shape} does not match "
                f"{self.height}x{self.width}x3"
            )


@dataclass
class Histogram:
    """Unique 24-bit colors of one image with pixel counts and HSL features.

    ``inverse`` maps each pixel (row-major) back to its unique-color index,
    so per-pixel quantities follow from per-unique-color ones by indexing.
    """

    colors: np.ndarray  # (p, 3) uint8, unique, ascending by packed key
    counts: np.ndarray  # (p,) int64
    hsl: np.ndarray  # (p, 3) float64
    inverse: np.ndarray  # (width*height,) indices into colors

    def to_samples(self) -> list[WeightedSample]:
        return [
            WeightedSample(HslColor(h, s, l), int(c))
            for (h, s, l), c in zip(self.hsl, self.counts)
        ]


@dataclass
class ClusterSummary:
    h: float
    s: float
    l: float
    rgb: tuple[int, int, int]
    share: float


@dataclass
class ReductionReport:
    config: dict
    iterations: int
    objective_history: list[float]
    clusters: list[ClusterSummary]

    def to_json_dict(self) -> dict:
        return {
            "config": self.config,
            "iterations": self.iterations,
            "objective_history": self.objective_history,
            "clusters": [
                {"h": c.h, "s": c.s, "l": c.l, "rgb": list(c.rgb), "share": c.share}
                for c in self.clusters
            ],
        }


def _decode_ppm(data: bytes) -> Image:
    if not data.startswith(b"P6"):
        raise ImageFormatError("not a P6 PPM")
    pos = 2
    fields: list[int] = []
    while len(fields) < 3:
        while pos < len(data):
            byte = data[pos : pos + 1]
            if byte.isspace():
                pos += 1
            elif byte == b"#":
                nl = data.find(b"\n", pos)
                pos = len(data) if nl < 0 else nl + 1
            else:
                break
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ImageFormatError("truncated PPM header")
        try:
            fields.append(int(data[start:pos]))
        except ValueError:
            raise ImageFormatError("malformed PPM header") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise ImageFormatError("malformed PPM dimensions")
    if maxval != 255:
        raise ImageFormatError(f"unsupported PPM bit depth (maxval {maxval})")
    if pos >= len(data) or not data[pos : pos + 1].isspace():
        raise ImageFormatError("malformed PPM header")
    pos += 1  # exactly one whitespace byte separates header and raster
    expected = width * height * 3
    raster = data[pos : pos + expected]
    if len(raster) < expected:
        raise ImageFormatError("truncated PPM pixel data")
    pixels = np.frombuffer(raster, dtype=np.uint8).reshape(height, width, 3).copy()
    return Image(width, height, pixels)


def _decode_png(data: bytes) -> Image:
    try:
        im = PILImage.open(io.BytesIO(data))
        im.load()
    except Exception as exc:
        raise ImageFormatError(f"malformed PNG: {exc}") from exc
    if im.mode in ("RGBA", "LA", "PA") or "transparency" in im.info:
        raise ImageFormatError("alpha channels are not supported")
    if im.mode != "RGB":
        raise ImageFormatError(f"unsupported PNG mode {im.mode!r} (8-bit RGB only)")
    pixels = np.asarray(im, dtype=np.uint8)
    return Image(im.width, im.height, pixels)


def load_image(path) -> Image:
    """Decode an 8-bit RGB image (PNG or P6 PPM), detected by content."""
    data = Path(path).read_bytes()
    if data.startswith(_PNG_MAGIC):
        return _decode_png(data)
    if data.startswith(b"P6"):
        return _decode_ppm(data)
    raise ImageFormatError(f"unsupported image format: {path}")


def save_image(img: Image, path) -> None:
    """Encode as PNG or P6 PPM, selected by file extension."""
    path = Path(path)
    suffix = path.suffix.lower()
    if suffix == ".png":
        PILImage.fromarray(img.pixels, mode="RGB").save(path, format="PNG")
    elif suffix == ".ppm":
        header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
        path.write_bytes(header + img.pixels.tobytes())
    else:
        raise ImageFormatError(f"unsupported output extension {suffix!r}")


def build_histogram(img: Image) -> Histogram:
    """Collapse an image to its unique colors with pixel counts."""
    flat = img.pixels.reshape(-1, 3).astype(np.uint32)
    keys = (flat[:, 0] << 16) | (flat[:, 1] << 8) | flat[:, 2]
    unique_keys, inverse, counts = np.unique(keys, return_inverse=True, return_counts=True)
    colors = np.stack(
        [(unique_keys >> 16) & 0xFF, (unique_keys >> 8) & 0xFF, unique_keys & 0xFF],
        axis=-1,
    ).astype(np.uint8)
    hsl = rgb_to_hsl_array(colors / 255.0)
    return Histogram(colors=colors, counts=counts.astype(np.int64), hsl=hsl, inverse=inverse)


def assign(img: Image, histogram: Histogram, centers, kind: DistanceKind) -> np.ndarray:
    """Label every pixel with its nearest center (ties to the lowest index).

    ``histogram`` must have been built from ``img``.  Returns a row-major
    (width*height,) array of cluster indices.
    """
    carr = np.array([(c.h, c.s, c.l) for c in centers], dtype=np.float64)
    dsq = dist_sq_array(histogram.hsl, carr, kind)
    labels_unique = np.argmin(dsq, axis=1)
    return labels_unique[histogram.inverse]


def render_cluster_colors(histogram: Histogram, memberships, cfg: ClusterConfig) -> np.ndarray:
    """Display color per cluster: membership-powered mean of member RGB values.

    Channel means are taken in [0, 1] with weights t_i * w_ij^omega, then
    quantized by round(255 * v).  A cluster with no effective members
    (possible only through degenerate singular memberships) falls back to
    the global weighted mean color.
    """
    w = np.asarray(memberships, dtype=np.float64)
    u = histogram.counts[:, None] * w**cfg.omega  # (p, k)
    rgb01 = histogram.colors.astype(np.float64) / 255.0
    sums = u.T @ rgb01  # (k, 3)
    totals = u.sum(axis=0)
    empty = totals < cfg.eps_sing
    means = sums / np.where(empty, 1.0, totals)[:, None]
    if empty.any():
        global_mean = (histogram.counts[:, None] * rgb01).sum(axis=0) / histogram.counts.sum()
        means[empty] = global_mean
    return np.rint(255.0 * means).astype(np.uint8)


def reduce_image(img: Image, cfg: ClusterConfig) -> tuple[Image, ReductionReport]:
    """Quantize an image to at most cfg.k colors.

    Composes histogram construction, fuzzy clustering, nearest-center
    assignment, and cluster rendering; deterministic for a fixed config.
    """
    histogram = build_histogram(img)
    result = run(histogram.to_samples(), cfg)
    labels = assign(img, histogram, result.centers, cfg.distance)
    palette = render_cluster_colors(histogram, result.memberships, cfg)
    reduced = Image(img.width, img.height, palette[labels].reshape(img.pixels.shape))
    report = _build_report(histogram, result, labels, palette, cfg)
    return reduced, report


def _build_report(
    histogram: Histogram,
    result: ClusterResult,
    labels: np.ndarray,
    palette: np.ndarray,
    cfg: ClusterConfig,
) -> ReductionReport:
    total = labels.size
    pixel_counts = np.bincount(labels, minlength=cfg.k)
    clusters = [
        ClusterSummary(
            h=center.h,
            s=center.s,
            l=center.l,
            rgb=tuple(int(v) for v in palette[j]),
            share=float(pixel_counts[j] / total),
        )
        for j, center in enumerate(result.centers)
    ]
    return ReductionReport(
        config=config_echo(cfg),
        iterations=result.iterations,
        objective_history=list(result.objective_history),
        clusters=clusters,
    )


def config_echo(cfg: ClusterConfig) -> dict:
    return {
        "k": cfg.k,
        "omega": cfg.omega,
        "distance": cfg.distance.value,
        "max_iters": cfg.max_iters,
        "tol": cfg.tol,
        "seed": cfg.seed,
    }


def save_report(report: ReductionReport, path) -> None:
    Path(path).write_text(json.dumps(report.to_json_dict(), indent=2) + "\n")
