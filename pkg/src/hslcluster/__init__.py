"""Color reduction via fuzzy c-means clustering in HSL space.

Provides the RGB<->HSL conversion, two switchable inter-color distances
(a saturation-gated form and the cylindrical Euclidean baseline), the
weighted fuzzy clustering loop built on them, and an image reduction
pipeline with PNG/PPM I/O and a CLI.
"""

from .clustering import (
    ClusterCenter,
    ClusterConfig,
    ClusterResult,
    WeightedSample,
    init_centers,
    objective,
    run,
    update_centers,
    update_memberships,
)
from .colorspace import HslColor, RgbColor, hsl_to_rgb_approx, normalize_hue, rgb_to_hsl
from .distance import (
    DistanceKind,
    achroma_index,
    chroma_index,
    dist_sq,
    dist_sq_euclid,
    dist_sq_proposed,
    hue_dist_sq,
    multipliers,
)
from .pipeline import (
    Histogram,
    Image,
    ImageFormatError,
    ReductionReport,
    assign,
    build_histogram,
    load_image,
    reduce_image,
    render_cluster_colors,
    save_image,
    save_report,
)

__all__ = [
    "ClusterCenter",
    "ClusterConfig",
    "ClusterResult",
    "DistanceKind",
    "Histogram",
    "HslColor",
    "Image",
    "ImageFormatError",
    "ReductionReport",
    "RgbColor",
    "WeightedSample",
    "achroma_index",
    "assign",
    "build_histogram",
    "chroma_index",
    "dist_sq",
    "dist_sq_euclid",
    "dist_sq_proposed",
    "hsl_to_rgb_approx",
    "hue_dist_sq",
    "init_centers",
    "load_image",
    "multipliers",
    "normalize_hue",
    "objective",
    "reduce_image",
    "render_cluster_colors",
    "rgb_to_hsl",
    "run",
    "save_image",
    "save_report",
    "update_centers",
    "update_memberships",
]

__version__ = "0.1.0"
