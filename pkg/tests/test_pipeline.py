import json
import math

import numpy as np
import pytest

from hslcluster.clustering import ClusterConfig, run, update_memberships
from hslcluster.colorspace import HslColor, rgb_to_hsl_array
from hslcluster.distance import DistanceKind
from hslcluster.pipeline import (
    Histogram,
    Image,
    ImageFormatError,
    assign,
    build_histogram,
    load_image,
    reduce_image,
    render_cluster_colors,
    save_image,
    save_report,
)


def make_image(pixels) -> Image:
    px = np.asarray(pixels, dtype=np.uint8)
    return Image(px.shape[1], px.shape[0], px)


def checkerboard(n=4):
    px = np.zeros((n, n, 3), np.uint8)
    px[(np.indices((n, n)).sum(axis=0) % 2) == 0] = (255, 0, 0)
    px[(np.indices((n, n)).sum(axis=0) % 2) == 1] = (0, 0, 255)
    return make_image(px)


def test_image_shape_validation():
    with pytest.raises(ValueError):
        Image(2, 2, np.zeros((2, 3, 3), np.uint8))
    with pytest.raises(ValueError):
        Image(0, 2, np.zeros((2, 0, 3), np.uint8))


# ---------------------------------------------------------------------------
# PPM / PNG codecs
# ---------------------------------------------------------------------------


def test_minimal_ppm_decode(tmp_path):
    path = tmp_path / "t.ppm"
    path.write_bytes(b"P6\n1 1\n255\n\xff\x00\x00")
    img = load_image(path)
    assert (img.width, img.height) == (1, 1)
    assert img.pixels.tolist() == [[[255, 0, 0]]]


def test_ppm_header_comments(tmp_path):
    path = tmp_path / "t.ppm"
    path.write_bytes(b"P6\n# a comment\n2 1\n# another\n255\n" + bytes(6))
    img = load_image(path)
    assert (img.width, img.height) == (2, 1)


def test_truncated_ppm_rejected(tmp_path):
    path = tmp_path / "t.ppm"
    path.write_bytes(b"P6\n2 2\n255\n\xff\x00\x00")
    with pytest.raises(ImageFormatError, match="truncated"):
        load_image(path)


def test_ppm_wrong_maxval_rejected(tmp_path):
    path = tmp_path / "t.ppm"
    path.write_bytes(b"P6\n1 1\n65535\n" + bytes(6))
    with pytest.raises(ImageFormatError, match="bit depth"):
        load_image(path)


def test_unknown_format_rejected(tmp_path):
    path = tmp_path / "t.dat"
    path.write_bytes(b"GIF89a not really")
    with pytest.raises(ImageFormatError, match="unsupported"):
        load_image(path)


def test_missing_file_raises_oserror(tmp_path):
    with pytest.raises(OSError):
        load_image(tmp_path / "nope.png")


def test_ppm_round_trip(tmp_path):
    img = checkerboard(6)
    path = tmp_path / "c.ppm"
    save_image(img, path)
    back = load_image(path)
    assert np.array_equal(back.pixels, img.pixels)


def test_png_round_trip(tmp_path):
    rng = np.random.default_rng(0)
    img = make_image(rng.integers(0, 256, size=(2, 2, 3), dtype=np.uint8))
    path = tmp_path / "r.png"
    save_image(img, path)
    back = load_image(path)
    assert np.array_equal(back.pixels, img.pixels)


def test_png_with_alpha_rejected(tmp_path):
    from PIL import Image as PILImage

    path = tmp_path / "a.png"
    PILImage.new("RGBA", (2, 2), (10, 20, 30, 128)).save(path)
    with pytest.raises(ImageFormatError, match="alpha"):
        load_image(path)


def test_png_grayscale_rejected(tmp_path):
    from PIL import Image as PILImage

    path = tmp_path / "g.png"
    PILImage.new("L", (2, 2), 128).save(path)
    with pytest.raises(ImageFormatError, match="unsupported"):
        load_image(path)


def test_malformed_png_rejected(tmp_path):
    path = tmp_path / "bad.png"
    path.write_bytes(b"\x89PNG\r\n\x1a\n" + b"\x00" * 20)
    with pytest.raises(ImageFormatError, match="malformed"):
        load_image(path)


def test_save_unknown_extension_rejected(tmp_path):
    with pytest.raises(ImageFormatError, match="extension"):
        save_image(checkerboard(), tmp_path / "x.bmp")


# ---------------------------------------------------------------------------
# Histogram
# ---------------------------------------------------------------------------


def test_histogram_uniform_image():
    px = np.full((5, 7, 3), (12, 34, 56), np.uint8)
    hist = build_histogram(make_image(px))
    assert len(hist.counts) == 1
    assert hist.counts[0] == 35
    assert hist.colors[0].tolist() == [12, 34, 56]


def test_histogram_checkerboard_counts():
    hist = build_histogram(checkerboard(4))
    assert sorted(hist.counts.tolist()) == [8, 8]
    assert hist.counts.sum() == 16


def test_histogram_distinct_colors_and_features():
    rng = np.random.default_rng(3)
    px = rng.integers(0, 256, size=(8, 8, 3), dtype=np.uint8)
    img = make_image(px)
    hist = build_histogram(img)
    flat = px.reshape(-1, 3)
    assert len(hist.counts) == len(np.unique(flat, axis=0))
    assert hist.counts.sum() == 64
    # keys unique
    keys = [tuple(c) for c in hist.colors]
    assert len(set(keys)) == len(keys)
    # HSL features are the conversion of v/255
    np.testing.assert_allclose(
        hist.hsl, rgb_to_hsl_array(hist.colors / 255.0), rtol=0, atol=1e-15
    )
    # inverse reconstructs the image
    assert np.array_equal(hist.colors[hist.inverse].reshape(px.shape), px)


def test_histogram_samples_weights():
    hist = build_histogram(checkerboard(4))
    samples = hist.to_samples()
    assert [s.weight for s in samples] == hist.counts.tolist()


# ---------------------------------------------------------------------------
# assign
# ---------------------------------------------------------------------------


def test_assign_exact_center_pixel():
    px = np.zeros((1, 2, 3), np.uint8)
    px[0, 0] = (255, 0, 0)
    px[0, 1] = (0, 0, 255)
    img = make_image(px)
    hist = build_histogram(img)
    red = HslColor(0.0, 1.0, 0.5)
    blue = HslColor(2.0 * math.pi / 3.0, 1.0, 0.5)
    labels = assign(img, hist, [red, blue], DistanceKind.PROPOSED)
    assert labels.tolist() == [0, 1]


def test_assign_tie_breaks_to_lowest_index():
    px = np.full((1, 1, 3), 128, np.uint8)  # gray, l = 128/255
    img = make_image(px)
    hist = build_histogram(img)
    l = 128.0 / 255.0
    centers = [
        HslColor(0.0, 0.0, l - 0.25),
        HslColor(0.0, 0.0, l),  # would win, but distances to 0 and 2 tie
        HslColor(0.0, 0.0, l + 0.25),
    ]
    labels = assign(img, hist, [centers[0], centers[2]], DistanceKind.EUCLID)
    assert labels.tolist() == [0]


def test_assign_agrees_with_membership_argmax():
    rng = np.random.default_rng(17)
    px = rng.integers(0, 256, size=(6, 6, 3), dtype=np.uint8)
    img = make_image(px)
    hist = build_histogram(img)
    samples = hist.to_samples()
    for kind in DistanceKind:
        cfg = ClusterConfig(k=3, seed=8, distance=kind)
        res = run(samples, cfg)
        labels = assign(img, hist, res.centers, kind)
        w = update_memberships(samples, res.centers, cfg)
        expected = np.argmax(w, axis=1)[hist.inverse]
        assert np.array_equal(labels, expected)


# ---------------------------------------------------------------------------
# render_cluster_colors
# ---------------------------------------------------------------------------


def test_render_single_color_is_exact():
    img = make_image(np.full((3, 3, 3), (77, 130, 200), np.uint8))
    hist = build_histogram(img)
    w = np.array([[0.4, 0.6]])
    out = render_cluster_colors(hist, w, ClusterConfig(k=2))
    assert out.tolist() == [[77, 130, 200], [77, 130, 200]]


def test_render_hard_split_black_white():
    px = np.zeros((1, 2, 3), np.uint8)
    px[0, 1] = (255, 255, 255)
    hist = build_histogram(make_image(px))
    w = np.array([[1.0, 0.0], [0.0, 1.0]])
    out = render_cluster_colors(hist, w, ClusterConfig(k=2))
    assert out.tolist() == [[0, 0, 0], [255, 255, 255]]


def test_render_matches_direct_summation():
    rng = np.random.default_rng(19)
    px = rng.integers(0, 256, size=(4, 5, 3), dtype=np.uint8)
    hist = build_histogram(make_image(px))
    p = len(hist.counts)
    k = 3
    w = rng.dirichlet(np.ones(k), size=p)
    cfg = ClusterConfig(k=k, omega=1.2)
    out = render_cluster_colors(hist, w, cfg)
    for j in range(k):
        num = np.zeros(3)
        den = 0.0
        for i in range(p):
            u = hist.counts[i] * w[i, j] ** cfg.omega
            num += u * hist.colors[i] / 255.0
            den += u
        expected = np.rint(255.0 * num / den).astype(int)
        assert out[j].tolist() == expected.tolist()


def test_render_empty_cluster_falls_back_to_global_mean():
    img = make_image(np.full((2, 2, 3), (100, 150, 200), np.uint8))
    hist = build_histogram(img)
    w = np.array([[1.0, 0.0]])
    out = render_cluster_colors(hist, w, ClusterConfig(k=2))
    assert out[1].tolist() == [100, 150, 200]


# ---------------------------------------------------------------------------
# reduce_image and reports
# ---------------------------------------------------------------------------


def test_reduce_k1_uniform_mean():
    px = np.zeros((1, 2, 3), np.uint8)
    px[0, 0] = (0, 0, 0)
    px[0, 1] = (100, 100, 100)
    reduced, report = reduce_image(make_image(px), ClusterConfig(k=1, seed=0))
    assert len(np.unique(reduced.pixels.reshape(-1, 3), axis=0)) == 1
    assert reduced.pixels[0, 0].tolist() == [50, 50, 50]
    assert report.clusters[0].share == 1.0


def test_reduce_exact_k_colors_identity():
    px = np.zeros((6, 6, 3), np.uint8)
    px[:2] = (255, 0, 0)
    px[2:4] = (0, 255, 0)
    px[4:] = (40, 40, 220)
    img = make_image(px)
    for kind in DistanceKind:
        reduced, report = reduce_image(img, ClusterConfig(k=3, seed=42, distance=kind))
        assert np.array_equal(reduced.pixels, px)
        assert report.iterations <= 2


def test_reduce_palette_bound_and_shares():
    rng = np.random.default_rng(23)
    px = rng.integers(0, 256, size=(10, 10, 3), dtype=np.uint8)
    reduced, report = reduce_image(make_image(px), ClusterConfig(k=4, seed=1))
    assert len(np.unique(reduced.pixels.reshape(-1, 3), axis=0)) <= 4
    shares = [c.share for c in report.clusters]
    assert sum(shares) == pytest.approx(1.0, abs=1e-9)
    assert all(s >= 0.0 for s in shares)


def test_reduce_deterministic():
    rng = np.random.default_rng(29)
    px = rng.integers(0, 256, size=(9, 9, 3), dtype=np.uint8)
    img = make_image(px)
    cfg = ClusterConfig(k=3, seed=77)
    r1, rep1 = reduce_image(img, cfg)
    r2, rep2 = reduce_image(img, cfg)
    assert np.array_equal(r1.pixels, r2.pixels)
    assert rep1.to_json_dict() == rep2.to_json_dict()


def test_reduce_rejects_k_above_distinct(tmp_path):
    img = make_image(np.full((2, 2, 3), 9, np.uint8))
    with pytest.raises(ValueError):
        reduce_image(img, ClusterConfig(k=2, seed=0))


def test_report_schema(tmp_path):
    rng = np.random.default_rng(37)
    px = rng.integers(0, 256, size=(5, 5, 3), dtype=np.uint8)
    _, report = reduce_image(make_image(px), ClusterConfig(k=2, seed=5))
    path = tmp_path / "report.json"
    save_report(report, path)
    data = json.loads(path.read_text())
    assert set(data) == {"config", "iterations", "objective_history", "clusters"}
    assert set(data["config"]) == {"k", "omega", "distance", "max_iters", "tol", "seed"}
    assert data["config"]["distance"] == "hslp"
    assert isinstance(data["iterations"], int)
    assert all(isinstance(v, float) for v in data["objective_history"])
    for cluster in data["clusters"]:
        assert set(cluster) == {"h", "s", "l", "rgb", "share"}
        assert len(cluster["rgb"]) == 3
        assert all(isinstance(v, int) and 0 <= v <= 255 for v in cluster["rgb"])
    assert sum(c["share"] for c in data["clusters"]) == pytest.approx(1.0, abs=1e-9)
