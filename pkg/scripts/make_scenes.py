#!/usr/bin/env python3
"""Generate the synthetic test scenes used in the experiments.

Writes two images into the chosen directory:

* red_green_dark.png -- a saturated red ramp, a saturated green ramp, and a
  dark low-saturation band.  With k=3 the two distances place the boundary
  of the dark cluster differently.
* hue_blocks.png -- two saturated hue blocks plus a light gray block; a
  well-separated sanity scene that both distances reduce identically.
"""
import argparse
from pathlib import Path

import numpy as np

from hslcluster.pipeline import Image, save_image


def red_green_dark(size: int = 64) -> Image:
    px = np.zeros((size, size, 3), np.uint8)
    third = size // 3
    ramp = np.linspace(255, 40, size).astype(np.uint8)
    px[:third, :, 0] = ramp[None, :]
    px[third : 2 * third, :, 1] = ramp[None, :]
    grays = np.linspace(10, 70, size).astype(np.uint8)
    px[2 * third :, :, :] = grays[None, :, None]
    return Image(size, size, px)


def hue_blocks(size: int = 64) -> Image:
    px = np.zeros((size, size, 3), np.uint8)
    px[:, : size // 3] = (255, 0, 0)
    px[:, size // 3 : 2 * size // 3] = (0, 0, 255)
    px[:, 2 * size // 3 :] = (210, 210, 210)
    return Image(size, size, px)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out-dir", default="scenes", help="output directory")
    ap.add_argument("--size", type=int, default=64)
    args = ap.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_image(red_green_dark(args.size), out / "red_green_dark.png")
    save_image(hue_blocks(args.size), out / "hue_blocks.png")
    print(f"wrote {out / 'red_green_dark.png'} and {out / 'hue_blocks.png'}")


if __name__ == "__main__":
    main()
