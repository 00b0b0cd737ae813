#!/usr/bin/env python3
"""Export the grayscale test scenes bundled with scikit-image as 256x256 P5 PGMs."""
import pathlib
import sys

import numpy as np
from skimage import color, data, transform

SCENES = {
    "cameraman": data.camera,
    "moon": data.moon,
    "coins": data.coins,
    "astronaut": data.astronaut,
    "chelsea": data.chelsea,
    "coffee": data.coffee,
    "clock": data.clock,
    "page": data.page,
    "rocket": data.rocket,
    "brick": data.brick,
}


def center_square(img):
    h, w = img.shape
    s = min(h, w)
    y0, x0 = (h - s) // 2, (w - s) // 2
    return img[y0:y0 + s, x0:x0 + s]


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in SCENES.items():
        img = loader()
        if img.ndim == 3:
            img = color.rgb2gray(img[..., :3])
        else:
            img = img.astype(np.float64) / 255.0
        img = transform.resize(center_square(img), (256, 256), anti_aliasing=True)
        u8 = np.clip(np.rint(img * 255.0), 0, 255).astype(np.uint8)
        with open(out / f"{name}.pgm", "wb") as f:
            f.write(b"P5\n256 256\n255\n")
            f.write(u8.tobytes())


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/scenes")
