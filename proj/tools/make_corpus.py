#!/usr/bin/env python3
"""Build the test corpus: 256x256 RGB crops of the public-domain/CC0 sample
photos bundled with scikit-image."""

import argparse
import pathlib

import numpy as np
from PIL import Image
from skimage import data

PHOTOS = ["astronaut", "chelsea", "coffee", "hubble_deep_field", "rocket"]
SIDE = 256
SHORT_SIDE = 384


def crops(img):
    h, w = img.shape[:2]
    scale = SHORT_SIDE / min(h, w)
    pil = Image.fromarray(img).resize((round(w * scale), round(h * scale)), Image.LANCZOS)
    arr = np.asarray(pil)
    h, w = arr.shape[:2]
    for y in (0, h - SIDE):
        for x in (0, w - SIDE):
            yield arr[y:y + SIDE, x:x + SIDE]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=pathlib.Path(__file__).resolve().parent.parent / "data" / "corpus",
                        type=pathlib.Path)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    for name in PHOTOS:
        img = getattr(data, name)()
        if img.ndim == 2:
            img = np.stack([img] * 3, axis=-1)
        img = img[..., :3].astype(np.uint8)
        for i, crop in enumerate(crops(img)):
            Image.fromarray(np.ascontiguousarray(crop)).save(args.out / f"{name}_{i}.png", optimize=True)
    print(f"wrote {len(PHOTOS) * 4} images to {args.out}")


if __name__ == "__main__":
    main()
