"""8-bit RGBA images and deterministic image files."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IoFailure


@dataclass(frozen=True)
class Image:
    width: int
    height: int
    pixels: np.ndarray  # (height, width, 4) uint8, row-major

    def __post_init__(self):
        expected = (self.height, self.width, 4)
        if self.pixels.shape != expected or self.pixels.dtype != np.uint8:
            raise ValueError(
                f"pixels must be uint8 with shape {expected}, got "
                f"{self.pixels.dtype} {self.pixels.shape}"
            )


def from_float_rgba(rgba: np.ndarray) -> Image:
    """Quantize a float RGBA buffer in [0, 1] to 8-bit."""
    q = np.clip(np.rint(rgba * 255.0), 0, 255).astype(np.uint8)
    h, w = q.shape[:2]
    return Image(width=w, height=h, pixels=q)


def solid(width: int, height: int, rgb, alpha: float = 0.0) -> Image:
    buf = np.empty((height, width, 4), dtype=np.uint8)
    r, g, b = rgb
    buf[..., 0] = round(r * 255)
    buf[..., 1] = round(g * 255)
    buf[..., 2] = round(b * 255)
    buf[..., 3] = round(alpha * 255)
    return Image(width=width, height=height, pixels=buf)


def ppm_bytes(image: Image) -> bytes:
    header = f"P6\n{image.width} {image.height}\n255\n".encode("ascii")
    return header + image.pixels[:, :, :3].tobytes()


def write_image(image: Image, path) -> Path:
    """PPM (P6) by default; PNG when the path ends in .png.

    PPM output is bit-exact for identical pixels.  The parent directory must
    already exist.
    """
    path = Path(path)
    if not path.parent.is_dir():
        raise IoFailure(f"parent directory {path.parent} does not exist")
    try:
        if path.suffix.lower() == ".png":
            from PIL import Image as PilImage

            PilImage.fromarray(image.pixels, mode="RGBA").save(path, format="PNG")
        else:
            path.write_bytes(ppm_bytes(image))
    except OSError as exc:
        raise IoFailure(str(exc)) from exc
    return path
