"""2D overlay of projected streamlines onto a rendered frame.

Segments are projected with the frame camera and drawn with a fixed 0.8
opacity over-blend; drawing order and pixel coverage are deterministic.
Depth against the volume is not tested: lines always draw on top.
"""

from __future__ import annotations

import math
from typing import List, Tuple

import numpy as np

from ..gad import RenderState
from .camera import RenderSettings, camera_basis, project_points
from .image import Image
from .streamlines import Streamline

LINE_OPACITY = 0.8
NEAR_PLANE = 1e-6


def rasterize_lines(
    image: Image,
    colored_lines: List[Tuple[Streamline, np.ndarray]],
    state: RenderState,
    settings: RenderSettings,
) -> Image:
    if (image.width, image.height) != (settings.width, settings.height):
        raise ValueError("image dimensions do not match the render settings")
    basis = camera_basis(state.camera, settings)
    buf = image.pixels.astype(np.float64) / 255.0
    w, h = settings.width, settings.height

    for line, colors in colored_lines:
        pix, depth = project_points(line.vertices, basis, settings)
        for k in range(len(line.vertices) - 1):
            # segments reaching behind the camera are dropped whole
            if depth[k] <= NEAR_PLANE or depth[k + 1] <= NEAR_PLANE:
                continue
            x0, y0 = pix[k]
            x1, y1 = pix[k + 1]
            steps = max(1, int(math.ceil(max(abs(x1 - x0), abs(y1 - y0)))))
            last = None
            for s in range(steps + 1):
                t = s / steps
                px = int(round(x0 + t * (x1 - x0)))
                py = int(round(y0 + t * (y1 - y0)))
                if (px, py) == last:
                    continue
                last = (px, py)
                if not (0 <= px < w and 0 <= py < h):
                    continue
                rgb = colors[k] + t * (colors[k + 1] - colors[k])
                buf[py, px, :3] = LINE_OPACITY * rgb + (1.0 - LINE_OPACITY) * buf[py, px, :3]
                buf[py, px, 3] = LINE_OPACITY + (1.0 - LINE_OPACITY) * buf[py, px, 3]

    out = np.clip(np.rint(buf * 255.0), 0, 255).astype(np.uint8)
    return Image(width=image.width, height=image.height, pixels=out)
