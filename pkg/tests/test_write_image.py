import numpy as np
import pytest

from gadstudio.render import Image, IoFailure, ppm_bytes, solid, write_image


def test_ppm_layout_for_2x2():
    img = solid(2, 2, (1.0, 0.0, 0.0))
    data = ppm_bytes(img)
    header = f"P6\n2 2\n255\n".encode()
    assert data.startswith(header)
    assert len(data) == len(header) + 12  # 2*2 pixels * 3 bytes


def test_ppm_written_bit_exact(tmp_path):
    rng = np.random.default_rng(0)
    pixels = rng.integers(0, 256, size=(4, 5, 4), dtype=np.uint8)
    img = Image(width=5, height=4, pixels=pixels)
    p1 = write_image(img, tmp_path / "a.ppm")
    p2 = write_image(img, tmp_path / "b.ppm")
    assert p1.read_bytes() == p2.read_bytes()


def test_png_round_trip(tmp_path):
    from PIL import Image as PilImage

    rng = np.random.default_rng(1)
    pixels = rng.integers(0, 256, size=(8, 8, 4), dtype=np.uint8)
    img = Image(width=8, height=8, pixels=pixels)
    path = write_image(img, tmp_path / "frame.png")
    back = np.asarray(PilImage.open(path).convert("RGBA"))
    np.testing.assert_array_equal(back, pixels)


def test_missing_parent_directory(tmp_path):
    img = solid(2, 2, (0, 0, 0))
    with pytest.raises(IoFailure):
        write_image(img, tmp_path / "nope" / "frame.ppm")
