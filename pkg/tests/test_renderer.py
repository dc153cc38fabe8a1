import numpy as np
import pytest

from gadstudio.gad import (
    Camera,
    InvalidDocument,
    RenderState,
    SceneDataBinding,
    TransferFunction,
)
from gadstudio.render import (
    InvalidState,
    RenderSettings,
    raymarch,
    raymarch_float,
)
from gadstudio.volume import GridMeta, VolumeBlock
from helpers import simple_tf


def constant_block(dims, value):
    dx, dy, dz = dims
    samples = np.full((dz, dy, dx, 1), value, dtype=np.float64)
    meta = GridMeta(dims=dims, channels=1)
    return VolumeBlock(meta=meta, box=((0, 0, 0), dims), quality=0, samples=samples)


def down_z_state(dims, tf, clip=None, eye_offset=10.0):
    """Camera above the box looking straight down -z."""
    camera = Camera(
        position=(dims[0] / 2, dims[1] / 2, dims[2] + eye_offset),
        direction=(0.0, 0.0, -1.0),
        up=(0.0, 1.0, 0.0),
    )
    binding = SceneDataBinding(data_index=0, transfer_function=tf, clip_box=clip)
    return RenderState(
        frame_number=0, camera=camera, bindings=(binding,), bounding_box=((0, 0, 0), dims)
    )


SMALL = RenderSettings(width=32, height=32, background=(0.1, 0.2, 0.3))


class TestRaymarch:
    def test_zero_opacity_yields_background_exactly(self):
        dims = (8, 8, 8)
        tf = simple_tf(domain=(0.0, 1.0), opacity=(0.0, 0.0))
        img = raymarch(down_z_state(dims, tf), constant_block(dims, 0.5), SMALL)
        expected = np.array([round(c * 255) for c in SMALL.background], dtype=np.uint8)
        assert np.all(img.pixels[..., :3] == expected[None, None, :])
        assert np.all(img.pixels[..., 3] == 0)

    def test_opaque_first_sample_takes_tf_color(self):
        dims = (8, 8, 8)
        tf = TransferFunction(
            control_points=((0.0, (0.2, 0.6, 0.9), 1.0), (1.0, (0.2, 0.6, 0.9), 1.0)),
            domain=(0.0, 1.0),
        )
        buf = raymarch_float(down_z_state(dims, tf), constant_block(dims, 0.5), SMALL)
        # center pixel certainly hits the volume
        center = buf[16, 16]
        assert center[:3] == pytest.approx([0.2, 0.6, 0.9], abs=1e-12)
        assert center[3] == pytest.approx(1.0)

    def test_homogeneous_volume_matches_closed_form_alpha(self):
        # ray down the middle crosses the full 16-voxel depth; with step 0.5
        # that is exactly n = 32 samples
        dims = (16, 16, 16)
        alpha = 0.02
        tf = TransferFunction(
            control_points=((0.0, (1, 1, 1), alpha), (1.0, (1, 1, 1), alpha)),
            domain=(0.0, 1.0),
        )
        settings = RenderSettings(width=9, height=9, background=(0, 0, 0), sample_step=0.5)
        buf = raymarch_float(down_z_state(dims, tf), constant_block(dims, 0.5), settings)
        a_corr = 1.0 - (1.0 - alpha) ** 0.5
        n = 32
        expected = 1.0 - (1.0 - a_corr) ** n
        assert buf[4, 4, 3] == pytest.approx(expected, abs=1e-3)

    def test_step_halving_changes_alpha_within_correction_bound(self):
        dims = (16, 16, 16)
        alpha = 0.05
        tf = TransferFunction(
            control_points=((0.0, (1, 1, 1), alpha), (1.0, (1, 1, 1), alpha)),
            domain=(0.0, 1.0),
        )
        coarse = RenderSettings(width=9, height=9, sample_step=0.5)
        fine = RenderSettings(width=9, height=9, sample_step=0.25)
        blk = constant_block(dims, 0.5)
        a1 = raymarch_float(down_z_state(dims, tf), blk, coarse)[4, 4, 3]
        a2 = raymarch_float(down_z_state(dims, tf), blk, fine)[4, 4, 3]
        assert abs(a1 - a2) < 1e-3

    def test_accumulated_alpha_bounded_on_random_volume(self):
        rng = np.random.default_rng(8)
        dims = (8, 8, 8)
        samples = rng.uniform(0, 1, size=(8, 8, 8, 1))
        blk = VolumeBlock(
            meta=GridMeta(dims=dims, channels=1),
            box=((0, 0, 0), dims),
            quality=0,
            samples=samples,
        )
        tf = simple_tf(domain=(0.0, 1.0), opacity=(0.0, 1.0))
        buf = raymarch_float(down_z_state(dims, tf), blk, SMALL)
        assert np.all(buf[..., 3] >= 0.0)
        assert np.all(buf[..., 3] <= 1.0 + 1e-12)

    def test_clip_box_limits_the_hit_region(self):
        dims = (16, 16, 8)
        tf = simple_tf(domain=(0.0, 1.0), opacity=(0.9, 0.9))
        full = raymarch_float(down_z_state(dims, tf), constant_block(dims, 0.5), SMALL)
        clipped = raymarch_float(
            down_z_state(dims, tf, clip=((0.0, 0.0, 0.0), (0.5, 1.0, 1.0))),
            constant_block(dims, 0.5),
            SMALL,
        )
        assert clipped[..., 3].sum() < full[..., 3].sum()
        # pixels outside the clip must be pure background (alpha 0)
        assert np.any(clipped[..., 3] == 0.0)

    def test_deterministic_across_runs(self):
        dims = (8, 8, 8)
        tf = simple_tf(domain=(0.0, 1.0), opacity=(0.1, 0.7))
        blk = constant_block(dims, 0.3)
        a = raymarch(down_z_state(dims, tf), blk, SMALL)
        b = raymarch(down_z_state(dims, tf), blk, SMALL)
        assert a.pixels.tobytes() == b.pixels.tobytes()

    def test_degenerate_camera_rejected(self):
        dims = (8, 8, 8)
        state = RenderState(
            frame_number=0,
            camera=Camera(position=(0, 0, 10), direction=(0, 0, 0), up=(0, 1, 0)),
            bindings=(SceneDataBinding(data_index=0, transfer_function=simple_tf()),),
            bounding_box=((0, 0, 0), dims),
        )
        with pytest.raises(InvalidState):
            raymarch(state, constant_block(dims, 0.5), SMALL)
