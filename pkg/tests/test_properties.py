"""Property tests over the format and numeric invariants."""

import math
import random

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from gadstudio.access import AnimationSpec, animation_id, parse_animation_id
from gadstudio.gad import (
    Camera,
    eval_tf,
    interpolate_camera,
    interpolate_tf,
    parse_gad,
    serialize_gad,
    validate_gad,
)
from gadstudio.volume import GridMeta, VolumeBlock, downsample
from helpers import qf, random_doc, simple_tf

finite = st.floats(min_value=-100, max_value=100, allow_nan=False)


@st.composite
def cameras(draw):
    def unit(v):
        n = math.sqrt(sum(c * c for c in v))
        return tuple(qf(c / n) for c in v)

    direction = unit(
        (draw(finite.filter(lambda x: abs(x) > 1)), draw(finite), draw(finite))
    )
    up = unit((draw(finite), draw(finite.filter(lambda x: abs(x) > 1)), draw(finite)))
    d = sum(a * b for a, b in zip(direction, up))
    if abs(d) > 0.9:
        up = unit((direction[1], -direction[0] + 2.0, direction[2]))
    position = (draw(finite), draw(finite), draw(finite))
    return Camera(position=position, direction=direction, up=up)


@st.composite
def transfer_functions(draw, domain=(0.0, 1.0)):
    lo, hi = domain
    mids = draw(
        st.lists(
            st.floats(min_value=lo + 1e-6, max_value=hi - 1e-6, allow_nan=False).map(qf),
            max_size=4,
            unique=True,
        )
    )
    values = [lo] + sorted(m for m in mids if lo < m < hi) + [hi]
    points = tuple(
        (
            v,
            (qf(draw(st.floats(0, 1))), qf(draw(st.floats(0, 1))), qf(draw(st.floats(0, 1)))),
            qf(draw(st.floats(0, 1))),
        )
        for v in values
    )
    from gadstudio.gad import TransferFunction

    return TransferFunction(control_points=points, domain=domain)


class TestRoundTrip:
    @settings(max_examples=40, deadline=None)
    @given(seed=st.integers(0, 2**32 - 1))
    def test_serialize_parse_identity(self, seed, tmp_path_factory):
        doc = random_doc(random.Random(seed))
        assert validate_gad(doc) == []
        root = tmp_path_factory.mktemp("doc")
        serialize_gad(doc, root)
        assert parse_gad(root) == doc


class TestInterpolators:
    @settings(max_examples=60, deadline=None)
    @given(a=cameras(), b=cameras(), t=st.floats(0.01, 0.99))
    def test_camera_blend_is_unit_and_exact_at_ends(self, a, b, t):
        assert interpolate_camera(a, b, 0.0) is a
        assert interpolate_camera(a, b, 1.0) is b
        try:
            cam = interpolate_camera(a, b, t)
        except Exception:
            return  # antipodal draws legitimately refuse to blend
        for v in (cam.direction, cam.up):
            assert abs(math.sqrt(sum(c * c for c in v)) - 1.0) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(a=transfer_functions(), b=transfer_functions(), t=st.floats(0, 1), s=st.floats(-0.5, 1.5))
    def test_tf_blend_matches_pointwise_oracle(self, a, b, t, s):
        out = interpolate_tf(a, b, t)
        ca, oa = eval_tf(a, s)
        cb, ob = eval_tf(b, s)
        color, opacity = eval_tf(out, s)
        for got, x, y in zip(color, ca, cb):
            assert abs(got - ((1 - t) * x + t * y)) < 1e-12
        assert abs(opacity - ((1 - t) * oa + t * ob)) < 1e-12

    @settings(max_examples=60, deadline=None)
    @given(tf=transfer_functions(), s=st.floats(-5, 5))
    def test_eval_stays_within_control_point_hull(self, tf, s):
        color, opacity = eval_tf(tf, s)
        opacities = [p[2] for p in tf.control_points]
        assert min(opacities) - 1e-12 <= opacity <= max(opacities) + 1e-12
        for c in color:
            assert -1e-12 <= c <= 1 + 1e-12


class TestVolumes:
    @settings(max_examples=30, deadline=None)
    @given(
        ax=st.integers(2, 5),
        ay=st.integers(1, 4),
        az=st.integers(1, 4),
        seed=st.integers(0, 2**31),
        q=st.integers(-4, -1),
    )
    def test_mean_preserved_on_power_of_two_dims(self, ax, ay, az, seed, q):
        # power-of-two sizes stay even through every halving
        dims = (2**ax, 2**ay, 2**az)
        gen = np.random.default_rng(seed)
        samples = gen.uniform(-5, 5, size=(dims[2], dims[1], dims[0], 1))
        blk = VolumeBlock(
            meta=GridMeta(dims=dims, channels=1),
            box=((0, 0, 0), dims),
            quality=0,
            samples=samples,
        )
        out = downsample(blk, q)
        baseline = abs(blk.samples.mean()) or 1.0
        assert abs(out.samples.mean() - blk.samples.mean()) <= 1e-6 * baseline


class TestAnimationIds:
    @settings(max_examples=80, deadline=None)
    @given(
        x1=st.integers(0, 500), y1=st.integers(0, 500), z1=st.integers(0, 100),
        w=st.integers(1, 200), h=st.integers(1, 200), d=st.integers(1, 50),
        t1=st.integers(0, 1000), span=st.integers(0, 500), step=st.integers(1, 48),
        quality=st.integers(-12, 0),
        field=st.sampled_from(["temperature", "salinity", "u", "v", "w", "sea_ice"]),
        streamlines=st.booleans(),
    )
    def test_id_round_trip(self, x1, y1, z1, w, h, d, t1, span, step, quality, field, streamlines):
        spec = AnimationSpec(
            box=((x1, y1, z1), (x1 + w, y1 + h, z1 + d)),
            time=(t1, t1 + span, step),
            quality=quality,
            field=field,
            streamlines=streamlines,
        )
        assert parse_animation_id(str(animation_id(spec))) == spec
