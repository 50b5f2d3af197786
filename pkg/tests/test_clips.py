import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sway.clips import (
    ClipSpec,
    Color,
    Keyframe,
    PropertyTrack,
    apply_easing,
    clip_from_json,
    clip_to_json,
    clip_value_at,
    interpolate_track,
    validate_clip,
)
from sway.errors import UnknownEasing
from sway.svg_model import parse_document


def track(prop, pairs, easing="linear"):
    kfs = [Keyframe(offset=o, value=v, easing_out=easing) for o, v in pairs]
    return PropertyTrack(property=prop, keyframes=tuple(kfs))


def opacity_clip(selector=".petal", pairs=((0, 0.0), (1, 1.0)), loop=False):
    return ClipSpec(selector=selector, title="fade", tracks=(track("opacity", pairs),),
                    loop=loop)


# --- easing -----------------------------------------------------------------


def test_easing_linear():
    assert apply_easing("linear", 0.3) == pytest.approx(0.3)


def test_easing_quad_in():
    assert apply_easing("ease-in-quad", 0.5) == pytest.approx(0.25)


@pytest.mark.parametrize("name", ["linear", "ease-in-quad", "ease-out-quad",
                                  "ease-in-out-cubic", "sine-in-out"])
def test_easing_boundaries(name):
    assert apply_easing(name, 0.0) == 0.0
    assert apply_easing(name, 1.0) == 1.0


@pytest.mark.parametrize("name", ["linear", "ease-in-quad", "ease-out-quad",
                                  "ease-in-out-cubic", "sine-in-out"])
def test_easing_monotone_and_bounded_on_grid(name):
    values = [apply_easing(name, i / 200) for i in range(201)]
    assert all(0.0 <= v <= 1.0 for v in values)
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_unknown_easing():
    with pytest.raises(UnknownEasing):
        apply_easing("bounce-elastic", 0.5)


# --- interpolation ----------------------------------------------------------


def test_interpolate_linear_midpoint():
    t = track("opacity", [(0, 0.0), (1, 1.0)])
    assert interpolate_track(t, 0.5) == pytest.approx(0.5)


def test_interpolate_piecewise():
    t = track("translateX", [(0, 0.0), (0.5, 10.0), (1, 0.0)])
    assert interpolate_track(t, 0.75) == pytest.approx(5.0)


def test_interpolate_color_midpoint_rounds_half_up():
    t = track("fill-color", [(0, Color.from_hex("#000000")), (1, Color.from_hex("#ffffff"))])
    assert interpolate_track(t, 0.5) == Color.from_hex("#808080")


def test_interpolate_exact_keyframe_values():
    t = track("scale", [(0, 1.0), (0.3, 2.5), (0.7, 0.5), (1, 1.0)], easing="sine-in-out")
    for k in t.keyframes:
        assert interpolate_track(t, k.offset) == k.value


def test_identity_track_constant():
    t = track("opacity", [(0, 0.7), (0.4, 0.7), (1, 0.7)], easing="ease-in-quad")
    for u in [0, 0.1, 0.39, 0.4, 0.99, 1.0]:
        assert interpolate_track(t, u) == pytest.approx(0.7)


@settings(max_examples=50, deadline=None)
@given(
    offsets=st.lists(st.floats(0.01, 0.99), min_size=0, max_size=4, unique=True),
    values=st.lists(st.floats(-100, 100), min_size=6, max_size=6),
    u=st.floats(0, 1),
)
def test_interpolation_piecewise_continuous(offsets, values, u):
    offs = [0.0] + sorted(offsets) + [1.0]
    t = track("translateY", list(zip(offs, values)))
    eps = 1e-9
    v = interpolate_track(t, u)
    v_lo = interpolate_track(t, max(0.0, u - eps))
    v_hi = interpolate_track(t, min(1.0, u + eps))
    span = max(abs(b - a) for a, b in zip(values, values[1:])) + 1.0
    assert abs(v - v_lo) < span * 1e-6
    assert abs(v - v_hi) < span * 1e-6


# --- clip evaluation --------------------------------------------------------


def test_clip_value_at_zero_returns_first_keyframes():
    clip = opacity_clip()
    assert clip_value_at(clip, 0.0) == {"opacity": 0.0}
    assert clip_value_at(clip, -3.0) == {"opacity": 0.0}  # fill-backwards


def test_clip_value_fill_forwards():
    clip = opacity_clip()
    assert clip_value_at(clip, 2.5) == {"opacity": 1.0}


def test_clip_value_loop_fract():
    clip = opacity_clip(loop=True)
    # oracle: direct substitution at fract(1.25) = 0.25
    assert clip_value_at(clip, 1.25)["opacity"] == pytest.approx(0.25)


# --- validation -------------------------------------------------------------


def test_validate_clean_clip(flowers_doc):
    assert validate_clip(opacity_clip(), flowers_doc) == []


def test_validate_unknown_selector(flowers_doc):
    diags = validate_clip(opacity_clip(selector=".ghost"), flowers_doc)
    assert [d.code for d in diags] == ["UnknownSelector"]
    assert ".ghost" in diags[0].detail


def test_validate_non_monotone_offsets():
    kfs = tuple(Keyframe(offset=o, value=v) for o, v in
                [(0, 0.0), (0.5, 1.0), (0.5, 0.5), (1, 0.0)])
    clip = ClipSpec(selector=".petal", title="bad",
                    tracks=(PropertyTrack("opacity", kfs),))
    assert "NonMonotoneOffsets" in [d.code for d in validate_clip(clip)]


def test_validate_duplicate_property():
    clip = ClipSpec(selector=".petal", title="dup",
                    tracks=(track("opacity", [(0, 0.0), (1, 1.0)]),
                            track("opacity", [(0, 1.0), (1, 0.0)])))
    assert "DuplicateProperty" in [d.code for d in validate_clip(clip)]


def test_validate_unknown_property():
    clip = ClipSpec(selector=".petal", title="tp",
                    tracks=(track("teleport", [(0, 0.0), (1, 1.0)]),))
    assert "UnknownProperty" in [d.code for d in validate_clip(clip)]


def test_validate_color_out_of_range_rejected_at_construction():
    with pytest.raises(ValueError):
        Color(300, 0, 0)


def test_validate_wrong_value_kind():
    clip = ClipSpec(selector=".petal", title="kind",
                    tracks=(track("fill-color", [(0, 0.0), (1, 1.0)]),))
    assert "WrongValueKind" in [d.code for d in validate_clip(clip)]


# --- JSON schema round-trip -------------------------------------------------


def test_clip_json_round_trip():
    data = {
        "selector": ".petal",
        "title": "Glow pulse",
        "description": "brighten and darken",
        "loop": True,
        "tracks": [
            {"property": "fill-color",
             "keyframes": [{"offset": 0, "value": "#d46a9f", "easing": "sine-in-out"},
                           {"offset": 1, "value": "#d46a9f"}]},
            {"property": "opacity",
             "keyframes": [{"offset": 0, "value": 0}, {"offset": 1, "value": 1}]},
        ],
    }
    clip = clip_from_json(data)
    assert validate_clip(clip) == []
    out = clip_to_json(clip)
    # numerics normalize to float; everything else survives untouched
    normalized = json.loads(json.dumps(data))
    for t in normalized["tracks"]:
        for k in t["keyframes"]:
            k["offset"] = float(k["offset"])
            if not isinstance(k["value"], str):
                k["value"] = float(k["value"])
    assert out == normalized
    # serialization is a fixpoint after the first pass
    assert clip_to_json(clip_from_json(out)) == out
