"""Authoring engine for animating SVG-based metaphoric data visualizations.

Pipeline: parse an SVG into a queryable model, attach keyframe clips to
element groups, stagger per-element timing through coordination weights,
arrange group clips on a global timeline, and export a portable,
viewBox-relative animation program.
"""

from .clips import (
    ClipSpec,
    Color,
    GroupClip,
    Keyframe,
    PropertyTrack,
    Version,
    apply_easing,
    clip_value_at,
    interpolate_track,
    validate_clip,
)
from .composition import FrameSnapshot, Timeline, arrange, render_static, sample, total_duration
from .coordination import (
    DataCentric,
    LayerCentric,
    LayoutProjection,
    LayoutRadius,
    LayoutSketch,
    Random,
    WeightAssignment,
    assign_weights,
    element_start_time,
    normalize,
    project_on_line,
    radial_score,
    sketch_progress,
)
from .exporter import AnimationProgram, bake_css, emit_runtime_script, export_program, import_program
from .session import Session, SessionStore
from .svg_model import (
    EncodingManifest,
    Rect,
    VectorDocument,
    bounding_box,
    condense_for_prompt,
    data_value,
    midpoint,
    parse_document,
    select_group,
)

__version__ = "0.1.0"
