"""Serialize warp plans for external tools.

Three artifacts:

* an edit-decision list (JSON, version 1), readable back with ``read_edl``;
* a neutral plan script (``Profile.GENERIC``) with speeds as exact rationals;
* a ``filter_complex`` graph (``Profile.FILTERGRAPH``) for a command-line
  encoder, where audio tempo changes are chained so every stage stays in the
  pitch-preserving range [0.5, 2.0].

FilterGraph grammar, one chain per line, segments numbered from 0::

    [0:v]trim=start=<s>:end=<e>,setpts=(PTS-STARTPTS)/<speed>[v<i>];
    [0:a]atrim=start=<s>:end=<e>,asetpts=PTS-STARTPTS,atempo=<t1>,...,atempo=<tk>[a<i>];
    ...
    [v0][a0][v1][a1]...concat=n=<N>:v=1:a=1[outv][outa]

Times are seconds with millisecond precision; speeds and tempo stages are
written with Python's shortest round-trip float repr.
"""

from __future__ import annotations

import enum
import json
import math
from fractions import Fraction

from .errors import InvalidSpeed
from .planner import WarpPlan, plan_from_speeds
from .timeline import SegmentKind

__all__ = ["Profile", "emit_edl", "read_edl", "decompose_tempo", "emit_filter_script", "EDL_VERSION"]

EDL_VERSION = 1
TEMPO_MIN = 0.5
TEMPO_MAX = 2.0


class Profile(enum.Enum):
    GENERIC = "generic"
    FILTERGRAPH = "filtergraph"


def emit_edl(plan: WarpPlan) -> str:
    """Compact, key-ordered JSON; speeds always carry 6 decimals."""
    segs = ",".join(
        '{"start_ms":%d,"end_ms":%d,"speed":%.6f,"kind":%s}'
        % (s.in_start, s.in_end, s.speed, json.dumps(s.kind.value))
        for s in plan.segments
    )
    return (
        '{"version":%d,"source_duration_ms":%d,"output_duration_ms":%d,"segments":[%s]}'
        % (EDL_VERSION, plan.l_in, plan.l_out, segs)
    )


def read_edl(text: str) -> WarpPlan:
    """Rebuild a warp plan from EDL JSON.

    Output boundaries are recomputed from the stored speeds, so they match the
    original plan exactly whenever its speeds survive 6-decimal formatting.
    """
    data = json.loads(text)
    if data.get("version") != EDL_VERSION:
        raise ValueError(f"unsupported EDL version {data.get('version')!r}")
    bounds, speeds = [], []
    for seg in data["segments"]:
        bounds.append((int(seg["start_ms"]), int(seg["end_ms"]), SegmentKind(seg["kind"])))
        speeds.append(float(seg["speed"]))
    if not bounds:
        raise ValueError("EDL has no segments")
    if bounds[-1][1] != data["source_duration_ms"]:
        raise ValueError("segments do not cover source_duration_ms")
    return plan_from_speeds(bounds, speeds)


def decompose_tempo(factor: float) -> list[float]:
    """Split a tempo factor into the fewest equal stages each within [0.5, 2.0]."""
    if not math.isfinite(factor) or factor <= 0:
        raise InvalidSpeed(f"tempo factor must be finite and > 0, got {factor!r}")
    if TEMPO_MIN <= factor <= TEMPO_MAX:
        return [float(factor)]
    k = math.ceil(abs(math.log2(factor)))
    stage = factor ** (1.0 / k)
    # pow can land a hair outside the legal range for exact powers of two
    stage = min(max(stage, TEMPO_MIN), TEMPO_MAX)
    return [stage] * k


def _secs(ms: int) -> str:
    return f"{ms // 1000}.{ms % 1000:03d}"


def _generic(plan: WarpPlan) -> str:
    lines = [f"warpplan v1 {plan.l_in} {plan.l_out}"]
    for i, s in enumerate(plan.segments):
        q = Fraction(s.speed)
        lines.append(f"seg {i} {s.in_start} {s.in_end} speed {q.numerator}/{q.denominator}")
    return "\n".join(lines) + "\n"


def _filtergraph(plan: WarpPlan) -> str:
    lines = []
    pads = []
    for i, s in enumerate(plan.segments):
        window = f"start={_secs(s.in_start)}:end={_secs(s.in_end)}"
        tempo = ",".join(f"atempo={t!r}" for t in decompose_tempo(s.speed))
        lines.append(f"[0:v]trim={window},setpts=(PTS-STARTPTS)/{s.speed!r}[v{i}];")
        lines.append(f"[0:a]atrim={window},asetpts=PTS-STARTPTS,{tempo}[a{i}];")
        pads.append(f"[v{i}][a{i}]")
    lines.append(f"{''.join(pads)}concat=n={len(plan.segments)}:v=1:a=1[outv][outa]")
    return "\n".join(lines) + "\n"


def emit_filter_script(plan: WarpPlan, profile: Profile = Profile.GENERIC) -> str:
    if profile is Profile.GENERIC:
        return _generic(plan)
    if profile is Profile.FILTERGRAPH:
        return _filtergraph(plan)
    raise ValueError(f"unknown profile {profile!r}")
