"""Two-level speed assignment and the piecewise-linear time-warp plan.

Three ways to ask for a schedule:

* ``PerClass(s_m, s_s)``: fixed speeds for non-language / language segments.
* ``ReadingRate(s_m, s_r)``: language speed derived per segment from how much
  text it shows and the viewer's reading rate (units per minute).
* ``TargetDuration(l_q, s_s)``: hit an output duration; the non-language speed
  is solved for, and the language speed is raised only if a cap on the
  non-language speed forces it.

Internally every out-boundary is computed with exact rational arithmetic on
the float speeds and rounded once (half up), so plans are reproducible bit for
bit.
"""

from __future__ import annotations

import bisect
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .errors import InfeasibleTarget, InvalidSpeed, OutOfRange, SpeedWarning, ZeroLengthOutput
from .subtitles import CountMode, SubtitleTrack, count_text_units
from .timeline import SegmentKind, SegmentList, compute_r

__all__ = [
    "PerClass",
    "ReadingRate",
    "TargetDuration",
    "SpeedSpec",
    "SolvedSpeeds",
    "WarpSegment",
    "WarpPlan",
    "predict_duration",
    "predict_duration_reading",
    "solve_sm_for_target",
    "build_warp_plan",
    "warp_time",
    "unwarp_time",
    "MAX_SPEED",
    "HIGH_SPEED_WARNING",
]

MAX_SPEED = 1000.0
HIGH_SPEED_WARNING = 50.0
_HALF = Fraction(1, 2)


def round_half_up(x) -> int:
    """Round to the nearest integer, ties upward (exact for Fractions)."""
    if isinstance(x, Fraction):
        return math.floor(x + _HALF)
    return math.floor(x + 0.5)


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise InvalidSpeed(f"{name} must be finite and > 0, got {value!r}")
    return value


def _check_speed(name: str, value: float) -> float:
    value = _check_positive(name, value)
    if value > MAX_SPEED:
        raise InvalidSpeed(f"{name} must be <= {MAX_SPEED:g}, got {value!r}")
    if value < 1:
        warnings.warn(f"{name}={value:g} slows playback down", SpeedWarning, stacklevel=3)
    return value


# --------------------------------------------------------------------------
# speed specifications

@dataclass(frozen=True)
class PerClass:
    s_m: float
    s_s: float

    def __post_init__(self):
        object.__setattr__(self, "s_m", _check_speed("s_m", self.s_m))
        object.__setattr__(self, "s_s", _check_speed("s_s", self.s_s))


@dataclass(frozen=True)
class ReadingRate:
    s_m: float
    s_r: float
    count_mode: CountMode = CountMode.GRAPHEMES
    min_speed: Optional[float] = None
    max_speed: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "s_m", _check_speed("s_m", self.s_m))
        object.__setattr__(self, "s_r", _check_positive("s_r", self.s_r))
        if self.min_speed is not None:
            object.__setattr__(self, "min_speed", _check_positive("min_speed", self.min_speed))
        if self.max_speed is not None:
            object.__setattr__(self, "max_speed", _check_positive("max_speed", self.max_speed))
        if self.min_speed is not None and self.max_speed is not None and self.min_speed > self.max_speed:
            raise InvalidSpeed("min_speed exceeds max_speed")


@dataclass(frozen=True)
class TargetDuration:
    l_q: int
    s_s: float
    s_m_max: Optional[float] = None

    def __post_init__(self):
        if self.l_q <= 0:
            raise InfeasibleTarget(f"target duration must be positive, got {self.l_q}")
        object.__setattr__(self, "s_s", _check_speed("s_s", self.s_s))
        if self.s_m_max is not None:
            object.__setattr__(self, "s_m_max", _check_speed("s_m_max", self.s_m_max))


SpeedSpec = Union[PerClass, ReadingRate, TargetDuration]


@dataclass(frozen=True)
class SolvedSpeeds:
    s_m: float
    s_s: float
    adjusted: bool = False


# --------------------------------------------------------------------------
# closed-form predictions

def predict_duration(s_m: float, s_s: float, r: float, l: int) -> int:
    """Output duration (ms) of two-level playback: r*l/s_m + (1-r)*l/s_s."""
    s_m = _check_positive("s_m", s_m)
    s_s = _check_positive("s_s", s_s)
    if not 0 <= r <= 1:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    if l < 0:
        raise ValueError("l must be >= 0")
    return round_half_up(r * l / s_m + (1 - r) * l / s_s)


def _segment_units(seg, cues_by_index, mode: CountMode) -> int:
    return sum(count_text_units(cues_by_index[i], mode) for i in seg.cue_indices)


def predict_duration_reading(
    s_m: float, s_r: float, segs: SegmentList, track: SubtitleTrack, mode: CountMode = CountMode.GRAPHEMES
) -> int:
    """Output duration when language segments are paced by reading rate ``s_r`` (units/min).

    Language segments with no text fall back to ``s_m``.
    """
    s_m = _check_positive("s_m", s_m)
    s_r = _check_positive("s_r", s_r)
    by_index = track.by_index()
    total = segs.nonlanguage_ms / s_m
    for seg in segs:
        if seg.kind is SegmentKind.NONLANGUAGE:
            continue
        n = _segment_units(seg, by_index, mode)
        total += 60_000 * n / s_r if n > 0 else seg.duration / s_m
    return round_half_up(total)


def solve_sm_for_target(
    l_q: int,
    s_s: float,
    r: float,
    l: int,
    s_m_max: Optional[float] = None,
    *,
    warn_above: float = HIGH_SPEED_WARNING,
) -> SolvedSpeeds:
    """Find the non-language speed that makes the output last ``l_q`` ms.

    The requested ``s_s`` is kept unless ``s_m_max`` binds, in which case
    ``s_m`` is clamped and ``s_s`` raised by the least amount that still meets
    the target.
    """
    s_s = _check_positive("s_s", s_s)
    if s_m_max is not None:
        s_m_max = _check_positive("s_m_max", s_m_max)
    if not 0 <= r <= 1:
        raise ValueError(f"r must lie in [0, 1], got {r}")
    if l <= 0:
        raise ValueError("l must be > 0")
    if l_q <= 0:
        raise InfeasibleTarget(f"target duration must be positive, got {l_q}")

    nonlang = r * l
    lang = (1 - r) * l

    if lang == 0:
        s_m = nonlang / l_q
        if s_m_max is not None and s_m > s_m_max:
            raise InfeasibleTarget(
                f"no language time to adjust; target {l_q} ms needs s_m={s_m:g} > s_m_max={s_m_max:g}"
            )
        result = SolvedSpeeds(s_m, s_s, False)
    elif nonlang == 0:
        # s_m has no effect; only s_s can move the duration
        new_s_s = lang / l_q
        result = SolvedSpeeds(s_m_max if s_m_max is not None else new_s_s, new_s_s, new_s_s != s_s)
    else:
        floor = lang / s_s
        s_m = nonlang / (l_q - floor) if l_q > floor else math.inf
        if s_m_max is None:
            if not math.isfinite(s_m):
                raise InfeasibleTarget(
                    f"target {l_q} ms is at or below the language floor {floor:.3f} ms at s_s={s_s:g}"
                )
            result = SolvedSpeeds(s_m, s_s, False)
        elif s_m <= s_m_max:
            result = SolvedSpeeds(s_m, s_s, False)
        else:
            remaining = l_q - nonlang / s_m_max
            if remaining <= 0:
                raise InfeasibleTarget(
                    f"target {l_q} ms is at or below the non-language floor "
                    f"{nonlang / s_m_max:.3f} ms at s_m_max={s_m_max:g}"
                )
            result = SolvedSpeeds(s_m_max, lang / remaining, True)

    if result.s_m > warn_above:
        warnings.warn(f"solved s_m={result.s_m:g} exceeds {warn_above:g}x", SpeedWarning, stacklevel=2)
    return result


# --------------------------------------------------------------------------
# warp plan

@dataclass(frozen=True)
class WarpSegment:
    in_start: int
    in_end: int
    speed: float
    out_start: int
    out_end: int
    kind: SegmentKind

    def __post_init__(self):
        if self.in_end <= self.in_start:
            raise ValueError("in_end must exceed in_start")
        if self.out_end < self.out_start:
            raise ValueError("out_end must not precede out_start")
        _check_positive("speed", self.speed)

    @property
    def exact_out_duration(self) -> Fraction:
        return Fraction(self.in_end - self.in_start) / Fraction(self.speed)


@dataclass(frozen=True)
class WarpPlan:
    """Monotone piecewise-linear map from source time to output time."""

    segments: tuple[WarpSegment, ...]
    l_in: int
    l_out: int
    spec: Optional[SpeedSpec] = None
    solved: Optional[SolvedSpeeds] = None
    _in_starts: list = field(init=False, repr=False, compare=False)
    _out_starts: list = field(init=False, repr=False, compare=False)
    _rates: list = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if not segs or segs[0].in_start != 0 or segs[-1].in_end != self.l_in:
            raise ValueError("in-intervals must tile [0, l_in]")
        if segs[0].out_start != 0 or segs[-1].out_end != self.l_out:
            raise ValueError("out-intervals must tile [0, l_out]")
        for a, b in zip(segs, segs[1:]):
            if a.in_end != b.in_start or a.out_end != b.out_start:
                raise ValueError("segments must abut in both time bases")
        for s in segs:
            if s.out_end <= s.out_start:
                raise ValueError("out boundaries must strictly increase")
        object.__setattr__(self, "_in_starts", [s.in_start for s in segs])
        object.__setattr__(self, "_out_starts", [s.out_start for s in segs])
        object.__setattr__(self, "_rates", [Fraction(s.speed) for s in segs])

    def __len__(self):
        return len(self.segments)

    @property
    def speeds(self) -> list[float]:
        return [s.speed for s in self.segments]

    def exact_out_durations(self) -> list[Fraction]:
        """Per-segment output durations before rounding."""
        return [s.exact_out_duration for s in self.segments]


def plan_from_speeds(
    bounds: list[tuple[int, int, SegmentKind]],
    speeds: list[float],
    spec: Optional[SpeedSpec] = None,
    solved: Optional[SolvedSpeeds] = None,
) -> WarpPlan:
    """Lay out output boundaries for given in-intervals and speeds.

    Each boundary is the rounded exact cumulative sum, so the total drift
    never exceeds half a millisecond.  A segment that would round to 0 ms is
    stretched to 1 ms and later boundaries shift with it.
    """
    segments = []
    cum = Fraction(0)
    offset = 0
    prev = 0
    for (start, end, kind), speed in zip(bounds, speeds):
        cum += Fraction(end - start) / Fraction(speed)
        boundary = round_half_up(cum) + offset
        if boundary <= prev:
            warnings.warn(
                f"segment {start}-{end} ms at x{speed:g} rounds to 0 ms; stretched to 1 ms",
                ZeroLengthOutput,
                stacklevel=3,
            )
            offset += prev + 1 - boundary
            boundary = prev + 1
        segments.append(WarpSegment(start, end, speed, prev, boundary, kind))
        prev = boundary
    return WarpPlan(tuple(segments), bounds[-1][1], prev, spec, solved)


def _reading_speed(seg, n_units: int, spec: ReadingRate) -> float:
    if n_units == 0:
        return spec.s_m
    speed = seg.duration * spec.s_r / (60_000 * n_units)
    if spec.min_speed is not None:
        speed = max(speed, spec.min_speed)
    if spec.max_speed is not None:
        speed = min(speed, spec.max_speed)
    return speed


def build_warp_plan(
    segs: SegmentList,
    spec: SpeedSpec,
    track: Optional[SubtitleTrack] = None,
    *,
    warn_above: float = HIGH_SPEED_WARNING,
) -> WarpPlan:
    """Assign a speed to every segment and lay out the output timeline."""
    solved = None
    if isinstance(spec, PerClass):
        s_m, s_s = spec.s_m, spec.s_s
    elif isinstance(spec, TargetDuration):
        solved = solve_sm_for_target(
            spec.l_q, spec.s_s, compute_r(segs), segs.total, spec.s_m_max, warn_above=warn_above
        )
        s_m, s_s = solved.s_m, solved.s_s
    elif isinstance(spec, ReadingRate):
        if track is None:
            raise ValueError("a ReadingRate plan needs the subtitle track")
        s_m, s_s = spec.s_m, None
        by_index = track.by_index()
    else:
        raise TypeError(f"unknown speed spec {spec!r}")

    speeds = []
    for seg in segs:
        if seg.kind is SegmentKind.NONLANGUAGE:
            speeds.append(s_m)
        elif s_s is not None:
            speeds.append(s_s)
        else:
            missing = [i for i in seg.cue_indices if i not in by_index]
            if missing:
                raise ValueError(f"segment {seg.start}-{seg.end} references unknown cues {missing}")
            speeds.append(_reading_speed(seg, _segment_units(seg, by_index, spec.count_mode), spec))
    bounds = [(s.start, s.end, s.kind) for s in segs]
    return plan_from_speeds(bounds, speeds, spec, solved)


def warp_time(plan: WarpPlan, t: int) -> int:
    """Map a source time to output time."""
    if not 0 <= t <= plan.l_in:
        raise OutOfRange(f"t={t} outside [0, {plan.l_in}]")
    if t == plan.l_in:
        return plan.l_out
    i = bisect.bisect_right(plan._in_starts, t) - 1
    seg = plan.segments[i]
    out = seg.out_start + round_half_up(Fraction(t - seg.in_start) / plan._rates[i])
    return min(out, seg.out_end)


def unwarp_time(plan: WarpPlan, t_out: int) -> int:
    """Map an output time back to source time (inverse of ``warp_time`` up to rounding)."""
    if not 0 <= t_out <= plan.l_out:
        raise OutOfRange(f"t_out={t_out} outside [0, {plan.l_out}]")
    if t_out == plan.l_out:
        return plan.l_in
    i = bisect.bisect_right(plan._out_starts, t_out) - 1
    seg = plan.segments[i]
    t = seg.in_start + round_half_up((t_out - seg.out_start) * plan._rates[i])
    return min(t, seg.in_end)
