"""Retime subtitles through a warp plan and apply centering / fading."""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional

from .errors import CueOutsidePlan
from .planner import WarpPlan, warp_time
from .subtitles import SubtitleCue, SubtitleTrack
from .timeline import SegmentKind

__all__ = ["FadeConfig", "StyledCue", "StyledTrack", "retime_track", "apply_fading", "apply_centering"]


@dataclass(frozen=True)
class FadeConfig:
    """Keep an expired cue on screen, translucent, until the next one appears.

    ``alpha`` follows the ASS convention: 0 is opaque, 255 invisible.
    ``max_extension`` caps how long a faded cue lingers.
    """

    enabled: bool = True
    alpha: int = 128
    max_extension: Optional[int] = None

    def __post_init__(self):
        if not 0 <= self.alpha <= 255:
            raise ValueError(f"alpha must be in 0..255, got {self.alpha}")
        if self.max_extension is not None and self.max_extension <= 0:
            raise ValueError("max_extension must be positive when given")


@dataclass(frozen=True)
class StyledCue:
    base: SubtitleCue
    centered: bool = False
    fade: Optional[tuple[int, int]] = None

    def __post_init__(self):
        if self.fade is not None:
            fs, fe = self.fade
            if fs != self.base.end or fe < fs:
                raise ValueError(f"fade {self.fade} must start at cue end {self.base.end}")


@dataclass(frozen=True)
class StyledTrack:
    cues: tuple[StyledCue, ...]
    total_out: int

    def __post_init__(self):
        object.__setattr__(self, "cues", tuple(self.cues))

    def __len__(self):
        return len(self.cues)


def retime_track(track: SubtitleTrack, plan: WarpPlan) -> SubtitleTrack:
    """Move every cue onto the output timeline.  No cue is dropped.

    A cue that rounds to zero length is given 1 ms (taken before its start
    when it sits at the very end of the output).
    """
    nonlang = [(s.in_start, s.in_end) for s in plan.segments if s.kind is SegmentKind.NONLANGUAGE]
    out = []
    for cue in track.cues:
        if cue.end > plan.l_in:
            raise CueOutsidePlan(f"cue {cue.index} ends at {cue.end} ms, beyond plan length {plan.l_in} ms")
        for a, b in nonlang:
            if cue.start < b and a < cue.end:
                raise CueOutsidePlan(
                    f"cue {cue.index} ({cue.start}-{cue.end} ms) overlaps non-language span {a}-{b} ms"
                )
        start, end = warp_time(plan, cue.start), warp_time(plan, cue.end)
        if end <= start:
            if start + 1 <= plan.l_out:
                end = start + 1
            else:
                start, end = plan.l_out - 1, plan.l_out
        out.append(SubtitleCue(cue.index, start, end, cue.lines))
    return SubtitleTrack(tuple(out), track.source_format)


def apply_fading(track: SubtitleTrack, total_out: int, cfg: FadeConfig = FadeConfig()) -> StyledTrack:
    """Attach a fade phase to each cue: from its end until the next cue starts.

    The last cue fades until ``total_out``.  ``cfg.max_extension`` caps each
    fade; empty fades are omitted.
    """
    cues = track.cues
    if cues and total_out < max(c.end for c in cues):
        raise ValueError("total_out precedes the end of the last cue")
    styled = []
    for i, cue in enumerate(cues):
        fade = None
        if cfg.enabled:
            limit = cues[i + 1].start if i + 1 < len(cues) else total_out
            if cfg.max_extension is not None:
                limit = min(limit, cue.end + cfg.max_extension)
            if limit > cue.end:
                fade = (cue.end, limit)
        styled.append(StyledCue(cue, False, fade))
    return StyledTrack(tuple(styled), total_out)


def apply_centering(track: StyledTrack, centered: bool = True) -> StyledTrack:
    """Place every cue at screen center (``True``) or at the bottom (``False``)."""
    return StyledTrack(tuple(replace(c, centered=centered) for c in track.cues), track.total_out)
