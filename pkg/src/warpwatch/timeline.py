"""Split a source timeline into alternating language / non-language segments."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .errors import CueBeyondDuration
from .subtitles import SubtitleTrack

__all__ = ["SegmentKind", "Segment", "SegmentList", "segment_timeline", "compute_r", "DEFAULT_GAP_MERGE_MS"]

DEFAULT_GAP_MERGE_MS = 500


class SegmentKind(enum.Enum):
    LANGUAGE = "language"
    NONLANGUAGE = "nonlanguage"


@dataclass(frozen=True)
class Segment:
    start: int
    end: int
    kind: SegmentKind
    cue_indices: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "cue_indices", tuple(self.cue_indices))
        if self.end <= self.start:
            raise ValueError(f"segment end {self.end} <= start {self.start}")
        if (self.kind is SegmentKind.LANGUAGE) != bool(self.cue_indices):
            raise ValueError("language segments need cues; non-language segments must have none")

    @property
    def duration(self) -> int:
        return self.end - self.start


@dataclass(frozen=True)
class SegmentList:
    """Segments tiling ``[0, total]`` with alternating kinds."""

    segments: tuple[Segment, ...]
    total: int

    def __post_init__(self):
        segs = tuple(self.segments)
        object.__setattr__(self, "segments", segs)
        if self.total <= 0:
            raise ValueError("total duration must be positive")
        if not segs or segs[0].start != 0 or segs[-1].end != self.total:
            raise ValueError("segments must start at 0 and end at total")
        for a, b in zip(segs, segs[1:]):
            if a.end != b.start:
                raise ValueError(f"segments do not abut at {a.end}/{b.start}")
            if a.kind is b.kind:
                raise ValueError(f"consecutive {a.kind.value} segments at {a.end}")

    def __len__(self):
        return len(self.segments)

    def __iter__(self):
        return iter(self.segments)

    @property
    def language_ms(self) -> int:
        return sum(s.duration for s in self.segments if s.kind is SegmentKind.LANGUAGE)

    @property
    def nonlanguage_ms(self) -> int:
        return self.total - self.language_ms


def segment_timeline(track: SubtitleTrack, total: int, gap_merge: int = DEFAULT_GAP_MERGE_MS) -> SegmentList:
    """Union the cue intervals into language segments.

    Gaps between language intervals strictly shorter than ``gap_merge`` are
    absorbed; touching or overlapping cues always merge.  Everything else is
    non-language.
    """
    if gap_merge < 0:
        raise ValueError("gap_merge must be >= 0")
    if total <= 0:
        raise ValueError("total duration must be positive")
    for cue in track.cues:
        if cue.end > total:
            raise CueBeyondDuration(f"cue {cue.index} ends at {cue.end} ms, beyond total {total} ms")

    # track.cues is sorted by start, so a single sweep builds the union
    spans: list[list] = []  # [start, end, [indices]]
    for cue in track.cues:
        if spans and cue.start - spans[-1][1] < max(gap_merge, 1):
            spans[-1][1] = max(spans[-1][1], cue.end)
            spans[-1][2].append(cue.index)
        else:
            spans.append([cue.start, cue.end, [cue.index]])

    segments = []
    cursor = 0
    for start, end, idx in spans:
        if start > cursor:
            segments.append(Segment(cursor, start, SegmentKind.NONLANGUAGE))
        segments.append(Segment(start, end, SegmentKind.LANGUAGE, tuple(idx)))
        cursor = end
    if cursor < total:
        segments.append(Segment(cursor, total, SegmentKind.NONLANGUAGE))
    return SegmentList(tuple(segments), total)


def nonlanguage_fraction(segs: SegmentList) -> Fraction:
    return Fraction(segs.nonlanguage_ms, segs.total)


def compute_r(segs: SegmentList) -> float:
    """Fraction of the source duration without language."""
    return float(nonlanguage_fraction(segs))
