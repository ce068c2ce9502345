"""Random instance generators shared by the property and acceptance tests."""

from fractions import Fraction

import numpy as np

from warpwatch.planner import plan_from_speeds, round_half_up
from warpwatch.subtitles import SubtitleCue, SubtitleTrack
from warpwatch.timeline import SegmentKind

WORDS = ["ok", "yes", "no", "come here", "what?", "I know", "run!", "pay it forward", "猫", "ありがとう"]


def random_track(rng, total, max_cues=25, overlap=True, min_len=1):
    n = int(rng.integers(0, max_cues + 1))
    cues = []
    for i in range(n):
        length = int(rng.integers(min_len, max(min_len + 1, total // 4)))
        start = int(rng.integers(0, total - length + 1))
        text = " ".join(rng.choice(WORDS, size=int(rng.integers(1, 4))))
        cues.append(SubtitleCue(i + 1, start, start + length, (text,)))
    track = SubtitleTrack.canonical(cues)
    if not overlap:
        kept, last_end = [], -1
        for c in track.cues:
            if c.start >= last_end:
                kept.append(c)
                last_end = c.end
        track = SubtitleTrack.canonical(kept)
    return track


def random_bounds(rng, n_max=12, min_len=1, max_len=50_000):
    n = int(rng.integers(1, n_max + 1))
    kind = SegmentKind.NONLANGUAGE if rng.random() < 0.5 else SegmentKind.LANGUAGE
    bounds, t = [], 0
    for _ in range(n):
        d = int(rng.integers(min_len, max_len + 1))
        bounds.append((t, t + d, kind))
        t += d
        kind = SegmentKind.LANGUAGE if kind is SegmentKind.NONLANGUAGE else SegmentKind.NONLANGUAGE
    return bounds


def random_plan(rng, speed_range=(1.0, 20.0), uniform=False, **kw):
    bounds = random_bounds(rng, **kw)
    if uniform:
        speeds = [float(rng.uniform(*speed_range))] * len(bounds)
    else:
        speeds = [float(s) for s in rng.uniform(*speed_range, size=len(bounds))]
    return plan_from_speeds(bounds, speeds)


def exact_round_div(t, speed):
    """round_half_up(t / speed) computed independently with Fractions."""
    return round_half_up(Fraction(t) / Fraction(speed))


def naive_mean_std(values):
    """Two-pass population mean / std in plain Python."""
    values = list(values)
    n = len(values)
    mean = sum(values) / n
    var = sum((v - mean) ** 2 for v in values) / n
    return mean, var ** 0.5


def reading_oracle(segs, track, s_m, s_r, count):
    """Direct evaluation of the reading-rate duration formula with Fractions."""
    by_index = track.by_index()
    total = Fraction(segs.nonlanguage_ms) / Fraction(s_m)
    for seg in segs:
        if seg.kind is SegmentKind.LANGUAGE:
            n = sum(count(by_index[i]) for i in seg.cue_indices)
            total += Fraction(60_000 * n) / Fraction(s_r) if n else Fraction(seg.duration) / Fraction(s_m)
    return total


__all__ = [
    "np",
    "random_track",
    "random_bounds",
    "random_plan",
    "exact_round_div",
    "naive_mean_std",
    "reading_oracle",
]
