"""Three ways to choose playback speeds, and how long the result runs."""

# %%
from pathlib import Path

from warpwatch import PerClass, ReadingRate, TargetDuration, build_warp_plan, read_subtitles, segment_timeline
from warpwatch.planner import predict_duration
from warpwatch.timeline import compute_r

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
track = read_subtitles(DATA / "movie_50.srt")
total = 600_000
segs = segment_timeline(track, total, 500)
r = compute_r(segs)
print(f"{len(track.cues)} cues, {len(segs)} segments, r = {r:.4f}")

# %%
# fixed speeds per class: 6x without dialogue, 2.5x with it
plan = build_warp_plan(segs, PerClass(6.0, 2.5))
print("per-class   :", plan.l_out, "ms; closed form", predict_duration(6.0, 2.5, r, total))

# %%
# subtitled spans slowed to a reading rate of 900 graphemes per minute
plan = build_warp_plan(segs, ReadingRate(6.0, 900.0), track)
print("reading rate:", plan.l_out, "ms; language speeds",
      sorted(round(s, 2) for s, seg in zip(plan.speeds, plan.segments) if seg.kind.value == "language")[:5], "...")

# %%
# ask for a 4-minute result and let the planner pick the non-language speed
plan = build_warp_plan(segs, TargetDuration(240_000, 2.0))
print("target      :", plan.l_out, "ms with", plan.solved)

# %%
# a cap on the non-language speed forces the language speed up instead
plan = build_warp_plan(segs, TargetDuration(100_000, 2.0, s_m_max=8.0))
print("capped      :", plan.l_out, "ms with", plan.solved)

# %%
# the headline arithmetic: 11.14x / 5.91x at r = 0.5777
ratio = predict_duration(11.14, 5.910, 0.5777, 10**7) / 10**7
print(f"output/input = {ratio:.5f}, i.e. {100 * (1 - ratio):.2f}% less viewing time")
