"""Read a subtitle file and split the timeline into language / non-language spans."""

# %%
from pathlib import Path

from warpwatch import CountMode, count_text_units, read_subtitles, segment_timeline
from warpwatch.timeline import compute_r

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
track = read_subtitles(DATA / "well_formed.srt")
for cue in track.cues:
    print(cue.index, cue.start, cue.end, repr(cue.text), count_text_units(cue, CountMode.GRAPHEMES), "graphemes")

# %%
# the 400 ms pause between cues 1 and 2 is below the 500 ms merge threshold
segs = segment_timeline(track, 15_000, gap_merge=500)
for seg in segs:
    print(f"{seg.kind.value:12s} {seg.start:6d} - {seg.end:6d}  cues {seg.cue_indices}")
print("r =", compute_r(segs))

# %%
# with no merging the pause becomes its own non-language span
print("r without merging =", compute_r(segment_timeline(track, 15_000, gap_merge=0)))
