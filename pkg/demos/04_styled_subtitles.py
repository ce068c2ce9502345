"""Retime subtitles onto the fast timeline, center them, and fade them until the next line."""

# %%
from pathlib import Path

from warpwatch import (
    FadeConfig,
    PerClass,
    RenderConfig,
    apply_centering,
    apply_fading,
    build_warp_plan,
    read_subtitles,
    retime_track,
    segment_timeline,
    write_ass,
    write_srt,
)

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
track = read_subtitles(DATA / "well_formed.srt")
plan = build_warp_plan(segment_timeline(track, 15_000, 500), PerClass(4.0, 2.0))
retimed = retime_track(track, plan)
print(write_srt(retimed))

# %%
# each expired line stays on screen, half transparent, for up to 3 s or until the next line
styled = apply_fading(retimed, plan.l_out, FadeConfig(enabled=True, alpha=128, max_extension=3000))
for cue in styled.cues:
    print(cue.base.index, (cue.base.start, cue.base.end), "fade", cue.fade)

# %%
styled = apply_centering(styled, True)
ass = write_ass(styled, RenderConfig(fade_alpha=128))
print("\n".join(line for line in ass.splitlines() if line.startswith(("Style:", "Dialogue:"))))
