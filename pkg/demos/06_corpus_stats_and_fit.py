"""Corpus statistics, the fade extension factor, and a comprehension-curve fit."""

# %%
from pathlib import Path

import numpy as np

from warpwatch import corpus_stats, fade_extension_factor, fit_logistic, read_subtitles, track_stats

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"
durations = {"movie_50.srt": 600_000, "well_formed.srt": 15_000, "with_notes.vtt": 3_700_000}
stats = [track_stats(read_subtitles(DATA / name), total) for name, total in durations.items()]
for name, s in zip(durations, stats):
    print(f"{name:16s} r={s.r:.3f}  rate={s.required_rate:.1f}/min  cues={s.cue_count}")
print(corpus_stats(stats))

# %%
# how much longer a line stays visible when it fades out instead of vanishing
print("fade extension:", round(fade_extension_factor(read_subtitles(DATA / "movie_50.srt"), 600_000), 3))

# %%
# comprehension vs playback speed; the fitted b is the speed at which half is understood
speed = np.array([1.0, 1.5, 2.5, 4.0, 6.0, 8.0, 11.0, 16.0])
understood = np.array([1.0, 0.97, 0.93, 0.8, 0.55, 0.4, 0.2, 0.05])
fit = fit_logistic(zip(speed, understood))
print(f"a={fit.a:.3f} b={fit.b:.3f} sse={fit.sse:.2e} converged={fit.converged}")
print("predicted at 5x:", round(float(fit.predict(5.0)), 3))
