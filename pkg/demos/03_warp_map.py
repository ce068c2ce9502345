"""The piecewise-linear map between source and output clocks."""

# %%
import numpy as np

from warpwatch import plan_from_speeds, unwarp_time, warp_time
from warpwatch.timeline import SegmentKind

NL, L = SegmentKind.NONLANGUAGE, SegmentKind.LANGUAGE
plan = plan_from_speeds([(0, 10_000, NL), (10_000, 20_000, L), (20_000, 30_000, NL)], [4.0, 1.5, 4.0])
for seg in plan.segments:
    print(f"{seg.kind.value:12s} in {seg.in_start:6d}-{seg.in_end:6d}  x{seg.speed:<4g} out {seg.out_start:6d}-{seg.out_end:6d}")

# %%
# source -> output -> source round trips lose at most ceil(max speed) ms
t = np.arange(0, plan.l_in + 1, 1000)
out = np.array([warp_time(plan, int(x)) for x in t])
back = np.array([unwarp_time(plan, int(y)) for y in out])
print(np.column_stack([t, out, back])[::5])
print("monotone:", bool(np.all(np.diff(out) >= 0)))
