"""Hand a plan to an encoder: JSON edit list, plain segment script, and a filter graph."""

# %%
from warpwatch import Profile, decompose_tempo, emit_edl, emit_filter_script, plan_from_speeds
from warpwatch.timeline import SegmentKind

NL, L = SegmentKind.NONLANGUAGE, SegmentKind.LANGUAGE
plan = plan_from_speeds([(0, 10_000, NL), (10_000, 20_000, L)], [6.0, 2.5])
print(emit_edl(plan))

# %%
print(emit_filter_script(plan, Profile.GENERIC))

# %%
# audio tempo stages are limited to [0.5, 2], so 6x becomes three equal stages
print(decompose_tempo(6.0))
print(emit_filter_script(plan, Profile.FILTERGRAPH))
