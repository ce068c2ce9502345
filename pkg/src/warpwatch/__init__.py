"""warpwatch: two-level fast-forward planning for subtitled video.

Non-language stretches play very fast, subtitled stretches play at a readable
speed, and the subtitle track is retimed (optionally centered and faded) to
stay in sync with the warped video.
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .subtitles import (  # noqa: F401
    CountMode,
    RenderConfig,
    SourceFormat,
    SubtitleCue,
    SubtitleTrack,
    count_text_units,
    parse_srt,
    parse_subtitles,
    parse_webvtt,
    read_subtitles,
    write_ass,
    write_srt,
)
from .timeline import Segment, SegmentKind, SegmentList, compute_r, segment_timeline  # noqa: F401
from .planner import (  # noqa: F401
    PerClass,
    ReadingRate,
    SolvedSpeeds,
    TargetDuration,
    WarpPlan,
    WarpSegment,
    build_warp_plan,
    plan_from_speeds,
    predict_duration,
    predict_duration_reading,
    solve_sm_for_target,
    unwarp_time,
    warp_time,
)
from .styling import FadeConfig, StyledCue, StyledTrack, apply_centering, apply_fading, retime_track  # noqa: F401
from .emit import Profile, decompose_tempo, emit_edl, emit_filter_script, read_edl  # noqa: F401
from .analytics import (  # noqa: F401
    CorpusStats,
    LogisticFit,
    TrackStats,
    corpus_stats,
    fade_extension_factor,
    fit_logistic,
    track_stats,
)
