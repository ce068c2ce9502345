"""Command line entry point: ``warpwatch {plan,retime,stats,fit}``.

Settings are layered, lowest priority first: built-in defaults, the JSON
file given with ``--config``, ``WARPWATCH_*`` environment variables, explicit
flags.  Every artifact is rendered in memory before anything is written, so a
validation error never leaves partial output behind.

Exit codes: 0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import shutil
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .analytics import corpus_stats, fit_logistic, to_json, track_stats
from .emit import Profile, emit_edl, emit_filter_script
from .errors import WarpWatchError
from .planner import (
    PerClass,
    ReadingRate,
    TargetDuration,
    build_warp_plan,
    predict_duration,
    predict_duration_reading,
)
from .styling import FadeConfig, apply_centering, apply_fading, retime_track
from .subtitles import CountMode, RenderConfig, read_subtitles, write_ass, write_srt
from .timeline import DEFAULT_GAP_MERGE_MS, compute_r, segment_timeline

ENV_PREFIX = "WARPWATCH_"
EMIT_CHOICES = ("edl", "ass", "srt", "script-generic", "script-filtergraph")
SUFFIXES = {
    "edl": ".edl.json",
    "ass": ".ass",
    "srt": ".retimed.srt",
    "script-generic": ".warpplan.txt",
    "script-filtergraph": ".filtergraph.txt",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _bool(value) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ("1", "true", "yes", "on"):
        return True
    if text in ("0", "false", "no", "off", ""):
        return False
    raise UsageError(f"not a boolean: {value!r}")


def _emit_list(value):
    items = value if isinstance(value, list) else str(value).split(",")
    items = [str(i).strip() for i in items if str(i).strip()]
    bad = [i for i in items if i not in EMIT_CHOICES]
    if bad:
        raise UsageError(f"unknown --emit value(s) {bad}; choose from {', '.join(EMIT_CHOICES)}")
    return items


# dest -> (converter, default); only these keys may come from config or environment
SETTINGS = {
    "subs": (str, None),
    "duration_ms": (int, None),
    "sm": (float, None),
    "ss": (float, None),
    "reading_rate": (float, None),
    "target_duration_ms": (int, None),
    "sm_max": (float, None),
    "min_speed": (float, None),
    "max_speed": (float, None),
    "gap_merge_ms": (int, DEFAULT_GAP_MERGE_MS),
    "count_mode": (str, "graphemes"),
    "center": (_bool, False),
    "fade": (_bool, False),
    "fade_alpha": (int, 128),
    "fade_max_ms": (int, None),
    "emit": (_emit_list, None),
    "out_dir": (str, "."),
    "stem": (str, None),
    "media": (str, None),
    "encode": (_bool, False),
    "probe_duration": (_bool, False),
    "subs_dir": (str, None),
    "duration_manifest": (str, None),
    "jobs": (int, 1),
    "out": (str, None),
    "points": (str, None),
}


def _add_plan_options(p):
    S = argparse.SUPPRESS
    p.add_argument("--subs", default=S, help="input subtitles (.srt or .vtt, UTF-8)")
    p.add_argument("--duration-ms", type=int, default=S, help="total video duration in ms")
    p.add_argument("--media", default=S, help="source media file (for --probe-duration / --encode)")
    p.add_argument("--probe-duration", action="store_true", default=S,
                   help="read the duration from --media with ffprobe")
    g = p.add_argument_group("speeds")
    g.add_argument("--sm", type=float, default=S, help="speed of non-language segments")
    g.add_argument("--ss", type=float, default=S, help="speed of language segments")
    g.add_argument("--reading-rate", type=float, default=S, help="reading rate in text units per minute")
    g.add_argument("--target-duration-ms", type=int, default=S, help="desired output duration")
    g.add_argument("--sm-max", type=float, default=S, help="cap on the solved non-language speed")
    g.add_argument("--min-speed", type=float, default=S, help="clamp reading-rate speeds from below")
    g.add_argument("--max-speed", type=float, default=S, help="clamp reading-rate speeds from above")
    p.add_argument("--gap-merge-ms", type=int, default=S)
    p.add_argument("--count-mode", choices=("graphemes", "words"), default=S)
    p.add_argument("--center", action="store_true", default=S, help="center subtitles on screen")
    p.add_argument("--fade", action="store_true", default=S, help="keep expired subtitles translucent")
    p.add_argument("--fade-alpha", type=int, default=S, help="fade transparency 0..255 (255 invisible)")
    p.add_argument("--fade-max-ms", type=int, default=S, help="maximum fade duration")
    p.add_argument("--emit", action="append", choices=EMIT_CHOICES, default=S)
    p.add_argument("--out-dir", default=S)
    p.add_argument("--stem", default=S, help="base name for output files (default: input stem)")
    p.add_argument("--encode", action="store_true", default=S,
                   help="run the external encoder on the generated filter graph")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="warpwatch", description="Two-level fast-forward planning for subtitled video.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="JSON file with default settings")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    plan = sub.add_parser("plan", help="compute a speed schedule and write artifacts")
    _add_plan_options(plan)
    retime = sub.add_parser("retime", help="retime subtitles only (default --emit srt)")
    _add_plan_options(retime)

    stats = sub.add_parser("stats", help="non-language ratio and reading-rate statistics")
    S = argparse.SUPPRESS
    stats.add_argument("--subs", default=S)
    stats.add_argument("--duration-ms", type=int, default=S)
    stats.add_argument("--subs-dir", default=S)
    stats.add_argument("--duration-manifest", default=S, help='JSON object {"file name": duration_ms}')
    stats.add_argument("--gap-merge-ms", type=int, default=S)
    stats.add_argument("--count-mode", choices=("graphemes", "words"), default=S)
    stats.add_argument("--jobs", type=int, default=S)
    stats.add_argument("--out", default=S, help="write JSON here instead of stdout")

    fit = sub.add_parser("fit", help="fit y = 1/(1+exp(a(x-b))) to x,y points")
    fit.add_argument("--points", default=S, help="CSV file of x,y rows ('-' for stdin)")
    fit.add_argument("--out", default=S)
    return parser


def resolve_settings(ns: argparse.Namespace, environ=None) -> dict:
    """defaults < config file < environment < explicit flags."""
    environ = os.environ if environ is None else environ
    settings = {k: default for k, (_, default) in SETTINGS.items()}
    if ns.config:
        try:
            data = json.loads(Path(ns.config).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file {ns.config}: {exc}") from exc
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
        for key, value in data.items():
            key = key.replace("-", "_")
            if key not in SETTINGS:
                raise UsageError(f"unknown config key {key!r}")
            settings[key] = None if value is None else SETTINGS[key][0](value)
    for key, (conv, _) in SETTINGS.items():
        env_key = ENV_PREFIX + key.upper()
        if env_key in environ:
            try:
                settings[key] = conv(environ[env_key])
            except ValueError as exc:
                raise UsageError(f"{env_key}: {exc}") from exc
    for key, value in vars(ns).items():
        if key in SETTINGS:
            settings[key] = value
    return settings


# --------------------------------------------------------------------------

def _speed_spec(s: dict, count_mode: CountMode):
    given = {k for k in ("sm", "ss", "reading_rate", "target_duration_ms") if s[k] is not None}
    if given == {"sm", "ss"}:
        spec = PerClass(s["sm"], s["ss"])
    elif given == {"sm", "reading_rate"}:
        spec = ReadingRate(s["sm"], s["reading_rate"], count_mode, s["min_speed"], s["max_speed"])
    elif given == {"target_duration_ms", "ss"}:
        spec = TargetDuration(s["target_duration_ms"], s["ss"], s["sm_max"])
    else:
        raise UsageError(
            "choose exactly one speed interface: --sm with --ss, --sm with --reading-rate, "
            "or --target-duration-ms with --ss (got: " + (", ".join(sorted(given)) or "none") + ")"
        )
    if s["sm_max"] is not None and not isinstance(spec, TargetDuration):
        raise UsageError("--sm-max only applies with --target-duration-ms")
    if (s["min_speed"] is not None or s["max_speed"] is not None) and not isinstance(spec, ReadingRate):
        raise UsageError("--min-speed/--max-speed only apply with --reading-rate")
    return spec


def _probe_duration(media: str) -> int:
    exe = shutil.which("ffprobe")
    if exe is None:
        raise OSError("ffprobe not found on PATH (needed for --probe-duration)")
    out = subprocess.run(
        [exe, "-v", "error", "-show_entries", "format=duration", "-of", "default=nw=1:nk=1", media],
        check=True, capture_output=True, text=True,
    )
    return round(float(out.stdout.strip()) * 1000)


def _encode(media: str, graph_path: Path, out_path: Path) -> None:
    exe = shutil.which("ffmpeg")
    if exe is None:
        raise OSError("ffmpeg not found on PATH (needed for --encode)")
    subprocess.run(
        [exe, "-y", "-i", media, "-filter_complex_script", str(graph_path),
         "-map", "[outv]", "-map", "[outa]", str(out_path)],
        check=True,
    )


def _cmd_plan(s: dict, default_emit, out=sys.stdout) -> int:
    emit = s["emit"] or default_emit
    if not emit:
        raise UsageError("nothing to do: pass at least one --emit")
    if s["subs"] is None:
        raise UsageError("--subs is required")
    count_mode = CountMode(s["count_mode"])
    spec = _speed_spec(s, count_mode)
    if s["encode"] and not s["media"]:
        raise UsageError("--encode needs --media")
    fade_cfg = FadeConfig(bool(s["fade"]), s["fade_alpha"], s["fade_max_ms"])

    track = read_subtitles(s["subs"])
    total = s["duration_ms"]
    if total is None and s["probe_duration"]:
        if not s["media"]:
            raise UsageError("--probe-duration needs --media")
        total = _probe_duration(s["media"])
    if total is None:
        raise UsageError("--duration-ms is required")
    if total <= 0:
        raise UsageError("--duration-ms must be positive")

    segs = segment_timeline(track, total, s["gap_merge_ms"])
    r = compute_r(segs)
    plan = build_warp_plan(segs, spec, track)
    if isinstance(spec, ReadingRate):
        predicted = predict_duration_reading(spec.s_m, spec.s_r, segs, track, count_mode)
    elif plan.solved is not None:
        predicted = predict_duration(plan.solved.s_m, plan.solved.s_s, r, total)
    else:
        predicted = predict_duration(spec.s_m, spec.s_s, r, total)

    artifacts = {}
    for kind in dict.fromkeys(emit):
        if kind == "edl":
            artifacts[kind] = emit_edl(plan)
        elif kind == "script-generic":
            artifacts[kind] = emit_filter_script(plan, Profile.GENERIC)
        elif kind == "script-filtergraph":
            artifacts[kind] = emit_filter_script(plan, Profile.FILTERGRAPH)
        elif kind == "srt":
            artifacts[kind] = write_srt(retime_track(track, plan))
        elif kind == "ass":
            styled = apply_fading(retime_track(track, plan), plan.l_out, fade_cfg)
            styled = apply_centering(styled, bool(s["center"]))
            artifacts[kind] = write_ass(styled, RenderConfig(fade_alpha=fade_cfg.alpha))
    if s["encode"] and "script-filtergraph" not in artifacts:
        artifacts["script-filtergraph"] = emit_filter_script(plan, Profile.FILTERGRAPH)

    out_dir = Path(s["out_dir"])
    stem = s["stem"] or Path(s["subs"]).stem
    out_dir.mkdir(parents=True, exist_ok=True)
    written = {}
    for kind, text in artifacts.items():
        path = out_dir / (stem + SUFFIXES[kind])
        path.write_text(text, encoding="utf-8", newline="\n")
        written[kind] = path

    print(f"r: {r:.6f}", file=out)
    if plan.solved is not None:
        print(f"solved: s_m={plan.solved.s_m:.6f} s_s={plan.solved.s_s:.6f} adjusted={plan.solved.adjusted}",
              file=out)
    print(f"source_duration_ms: {total}", file=out)
    print(f"predicted_duration_ms: {predicted}", file=out)
    print(f"output_duration_ms: {plan.l_out}", file=out)
    print(f"compression_ratio: {plan.l_out / total:.6f}", file=out)
    for kind, path in written.items():
        print(f"wrote {kind}: {path}", file=out)

    if s["encode"]:
        target = out_dir / f"{stem}.fast.mp4"
        _encode(s["media"], written["script-filtergraph"], target)
        print(f"wrote video: {target}", file=out)
    return 0


def _cmd_stats(s: dict, out=sys.stdout) -> int:
    count_mode = CountMode(s["count_mode"])
    jobs = []
    if s["subs_dir"]:
        if not s["duration_manifest"]:
            raise UsageError("--subs-dir needs --duration-manifest")
        manifest = json.loads(Path(s["duration_manifest"]).read_text(encoding="utf-8"))
        files = sorted(
            p for p in Path(s["subs_dir"]).iterdir() if p.suffix.lower() in (".srt", ".vtt")
        )
        if not files:
            raise UsageError(f"no .srt/.vtt files in {s['subs_dir']}")
        for path in files:
            if path.name not in manifest:
                raise UsageError(f"{path.name} missing from duration manifest")
            jobs.append((path, int(manifest[path.name])))
    elif s["subs"]:
        if s["duration_ms"] is None:
            raise UsageError("--subs needs --duration-ms")
        jobs.append((Path(s["subs"]), s["duration_ms"]))
    else:
        raise UsageError("pass --subs-dir with --duration-manifest, or --subs with --duration-ms")

    def one(job):
        path, total = job
        return track_stats(read_subtitles(path), total, count_mode, s["gap_merge_ms"])

    with ThreadPoolExecutor(max_workers=max(1, s["jobs"])) as pool:
        results = list(pool.map(one, jobs))
    tracks = ",".join(
        '{"file":%s,"stats":%s}' % (json.dumps(path.name), to_json(st)) for (path, _), st in zip(jobs, results)
    )
    text = '{"tracks":[%s],"corpus":%s}\n' % (tracks, to_json(corpus_stats(results)))
    _deliver(text, s["out"], out)
    return 0


def _read_points(source: str):
    text = sys.stdin.read() if source == "-" else Path(source).read_text(encoding="utf-8")
    points = []
    for n, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            x, y = (float(v) for v in line.replace(";", ",").split(","))
        except ValueError as exc:
            raise UsageError(f"{source}:{n}: expected 'x,y', got {line!r}") from exc
        points.append((x, y))
    return points


def _cmd_fit(s: dict, out=sys.stdout) -> int:
    if not s["points"]:
        raise UsageError("--points is required")
    fit = fit_logistic(_read_points(s["points"]))
    _deliver(to_json(fit) + "\n", s["out"], out)
    return 0


def _deliver(text: str, path, out):
    if path:
        Path(path).write_text(text, encoding="utf-8", newline="\n")
    else:
        out.write(text)


def run(argv=None, *, environ=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        ns = build_parser().parse_args(argv)
        s = resolve_settings(ns, environ)
        if ns.command == "plan":
            return _cmd_plan(s, None, stdout)
        if ns.command == "retime":
            return _cmd_plan(s, ["srt"], stdout)
        if ns.command == "stats":
            return _cmd_stats(s, stdout)
        return _cmd_fit(s, stdout)
    except (UsageError, WarpWatchError, ValueError, UnicodeDecodeError) as exc:
        print(f"warpwatch: error: {exc}", file=stderr)
        return 1
    except (OSError, subprocess.CalledProcessError) as exc:
        print(f"warpwatch: I/O error: {exc}", file=stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
