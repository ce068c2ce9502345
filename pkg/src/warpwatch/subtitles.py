"""Subtitle model plus SRT / WebVTT parsing and SRT / ASS writing.

All times are integer milliseconds.  Parsers return a canonical track:
cues sorted by (start, end, index) and renumbered 1..n.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import regex

from .errors import EndNotAfterStart, MalformedTimestamp, MissingHeader, TimestampOverflow

__all__ = [
    "CountMode",
    "SourceFormat",
    "SubtitleCue",
    "SubtitleTrack",
    "RenderConfig",
    "parse_srt",
    "parse_webvtt",
    "parse_subtitles",
    "read_subtitles",
    "write_srt",
    "write_ass",
    "count_text_units",
    "format_srt_time",
]

MS_PER_HOUR = 3_600_000
SRT_MAX_MS = 100 * MS_PER_HOUR  # HH field is two digits


class SourceFormat(enum.Enum):
    SRT = "srt"
    WEBVTT = "webvtt"


class CountMode(enum.Enum):
    GRAPHEMES = "graphemes"
    WORDS = "words"


@dataclass(frozen=True)
class SubtitleCue:
    index: int
    start: int
    end: int
    lines: tuple[str, ...] = ("",)

    def __post_init__(self):
        object.__setattr__(self, "lines", tuple(self.lines))
        if self.start < 0:
            raise EndNotAfterStart(f"cue {self.index}: negative start {self.start}")
        if self.end <= self.start:
            raise EndNotAfterStart(f"cue {self.index}: end {self.end} <= start {self.start}")
        if not self.lines:
            object.__setattr__(self, "lines", ("",))

    @property
    def duration(self) -> int:
        return self.end - self.start

    @property
    def text(self) -> str:
        return "\n".join(self.lines)


def _cue_key(cue: SubtitleCue):
    return (cue.start, cue.end, cue.index)


@dataclass(frozen=True)
class SubtitleTrack:
    """Cues kept in canonical (start, end, index) order.  Overlaps are allowed."""

    cues: tuple[SubtitleCue, ...] = ()
    source_format: SourceFormat = SourceFormat.SRT

    def __post_init__(self):
        object.__setattr__(self, "cues", tuple(sorted(self.cues, key=_cue_key)))

    def __len__(self):
        return len(self.cues)

    def __iter__(self):
        return iter(self.cues)

    @classmethod
    def canonical(cls, cues: Iterable[SubtitleCue], source_format=SourceFormat.SRT) -> "SubtitleTrack":
        """Sort and renumber cues 1..n."""
        ordered = sorted(cues, key=_cue_key)
        renumbered = [
            SubtitleCue(i, c.start, c.end, c.lines) for i, c in enumerate(ordered, start=1)
        ]
        return cls(tuple(renumbered), source_format)

    def by_index(self) -> dict[int, SubtitleCue]:
        return {c.index: c for c in self.cues}


# --------------------------------------------------------------------------
# parsing

_SRT_TS = r"(\d+):([0-5]\d):([0-5]\d)[,.](\d{3})"
_SRT_TIMING = re.compile(rf"^\s*{_SRT_TS}\s*-->\s*{_SRT_TS}(?:\s.*)?$")
_VTT_TS = r"(?:(\d+):)?([0-5]\d):([0-5]\d)\.(\d{3})"
_VTT_TIMING = re.compile(rf"^\s*{_VTT_TS}[ \t]+-->[ \t]+{_VTT_TS}(?:[ \t].*)?$")


def _to_ms(h, m, s, ms) -> int:
    return int(h or 0) * MS_PER_HOUR + int(m) * 60_000 + int(s) * 1000 + int(ms)


def _blocks(text: str) -> list[list[tuple[int, str]]]:
    """Split text into blank-line separated blocks of (1-based line number, line)."""
    if text.startswith("\ufeff"):
        text = text[1:]
    blocks, current = [], []
    text = text.replace("\r\n", "\n").replace("\r", "\n")
    for n, line in enumerate(text.split("\n"), start=1):
        if line.strip() == "":
            if current:
                blocks.append(current)
                current = []
        else:
            current.append((n, line))
    if current:
        blocks.append(current)
    return blocks


def _bad_timing(lineno: int, line: str) -> MalformedTimestamp:
    arrow = line.find("-->")
    offset = 0
    # point at the first token that does not parse
    head = line[:arrow] if arrow >= 0 else line
    if arrow >= 0 and re.fullmatch(rf"\s*{_SRT_TS}\s*", head):
        offset = arrow + 3
    return MalformedTimestamp(f"malformed timing line {line!r}", line=lineno, offset=offset)


def _parse_timing(lineno: int, line: str, pattern) -> tuple[int, int]:
    m = pattern.match(line)
    if m is None:
        raise _bad_timing(lineno, line)
    g = m.groups()
    start, end = _to_ms(*g[:4]), _to_ms(*g[4:8])
    if end <= start:
        raise EndNotAfterStart(f"cue ends at {end} ms, not after its start {start} ms", line=lineno)
    return start, end


def parse_srt(text: str) -> SubtitleTrack:
    """Parse SRT text.  An empty file gives an empty track."""
    cues = []
    for block in _blocks(text):
        if "-->" in block[0][1]:
            timing_at = 0
        elif len(block) >= 2 and "-->" in block[1][1]:
            timing_at = 1
        else:
            lineno, line = block[1] if len(block) > 1 else block[0]
            raise MalformedTimestamp(f"expected a timing line, got {line!r}", line=lineno, offset=0)
        lineno, line = block[timing_at]
        start, end = _parse_timing(lineno, line, _SRT_TIMING)
        lines = tuple(l for _, l in block[timing_at + 1:]) or ("",)
        cues.append(SubtitleCue(len(cues) + 1, start, end, lines))
    return SubtitleTrack.canonical(cues, SourceFormat.SRT)


_VTT_HEADER = re.compile(r"^WEBVTT(?:[ \t].*)?$")
_VTT_META = re.compile(r"^(?:NOTE|STYLE|REGION)(?:[ \t].*)?$")


def parse_webvtt(text: str) -> SubtitleTrack:
    """Parse WebVTT text.  NOTE/STYLE/REGION blocks and cue settings are ignored."""
    if text.startswith("\ufeff"):
        text = text[1:]
    first = text.split("\n", 1)[0].split("\r", 1)[0]
    if not _VTT_HEADER.match(first):
        raise MissingHeader("WebVTT file must start with 'WEBVTT'")
    cues = []
    for block in _blocks(text)[1:]:
        if _VTT_META.match(block[0][1]) and "-->" not in block[0][1]:
            continue
        if "-->" in block[0][1]:
            timing_at = 0
        elif len(block) >= 2 and "-->" in block[1][1]:
            timing_at = 1
        else:
            lineno, line = block[0]
            raise MalformedTimestamp(f"expected a cue timing line, got {line!r}", line=lineno, offset=0)
        lineno, line = block[timing_at]
        start, end = _parse_timing(lineno, line, _VTT_TIMING)
        lines = tuple(l for _, l in block[timing_at + 1:]) or ("",)
        cues.append(SubtitleCue(len(cues) + 1, start, end, lines))
    return SubtitleTrack.canonical(cues, SourceFormat.WEBVTT)


def parse_subtitles(text: str) -> SubtitleTrack:
    """Dispatch on content: WebVTT when the header is present, SRT otherwise."""
    stripped = text[1:] if text.startswith("\ufeff") else text
    if stripped.startswith("WEBVTT"):
        return parse_webvtt(text)
    return parse_srt(text)


def read_subtitles(path) -> SubtitleTrack:
    """Read a UTF-8 subtitle file; invalid bytes raise UnicodeDecodeError."""
    raw = Path(path).read_bytes()
    return parse_subtitles(raw.decode("utf-8"))


# --------------------------------------------------------------------------
# writing

def format_srt_time(ms: int) -> str:
    if ms >= SRT_MAX_MS:
        raise TimestampOverflow(f"{ms} ms does not fit the SRT HH:MM:SS,mmm format")
    h, rest = divmod(ms, MS_PER_HOUR)
    m, rest = divmod(rest, 60_000)
    s, milli = divmod(rest, 1000)
    return f"{h:02d}:{m:02d}:{s:02d},{milli:03d}"


def write_srt(track: SubtitleTrack) -> str:
    out = []
    for i, cue in enumerate(track.cues, start=1):
        out.append(f"{i}\n{format_srt_time(cue.start)} --> {format_srt_time(cue.end)}\n")
        out.append("\n".join(cue.lines) + "\n\n")
    return "".join(out)


@dataclass(frozen=True)
class RenderConfig:
    play_res_x: int = 1920
    play_res_y: int = 1080
    font: str = "Arial"
    font_size: int = 56
    margin_v: int = 40
    fade_alpha: int = 128
    title: str = "warpwatch"

    def __post_init__(self):
        if not 0 <= self.fade_alpha <= 255:
            raise ValueError(f"fade_alpha must be in 0..255, got {self.fade_alpha}")


ALIGN_BOTTOM = 2
ALIGN_MIDDLE = 5

_ASS_TAGS = {
    "i": ("{\\i1}", "{\\i0}"),
    "b": ("{\\b1}", "{\\b0}"),
    "u": ("{\\u1}", "{\\u0}"),
    "s": ("{\\s1}", "{\\s0}"),
}
_ANGLE_TAG = re.compile(r"<(/?)([A-Za-z]+)[^>]*>")


def _ass_time(ms: int) -> str:
    cs = (ms + 5) // 10
    h, rest = divmod(cs, 360_000)
    m, rest = divmod(rest, 6000)
    s, c = divmod(rest, 100)
    return f"{h}:{m:02d}:{s:02d}.{c:02d}"


def _ass_text(lines: Sequence[str]) -> str:
    def tag(m):
        closing, name = m.group(1), m.group(2).lower()
        if name in _ASS_TAGS:
            return _ASS_TAGS[name][1 if closing else 0]
        return ""

    return "\\N".join(_ANGLE_TAG.sub(tag, line) for line in lines)


def write_ass(track, cfg: RenderConfig = RenderConfig()) -> str:
    """Render a styled track (see ``styling.StyledTrack``) as an ASS v4.00+ script.

    Solid phases use style ``Main``; fade phases are separate events in the
    translucent ``Fade`` style.  When every cue is centered the styles use
    middle-center alignment, otherwise bottom-center with per-event ``\\an5``
    overrides on the centered ones.
    """
    cues = list(track.cues)
    all_centered = bool(cues) and all(c.centered for c in cues)
    style_align = ALIGN_MIDDLE if all_centered else ALIGN_BOTTOM
    alpha = f"{cfg.fade_alpha:02X}"
    fmt = (
        "Format: Name, Fontname, Fontsize, PrimaryColour, SecondaryColour, OutlineColour, "
        "BackColour, Bold, Italic, Underline, StrikeOut, ScaleX, ScaleY, Spacing, Angle, "
        "BorderStyle, Outline, Shadow, Alignment, MarginL, MarginR, MarginV, Encoding"
    )

    def style(name, a):
        return (
            f"Style: {name},{cfg.font},{cfg.font_size},&H{a}FFFFFF,&H{a}0000FF,&H{a}000000,"
            f"&H{a}000000,0,0,0,0,100,100,0,0,1,2,0,{style_align},20,20,{cfg.margin_v},1"
        )

    out = [
        "[Script Info]",
        f"Title: {cfg.title}",
        "ScriptType: v4.00+",
        "WrapStyle: 0",
        "ScaledBorderAndShadow: yes",
        f"PlayResX: {cfg.play_res_x}",
        f"PlayResY: {cfg.play_res_y}",
        "",
        "[V4+ Styles]",
        fmt,
        style("Main", "00"),
        style("Fade", alpha),
        "",
        "[Events]",
        "Format: Layer, Start, End, Style, Name, MarginL, MarginR, MarginV, Effect, Text",
    ]
    for c in cues:
        override = ""
        if c.centered and style_align != ALIGN_MIDDLE:
            override = f"{{\\an{ALIGN_MIDDLE}}}"
        text = override + _ass_text(c.base.lines)
        out.append(f"Dialogue: 0,{_ass_time(c.base.start)},{_ass_time(c.base.end)},Main,,0,0,0,,{text}")
        if c.fade is not None:
            fs, fe = c.fade
            out.append(f"Dialogue: 0,{_ass_time(fs)},{_ass_time(fe)},Fade,,0,0,0,,{text}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# text units

_MARKUP = re.compile(r"<[^>]*>|\{[^}]*\}")
_WHITESPACE = regex.compile(r"\s+")
_GRAPHEME = regex.compile(r"\X")


def strip_markup(text: str) -> str:
    return _MARKUP.sub("", text)


def count_text_units(cue: SubtitleCue, mode: CountMode = CountMode.GRAPHEMES) -> int:
    """Amount of text in a cue: grapheme clusters (whitespace excluded) or words.

    Markup (``<...>`` tags and ``{...}`` override blocks) is stripped first.
    """
    text = strip_markup("\n".join(cue.lines))
    if mode is CountMode.WORDS:
        return len(text.split())
    return len(_GRAPHEME.findall(_WHITESPACE.sub("", text)))
