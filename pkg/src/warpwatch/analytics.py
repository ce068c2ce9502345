"""Track and corpus statistics, fade extension, and logistic comprehension fits."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateData, EmptyCorpus, EmptyTrack, NonConvergence
from .subtitles import CountMode, SubtitleTrack, count_text_units
from .timeline import DEFAULT_GAP_MERGE_MS, compute_r, segment_timeline

__all__ = [
    "TrackStats",
    "CorpusStats",
    "LogisticFit",
    "track_stats",
    "corpus_stats",
    "fade_extension_factor",
    "logistic",
    "sse_and_gradient",
    "fit_logistic",
    "to_json",
]


@dataclass(frozen=True)
class TrackStats:
    r: float
    total_ms: int
    language_ms: int
    cue_count: int
    text_units: int
    required_rate: float
    per_cue_rate_mean: float
    per_cue_rate_std: float
    has_rates: bool


@dataclass(frozen=True)
class CorpusStats:
    n_tracks: int
    r_mean: float
    r_std: float
    rate_mean: float
    rate_std: float
    total_cues: int


def track_stats(
    track: SubtitleTrack,
    total: int,
    mode: CountMode = CountMode.GRAPHEMES,
    gap_merge: int = DEFAULT_GAP_MERGE_MS,
) -> TrackStats:
    """Non-language ratio and reading-rate demand of one subtitle track.

    ``required_rate`` is text units per minute of displayed subtitles; display
    time is summed per cue, so overlapping cues count their overlap twice.
    Rates are 0 and ``has_rates`` is False for a track without cues.
    """
    segs = segment_timeline(track, total, gap_merge)
    units = np.array([count_text_units(c, mode) for c in track.cues], dtype=float)
    durations = np.array([c.duration for c in track.cues], dtype=float)
    has_rates = len(track.cues) > 0
    if has_rates:
        required = 60_000.0 * units.sum() / durations.sum()
        per_cue = 60_000.0 * units / durations
        mean, std = float(per_cue.mean()), float(per_cue.std())
    else:
        required = mean = std = 0.0
    return TrackStats(
        r=compute_r(segs),
        total_ms=total,
        language_ms=segs.language_ms,
        cue_count=len(track.cues),
        text_units=int(units.sum()),
        required_rate=float(required),
        per_cue_rate_mean=mean,
        per_cue_rate_std=std,
        has_rates=has_rates,
    )


def corpus_stats(stats: Sequence[TrackStats]) -> CorpusStats:
    """Means and population standard deviations across tracks.

    Tracks without cues contribute to the r statistics but not to the rate
    statistics.
    """
    if not stats:
        raise EmptyCorpus("corpus_stats needs at least one track")
    r = np.array([s.r for s in stats])
    rates = np.array([s.required_rate for s in stats if s.has_rates])
    return CorpusStats(
        n_tracks=len(stats),
        r_mean=float(r.mean()),
        r_std=float(r.std()),
        rate_mean=float(rates.mean()) if rates.size else 0.0,
        rate_std=float(rates.std()) if rates.size else 0.0,
        total_cues=sum(s.cue_count for s in stats),
    )


def fade_extension_factor(track: SubtitleTrack, total: int) -> float:
    """Mean ratio of (solid + faded) display time to solid display time.

    Computed on source times, which is exact when both classes share one
    speed.  A cue overlapped by its successor has no fade and scores 1.
    """
    cues = track.cues
    if not cues:
        raise EmptyTrack("fade_extension_factor needs at least one cue")
    ratios = []
    for i, cue in enumerate(cues):
        nxt = cues[i + 1].start if i + 1 < len(cues) else total
        ratios.append((max(nxt, cue.end) - cue.start) / cue.duration)
    return math.fsum(ratios) / len(ratios)


# --------------------------------------------------------------------------
# logistic fit:  y = 1 / (1 + exp(a (x - b)))

@dataclass(frozen=True)
class LogisticFit:
    a: float
    b: float
    sse: float
    converged: bool = True
    iterations: int = 0

    def predict(self, x):
        return logistic(self.a, self.b, x)


def logistic(a: float, b: float, x):
    # 1/(1+e^u) == (1 - tanh(u/2)) / 2, which never overflows
    return 0.5 * (1.0 - np.tanh(0.5 * a * (np.asarray(x, dtype=float) - b)))


def _residuals_and_jacobian(a, b, x, y):
    t = np.tanh(0.5 * a * (x - b))
    f = 0.5 * (1.0 - t)
    slope = 0.25 * (1.0 - t * t)  # f (1 - f)
    jac = np.empty((x.size, 2))
    jac[:, 0] = -slope * (x - b)
    jac[:, 1] = slope * a
    return f - y, jac


def sse_and_gradient(a: float, b: float, x, y) -> tuple[float, np.ndarray]:
    """Sum of squared residuals and its analytic gradient with respect to (a, b)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    res, jac = _residuals_and_jacobian(a, b, x, y)
    return float(res @ res), 2.0 * (jac.T @ res)


def _levenberg_marquardt(x, y, a, b, max_iter, tol):
    center = 0.5 * (x.max() + x.min())
    reach = 1e3 * (x.max() - x.min())
    res, jac = _residuals_and_jacobian(a, b, x, y)
    sse = float(res @ res)
    lam = 1e-3
    converged = False
    last_step = math.inf
    it = 0
    for it in range(1, max_iter + 1):
        jtj = jac.T @ jac
        grad = jac.T @ res
        if 2.0 * np.linalg.norm(grad) < tol and it > 1 and last_step < tol:
            converged = True
            break
        damp = np.diag(np.maximum(np.diag(jtj), 1e-12))
        improved = False
        while lam < 1e20:
            try:
                step = np.linalg.solve(jtj + lam * damp, -grad)
            except np.linalg.LinAlgError:
                lam *= 10.0
                continue
            na, nb = a + step[0], b + step[1]
            nres, njac = _residuals_and_jacobian(na, nb, x, y)
            nsse = float(nres @ nres)
            if nsse < sse:
                a, b, res, jac, sse = na, nb, nres, njac, nsse
                lam = max(lam / 3.0, 1e-12)
                improved = True
                last_step = float(np.linalg.norm(step))
                break
            lam *= 4.0
        if abs(b - center) > reach:
            # midpoint ran off the data: the curve is flattening into a constant
            return a, b, sse, False, it
        if not improved:
            # no downhill step even with a vanishing step size: stationary to machine precision
            converged = True
            break
    else:
        grad = jac.T @ res
        converged = 2.0 * np.linalg.norm(grad) < tol and last_step < tol
    return a, b, sse, bool(converged), it


def _starting_points(x, y):
    span = float(x.max() - x.min())
    scale = 4.0 / span
    starts = []
    inner = (y > 0.02) & (y < 0.98)
    if inner.sum() >= 2 and np.ptp(x[inner]) > 0:
        # logit linearization: log(1/y - 1) = a x - a b
        slope, icept = np.polyfit(x[inner], np.log(1.0 / y[inner] - 1.0), 1)
        if slope != 0 and np.isfinite(slope):
            starts.append((float(slope), float(-icept / slope)))
    for b0 in np.quantile(x, [0.25, 0.5, 0.75]):
        for mult in (0.25, 1.0, 4.0):
            for sign in (1.0, -1.0):
                starts.append((sign * mult * scale, float(b0)))
    return starts


def _better(sse, ok, best) -> bool:
    # runs landing on the same minimum differ only by rounding; prefer a converged one
    tie = abs(sse - best.sse) <= 1e-12 * max(best.sse, 1e-300) + 1e-300
    if tie:
        return ok and not best.converged
    return sse < best.sse


def fit_logistic(points: Iterable[tuple[float, float]], *, max_iter: int = 500, tol: float = 1e-10) -> LogisticFit:
    """Least-squares fit of ``y = 1/(1 + exp(a(x - b)))``.

    Damped Gauss-Newton (Levenberg-Marquardt) from several starting points of
    both slope signs; the lowest-SSE result wins.  ``a > 0`` means y falls as
    x grows.  If the best run hits ``max_iter`` it is returned with
    ``converged=False`` and a ``NonConvergence`` warning.
    """
    pts = sorted((float(px), float(py)) for px, py in points)
    if len(pts) < 3:
        raise DegenerateData("need at least 3 points")
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise ValueError("points must be finite")
    if np.any(y < 0) or np.any(y > 1):
        raise ValueError("y values must lie in [0, 1]")
    if np.ptp(y) == 0:
        raise DegenerateData("all y values are identical")
    if np.ptp(x) == 0:
        raise DegenerateData("all x values are identical")

    best = None
    for a0, b0 in _starting_points(x, y):
        a, b, sse, ok, it = _levenberg_marquardt(x, y, a0, b0, max_iter, tol)
        if best is None or _better(sse, ok, best):
            best = LogisticFit(float(a), float(b), sse, ok, it)
    if not best.converged:
        warnings.warn(
            f"logistic fit did not converge in {max_iter} iterations; best SSE {best.sse:.3g}",
            NonConvergence,
            stacklevel=2,
        )
    return best


# --------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def to_json(obj) -> str:
    """Deterministic single-object JSON: field order kept, floats with 6 decimals."""
    body = ",".join(f'"{f.name}":{_fmt(getattr(obj, f.name))}' for f in fields(obj))
    return "{" + body + "}"
