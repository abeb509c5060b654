"""Offline analysis of recorded segments plus a seeded benchmark generator.

Feature extraction summarizes each pattern's raw values with nine plain
statistics; the variance tools contrast recorded segments against fixed
sliding windows of the same average length to show what threshold-free
windowing would have stored instead.  The synthetic generator produces a
two-channel stream of stepped saw/sine bursts between near-zero stretches,
built so the default noise level leaves the discretized paths stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

FEATURE_NAMES = (
    "mean",
    "variance",
    "skew",
    "kurtosis",
    "minimum",
    "maximum",
    "median",
    "p25",
    "p75",
)


@dataclass(frozen=True)
class PatternFeatures:
    """Nine-number summary of a pattern's raw values.

    Variance is the population variance; skew and kurtosis are the
    standardized third and fourth central moments (kurtosis as excess), both
    defined as 0 for constant input; percentiles interpolate linearly.
    """

    mean: float
    variance: float
    skew: float
    kurtosis: float
    minimum: float
    maximum: float
    median: float
    p25: float
    p75: float

    def as_tuple(self) -> Tuple[float, ...]:
        return tuple(getattr(self, name) for name in FEATURE_NAMES)


def extract_features(values: np.ndarray) -> PatternFeatures:
    """Compute the nine features over all values (channels flattened)."""
    x = np.asarray(values, dtype=np.float64).ravel()
    if x.size == 0:
        raise ValueError("cannot extract features from an empty segment")
    mean = float(np.mean(x))
    centered = x - mean
    variance = float(np.mean(centered**2))
    if variance == 0.0:
        skew = kurtosis = 0.0
    else:
        skew = float(np.mean(centered**3) / variance**1.5)
        kurtosis = float(np.mean(centered**4) / variance**2 - 3.0)
    p25, median, p75 = (float(q) for q in np.percentile(x, [25.0, 50.0, 75.0]))
    return PatternFeatures(
        mean=mean,
        variance=variance,
        skew=skew,
        kurtosis=kurtosis,
        minimum=float(np.min(x)),
        maximum=float(np.max(x)),
        median=median,
        p25=p25,
        p75=p75,
    )


def segment_variance(values: np.ndarray) -> float:
    """Population variance of a segment, averaged over channels."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    return float(np.mean(np.var(x, axis=0)))


def sliding_window_variances(
    series: np.ndarray, window_length: int, overlap: float = 0.5
) -> np.ndarray:
    """Per-window variances over a fixed-length sliding window.

    Windows advance by ceil(window_length * (1 - overlap)) samples; a
    trailing partial window is dropped.
    """
    if window_length < 1:
        raise ValueError(f"window_length must be >= 1, got {window_length}")
    if not 0.0 <= overlap < 1.0:
        raise ValueError(f"overlap must be in [0, 1), got {overlap}")
    x = np.asarray(series, dtype=np.float64)
    if x.ndim == 1:
        x = x[:, None]
    n = x.shape[0]
    stride = math.ceil(window_length * (1.0 - overlap))
    if n < window_length:
        return np.empty(0, dtype=np.float64)
    starts = range(0, n - window_length + 1, stride)
    return np.array(
        [float(np.mean(np.var(x[s : s + window_length], axis=0))) for s in starts]
    )


@dataclass(frozen=True)
class FiveNumberSummary:
    """Boxplot numbers: Tukey whiskers around the quartiles."""

    lower_whisker: float
    p25: float
    median: float
    p75: float
    upper_whisker: float

    @classmethod
    def from_values(cls, values: Sequence[float]) -> "FiveNumberSummary":
        x = np.asarray(values, dtype=np.float64)
        if x.size == 0:
            raise ValueError("cannot summarize an empty value list")
        p25, median, p75 = (float(q) for q in np.percentile(x, [25.0, 50.0, 75.0]))
        iqr = p75 - p25
        inside = x[(x >= p25 - 1.5 * iqr) & (x <= p75 + 1.5 * iqr)]
        return cls(
            lower_whisker=float(inside.min()),
            p25=p25,
            median=median,
            p75=p75,
            upper_whisker=float(inside.max()),
        )


@dataclass(frozen=True)
class VarianceComparison:
    """Recorded-segment variances vs same-length sliding-window variances."""

    window_length: int
    db_variances: Tuple[float, ...]
    window_variances: Tuple[float, ...]

    @property
    def db_summary(self) -> FiveNumberSummary:
        return FiveNumberSummary.from_values(self.db_variances)

    @property
    def window_summary(self) -> FiveNumberSummary:
        return FiveNumberSummary.from_values(self.window_variances)


def compare_variances(
    segments: Sequence[np.ndarray],
    series: np.ndarray,
    overlap: float = 0.5,
) -> VarianceComparison:
    """Contrast segment variances with sliding windows of their mean length.

    The window length is the rounded mean segment length, so the comparison
    asks: had we stored fixed windows instead of detected segments, what
    variance profile would the archive have?
    """
    if not segments:
        raise ValueError("need at least one segment to compare")
    lengths = [np.asarray(seg).shape[0] for seg in segments]
    window_length = max(1, round(float(np.mean(lengths))))
    window_vars = sliding_window_variances(series, window_length, overlap)
    if window_vars.size == 0:
        raise ValueError(
            f"series ({np.asarray(series).shape[0]} samples) is shorter than "
            f"the {window_length}-sample comparison window"
        )
    return VarianceComparison(
        window_length=window_length,
        db_variances=tuple(segment_variance(seg) for seg in segments),
        window_variances=tuple(float(v) for v in window_vars),
    )


# --- synthetic benchmark stream ---------------------------------------------

_SAW = "saw"
_SINE = "sine"
# Base waveforms swing +-1.4 * amplitude so that both default amplitude
# options land >= 5 noise sigmas away from the +-0.5 breakpoints and their
# hysteresis margins; pattern identity then shows up in the bin dwell
# durations, exactly as it would for continuous ramps.
_BASE_SWING = 1.4


def _saw_plateaus(amplitude: float, period: int) -> List[Tuple[float, int]]:
    """Stepped rising saw: low, zero, high dwells from ramp crossing times."""
    peak = _BASE_SWING * amplitude
    if peak <= 0.5:
        raise ValueError(f"amplitude {amplitude} never leaves the middle bin")
    outer = (peak - 0.5) / (2.0 * peak)
    low = round(outer * period)
    mid = round(period / (2.0 * peak))
    high = period - low - mid
    plateaus = [(-peak, low), (0.0, mid), (peak, high)]
    if any(d < 1 for _, d in plateaus):
        raise ValueError(f"period {period} too short for amplitude {amplitude}")
    return plateaus


def _sine_plateaus(amplitude: float, period: int) -> List[Tuple[float, int]]:
    """Stepped sine: zero, high, zero, low dwells from sine crossing times."""
    peak = _BASE_SWING * amplitude
    if peak <= 0.5:
        raise ValueError(f"amplitude {amplitude} never leaves the middle bin")
    zero_frac = 2.0 * math.asin(0.5 / peak) / (2.0 * math.pi)
    extreme_frac = (math.pi - 2.0 * math.asin(0.5 / peak)) / (2.0 * math.pi)
    z = round(zero_frac * period)
    e = round(extreme_frac * period)
    plateaus = [(0.0, z), (peak, e), (0.0, z), (-peak, period - 2 * z - e)]
    if any(d < 1 for _, d in plateaus):
        raise ValueError(f"period {period} too short for amplitude {amplitude}")
    return plateaus


@dataclass(frozen=True)
class SyntheticSpec:
    """Geometry of the benchmark stream; defaults match the reference tests.

    Four burst types ({saw, sine} x amplitudes) alternate between near-zero
    gaps; channel 2 mirrors channel 1 so both channels carry signal.  Faster
    periods for the smaller amplitude keep every bin dwell inside a stable
    log-copy band, which makes each type reduce to one fixed symbol path.
    With cluster_size set, bursts arrive in clusters split by much longer
    gaps, giving the irregular pacing the variance comparison needs.
    """

    n_patterns: int = 4
    amplitudes: Tuple[float, float] = (1.0, 0.6)
    noise_sigma: float = 0.05
    bursts_per_pattern: Union[int, Tuple[int, ...]] = 10
    burst_len: int = 200
    gap_len: int = 600
    cluster_size: Optional[int] = None
    cluster_gap_len: int = 30000

    def __post_init__(self) -> None:
        if not 1 <= self.n_patterns <= 2 * len(self.amplitudes):
            raise ValueError(
                f"n_patterns must be in [1, {2 * len(self.amplitudes)}]"
            )
        if self.noise_sigma < 0:
            raise ValueError("noise_sigma must be >= 0")
        if self.burst_len < 20 or self.gap_len < 1:
            raise ValueError("burst_len must be >= 20 and gap_len >= 1")

    def burst_counts(self) -> Tuple[int, ...]:
        counts = self.bursts_per_pattern
        if isinstance(counts, int):
            return (counts,) * self.n_patterns
        counts = tuple(int(c) for c in counts)
        if len(counts) != self.n_patterns:
            raise ValueError(
                f"bursts_per_pattern needs {self.n_patterns} entries, got {len(counts)}"
            )
        return counts

    def pattern_types(self) -> List[Tuple[str, float, int]]:
        """(waveform, amplitude, period) per pattern, first amplitude first."""
        types: List[Tuple[str, float, int]] = []
        for i, amplitude in enumerate(self.amplitudes):
            # Half vs a fifth of the burst keeps the two amplitude options'
            # dwells in different ceil-log bands under the default log base.
            period = self.burst_len // (2 if i == 0 else 5)
            types.append((_SAW, amplitude, period))
            types.append((_SINE, amplitude, period))
        return types[: self.n_patterns]


def _burst_channel(waveform: str, amplitude: float, period: int, burst_len: int) -> np.ndarray:
    plateaus = (
        _saw_plateaus(amplitude, period)
        if waveform == _SAW
        else _sine_plateaus(amplitude, period)
    )
    one = np.concatenate([np.full(d, level) for level, d in plateaus])
    reps = burst_len // period
    if reps < 1:
        raise ValueError(f"burst_len {burst_len} shorter than period {period}")
    burst = np.tile(one, reps)
    pad = burst_len - len(burst)
    if pad:
        burst = np.concatenate([burst, np.zeros(pad)])
    return burst


def generate_synthetic(
    seed: int, spec: Optional[SyntheticSpec] = None, **overrides
) -> Tuple[np.ndarray, np.ndarray]:
    """Render the benchmark stream; returns (t, values[n, 2]).

    Pass a SyntheticSpec or its fields as keywords.  The burst order is a
    seeded shuffle and the Gaussian noise is seeded, so equal (seed, spec)
    pairs produce identical arrays.
    """
    if spec is None:
        spec = SyntheticSpec(**overrides)
    elif overrides:
        raise TypeError("pass either a SyntheticSpec or keyword fields, not both")
    rng = np.random.default_rng(seed)
    types = spec.pattern_types()
    schedule: List[int] = []
    for pattern, count in enumerate(spec.burst_counts()):
        schedule.extend([pattern] * count)
    rng.shuffle(schedule)

    big_gap = spec.cluster_gap_len if spec.cluster_size else spec.gap_len
    pieces: List[np.ndarray] = [np.zeros(big_gap)]
    for i, pattern in enumerate(schedule):
        waveform, amplitude, period = types[pattern]
        pieces.append(_burst_channel(waveform, amplitude, period, spec.burst_len))
        end_of_cluster = (
            spec.cluster_size is not None and (i + 1) % spec.cluster_size == 0
        )
        if i == len(schedule) - 1 or end_of_cluster:
            pieces.append(np.zeros(big_gap))
        else:
            pieces.append(np.zeros(spec.gap_len))
    ch1 = np.concatenate(pieces)
    values = np.stack([ch1, -ch1], axis=1)
    if spec.noise_sigma > 0:
        values = values + rng.normal(0.0, spec.noise_sigma, values.shape)
    t = np.arange(len(ch1), dtype=np.float64)
    return t, values
