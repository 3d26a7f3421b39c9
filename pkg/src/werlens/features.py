"""Interpretable per-recording metadata: SNR, spectral flatness, durations, pauses, rates.

Everything here works on a fixed short-time analysis grid (default 25 ms Hann
windows with a 10 ms hop).  The noise floor is the mean power of the quietest
20% of frames, which makes SNR, trimming, and pause detection relative to the
recording's own level rather than to an absolute threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import AudioBuffer
from .metrics import normalize

DEFAULT_FRAME_MS = 25.0
DEFAULT_HOP_MS = 10.0
DEFAULT_OFFSET_DB = 10.0
DEFAULT_MIN_PAUSE_MS = 200.0

QUIET_FRACTION = 0.2
FLATNESS_EPS = 1e-10
POWER_EPS = 1e-12
SNR_DB_MIN = -10.0
SNR_DB_MAX = 60.0

NUMERIC_ATTRIBUTES = (
    "snr",
    "spectral_flatness",
    "tot_dur",
    "trim_dur",
    "n_pauses",
    "n_words",
    "speak_rate",
    "speak_rate_trim",
)
CATEGORICAL_ATTRIBUTES = ("speaker",)


@dataclass(frozen=True)
class FeatureVector:
    """The mineable metadata of one record."""

    snr: float
    spectral_flatness: float
    tot_dur: float
    trim_dur: float
    n_pauses: int
    n_words: int
    speak_rate: float
    speak_rate_trim: float
    speaker: str

    def __post_init__(self) -> None:
        numeric = [getattr(self, a) for a in NUMERIC_ATTRIBUTES]
        if not all(math.isfinite(v) for v in numeric):
            raise ValueError("feature values must be finite")
        if not 0.0 <= self.spectral_flatness <= 1.0:
            raise ValueError(f"spectral_flatness {self.spectral_flatness} outside [0, 1]")
        if not 0.0 < self.trim_dur <= self.tot_dur:
            raise ValueError(
                f"trim_dur {self.trim_dur} must satisfy 0 < trim_dur <= tot_dur {self.tot_dur}"
            )
        if self.n_pauses < 0 or self.n_words < 0:
            raise ValueError("counts must be non-negative")
        if self.n_words > 0 and self.speak_rate > self.speak_rate_trim:
            raise ValueError("speak_rate cannot exceed speak_rate_trim")

    @classmethod
    def from_mapping(cls, speaker: str, values: dict[str, float]) -> "FeatureVector":
        """Build from a precomputed feature mapping (e.g. a manifest's features)."""
        missing = [a for a in NUMERIC_ATTRIBUTES if a not in values]
        if missing:
            raise ValueError(f"precomputed features missing: {', '.join(missing)}")
        return cls(
            snr=float(values["snr"]),
            spectral_flatness=float(values["spectral_flatness"]),
            tot_dur=float(values["tot_dur"]),
            trim_dur=float(values["trim_dur"]),
            n_pauses=int(values["n_pauses"]),
            n_words=int(values["n_words"]),
            speak_rate=float(values["speak_rate"]),
            speak_rate_trim=float(values["speak_rate_trim"]),
            speaker=speaker,
        )


@dataclass(frozen=True, eq=False)
class FrameGrid:
    """Short-time power and power-spectrum view of one recording."""

    frame_ms: float
    hop_ms: float
    sample_rate: int
    n_samples: int
    win: int
    hop: int
    powers: np.ndarray  # per-frame mean squared amplitude, shape (n_frames,)
    spectra: np.ndarray  # squared magnitudes of Hann-windowed FFT bins 1..N/2

    @property
    def n_frames(self) -> int:
        return len(self.powers)

    @property
    def hop_s(self) -> float:
        return self.hop / self.sample_rate

    @property
    def tot_dur(self) -> float:
        return self.n_samples / self.sample_rate


def frame_signal(
    audio: AudioBuffer,
    frame_ms: float = DEFAULT_FRAME_MS,
    hop_ms: float = DEFAULT_HOP_MS,
) -> FrameGrid:
    """Split audio into overlapping frames with power and power spectrum.

    Frame count is 1 + floor((len - win) / hop); signals shorter than one
    window are zero-padded to a single frame.  The power spectrum excludes
    the DC bin.
    """
    if not frame_ms >= hop_ms > 0:
        raise ValueError("requires frame_ms >= hop_ms > 0")
    sr = audio.sample_rate
    win = max(1, int(round(sr * frame_ms / 1000.0)))
    hop = max(1, int(round(sr * hop_ms / 1000.0)))

    x = audio.samples
    n = len(x)
    if n >= win:
        n_frames = 1 + (n - win) // hop
    else:
        n_frames = 1
        x = np.concatenate([x, np.zeros(win - n)])
    idx = np.arange(win)[None, :] + hop * np.arange(n_frames)[:, None]
    frames = x[idx]

    powers = np.mean(frames * frames, axis=1)
    window = np.hanning(win)
    spectra = np.abs(np.fft.rfft(frames * window, axis=1))[:, 1:] ** 2
    return FrameGrid(
        frame_ms=frame_ms,
        hop_ms=hop_ms,
        sample_rate=sr,
        n_samples=n,
        win=win,
        hop=hop,
        powers=powers,
        spectra=spectra,
    )


def spectral_flatness(grid: FrameGrid, weighting: str = "mean") -> float:
    """Geometric-to-arithmetic spectral power ratio, averaged over frames.

    ``weighting="mean"`` averages frames uniformly so quiet regions count
    toward channel noisiness; ``"energy"`` weights frames by their power.
    """
    p = grid.spectra
    per_frame = np.exp(np.mean(np.log(p + FLATNESS_EPS), axis=1)) / (
        np.mean(p, axis=1) + FLATNESS_EPS
    )
    if weighting == "mean":
        value = float(np.mean(per_frame))
    elif weighting == "energy":
        w = grid.powers
        total = float(np.sum(w))
        value = float(np.sum(per_frame * w) / total) if total > 0 else float(np.mean(per_frame))
    else:
        raise ValueError(f"unknown flatness weighting {weighting!r}")
    return min(max(value, 0.0), 1.0)


def _noise_power(powers: np.ndarray) -> float:
    """Mean power of the quietest 20% of frames (at least one frame)."""
    k = max(1, int(len(powers) * QUIET_FRACTION + 1e-9))
    return float(np.mean(np.sort(powers)[:k]))


def estimate_snr(grid: FrameGrid) -> float:
    """Percentile-energy SNR estimate in dB, clamped to [-10, 60].

    Noise is the quietest-20% mean frame power; the remaining frames supply
    the active power.  Needs no voice activity model and is deterministic.
    """
    sorted_powers = np.sort(grid.powers)
    k = max(1, int(len(sorted_powers) * QUIET_FRACTION + 1e-9))
    noise = float(np.mean(sorted_powers[:k]))
    rest = sorted_powers[k:]
    active = float(np.mean(rest)) if len(rest) else noise
    ratio = max(active - noise, POWER_EPS) / max(noise, POWER_EPS)
    return min(max(10.0 * math.log10(ratio), SNR_DB_MIN), SNR_DB_MAX)


def trim_and_pauses(
    grid: FrameGrid,
    offset_db: float = DEFAULT_OFFSET_DB,
    min_pause_ms: float = DEFAULT_MIN_PAUSE_MS,
) -> tuple[float, int]:
    """Active-region duration and count of internal pauses.

    A frame is active when its power exceeds the noise floor by ``offset_db``
    decibels.  The trimmed span runs from the first to the last active frame
    (whole recording if nothing is active); a pause is a maximal inactive run
    of at least ``min_pause_ms`` strictly inside that span.
    """
    floor_db = 10.0 * math.log10(max(_noise_power(grid.powers), POWER_EPS))
    frame_db = 10.0 * np.log10(np.maximum(grid.powers, POWER_EPS))
    active = np.flatnonzero(frame_db > floor_db + offset_db)
    if len(active) == 0:
        return grid.tot_dur, 0

    hop_s = grid.hop_s
    start = active[0] * hop_s
    end = min((active[-1] + 1) * hop_s, grid.tot_dur)
    trim_dur = end - start

    min_pause_s = min_pause_ms / 1000.0
    gaps = np.diff(active) - 1
    n_pauses = int(np.sum(gaps * hop_s >= min_pause_s - 1e-12))
    return trim_dur, n_pauses


def transcript_features(reference: str, tot_dur: float, trim_dur: float) -> tuple[int, float, float]:
    """Word count and speaking rates over total and trimmed duration."""
    if not (tot_dur > 0 and trim_dur > 0):
        raise ValueError("durations must be positive")
    n_words = len(normalize(reference))
    return n_words, n_words / tot_dur, n_words / trim_dur


def extract_features(
    reference: str,
    speaker: str,
    audio: AudioBuffer,
    *,
    frame_ms: float = DEFAULT_FRAME_MS,
    hop_ms: float = DEFAULT_HOP_MS,
    offset_db: float = DEFAULT_OFFSET_DB,
    min_pause_ms: float = DEFAULT_MIN_PAUSE_MS,
    flatness_weighting: str = "mean",
) -> FeatureVector:
    """Compute the full FeatureVector for one record from its audio."""
    grid = frame_signal(audio, frame_ms=frame_ms, hop_ms=hop_ms)
    trim_dur, n_pauses = trim_and_pauses(grid, offset_db=offset_db, min_pause_ms=min_pause_ms)
    tot_dur = grid.tot_dur
    n_words, speak_rate, speak_rate_trim = transcript_features(reference, tot_dur, trim_dur)
    return FeatureVector(
        snr=estimate_snr(grid),
        spectral_flatness=spectral_flatness(grid, weighting=flatness_weighting),
        tot_dur=tot_dur,
        trim_dur=trim_dur,
        n_pauses=n_pauses,
        n_words=n_words,
        speak_rate=speak_rate,
        speak_rate_trim=speak_rate_trim,
        speaker=speaker,
    )
