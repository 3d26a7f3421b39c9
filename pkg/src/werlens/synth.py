"""Seeded synthetic corpora with known structure for tests and demos.

Each record gets a 10-word reference and hypotheses built by substituting a
known number of words with out-of-vocabulary tokens, so per-record WER is
exactly 10 times the substitution count.  A planted speaker gets one extra
substitution under model m1 (+10 WER points); a gain speaker gets three fewer
under model m2 (a large negative gap).  Audio, when requested, is a tone burst
over seeded noise with a known silent gap in half the records.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .corpus import encode_wav

SPEAKERS = ("FD1", "CAPCOM1", "NEIL", "BUZZ", "MSTC1")
VOCAB = (
    "alpha", "bravo", "charlie", "delta", "echo", "foxtrot", "golf", "hotel",
    "india", "juliett", "kilo", "lima", "mike", "november", "oscar", "papa",
    "quebec", "romeo", "sierra", "tango", "uniform", "victor", "whiskey",
    "xray", "yankee", "zulu",
)
MODELS = ("m1", "m2")
WORDS_PER_RECORD = 10
NOISE_AMPLITUDES = (0.003, 0.03, 0.15)


def _corrupt(words: list[str], n_subs: int, rng: np.random.Generator) -> str:
    out = list(words)
    for pos in rng.choice(len(out), size=min(n_subs, len(out)), replace=False):
        out[pos] = f"xq{pos}"  # never in VOCAB, so each swap costs exactly one edit
    return " ".join(out)


def _tone_freq(speaker: str) -> float:
    return 220.0 + 45.0 * (sum(speaker.encode()) % 7)


def _synth_signal(
    speaker: str, noise_amp: float, with_gap: bool, rng: np.random.Generator, sr: int
) -> np.ndarray:
    lead = int(0.15 * sr)
    seg = int(rng.uniform(0.35, 0.6) * sr)
    gap = int(rng.uniform(0.3, 0.5) * sr) if with_gap else 0
    tail = int(0.15 * sr)
    total = lead + seg + gap + seg + tail

    x = np.zeros(total)
    t = np.arange(seg) / sr
    tone = 0.4 * np.sin(2.0 * np.pi * _tone_freq(speaker) * t)
    x[lead : lead + seg] = tone
    x[lead + seg + gap : lead + seg + gap + seg] = tone
    x += noise_amp * rng.uniform(-1.0, 1.0, size=total)
    return np.clip(x, -1.0, 1.0)


def generate_corpus(
    out_dir: str | Path,
    n_records: int = 200,
    seed: int = 0,
    with_audio: bool = False,
    planted_speaker: str | None = None,
    gain_speaker: str | None = None,
    sample_rate: int = 8000,
) -> Path:
    """Write manifest.jsonl (plus wavs/ when with_audio) and return its path."""
    if n_records < 1:
        raise ValueError("n_records must be at least 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    wav_dir = out_dir / "wavs"
    if with_audio:
        wav_dir.mkdir(exist_ok=True)

    rng = np.random.default_rng(seed)
    lines: list[str] = []
    for i in range(n_records):
        rid = f"r{i:04d}"
        u = rng.uniform()
        if planted_speaker is not None and u < 0.2:
            speaker = planted_speaker
        elif gain_speaker is not None and u < 0.4:
            speaker = gain_speaker
        else:
            speaker = SPEAKERS[int(rng.integers(len(SPEAKERS)))]

        words = [VOCAB[int(j)] for j in rng.integers(len(VOCAB), size=WORDS_PER_RECORD)]
        base_subs = int(rng.integers(2, 5))
        m1_subs = base_subs + (1 if speaker == planted_speaker else 0)
        jitter = int(rng.choice((-1, 0, 1), p=(0.15, 0.7, 0.15)))
        m2_subs = base_subs + jitter - (3 if speaker == gain_speaker else 0)
        m2_subs = min(max(m2_subs, 0), WORDS_PER_RECORD)

        entry: dict = {
            "id": rid,
            "speaker": speaker,
            "reference": " ".join(words),
            "hypotheses": {
                "m1": _corrupt(words, m1_subs, rng),
                "m2": _corrupt(words, m2_subs, rng),
            },
        }
        if with_audio:
            noise_amp = NOISE_AMPLITUDES[i % len(NOISE_AMPLITUDES)]
            signal = _synth_signal(speaker, noise_amp, with_gap=i % 2 == 0, rng=rng, sr=sample_rate)
            wav_path = wav_dir / f"{rid}.wav"
            encode_wav(signal, sample_rate, wav_path, bits=16)
            entry["audio_path"] = f"wavs/{rid}.wav"
        else:
            tot_dur = float(rng.uniform(1.0, 10.0))
            trim_dur = tot_dur * float(rng.uniform(0.6, 1.0))
            entry["features"] = {
                "snr": float(rng.normal(20.0, 8.0)),
                "spectral_flatness": float(rng.uniform(0.05, 0.95)),
                "tot_dur": tot_dur,
                "trim_dur": trim_dur,
                "n_pauses": int(rng.integers(0, 4)),
                "n_words": WORDS_PER_RECORD,
                "speak_rate": WORDS_PER_RECORD / tot_dur,
                "speak_rate_trim": WORDS_PER_RECORD / trim_dur,
            }
        lines.append(json.dumps(entry, sort_keys=True))

    manifest = out_dir / "manifest.jsonl"
    manifest.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return manifest
