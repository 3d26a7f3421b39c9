"""Evaluation corpus handling: JSONL manifests and RIFF/WAVE audio decoding.

A manifest holds one JSON object per line with the fields ``id``, ``speaker``,
``reference`` and at least one of ``audio_path`` (a WAV file) or ``features``
(a precomputed feature mapping).  Hypothesis texts for any number of models
live in the optional ``hypotheses`` map keyed by model name, so several models
can be analysed against the same records without re-alignment.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

REQUIRED_FIELDS = ("id", "speaker", "reference")

# WAVE format tags accepted by the decoder.
_FORMAT_PCM = 0x0001
_FORMAT_IEEE_FLOAT = 0x0003
_FORMAT_EXTENSIBLE = 0xFFFE


class ManifestError(ValueError):
    """Raised for unreadable, malformed or inconsistent manifests."""


class WavError(ValueError):
    """Raised for WAV files the decoder does not accept."""


@dataclass(frozen=True)
class Record:
    """One evaluation recording with its reference and model hypotheses."""

    id: str
    speaker: str
    reference: str
    audio_path: str | None = None
    hypotheses: dict[str, str] = field(default_factory=dict)
    features: dict[str, float] | None = None

    def __post_init__(self) -> None:
        if not self.id:
            raise ValueError("record id must be a non-empty string")
        for model in self.hypotheses:
            if not model:
                raise ValueError(f"record {self.id!r}: empty model name in hypotheses")


@dataclass(frozen=True, eq=False)
class AudioBuffer:
    """Mono audio as float64 amplitudes in [-1, 1] at a known sample rate."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if len(self.samples) == 0:
            raise ValueError("audio buffer must contain at least one sample")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("audio buffer contains non-finite samples")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate


def load_manifest(path: str | Path) -> list[Record]:
    """Parse a JSONL manifest into records, preserving file order.

    Raises ManifestError on malformed JSON (with the line number), duplicate
    ids, or missing required fields.  Blank lines are skipped; an empty file
    yields an empty list.
    """
    path = Path(path)
    records: list[Record] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ManifestError(f"{path}: line {lineno}: malformed JSON: {exc}") from exc
            if not isinstance(obj, dict):
                raise ManifestError(f"{path}: line {lineno}: expected a JSON object")
            missing = [f for f in REQUIRED_FIELDS if f not in obj]
            if missing:
                raise ManifestError(
                    f"{path}: line {lineno}: missing required field(s): {', '.join(missing)}"
                )
            if "audio_path" not in obj and "features" not in obj:
                raise ManifestError(
                    f"{path}: line {lineno}: record needs 'audio_path' or 'features'"
                )
            rid = obj["id"]
            if not isinstance(rid, str) or not rid:
                raise ManifestError(f"{path}: line {lineno}: 'id' must be a non-empty string")
            if rid in seen:
                raise ManifestError(f"{path}: line {lineno}: duplicate id {rid!r}")
            seen.add(rid)
            features = obj.get("features")
            if features is not None:
                if not isinstance(features, dict):
                    raise ManifestError(f"{path}: line {lineno}: 'features' must be an object")
                features = {k: float(v) for k, v in features.items()}
            hypotheses = obj.get("hypotheses") or {}
            if not isinstance(hypotheses, dict):
                raise ManifestError(f"{path}: line {lineno}: 'hypotheses' must be an object")
            try:
                records.append(
                    Record(
                        id=rid,
                        speaker=str(obj["speaker"]),
                        reference=str(obj["reference"]),
                        audio_path=obj.get("audio_path"),
                        hypotheses={str(k): str(v) for k, v in hypotheses.items()},
                        features=features,
                    )
                )
            except ValueError as exc:
                raise ManifestError(f"{path}: line {lineno}: {exc}") from exc
    return records


def decode_wav(path: str | Path) -> AudioBuffer:
    """Decode a RIFF/WAVE file to a mono AudioBuffer.

    Accepts integer PCM (8/16/24/32-bit) and IEEE float 32-bit, mono or
    multi-channel.  Multi-channel audio is downmixed by per-sample channel
    average; integer samples are scaled by 1/2^(bits-1).
    """
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavError(f"{path}: not a RIFF/WAVE file")

    fmt: tuple[int, int, int, int] | None = None
    pcm: bytes | None = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = pos + 8
        if chunk_id == b"fmt ":
            if size < 16 or body + 16 > len(data):
                raise WavError(f"{path}: truncated fmt chunk")
            tag, channels, rate, _, _, bits = struct.unpack_from("<HHIIHH", data, body)
            if tag == _FORMAT_EXTENSIBLE and size >= 40 and body + 26 <= len(data):
                # Real format lives in the first two bytes of the SubFormat GUID.
                (tag,) = struct.unpack_from("<H", data, body + 24)
            fmt = (tag, channels, rate, bits)
        elif chunk_id == b"data":
            if body + size > len(data):
                raise WavError(f"{path}: truncated data chunk")
            pcm = data[body : body + size]
        pos = body + size + (size & 1)

    if fmt is None:
        raise WavError(f"{path}: missing fmt chunk")
    if pcm is None:
        raise WavError(f"{path}: missing data chunk")
    tag, channels, rate, bits = fmt
    if channels < 1 or rate <= 0:
        raise WavError(f"{path}: invalid fmt chunk (channels={channels}, rate={rate})")
    if tag == _FORMAT_PCM:
        if bits not in (8, 16, 24, 32):
            raise WavError(f"{path}: unsupported PCM bit depth {bits}")
    elif tag == _FORMAT_IEEE_FLOAT:
        if bits != 32:
            raise WavError(f"{path}: unsupported float bit depth {bits}")
    else:
        raise WavError(f"{path}: unsupported codec (format tag 0x{tag:04X})")

    frame_bytes = (bits // 8) * channels
    if len(pcm) % frame_bytes:
        raise WavError(f"{path}: truncated data chunk (partial sample frame)")
    n_frames = len(pcm) // frame_bytes
    if n_frames == 0:
        raise WavError(f"{path}: zero-length audio")

    if tag == _FORMAT_IEEE_FLOAT:
        samples = np.frombuffer(pcm, dtype="<f4").astype(np.float64)
        samples = np.clip(samples, -1.0, 1.0)
    elif bits == 8:
        samples = (np.frombuffer(pcm, dtype=np.uint8).astype(np.float64) - 128.0) / 128.0
    elif bits == 16:
        samples = np.frombuffer(pcm, dtype="<i2").astype(np.float64) / 32768.0
    elif bits == 24:
        raw = np.frombuffer(pcm, dtype=np.uint8).reshape(-1, 3).astype(np.uint32)
        vals = (raw[:, 0] << 8 | raw[:, 1] << 16 | raw[:, 2] << 24).astype(np.int32) >> 8
        samples = vals.astype(np.float64) / 8388608.0
    else:
        samples = np.frombuffer(pcm, dtype="<i4").astype(np.float64) / 2147483648.0

    if channels > 1:
        samples = samples.reshape(n_frames, channels).mean(axis=1)
    return AudioBuffer(samples=samples, sample_rate=rate)


def encode_wav(
    samples: np.ndarray,
    sample_rate: int,
    path: str | Path,
    *,
    bits: int = 16,
    ieee_float: bool = False,
) -> None:
    """Write mono samples in [-1, 1] as a little-endian RIFF/WAVE file."""
    x = np.clip(np.asarray(samples, dtype=np.float64), -1.0, 1.0)
    if len(x) == 0:
        raise ValueError("cannot encode zero-length audio")
    if ieee_float:
        tag, bits = _FORMAT_IEEE_FLOAT, 32
        payload = x.astype("<f4").tobytes()
    elif bits in (8, 16, 24, 32):
        tag = _FORMAT_PCM
        scale = 1 << (bits - 1)
        q = np.clip(np.rint(x * scale), -scale, scale - 1).astype(np.int64)
        if bits == 8:
            payload = (q + 128).astype(np.uint8).tobytes()
        elif bits == 16:
            payload = q.astype("<i2").tobytes()
        elif bits == 24:
            q32 = q.astype(np.int64) & 0xFFFFFF
            buf = np.empty((len(q32), 3), dtype=np.uint8)
            buf[:, 0] = q32 & 0xFF
            buf[:, 1] = (q32 >> 8) & 0xFF
            buf[:, 2] = (q32 >> 16) & 0xFF
            payload = buf.tobytes()
        else:
            payload = q.astype("<i4").tobytes()
    else:
        raise ValueError(f"unsupported bit depth {bits}")

    byte_rate = sample_rate * (bits // 8)
    fmt_chunk = struct.pack("<HHIIHH", tag, 1, sample_rate, byte_rate, bits // 8, bits)
    body = (
        b"WAVE"
        + b"fmt "
        + struct.pack("<I", len(fmt_chunk))
        + fmt_chunk
        + b"data"
        + struct.pack("<I", len(payload))
        + payload
        + (b"\x00" if len(payload) & 1 else b"")
    )
    Path(path).write_bytes(b"RIFF" + struct.pack("<I", len(body)) + body)
