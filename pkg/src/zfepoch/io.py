"""WAV ingestion and epoch/score/response serialization."""

from __future__ import annotations

import csv
import json
import logging
import wave
from pathlib import Path
from typing import Sequence

import numpy as np

from .compare import MatchConfig, SimilarityScore
from .core import EpochSequence, FilterConfig, SampledSignal, ZfepochError
from .filters import FrequencyResponse

log = logging.getLogger(__name__)

_PCM16_SCALE = 32768.0


class NotWav(ZfepochError):
    """File is not a RIFF/WAVE container."""


class UnsupportedEncoding(ZfepochError):
    """WAV payload is not 16-bit PCM."""


class EmptyAudio(ZfepochError):
    """WAV file holds zero frames."""


class IoFailure(ZfepochError):
    """Underlying filesystem write failed."""


def read_wav(path) -> SampledSignal:
    """Decode a 16-bit PCM WAV file to floats in [-1, 1).

    Stereo files are accepted with a logged warning; channel 0 is used.
    Other encodings (compressed, non-16-bit) are rejected.
    """
    path = Path(path)
    with open(path, "rb") as fh:
        header = fh.read(12)
    if len(header) < 12 or header[:4] != b"RIFF" or header[8:12] != b"WAVE":
        raise NotWav(f"{path} is not a WAV file")
    try:
        with wave.open(str(path), "rb") as wav:
            sampwidth = wav.getsampwidth()
            channels = wav.getnchannels()
            framerate = wav.getframerate()
            nframes = wav.getnframes()
            frames = wav.readframes(nframes)
    except (wave.Error, EOFError) as exc:
        raise UnsupportedEncoding(f"{path}: {exc}") from exc
    if sampwidth != 2:
        raise UnsupportedEncoding(f"{path}: only 16-bit PCM supported, got {8 * sampwidth}-bit")
    if nframes == 0:
        raise EmptyAudio(f"{path} holds no audio frames")
    data = np.frombuffer(frames, dtype="<i2")
    if channels > 1:
        log.warning("%s has %d channels; using channel 0", path, channels)
        data = data[::channels]
    return SampledSignal(data.astype(np.float64) / _PCM16_SCALE, float(framerate))


def write_wav(signal: SampledSignal, path) -> None:
    """Write a signal as mono 16-bit PCM; samples are clipped to [-1, 1)."""
    quantized = np.clip(
        np.round(signal.samples * _PCM16_SCALE), -32768, 32767
    ).astype("<i2")
    try:
        with wave.open(str(path), "wb") as wav:
            wav.setnchannels(1)
            wav.setsampwidth(2)
            wav.setframerate(int(round(signal.sample_rate_hz)))
            wav.writeframes(quantized.tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def write_epochs_csv(epochs: EpochSequence, path) -> None:
    """One epoch time per line in seconds, 6 decimals, header `time_s`."""
    lines = ["time_s"] + [f"{t:.6f}" for t in epochs.times_s]
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def read_epochs_csv(path, source_sample_rate_hz: float = 16000.0) -> EpochSequence:
    """Parse an epoch CSV written by write_epochs_csv.

    The CSV carries no sample rate; the caller supplies one for the
    record (the times alone drive all comparisons).
    """
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if row]
    if not rows or rows[0][0] != "time_s":
        raise IoFailure(f"{path} is not an epoch CSV (missing time_s header)")
    times = np.array([float(row[0]) for row in rows[1:]])
    return EpochSequence(times, source_sample_rate_hz)


def write_epochs_json(epochs: EpochSequence, config: FilterConfig, path) -> None:
    """Epoch times plus the filter parameters that produced them."""
    payload = {
        "method": config.method,
        "r": config.r,
        "detrend_window_s": config.detrend_window_s,
        "detrend_passes": config.detrend_passes,
        "trim_s": config.trim_s,
        "preemphasis": config.preemphasis,
        "times_s": [round(float(t), 9) for t in epochs.times_s],
    }
    try:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def write_score_json(
    score: SimilarityScore, cfg: MatchConfig, lock_ids: Sequence[str], path
) -> None:
    """Similarity score as structured text."""
    payload = {
        "lock_ids": list(lock_ids),
        "per_lock_counts": list(score.per_lock_counts),
        "average": score.average,
        "delta12_count": score.delta12_count,
        "compared_pairs": score.compared_pairs,
        "epsilon_s": cfg.epsilon_s,
        "alignment": cfg.alignment,
    }
    try:
        Path(path).write_text(json.dumps(payload, indent=2) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def write_response_csv(response: FrequencyResponse, path) -> None:
    """Frequency response as CSV with columns omega, magnitude, phase."""
    lines = ["omega,magnitude,phase"]
    for w, m, p in zip(response.omega_rad, response.magnitude, response.phase_rad):
        lines.append(f"{w:.12g},{m:.12g},{p:.12g}")
    try:
        Path(path).write_text("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
