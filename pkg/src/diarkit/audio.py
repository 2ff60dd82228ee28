"""16-bit PCM mono WAV read/write on top of the stdlib wave module.

Float waveforms live in [-1, 1]; conversion to int16 rounds after
clipping, so writing the same array twice produces byte-identical files.
"""

from __future__ import annotations

import wave
from pathlib import Path

import numpy as np


def write_wav(path, waveform: np.ndarray, sample_rate: int) -> None:
    """Write a float waveform as 16-bit PCM mono."""
    pcm = np.round(np.clip(np.asarray(waveform, dtype=np.float64), -1.0, 1.0) * 32767.0)
    pcm = pcm.astype("<i2")
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(1)
        fh.setsampwidth(2)
        fh.setframerate(sample_rate)
        fh.writeframes(pcm.tobytes())


def read_wav(path) -> tuple[np.ndarray, int]:
    """Read a 16-bit PCM mono WAV into a float64 waveform in [-1, 1]."""
    path = Path(path)
    with wave.open(str(path), "rb") as fh:
        if fh.getnchannels() != 1 or fh.getsampwidth() != 2:
            raise ValueError(f"{path}: expected 16-bit mono PCM")
        sr = fh.getframerate()
        raw = fh.readframes(fh.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32767.0
    return samples, sr
