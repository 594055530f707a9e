"""Conversion of simulated signals to 16-bit mono PCM WAV files."""

import wave
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

DEFAULT_RATE = 44100
DEFAULT_PEAK = 0.9


@dataclass(frozen=True)
class AudioBuffer:
    samples: np.ndarray  # floats in [-1, 1]
    sample_rate: float

    def __post_init__(self):
        if self.sample_rate <= 0:
            raise DomainError("sample_rate must be positive")
        if self.samples.size and np.max(np.abs(self.samples)) > 1.0 + 1e-9:
            raise DomainError("samples must lie in [-1, 1]")

    @property
    def duration_seconds(self):
        return self.samples.size / self.sample_rate


def resample(samples, dt_in: float, rate_out: float) -> AudioBuffer:
    """Resample a uniform signal: boxcar-average decimation for integer
    ratios, linear interpolation otherwise."""
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise DomainError("cannot resample an empty signal")
    if dt_in <= 0 or rate_out <= 0:
        raise DomainError("dt_in and rate_out must be positive")

    rate_in = 1.0 / dt_in
    ratio = rate_in / rate_out
    if abs(ratio - round(ratio)) < 1e-9 and round(ratio) >= 1:
        m = int(round(ratio))
        n_out = samples.size // m
        if n_out == 0:
            raise DomainError("signal shorter than one output sample")
        out = samples[:n_out * m].reshape(n_out, m).mean(axis=1)
    else:
        duration = samples.size * dt_in
        n_out = max(int(round(duration * rate_out)), 1)
        t_out = np.arange(n_out) / rate_out
        t_in = np.arange(samples.size) * dt_in
        out = np.interp(t_out, t_in, samples)
    return AudioBuffer(out, rate_out)


def normalize(buffer: AudioBuffer, peak: float = DEFAULT_PEAK) -> AudioBuffer:
    """Scale so the largest |sample| equals peak."""
    if not 0.0 < peak <= 1.0:
        raise DomainError("peak must be in (0, 1]")
    top = np.max(np.abs(buffer.samples)) if buffer.samples.size else 0.0
    if top == 0.0:
        raise DomainError("cannot normalize an all-zero buffer")
    return AudioBuffer(buffer.samples * (peak / top), buffer.sample_rate)


def write_wav(buffer: AudioBuffer, path):
    """Write mono 16-bit little-endian PCM."""
    pcm = np.clip(np.rint(buffer.samples * 32767.0), -32768, 32767).astype("<i2")
    try:
        with wave.open(str(path), "wb") as fh:
            fh.setnchannels(1)
            fh.setsampwidth(2)
            fh.setframerate(int(round(buffer.sample_rate)))
            fh.writeframes(pcm.tobytes())
    except OSError as exc:
        raise OSError(f"failed to write WAV {path}: {exc}") from exc


def read_wav(path) -> AudioBuffer:
    """Read a mono 16-bit PCM WAV back into floats in [-1, 1]."""
    with wave.open(str(path), "rb") as fh:
        if fh.getnchannels() != 1 or fh.getsampwidth() != 2:
            raise DomainError("only mono 16-bit PCM is supported")
        rate = fh.getframerate()
        raw = fh.readframes(fh.getnframes())
    samples = np.frombuffer(raw, dtype="<i2").astype(float) / 32767.0
    return AudioBuffer(np.clip(samples, -1.0, 1.0), rate)


def write_buffer_csv(buffer: AudioBuffer, path):
    t = np.arange(buffer.samples.size) / buffer.sample_rate
    np.savetxt(path, np.column_stack([t, buffer.samples]), delimiter=",",
               header="t_seconds,value", comments="")
