"""WAV export, resampling, and normalization."""

import numpy as np
import pytest

from kmbubble import AudioBuffer, normalize, read_wav, resample, write_wav
from kmbubble.errors import DomainError


def test_wav_roundtrip_preserves_samples(tmp_path):
    rng = np.random.default_rng(0)
    samples = rng.uniform(-0.99, 0.99, 2048)
    buf = AudioBuffer(samples, 44100)
    path = tmp_path / "x.wav"
    write_wav(buf, path)
    back = read_wav(path)
    assert back.sample_rate == 44100
    assert back.samples.size == 2048
    # 16-bit quantization error bound
    np.testing.assert_allclose(back.samples, samples, atol=1.0 / 32767.0)


def test_wav_file_layout(tmp_path):
    path = tmp_path / "one.wav"
    write_wav(AudioBuffer(np.array([0.5]), 8000), path)
    raw = path.read_bytes()
    # 44-byte canonical header + one 16-bit frame
    assert len(raw) == 46
    assert raw[:4] == b"RIFF" and raw[8:12] == b"WAVE"
    assert int.from_bytes(raw[22:24], "little") == 1      # mono
    assert int.from_bytes(raw[24:28], "little") == 8000   # rate
    assert int.from_bytes(raw[34:36], "little") == 16     # bit depth


def test_wav_writes_are_deterministic(tmp_path):
    samples = np.sin(np.linspace(0.0, 20.0, 500))
    a, b = tmp_path / "a.wav", tmp_path / "b.wav"
    write_wav(AudioBuffer(samples, 22050), a)
    write_wav(AudioBuffer(samples, 22050), b)
    assert a.read_bytes() == b.read_bytes()


def test_read_wav_rejects_unsupported_formats(tmp_path):
    import wave
    path = tmp_path / "stereo.wav"
    with wave.open(str(path), "wb") as fh:
        fh.setnchannels(2)
        fh.setsampwidth(2)
        fh.setframerate(8000)
        fh.writeframes(b"\x00" * 8)
    with pytest.raises(DomainError):
        read_wav(path)


def test_resample_integer_decimation_averages_blocks():
    x = np.arange(12, dtype=float) / 12.0
    out = resample(x, dt_in=1.0 / 12.0, rate_out=4.0)  # ratio 3
    assert out.sample_rate == 4.0
    np.testing.assert_allclose(out.samples, np.array([1.0, 4.0, 7.0, 10.0]) / 12.0)


def test_resample_non_integer_ratio_interpolates():
    dt = 1e-3
    t = np.arange(1000) * dt
    x = np.sin(2.0 * np.pi * 5.0 * t)
    out = resample(x, dt, rate_out=441.0)
    t_out = np.arange(out.samples.size) / 441.0
    np.testing.assert_allclose(out.samples, np.sin(2.0 * np.pi * 5.0 * t_out),
                               atol=5e-3)


def test_resample_validation():
    with pytest.raises(DomainError):
        resample(np.array([]), 1e-3, 100.0)
    with pytest.raises(DomainError):
        resample(np.ones(10), 0.0, 100.0)
    with pytest.raises(DomainError):
        resample(np.ones(2), 1.0, 0.1)  # shorter than one output sample


def test_normalize_sets_the_peak():
    buf = AudioBuffer(np.array([0.1, -0.4, 0.2]), 8000)
    out = normalize(buf, peak=0.9)
    assert np.max(np.abs(out.samples)) == pytest.approx(0.9)
    assert out.samples[0] == pytest.approx(0.1 * 0.9 / 0.4)
    with pytest.raises(DomainError):
        normalize(AudioBuffer(np.zeros(4), 8000))
    with pytest.raises(DomainError):
        normalize(buf, peak=1.5)


def test_audio_buffer_validation():
    with pytest.raises(DomainError):
        AudioBuffer(np.array([1.2]), 44100)
    with pytest.raises(DomainError):
        AudioBuffer(np.zeros(4), 0.0)
    assert AudioBuffer(np.zeros(441), 441).duration_seconds == pytest.approx(1.0)
