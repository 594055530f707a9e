"""Spectral and temporal signal analysis."""

from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class PowerSpectrum:
    frequencies: np.ndarray  # Hz, ascending from 0 to Nyquist
    power: np.ndarray        # one-sided magnitude-squared
    window_id: str = "rectangular"

    @property
    def bin_width(self):
        return float(self.frequencies[1] - self.frequencies[0])

    def to_csv(self, path):
        data = np.column_stack([self.frequencies, self.power])
        np.savetxt(path, data, delimiter=",", header="f_hz,power", comments="")


@dataclass(frozen=True)
class Envelope:
    times: np.ndarray
    magnitudes: np.ndarray
    normalized: bool = False


def power_spectrum(samples, dt, window="rectangular", pad_to=None) -> PowerSpectrum:
    """One-sided magnitude-squared spectrum, normalized so the power sums
    to the windowed-signal energy (Parseval)."""
    samples = np.asarray(samples, dtype=float)
    if samples.size < 16:
        raise DomainError("need at least 16 samples for a spectrum")
    if window == "rectangular":
        windowed = samples
    elif window == "hann":
        windowed = samples * np.hanning(samples.size)
    else:
        raise DomainError(f"unknown window {window!r}")

    n = samples.size if pad_to is None else max(int(pad_to), samples.size)
    spec = np.fft.rfft(windowed, n=n)
    power = np.abs(spec) ** 2 / n
    # fold the negative-frequency half into the interior bins
    power[1:] *= 2.0
    if n % 2 == 0:
        power[-1] /= 2.0
    freqs = np.fft.rfftfreq(n, d=dt)
    return PowerSpectrum(freqs, power, window)


def dominant_frequency(spec: PowerSpectrum, band=None) -> float:
    """Frequency of the strongest bin in the band, refined by 3-point
    parabolic interpolation on the power."""
    f = spec.frequencies
    p = spec.power
    if band is None:
        lo, hi = f[0], f[-1]
    else:
        lo, hi = band
    mask = (f >= lo) & (f <= hi)
    if not np.any(mask):
        raise DomainError("band contains no spectrum bins")
    idx = np.flatnonzero(mask)
    k = idx[np.argmax(p[idx])]
    if 0 < k < p.size - 1:
        y0, y1, y2 = p[k - 1], p[k], p[k + 1]
        denom = y0 - 2.0 * y1 + y2
        if denom != 0.0:
            delta = 0.5 * (y0 - y2) / denom
            if abs(delta) <= 1.0:
                return float(f[k] + delta * spec.bin_width)
    return float(f[k])


def envelope(samples, dt, normalized=False, t0=0.0) -> Envelope:
    """Envelope through the local maxima of |signal|, linearly
    interpolated onto the sample grid between the first and last peak."""
    samples = np.asarray(samples, dtype=float)
    mag = np.abs(samples)
    interior = mag[1:-1]
    peaks = np.flatnonzero((interior > mag[:-2]) & (interior >= mag[2:])) + 1
    peaks = peaks[mag[peaks] > 0]
    if peaks.size < 3:
        raise DomainError("signal has fewer than 3 local maxima of |signal|")
    t = t0 + np.arange(samples.size) * dt
    grid = t[peaks[0]:peaks[-1] + 1]
    env = np.interp(grid, t[peaks], mag[peaks])
    if normalized:
        env = env / env.max()
    return Envelope(grid, env, normalized)


def fit_relaxation(env: Envelope, fit_range=None) -> float:
    """Exponential decay time from a log-linear least-squares fit.

    The default fit range runs from the envelope start to the first time
    the magnitude drops to 10% of its maximum.
    """
    t = env.times
    m = env.magnitudes
    if fit_range is None:
        peak = m.max()
        below = np.flatnonzero(m <= 0.1 * peak)
        t_hi = t[below[0]] if below.size else t[-1]
        fit_range = (t[0], t_hi)
    lo, hi = fit_range
    mask = (t >= lo) & (t <= hi)
    if np.count_nonzero(mask) < 2:
        raise DomainError("fit range selects fewer than 2 envelope points")
    if np.any(m[mask] <= 0):
        raise DomainError("envelope must be strictly positive on the fit range")
    slope, _ = np.polyfit(t[mask], np.log(m[mask]), 1)
    if slope >= 0:
        raise DomainError("envelope does not decay over the fit range")
    return -1.0 / slope


def pearson_r2(a, b) -> float:
    """Squared Pearson correlation coefficient."""
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.size != b.size or a.size < 2:
        raise DomainError("series must have equal length >= 2")
    if np.std(a) == 0 or np.std(b) == 0:
        raise DomainError("series must have nonzero variance")
    r = np.corrcoef(a, b)[0, 1]
    return float(r * r)


def _peak_power_near(spec: PowerSpectrum, f: float, half_width_bins=1.5) -> float:
    df = spec.bin_width
    mask = np.abs(spec.frequencies - f) <= half_width_bins * df
    if not np.any(mask):
        raise DomainError(f"no spectrum bins within {half_width_bins} bins of {f:g} Hz")
    return float(spec.power[mask].max())


def harmonic_ratio(spec: PowerSpectrum, f0: float, k: int) -> float:
    """Power of the k-th harmonic relative to the fundamental, in dB."""
    if k < 1:
        raise DomainError("harmonic index must be >= 1")
    if k * f0 > spec.frequencies[-1]:
        raise DomainError(f"harmonic {k} at {k * f0:g} Hz is above Nyquist")
    p_fund = _peak_power_near(spec, f0)
    p_harm = _peak_power_near(spec, k * f0)
    if p_fund <= 0:
        raise DomainError("fundamental has zero power")
    if p_harm <= 0:
        return -np.inf
    return float(10.0 * np.log10(p_harm / p_fund))


def count_peaks(spec: PowerSpectrum, threshold_db=-40.0) -> int:
    """Count local spectral maxima above a dB threshold relative to the
    strongest bin."""
    p = spec.power
    thr = p.max() * 10.0 ** (threshold_db / 10.0)
    interior = p[1:-1]
    peaks = (interior > p[:-2]) & (interior >= p[2:]) & (interior >= thr)
    return int(np.count_nonzero(peaks))
