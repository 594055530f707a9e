"""Score parsing and square-pulse pressure encoding.

A score file is UTF-8 text: one header line of key=value pairs
(tempo, beats_per_bar), then one event per line - a note name like
"F#3", a raw piano key number, or "R" for a rest, followed by the
duration in beats (rationals such as 1/2 are accepted). Lines that are
empty or start with '#' are ignored.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import DomainError, ParseError

_NOTE_OFFSETS = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}


@dataclass(frozen=True)
class NoteEvent:
    key_number: Optional[int]  # None marks a rest
    duration_beats: Fraction

    def __post_init__(self):
        if self.duration_beats <= 0:
            raise DomainError("duration_beats must be positive")
        if self.key_number is not None and not 1 <= self.key_number <= 88:
            raise DomainError(f"key_number {self.key_number} outside 1..88")

    @property
    def is_rest(self):
        return self.key_number is None


@dataclass(frozen=True)
class Score:
    tempo_bpm: float
    beats_per_bar: int
    events: tuple

    def __post_init__(self):
        if self.tempo_bpm <= 0:
            raise DomainError("tempo_bpm must be positive")
        if self.beats_per_bar < 1:
            raise DomainError("beats_per_bar must be >= 1")
        if not self.events:
            raise DomainError("score has no events")

    @property
    def seconds_per_beat(self):
        return 60.0 / self.tempo_bpm

    @property
    def duration_seconds(self):
        return float(sum(e.duration_beats for e in self.events)) * self.seconds_per_beat


@dataclass(frozen=True)
class PressureSignal:
    """Sampled dimensionless forcing P_a in [-1, 1] on a uniform grid."""

    samples: np.ndarray
    dt_seconds: float
    amplitude_scale: float = 0.0  # Pa; metadata for the forcing measure

    def __post_init__(self):
        if self.dt_seconds <= 0:
            raise DomainError("dt_seconds must be positive")
        if self.samples.size and np.max(np.abs(self.samples)) > 1.0 + 1e-12:
            raise DomainError("samples must lie in [-1, 1]")

    @property
    def duration_seconds(self):
        return self.samples.size * self.dt_seconds

    @property
    def times(self):
        return np.arange(self.samples.size) * self.dt_seconds


@dataclass(frozen=True)
class BinarySequence:
    bits: np.ndarray
    symbol_seconds: float

    def __post_init__(self):
        if self.symbol_seconds <= 0:
            raise DomainError("symbol_seconds must be positive")
        bits = np.asarray(self.bits)
        if bits.size and not np.all((bits == 0) | (bits == 1)):
            raise DomainError("bits must be 0 or 1")


def key_frequency(n: int) -> float:
    """Frequency of the n-th piano key, 440 Hz at key 49."""
    if not 1 <= n <= 88:
        raise DomainError(f"piano key {n} outside 1..88")
    return 2.0 ** ((n - 49) / 12.0) * 440.0


def note_to_key(name: str) -> int:
    """Map a note name like 'A4' or 'F#3' to its piano key number."""
    base = name[0].upper()
    if base not in _NOTE_OFFSETS:
        raise ParseError(f"unknown note letter in {name!r}")
    rest = name[1:]
    sharp = 0
    if rest.startswith("#"):
        sharp = 1
        rest = rest[1:]
    try:
        octave = int(rest)
    except ValueError:
        raise ParseError(f"bad octave in note {name!r}") from None
    n = 12 * octave - 8 + _NOTE_OFFSETS[base] + sharp
    if not 1 <= n <= 88:
        raise ParseError(f"note {name!r} maps to key {n}, outside the keyboard")
    return n


def _parse_event(token: str, line_no: int) -> Optional[int]:
    if token.upper() == "R":
        return None
    if token.isdigit():
        key = int(token)
        if not 1 <= key <= 88:
            raise ParseError(f"line {line_no}: key number {key} outside 1..88")
        return key
    try:
        return note_to_key(token)
    except ParseError as exc:
        raise ParseError(f"line {line_no}: {exc}") from None


def parse_score(text: str) -> Score:
    """Parse score text into a Score; raises ParseError with line numbers."""
    lines = text.splitlines()
    header = None
    events = []
    for line_no, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if header is None:
            header = {}
            for pair in line.split():
                if "=" not in pair:
                    raise ParseError(f"line {line_no}: expected key=value, got {pair!r}")
                key, _, value = pair.partition("=")
                header[key] = value
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {line_no}: expected '<note> <beats>', got {line!r}")
        key = _parse_event(parts[0], line_no)
        try:
            beats = Fraction(parts[1])
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"line {line_no}: bad duration {parts[1]!r}") from None
        if beats <= 0:
            raise ParseError(f"line {line_no}: duration must be positive")
        events.append(NoteEvent(key, beats))

    if header is None:
        raise ParseError("empty score: no header line")
    try:
        tempo = float(header["tempo"])
        beats_per_bar = int(header["beats_per_bar"])
    except KeyError as exc:
        raise ParseError(f"header is missing {exc.args[0]}") from None
    except ValueError:
        raise ParseError("header values must be numeric") from None
    if not events:
        raise ParseError("score has no events")
    return Score(tempo, beats_per_bar, tuple(events))


def render_pulse_train(score: Score, dt: float, polarity: int = 1,
                       duty: float = 0.5, articulation: float = 0.1,
                       amplitude_scale: float = 0.0) -> PressureSignal:
    """Encode a score as a square-pulse forcing signal.

    Each note occupies duration_beats * 60/tempo seconds; within the
    sounding fraction (1 - articulation) of that span the signal is a
    square wave at the note's key frequency taking values
    {polarity, 0} with the given duty cycle. Rests and articulation
    gaps are zero.
    """
    if polarity not in (1, -1):
        raise DomainError("polarity must be +1 or -1")
    if not 0.0 < duty < 1.0:
        raise DomainError("duty must be in (0, 1)")
    if not 0.0 <= articulation < 1.0:
        raise DomainError("articulation must be in [0, 1)")
    if dt <= 0:
        raise DomainError("dt must be positive")
    for event in score.events:
        if event.is_rest:
            continue
        f = key_frequency(event.key_number)
        if dt >= 1.0 / (2.0 * f):
            raise DomainError(
                f"dt={dt:g} s is too coarse for key {event.key_number} at {f:.1f} Hz")

    spb = score.seconds_per_beat
    total = score.duration_seconds
    n_total = int(round(total / dt))
    samples = np.zeros(n_total)

    t_cursor = 0.0
    for event in score.events:
        dur = float(event.duration_beats) * spb
        i0 = int(round(t_cursor / dt))
        i1 = int(round((t_cursor + dur) / dt))
        t_cursor += dur
        if event.is_rest or i1 <= i0:
            continue
        f = key_frequency(event.key_number)
        t_local = (np.arange(i0, min(i1, n_total)) - i0) * dt
        sounding = t_local < (1.0 - articulation) * dur
        phase = np.mod(t_local * f, 1.0)
        samples[i0:min(i1, n_total)] = np.where(sounding & (phase < duty), polarity, 0)

    return PressureSignal(samples, dt, amplitude_scale)


def encode_binary(seq: BinarySequence, dt: float,
                  amplitude_scale: float = 0.0) -> PressureSignal:
    """Encode bits as unit-height square pulses, one symbol slot per bit."""
    bits = np.asarray(seq.bits, dtype=float)
    if bits.size == 0:
        raise DomainError("empty bit sequence")
    if dt <= 0:
        raise DomainError("dt must be positive")
    n_slot = int(round(seq.symbol_seconds / dt))
    if n_slot < 1 or abs(n_slot * dt - seq.symbol_seconds) > dt:
        raise DomainError("dt must divide symbol_seconds to within one sample")
    return PressureSignal(np.repeat(bits, n_slot), dt, amplitude_scale)


def write_signal_csv(signal: PressureSignal, path):
    """Export a PressureSignal as CSV with columns t_seconds, p_a."""
    data = np.column_stack([signal.times, signal.samples])
    np.savetxt(path, data, delimiter=",", header="t_seconds,p_a", comments="")
