"""Score parsing, note-to-frequency mapping, and square-pulse encoding."""

from fractions import Fraction

import numpy as np
import pytest

from kmbubble import (BinarySequence, PressureSignal, encode_binary,
                      key_frequency, parse_score, render_pulse_train)
from kmbubble.errors import DomainError, ParseError
from kmbubble.score import note_to_key

GOOD_SCORE = """\
# a comment
tempo=120 beats_per_bar=4

A4 1
R 1/2
49 1/2
F#3 2
"""


def test_key_frequency_reference_points():
    assert key_frequency(49) == pytest.approx(440.0, rel=1e-12)
    assert key_frequency(40) == pytest.approx(261.6256, rel=1e-6)  # middle C
    assert key_frequency(88) == pytest.approx(4186.009, rel=1e-6)
    assert key_frequency(1) == pytest.approx(27.5, rel=1e-12)


def test_key_frequency_octave_doubles():
    for n in (1, 20, 49, 76):
        assert key_frequency(n + 12) == pytest.approx(2.0 * key_frequency(n),
                                                      rel=1e-12)


def test_key_frequency_rejects_out_of_range():
    for n in (0, 89, -3):
        with pytest.raises(DomainError):
            key_frequency(n)


def test_note_to_key():
    assert note_to_key("A4") == 49
    assert note_to_key("C4") == 40
    assert note_to_key("F#3") == 34
    assert note_to_key("A0") == 1
    assert note_to_key("C8") == 88
    assert note_to_key("b0") == 3  # case-insensitive letter


def test_note_to_key_rejects_bad_names():
    for name in ("H4", "A", "C#", "C0", "A9"):
        with pytest.raises(ParseError):
            note_to_key(name)


def test_parse_score_events_and_timing():
    score = parse_score(GOOD_SCORE)
    assert score.tempo_bpm == 120.0
    assert score.beats_per_bar == 4
    keys = [e.key_number for e in score.events]
    beats = [e.duration_beats for e in score.events]
    assert keys == [49, None, 49, 34]
    assert beats == [Fraction(1), Fraction(1, 2), Fraction(1, 2), Fraction(2)]
    assert score.seconds_per_beat == pytest.approx(0.5)
    assert score.duration_seconds == pytest.approx(2.0)


@pytest.mark.parametrize("text", [
    "",                                    # no header
    "A4 1",                                # event before header
    "tempo=120",                           # missing beats_per_bar
    "tempo=120 beats_per_bar=4",           # no events
    "tempo=abc beats_per_bar=4\nA4 1",     # non-numeric header
    "tempo=120 beats_per_bar=4\nA4",       # missing duration
    "tempo=120 beats_per_bar=4\nA4 0",     # zero duration
    "tempo=120 beats_per_bar=4\nA4 1/0",   # bad fraction
    "tempo=120 beats_per_bar=4\n99 1",     # key off the keyboard
    "tempo=120 beats_per_bar=4\nH2 1",     # bad note letter
])
def test_parse_score_rejects_malformed_input(text):
    with pytest.raises(ParseError):
        parse_score(text)


def test_parse_error_reports_line_number():
    with pytest.raises(ParseError, match="line 3"):
        parse_score("tempo=120 beats_per_bar=4\nA4 1\nH2 1")


def test_render_pulse_train_single_note():
    score = parse_score("tempo=60 beats_per_bar=4\nA4 1")
    dt = 1e-5
    sig = render_pulse_train(score, dt, duty=0.5, articulation=0.1)
    assert sig.duration_seconds == pytest.approx(1.0)
    assert set(np.unique(sig.samples)) <= {0.0, 1.0}
    # last 10% of the note is an articulation gap
    n = sig.samples.size
    assert np.all(sig.samples[int(0.905 * n):] == 0.0)
    # duty cycle: half of the sounding span is high
    high = sig.samples.sum() / n
    assert high == pytest.approx(0.5 * 0.9, abs=0.01)
    # square wave at the note frequency: dominant spacing of rising edges
    edges = np.flatnonzero(np.diff(sig.samples) > 0)
    period = np.median(np.diff(edges)) * dt
    assert 1.0 / period == pytest.approx(440.0, rel=0.01)


def test_render_pulse_train_negative_polarity_and_rest():
    score = parse_score("tempo=60 beats_per_bar=4\nR 1\nA4 1")
    sig = render_pulse_train(score, 1e-5, polarity=-1)
    n = sig.samples.size
    assert np.all(sig.samples[:n // 2] == 0.0)
    assert set(np.unique(sig.samples)) <= {0.0, -1.0}


def test_render_pulse_train_rejects_coarse_grid():
    score = parse_score("tempo=60 beats_per_bar=4\nC8 1")  # 4186 Hz
    with pytest.raises(DomainError, match="too coarse"):
        render_pulse_train(score, 1.0 / 5000.0)


def test_render_pulse_train_parameter_validation():
    score = parse_score("tempo=60 beats_per_bar=4\nA4 1")
    with pytest.raises(DomainError):
        render_pulse_train(score, 1e-5, polarity=2)
    with pytest.raises(DomainError):
        render_pulse_train(score, 1e-5, duty=1.0)
    with pytest.raises(DomainError):
        render_pulse_train(score, 1e-5, articulation=1.0)
    with pytest.raises(DomainError):
        render_pulse_train(score, 0.0)


def test_encode_binary_repeats_each_bit():
    seq = BinarySequence(np.array([1, 0, 1]), symbol_seconds=0.01)
    sig = encode_binary(seq, dt=0.001)
    assert sig.samples.size == 30
    np.testing.assert_array_equal(sig.samples[:10], 1.0)
    np.testing.assert_array_equal(sig.samples[10:20], 0.0)
    np.testing.assert_array_equal(sig.samples[20:], 1.0)
    assert sig.duration_seconds == pytest.approx(0.03)


def test_encode_binary_rejects_incommensurate_grid():
    seq = BinarySequence(np.array([1, 0]), symbol_seconds=0.0005)
    with pytest.raises(DomainError):
        encode_binary(seq, dt=0.002)  # slot shorter than one sample


def test_signal_and_sequence_validation():
    with pytest.raises(DomainError):
        PressureSignal(np.array([0.0, 1.5]), 1e-3)
    with pytest.raises(DomainError):
        PressureSignal(np.zeros(4), 0.0)
    with pytest.raises(DomainError):
        BinarySequence(np.array([0, 2]), 0.01)
    with pytest.raises(DomainError):
        BinarySequence(np.array([0, 1]), 0.0)
