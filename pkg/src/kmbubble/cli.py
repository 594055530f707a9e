"""Command-line interface.

Subcommands: render, step-response, spectrum, memory-test. Each command
writes its artifacts plus a manifest.txt (inputs, config hash, outputs)
into the output directory and exits 0 only if everything was written.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analysis, audio, experiments, reservoir, score as score_mod
from .config import config_hash, load_config
from .errors import CollapseError, DomainError, ParseError, SingularityError


def _common_flags(parser):
    parser.add_argument("--config", type=Path, default=None,
                        help="INI config file (defaults are built in)")
    parser.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory")
    parser.add_argument("--seed", type=int, default=None,
                        help="override reservoir.seed")
    parser.add_argument("--set", dest="overrides", action="append", default=[],
                        metavar="SECTION.KEY=VALUE", help="config override")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="kmbubble",
        description="Acoustically driven bubble: audio synthesis and "
                    "reservoir-computing benchmarks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="score -> forcing -> bubble -> WAV")
    p.add_argument("score", type=Path, help="path to a .score file")
    _common_flags(p)

    p = sub.add_parser("step-response", help="single-pulse experiments")
    p.add_argument("--amplitudes", default="20000,-20000",
                   help="comma list of signed pulse amplitudes in Pa")
    _common_flags(p)

    p = sub.add_parser("spectrum", help="power spectrum of a WAV or CSV signal")
    p.add_argument("input", type=Path, help=".wav file or t,value CSV")
    p.add_argument("--window", choices=("rectangular", "hann"), default="hann")
    _common_flags(p)

    p = sub.add_parser("memory-test", help="STM/PC memory-capacity benchmark")
    _common_flags(p)
    return parser


def _resolve_config(args):
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"reservoir.seed={args.seed}")
    return load_config(args.config, overrides)


def _write_manifest(out_dir, command, inputs, cfg, outputs):
    lines = [f"command: {command}"]
    lines += [f"input: {i}" for i in inputs]
    lines.append(f"config_hash: {config_hash(cfg)}")
    lines += [f"output: {o.name}" for o in outputs]
    path = out_dir / "manifest.txt"
    path.write_text("\n".join(lines) + "\n")
    return path


def cmd_render(args):
    cfg = _resolve_config(args)
    parsed = score_mod.parse_score(args.score.read_text())
    result = experiments.render_melody(parsed, cfg)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)

    rate = cfg["audio"]["rate"]
    peak = cfg["audio"]["peak"]
    # pre-scale to unit peak: the raw signals are not audio-range floats
    def to_audio(samples, dt):
        top = np.max(np.abs(samples))
        if top == 0.0:
            raise DomainError("signal is silent; nothing to render")
        return audio.normalize(audio.resample(samples / top, dt, rate), peak)

    melody = to_audio(result.forcing.samples, result.forcing.dt_seconds)
    response = to_audio(result.trajectory.p_scat, result.trajectory.dt_seconds)

    outputs = []
    for name, writer in (
            ("melody.wav", lambda p: audio.write_wav(melody, p)),
            ("response.wav", lambda p: audio.write_wav(response, p)),
            ("input_spectrum.csv", result.input_spectrum.to_csv),
            ("output_spectrum.csv", result.output_spectrum.to_csv),
            ("trajectory.csv", lambda p: result.trajectory.to_csv(
                p, cfg["solver"]["csv_decimate"]))):
        path = out / name
        writer(path)
        outputs.append(path)
    outputs.append(_write_manifest(out, "render", [args.score], cfg, outputs))

    print(f"duration: {result.forcing.duration_seconds:.3f} s")
    print(f"spectral peaks above -40 dB: input={result.input_peaks} "
          f"output={result.output_peaks}")
    return 0


def cmd_step(args):
    cfg = _resolve_config(args)
    try:
        amplitudes = [float(a) for a in args.amplitudes.split(",") if a.strip()]
    except ValueError:
        raise ParseError(f"bad --amplitudes list: {args.amplitudes!r}") from None
    if not amplitudes:
        raise ParseError("--amplitudes is empty")

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    _, _, _, groups = experiments.physics_from_config(cfg)
    f_free, relax_free = experiments.free_decay_metrics(cfg, groups)

    outputs = []
    rows = ["alpha_pa,freq_in_hz,freq_post_hz,relax_in_s,relax_post_s,"
            "freq_free_hz,relax_free_s,note"]
    for i, alpha in enumerate(amplitudes):
        try:
            res = experiments.step_response(cfg, alpha)
        except CollapseError as exc:
            rows.append(f"{alpha:g},,,,,{f_free},{relax_free},collapse at tau={exc.tau:g}")
            continue
        fmt = lambda v: "" if v is None else f"{v:.6g}"
        rows.append(",".join([f"{alpha:g}", fmt(res.freq_in_hz), fmt(res.freq_post_hz),
                              fmt(res.relax_in_s), fmt(res.relax_post_s),
                              fmt(f_free), fmt(relax_free), res.note]))
        for tag, spec in (("in", res.spectrum_in), ("post", res.spectrum_post)):
            if spec is not None:
                path = out / f"spectrum_{tag}_{i}.csv"
                spec.to_csv(path)
                outputs.append(path)
        print(f"alpha={alpha:g} Pa: f_in={fmt(res.freq_in_hz)} "
              f"f_post={fmt(res.freq_post_hz)} f_free={fmt(f_free)} {res.note}")

    report = out / "step_response.csv"
    report.write_text("\n".join(rows) + "\n")
    outputs.insert(0, report)
    outputs.append(_write_manifest(out, "step-response", [], cfg, outputs))
    return 0


def cmd_spectrum(args):
    cfg = _resolve_config(args)
    if args.input.suffix.lower() == ".wav":
        buf = audio.read_wav(args.input)
        samples, dt = buf.samples, 1.0 / buf.sample_rate
    else:
        data = np.loadtxt(args.input, delimiter=",", skiprows=1, ndmin=2)
        if data.shape[1] < 2:
            raise ParseError("CSV must have columns t_seconds,value")
        samples = data[:, 1]
        dt = float(data[1, 0] - data[0, 0])
    spec = analysis.power_spectrum(samples, dt, args.window)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    path = out / "spectrum.csv"
    spec.to_csv(path)
    _write_manifest(out, "spectrum", [args.input], cfg, [path])
    print(f"dominant frequency: {analysis.dominant_frequency(spec):.2f} Hz")
    return 0


def cmd_memory(args):
    cfg = _resolve_config(args)
    res = cfg["reservoir"]
    if res["k_max"] >= res["n_bits"] // 2:
        raise DomainError("k_max too large for n_bits (need k_max < n_bits/2)")
    result = experiments.memory_benchmark(cfg)
    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    path = out / "capacity.csv"
    reservoir.write_capacity_csv(result.stm, result.pc, path)
    outputs = [path, _write_manifest(out, "memory-test", [], cfg, [path])]
    print(f"C_STM = {result.stm.capacity:.3f} bits")
    print(f"C_PC  = {result.pc.capacity:.3f} bits")
    return 0 if outputs else 1


_COMMANDS = {"render": cmd_render, "step-response": cmd_step,
             "spectrum": cmd_spectrum, "memory-test": cmd_memory}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (DomainError, ParseError, CollapseError, SingularityError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
