"""Command-line front end.

Subcommands mirror the pipeline stages: ``gen-signal`` writes benchmark
waveforms, ``compress`` runs the classical phase and reports (d, CR, TD),
``synth`` builds any of the circuit families and prices it, ``simulate``
runs a circuit file through the state-vector simulator, ``prepare`` runs
one experiment from a config file, ``run`` reproduces the benchmark
tables, ``sweep-ppg`` maps the compression grid over a recording
directory, and ``export`` converts circuit files between the line listing
and OpenQASM.

Exit codes: 0 success, 1 tolerance exceeded, 2 usage or invalid values,
3 I/O failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .circuit import Circuit, export, parse_listing, parse_qasm, report
from .loaders import SparseState, eae_real, sqsp
from .pipeline import (
    DEFAULT_PPG_DIR,
    DEFAULT_PPG_RECORDING,
    DEFAULT_SWEEP_LEVELS,
    DEFAULT_SWEEP_TAUS,
    ExperimentConfig,
    PipelineError,
    ToleranceExceededError,
    build_signal,
    format_table,
    hybrid_prepare,
    run_table1,
    run_table2,
    sweep_ppg,
    write_records_csv,
    write_records_json,
    write_sweep_csv,
)
from .qsynth import fsl_circuit, fsl_coefficients, inverse_packet_qhwt, iqft
from .signals import ingest_waveform_csv, save_signal_csv
from .statesim import dump_state_csv, simulate, trace_distance
from .transforms import (
    ABSOLUTE,
    DFT,
    FRACTION_OF_MAX,
    PACKET_HAAR,
    ThresholdPolicy,
    classical_reconstruct,
    compression_ratio,
    dft,
    load_compressed_csv,
    packet_dhwt,
    save_compressed_csv,
    threshold_normalize,
)


def _common_flags() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="generator seed")
    common.add_argument("--out", type=Path, help="output file")
    common.add_argument(
        "--format", choices=("csv", "json"), default="csv", help="record format"
    )
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hqsp",
        description="hybrid classical compression + sparse quantum loading",
    )
    common = [_common_flags()]
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-signal", parents=common, help="write a benchmark waveform")
    p.add_argument(
        "--kind",
        required=True,
        choices=("periodic", "piecewise", "sinc", "gaussian", "mixture"),
    )
    p.add_argument("--n-samples", type=int, help="length (power of two)")
    p.set_defaults(func=cmd_gen_signal)

    p = sub.add_parser("compress", parents=common, help="transform + threshold a CSV")
    p.add_argument("input", type=Path, help="waveform CSV")
    p.add_argument("--transform", choices=(DFT, PACKET_HAAR), default=PACKET_HAAR)
    p.add_argument("--levels", type=int, help="packet Haar levels")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--tau-frac", type=float, help="threshold as fraction of max")
    group.add_argument("--tau-abs", type=float, help="absolute threshold")
    p.set_defaults(func=cmd_compress)

    p = sub.add_parser("synth", parents=common, help="synthesize a circuit")
    p.add_argument(
        "--plan",
        required=True,
        choices=("sqsp", "eae", "fsl", "iqft", "qhwt-inv"),
    )
    p.add_argument("--n", type=int, help="register size (iqft, qhwt-inv)")
    p.add_argument("--levels", type=int, help="packet Haar levels (qhwt-inv)")
    p.add_argument("--m", type=int, help="FSL mode parameter")
    p.add_argument("--input", type=Path, help="compressed CSV (sqsp) or waveform CSV")
    p.add_argument("--report", action="store_true", help="print resource counts")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("simulate", parents=common, help="run a circuit file")
    p.add_argument("circuit", type=Path, help=".qasm or listing file")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser(
        "prepare", parents=common, help="run one experiment from a config file"
    )
    p.add_argument("config", type=Path, help="flat key = value config")
    p.set_defaults(func=cmd_prepare)

    p = sub.add_parser("run", parents=common, help="reproduce a benchmark table")
    p.add_argument("table", choices=("table1", "table2"))
    p.add_argument("--skip", choices=("ppg",), help="drop the recording row")
    p.add_argument(
        "--ppg-csv", type=Path, default=DEFAULT_PPG_RECORDING, help="recording path"
    )
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("sweep-ppg", parents=common, help="grid over (levels, tau)")
    p.add_argument("--dataset", type=Path, default=DEFAULT_PPG_DIR)
    p.add_argument("--levels", type=_parse_level_range, default=DEFAULT_SWEEP_LEVELS,
                   help="inclusive range lo:hi or comma list")
    p.add_argument("--taus", type=_parse_float_list, default=DEFAULT_SWEEP_TAUS,
                   help="comma-separated thresholds")
    p.add_argument("--mode", choices=(ABSOLUTE, FRACTION_OF_MAX), default=ABSOLUTE)
    p.add_argument("--workers", type=int, default=4)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("export", parents=common, help="convert a circuit file")
    p.add_argument("input", type=Path, help=".qasm or listing file")
    p.set_defaults(func=cmd_export)

    return parser


def _parse_level_range(text: str) -> tuple[int, ...]:
    if ":" in text:
        lo, hi = text.split(":", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(tok) for tok in text.split(","))


def _parse_float_list(text: str) -> tuple[float, ...]:
    return tuple(float(tok) for tok in text.split(","))


# ---------------------------------------------------------------------------
# Subcommand handlers
# ---------------------------------------------------------------------------


def cmd_gen_signal(args) -> int:
    params = {}
    if args.n_samples is not None:
        params["N"] = args.n_samples
    if args.kind == "mixture":
        params["seed"] = args.seed
    signal = build_signal(args.kind, params)
    if args.out is None:
        for v in np.asarray(signal.samples).real:
            print(f"{float(v)!r}")
    else:
        save_signal_csv(signal, args.out)
        print(f"wrote {len(signal.samples)} samples to {args.out}")
    return 0


def _threshold_from_args(args) -> ThresholdPolicy:
    if args.tau_abs is not None:
        return ThresholdPolicy(ABSOLUTE, args.tau_abs)
    return ThresholdPolicy(FRACTION_OF_MAX, args.tau_frac or 0.0)


def cmd_compress(args) -> int:
    signal = ingest_waveform_csv(args.input)
    x = np.asarray(signal.samples, dtype=complex)
    x = x / np.linalg.norm(x)
    if args.transform == DFT:
        coeffs = dft(x)
    else:
        if args.levels is None:
            raise PipelineError("packet Haar compression needs --levels")
        coeffs = packet_dhwt(x, args.levels)
    compressed = threshold_normalize(coeffs, _threshold_from_args(args))
    reconstruction = np.asarray(classical_reconstruct(compressed).samples)
    n = compressed.n
    cr = compression_ratio(2**n, compressed.d)
    td = trace_distance(reconstruction, x)
    print(f"d={compressed.d} CR={cr:.1f} TD={td:.4f}")
    if args.out is not None:
        save_compressed_csv(compressed, args.out)
        print(f"wrote coefficients to {args.out}")
    return 0


def _require(value, flag: str, plan: str):
    if value is None:
        raise PipelineError(f"--plan {plan} requires {flag}")
    return value


def cmd_synth(args) -> int:
    plan = args.plan
    if plan == "iqft":
        circuit = iqft(_require(args.n, "--n", plan))
    elif plan == "qhwt-inv":
        circuit = inverse_packet_qhwt(
            _require(args.n, "--n", plan), _require(args.levels, "--levels", plan)
        )
    elif plan == "sqsp":
        compressed = load_compressed_csv(_require(args.input, "--input", plan))
        circuit = sqsp(SparseState.from_compressed(compressed))
    elif plan == "eae":
        signal = ingest_waveform_csv(_require(args.input, "--input", plan))
        circuit = eae_real(np.asarray(signal.samples, dtype=float))
    else:  # fsl
        signal = ingest_waveform_csv(_require(args.input, "--input", plan))
        m = _require(args.m, "--m", plan)
        circuit = fsl_circuit(fsl_coefficients(signal, m), signal.n, m)
    if args.report:
        print(report(circuit))
    if args.out is not None:
        fmt = "qasm" if args.out.suffix == ".qasm" else "listing"
        args.out.write_text(export(circuit, fmt))
        print(f"wrote {len(circuit)} gates to {args.out}")
    elif not args.report:
        sys.stdout.write(export(circuit, "listing"))
    return 0


def _read_circuit(path: Path) -> Circuit:
    text = path.read_text()
    if path.suffix == ".qasm" or text.lstrip().startswith("OPENQASM"):
        return parse_qasm(text)
    return parse_listing(text)


def cmd_simulate(args) -> int:
    circuit = _read_circuit(args.circuit)
    state = simulate(circuit)
    print(f"simulated {circuit.n_qubits} qubits, {len(circuit)} gates")
    if args.out is not None:
        dump_state_csv(state, args.out)
        print(f"wrote state to {args.out}")
    else:
        largest = np.argsort(np.abs(state))[::-1][:8]
        for idx in sorted(map(int, largest)):
            amp = state[idx]
            print(f"|{idx:0{circuit.n_qubits}b}> {amp.real:+.6f}{amp.imag:+.6f}j")
    return 0


def cmd_prepare(args) -> int:
    cfg = ExperimentConfig.from_file(args.config)
    circuit, record = hybrid_prepare(cfg)
    print(format_table([record]))
    out_dir = Path(cfg.output_dir) if cfg.output_dir else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
        writer = write_records_csv if args.format == "csv" else write_records_json
        writer([record], out_dir / f"{cfg.label}.{args.format}")
        (out_dir / f"{cfg.label}.qasm").write_text(export(circuit, "qasm"))
        print(f"wrote record and circuit to {out_dir}")
    if args.out is not None:
        writer = write_records_csv if args.format == "csv" else write_records_json
        writer([record], args.out)
    return 0


def cmd_run(args) -> int:
    runner = run_table1 if args.table == "table1" else run_table2
    records = runner(
        ppg_csv=args.ppg_csv, skip_ppg=args.skip == "ppg", seed=args.seed
    )
    print(format_table(records))
    if args.out is not None:
        writer = write_records_csv if args.format == "csv" else write_records_json
        writer(records, args.out)
        print(f"wrote {len(records)} records to {args.out}")
    return 0


def cmd_sweep(args) -> int:
    cells = sweep_ppg(
        levels=args.levels,
        taus=args.taus,
        dataset_dir=args.dataset,
        mode=args.mode,
        max_workers=args.workers,
    )
    out = args.out if args.out is not None else Path("sweep.csv")
    write_sweep_csv(cells, out)
    print(f"wrote {len(cells)} cells to {out}")
    return 0


def cmd_export(args) -> int:
    circuit = _read_circuit(args.input)
    if args.out is None:
        raise PipelineError("export needs --out")
    fmt = "qasm" if args.out.suffix == ".qasm" else "listing"
    args.out.write_text(export(circuit, fmt))
    print(f"wrote {args.out}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ToleranceExceededError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 3
    except (PipelineError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
