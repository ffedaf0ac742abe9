"""Command-line interface.

Subcommands: classify, factor, identify, apply, synth, experiment.
Structured results go to JSON, sampled functions to CSV, and the report
paths render matplotlib figures next to the delimited output.  Exit
codes: 0 success, 1 mathematical/validation failure, 2 input or usage
error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import fileio
from .config import RunConfig
from .errors import MinphaseError, SerializationError
from .factorization import classify, factorize
from .identify import (
    ProbeResponsePair,
    cross_validate,
    identify_disk,
    identify_halfplane,
)
from .operators import (
    OperatorModel,
    apply as apply_operator,
    descriptor_from_json,
    synthesize,
)
from .signals import from_callable, rho0, rho1, sigma0, sigma1
from .transforms import FrequencyGrid, h_transform

USAGE_ERROR = 2
MATH_ERROR = 1


def _load_config(path: str | None) -> RunConfig:
    return RunConfig() if path is None else RunConfig.from_file(path)


def _builtin_signals(grid):
    return {
        "exp2t": from_callable(grid, lambda t: np.exp(-2 * t)),
        "t_exp_t": from_callable(grid, lambda t: t * np.exp(-t)),
        "exp_t_sin_t": from_callable(grid, lambda t: np.exp(-t) * np.sin(t)),
    }


# ---------------------------------------------------------------------------
# subcommands


def cmd_classify(args) -> int:
    cfg = _load_config(args.config)
    signal = fileio.read_signal_csv(args.signal)
    result = classify(signal, circle_n=cfg.n_circle, tau_tol=cfg.classify_tau_tol,
                      modulus_tol=cfg.factor_residual_tol,
                      pattern_tol=cfg.pattern_tol)
    payload = {
        "class": result.tag,
        "tau": result.tau,
        "residuals": result.diagnostics,
    }
    out = Path(args.out or "classify.json")
    fileio.write_json(out, payload)
    if args.figures:
        from .plots import save_signal_figure

        save_signal_figure(out.with_suffix(".png"), {"input": signal},
                           f"classified: {result.tag}")
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_factor(args) -> int:
    cfg = _load_config(args.config)
    signal = fileio.read_signal_csv(args.signal)
    grid = FrequencyGrid.circle_uniform(cfg.n_circle)
    G = h_transform(signal, grid)
    result = factorize(G)
    out = Path(args.out or "factorization.json")
    outer_csv = out.with_name(out.stem + "_outer.csv")
    inner_csv = out.with_name(out.stem + "_inner.csv")
    fileio.write_boundary_csv(outer_csv, result.outer)
    fileio.write_boundary_csv(inner_csv, result.inner)
    payload = {
        "tau": result.delay_tau,
        "residual": result.residual,
        "inner_modulus_deviation": result.inner_modulus_deviation,
        "outer_csv_path": str(outer_csv),
        "inner_csv_path": str(inner_csv),
    }
    fileio.write_json(out, payload)
    if args.figures:
        from .plots import save_boundary_figure

        save_boundary_figure(out.with_suffix(".png"), result.outer,
                             "outer factor")
    print(json.dumps(payload, sort_keys=True))
    return 0


def cmd_identify(args) -> int:
    cfg = _load_config(args.config)
    r0 = fileio.read_signal_csv(args.response0)
    r1 = fileio.read_signal_csv(args.response1)
    pair = ProbeResponsePair(args.probe_set, r0, r1, args.mode)
    if args.probe_set == "sigma":
        ident = identify_halfplane(pair, y_max=cfg.y_max, n_freq=cfg.n_freq,
                                   division_floor=cfg.division_floor)
    else:
        ident = identify_disk(pair, y_max=cfg.y_max, n_freq=cfg.n_freq,
                              circle_n=cfg.n_circle,
                              division_floor=cfg.division_floor,
                              self_map_tol=cfg.self_map_tol)
    out = Path(args.out or "operator.json")
    payload = ident.op.to_json()
    payload["epsilon"] = ident.epsilon
    payload["diagnostics"] = {
        k: v for k, v in ident.diagnostics.items() if not isinstance(v, np.ndarray)
    }
    fileio.write_json(out, payload)
    diag_path = out.with_name(out.stem + "_diagnostics.json")
    fileio.write_json(diag_path, payload["diagnostics"])
    print(json.dumps({"epsilon": ident.epsilon,
                      "operator_json": str(out)}, sort_keys=True))
    if ident.diagnostics.get("plain_delay_violation"):
        print("warning: extracted delay is nonzero; the measured operator "
              "does not preserve plain minimum phase", file=sys.stderr)
        return MATH_ERROR
    return 0


def cmd_apply(args) -> int:
    cfg = _load_config(args.config)
    data = fileio.read_json(args.operator)
    op = OperatorModel.from_json(data)
    signal = fileio.read_signal_csv(args.signal)
    result = apply_operator(op, signal, y_max=cfg.y_max, n_freq=cfg.n_freq)
    out = Path(args.out or "applied.csv")
    fileio.write_signal_csv(out, result)
    print(json.dumps({"output_csv": str(out),
                      "output_norm": result.norm}, sort_keys=True))
    return 0


def cmd_synth(args) -> int:
    cfg = _load_config(args.config)
    spec = fileio.read_json(args.spec)
    if "psi" not in spec or "phi" not in spec:
        raise SerializationError("synth spec must contain 'psi' and 'phi'")
    psi = descriptor_from_json(spec["psi"])
    phi = descriptor_from_json(spec["phi"])
    op = synthesize(psi, phi, circle_n=cfg.n_circle)
    out = Path(args.out or "operator.json")
    fileio.write_json(out, op.to_json())
    v = op.validation
    print(json.dumps({"operator_json": str(out),
                      "self_map_ok": v.self_map_ok,
                      "multiplier_delay": v.multiplier_delay,
                      "preserving_verified": v.preserving_verified},
                     sort_keys=True))
    return 0 if v.self_map_ok and v.multiplier_delay_family else MATH_ERROR


def _default_family() -> dict:
    rational = lambda num: {"kind": "rational", "domain": "disk",
                            "num": [[c, 0.0] for c in num], "den": [[1.0, 0.0]]}
    mobius = lambda co: {"kind": "mobius", "domain": "disk",
                         "coeffs": [[c, 0.0] for c in co]}
    psis = [
        ("psi_one", rational([1.0])),
        ("psi_zero_half", rational([1.0, -0.5])),
        ("psi_delay_third", {"kind": "product", "factors": [
            {"kind": "exp_singular", "domain": "disk", "tau": 0.5},
            rational([1.0, -1.0 / 3.0]),
        ]}),
    ]
    phis = [
        ("phi_id", mobius([1.0, 0.0, 0.0, 1.0])),
        ("phi_half", mobius([0.5, 0.0, 0.0, 1.0])),
        ("phi_mobius_third", mobius([1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0])),
    ]
    return {
        "operators": [
            {"name": f"{pn}__{fn}", "psi": p, "phi": f}
            for pn, p in psis for fn, f in phis
        ],
        "signals": [
            {"name": "exp2t", "kind": "builtin"},
            {"name": "t_exp_t", "kind": "builtin"},
            {"name": "exp_t_sin_t", "kind": "builtin"},
        ],
    }


def cmd_experiment(args) -> int:
    cfg = _load_config(args.config)
    spec = fileio.read_json(args.spec) if args.spec else _default_family()
    outdir = Path(args.out or "experiment")
    outdir.mkdir(parents=True, exist_ok=True)
    grid = cfg.time_grid()

    builtins = _builtin_signals(grid)
    signals = {}
    for item in spec.get("signals", []):
        name = item["name"]
        if item.get("kind", "builtin") == "builtin":
            if name not in builtins:
                raise SerializationError(
                    f"unknown builtin signal {name!r}; have {sorted(builtins)}")
            signals[name] = builtins[name]
        else:
            signals[name] = fileio.read_signal_csv(item["path"])
    if not signals:
        signals = dict(builtins)

    s0, s1 = sigma0(grid), sigma1(grid)
    rows = []
    failures = []
    worst = (None, None, -1.0)
    for entry in spec.get("operators", []):
        name = entry["name"]
        try:
            psi = descriptor_from_json(entry["psi"])
            phi = descriptor_from_json(entry["phi"])
            truth = synthesize(psi, phi, circle_n=cfg.n_circle)
            pair = ProbeResponsePair(
                "sigma",
                apply_operator(truth, s0, y_max=cfg.y_max, n_freq=cfg.n_freq),
                apply_operator(truth, s1, y_max=cfg.y_max, n_freq=cfg.n_freq),
            )
            ident = identify_halfplane(pair, y_max=cfg.y_max, n_freq=cfg.n_freq)
            report = cross_validate(ident, truth, signals,
                                    y_max=cfg.y_max, n_freq=cfg.n_freq)
        except MinphaseError as exc:
            failures.append({"operator": name, "error": str(exc)})
            continue
        for sig_name, err in report.per_signal.items():
            rows.append((name, sig_name, err))
            if err > worst[2]:
                worst = (name, sig_name, err)

    report_csv = outdir / "report.csv"
    with open(report_csv, "w") as fh:
        fh.write("operator,signal,rel_error\n")
        for name, sig_name, err in rows:
            fh.write(f"{name},{sig_name},{err!r}\n")
    summary = {
        "n_operators": len(spec.get("operators", [])),
        "n_signals": len(signals),
        "max_rel_error": worst[2] if rows else None,
        "worst_case": {"operator": worst[0], "signal": worst[1]},
        "failures": failures,
        "report_csv": str(report_csv),
    }
    fileio.write_json(outdir / "report.json", summary)

    if args.figures and rows:
        from .plots import save_error_heatmap, save_signal_figure

        op_names = sorted({r[0] for r in rows})
        sig_names = sorted({r[1] for r in rows})
        table = np.zeros((len(op_names), len(sig_names)))
        for name, sig_name, err in rows:
            table[op_names.index(name), sig_names.index(sig_name)] = err
        save_error_heatmap(outdir / "errors.png", op_names, sig_names, table,
                           "identification round-trip relative errors")
        save_signal_figure(outdir / "probes.png",
                           {"sigma0": s0, "sigma1": s1,
                            "rho0": rho0(grid), "rho1": rho1(grid)},
                           "probe signals")
    print(json.dumps(summary, sort_keys=True))
    return 0 if not failures else MATH_ERROR


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minphase",
        description="Minimum-phase signal analysis and operator identification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file overriding RunConfig defaults")
        p.add_argument("--out", help="output path (file, or directory for "
                                     "experiment)")

    p = sub.add_parser("classify", help="classify a signal's phase structure")
    p.add_argument("signal", help="signal CSV (t,re,im)")
    p.add_argument("--figures", action="store_true")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("factor", help="inner-outer factorization of a signal's "
                                      "disk transform")
    p.add_argument("signal")
    p.add_argument("--figures", action="store_true")
    common(p)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("identify", help="reconstruct an operator from two "
                                        "probe responses")
    p.add_argument("response0")
    p.add_argument("response1")
    p.add_argument("--probe-set", choices=("sigma", "rho"), required=True)
    p.add_argument("--mode", choices=("translated", "plain"),
                   default="translated")
    common(p)
    p.set_defaults(func=cmd_identify)

    p = sub.add_parser("apply", help="apply an operator JSON to a signal")
    p.add_argument("operator")
    p.add_argument("signal")
    common(p)
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("synth", help="synthesize an operator from disk data")
    p.add_argument("spec", help="JSON with 'psi' and 'phi' descriptors")
    common(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("experiment", help="synthesize, probe, identify and "
                                          "cross-validate an operator family")
    p.add_argument("spec", nargs="?", help="family JSON (default: built-in "
                                           "nine-operator family)")
    fig = p.add_mutually_exclusive_group()
    fig.add_argument("--figures", dest="figures", action="store_true",
                     default=True)
    fig.add_argument("--no-figures", dest="figures", action="store_false")
    common(p)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SerializationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except MinphaseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return MATH_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
