"""Command-line front end.

Subcommands ``measures`` (scalar measures of one distribution), ``simplex``
(measure fields on the ternary simplex) and ``mfa`` (multifractal analysis of
an event catalog, per phase).

Exit codes: 0 success, 1 usage error, 2 data error, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import binned as bn
from . import complexity as cx
from . import info_measures as im
from . import io as fio
from .catalog import (
    DEFAULT_ENERGY_EXPONENT,
    dyadic_partitions,
    parse_catalog,
    parse_time,
    split_phases,
)
from .errors import CatalogError, FitError, InputError, MeasureError
from .multifractal import (
    DimensionCurve,
    dimension_derivative,
    dimension_increment_map,
    generalized_dimensions,
    generalized_relative_dimensions,
    symmetrized_relative_dimensions,
)
from .simplex import MEASURE_NAMES, RELATIVE_MEASURES, evaluate_field, measure_parameters, simplex_grid

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# argument helpers


def order_grid(spec: str) -> np.ndarray:
    """``min:max:step`` (inclusive) or a comma list of orders."""
    try:
        if ":" in spec:
            lo, hi, step = (float(s) for s in spec.split(":"))
            if not step > 0 or hi < lo:
                raise ValueError
            n = int(math.floor((hi - lo) / step + 1e-9)) + 1
            return np.round(lo + step * np.arange(n), 12)
        return np.array([float(s) for s in spec.split(",")])
    except ValueError:
        raise UsageError(f"bad order grid {spec!r}; use min:max:step or a comma list") from None


def scale_window(spec: str) -> List[int]:
    try:
        lo, hi = (int(s) for s in spec.split(":"))
    except ValueError:
        raise UsageError(f"bad scale window {spec!r}; use jmin:jmax") from None
    if lo < 0 or hi - lo < 2:
        raise UsageError("the scale window needs at least 3 dyadic levels, jmin >= 0")
    return list(range(lo, hi + 1))


def _measure_spec(spec: str) -> Tuple[str, Dict[str, float]]:
    """``name`` or ``name:key=value,key=value``."""
    name, _, rest = spec.partition(":")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, value = item.partition("=")
        try:
            if not eq:
                raise ValueError
            params[key.strip()] = float(value)
        except ValueError:
            raise UsageError(f"bad measure parameter {item!r} in {spec!r}") from None
    return name.strip(), params


def _fmt_params(params: Dict[str, float]) -> str:
    return ";".join(f"{k}={v!r}" for k, v in params.items())


def _out_path(args, stem: str) -> str:
    return os.path.join(args.out, f"{stem}.{args.format}")


def _emit(args, stem: str, csv_text: str, json_text: str) -> None:
    text = csv_text if args.format == "csv" else json_text
    if args.out is None:
        sys.stdout.write(text)
    else:
        fio.write_atomic(_out_path(args, stem), text)


def _emit_map(args, stem: str, m: cx.ComplexityMap) -> None:
    _emit(args, stem, fio.map_csv(m), fio.map_json(m))


def _emit_curve(args, stem: str, c: DimensionCurve) -> None:
    _emit(args, stem, fio.curve_csv(c), fio.curve_json(c))


# ---------------------------------------------------------------------------
# measures

# name -> (parameters, input kind, evaluator(x, ref, kw)); kinds: dist, rel, binned, binned_rel
_SCALARS: Dict[str, Tuple[Tuple[str, ...], str, Callable]] = {
    "shannon": ((), "dist", lambda p, r, k: im.shannon_entropy(p)),
    "renyi_entropy": (("q",), "dist", lambda p, r, k: im.renyi_entropy(p, k["q"])),
    "diversity_index": (("q",), "dist", lambda p, r, k: im.diversity_index(p, k["q"])),
    "information_difference": (("q",), "dist", lambda p, r, k: im.information_difference(p, k["q"])),
    "redundancy": ((), "dist", lambda p, r, k: im.redundancy(p)),
    "c_lmc": ((), "dist", lambda p, r, k: cx.c_lmc(p)),
    "generalized_complexity": (
        ("alpha", "beta"),
        "dist",
        lambda p, r, k: cx.generalized_complexity(p, k["alpha"], k["beta"]),
    ),
    "relative_increment": (
        ("alpha", "beta"),
        "dist",
        lambda p, r, k: cx.relative_increment(p, k["alpha"], k["beta"]),
    ),
    "entropy_derivative": (("q",), "dist", lambda p, r, k: cx.entropy_derivative(p, k["q"])),
    "kl": ((), "rel", lambda p, r, k: im.kl_divergence(p, r)),
    "renyi_divergence": (("q",), "rel", lambda p, r, k: im.renyi_divergence(p, r, k["q"])),
    "relative_diversity_index": (
        ("q",),
        "rel",
        lambda p, r, k: im.relative_diversity_index(p, r, k["q"]),
    ),
    "generalized_relative_complexity": (
        ("alpha", "beta"),
        "rel",
        lambda p, r, k: cx.generalized_relative_complexity(p, r, k["alpha"], k["beta"]),
    ),
    "relative_divergence_increment": (
        ("alpha", "beta"),
        "rel",
        lambda p, r, k: cx.relative_divergence_increment(p, r, k["alpha"], k["beta"]),
    ),
    "divergence_derivative": (("q",), "rel", lambda p, r, k: cx.divergence_derivative(p, r, k["q"])),
    "binned_entropy": (("q",), "binned", lambda b, r, k: bn.binned_renyi_entropy(b, k["q"])),
    "spatial_entropy": ((), "binned", lambda b, r, k: bn.batty_decomposition(b).spatial_entropy),
    "size_information": ((), "binned", lambda b, r, k: bn.batty_decomposition(b).size_information),
    "continuous_information_difference": (
        ("q",),
        "binned",
        lambda b, r, k: bn.continuous_information_difference(b, k["q"]),
    ),
    "binned_divergence": (
        ("q",),
        "binned_rel",
        lambda b, r, k: bn.binned_renyi_divergence(b, r, k["q"]),
    ),
}
_MAPS = {
    "complexity": lambda p, r, a, b: cx.complexity_map(p, a, b),
    "relative_complexity": lambda p, r, a, b: cx.relative_complexity_map(p, r, a, b),
    "increment": lambda p, r, a, b: cx.increment_map(p, a, b),
}


def _load_inputs(args) -> dict:
    inputs = {}
    if args.dist:
        inputs["dist"] = fio.read_distribution(args.dist)
    if args.ref:
        inputs["ref"] = fio.read_distribution(args.ref)
    if args.binned:
        inputs["binned"] = fio.read_binned(args.binned)
    if args.ref_binned:
        inputs["ref_binned"] = fio.read_binned(args.ref_binned)
    return inputs


def _default_measures(args) -> List[str]:
    if args.binned and not args.dist:
        return ["binned_entropy:q=1", "spatial_entropy", "size_information"]
    names = ["shannon", "renyi_entropy:q=2", "c_lmc", "redundancy"]
    if args.ref:
        names.append("kl")
    return names


def run_measures(args) -> int:
    if not (args.dist or args.binned):
        raise UsageError("measures needs --dist FILE or --binned FILE")
    specs = [_measure_spec(s) for s in (args.measure or _default_measures(args))]
    needs = {"dist": ("dist",), "rel": ("dist", "ref"), "binned": ("binned",), "binned_rel": ("binned", "ref_binned")}
    for name, params in specs:
        if name not in _SCALARS:
            raise UsageError(f"unknown measure {name!r}; valid names: {', '.join(sorted(_SCALARS))}")
        names, kind, _ = _SCALARS[name]
        missing = [n for n in names if n not in params]
        if missing:
            raise UsageError(f"measure {name!r} needs parameters {missing}")
        for need in needs[kind]:
            if not getattr(args, need):
                raise UsageError(f"measure {name!r} needs --{need.replace('_', '-')} FILE")
    if args.map:
        if args.out is None:
            raise UsageError("--map needs --out DIR")
        if not args.dist or (args.map == "relative_complexity" and not args.ref):
            raise UsageError(f"--map {args.map} needs --dist" + (" and --ref" if args.map == "relative_complexity" else ""))

    inputs = _load_inputs(args)
    records = []
    for name, params in specs:
        names, kind, fn = _SCALARS[name]
        x = inputs["binned" if kind.startswith("binned") else "dist"]
        ref = inputs.get({"rel": "ref", "binned_rel": "ref_binned"}.get(kind, ""), None)
        value = fn(x, ref, {n: params[n] for n in names})
        records.append((name, _fmt_params({n: params[n] for n in names}), float(value)))
    header = ("measure", "parameters", "value")
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
    _emit(args, "measures", fio.records_csv(header, records), fio.records_json(header, records))
    if args.map:
        a, b = order_grid(args.alpha_grid), order_grid(args.beta_grid)
        m = _MAPS[args.map](inputs["dist"], inputs.get("ref"), a, b)
        _emit_map(args, f"{args.map}_map", m)
    return EXIT_OK


# ---------------------------------------------------------------------------
# simplex


def _parse_reference(args):
    if args.ref and args.ref_file:
        raise UsageError("give --ref or --ref-file, not both")
    if args.ref_file:
        return fio.read_distribution(args.ref_file)
    if args.ref:
        try:
            return im.ProbDist([float(s) for s in args.ref.split(",")])
        except ValueError as exc:
            raise UsageError(f"bad --ref {args.ref!r}: {exc}") from None
    return None


def run_simplex(args) -> int:
    if args.measure not in MEASURE_NAMES:
        raise UsageError(f"unknown measure {args.measure!r}; valid names: {', '.join(MEASURE_NAMES)}")
    params = {n: getattr(args, n) for n in measure_parameters(args.measure)}
    missing = [f"--{n}" for n, v in params.items() if v is None]
    if missing:
        raise UsageError(f"measure {args.measure!r} needs {' '.join(missing)}")
    ref = _parse_reference(args)
    if args.measure in RELATIVE_MEASURES and ref is None:
        raise UsageError(f"measure {args.measure!r} needs a reference (--ref or --ref-file)")
    if ref is not None and ref.n != 3:
        raise UsageError("the reference must have exactly 3 states")
    try:
        grid = simplex_grid(args.resolution)
    except MeasureError as exc:
        raise UsageError(str(exc)) from None
    field = evaluate_field(grid, args.measure, params, ref)
    if args.out is not None:
        os.makedirs(args.out, exist_ok=True)
    _emit(args, f"{args.measure}_field", fio.field_csv(field), fio.field_json(field))
    return EXIT_OK


# ---------------------------------------------------------------------------
# mfa


def _phase_outputs(args, label, freq, energy, q_grid, orders) -> List[Tuple[str, DimensionCurve]]:
    curves = [(f"phase_{label}_dq", generalized_dimensions(freq, q_grid))]
    if energy is not None:
        pe = generalized_relative_dimensions(freq, energy, q_grid)
        ep = generalized_relative_dimensions(energy, freq, q_grid)
        curves += [
            (f"phase_{label}_rel_pe", pe),
            (f"phase_{label}_rel_ep", ep),
            (f"phase_{label}_rel_sym", symmetrized_relative_dimensions(pe, ep)),
        ]
    for stem, curve in curves:
        _emit_curve(args, stem, curve)
        _emit_map(args, f"{stem}_increments", dimension_increment_map(curve, orders, orders))
        _emit_curve(args, f"{stem}_derivative", dimension_derivative(curve))
    return curves


def _numeric_problems(curves, q_grid, min_r2) -> List[str]:
    problems = []
    for stem, c in curves:
        bad = ~np.isfinite(c.values)
        if np.any(bad):
            problems.append(f"{stem}: non-finite dimension at q={c.q_grid[bad].tolist()}")
        if min_r2 is not None:
            low = c.r_squared < min_r2
            if np.any(low):
                problems.append(f"{stem}: R^2 below {min_r2} at q={c.q_grid[low].tolist()}")
    return problems


def run_mfa(args) -> int:
    if not args.catalog:
        raise UsageError("mfa needs --catalog FILE")
    if args.out is None:
        raise UsageError("mfa needs --out DIR")
    q_grid = order_grid(f"{args.q_min}:{args.q_max}:{args.q_step}")
    if q_grid.size < 3:
        raise UsageError("the q grid needs at least 3 orders")
    orders = order_grid(args.orders) if args.orders else q_grid
    levels = scale_window(args.scales)
    if args.min_count < 1:
        raise UsageError("--min-count must be >= 1")
    try:
        boundaries = [parse_time(s) for s in args.phases.split(",") if s.strip()] if args.phases else []
    except ValueError:
        raise UsageError(f"bad --phases {args.phases!r}") from None

    catalog = parse_catalog(args.catalog, time_format=args.time_format)
    split = split_phases(catalog, boundaries)
    os.makedirs(args.out, exist_ok=True)

    summary, worst = [], EXIT_OK
    for label, phase in zip(split.labels, split.phases):
        code, message = EXIT_OK, ""
        try:
            freq = dyadic_partitions(phase, levels, None, args.min_count)
            energy = None
            if args.energy:
                energy = dyadic_partitions(phase, levels, args.energy_exponent, args.min_count)
            curves = _phase_outputs(args, label, freq, energy, q_grid, orders)
            problems = _numeric_problems(curves, q_grid, args.min_r2)
            if problems:
                code, message = EXIT_NUMERIC, "; ".join(problems)
        except FitError as exc:
            code, message = EXIT_NUMERIC, str(exc)
        except (CatalogError, MeasureError) as exc:
            code, message = EXIT_DATA, str(exc)
        if code != EXIT_OK:
            print(f"phase {label}: {message}", file=sys.stderr)
        worst = max(worst, code)
        start = float(phase.times[0]) if len(phase) else float("nan")
        end = float(phase.times[-1]) if len(phase) else float("nan")
        status = {EXIT_OK: "ok", EXIT_DATA: "data_error", EXIT_NUMERIC: "numeric_failure"}[code]
        summary.append((label, start, end, len(phase), status, message))
    header = ("phase", "start", "end", "events", "status", "message")
    _emit(args, "summary", fio.records_csv(header, summary), fio.records_json(header, summary))
    return worst


# ---------------------------------------------------------------------------
# parser and entry point


def _shared(p):
    p.add_argument("--out", metavar="DIR", help="output directory (default: stdout where allowed)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--config", metavar="FILE", help="JSON file of option defaults; flags override it")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mfcomplexity", description="Rényi information, complexity and multifractal measures.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, metavar="COMMAND")
    sub.required = True

    m = sub.add_parser("measures", help="scalar measures of a distribution")
    _shared(m)
    m.add_argument("--dist", metavar="FILE", help="distribution file")
    m.add_argument("--ref", metavar="FILE", help="reference distribution file")
    m.add_argument("--binned", metavar="FILE", help="binned density CSV")
    m.add_argument("--ref-binned", metavar="FILE", help="reference binned density CSV")
    m.add_argument(
        "--measure",
        action="append",
        metavar="NAME[:k=v,...]",
        help=f"repeatable; one of {', '.join(sorted(_SCALARS))}",
    )
    m.add_argument("--map", choices=sorted(_MAPS), help="also write an (alpha, beta) map")
    m.add_argument("--alpha-grid", default="0:10:0.1", metavar="SPEC")
    m.add_argument("--beta-grid", default="0:10:0.1", metavar="SPEC")
    m.set_defaults(run=run_measures)

    s = sub.add_parser("simplex", help="measure field on the ternary simplex")
    _shared(s)
    s.add_argument("--measure", help=f"one of {', '.join(MEASURE_NAMES)}")
    s.add_argument("--resolution", type=int, default=100, metavar="R")
    s.add_argument("--q", type=float)
    s.add_argument("--alpha", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--ref", metavar="P1,P2,P3", help="reference distribution")
    s.add_argument("--ref-file", metavar="FILE")
    s.set_defaults(run=run_simplex)

    f = sub.add_parser("mfa", help="multifractal analysis of an event catalog")
    _shared(f)
    f.add_argument("--catalog", metavar="FILE")
    f.add_argument("--time-format", choices=("auto", "epoch", "iso"), default="auto")
    f.add_argument("--phases", metavar="T1,T2,...", help="phase boundaries (epoch or ISO-8601)")
    f.add_argument("--q-min", type=float, default=-10.0)
    f.add_argument("--q-max", type=float, default=10.0)
    f.add_argument("--q-step", type=float, default=0.25)
    f.add_argument("--orders", metavar="SPEC", help="alpha/beta grid of increment maps (default: q grid)")
    f.add_argument("--scales", default="3:11", metavar="JMIN:JMAX")
    f.add_argument("--energy", action="store_true", help="add energy-weighted relative dimensions")
    f.add_argument("--energy-exponent", type=float, default=DEFAULT_ENERGY_EXPONENT, metavar="B")
    f.add_argument("--min-count", type=int, default=1, help="drop boxes with fewer events")
    f.add_argument("--min-r2", type=float, help="flag fits below this R^2 as numeric failures")
    f.set_defaults(run=run_mfa)
    return parser


def _apply_config(parser, argv: Sequence[str]):
    args = parser.parse_args(argv)
    if not args.config:
        return args
    try:
        with open(args.config, encoding="utf-8") as fh:
            config = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {args.config!r}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config {args.config!r} is not valid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise UsageError("the config file must hold a JSON object")
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    subparser = sub.choices[args.command]
    known = {a.dest for a in subparser._actions} - {"help", "config"}
    config = {k.replace("-", "_"): v for k, v in config.items()}
    unknown = sorted(set(config) - known)
    if unknown:
        raise UsageError(f"unknown config keys for {args.command}: {unknown}")
    subparser.set_defaults(**config)
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = _apply_config(parser, argv)
        return args.run(args)
    except SystemExit as exc:  # argparse: --help or a usage error
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except UsageError as exc:
        print(f"mfcomplexity: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FitError as exc:
        print(f"mfcomplexity: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, CatalogError, MeasureError) as exc:
        print(f"mfcomplexity: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
