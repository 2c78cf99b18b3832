"""Command line interface.

Subcommands: generate, spectrum, entropy, star-average, bounds,
localize, constants.  Every option can also be supplied through a flat
KEY=VALUE config file (--config); explicit flags win over the file.

Exit codes: 0 success, 2 parameter error, 3 numerical failure,
4 bound violation detected by `bounds`.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import derived_constants, figures
from . import serialization as ser
from .errors import BoundViolationError, GenerationError, NumericalError, SchemaError
from .experiments import ExperimentSpec, run
from .star import c_neumann_constant


def _parse_config_file(path) -> dict:
    """Flat KEY=VALUE lines; '#' starts a comment."""
    values = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.strip()!r}")
            key, val = line.split("=", 1)
            values[key.strip().replace("-", "_")] = val.strip()
    return values


def _sizes(text) -> tuple:
    return tuple(int(x) for x in str(text).split(",") if x.strip())


def _add_common(p: argparse.ArgumentParser, family_default: str = "star"):
    p.add_argument("--config", help="flat KEY=VALUE config file; flags win")
    p.add_argument("--family", choices=("star", "regular"), default=family_default)
    p.add_argument("--degree", type=int, default=6)
    p.add_argument("--boundary", choices=("neumann", "equitransmitting"),
                   default="neumann")
    p.add_argument("--length-lo", type=float, default=2.0)
    p.add_argument("--length-hi", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out-dir", default=".")
    p.add_argument("--label", default=None)
    p.add_argument("--threads", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qgraphs",
        description="Quantum graph spectra and eigenfunction entropy diagnostics.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a quantum graph artifact")
    _add_common(p)
    p.add_argument("--size", type=int, default=30)
    p.add_argument("--output", default="graph.json")

    for name, help_text in (("spectrum", "solve for eigenvalues and bond vectors"),
                            ("entropy", "entropy scatter or mean entropy vs size"),
                            ("bounds", "verify theorem bounds over a spectrum")):
        p = sub.add_parser(name, help=help_text)
        _add_common(p)
        p.add_argument("--sizes", type=_sizes, default=(30,),
                       help="comma separated; several sizes switch entropy "
                            "to the mean-vs-size experiment")
        p.add_argument("--k-min", type=float, default=1.0)
        p.add_argument("--k-max", type=float, default=None)
        p.add_argument("--n-eigen", type=int, default=300)
        p.add_argument("--tol", type=float, default=1e-10)
        if name != "bounds":
            p.add_argument("--figure", default=None,
                           help="render a PNG to this path")

    p = sub.add_parser("star-average", help="weighted average entropy of Neumann stars")
    _add_common(p)
    p.add_argument("--sizes", type=_sizes, default=(30,))
    p.add_argument("--n-eigen", type=int, default=3000)
    p.add_argument("--variant", default=derived_constants.M_PROFILE_DEFAULT,
                   choices=("plain", "two_over_sqrt_pi"))
    p.add_argument("--figure", default=None)

    p = sub.add_parser("localize", help="low-k localization heuristic on a star")
    _add_common(p)
    p.add_argument("--size", type=int, default=120)
    p.add_argument("--force-lmax", type=float, default=None)
    p.add_argument("--figure", default=None)

    p = sub.add_parser("constants", help="print the derived constants")
    p.add_argument("--config", help="flat KEY=VALUE config file; flags win")
    p.add_argument("--quadrature-tol", type=float, default=1e-10)
    p.add_argument("--output", default=None, help="also write the table as JSON")

    return parser


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser,
                  argv) -> argparse.Namespace:
    if not getattr(args, "config", None):
        return args
    overrides = _parse_config_file(args.config)
    merged = vars(args).copy()
    explicit = {a.lstrip("-").split("=")[0].replace("-", "_") for a in argv
                if a.startswith("--")}
    for key, raw in overrides.items():
        if key not in merged:
            raise ValueError(f"unknown config key {key!r}")
        if key in explicit:
            continue  # flags win
        current = merged[key]
        if key == "sizes":
            merged[key] = _sizes(raw)
        elif isinstance(current, bool):
            merged[key] = raw.lower() in ("1", "true", "yes")
        elif isinstance(current, int):
            merged[key] = int(raw)
        elif isinstance(current, float):
            merged[key] = float(raw)
        elif current is None and key in ("k_max", "force_lmax", "threads"):
            merged[key] = float(raw) if key != "threads" else int(raw)
        else:
            merged[key] = raw
    return argparse.Namespace(**merged)


def _spec_from(args, kind, sizes=None) -> ExperimentSpec:
    return ExperimentSpec(
        kind=kind,
        family=args.family,
        sizes=sizes if sizes is not None else getattr(args, "sizes", (30,)),
        degree=args.degree,
        boundary=args.boundary,
        length_lo=args.length_lo,
        length_hi=args.length_hi,
        force_lmax=getattr(args, "force_lmax", None),
        k_min=getattr(args, "k_min", 1.0),
        k_max=getattr(args, "k_max", None),
        n_eigen=getattr(args, "n_eigen", 300),
        tol=getattr(args, "tol", 1e-10),
        seed=args.seed,
        variant=getattr(args, "variant", derived_constants.M_PROFILE_DEFAULT),
        out_dir=args.out_dir,
        label=args.label or kind,
        threads=args.threads,
    )


def _cmd_generate(args) -> int:
    from .experiments import _build_cell, _cell_seeds

    spec = _spec_from(args, "spectrum", sizes=(args.size,))
    qg = _build_cell(spec, args.size, _cell_seeds(spec)[0])
    ser.save_quantum_graph(qg, args.output)
    print(f"wrote {args.output}: {qg.graph.vertex_count} vertices, "
          f"{qg.bond_count} bonds, boundary {args.boundary}")
    return 0


def _cmd_spectrum(args) -> int:
    spec = _spec_from(args, "spectrum", sizes=(args.sizes[0],))
    result = run(spec)
    print(f"spectrum: {result.summary['n_eigen']} eigenvalues -> "
          f"{result.paths['spectrum']}")
    if args.figure:
        figures.render_entropy_scatter(result.paths["entropy_csv"], args.figure)
        print(f"figure -> {args.figure}")
    return 0


def _cmd_entropy(args) -> int:
    if len(args.sizes) > 1:
        spec = _spec_from(args, "mean-entropy-vs-size")
        result = run(spec)
        print(f"mean entropy over sizes {spec.sizes} -> {result.paths['summary']}")
        if args.figure:
            figures.render_mean_entropy_vs_size(result.paths["summary"], args.figure)
            print(f"figure -> {args.figure}")
    else:
        spec = _spec_from(args, "entropy-histogram")
        result = run(spec)
        print(f"entropy scatter ({result.summary['n_eigen']} eigenvalues) -> "
              f"{result.paths['entropy_csv']}")
        if args.figure:
            figures.render_entropy_scatter(result.paths["entropy_csv"], args.figure,
                                           summary_json=result.paths.get("summary"))
            print(f"figure -> {args.figure}")
    return 0


def _cmd_star_average(args) -> int:
    spec = _spec_from(args, "star-average")
    result = run(spec)
    for row in result.summary["rows"]:
        print(f"|E|={row['edge_count']}: average {row['weighted_average_a']:.4f} "
              f"(prediction {row['prediction_a']:.4f})")
    print(f"summary -> {result.paths['summary']}")
    if args.figure:
        first = spec.sizes[0]
        figures.render_sec2_histogram(result.paths[f"star_csv_{first}"],
                                      result.paths["summary"], args.figure, size=first)
        print(f"figure -> {args.figure}")
    return 0


def _cmd_bounds(args) -> int:
    spec = _spec_from(args, "bounds-report", sizes=(args.sizes[0],))
    result = run(spec)
    for row in result.summary["bounds"]:
        if "skipped" in row:
            print(f"{row['bound_name']}: {row['skipped']}")
        else:
            state = "ok" if row["satisfied"] else "VIOLATED"
            print(f"{row['bound_name']}: threshold {row['threshold']:.6f}, "
                  f"min margin {row['min_margin_over_spectrum']:.3e} [{state}]")
    print(f"report -> {result.paths['summary']}")
    if result.violations:
        raise BoundViolationError(f"violated bounds: {', '.join(result.violations)}")
    return 0


def _cmd_localize(args) -> int:
    spec = _spec_from(args, "localization", sizes=(args.size,))
    result = run(spec)
    s = result.summary
    print(f"k1 = {s['k1']:.6f}, prediction pi/(2 L_max) = {s['prediction']:.6f} "
          f"({100 * s['relative_gap']:.2f}% apart), mass on longest edge "
          f"{s['mass_on_longest_edge']:.4f}")
    if args.figure:
        figures.render_localized_state(result.paths["masses_csv"], args.figure,
                                       summary_json=result.paths["summary"])
        print(f"figure -> {args.figure}")
    return 0


def _cmd_constants(args) -> int:
    rows = {}
    for variant in ("plain", "two_over_sqrt_pi"):
        rows[variant] = c_neumann_constant(variant, args.quadrature_tol)
    print(f"default profile: {derived_constants.M_PROFILE_DEFAULT}")
    for variant, vals in rows.items():
        mark = " (default)" if variant == derived_constants.M_PROFILE_DEFAULT else ""
        print(f"{variant}{mark}: integral = {vals['integral_value']:.9f}, "
              f"C = {vals['c_neumann']:.9f}")
    print(f"frozen: integral = {derived_constants.C_NEUMANN_INTEGRAL:.9f}, "
          f"C = {derived_constants.C_NEUMANN:.9f}")
    if args.output:
        payload = {"default": derived_constants.M_PROFILE_DEFAULT,
                   "variants": rows,
                   "frozen_integral": derived_constants.C_NEUMANN_INTEGRAL,
                   "frozen_c": derived_constants.C_NEUMANN}
        with open(args.output, "w") as fh:
            json.dump(payload, fh, indent=1)
            fh.write("\n")
        print(f"table -> {args.output}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "spectrum": _cmd_spectrum,
    "entropy": _cmd_entropy,
    "star-average": _cmd_star_average,
    "bounds": _cmd_bounds,
    "localize": _cmd_localize,
    "constants": _cmd_constants,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, parser, argv)
        return _COMMANDS[args.command](args)
    except (ValueError, SchemaError) as exc:
        print(f"parameter error: {exc}", file=sys.stderr)
        return 2
    except (NumericalError, GenerationError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except BoundViolationError as exc:
        print(f"bound violation: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
