"""Command-line front end.

Exit codes: 0 success, 2 bad input (unknown model or figure, unreadable
lattice file, size limits), 3 eigensolver failure, 4 output not writable.
"""

from __future__ import annotations

import argparse
import datetime
import json
import re
import sys
import warnings
from pathlib import Path

from . import __version__
from .eigen import DEFAULT_REALITY_TOL, SolverError, classify_reality, eigenvalues
from .groups import GroupError
from .lattice import (
    HamiltonianFamily,
    LatticeError,
    build_chain,
    build_ho2,
    build_ring,
    hamiltonian_at,
    load_graph,
)
from .perturbation import first_order_corrections
from .symmetry import SizeLimitError, classify_symmetries, find_relabeling
from .sweep import (
    BROKEN,
    FIGURES,
    EPDiagnosticWarning,
    UNBROKEN,
    SweepError,
    figure_data,
    find_exceptional_points,
    format_table,
    sweep,
)

SCHEMA_VERSION = "1.0"
REPORT_DIGITS = 12

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_OUTPUT = 4

BUILTINS = {
    "ring4": "4-site periodic ring, alternating gain/loss (point group C4v)",
    "chain4": "4-site open chain, alternating gain/loss (point group C2)",
    "ho2": "4-site chain relabeled: edges 0-2, 1-2, 1-3, signature (+, +, -, -)",
    "ring{n}": "n-site periodic ring, n even and >= 4",
    "chain{n}": "n-site open chain, n >= 2",
}


class CLIError(Exception):
    def __init__(self, message: str, code: int):
        self.code = code
        super().__init__(message)


def resolve_model(spec: str) -> HamiltonianFamily:
    if spec == "ho2":
        return build_ho2()
    m = re.fullmatch(r"(ring|chain)(\d+)", spec)
    if m:
        build = build_ring if m.group(1) == "ring" else build_chain
        try:
            return build(int(m.group(2)))
        except LatticeError as exc:
            raise CLIError(str(exc), EXIT_INPUT) from None
    path = Path(spec)
    if path.is_file():
        try:
            graph = load_graph(path.read_text())
        except LatticeError as exc:
            raise CLIError(f"{path}: {exc}", EXIT_INPUT) from None
        except OSError as exc:
            raise CLIError(f"{path}: {exc.strerror}", EXIT_INPUT) from None
        return HamiltonianFamily(graph, name=path.name)
    raise CLIError(f"unknown model {spec!r} (not a built-in name or lattice file)", EXIT_INPUT)


def parse_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(x) for x in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None
    if not lo < hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return lo, hi


def _r(x: float) -> float:
    return float(f"{x:.{REPORT_DIGITS}g}") + 0.0


def _c(z: complex) -> list[float]:
    return [_r(z.real), _r(z.imag)]


def _fmt_real(x: float, decimals: int) -> str:
    text = f"{x:.{decimals}f}".rstrip("0").rstrip(".")
    return "0" if text in ("", "-0") else text


def _fmt_complex(z: complex, decimals: int = 9) -> str:
    """Human output: fixed decimals, trailing zeros dropped, rounding noise hidden."""
    re, im = _fmt_real(z.real, decimals), _fmt_real(z.imag, decimals)
    if im == "0":
        return re
    if re == "0":
        return f"{im}i"
    return f"{re}{'' if im.startswith('-') else '+'}{im}i"


def spectrum_record(f: HamiltonianFamily, gamma: float, tol: float) -> dict:
    spec = eigenvalues(hamiltonian_at(f, gamma))
    rep = classify_reality(spec, tol)
    return {
        "gamma": _r(gamma),
        "values": [_c(z) for z in spec.values],
        "residual_bound": _r(spec.residual_bound),
        "real_count": rep.real_count,
        "pair_count": rep.pair_count,
        "phase": UNBROKEN if rep.real_count == f.n else BROKEN,
    }


def model_record(f: HamiltonianFamily) -> dict:
    g = f.graph
    return {
        "name": f.name,
        "n": g.n,
        "edges": [[i, j, _r(w)] for i, j, w in g.edges],
        "signature": [_r(s) for s in g.signature],
    }


def build_report(args) -> dict:
    f = resolve_model(args.model)
    sym = classify_symmetries(f)
    grp = sym.group0
    pert = first_order_corrections(f)
    lo, hi = args.ep_range
    diagnostics: list[str] = []
    with warnings.catch_warnings():
        # diagnostics are carried in the report itself
        warnings.simplefilter("ignore", EPDiagnosticWarning)
        eps = find_exceptional_points(f, lo, hi, args.grid, args.tol, diagnostics=diagnostics)

    report = {
        "schema_version": SCHEMA_VERSION,
        "model": model_record(f),
        "symmetry": {
            "commuting_count": len(sym.commuting),
            "conjugating_count": len(sym.conjugating),
            "parity_count": len(sym.parities),
            "commuting": [list(p.perm) for p in sym.commuting],
            "conjugating": [list(p.perm) for p in sym.conjugating],
            "parities": [list(p.perm) for p in sym.parities],
            "group": {
                "name": grp.name,
                "order": grp.order,
                "abelian": grp.is_abelian,
                "class_sizes": [len(c) for c in grp.classes],
                "element_orders": list(grp.element_orders),
                "irrep_dims": list(grp.irrep_dims) if grp.irrep_dims is not None else None,
            },
        },
        "perturbation": {
            "clusters": [
                {
                    "energy": _r(cl.energy),
                    "multiplicity": cl.multiplicity,
                    "corrections": [_c(z) for z in corr],
                }
                for cl, corr in zip(pert.clusters, pert.corrections)
            ],
            "extremely_broken": pert.extremely_broken,
            "status": "predicted",
        },
        "exceptional_points": {
            "range": [_r(lo), _r(hi)],
            "grid": args.grid,
            "points": [
                {"gamma": _r(ep.gamma), "bracket_width": _r(ep.bracket_width), "min_gap": _r(ep.min_gap)}
                for ep in eps
            ],
            "diagnostics": diagnostics,
        },
        "spectra": [spectrum_record(f, g, args.tol) for g in args.gamma or []],
    }
    if args.compare:
        other = resolve_model(args.compare)
        entry = {"model": other.name, "perm": None}
        if other.n == f.n:
            perm = find_relabeling(f, other)
            entry["perm"] = list(perm.perm) if perm is not None else None
        report["relabeling"] = entry
    if args.meta:
        report["meta"] = {
            "version": __version__,
            "created": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
    return report


def render_report(report: dict) -> str:
    sym = report["symmetry"]
    grp = sym["group"]
    model = report["model"]
    perms = lambda ps: ", ".join("(" + " ".join(map(str, p)) + ")" for p in ps) or "none"
    lines = [
        f"model        {model['name']}  (n = {model['n']}, {len(model['edges'])} edges)",
        f"signature    {model['signature']}",
        "",
        f"commuting    {sym['commuting_count']:>3}  {perms(sym['commuting'])}",
        f"conjugating  {sym['conjugating_count']:>3}  {perms(sym['conjugating'])}",
        f"parities     {sym['parity_count']:>3}  {perms(sym['parities'])}",
        f"point group  {grp['name']}  order {grp['order']}, "
        f"{len(grp['class_sizes'])} classes, irrep dims {grp['irrep_dims']}",
        "",
        "first-order corrections (E0: lambda1 ...)",
    ]
    for cl in report["perturbation"]["clusters"]:
        corr = "  ".join(_fmt_complex(complex(*z)) for z in cl["corrections"])
        lines.append(f"  {_fmt_complex(complex(cl['energy'])):>14} x{cl['multiplicity']}:  {corr}")
    broken = report["perturbation"]["extremely_broken"]
    lines.append(f"extremely broken (predicted): {'yes' if broken else 'no'}")
    lines.append("")
    ep = report["exceptional_points"]
    lo, hi = ep["range"]
    found = ", ".join(f"{p['gamma']:.10g}" for p in ep["points"]) or "none"
    lines.append(f"exceptional points in [{lo:g}, {hi:g}]: {found}")
    lines.extend(f"  note: {d}" for d in ep["diagnostics"])
    for rec in report["spectra"]:
        vals = ", ".join(_fmt_complex(complex(*z)) for z in rec["values"])
        lines.append(f"spectrum at gamma = {rec['gamma']:g} [{rec['phase']}]: {vals}")
    if "relabeling" in report:
        rel = report["relabeling"]
        if rel["perm"] is None:
            lines.append(f"no site relabeling maps {model['name']} onto {rel['model']}")
        else:
            p = " ".join(map(str, rel["perm"]))
            lines.append(
                f"relabeling ({p}) maps {model['name']} onto {rel['model']}: the families are isospectral"
            )
    return "\n".join(lines) + "\n"


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def cmd_models(args) -> int:
    for name, desc in BUILTINS.items():
        print(f"{name:<10} {desc}")
        if args.verbose and "{" not in name:
            g = resolve_model(name).graph
            edges = " ".join(f"{i}-{j}" for i, j, _ in g.edges)
            sig = " ".join(f"{s:+g}" for s in g.signature)
            print(f"{'':<10}   edges: {edges}")
            print(f"{'':<10}   signature: {sig}")
    return EXIT_OK


def cmd_analyze(args) -> int:
    report = build_report(args)
    sys.stdout.write(dump_json(report) if args.json else render_report(report))
    return EXIT_OK


def cmd_spectrum(args) -> int:
    f = resolve_model(args.model)
    if args.json:
        rec = spectrum_record(f, args.gamma, args.tol)
        sys.stdout.write(dump_json({"schema_version": SCHEMA_VERSION, "model": f.name, **rec}))
        return EXIT_OK
    spec = eigenvalues(hamiltonian_at(f, args.gamma))
    rep = classify_reality(spec, args.tol)
    phase = UNBROKEN if rep.real_count == f.n else BROKEN
    print(f"{f.name} at gamma = {args.gamma:g}  [{phase}]")
    for z in spec.values:
        print(f"  {_fmt_complex(z)}")
    return EXIT_OK


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise CLIError(f"cannot write {out}: {exc.strerror}", EXIT_OUTPUT) from None


def cmd_sweep(args) -> int:
    f = resolve_model(args.model)
    lo, hi = args.range
    result = sweep(f, lo, hi, args.steps, args.tol)
    if args.json:
        payload = {
            "schema_version": SCHEMA_VERSION,
            "model": f.name,
            "points": [
                {
                    "gamma": _r(g),
                    "values": [_c(z) for z in s.values],
                    "real_count": c,
                    "phase": ph,
                }
                for g, s, c, ph in zip(result.gammas, result.spectra, result.real_counts, result.phases)
            ],
        }
        _write(dump_json(payload), args.output)
        return EXIT_OK
    rows = [
        (g, *[z.real for z in s.values], *[z.imag for z in s.values])
        for g, s in zip(result.gammas, result.spectra)
    ]
    _write(format_table(rows, f.n), args.output)
    return EXIT_OK


def cmd_figure(args) -> int:
    if args.fig not in FIGURES:
        raise CLIError(f"unknown figure {args.fig!r}; choose from {', '.join(sorted(FIGURES))}", EXIT_INPUT)
    rows = figure_data(args.fig)
    _write(format_table(rows, (len(rows[0]) - 1) // 2), args.output)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="antisym",
        description="Antiunitary symmetry analysis of gain/loss lattice Hamiltonians.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("models", help="list built-in models")
    p.add_argument("--verbose", "-v", action="store_true", help="show edge lists and signatures")
    p.set_defaults(func=cmd_models)

    def common(p, json_flag=True):
        p.add_argument("model", help="built-in model name or lattice file")
        p.add_argument("--tol", type=float, default=DEFAULT_REALITY_TOL, help="relative reality tolerance")
        if json_flag:
            p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("analyze", help="symmetries, point group, perturbation prediction, EPs")
    common(p)
    p.add_argument("--ep-range", type=parse_range, default=(0.0, 2.0), metavar="LO:HI")
    p.add_argument("--grid", type=int, default=64, help="EP scan grid size (>= 16)")
    p.add_argument("--gamma", type=float, action="append", help="also report the spectrum here (repeatable)")
    p.add_argument("--compare", metavar="MODEL", help="search a site relabeling onto MODEL")
    p.add_argument("--meta", action="store_true", help="add version and timestamp to JSON output")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("spectrum", help="eigenvalues at one gamma")
    common(p)
    p.add_argument("--gamma", type=float, required=True)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("sweep", help="spectra over a gamma range")
    common(p)
    p.add_argument("--range", type=parse_range, default=(0.0, 2.0), metavar="LO:HI")
    p.add_argument("--steps", type=int, default=201)
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("figure", help="eigenvalue table behind fig2 (ring4) or fig4 (chain4)")
    p.add_argument("fig", help="fig2 or fig4")
    p.add_argument("-o", "--output", default="-", help="output path, '-' for stdout")
    p.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if getattr(args, "grid", 16) < 16:
        parser.error("--grid must be at least 16")
    if getattr(args, "steps", 2) < 2:
        parser.error("--steps must be at least 2")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"antisym: error: {exc}", file=sys.stderr)
        return exc.code
    except (SolverError, SweepError) as exc:
        print(f"antisym: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (SizeLimitError, GroupError, LatticeError) as exc:
        print(f"antisym: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
