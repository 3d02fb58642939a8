"""Command-line entry point: ``toboggan <subcommand> [flags]``.

Exit status is 0 on success, 2 for invalid input and 1 when a computation
fails. ``--config FILE`` supplies flag values from a JSON object (keys are
the long flag names with ``-`` replaced by ``_``); explicit flags win.
Without ``--output`` results go to stdout, or into ``$TOBOGGAN_OUTPUT_DIR``
when that variable is set.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .contour import ContourError, analyze, bg_line, liouville_image, sample, wedge_join
from .liouville import TransformJob, dictionary_report, fold_centrifugal, transform_potential
from .potential import as_rational, harmonic, potential_from_dict
from .qe import QEParams, qe_solve
from .serialize import dumps, to_csv
from .spectra import ConfigurationError, GridSpec, solve_spectrum
from .svg import SvgOptions, figures
from .wedges import SIGNS, asymptotic_wedges

ENV_OUTPUT = "TOBOGGAN_OUTPUT_DIR"

log = logging.getLogger("toboggan")


class UsageError(ValueError):
    pass


def _rational(text: Any, what: str) -> Fraction:
    try:
        if isinstance(text, float):
            return Fraction(text).limit_denominator(10 ** 9)
        return as_rational(text if not isinstance(text, str) or "." not in text else Fraction(text))
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{what}: not a rational number: {text!r}") from exc


def _number(text: Any, what: str) -> float:
    try:
        value = float(Fraction(text) if isinstance(text, str) and "/" in text else text)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"{what}: not a number: {text!r}") from exc
    if not math.isfinite(value):
        raise UsageError(f"{what} must be finite")
    return value


def _positive_int(text: Any, what: str) -> int:
    try:
        value = int(text)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"{what}: not an integer: {text!r}") from exc
    if value < 1 or value != float(text):
        raise UsageError(f"{what} must be a positive integer")
    return value


def load_potential(text: str):
    """Potential from a JSON file path, inline JSON, or ``harmonic[:a]``."""
    if text.startswith("harmonic"):
        _, _, a = text.partition(":")
        return harmonic(_rational(a, "screening") if a else None)
    if text.lstrip().startswith("{"):
        data = json.loads(text)
    else:
        path = Path(text)
        if not path.is_file():
            raise UsageError(f"potential file not found: {text}")
        data = json.loads(path.read_text())
    try:
        return potential_from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad potential: {exc}") from exc


def build_contour(args):
    kind = args.contour
    eps = _number(args.eps, "eps")
    if kind == "bg":
        c = bg_line(eps)
    elif kind == "wedge-join":
        c = wedge_join(_positive_int(args.n, "n"), _number(args.p, "p"), eps, _number(args.ell, "ell"))
    else:
        raise UsageError(f"unknown contour kind {kind!r}")
    if args.liouville_alpha is not None:
        c = liouville_image(c, _rational(args.liouville_alpha, "liouville-alpha"))
    return c


def _add_contour_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--contour", choices=("bg", "wedge-join"), default="bg", help="contour family")
    p.add_argument("--eps", default=0.1, help="distance below the branch point")
    p.add_argument("--n", default=1, help="wedge index for wedge-join")
    p.add_argument("--p", default=2, help="wedge order D/2+1 for wedge-join")
    p.add_argument("--ell", default=1.0, help="angular switching length for wedge-join")
    p.add_argument("--liouville-alpha", default=None, help="map the contour by i*x = (i*y)**alpha")


def cmd_wedges(args):
    D = _positive_int(args.D, "D")
    if args.sign not in SIGNS:
        raise UsageError(f"sign must be one of {SIGNS}")
    ws = asymptotic_wedges(D, args.sign, _positive_int(args.count, "count"))
    rows = [w.as_dict() for w in ws]
    header = ["label", "side", "index", "sign", "lower", "upper", "lower_pi", "upper_pi"]
    text = "\n".join(
        f"{w.label:<14} ({w.lower_pi}*pi, {w.upper_pi}*pi)  [{w.ansatz_sign}]" for w in ws
    ) + "\n"
    return {"D": D, "sign": args.sign, "wedges": rows}, (header, [[r[h] for h in header] for r in rows]), text


def cmd_contour(args):
    c = build_contour(args)
    D = _positive_int(args.D, "D")
    report = analyze(c, D)
    samples = sample(c, _number(args.s_max, "s-max"), _positive_int(args.samples, "samples"))
    payload = {"contour": c.fingerprint(), "D": D, "name": report.name, **report.as_dict(), "samples": samples}
    rows = list(zip(samples["s"], samples["re_x"], samples["im_x"], samples["theta"]))
    text = (
        f"{c.fingerprint()}\nleft: {report.left_wedge.label}  right: {report.right_wedge.label}\n"
        f"sweep: {report.total_sweep / math.pi:.6g}*pi  cut crossings: {report.cut_crossings}\n"
    )
    return payload, (["s", "re_x", "im_x", "theta"], rows), text


def cmd_transform(args):
    lam = args.lam if args.lam is not None else ("1/9" if args.dictionary else "1")
    job = TransformJob(_rational(args.alpha, "alpha"), _rational(lam, "lam"), harmonic=not args.no_harmonic)
    if args.dictionary:
        text = dictionary_report(job.alpha, job.lam) + "\n"
        return {"dictionary": text.splitlines()}, None, text
    if args.potential is None:
        raise UsageError("transform needs --potential (or --dictionary)")
    old = load_potential(args.potential)
    energy = None if args.energy is None else _rational(args.energy, "energy")
    res = transform_potential(old, job, energy)
    folded = fold_centrifugal(res)
    payload = {
        "alpha": str(job.alpha),
        "lam": str(job.lam),
        "exponent_map": [[str(a), str(b)] for a, b in res.exponent_map],
        "new_potential": _exact_dict(res.new_potential),
        "folded_potential": _exact_dict(folded),
        "new_energy": str(res.new_energy),
        "energy_exponent": str(res.energy_exponent),
        "energy_coupling": str(res.energy_coupling),
        "energy_role": res.energy_role,
    }
    rows = [[str(t.exponent), str(t.coupling)] for t in folded.terms]
    text = "\n".join(f"{c:>12} (iy)^{b}" for b, c in rows) + f"\ncentrifugal {folded.centrifugal}\n{res.energy_role}\n"
    return payload, (["exponent", "coupling"], rows), text


def _exact_dict(spec) -> dict:
    return {
        "basis": spec.basis,
        "terms": [[str(t.coupling), str(t.exponent)] for t in spec.terms],
        "centrifugal": None if spec.centrifugal is None else str(spec.centrifugal),
    }


def cmd_qe(args):
    params = QEParams(_positive_int(args.M, "M"), _positive_int(args.N, "N"),
                      _number(args.alpha, "alpha"), _number(args.beta, "beta"))
    e_box = _number(args.e_box, "e-box")
    step = _number(args.step, "step")
    if e_box <= 0 or step <= 0:
        raise UsageError("e-box and step must be positive")
    sols = qe_solve(params, e_box=e_box, step=step, include_complex=args.complex)
    payload = {
        "M": params.M, "N": params.N, "alpha": params.alpha, "beta": params.beta,
        "L": str(params.L), "g4": params.g4, "g6": params.g6, "g8": params.g8,
        "count": len(sols),
        "solutions": [s.as_dict(params) for s in sols],
    }
    if not sols:
        payload["note"] = f"no solutions with |E| <= {e_box}"
    rows = [[complex(s.E).real, complex(s.E).imag, complex(s.g2).real, complex(s.g2).imag, params.g4, s.residual, s.flagged]
            for s in sols]
    text = "".join(f"E={s.E}  g2={s.g2}  residual={s.residual:.2e}\n" for s in sols) or payload["note"] + "\n"
    return payload, (["E_re", "E_im", "g2_re", "g2_im", "g4", "residual", "flagged"], rows), text


def cmd_spectrum(args):
    pot = load_potential(args.potential)
    c = build_contour(args)
    s_max = _number(args.s_max, "s-max")
    grid = GridSpec(-s_max, s_max, _positive_int(args.points, "points"))
    tol = None if args.tol is None else _number(args.tol, "tol")
    spec = solve_spectrum(pot, c, grid, k=_positive_int(args.k, "k"), extrapolate=not args.no_extrapolate,
                          reality_tolerance=tol)
    payload = spec.as_dict()
    rows = [[z.real, z.imag] for z in spec.eigenvalues]
    text = "".join(f"{z.real:.10f} {z.imag:+.3e}i\n" for z in spec.eigenvalues)
    return payload, (["re", "im"], rows), text


def cmd_figures(args):
    outdir = Path(args.outdir or os.environ.get(ENV_OUTPUT) or "figures")
    outdir.mkdir(parents=True, exist_ok=True)
    opts = SvgOptions(size=_positive_int(args.size, "size"))
    written = []
    for name, svg in figures(opts).items():
        path = outdir / f"{name}.svg"
        path.write_text(svg)
        written.append(str(path))
    text = "".join(p + "\n" for p in written)
    return {"written": written}, None, text


def cmd_verify(args):
    from .verify import run_checks

    results = run_checks(quick=args.quick)
    rows = [[r.name, r.passed, r.detail] for r in results]
    width = max(len(r.name) for r in results)
    text = "".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}\n" for r in results)
    payload = {"passed": all(r.passed for r in results), "checks": [r.as_dict() for r in results]}
    return payload, (["check", "passed", "detail"], rows), text


COMMANDS: dict[str, Callable] = {
    "wedges": cmd_wedges,
    "contour": cmd_contour,
    "transform": cmd_transform,
    "qe": cmd_qe,
    "spectrum": cmd_spectrum,
    "figures": cmd_figures,
    "verify": cmd_verify,
}

DEFAULT_FORMAT = {"wedges": "json", "contour": "json", "transform": "json", "qe": "json",
                  "spectrum": "json", "figures": "text", "verify": "text"}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toboggan", description="PT-symmetric spectra on complex and multi-sheet contours")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="JSON file with flag values")
        p.add_argument("--format", choices=("json", "csv", "text"), default=None)
        p.add_argument("--output", default=None, help="output file (default: stdout)")
        p.add_argument("-v", "--verbose", action="store_true")
        return p

    p = add("wedges", "asymptotic decay sectors")
    p.add_argument("--D", default=10, help="even dominant exponent")
    p.add_argument("--sign", default="minus", help="minus or plus")
    p.add_argument("--count", default=3)

    p = add("contour", "classify and sample a contour")
    _add_contour_flags(p)
    p.add_argument("--D", default=2)
    p.add_argument("--s-max", default=6.0)
    p.add_argument("--samples", default=25)

    p = add("transform", "Liouville change of variables")
    p.add_argument("--potential", default=None, help="JSON file, inline JSON or harmonic[:a]")
    p.add_argument("--alpha", default="3")
    p.add_argument("--lam", default=None, help="perturbation strength (default 1, or 1/9 with --dictionary)")
    p.add_argument("--energy", default=None)
    p.add_argument("--no-harmonic", action="store_true", help="do not add the -(ix)^2 term")
    p.add_argument("--dictionary", action="store_true", help="print the screened/decadic dictionary")

    p = add("qe", "quasi-exact decadic solutions")
    p.add_argument("--M", default=1)
    p.add_argument("--N", default=1)
    p.add_argument("--alpha", default=0.0)
    p.add_argument("--beta", default=0.0)
    p.add_argument("--e-box", default=40.0, help="search |E| <= e-box")
    p.add_argument("--step", default=0.01, help="scan step in E")
    p.add_argument("--complex", action="store_true", help="also return complex (E, g2) pairs")

    p = add("spectrum", "numerical spectrum on a contour")
    p.add_argument("--potential", default="harmonic")
    _add_contour_flags(p)
    p.add_argument("--s-max", default=8.0)
    p.add_argument("--points", default=801)
    p.add_argument("--k", default=6)
    p.add_argument("--tol", default=None, help="absolute reality tolerance")
    p.add_argument("--no-extrapolate", action="store_true")

    p = add("figures", "write the seven contour drawings as SVG")
    p.add_argument("--outdir", default=None)
    p.add_argument("--size", default=480)

    p = add("verify", "run the acceptance checks")
    p.add_argument("--quick", action="store_true", help="skip the slow spectral checks")
    return parser


def parse(argv: list[str]) -> argparse.Namespace:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    parser = build_parser()
    if known.config:
        try:
            cfg = json.loads(Path(known.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {known.config}: {exc}") from exc
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        if cfg.get("command") and not any(a in COMMANDS for a in argv):
            argv = [cfg["command"], *argv]
        cfg = {k: v for k, v in cfg.items() if k != "command"}
        explicit = parser.parse_args(argv)
        if not explicit.command:
            raise UsageError("a subcommand is required")
        unknown = sorted(set(cfg) - set(vars(explicit)))
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
        sub.choices[explicit.command].set_defaults(**cfg)
    args = parser.parse_args(argv)
    if not args.command:
        raise UsageError("a subcommand is required")
    return args


def _emit(args, payload, table, text) -> None:
    fmt = args.format or DEFAULT_FORMAT[args.command]
    if fmt == "json":
        body = dumps(payload)
    elif fmt == "csv":
        if table is None:
            raise UsageError(f"{args.command} has no CSV form")
        body = to_csv(*table)
    else:
        body = text
    target = args.output
    if target is None and os.environ.get(ENV_OUTPUT) and args.command != "figures":
        ext = {"json": "json", "csv": "csv", "text": "txt"}[fmt]
        target = str(Path(os.environ[ENV_OUTPUT]) / f"{args.command}.{ext}")
    if target is None:
        sys.stdout.write(body)
    else:
        Path(target).parent.mkdir(parents=True, exist_ok=True)
        Path(target).write_text(body)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
        payload, table, text = COMMANDS[args.command](args)
        _emit(args, payload, table, text)
    except (UsageError, ContourError, ConfigurationError, ValueError, TypeError) as exc:
        print(f"toboggan: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # computation failure
        print(f"toboggan: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    if args.command == "verify" and not payload["passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
