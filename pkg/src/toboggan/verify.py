"""Acceptance checks, runnable from the CLI (``toboggan verify``) and from pytest.

Each check compares the package against a closed form or an independent
computation and returns a :class:`CheckResult`; none needs network access.
"""

from __future__ import annotations

import contextlib
import io
import math
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable

import numpy as np

from .contour import analyze, bg_line, liouville_image, wedge_join
from .liouville import SCREENED_EXPONENTS, TransformJob, fold_centrifugal, screened_potential, transform_potential
from .potential import UnwrappedPoint, canonical, harmonic, make_potential
from .qe import QEParams, m3_locus, ode_residual, qe_solve
from .spectra import GridSpec, compare_spectra, solve_spectrum
from .wedges import asymptotic_wedges

HARMONIC_GRID = GridSpec(-8.0, 8.0, 1601)
DECADIC_GRID = GridSpec(-3.0, 3.0, 1601)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


def harmonic_levels(alpha: Fraction, k: int = 4) -> list[float]:
    """``4n + 2 -+ 2 alpha``, the lowest ``k`` of them."""
    levels = sorted(float(4 * n + 2 + s * 2 * alpha) for n in range(k) for s in (-1, 1))
    return levels[:k]


def check_wedges() -> CheckResult:
    ws = {w.label: w for w in asymptotic_wedges(10, "minus", 3)}
    first, third = ws["first right"], ws["third right"]
    got = [(first.lower_pi, first.upper_pi), (third.lower_pi, third.upper_pi)]
    want = [(Fraction(-1, 2) + Fraction(1, 12), Fraction(-1, 2) + Fraction(3, 12)),
            (Fraction(-1, 2) + Fraction(5, 12), Fraction(-1, 2) + Fraction(7, 12))]
    return CheckResult("wedge intervals (D=10, minus)", got == want,
                       f"first right {got[0][0]}..{got[0][1]} pi, third right {got[1][0]}..{got[1][1]} pi")


def _harmonic_check(eps: float) -> CheckResult:
    worst = 0.0
    parts = []
    for a in (Fraction(1, 2), Fraction(3, 4)):
        spec = solve_spectrum(harmonic(a), bg_line(eps), HARMONIC_GRID)
        got = spec.real_levels()[:4]
        want = harmonic_levels(a)
        err = max(abs(g - w) for g, w in zip(got, want)) if len(got) == 4 else math.inf
        worst = max(worst, err)
        parts.append(f"alpha={a}: max err {err:.2e}")
    return CheckResult(f"harmonic levels on bg_line({eps})", worst < 1e-3, "; ".join(parts))


def check_harmonic() -> CheckResult:
    return _harmonic_check(0.1)


def check_epsilon() -> CheckResult:
    return _harmonic_check(0.5)


def check_qe_loci() -> CheckResult:
    worst = {1: 0.0, 2: 0.0, 3: 0.0}
    count = 0
    for M in (1, 2, 3):
        for N in range(1, 6):
            for a in (-1, 0, 1):
                for b in (-1, 0, 1):
                    p = QEParams(M, N, a, b)
                    for s in qe_solve(p):
                        count += 1
                        if M == 1:
                            dev = abs(s.E)
                        elif M == 2:
                            dev = abs(s.g2 - s.E ** 2 / 4)
                        elif abs(s.E) > 0.1:
                            dev = abs(s.g2 - m3_locus(p, s.E))
                        else:
                            continue
                        worst[M] = max(worst[M], dev)
    ok = worst[1] == 0 and worst[2] < 1e-10 and worst[3] < 1e-8 and count > 0
    return CheckResult("QE loci (M=1,2,3; N<=5)", ok,
                       f"{count} solutions; max dev M1 {worst[1]:.1e}, M2 {worst[2]:.1e}, M3 {worst[3]:.1e}")


def _ray_points() -> UnwrappedPoint:
    return UnwrappedPoint.from_x_angle(np.linspace(0.5, 2.0, 20), np.zeros(20))


def check_qe_exact() -> CheckResult:
    problems = []
    worst = 0.0
    p = QEParams(1, 1, 0, 0)
    sols = qe_solve(p)
    if len(sols) != 1 or (sols[0].E, sols[0].g2, p.g4) != (0.0, 0.0, -4):
        problems.append(f"M=1 N=1 gave {[(s.E, s.g2) for s in sols]}")
    for s in sols:
        worst = max(worst, ode_residual(s, p, _ray_points()))
    for a in (-1.0, 0.0, 0.5, 1.0):
        for b in (-1.0, 0.0, 0.5, 1.0):
            p = QEParams(2, 1, a, b)
            sols = qe_solve(p)
            ok = (len(sols) == 1 and abs(sols[0].E + 2 * b) < 1e-12 and abs(sols[0].g2 - b * b) < 1e-12
                  and p.g4 == 2 * a * b - 2)
            if not ok:
                problems.append(f"M=2 N=1 alpha={a} beta={b}: {[(s.E, s.g2) for s in sols]}")
            for s in sols:
                worst = max(worst, ode_residual(s, p, _ray_points()))
    ok = not problems and worst < 1e-8
    return CheckResult("QE exact solutions", ok, "; ".join(problems) or f"max ODE residual {worst:.1e}")


def check_qe_in_spectrum() -> CheckResult:
    p = QEParams(1, 1, 0, 0)
    (sol,) = qe_solve(p)
    contour = wedge_join(3, 6)
    name = analyze(contour, 10).name
    spec = solve_spectrum(p.potential(sol.g2), contour, DECADIC_GRID)
    levels = spec.real_levels()
    dist = min((abs(e - sol.E) for e in levels), default=math.inf)
    return CheckResult("QE level in decadic spectrum", dist < 5e-3 and name == "third-third",
                       f"{name} contour, nearest level {dist:.1e} from E={sol.E}")


def check_winding() -> CheckResult:
    a = Fraction(3, 4)
    s1 = solve_spectrum(harmonic(a), wedge_join(1, 2), HARMONIC_GRID)
    s3 = solve_spectrum(harmonic(a), wedge_join(3, 2), HARMONIC_GRID)
    rep = compare_spectra(s1, s3, 4, 1e-2)
    return CheckResult("winding invariance n=1 vs n=3", rep.passed, f"max diff {rep.max_difference:.1e}")


def check_liouville() -> CheckResult:
    job = TransformJob(3, Fraction(1, 9))
    got = {b: job.new_exponent(b) for b in SCREENED_EXPONENTS}
    want = dict(zip(SCREENED_EXPONENTS, map(Fraction, (8, 6, 4, 2, 0, -2))))
    ok = got == want and job.new_exponent(2) == 10
    f = Fraction(5, 7)
    res = transform_potential(screened_potential(f=f), job)
    ok &= fold_centrifugal(res).centrifugal == 2 - f
    coeffs = dict(zip("abcdef", map(Fraction, (3, -2, 5, 7, -11, 13))))
    W = screened_potential(**coeffs)
    E = Fraction(17, 5)
    first = transform_potential(W, job, E)
    back = transform_potential(first.new_potential, TransformJob(Fraction(1, 3), 1, harmonic=False), first.new_energy)
    # a constant in the original potential comes back as an energy shift
    c0 = job.lam * W.coupling(0)
    original = make_potential([(-1, 2), *((job.lam * t.coupling, t.exponent) for t in W.terms if t.exponent != 0)])
    round_trip = canonical(back.new_potential) == canonical(original) and back.new_energy == E - c0
    return CheckResult("Liouville dictionary (alpha=3, lam=1/9)", ok and round_trip,
                       f"exponents {'ok' if got == want else got}; 2-f fold ok={fold_centrifugal(res).centrifugal == 2 - f};"
                       f" round trip exact={round_trip}")


def check_wedge_index() -> CheckResult:
    bad = []
    for n in (1, 2, 3, 4):
        rep = analyze(liouville_image(wedge_join(n, 6), 3), 2)
        if not (rep.left_wedge.index == rep.right_wedge.index == n
                and rep.left_wedge.side == "left" and rep.right_wedge.side == "right"):
            bad.append(f"n={n} -> {rep.name}")
    return CheckResult("wedge index under alpha=3 (p=6 -> p=2)", not bad, ", ".join(bad) or "n=1..4 preserved")


def check_determinism() -> CheckResult:
    from .cli import main

    runs = []
    with tempfile.TemporaryDirectory() as tmp, contextlib.redirect_stdout(io.StringIO()):
        for k in range(2):
            out = Path(tmp) / str(k)
            main(["figures", "--outdir", str(out / "fig")])
            main(["wedges", "--D", "10", "--output", str(out / "wedges.json")])
            main(["qe", "--M", "2", "--N", "3", "--alpha", "1", "--beta", "-1", "--output", str(out / "qe.json")])
            main(["transform", "--potential", '{"terms": [[1, "4/3"], [2, "-2"]]}', "--alpha", "3",
                  "--lam", "1/9", "--output", str(out / "transform.json")])
            main(["contour", "--contour", "wedge-join", "--n", "3", "--output", str(out / "contour.json")])
            runs.append({p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()})
    same = runs[0] == runs[1] and len(runs[0]) == 11
    return CheckResult("byte-identical outputs", same, f"{len(runs[0])} files compared")


CHECKS: list[tuple[Callable[[], CheckResult], bool]] = [
    (check_wedges, False),
    (check_harmonic, True),
    (check_epsilon, True),
    (check_qe_loci, False),
    (check_qe_exact, False),
    (check_qe_in_spectrum, True),
    (check_winding, True),
    (check_liouville, False),
    (check_wedge_index, False),
    (check_determinism, False),
]


def run_checks(quick: bool = False) -> list[CheckResult]:
    out = []
    for check, slow in CHECKS:
        if quick and slow:
            continue
        try:
            out.append(check())
        except Exception as exc:  # report, keep going
            out.append(CheckResult(check.__name__, False, f"{type(exc).__name__}: {exc}"))
    return out
