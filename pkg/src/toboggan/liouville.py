"""Liouville changes of variables ``i*x = (i*y)**alpha``, ``psi = y**rho * phi``.

With ``rho = (alpha - 1)/2`` the first-derivative terms cancel and

    -psi'' + [-(ix)^2 + lam * W(ix)] psi = E psi

turns into an equation of the same Schrodinger form in ``y`` with zero energy,

    -phi'' + (alpha^2 - 1)/(4 y^2) phi
           + alpha^2 (iy)^(2 alpha - 2) [-(iy)^(2 alpha) + lam W((iy)^alpha) - E] phi = 0.

Any constant (exponent-zero) term ``t`` of the new potential is then read as
the new energy ``-t``. All exponent and coupling bookkeeping is exact when the
inputs are ``int``/``Fraction``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .potential import PotentialSpec, as_rational, basis_convert, make_potential


def _exact(value):
    """Keep ints/Fractions exact, turn everything else into float."""
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Fraction(value)
    return float(value)


@dataclass(frozen=True)
class TransformJob:
    """Map parameters. ``lam`` scales only the perturbation ``W``.

    ``harmonic`` adds the unperturbed, lam-exempt ``-(ix)**2`` term to the
    input; switch it off to transform an arbitrary full potential.
    """

    alpha: Any
    lam: Any = 1
    harmonic: bool = True

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha!r}")
        object.__setattr__(self, "alpha", _exact(self.alpha))
        object.__setattr__(self, "lam", _exact(self.lam))

    @property
    def rho(self):
        return (self.alpha - 1) / 2

    def new_exponent(self, beta) -> Fraction:
        """``beta -> alpha*beta + 2*alpha - 2``; needs a rational alpha."""
        if not isinstance(self.alpha, Fraction):
            raise ValueError("exact exponent arithmetic needs a rational alpha")
        return self.alpha * as_rational(beta) + 2 * self.alpha - 2


@dataclass(frozen=True)
class TransformResult:
    """Outcome of :func:`transform_potential`.

    ``new_potential`` is in the ``(iy)^b`` basis with centrifugal strength
    ``(alpha**2 - 1)/4``. The old energy enters through a term of coupling
    ``energy_coupling * E_old`` at ``energy_exponent``; when a numeric energy
    was supplied that term is already inside ``new_potential``.
    ``new_energy`` is minus the constant term removed from the potential.
    """

    job: TransformJob
    new_potential: PotentialSpec
    new_energy: Any
    energy_exponent: Fraction
    energy_coupling: Any
    energy_included: bool
    exponent_map: tuple[tuple[Fraction, Fraction], ...] = field(default=())

    @property
    def energy_role(self) -> str:
        a = self.job.alpha
        where = (
            f"old energy E enters as {self.energy_coupling}*E*(iy)^({self.energy_exponent})"
        )
        if self.energy_exponent == 0:
            where += " and so shifts the new energy directly"
        new = f"new energy = {self.new_energy}"
        mapped = [b for b, nb in self.exponent_map if nb == 0]
        if mapped:
            new += f" (from the old exponent {mapped[0]} term, which maps to exponent 0)"
        return f"alpha={a}: {where}; {new}"


def _merge(terms: dict, coupling, exponent: Fraction) -> None:
    terms[exponent] = terms[exponent] + coupling


def transform_potential(old: PotentialSpec, job: TransformJob, energy: Any = None) -> TransformResult:
    """Apply the change of variables to ``-(ix)**2 + lam * old`` (or just ``old``).

    ``energy=None`` leaves the old energy symbolic (reported, not folded in).
    A centrifugal strength on ``old`` is treated as the term ``-gamma (ix)**-2``.
    """
    if old.basis != "ix":
        old = basis_convert(old, "ix")
    a = job.alpha
    scale = job.lam * a * a
    terms: dict[Fraction, Any] = defaultdict(int)
    mapping = []
    perturbation = [(t.coupling, t.exponent) for t in old.terms]
    if old.centrifugal:
        perturbation.append((-old.centrifugal, Fraction(-2)))
    for coupling, beta in perturbation:
        nb = job.new_exponent(beta)
        mapping.append((beta, nb))
        _merge(terms, scale * _exact(coupling), nb)
    if job.harmonic:
        nb = job.new_exponent(2)
        mapping.append((Fraction(2), nb))
        _merge(terms, -a * a, nb)
    e_exp = 2 * a - 2
    included = energy is not None
    if included:
        _merge(terms, -a * a * _exact(energy), e_exp)
    constant = terms.pop(Fraction(0), 0)
    new = make_potential(
        [(c, b) for b, c in terms.items()],
        centrifugal=(a * a - 1) / 4,
    )
    return TransformResult(
        job=job,
        new_potential=new,
        new_energy=-constant,
        energy_exponent=e_exp,
        energy_coupling=-a * a,
        energy_included=included,
        exponent_map=tuple(mapping),
    )


def fold_centrifugal(result: TransformResult | PotentialSpec) -> PotentialSpec:
    """Combine the generated ``(alpha**2-1)/4`` with any ``(iy)**-2`` term.

    Uses ``(iy)**-2 = -y**-2``; for the screened oscillator at ``alpha=3``,
    ``lam=1/9`` the strength is ``2 - f``.
    """
    spec = result.new_potential if isinstance(result, TransformResult) else result
    if spec.basis != "ix":
        spec = basis_convert(spec, "ix")
    c = spec.coupling(-2)
    gamma = (spec.centrifugal or 0) - c
    return make_potential(
        [(t.coupling, t.exponent) for t in spec.terms if t.exponent != -2],
        centrifugal=gamma,
    )


def scale_coordinates(spec: PotentialSpec, sigma) -> tuple[PotentialSpec, Any]:
    """Rescale ``x = sigma*y``.

    The coupling at exponent ``b`` becomes ``g * sigma**(b + 2)`` and energies
    are multiplied by the returned ``sigma**2``.
    """
    if not sigma > 0:
        raise ValueError(f"sigma must be positive, got {sigma!r}")
    if spec.basis != "ix":
        spec = basis_convert(spec, "ix")
    exact = isinstance(sigma, (int, Fraction)) and not isinstance(sigma, bool)
    terms = []
    for t in spec.terms:
        power = t.exponent + 2
        if exact and power.denominator == 1 and isinstance(t.coupling, (int, Fraction)):
            factor = Fraction(sigma) ** power.numerator
        else:
            factor = float(sigma) ** float(power)
        terms.append((t.coupling * factor, t.exponent))
    energy_scale = Fraction(sigma) ** 2 if exact else float(sigma) ** 2
    return make_potential(terms, spec.centrifugal, basis="ix"), energy_scale


def normalizing_scale(spec: PotentialSpec) -> float:
    """``sigma`` that makes the magnitude of the leading coupling one."""
    lead = spec.terms[0]
    return abs(float(lead.coupling)) ** (-1.0 / float(lead.exponent + 2))


SCREENED_SYMBOLS = ("a", "b", "c", "d", "e", "f")
SCREENED_EXPONENTS = tuple(Fraction(k, 3) for k in (4, 2, 0, -2, -4, -6))


def screened_potential(a=0, b=0, c=0, d=0, e=0, f=0) -> PotentialSpec:
    """Perturbation ``W = a(ix)^(4/3) + b(ix)^(2/3) + c + d(ix)^(-2/3) + e(ix)^(-4/3) + f(ix)^(-2)``."""
    return make_potential(list(zip((a, b, c, d, e, f), SCREENED_EXPONENTS)))


@dataclass(frozen=True)
class DictionaryEntry:
    symbol: str
    old_exponent: Fraction
    new_exponent: Fraction
    target: str
    factor: Any
    printed: str
    agrees: bool

    def line(self) -> str:
        mark = "ok" if self.agrees else "DIFFERS"
        return (
            f"{self.symbol:>3}  (ix)^{str(self.old_exponent):<5} -> {self.target:<12}"
            f" factor {str(self.factor):<6} printed: {self.printed:<18} [{mark}]"
        )


def dictionary(alpha=3, lam=Fraction(1, 9)) -> list[DictionaryEntry]:
    """Exact correspondence between the screened oscillator and the decadic one.

    Each screened coupling is pushed through :func:`transform_potential`, then
    read off in the ``y**b`` basis. ``factor`` is the exact multiplier; the
    ``printed`` column is the commonly quoted identification and ``agrees``
    flags whether the exact factor reproduces it.
    """
    job = TransformJob(alpha, lam)
    a2 = job.alpha * job.alpha
    unit = job.lam * a2
    entries = []
    names = {8: "g8", 6: "g6", 4: "g4", 2: "g2"}
    printed = {"a": "g8 = a", "b": "g6 = -b", "c": "g4 = c - E/9", "d": "g2 = -d",
               "e": "E_new = -e", "f": "L(L+1) = 2 - f"}
    for sym, beta in zip(SCREENED_SYMBOLS, SCREENED_EXPONENTS):
        nb = job.new_exponent(beta)
        if nb == 0:
            target, factor = "E_new", -unit
            agrees = factor == -1
        elif nb == -2:
            target, factor = "L(L+1)", -unit
            gamma0 = (a2 - 1) / 4
            agrees = factor == -1 and gamma0 == 2
            target = f"L(L+1) = {gamma0} + ({factor})*{sym}"
        else:
            sign = -1 if (nb.numerator // 2) % 2 else 1
            target = names.get(int(nb), f"y^{nb}")
            factor = unit * sign
            agrees = factor == (-1 if sym in ("b", "d") else 1)
        entries.append(DictionaryEntry(sym, beta, nb, target, factor, printed[sym], agrees))
    # lam-exempt pieces: the harmonic term and the old energy
    nb_h = job.new_exponent(2)
    sign_h = -1 if (nb_h.numerator // 2) % 2 else 1
    lead = -a2 * sign_h
    entries.append(DictionaryEntry("x^2", Fraction(2), nb_h, f"y^{nb_h}", lead, "y^10 coefficient 1", lead == 1))
    e_exp = 2 * job.alpha - 2
    sign_e = -1 if e_exp.denominator == 1 and (e_exp.numerator // 2) % 2 else 1
    e_factor = -a2 * sign_e
    entries.append(
        DictionaryEntry("E", Fraction(0), e_exp, names.get(int(e_exp), f"y^{e_exp}"), e_factor,
                        "g4 gets -E/9", e_factor == Fraction(-1, 9))
    )
    return entries


def dictionary_report(alpha=3, lam=Fraction(1, 9)) -> str:
    rows = dictionary(alpha, lam)
    head = f"Liouville dictionary, alpha={Fraction(alpha)}, lambda={Fraction(lam)} (y**b basis)"
    body = "\n".join(r.line() for r in rows)
    diffs = [r for r in rows if not r.agrees]
    tail = ""
    if diffs:
        tail = "\nexact factors differing from the printed identification: " + ", ".join(r.symbol for r in diffs)
        tail += "\n(rescale with scale_coordinates to move the leading coefficient to 1)"
    return head + "\n" + body + tail
