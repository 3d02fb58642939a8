"""PT-symmetric Schrodinger spectra on complex and multi-sheet ("tobogganic") contours."""

__version__ = "0.1.0"

from .contour import ContourReport, analyze, bg_line, liouville_image, wedge_join
from .liouville import TransformJob, TransformResult, transform_potential
from .potential import PotentialSpec, UnwrappedPoint, eval_ix_power, eval_potential, make_potential
from .qe import QEParams, QESolution, qe_solve, qe_wavefunction
from .spectra import GridSpec, Spectrum, filter_real, solve_spectrum
from .wedges import Wedge, asymptotic_wedges, classify_direction

__all__ = [
    "ContourReport", "analyze", "bg_line", "liouville_image", "wedge_join",
    "TransformJob", "TransformResult", "transform_potential",
    "PotentialSpec", "UnwrappedPoint", "eval_ix_power", "eval_potential", "make_potential",
    "QEParams", "QESolution", "qe_solve", "qe_wavefunction",
    "GridSpec", "Spectrum", "filter_real", "solve_spectrum",
    "Wedge", "asymptotic_wedges", "classify_direction",
]
