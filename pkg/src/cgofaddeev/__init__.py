"""CGO-Faddeev reconstruction of complex conductivities with a jump contour.

Numerical building blocks: disk geometry and quadrature, conductivity models
and Dirac potentials, Lippmann-Schwinger operators and solver, admissible
points, scattering data and reconstruction, a DtN bridge and ratio probes.
"""

from .admissible import AdmissibleCertificate, eval_AB, find_admissible
from .cgo_solver import CgoSolution, SolverError, SolverOptions, solve_mu
from .conductivity import DiracPotential, dirac_potential, make_model, transmission_matrix
from .geometry import circle_contour, make_disk_geometry
from .operators import CgoParameters, FieldPair, OscillationError, build_discretization
from .scattering import ReconstructionConfig, reconstruct_q21, scattering_boundary, scattering_interior

__all__ = [
    "AdmissibleCertificate", "CgoParameters", "CgoSolution", "DiracPotential", "FieldPair",
    "OscillationError", "ReconstructionConfig", "SolverError", "SolverOptions",
    "build_discretization", "circle_contour", "dirac_potential", "eval_AB", "find_admissible",
    "make_disk_geometry", "make_model", "reconstruct_q21", "scattering_boundary",
    "scattering_interior", "solve_mu", "transmission_matrix",
]
__version__ = "0.1.0"
