"""Covering and polarization of antipodal configurations on the unit sphere."""
from .config import Tolerances, override
from .covering import (CoveringReport, Method, check_covering_bound, eta_exact,
                       eta_sampled, is_centered_witness, mesh_norm_sampled,
                       rho_from_eta)
from .errors import *  # noqa: F401,F403
from .geometry import (AntipodalConfig, cross_polytope, is_general_position,
                       normalize, perturbed_cross_polytope, random_antipodal)
from .hull import Facet, HullStructure, enumerate_facets, verify_boundary_cover
from .polarization import (HermiteBound, PolarizationReport,
                           cross_polytope_closed_form, hermite_even_quadratic,
                           polarization_value, potential_at,
                           verify_polarization_chain)
from .potentials import PotentialFunction, builtin_potentials
from .potentials import parse as parse_potential
from .projection import (CapSimplex, SolidAngleEstimate, cap_monotonicity_check,
                         maximize_cap_simplex, projected_volume_exact_d3,
                         projected_volume_mc)
from .search import SearchResult, maximize_eta, maximize_polarization

__version__ = "0.1.0"
