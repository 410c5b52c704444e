"""Exact certification of derived Marsden-Weinstein reductions of affine
Hamiltonian spaces given by polynomial data."""

from ._backend import BACKEND
from .chaincx import ChainMorphism, FreeComplex, cone, dual_complex, homology, is_quasi_iso, make_complex
from .derham import FormAlgebra, FormElement, certify_form, contract, d_derham, d_internal, lie_derivative, lift_action
from .errors import *  # noqa: F401,F403
from .groebner import (GroebnerBasis, ModulePresentation, Submodule, buchberger, ideal_dimension, normal_form,
                       quotient_presentation, syzygy_module)
from .hamspace import (HamiltonianSpace, LieAlgebraData, abelian, coadjoint_fixes, cotangent_lift, sl2,
                       validate_action, validate_hamiltonian, validate_symplectic)
from .koszul import KoszulCdga, build_koszul, classical_truncation, is_complete_intersection, tor
from .orbit import (OrbitPresentation, build_shifted, certify_kks, classical_consistency, lie_poisson_fields,
                    verify_shifted)
from .parser import parse_poly
from .polycore import MonomialOrder, MultiPoly, PolyMatrix, PolyRing, Rational
from .reduction import (build_theta, level_set_complexes, reduced_tangent_complex, verify_theorem,
                        virtual_dimension)
from .scenario_io import build_report, load_scenario, run_cli

__version__ = "0.1.0"
