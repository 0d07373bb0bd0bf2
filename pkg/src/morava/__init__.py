"""Symbolic computations with algebraic Brown-Peterson and Morava K-theories."""
from .coeff import (CoeffElement, CoeffError, CoeffRing, IdealSpec, TheoryTag,
                    local_scalar, make_ring, reduce_mod)
from .presentation import (CyclicSummand, ModulePresentation, base_change,
                           presentation)
from .fgl import FGLSpec, bzp_ring, p_series, vn_torsion_check
from .palg import PresentedAlgebra, QModule, loads_algebra
from .realmot import build_rost_motive
from .ahss import run, run_to_collapse
from .theories import check_les, collapse_k, morava_k, omega_quotient, tower_step
from .adjoint import AdAlgebraSpec, ad_power, nonnilpotency_witness
from .examples import check_example, example

__version__ = "0.1.0"
