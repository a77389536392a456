"""orbq: exact graded characters of cyclic orbifolds of lattice VOAs."""

from importlib import resources
from pathlib import Path

from .cyclo import Cyclo
from .cycletype import CycleType, cycle_power, cycle_type_of_matrix
from .lattice import (GramLattice, PhaseCharacter, ShiftedCoset, Sublattice,
                      direct_sum, fixed_sublattice, kernel_of_character,
                      min_norm_coset)
from .autlift import (LatticeAutomorphism, LiftSpec, conformal_weight,
                      lift_order, orbifold_type, sector_weight,
                      suggest_type0_beta, w_on_fixed)
from .modular import (SL2, coset_reps_gamma0, dedekind_sum, eta_expand,
                      eta_multiplier, transform_eta_quotient)
from .modforms import basis_for_space, fit_in_basis, ligozat_validate
from .orbifold import (compute_Ct, compute_Dt, extract_dims,
                       fixed_point_free_orbifold, module_characters,
                       orbifold_character, untwisted_trace, zm_character)
from .qseries import PuiseuxSeries
from .theta import (enumerate_by_norm, eval_numeric, extremal_theta, theta)

__version__ = "0.1.0"


def data_path(name: str) -> Path:
    """Path of a shipped data file (e.g. 'lattices/leech.gram')."""
    return Path(str(resources.files("orbq.data").joinpath(name)))
