"""Covering insertion codes, Turán systems and their bounds."""

from .bounds import (BoundReport, bounds_report, bounds_table, chung_lu_odd, density_lower_1r,
                     invert_tr_sr, lu_zhao_even, s_lower_closed, tr_sr_rhs, upper_bounds, volume_lower)
from .constructions import (ConstructionError, SymbolMap, code_to_turan, expected_lift_size, half_cube_code,
                            mantel_system, mod_lift, preimage_code, random_lift, turan43_system, turan_to_code)
from .cover import (CoverInstance, ResourceLimitError, TuranSystem, build_incidence, greedy_cover,
                    verify_cover, verify_turan)
from .diagnostics import (AtomProfile, WeightedSetSystem, atom_profile, bonferroni_check,
                          check_pairwise_intersections, check_residue_bound, fuzz_bonferroni,
                          star_bonferroni_check)
from .solvers import SolveResult, enumerate_optimal, max_packing, min_cover, min_turan
from .words import (ArityError, Code, canonical_form, deletion_ball, insertion_ball, is_subsequence,
                    is_symmetric, symmetrize)

__version__ = "0.1.0"
