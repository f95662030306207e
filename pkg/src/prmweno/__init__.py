"""Finite-difference WENO schemes with mapped nonlinear weights, the
comparison weightings, a 1-D Euler solver, and a benchmark harness."""

from .tables import StencilTables, load_tables
from .core import candidates, smoothness_indicators, js_weights, reconstruct
from .mappings import (
    MappingSpec, MappingError, eval_mapping, deviation_at_dk, left_from_right,
    map_weights, aim_scale, check_singularity_free,
    production_prm_specs, comparative_specs,
    gm_spec, pm_spec, ppm_spec, im_spec, rm_spec, aim_spec, r_spec, prm_spec,
    prm_general_spec, identity_spec,
)
from .cnm import check_cnm, cnm_satisfied, CnmReport, ORDER_REQUIREMENTS
from .reconstruct import WeightingStrategy, reconstruct_batch, scalar_rhs
from .euler import (GasModel, prim_to_cons, cons_to_prim, steger_warming_split,
                    euler_rhs, BlowUpError, StateError)
from .timeint import StepPolicy, tvd_rk3_step, rk4_step, compute_dt, integrate
from .problems import PROBLEMS, initialize, reference, shifted_exact
from .harness import (run_case, convergence_study, oscillation_metric,
                      emit_results, ErrorReport)

__version__ = "0.1.0"
