"""Stationary tunneling observables for a tip / vacuum / test-mass transducer."""
from .currents import (
    CurrentsReport, closed_form_rectangular, momentum2_current_at, momentum_current_at,
    transferred, transferred_elastic, transferred_inelastic,
)
from .potential import (
    R_C, AsymRectangular, DoubleBarrier, LinearSlowing, PotentialProfile, Rectangular, Region,
    build_profile, mass_steps, tip_steps, wavevector,
)
from .scattering import (
    ScatteringSolution, eval_psi, numerov_transmission, probability_current, solve,
    staircase_convergence, transmission,
)
from .sweep import SweepSpec, preset, run_sweep, sweep_from_json, write_sweep
from .transport import ballistic_ratio, mfp_empirical, mfp_from_mobility
from .uncertainty import (
    UncertaintyReport, analyze, dT_dl, delta_l, delta_l_second_order, dp2_per_electron,
    regularized_delta_l, uncertainty_product,
)

__version__ = "0.1.0"
