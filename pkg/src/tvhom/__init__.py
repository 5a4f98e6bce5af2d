"""Exact total variation between product distributions and its homogenized counterpart."""

from .constants import ConstantsReport, c_eps, d_rho, delta_eps, optimize_c0
from .errors import *  # noqa: F401,F403
from .harness import (
    GeneratorConfig,
    LemmaReport,
    SearchReport,
    gen_instance,
    homogenization_ratio,
    run_suite,
    search_worst_ratio,
    verify_instance,
)
from .measure import (
    AdmissibilityReport,
    AtomicMeasure,
    check_admissible,
    convolve,
    convolve_family,
    dirac,
    make_measure,
    mass_defect,
    mixture,
    power_convolve,
    t_functional,
    total_mass,
)
from .score import (
    ScoreLaw,
    SignalStats,
    laplace_v,
    remainder_l2,
    score_law,
    signal_stats,
    sqrt_quadratic_mean,
    sum_abs_mean,
)
from .tv import (
    LiftedPair,
    Pmf,
    ProductInstance,
    encode_pair,
    homogenize,
    lift,
    smooth,
    tv_homogenized_multinomial,
    tv_pmf,
    tv_product_bruteforce,
    tv_product_exact,
)

__version__ = "0.1.0"
