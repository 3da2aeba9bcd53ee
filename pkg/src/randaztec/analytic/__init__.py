from .clt import (bg2_covariance, clt_cov_critical, clt_cov_critical_bg2, clt_cov_fixed,
                  clt_cov_general, clt_cov_general_schur, critical_k1_closed, fixed_k1_closed)
from .cumulants import free_cumulants, moments_from_free_cumulants
from .finite import (exact_cov_p1_two_levels, exact_mean_pk_annealed, exact_mean_pk_quenched,
                     exact_var_p1_annealed)
from .lemmas import lemma_property_tests
from .limit_shape import arctic_curve, limit_shape_density, limit_shape_grid
from .lln import lln_moment, lln_moment_contour, lln_moment_resolvent, lln_moment_general
from .params import ContourSpec, ModelParams
from .sgf import sgf_annealed, sgf_quenched

__all__ = [
    "ContourSpec", "ModelParams", "arctic_curve", "bg2_covariance", "clt_cov_critical",
    "clt_cov_critical_bg2", "clt_cov_fixed", "clt_cov_general", "clt_cov_general_schur",
    "critical_k1_closed", "exact_cov_p1_two_levels", "exact_mean_pk_annealed",
    "exact_mean_pk_quenched", "exact_var_p1_annealed", "fixed_k1_closed", "free_cumulants",
    "lemma_property_tests", "limit_shape_density", "limit_shape_grid", "lln_moment",
    "lln_moment_contour", "lln_moment_resolvent", "lln_moment_general",
    "moments_from_free_cumulants", "sgf_annealed", "sgf_quenched",
]
