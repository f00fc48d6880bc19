"""Incomplete Lauricella matrix functions of several variables.

Evaluation of the lower, upper and complete functions of families A, C and D
over commuting families of matrices, plus quadrature oracles and an identity
verification suite.
"""
from .errors import GuardViolation, IlmfError, InputError, NoConvergence, NotPositiveStable
from .linalg import CommutingFamily, make_commuting_family, rel_frobenius, simultaneous_diagonalize
from .matrix_special import bessel_matrix, gamma_matrix, inc_gamma_matrix, laguerre_matrix, pochhammer
from .quadrature import QuadSpec, semi_infinite_quad
from .representations import representations
from .series import (
    Evaluation,
    IlmfParams,
    SeriesPolicy,
    confluent_phi2,
    confluent_psi2,
    hyp0f1,
    hyp1f1,
    ilmf,
    inc_confluent_1g1,
    inc_gauss_2f1,
)
from .verify import IDENTITY_IDS, Report, run_suite

__version__ = "0.1.0"

__all__ = [
    "GuardViolation", "IlmfError", "InputError", "NoConvergence", "NotPositiveStable",
    "CommutingFamily", "make_commuting_family", "rel_frobenius", "simultaneous_diagonalize",
    "bessel_matrix", "gamma_matrix", "inc_gamma_matrix", "laguerre_matrix", "pochhammer",
    "QuadSpec", "semi_infinite_quad", "representations",
    "Evaluation", "IlmfParams", "SeriesPolicy", "confluent_phi2", "confluent_psi2", "hyp0f1", "hyp1f1",
    "ilmf", "inc_confluent_1g1", "inc_gauss_2f1",
    "IDENTITY_IDS", "Report", "run_suite",
]
