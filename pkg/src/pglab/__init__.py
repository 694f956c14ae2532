"""Exact operator calculus for (phi, Gamma)-modules over the p-adic cyclotomic tower."""
from .config import RunConfig
from .cyclo_eval import (TatePowerSeries, check_intertwine, delta_coeff,
                         factorial_identity_check, iota_n, iota_t)
from .errors import DomainError, HypothesisFailure, Indeterminate, PglabError, PrecisionError
from .operators import (GammaElement, nabla_fd, op_gamma, op_nabla, op_partial, op_phi, op_psi,
                        psi_A, psi_B)
from .padic import CycloElement, PadicNumber, binom_zp, padd, pinv, pmul
from .pgmod import (GammaRelation, NoRelation, TwistModule, find_gamma_relation, fil_j,
                    g_criterion, mod_gamma, mod_nabla, mod_partial, mod_phi, mod_psi,
                    ndr_membership, quotient)
from .series import CycloPowerSeries, LaurentSeries, log_oneplus, subst_oneplus, tdivide
from .wronskian import (ProlongationSystem, RationalFunctionField, RelationCertificate,
                        SeriesField, check_hypotheses, extract_constant_relation, solve_in_H,
                        verify_certificate)

__version__ = "0.1.0"
