"""Numerical companion for the quantum group U_q(sl(2,R)) built as a Drinfeld
double coideal of U_q(su(2)) and the Podles sphere coideal.

Representation labels are doubled spins ``n = 2 * spin`` throughout.
"""
__version__ = "0.1.0"

from .qnum import ParameterError, QContext, approx_eq, q_int, q_pochhammer
from .uqsu2 import (CGError, SpinRep, antipode, clebsch_gordan, make_rep,
                    q_dim, self_duality, tensor_rep, unitary_antipode)
from .coeffalg import CoeffElement, DualElement
from .coideal import (CoidealData, NotInBError, StabElement, act_rmod,
                      build_coideal, eigvec_plus, spherical)
from .relint import (CheckReport, GCharacter, InvariantIntegral,
                     TruncationError, check_balanced, check_relative_invariance,
                     compute_weights, psi)
from .double import (DoubleElement, DrinfeldDouble, RegularRepresentation,
                     bimodule_act, dmul, dstar, phi_D, regular_rep, sigma_D)

__all__ = [
    "ParameterError", "QContext", "approx_eq", "q_int", "q_pochhammer",
    "CGError", "SpinRep", "antipode", "clebsch_gordan", "make_rep", "q_dim",
    "self_duality", "tensor_rep", "unitary_antipode",
    "CoeffElement", "DualElement",
    "CoidealData", "NotInBError", "StabElement", "act_rmod", "build_coideal",
    "eigvec_plus", "spherical",
    "CheckReport", "GCharacter", "InvariantIntegral", "TruncationError",
    "check_balanced", "check_relative_invariance", "compute_weights", "psi",
    "DoubleElement", "DrinfeldDouble", "RegularRepresentation", "bimodule_act",
    "dmul", "dstar", "phi_D", "regular_rep", "sigma_D",
]
