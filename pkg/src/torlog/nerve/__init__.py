"""Block spaces for monoidal words, insertion/permutation maps, nerve
simplices, and the log-functor axiom harness with its registered instances."""

from .blocks import (MonoidalWord, BlockSpace, EtaInsertion, f_space, mu_sigma,
                     permute_word, eta_insert, verify_eta_commutation,
                     verify_trace_compat, verify_mu_cocycle)
from .simplices import NerveSimplex, face, degeneracy, log_simplex
from .instances import (LogFunctorInstance, FormalLogSum, HBordLog, HBordObject,
                        ClosedMorphism, fredholm_instance, hbordism_instance,
                        corrupted_instance)
from .axioms import verify_log_axioms, weak_tqft_export

__all__ = [
    "MonoidalWord", "BlockSpace", "EtaInsertion", "f_space", "mu_sigma",
    "permute_word", "eta_insert", "verify_eta_commutation",
    "verify_trace_compat", "verify_mu_cocycle",
    "NerveSimplex", "face", "degeneracy", "log_simplex",
    "LogFunctorInstance", "FormalLogSum", "HBordLog", "HBordObject",
    "ClosedMorphism", "fredholm_instance", "hbordism_instance",
    "corrupted_instance",
    "verify_log_axioms", "weak_tqft_export",
]
