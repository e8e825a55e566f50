"""Truncated Toeplitz/Hankel operators on vector-valued Hardy spaces and
almost-invariant subspace computations."""

from .errors import (BandTooWide, DimensionMismatch, HardyOpsError, InvalidParameter,
                     MembershipError, NotInner, ScenarioError, VerificationFailed,
                     WindowRefused)
from .symbols import (LaurentSymbol, blaschke_factor, blaschke_potapov_factor, check_inner,
                      hitt_sarason_pair, multiply, star, tilde)
from .operators import TruncatedOp, backshift, hankel, shift, toeplitz, verify_identity
from .subspaces import Subspace, from_range, orth_complement
from .invariance import almost_defect, nearly_defect
from .representations import RepSpec, build_rep, model_space
from .perturbation import PerturbationSpec, verify_invariance

__version__ = "0.1.0"

__all__ = [
    "BandTooWide", "DimensionMismatch", "HardyOpsError", "InvalidParameter", "MembershipError",
    "NotInner", "ScenarioError", "VerificationFailed", "WindowRefused",
    "LaurentSymbol", "blaschke_factor", "blaschke_potapov_factor", "check_inner",
    "hitt_sarason_pair", "multiply", "star", "tilde",
    "TruncatedOp", "backshift", "hankel", "shift", "toeplitz", "verify_identity",
    "Subspace", "from_range", "orth_complement", "almost_defect", "nearly_defect",
    "RepSpec", "build_rep", "model_space", "PerturbationSpec", "verify_invariance",
]
