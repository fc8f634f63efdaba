"""Regular subgroups of the affine group with linear delta, and their split local algebras."""

from .linalg import Field, Matrix, QQ
from .affine import LinearDeltaGroup, mu, conjugate_by, check_group_condition, is_abelian
from .standard import RepLabel, representative, s_lambda, s_sharp, render
from .algebra import NilpotentAlgebra, from_delta, to_delta, are_isomorphic_bruteforce
from .invariants import InvariantProfile, profile
from .classifier import ClassReport, classify, table_catalog

__all__ = [
    "Field", "Matrix", "QQ", "LinearDeltaGroup", "mu", "conjugate_by", "check_group_condition",
    "is_abelian", "RepLabel", "representative", "s_lambda", "s_sharp", "render",
    "NilpotentAlgebra", "from_delta", "to_delta", "are_isomorphic_bruteforce",
    "InvariantProfile", "profile", "ClassReport", "classify", "table_catalog",
]
