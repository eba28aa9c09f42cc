"""Exact computations in the first Weyl algebra K[x][D] over Q(a)."""

from weylalg.errors import WeylError
from weylalg.scalars import ParamPoly, ParamRat, nullspace, rank
from weylalg.bivariate import BiPoly
from weylalg.weyl import WeylOp, reorder, commutator, ad_power, eval_poly, coeff_of_dpow

__all__ = [
    "WeylError",
    "ParamPoly",
    "ParamRat",
    "nullspace",
    "rank",
    "BiPoly",
    "WeylOp",
    "reorder",
    "commutator",
    "ad_power",
    "eval_poly",
    "coeff_of_dpow",
]
