"""Exact computational playground for truncated power-series geometry.

Subpackages cover series arithmetic, Weierstrass division and
discriminants, projective rings and radical towers, Puiseux-type
factorization with Hensel lifting, plane blow-ups with monomiality
certificates, rank analysis of map germs, and perturbation checks.
"""

from .gaussq import GaussRational
from .series import (
    HPoly,
    RamifiedSeries,
    TruncatedSeries,
    s_diff,
    s_inv_unit,
    s_mul,
    s_order_initial,
    s_power_subst,
    s_root_unit,
    s_subst,
)

__all__ = [
    "GaussRational",
    "HPoly",
    "RamifiedSeries",
    "TruncatedSeries",
    "s_diff",
    "s_inv_unit",
    "s_mul",
    "s_order_initial",
    "s_power_subst",
    "s_root_unit",
    "s_subst",
]

__version__ = "0.1.0"
