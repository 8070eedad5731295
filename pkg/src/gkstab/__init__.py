"""Exact GK dimensions, central charges and stability checks for category O."""

__version__ = "0.1.0"

from .charge import central_charge_poly, gk_dimension, hilbert_oracle, leading_coefficient, taylor_component
from .ktheory import Block, K0Class, change_basis, class_of_parabolic_verma, class_of_simple, get_block, gk_stratify
from .rootsys import LieType, build_root_datum
from .weylkl import WeylGroup, enumerate_weyl

__all__ = [
    "Block", "K0Class", "LieType", "WeylGroup", "build_root_datum", "central_charge_poly",
    "change_basis", "class_of_parabolic_verma", "class_of_simple", "enumerate_weyl",
    "get_block", "gk_dimension", "gk_stratify", "hilbert_oracle", "leading_coefficient",
    "taylor_component",
]
