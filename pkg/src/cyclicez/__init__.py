"""Exact cyclic, paracyclic and cylindrical modules and a checked cyclic Eilenberg-Zilber pipeline."""

from .exactfield import GF, QQ, FieldSpec, Matrix
from .simplicial import MixedComplex, ParacyclicModule
from .cylindrical import CylindricalModule
from .constructors import AlgebraSpec, AutomorphismSpec, GroupActionSpec, a_natural, group_action_cylindrical, tensor_cylindrical
from .report import Check, Report

__version__ = "0.1.0"

__all__ = [
    "GF", "QQ", "FieldSpec", "Matrix",
    "MixedComplex", "ParacyclicModule", "CylindricalModule",
    "AlgebraSpec", "AutomorphismSpec", "GroupActionSpec",
    "a_natural", "group_action_cylindrical", "tensor_cylindrical",
    "Check", "Report",
]
