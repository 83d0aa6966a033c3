"""Superposition with delayed unification: a small saturation prover."""
from .calculus import Calculus, Inference, Mode
from .clauses import Clause, InferenceRecord, Literal, Selection, neg, pos
from .ordering import KboParams, Order
from .saturation import ProverConfig, SaturationResult, Status, saturate
from .terms import IOTA, BOOL, App, Sort, Symbol, Var
from .tptp import parse_cnf, parse_file

__version__ = "0.1.0"

__all__ = [
    "App", "BOOL", "Calculus", "Clause", "IOTA", "Inference", "InferenceRecord", "KboParams",
    "Literal", "Mode", "Order", "ProverConfig", "SaturationResult", "Selection", "Sort", "Status",
    "Symbol", "Var", "neg", "parse_cnf", "parse_file", "pos", "saturate",
]
