"""Feasible conjugate gradient method for B-eigenpairs of symmetric tensors.

A B-eigenpair of a symmetric order-``m`` tensor ``A`` is ``(x, lam)`` with
``A x^(m-1) = lam B x^(m'-1)`` and ``B x^m' = 1``.  Z-, H- and D-eigenpairs
are the special cases ``B = I`` (m'=2), ``B x^m = sum x_i^m`` and
``B x^2 = x^T D x``.
"""
from .bform import BForm, DenseForm, DiagPower, Identity2, QuadFormPower
from .bench import RunConfig, Report, load_config, run_trials
from .errors import (
    ConfigError,
    DimensionMismatch,
    DuplicateEntry,
    FCGError,
    IndexOutOfRange,
    InfeasiblePoint,
    InvalidSpec,
    LineSearchFailed,
    NonPositiveForm,
    OrderMismatch,
    ParseError,
    ZeroDirection,
    ZeroPreviousGradient,
    ZeroVector,
)
from .generators import BGenSpec, GenSpec, example1, example6, gen_bform, gen_tensor, rng
from .io import parse_tensor_file, write_tensor_file
from .manifold import Objective, Sense
from .oracle import EigenSet, enumerate_n2, enumerate_n3, fd_check_gradient, fd_check_hessian
from .solver import EigenPair, SolveConfig, SolveResult, residual, solve
from .tensor import DenseTensor, SumUnaryTensor, SymTensor, dense_from_entries

__version__ = "0.1.0"

__all__ = [
    "BForm", "DenseForm", "DiagPower", "Identity2", "QuadFormPower",
    "RunConfig", "Report", "load_config", "run_trials",
    "ConfigError", "DimensionMismatch", "DuplicateEntry", "FCGError", "IndexOutOfRange",
    "InfeasiblePoint", "InvalidSpec", "LineSearchFailed", "NonPositiveForm", "OrderMismatch",
    "ParseError", "ZeroDirection", "ZeroPreviousGradient", "ZeroVector",
    "BGenSpec", "GenSpec", "example1", "example6", "gen_bform", "gen_tensor", "rng",
    "parse_tensor_file", "write_tensor_file",
    "Objective", "Sense",
    "EigenSet", "enumerate_n2", "enumerate_n3", "fd_check_gradient", "fd_check_hessian",
    "EigenPair", "SolveConfig", "SolveResult", "residual", "solve",
    "DenseTensor", "SumUnaryTensor", "SymTensor", "dense_from_entries",
]
