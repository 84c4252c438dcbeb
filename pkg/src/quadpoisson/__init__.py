"""Exact construction and certification of compatible linear/quadratic
Poisson brackets on (sl(N) + C)* built from a pair of constant tensors (c, b)."""
from .kernels import BACKEND
from .poly import A, LAM, S0, T, Polynomial, VarId, S, parse, var, y
from .report import Report
from .tensor import MatrixX, Residual6, Tensor4, fp4_residual, omega

__version__ = "0.1.0"
