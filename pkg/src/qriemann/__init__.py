"""Exact symbolic Riemannian geometry on quantum spaces."""

from .scalar import LAMBDA, ONE, Q, S, ZERO, PoleError, QScalar, eval_float, q_int

__version__ = "0.1.0"

__all__ = ["QScalar", "PoleError", "q_int", "eval_float", "Q", "S", "LAMBDA", "ONE", "ZERO"]
