"""Exact covering of polygonal regions by equal balls."""

from .covering import DerivativeBundle, eval_G, eval_grad, eval_hess, evaluate
from .geometry import Configuration, Region, build_partition

__version__ = "0.1.0"
