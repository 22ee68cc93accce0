"""Finite-difference gradients for checking analytic derivatives"""
import math
from typing import Callable, Sequence

import numpy as np

from utils.errors import NonFiniteError


def numeric_gradient(f: Callable[[np.ndarray], float], x: Sequence[float], eps: float = 1e-6) -> np.ndarray:
    """Central differences (f(x + eps e_i) - f(x - eps e_i)) / (2 eps) per coordinate"""
    point = np.asarray(x, dtype=np.float64)
    grad = np.zeros_like(point)
    for i in range(point.size):
        step = np.zeros_like(point)
        step[i] = eps
        forward = float(f(point + step))
        backward = float(f(point - step))
        if not (math.isfinite(forward) and math.isfinite(backward)):
            raise NonFiniteError(f"function is not finite around coordinate {i} of {point.tolist()}")
        grad[i] = (forward - backward) / (2.0 * eps)
    return grad
