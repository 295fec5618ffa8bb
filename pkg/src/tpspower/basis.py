"""Radial basis functions ``|x|^g`` (and ``|x|^g log|x|`` for even integer g)."""

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class BasisParam:
    """Exponent selecting a member of the polyharmonic family.

    For ``gamma`` not an even integer the basis function is ``|x|**gamma``;
    for even integers the log-modified branch ``|x|**gamma * log|x|`` applies
    (``gamma = 2`` is the univariate thin plate spline).  ``order_m`` is the
    degree of the polynomial tail that interpolants built on this basis
    carry, and equally the degree of the moment conditions imposed on their
    kernel coefficients.
    """

    gamma: float

    def __post_init__(self):
        g = self.gamma
        if not (isinstance(g, (int, float)) and math.isfinite(g) and g > 0.0):
            raise ValueError(f"basis exponent must be a positive finite real, got {g!r}")
        object.__setattr__(self, "gamma", float(g))

    @property
    def order_m(self) -> int:
        return int(math.floor(self.gamma / 2.0))

    @property
    def is_even_integer(self) -> bool:
        return self.gamma == math.floor(self.gamma) and int(self.gamma) % 2 == 0


def basis_eval(basis: BasisParam, x):
    """Evaluate the basis function at ``x`` (scalar or array).

    The value at the origin is exactly 0: trivially for the plain power
    branch, and by the continuous-limit convention for the log branch.
    """
    d = np.abs(np.asarray(x, dtype=float))
    if basis.is_even_integer:
        out = np.zeros_like(d)
        nz = d > 0.0
        out[nz] = d[nz] ** basis.gamma * np.log(d[nz])
    else:
        out = d ** basis.gamma
    if np.ndim(x) == 0:
        return float(out)
    return out
