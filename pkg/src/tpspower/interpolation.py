"""Conditionally positive definite interpolation on equispaced knots of [0, 1].

The interpolant for data ``f_0, ..., f_n`` at the knots ``j/n`` is

    s(x) = sum_k a_k * phi(x - k*h) + sum_l b_l * x**l,   h = 1/n,

with the polynomial degree and the moment ("side") conditions on the kernel
weights ``a`` fixed by the basis order ``m``:  ``sum_k a_k (k*h)**l = 0`` for
``l = 0..m``.  Both sets of conditions are collected into one symmetric
saddle-point system which is LU-factorized once and reused for every
right-hand side, including the adjoint solves that produce Lagrange
(cardinal) function values at arbitrary evaluation points.
"""

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as sla

from .basis import BasisParam, basis_eval

logger = logging.getLogger(__name__)

# Beyond this 1-norm condition estimate a double-precision solve carries no
# trustworthy digits; assembly refuses the system instead.
CONDITION_LIMIT = 1e14

# One step of iterative refinement is applied to every solve above this
# condition estimate.
REFINE_THRESHOLD = 1e8

# |x - knot| <= h * KNOT_SNAP_REL  is treated as an exact knot hit.
KNOT_SNAP_REL = 1e-12


class SingularSystemError(np.linalg.LinAlgError):
    """Interpolation system is numerically rank deficient."""

    def __init__(self, message, condition_estimate=None):
        super().__init__(message)
        self.condition_estimate = condition_estimate


@dataclass(frozen=True)
class KnotGrid:
    """Equispaced knots ``{0, h, 2h, ..., 1}`` with ``h = 1/n``."""

    n: int

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise ValueError(f"knot-interval count must be a positive integer, got {self.n!r}")
        object.__setattr__(self, "n", int(self.n))

    @property
    def h(self) -> float:
        return 1.0 / self.n

    @cached_property
    def knots(self) -> np.ndarray:
        k = np.arange(self.n + 1) / self.n
        k.setflags(write=False)
        return k

    def midpoints(self) -> np.ndarray:
        """The interval midpoints ``{h/2, 3h/2, ..., 1 - h/2}``."""
        return (np.arange(self.n) + 0.5) / self.n


@dataclass(frozen=True)
class InterpolantCoeffs:
    """Kernel weights ``a`` (length n+1) and polynomial tail ``b`` (length m+1)."""

    a: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class LagrangeWeights:
    """Values of all cardinal functions at one point: ``v[j] = l_j(x)``."""

    x: float
    v: np.ndarray


@dataclass(frozen=True)
class InterpolationSystem:
    """Assembled and factorized saddle-point system for one (grid, basis) pair.

    ``saddle_matrix`` has the symmetric block form ``[[Phi, P], [P.T, 0]]``
    with ``Phi[j, k] = phi(knot_j - knot_k)`` and ``P[j, l] = knot_j**l``.
    After construction the object is immutable and safe for concurrent
    read-only use; per-point solves need only their own right-hand sides.
    """

    grid: KnotGrid
    basis: BasisParam
    saddle_matrix: np.ndarray
    factorization: tuple
    condition_estimate: float

    @property
    def size(self) -> int:
        return self.grid.n + 2 + self.basis.order_m

    @property
    def needs_refinement(self) -> bool:
        return self.condition_estimate > REFINE_THRESHOLD


def assemble_system(grid: KnotGrid, basis: BasisParam) -> InterpolationSystem:
    """Build and LU-factorize the saddle-point matrix for (grid, basis).

    Raises
    ------
    ValueError
        If the grid is too coarse for the basis order (``n < m``).
    SingularSystemError
        If the factorization is numerically rank deficient; the message
        carries the 1-norm condition estimate.
    """
    if grid.n < basis.order_m:
        raise ValueError(
            f"grid with n={grid.n} cannot support a basis of order m={basis.order_m}"
        )
    knots = grid.knots
    nk = grid.n + 1
    mp1 = basis.order_m + 1
    size = nk + mp1

    A = np.zeros((size, size))
    A[:nk, :nk] = basis_eval(basis, knots[:, None] - knots[None, :])
    P = np.vander(knots, mp1, increasing=True)
    A[:nk, nk:] = P
    A[nk:, :nk] = P.T

    anorm = np.linalg.norm(A, 1)
    try:
        lu, piv = sla.lu_factor(A)
    except np.linalg.LinAlgError as exc:  # exactly singular
        raise SingularSystemError(f"saddle system is singular: {exc}") from exc
    rcond = sla.lapack.dgecon(lu, anorm, norm="1")[0]
    cond = np.inf if rcond == 0.0 else 1.0 / rcond
    if not np.isfinite(lu).all() or not np.isfinite(cond) or cond > CONDITION_LIMIT:
        raise SingularSystemError(
            f"saddle system for n={grid.n}, gamma={basis.gamma} is numerically "
            f"rank deficient (1-norm condition estimate {cond:.3e})",
            condition_estimate=cond,
        )
    logger.debug(
        "assembled n=%d gamma=%g system: condition estimate %.3e%s",
        grid.n, basis.gamma, cond,
        " (solves will be refined)" if cond > REFINE_THRESHOLD else "",
    )
    return InterpolationSystem(
        grid=grid,
        basis=basis,
        saddle_matrix=A,
        factorization=(lu, piv),
        condition_estimate=cond,
    )


def solve_saddle(system: InterpolationSystem, rhs: np.ndarray) -> np.ndarray:
    """Solve the full saddle system for one or many right-hand sides.

    ``rhs`` is ``(size,)`` or ``(size, nrhs)``.  One step of iterative
    refinement is applied when the condition estimate warrants it.
    """
    lu, piv = system.factorization
    sol = sla.lu_solve((lu, piv), rhs)
    if system.needs_refinement:
        resid = rhs - system.saddle_matrix @ sol
        sol = sol + sla.lu_solve((lu, piv), resid)
    return sol


def solve_interpolant(system: InterpolationSystem, values) -> InterpolantCoeffs:
    """Compute interpolant coefficients for data ``values`` at the knots."""
    values = np.asarray(values, dtype=float)
    nk = system.grid.n + 1
    if values.shape != (nk,):
        raise ValueError(f"expected {nk} knot values, got shape {values.shape}")
    rhs = np.concatenate([values, np.zeros(system.basis.order_m + 1)])
    sol = solve_saddle(system, rhs)
    return InterpolantCoeffs(a=sol[:nk], b=sol[nk:])


def evaluate_interpolant(coeffs: InterpolantCoeffs, grid: KnotGrid, basis: BasisParam, x):
    """Evaluate ``sum_k a_k phi(x - knot_k) + sum_l b_l x**l`` at scalar or array ``x``."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    kernel = basis_eval(basis, xs[:, None] - grid.knots[None, :]) @ coeffs.a
    poly = np.polynomial.polynomial.polyval(xs, coeffs.b)
    out = kernel + poly
    if np.ndim(x) == 0:
        return float(out[0])
    return out


def _exact_knot_index(grid: KnotGrid, x: float):
    i = int(round(x * grid.n))
    if 0 <= i <= grid.n and abs(x - grid.knots[i]) <= grid.h * KNOT_SNAP_REL:
        return i
    return None


def _point_rhs(system: InterpolationSystem, xs: np.ndarray) -> np.ndarray:
    """Right-hand sides of the adjoint (Lagrange-value) solve, one column per point."""
    knots = system.grid.knots
    nk = system.grid.n + 1
    rhs = np.empty((system.size, len(xs)))
    rhs[:nk, :] = basis_eval(system.basis, xs[None, :] - knots[:, None])
    for l in range(system.basis.order_m + 1):
        rhs[nk + l, :] = xs ** l
    return rhs


def lagrange_values(system: InterpolationSystem, x: float) -> LagrangeWeights:
    """Values of all Lagrange (cardinal) functions at ``x``.

    Computed with a single adjoint solve against the shared factorization:
    the saddle matrix is symmetric, so solving it with right-hand side
    ``(phi(x - knot_0), ..., phi(x - knot_n), 1, x, ..., x**m)`` yields
    ``l_j(x)`` in the first ``n + 1`` components.  Points that coincide with
    a knot (relative tolerance ``KNOT_SNAP_REL``) return the exact unit
    coordinate vector.
    """
    x = float(x)
    i = _exact_knot_index(system.grid, x)
    nk = system.grid.n + 1
    if i is not None:
        v = np.zeros(nk)
        v[i] = 1.0
        return LagrangeWeights(x=x, v=v)
    rhs = _point_rhs(system, np.array([x]))
    sol = solve_saddle(system, rhs)
    return LagrangeWeights(x=x, v=sol[:nk, 0])


def lagrange_matrix(system: InterpolationSystem, xs) -> np.ndarray:
    """Lagrange values at many points at once: column ``p`` holds ``l_.(xs[p])``.

    Functionally identical to stacking ``lagrange_values`` over ``xs`` (one
    adjoint solve per point, shared factorization, exact unit vectors at
    knots) but batches the back-substitutions.
    """
    xs = np.asarray(xs, dtype=float)
    rhs = _point_rhs(system, xs)
    nk = system.grid.n + 1
    V = solve_saddle(system, rhs)[:nk, :]
    for p, x in enumerate(xs):
        i = _exact_knot_index(system.grid, float(x))
        if i is not None:
            V[:, p] = 0.0
            V[i, p] = 1.0
    return V
