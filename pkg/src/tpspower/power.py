"""Pointwise error-functional norms built from Lagrange weights.

Given the cardinal-function values ``v = (l_0(x), ..., l_n(x))`` of an
interpolation system, the signed quadratic form

    Q(v) = (-1)**(m+1) * ( sum_jk v_j v_k phi(knot_j - knot_k)
                           - 2 sum_j v_j phi(x - knot_j) )

is nonnegative whenever the weights satisfy the degree-``m`` moment
constraints of the basis ``phi`` used inside the form.  Its square root at
the system's own Lagrange weights is the standard power function; evaluating
the form with a *different* exponent ``mu`` at thin-plate-spline weights
gives the mixed power function.

The two sums nearly cancel at fine grids (the result can be ten orders of
magnitude below either term), so the scalar path accumulates them in a fixed
order with exact (fsum) final summation, and tiny negative radicands within
``CANCELLATION_REL_TOL`` of the double-sum magnitude are clamped to zero.
"""

import math
from dataclasses import dataclass

import numpy as np

from .basis import BasisParam, basis_eval
from .interpolation import InterpolationSystem, lagrange_matrix

# Radicands are clamped to zero when negative by no more than this fraction
# of the double-sum magnitude; anything worse is reported as a cancellation
# failure.
CANCELLATION_REL_TOL = 1e-10


class CancellationError(ArithmeticError):
    """Quadratic form lost too many digits to cancellation.

    Carries the grid size ``n``, evaluation point ``x`` and the offending
    ``radicand`` for diagnosis.
    """

    def __init__(self, n, x, radicand):
        super().__init__(
            f"cancellation failure in power-function radicand at n={n}, "
            f"x={x!r}: radicand={radicand:.6e}"
        )
        self.n = n
        self.x = x
        self.radicand = radicand


@dataclass(frozen=True)
class QuadraticFormSpec:
    """Grid plus the basis whose kernel enters the quadratic form."""

    grid: object
    basis: BasisParam

    @property
    def sign(self) -> float:
        return (-1.0) ** (self.basis.order_m + 1)


@dataclass(frozen=True)
class PowerSample:
    """One power-function evaluation; ``radicand`` is the pre-clamp square."""

    x: float
    value: float
    radicand: float


@dataclass(frozen=True)
class MidpointSweep:
    """Power-function samples over the midpoint set ``{h/2, 3h/2, ..., 1 - h/2}``.

    ``max_value`` is the maximum over all samples.  ``edge_value`` is the
    sample at the first midpoint ``h/2``: the boundary peak that the decay
    tables track.  For ``mu >= 2`` the two coincide, while for small ``mu``
    the interior samples exceed the boundary peak by up to a few percent.
    """

    mu: float
    n: int
    samples: tuple
    max_value: float
    edge_value: float


def quadratic_form(spec: QuadraticFormSpec, x: float, v) -> float:
    """Signed quadratic form at an arbitrary weight vector ``v``.

    No positivity is implied for arbitrary ``v``; the sign convention makes
    the value nonnegative exactly when ``v`` satisfies the moment
    constraints of ``spec.basis``.
    """
    v = np.asarray(v, dtype=float)
    knots = spec.grid.knots
    if v.shape != knots.shape:
        raise ValueError(f"weight vector must have length {len(knots)}, got {v.shape}")
    pair = basis_eval(spec.basis, knots[:, None] - knots[None, :])
    double, cross = _form_terms_fixed_order(pair, basis_eval(spec.basis, x - knots), v)
    return spec.sign * (double - 2.0 * cross)


def _form_terms_fixed_order(pair, cross_col, v):
    """Double sum and cross term with thread-independent summation order."""
    row = np.einsum("jk,k->j", pair, v, optimize=False)
    double = math.fsum((v * row).tolist())
    cross = math.fsum((v * cross_col).tolist())
    return double, cross


def _raw_radicands(system, form_basis, xs, V, deterministic):
    """Pre-clamp radicands and double-sum magnitudes at many points.

    ``V`` holds Lagrange weights column-per-point.  The fast path batches
    the double sums through matrix products; the deterministic path repeats
    the fixed-order scalar reduction point by point.
    """
    knots = system.grid.knots
    sign = (-1.0) ** (form_basis.order_m + 1)
    pair = basis_eval(form_basis, knots[:, None] - knots[None, :])
    cross_mat = basis_eval(form_basis, xs[None, :] - knots[:, None])
    if deterministic:
        double = np.empty(len(xs))
        cross = np.empty(len(xs))
        for p in range(len(xs)):
            double[p], cross[p] = _form_terms_fixed_order(pair, cross_mat[:, p], V[:, p])
    else:
        double = np.einsum("jp,jp->p", V, pair @ V, optimize=False)
        cross = np.einsum("jp,jp->p", V, cross_mat, optimize=False)
    return sign * (double - 2.0 * cross), np.abs(double)


def _clamped_sample(x, raw, double_mag, n) -> PowerSample:
    if raw < -CANCELLATION_REL_TOL * double_mag:
        raise CancellationError(n=n, x=x, radicand=raw)
    value = math.sqrt(raw) if raw > 0.0 else 0.0
    return PowerSample(x=float(x), value=value, radicand=float(raw))


def _check_mixed_args(system, mu):
    if system.basis.gamma != 2.0:
        raise ValueError(
            f"mixed power function requires thin-plate-spline weights "
            f"(gamma=2), got gamma={system.basis.gamma}"
        )
    if not 0.0 < mu < 4.0:
        raise ValueError(f"mixed-power exponent must lie in the open interval (0, 4), got {mu}")


def power_samples(system, xs, mu=None, deterministic=False, weights=None):
    """Power-function samples at points ``xs`` in [0, 1].

    With ``mu=None`` the quadratic form uses the system's own basis (the
    standard power function); otherwise the exponent-``mu`` form is
    evaluated at the system's thin-plate-spline weights (the mixed power
    function).  ``weights`` may pass a precomputed ``lagrange_matrix(system,
    xs)`` so several exponents can share one set of adjoint solves.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size and (xs.min() < 0.0 or xs.max() > 1.0):
        raise ValueError("evaluation points must lie in [0, 1]")
    if mu is None:
        form_basis = system.basis
    else:
        _check_mixed_args(system, mu)
        form_basis = BasisParam(mu)
    V = lagrange_matrix(system, xs) if weights is None else weights
    raw, mags = _raw_radicands(system, form_basis, xs, V, deterministic)
    n = system.grid.n
    return tuple(_clamped_sample(xs[p], raw[p], mags[p], n) for p in range(len(xs)))


def standard_power(system: InterpolationSystem, x: float) -> PowerSample:
    """Power function of the system's own basis at ``x``; zero at every knot."""
    return power_samples(system, [float(x)])[0]


def mixed_power(system: InterpolationSystem, mu: float, x: float) -> PowerSample:
    """Mixed power function: the exponent-``mu`` form at thin-plate-spline weights.

    ``mu = 2`` reproduces the standard power function of the gamma=2 system.
    """
    return power_samples(system, [float(x)], mu=mu)[0]


def midpoint_sweep(system, mu, deterministic=False, weights=None) -> MidpointSweep:
    """Mixed-power sweep over the midpoint set ``{h/2, ..., 1 - h/2}``.

    ``weights`` may pass ``lagrange_matrix(system, system.grid.midpoints())``
    computed once and shared across several exponents.
    """
    xs = system.grid.midpoints()
    samples = power_samples(system, xs, mu=mu, deterministic=deterministic, weights=weights)
    return MidpointSweep(
        mu=float(mu),
        n=system.grid.n,
        samples=samples,
        max_value=max(s.value for s in samples),
        edge_value=samples[0].value,
    )


def midpoint_sweeps(system, mus, deterministic=False):
    """Sweeps for several exponents, solving the Lagrange weights only once."""
    V = lagrange_matrix(system, system.grid.midpoints())
    return [midpoint_sweep(system, mu, deterministic=deterministic, weights=V) for mu in mus]
