"""Gauge substitution w = e^{alpha m} phi and its Schrödinger form.

The substitution turns the drift operator into the symmetric operator
-w'' + Q_alpha w with effective potential

    Q_alpha(x) = alpha^2 m'(x)^2 + alpha m''(x) + V(x)

and Robin data whose slopes grow linearly in alpha.  The weighted
Rayleigh quotient of the original problem and the symmetric quadratic
form of the transformed one are the same number; `symmetric_quotient`
and `weighted_direct_quotient` implement discretizations that agree to
rounding, which the solver tests lean on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import PiecewiseProfile, ProblemSpec1D, RobinSide

#: alpha * range(m) beyond which e^{alpha m} is never materialized directly.
OVERFLOW_LIMIT = 600.0


def effective_potential(spec: ProblemSpec1D, alpha: float, x) -> float:
    """Q_alpha(x) = alpha^2 m'(x)^2 + alpha m''(x) + V(x)."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    mp = spec.m(x, 1)
    mpp = spec.m(x, 2)
    return alpha * alpha * mp * mp + alpha * mpp + spec.v(x)


@dataclass(frozen=True)
class TransformedBC:
    """Outward condition w'(end) = c * w(end); Dirichlet when h = 0."""

    kind: str  # "dirichlet" | "robin"
    c: float = 0.0

    @property
    def is_dirichlet(self) -> bool:
        return self.kind == "dirichlet"


def transformed_bc(side: RobinSide, alpha: float, end_slope: float = 1.0) -> TransformedBC:
    """Robin data of the transformed problem at one end.

    With the gauge factor e^{alpha m}, the original condition becomes
    w'(0) = (alpha m'(0) + l1/h1) w(0) on the left and
    w'(1) = (alpha m'(1) - l2/h2) w(1) on the right.  `end_slope` is
    m' at the end in question; the default 1.0 covers m(x) = x.
    """
    if side.is_dirichlet:
        return TransformedBC("dirichlet")
    if side.which_end == "left":
        return TransformedBC("robin", alpha * end_slope + side.ratio)
    return TransformedBC("robin", alpha * end_slope - side.ratio)


def _log_reference(m_values: np.ndarray, alpha: float) -> float:
    """Gauge normalization: shift by max(m) once e^{alpha m} would overflow."""
    spread = alpha * (float(m_values.max()) - float(m_values.min()))
    return float(m_values.max()) if spread > OVERFLOW_LIMIT else 0.0


def _profile_values(m, x: np.ndarray) -> np.ndarray:
    if isinstance(m, PiecewiseProfile):
        return m(x)
    return np.asarray(m, dtype=float)


def gauge_forward(phi, m, alpha: float, x=None) -> np.ndarray:
    """w_i = e^{alpha m(x_i)} phi_i on a grid.

    `m` may be a PiecewiseProfile (then `x` holds the nodes) or an array
    of m-values.  When alpha*range(m) exceeds OVERFLOW_LIMIT the result
    is renormalized by e^{-alpha max m} to stay representable;
    gauge_backward applies the matching factor, so round trips are exact.
    """
    phi = np.asarray(phi, dtype=float)
    xs = np.linspace(0.0, 1.0, phi.size) if x is None else np.asarray(x, dtype=float)
    mv = _profile_values(m, xs)
    ref = _log_reference(mv, alpha)
    return phi * np.exp(alpha * (mv - ref))


def gauge_backward(w, m, alpha: float, x=None) -> np.ndarray:
    """Pointwise inverse of gauge_forward (same renormalization rule)."""
    w = np.asarray(w, dtype=float)
    xs = np.linspace(0.0, 1.0, w.size) if x is None else np.asarray(x, dtype=float)
    mv = _profile_values(m, xs)
    ref = _log_reference(mv, alpha)
    return w * np.exp(-alpha * (mv - ref))


def _trapezoid_mass(n: int, h: float) -> np.ndarray:
    mass = np.full(n, h)
    mass[0] = mass[-1] = 0.5 * h
    return mass


def symmetric_quotient(w, spec: ProblemSpec1D, alpha: float, x) -> float:
    """Discrete Rayleigh quotient of the symmetric (transformed) form.

    Numerator: sum_cells h * D_i^2 + sum_i mass_i V_i w_i^2 plus the
    boundary terms (l/h) w^2 on non-Dirichlet ends, with the fitted
    difference D_i = (w_{i+1} e^{-a d/2} - w_i e^{+a d/2}) / h,
    d = m_{i+1} - m_i.  Denominator: mass-weighted sum of w^2.
    """
    w = np.asarray(w, dtype=float)
    x = np.asarray(x, dtype=float)
    h = x[1] - x[0]
    mv = spec.m(x)
    delta = np.diff(mv)
    d = (w[1:] * np.exp(-0.5 * alpha * delta) - w[:-1] * np.exp(0.5 * alpha * delta)) / h
    mass = _trapezoid_mass(w.size, h)
    num = h * np.dot(d, d) + np.dot(mass * spec.v(x), w * w)
    if not spec.left.is_dirichlet:
        num += spec.left.ratio * w[0] ** 2
    if not spec.right.is_dirichlet:
        num += spec.right.ratio * w[-1] ** 2
    return num / np.dot(mass, w * w)


def weighted_direct_quotient(phi, spec: ProblemSpec1D, alpha: float, x) -> float:
    """Discrete Rayleigh quotient of the original form with weight e^{2 alpha m}.

    Cell weights use the midpoint value e^{alpha (m_i + m_{i+1})}; the
    whole quotient is invariant under the overflow-guard renormalization.
    """
    phi = np.asarray(phi, dtype=float)
    x = np.asarray(x, dtype=float)
    h = x[1] - x[0]
    mv = spec.m(x)
    ref = float(mv.max())  # harmless shift: the quotient is invariant under it
    wcell = np.exp(alpha * (mv[:-1] + mv[1:] - 2.0 * ref))
    wnode = np.exp(2.0 * alpha * (mv - ref))
    dphi = np.diff(phi) / h
    mass = _trapezoid_mass(phi.size, h)
    num = h * np.dot(wcell, dphi * dphi) + np.dot(mass * wnode * spec.v(x), phi * phi)
    if not spec.left.is_dirichlet:
        num += spec.left.ratio * wnode[0] * phi[0] ** 2
    if not spec.right.is_dirichlet:
        num += spec.right.ratio * wnode[-1] * phi[-1] ** 2
    return num / np.dot(mass * wnode, phi * phi)
