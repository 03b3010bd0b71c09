"""Polynomial helpers: evaluation, Sturm chains, root counting, extrema.

Polynomials are numpy arrays of coefficients in ascending order,
p(t) = c[0] + c[1]*t + ... + c[d]*t**d, in the local variable of one
piece of a piecewise polynomial.  Degrees here are small (<= ~6), so
plain Horner evaluation and companion-matrix roots are adequate.
"""
from __future__ import annotations

import numpy as np

#: Coefficients smaller than EPS_COEFF * max|coeff| are treated as zero
#: when trimming degrees inside Sturm chains.
EPS_COEFF = 1e-13


def polyval(coeffs, t, order: int = 0):
    """Evaluate the polynomial or one of its derivatives at t (Horner)."""
    c = polyder(coeffs, order) if order else np.asarray(coeffs, dtype=float)
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for ck in c[::-1]:
        out = out * t + ck
    return out if out.shape else float(out)


def polyder(coeffs, order: int = 1) -> np.ndarray:
    """Coefficients of the order-th derivative."""
    c = np.asarray(coeffs, dtype=float)
    for _ in range(order):
        if c.size <= 1:
            return np.zeros(1)
        c = c[1:] * np.arange(1, c.size)
    return c


def polyint(coeffs, constant: float = 0.0) -> np.ndarray:
    """Coefficients of the antiderivative with value `constant` at t=0."""
    c = np.asarray(coeffs, dtype=float)
    return np.concatenate(([constant], c / np.arange(1, c.size + 1)))


def _trim(c: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(c)) if c.size else 0.0
    if scale == 0.0:
        return np.zeros(1)
    keep = np.nonzero(np.abs(c) > EPS_COEFF * scale)[0]
    if keep.size == 0:
        return np.zeros(1)
    return c[: keep[-1] + 1]


def sturm_chain(coeffs) -> list[np.ndarray]:
    """Sturm sequence p0=p, p1=p', p_{k+1} = -rem(p_{k-1}, p_k)."""
    p0 = _trim(np.asarray(coeffs, dtype=float))
    if p0.size == 1:
        return [p0]
    chain = [p0, _trim(polyder(p0))]
    while chain[-1].size > 1:
        # numpy's polydiv wants descending coefficients
        _, rem = np.polydiv(chain[-2][::-1], chain[-1][::-1])
        rem = _trim(rem[::-1])
        if rem.size == 1 and rem[0] == 0.0:
            break
        chain.append(-rem)
    return chain


def _sign_changes(chain, t: float) -> int:
    signs = []
    for p in chain:
        v = polyval(p, t)
        # drop a value only when it is below its own evaluation noise
        noise = 4.0 * np.finfo(float).eps * polyval(np.abs(p), abs(t))
        if abs(v) > noise:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(coeffs, a: float, b: float, shrink: float = 1e-6) -> int:
    """Number of distinct real roots in the open interval (a, b).

    The interval is shrunk by `shrink`*(b-a) at each end so that roots
    placed exactly at the endpoints are not counted: double roots pinned
    to a breakpoint (plateau edges, sign junctions) split by ~sqrt(eps)
    relative under coefficient rounding, so the guard band must sit well
    above 1.5e-8 of the width.
    """
    c = _trim(np.asarray(coeffs, dtype=float))
    if c.size == 1:
        return 0
    d = shrink * (b - a)
    chain = sturm_chain(c)
    return max(_sign_changes(chain, a + d) - _sign_changes(chain, b - d), 0)


def real_roots(coeffs, a: float, b: float, tol: float = 1e-12):
    """Real roots inside [a, b] via the companion matrix, sorted."""
    c = _trim(np.asarray(coeffs, dtype=float))
    if c.size <= 1:
        return np.empty(0)
    r = np.roots(c[::-1])
    r = r[np.abs(r.imag) < 1e-8 * (1.0 + np.abs(r.real))].real
    r = r[(r >= a - tol) & (r <= b + tol)]
    return np.sort(np.clip(r, a, b))


def poly_range(coeffs, a: float, b: float) -> tuple[float, float]:
    """(min, max) of the polynomial over [a, b] (exact via critical points)."""
    crit = real_roots(polyder(coeffs), a, b)
    ts = np.concatenate(([a], crit, [b]))
    vals = polyval(coeffs, ts)
    vals = np.atleast_1d(vals)
    return float(vals.min()), float(vals.max())
