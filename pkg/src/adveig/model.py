"""Problem specification: advection profile, potential, boundary data.

The 1D eigenproblem on (0, 1) is

    -D phi'' - 2 alpha m'(x) phi' + V(x) phi = lambda phi,
    -h1 phi'(0) + l1 phi(0) = 0,    h2 phi'(1) + l2 phi(1) = 0,

with m a C^2 piecewise polynomial whose derivative has an exact,
declared sign on each open piece, and V a continuous piecewise
polynomial.  Validation is report-based: constructors only enforce
shape, `validate` lists every violated invariant.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field

import numpy as np

from . import polyroots

#: Tolerances for C^2 matching at interior breakpoints.
TOL_VALUE = 1e-10
TOL_DERIV = 1e-8

SIGN_TAGS = ("+", "-", "zero")


class PiecewisePoly:
    """Piecewise polynomial on [0, 1] in local coordinates per piece.

    pieces[k] holds ascending coefficients of p_k(t), t = x - breakpoints[k],
    valid on [breakpoints[k], breakpoints[k+1]].
    """

    def __init__(self, breakpoints, pieces):
        bp = np.asarray(breakpoints, dtype=float)
        if bp.ndim != 1 or bp.size < 2:
            raise ValueError("need at least two breakpoints")
        if abs(bp[0]) > 1e-14 or abs(bp[-1] - 1.0) > 1e-14:
            raise ValueError("breakpoints must span [0, 1]")
        if np.any(np.diff(bp) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if len(pieces) != bp.size - 1:
            raise ValueError("need one coefficient sequence per interval")
        self.breakpoints = bp
        self.pieces = [np.atleast_1d(np.asarray(c, dtype=float)) for c in pieces]

    # -- evaluation ---------------------------------------------------------

    def piece_index(self, x: float) -> int:
        """Index of the piece owning x; breakpoints belong to the right piece."""
        k = bisect.bisect_right(self.breakpoints, x) - 1
        return min(max(k, 0), len(self.pieces) - 1)

    def __call__(self, x, order: int = 0):
        x = np.asarray(x, dtype=float)
        if np.any(x < -1e-12) or np.any(x > 1.0 + 1e-12):
            raise ValueError("x outside [0, 1]")
        scalar = x.ndim == 0
        xf = np.atleast_1d(x)
        k = np.minimum(
            np.searchsorted(self.breakpoints, xf, side="right") - 1,
            len(self.pieces) - 1,
        )
        k = np.maximum(k, 0)
        out = np.empty_like(xf)
        for j in np.unique(k):
            sel = k == j
            out[sel] = polyroots.polyval(
                self.pieces[j], xf[sel] - self.breakpoints[j], order
            )
        return float(out[0]) if scalar else out

    # -- global properties --------------------------------------------------

    def derivative_range(self, order: int = 1) -> tuple[float, float]:
        lo, hi = np.inf, -np.inf
        for k, c in enumerate(self.pieces):
            w = self.breakpoints[k + 1] - self.breakpoints[k]
            plo, phi = polyroots.poly_range(polyroots.polyder(c, order), 0.0, w)
            lo, hi = min(lo, plo), max(hi, phi)
        return lo, hi

    def value_range(self) -> tuple[float, float]:
        return self.derivative_range(order=0)

    def max_abs_derivative(self) -> float:
        lo, hi = self.derivative_range(1)
        return max(abs(lo), abs(hi))

    def continuity_errors(self, orders=(0,)) -> list[tuple[float, int, float]]:
        """(breakpoint, order, |jump|) for every interior junction and order."""
        errs = []
        for k in range(len(self.pieces) - 1):
            xk = self.breakpoints[k + 1]
            w = xk - self.breakpoints[k]
            for order in orders:
                left = polyroots.polyval(self.pieces[k], w, order)
                right = polyroots.polyval(self.pieces[k + 1], 0.0, order)
                errs.append((xk, order, abs(left - right)))
        return errs

    def shifted(self, c: float) -> "PiecewisePoly":
        """Same function plus the constant c."""
        pieces = [p.copy() for p in self.pieces]
        for p in pieces:
            p[0] += c
        return self._rebuild(pieces)

    def _rebuild(self, pieces):
        return PiecewisePoly(self.breakpoints.copy(), pieces)


class Potential(PiecewisePoly):
    """Continuous piecewise-polynomial potential V on [0, 1]."""

    def _rebuild(self, pieces):
        return Potential(self.breakpoints.copy(), pieces)

    @staticmethod
    def constant(value: float) -> "Potential":
        return Potential([0.0, 1.0], [[value]])


class PiecewiseProfile(PiecewisePoly):
    """C^2 advection profile m with declared per-piece sign of m'."""

    def __init__(self, breakpoints, pieces, declared_sign, constant: bool = False):
        super().__init__(breakpoints, pieces)
        signs = tuple(declared_sign)
        if len(signs) != len(self.pieces):
            raise ValueError("need one sign tag per piece")
        for s in signs:
            if s not in SIGN_TAGS:
                raise ValueError(f"sign tag must be one of {SIGN_TAGS}, got {s!r}")
        self.declared_sign = signs
        self.constant = constant

    def _rebuild(self, pieces):
        return PiecewiseProfile(
            self.breakpoints.copy(), pieces, self.declared_sign, self.constant
        )

    @staticmethod
    def from_derivative(breakpoints, dpieces, declared_sign, m0: float = 0.0):
        """Build m by integrating piecewise coefficients of m' (continuously)."""
        bp = np.asarray(breakpoints, dtype=float)
        pieces = []
        value = m0
        for k, dc in enumerate(dpieces):
            c = polyroots.polyint(np.asarray(dc, dtype=float), value)
            pieces.append(c)
            value = polyroots.polyval(c, bp[k + 1] - bp[k])
        return PiecewiseProfile(bp, pieces, declared_sign)

    @staticmethod
    def linear(slope: float, intercept: float = 0.0) -> "PiecewiseProfile":
        sign = "+" if slope > 0 else ("-" if slope < 0 else "zero")
        return PiecewiseProfile(
            [0.0, 1.0], [[intercept, slope]], [sign], constant=(slope == 0.0)
        )

    def reversed(self) -> "PiecewiseProfile":
        """The profile x -> m(1 - x) (used by the reversal-symmetry checks)."""
        bp = 1.0 - self.breakpoints[::-1]
        flip = {"+": "-", "-": "+", "zero": "zero"}
        pieces, signs = [], []
        for k in range(len(self.pieces) - 1, -1, -1):
            w = self.breakpoints[k + 1] - self.breakpoints[k]
            c = self.pieces[k]
            # q(t) = p(w - t), expanded in ascending powers of t
            deg = c.size - 1
            q = np.zeros_like(c)
            for j, cj in enumerate(c):
                # cj * (w - t)^j
                for i in range(j + 1):
                    q[i] += cj * math.comb(j, i) * (w ** (j - i)) * ((-1.0) ** i)
            pieces.append(q)
            signs.append(flip[self.declared_sign[k]])
        return PiecewiseProfile(bp, pieces, signs, self.constant)


@dataclass(frozen=True)
class RobinSide:
    """Boundary pair (h, l): -h phi'(0) + l phi(0) = 0 or h phi'(1) + l phi(1) = 0."""

    h: float
    l: float
    which_end: str = "left"

    def __post_init__(self):
        if self.which_end not in ("left", "right"):
            raise ValueError("which_end must be 'left' or 'right'")

    @property
    def is_dirichlet(self) -> bool:
        return self.h == 0.0

    @property
    def is_neumann(self) -> bool:
        return self.h != 0.0 and self.l == 0.0

    @property
    def ratio(self) -> float:
        """l/h (the Robin coefficient beta of the w-form boundary term)."""
        if self.h == 0.0:
            raise ZeroDivisionError("Dirichlet side has no l/h ratio")
        return self.l / self.h


def side_class(side: RobinSide) -> str:
    """Sign class of a boundary side: '+' if h*l>0 or h=0; '0' if l=0; '-' if h*l<0."""
    if side.h == 0.0:
        return "+"
    if side.l == 0.0:
        return "0"
    return "+" if side.h * side.l > 0 else "-"


@dataclass(frozen=True)
class ProblemSpec1D:
    m: PiecewiseProfile
    v: Potential
    left: RobinSide
    right: RobinSide
    diffusion: float = 1.0


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def add(self, msg: str) -> None:
        self.violations.append(msg)


def evaluate(profile: PiecewisePoly, x: float, order: int = 0) -> float:
    """m(x), m'(x) or m''(x); breakpoints evaluate on the right piece."""
    if order not in (0, 1, 2):
        raise ValueError("order must be 0, 1 or 2")
    return profile(x, order)


def _check_profile(m: PiecewiseProfile, report: ValidationReport) -> None:
    for xk, order, err in m.continuity_errors(orders=(0, 1, 2)):
        tol = TOL_VALUE if order == 0 else TOL_DERIV
        if err > tol:
            label = {0: "C0", 1: "C1", 2: "C2"}[order]
            report.add(f"{label} mismatch at {xk:g}: jump {err:.3e}")
    any_signed = False
    for k, c in enumerate(m.pieces):
        a, b = m.breakpoints[k], m.breakpoints[k + 1]
        dc = polyroots.polyder(c)
        tag = m.declared_sign[k]
        scale = max(np.max(np.abs(dc)), 1.0)
        if tag == "zero":
            if np.max(np.abs(dc)) > TOL_DERIV * scale:
                report.add(f"piece {k} ({a:g},{b:g}) declared zero but m' != 0")
            continue
        any_signed = True
        nroots = polyroots.count_roots(dc, 0.0, b - a)
        if nroots > 0:
            report.add(
                f"piece {k} ({a:g},{b:g}): m' has {nroots} interior root(s), "
                f"sign declaration '{tag}' invalid"
            )
            continue
        mid = polyroots.polyval(dc, 0.5 * (b - a))
        if tag == "+" and mid <= 0 or tag == "-" and mid >= 0:
            report.add(f"piece {k} ({a:g},{b:g}): m' sign does not match '{tag}'")
    if not any_signed and not m.constant:
        report.add("all pieces declared zero but profile not flagged constant")


def validate(spec: ProblemSpec1D) -> ValidationReport:
    """Check every model invariant; violations become report entries."""
    report = ValidationReport()
    _check_profile(spec.m, report)
    for xk, _, err in spec.v.continuity_errors(orders=(0,)):
        if err > TOL_VALUE:
            report.add(f"potential C0 mismatch at {xk:g}: jump {err:.3e}")
    for side in (spec.left, spec.right):
        if abs(side.h) + abs(side.l) == 0.0:
            report.add(f"{side.which_end} boundary: |h|+|l|=0")
    if not (spec.diffusion > 0.0):
        report.add(f"diffusion must be positive, got {spec.diffusion:g}")
    return report
