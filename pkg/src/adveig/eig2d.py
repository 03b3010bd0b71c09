"""Principal eigenvalue on the 2D torus and on Robin rectangles.

Same gauge idea as 1D: the drift operator transforms to
-Laplace w + (alpha^2 |grad m|^2 + alpha Laplace m + V) w, discretized
here by the exponentially fitted 5-point form whose edge fluxes
annihilate e^{alpha m} exactly.  The fitted off-diagonal couplings are
constant per direction (the fitting factors multiply to one), so the
operator is stored as a diagonal plus fixed-stencil shifts and is
symmetric by construction.

Predicted limit: min of V over the declared maxima of m (the spatially
periodic problem; the Neumann rectangle is the analog with corners, so
its acceptance tolerance is looser and documented as such).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


# ---------------------------------------------------------------------------
# analytic field catalog
# ---------------------------------------------------------------------------

class Field2D:
    """Smooth scalar field with optional analytic derivative suppliers."""

    def value(self, x, y):
        raise NotImplementedError

    def grad(self, x, y):
        raise NotImplementedError("field has no analytic gradient")

    def laplacian(self, x, y):
        raise NotImplementedError("field has no analytic Laplacian")


@dataclass
class TrigPolyField(Field2D):
    """Sum of separable trig monomials c * f(2 pi kx x) * g(2 pi ky y).

    Terms are (c, fx, kx, fy, ky) with fx/fy in {"cos", "sin", "one"}.
    Half-integer frequencies cover sin(pi x)-type rectangle fields.
    """

    terms: list = field(default_factory=list)

    @staticmethod
    def _f(kind, k, t, d=0):
        w = 2.0 * math.pi * k
        if kind == "one":
            return np.ones_like(t) if d == 0 else np.zeros_like(t)
        if kind == "cos":
            funcs = (np.cos, lambda u: -np.sin(u), lambda u: -np.cos(u))
        else:
            funcs = (np.sin, np.cos, lambda u: -np.sin(u))
        return funcs[d](w * t) * w**d

    def value(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        out = np.zeros(np.broadcast(x, y).shape)
        for c, fx, kx, fy, ky in self.terms:
            out = out + c * self._f(fx, kx, x) * self._f(fy, ky, y)
        return out

    def grad(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        gx = np.zeros(np.broadcast(x, y).shape)
        gy = np.zeros_like(gx)
        for c, fx, kx, fy, ky in self.terms:
            gx = gx + c * self._f(fx, kx, x, 1) * self._f(fy, ky, y)
            gy = gy + c * self._f(fx, kx, x) * self._f(fy, ky, y, 1)
        return gx, gy

    def laplacian(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        out = np.zeros(np.broadcast(x, y).shape)
        for c, fx, kx, fy, ky in self.terms:
            out = out + c * (
                self._f(fx, kx, x, 2) * self._f(fy, ky, y)
                + self._f(fx, kx, x) * self._f(fy, ky, y, 2)
            )
        return out


@dataclass
class QuadraticField(Field2D):
    """c0 + cx (x - x0)^2 + cy (y - y0)^2."""

    c0: float = 0.0
    cx: float = 0.0
    x0: float = 0.0
    cy: float = 0.0
    y0: float = 0.0

    def value(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        return self.c0 + self.cx * (x - self.x0) ** 2 + self.cy * (y - self.y0) ** 2

    def grad(self, x, y):
        x, y = np.asarray(x, float), np.asarray(y, float)
        shape = np.broadcast(x, y).shape
        return (
            np.broadcast_to(2.0 * self.cx * (x - self.x0), shape).copy(),
            np.broadcast_to(2.0 * self.cy * (y - self.y0), shape).copy(),
        )

    def laplacian(self, x, y):
        return np.full(np.broadcast(np.asarray(x), np.asarray(y)).shape,
                       2.0 * self.cx + 2.0 * self.cy)


@dataclass
class TabulatedField(Field2D):
    """Node-sampled field (row-major values[ix, iy] on the assembly grid)."""

    values: np.ndarray

    def value(self, x, y):  # only meaningful on its own grid
        raise NotImplementedError("tabulated fields are sampled, not evaluated")


# ---------------------------------------------------------------------------
# problem and operator
# ---------------------------------------------------------------------------

@dataclass
class Spec2D:
    """Torus or rectangle problem with declared maxima of m.

    domain: "torus" (L-periodic) or "rectangle" (Robin beta >= 0 per
    side, order left/right/bottom/top).  declared_maxima are points
    asserted by the caller and machine-checked against grid
    8-neighborhoods at assembly.
    """

    domain: str
    m: Field2D
    v: Field2D
    lx: float = 1.0
    ly: float = 1.0
    beta: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)
    declared_maxima: list = field(default_factory=list)

    def __post_init__(self):
        if self.domain not in ("torus", "rectangle"):
            raise ValueError("domain must be 'torus' or 'rectangle'")
        if self.domain == "rectangle" and any(b < 0 for b in self.beta):
            raise ValueError("rectangle sides need beta >= 0")


def _grid(spec: Spec2D, nx: int, ny: int):
    if spec.domain == "torus":
        xs = np.arange(nx) * (spec.lx / nx)
        ys = np.arange(ny) * (spec.ly / ny)
    else:
        xs = np.linspace(0.0, spec.lx, nx)
        ys = np.linspace(0.0, spec.ly, ny)
    return xs, ys


def _sample(fld: Field2D, xs, ys):
    if isinstance(fld, TabulatedField):
        vals = np.asarray(fld.values, dtype=float)
        if vals.shape != (xs.size, ys.size):
            raise ValueError(
                f"tabulated field shape {vals.shape} does not match grid "
                f"({xs.size}, {ys.size})"
            )
        return vals
    return fld.value(xs[:, None], ys[None, :])


@dataclass
class SparseSymOperator:
    """Fitted 5-point operator: diagonal + constant-coupling shifts.

    apply(w) = diag*w - kx*(ax_minus*w_shifted + ...) via the stored edge
    factor arrays; mass is the diagonal quadrature weight per node.
    """

    nx: int
    ny: int
    periodic: bool
    kx: float
    ky: float
    q: np.ndarray  # node weights: mass*V plus boundary beta terms
    mass: np.ndarray
    # edge factor arrays e^{+-alpha delta/2}; x-edges join (i,j)-(i+1,j)
    ax: np.ndarray
    bx: np.ndarray
    ay: np.ndarray
    by: np.ndarray

    @property
    def diag(self) -> np.ndarray:
        """True matrix diagonal (preconditioning/Gershgorin only)."""
        return self.q + self._flux_diag()

    def _fluxes(self, w: np.ndarray):
        if self.periodic:
            fx = self.bx * np.roll(w, -1, axis=0) - self.ax * w
            fy = self.by * np.roll(w, -1, axis=1) - self.ay * w
        else:
            fx = self.bx * w[1:, :] - self.ax * w[:-1, :]
            fy = self.by * w[:, 1:] - self.ay * w[:, :-1]
        return fx, fy

    def apply(self, w: np.ndarray) -> np.ndarray:
        """A*w: edge e joining P -> Q adds -a_e*flux to P and +b_e*flux to Q."""
        out = self.q * w
        fx, fy = self._fluxes(w)
        if self.periodic:
            out += -self.kx * self.ax * fx
            out += self.kx * np.roll(self.bx * fx, 1, axis=0)
            out += -self.ky * self.ay * fy
            out += self.ky * np.roll(self.by * fy, 1, axis=1)
        else:
            out[:-1, :] += -self.kx * self.ax * fx
            out[1:, :] += self.kx * self.bx * fx
            out[:, :-1] += -self.ky * self.ay * fy
            out[:, 1:] += self.ky * self.by * fy
        return out

    def quadratic_form(self, w: np.ndarray) -> float:
        fx, fy = self._fluxes(w)
        return (
            float(np.sum(self.q * w * w))
            + self.kx * float(np.sum(fx * fx))
            + self.ky * float(np.sum(fy * fy))
        )

    def _flux_diag(self) -> np.ndarray:
        d = np.zeros((self.nx, self.ny))
        if self.periodic:
            d += self.kx * self.ax**2
            d += np.roll(self.kx * self.bx**2, 1, axis=0)
            d += self.ky * self.ay**2
            d += np.roll(self.ky * self.by**2, 1, axis=1)
        else:
            d[:-1, :] += self.kx * self.ax**2
            d[1:, :] += self.kx * self.bx**2
            d[:, :-1] += self.ky * self.ay**2
            d[:, 1:] += self.ky * self.by**2
        return d

    def gershgorin_low(self) -> float:
        offsum = self._offdiag_abs_rowsum()
        return float(np.min((self.diag - offsum) / self.mass))

    def _offdiag_abs_rowsum(self) -> np.ndarray:
        s = np.zeros((self.nx, self.ny))
        if self.periodic:
            cx = self.kx * self.ax * self.bx
            s += cx + np.roll(cx, 1, axis=0)
            cy = self.ky * self.ay * self.by
            s += cy + np.roll(cy, 1, axis=1)
        else:
            cx = self.kx * self.ax * self.bx
            s[:-1, :] += cx
            s[1:, :] += cx
            cy = self.ky * self.ay * self.by
            s[:, :-1] += cy
            s[:, 1:] += cy
        return s


def assemble_2d(spec: Spec2D, alpha: float, nx: int, ny: int) -> SparseSymOperator:
    """Fitted symmetric operator of the transformed problem on an nx*ny grid."""
    if nx < 16 or ny < 16:
        raise ValueError("need nx, ny >= 16")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    xs, ys = _grid(spec, nx, ny)
    hx = spec.lx / nx if spec.domain == "torus" else xs[1] - xs[0]
    hy = spec.ly / ny if spec.domain == "torus" else ys[1] - ys[0]
    mv = _sample(spec.m, xs, ys)
    vv = _sample(spec.v, xs, ys)
    _check_declared_maxima(spec, mv, xs, ys)
    periodic = spec.domain == "torus"
    if periodic:
        dx = np.roll(mv, -1, axis=0) - mv
        dy = np.roll(mv, -1, axis=1) - mv
    else:
        dx = np.diff(mv, axis=0)
        dy = np.diff(mv, axis=1)
    ex = np.clip(0.5 * alpha * dx, -700.0, 700.0)
    ey = np.clip(0.5 * alpha * dy, -700.0, 700.0)
    ax, bx = np.exp(ex), np.exp(-ex)
    ay, by = np.exp(ey), np.exp(-ey)
    cell = hx * hy
    kx = cell / hx**2
    ky = cell / hy**2
    mass = np.full((nx, ny), cell)
    if not periodic:
        mass[0, :] *= 0.5
        mass[-1, :] *= 0.5
        mass[:, 0] *= 0.5
        mass[:, -1] *= 0.5
    q = mass * vv
    if not periodic:
        bl, br, bb, bt = spec.beta
        edge_x = np.full(ny, hy)
        edge_x[0] = edge_x[-1] = 0.5 * hy
        edge_y = np.full(nx, hx)
        edge_y[0] = edge_y[-1] = 0.5 * hx
        q[0, :] += bl * edge_x
        q[-1, :] += br * edge_x
        q[:, 0] += bb * edge_y
        q[:, -1] += bt * edge_y
    return SparseSymOperator(nx, ny, periodic, kx, ky, q, mass, ax, bx, ay, by)


def _check_declared_maxima(spec: Spec2D, mv, xs, ys) -> None:
    nx, ny = mv.shape
    for (px, py) in spec.declared_maxima:
        i = int(np.argmin(np.abs(((xs - px + spec.lx / 2) % spec.lx) - spec.lx / 2)))\
            if spec.domain == "torus" else int(np.argmin(np.abs(xs - px)))
        j = int(np.argmin(np.abs(((ys - py + spec.ly / 2) % spec.ly) - spec.ly / 2)))\
            if spec.domain == "torus" else int(np.argmin(np.abs(ys - py)))
        center = mv[i, j]
        for di in (-1, 0, 1):
            for dj in (-1, 0, 1):
                if di == 0 and dj == 0:
                    continue
                if spec.domain == "torus":
                    ii, jj = (i + di) % nx, (j + dj) % ny
                else:
                    ii, jj = i + di, j + dj
                    if not (0 <= ii < nx and 0 <= jj < ny):
                        continue
                if mv[ii, jj] > center + 1e-12 * (1.0 + abs(center)):
                    raise ValueError(
                        f"declared maximum ({px:g}, {py:g}) fails the grid "
                        f"8-neighborhood check at node ({i}, {j})"
                    )


def smallest_eig_2d(
    op: SparseSymOperator,
    tol: float = 1e-9,
    max_outer: int = 200,
    inner_tol: float = 1e-10,
    start: np.ndarray | None = None,
):
    """Smallest eigenpair of (A, M) by shifted inverse power + PCG solves.

    Returns (lambda, field) with the field M-normalized and positive.
    Raises RuntimeError with the residual history on inner-solve
    stagnation.
    """
    mass = op.mass
    w = np.sqrt(mass) if start is None else start.copy()
    w /= math.sqrt(float(np.sum(mass * w * w)))
    sigma = op.gershgorin_low() - 1.0
    lam = None
    history = []
    for outer in range(max_outer):
        rhs = mass * w
        try:
            y = _pcg(op, sigma, rhs, w, inner_tol)
        except RuntimeError:
            # shift crossed the eigenvalue: back it off and retry
            ref = lam if lam is not None else sigma + 1.0
            sigma = sigma - max(abs(ref - sigma), 0.1 * (1.0 + abs(ref)))
            continue
        y /= math.sqrt(float(np.sum(mass * y * y)))
        if float(np.sum(y * w)) < 0:
            y = -y
        new_lam = op.quadratic_form(y) / float(np.sum(mass * y * y))
        w = y
        history.append(new_lam)
        if lam is not None and abs(new_lam - lam) < tol * (1.0 + abs(new_lam)):
            lam = new_lam
            break
        # pull the shift toward the eigenvalue from below; the Rayleigh
        # sequence decreases monotonically while sigma < lambda_1
        drop = abs(new_lam - lam) if lam is not None else abs(new_lam) + 1.0
        sigma = max(sigma, new_lam - max(2.0 * drop, 1e-3 * (1.0 + abs(new_lam))))
        lam = new_lam
    else:
        raise RuntimeError(
            f"2D inverse power iteration did not converge; history tail "
            f"{history[-5:]}"
        )
    if np.sum(w) < 0:
        w = -w
    return float(lam), w


def _pcg(op: SparseSymOperator, sigma: float, rhs: np.ndarray, x0, tol: float):
    """Jacobi-preconditioned CG on (A - sigma M) x = rhs."""
    def apply(v):
        return op.apply(v) - sigma * op.mass * v

    dinv = 1.0 / np.maximum(op.diag - sigma * op.mass, 1e-300)
    x = x0.copy()
    r = rhs - apply(x)
    z = dinv * r
    p = z.copy()
    rz = float(np.sum(r * z))
    rhs_norm = math.sqrt(float(np.sum(rhs * rhs)))
    best = math.inf
    since_best = 0
    history = []
    for _ in range(20000):
        ap = apply(p)
        pap = float(np.sum(p * ap))
        if pap <= 0:
            raise RuntimeError("shifted operator lost definiteness in CG")
        alpha_cg = rz / pap
        x += alpha_cg * p
        r -= alpha_cg * ap
        rn = math.sqrt(float(np.sum(r * r)))
        history.append(rn)
        if rn <= tol * rhs_norm:
            return x
        since_best = since_best + 1 if rn >= best else 0
        best = min(best, rn)
        if since_best > 300:
            raise RuntimeError(
                f"CG stagnated at relative residual {rn / rhs_norm:.2e}; "
                f"history tail {history[-5:]}"
            )
        z = dinv * r
        rz_new = float(np.sum(r * z))
        p = z + (rz_new / rz) * p
        rz = rz_new
    raise RuntimeError(f"CG exceeded iteration budget; history tail {history[-5:]}")


def predicted_limit_2d(spec: Spec2D) -> float:
    """min over the declared maxima of V (the periodic/Neumann limit)."""
    if not spec.declared_maxima:
        raise ValueError("no declared maxima")
    return min(float(np.asarray(spec.v.value(px, py))) for px, py in spec.declared_maxima)


def verify_2d(spec: Spec2D, alphas, nx: int, ny: int, tol: float = 0.15):
    """Sweep, trend, and agreement against the declared-maxima limit.

    Returns a dict report; agreement means |lambda(alpha_max) - limit|
    <= tol with the discrepancy not growing since mid-sweep.
    """
    from .sweep import TrendVerdict, classify_trend  # shared trend logic

    sched = [float(a) for a in alphas]
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise ValueError("alpha schedule must be strictly increasing")
    predicted = predicted_limit_2d(spec)
    lams = []
    w = None
    for a in sched:
        op = assemble_2d(spec, a, nx, ny)
        lam, w = smallest_eig_2d(op, start=w)
        lams.append(lam)
    trend = classify_trend(lams) if len(lams) >= 4 else TrendVerdict("inconclusive")
    disc_end = abs(lams[-1] - predicted)
    disc_mid = abs(lams[len(lams) // 2] - predicted)
    agree = disc_end <= tol and disc_end <= disc_mid * (1.0 + 1e-9) + 1e-9
    return {
        "predicted": predicted,
        "alphas": sched,
        "lambdas": lams,
        "trend": trend.to_dict(),
        "agree": bool(agree),
        "tolerance": tol,
    }
