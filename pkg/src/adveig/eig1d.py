"""1D principal-eigenvalue solvers: symmetric gauge path and direct path.

The symmetric path discretizes the transformed quadratic form

    B(w) = int (w' - alpha w m')^2 + V w^2 dx
           + (l1/h1) w(0)^2 + (l2/h2) w(1)^2

with an exponentially fitted two-point flux per cell (exact on
w = e^{alpha m}), trapezoid mass, and Dirichlet ends eliminated.  The
smallest eigenvalue of the pencil (A, M) comes from Sturm bisection on
the mass-scaled tridiagonal, the eigenvector from shifted inverse
iteration, and the reported eigenvalue from the Rayleigh quotient of
the assembled form (bisection alone bottoms out at eps*||A|| on fine
meshes).

The direct path is an independent oracle: central differences on the
untransformed operator with ghost-point Robin closure, smallest real
eigenvalue by shifted inverse power iteration with tridiagonal LU.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal, solve_banded

from .model import Potential, ProblemSpec1D, RobinSide, validate

MAX_NODES = 2 ** 20
MESH_FLOOR = 2049
INVERSE_ITER_MAX = 50
INVERSE_ITER_RETRIES = 5


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid x_i = i*h on [0, 1], h = 1/(n-1)."""

    n: int

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("grid needs at least 3 nodes")

    @property
    def h(self) -> float:
        return 1.0 / (self.n - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.n)


def mesh_for_alpha(spec: ProblemSpec1D, alpha: float) -> Grid1D:
    """n = max(2049, ceil(32 alpha max|m'|) + 1), capped at 2^20."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    n = max(MESH_FLOOR, int(np.ceil(32.0 * alpha * spec.m.max_abs_derivative())) + 1)
    if n > MAX_NODES:
        warnings.warn(
            f"mesh rule wants n={n}; capping at {MAX_NODES} "
            "(boundary layers may be under-resolved)",
            RuntimeWarning,
            stacklevel=2,
        )
        n = MAX_NODES
    return Grid1D(n)


@dataclass
class SymTriSystem:
    """Pencil (A, M): A symmetric tridiagonal, M positive diagonal.

    Arrays live on the reduced index set (Dirichlet end nodes removed);
    `dirichlet_mask` records which of the full grid's end nodes were
    eliminated as (left, right).

    Assembled systems also carry the factored form A = F^T F + diag(q)
    with F[i,i] = -fa_i, F[i,i+1] = fb_i: evaluating the quadratic form
    and residuals through the small per-cell fluxes avoids the
    eps/h^2 cancellation noise of the raw tridiagonal arrays, which
    dominates the eigenvalue scale on fine meshes.
    """

    diag: np.ndarray
    offdiag: np.ndarray
    mass: np.ndarray
    dirichlet_mask: tuple[bool, bool] = (False, False)
    fa: np.ndarray | None = None
    fb: np.ndarray | None = None
    q: np.ndarray | None = None

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.offdiag = np.asarray(self.offdiag, dtype=float)
        self.mass = np.asarray(self.mass, dtype=float)
        if self.offdiag.size != self.diag.size - 1:
            raise ValueError("offdiag must have len(diag) - 1 entries")
        if np.any(self.mass <= 0):
            raise ValueError("mass entries must be positive")

    @property
    def n(self) -> int:
        return self.diag.size

    def fluxes(self, w: np.ndarray) -> np.ndarray:
        return self.fb * w[1:] - self.fa * w[:-1]

    def apply(self, w: np.ndarray) -> np.ndarray:
        if self.fa is None:
            out = self.diag * w
            out[:-1] += self.offdiag * w[1:]
            out[1:] += self.offdiag * w[:-1]
            return out
        f = self.fluxes(w)
        out = self.q * w
        out[:-1] -= self.fa * f
        out[1:] += self.fb * f
        return out

    def quadratic_form(self, w: np.ndarray) -> float:
        if self.fa is None:
            return float(
                np.dot(w, self.diag * w) + 2.0 * np.dot(self.offdiag, w[:-1] * w[1:])
            )
        f = self.fluxes(w)
        return float(np.dot(f, f) + np.dot(self.q, w * w))

    def residual_floor(self, w: np.ndarray, lam: float) -> float:
        """Rounding level of apply(w) - lam*M*w (absolute-value sum)."""
        if self.fa is None:
            mag = np.abs(self.diag * w)
            mag[:-1] += np.abs(self.offdiag * w[1:])
            mag[1:] += np.abs(self.offdiag * w[:-1])
        else:
            f = np.abs(self.fb * w[1:]) + np.abs(self.fa * w[:-1])
            mag = np.abs(self.q * w)
            mag[:-1] += np.abs(self.fa) * f
            mag[1:] += np.abs(self.fb) * f
        mag += abs(lam) * self.mass * np.abs(w)
        return float(np.finfo(float).eps * np.max(mag))


@dataclass
class EigenResult:
    """Principal eigenpair: sum_i mass_i w_i^2 = 1, w > 0 off Dirichlet nodes."""

    lam: float
    w: np.ndarray
    residual: float
    grid: Grid1D


def _assemble_core(xs, m_values, alpha, v_values, left_bc, right_bc):
    """Fitted-flux stiffness + trapezoid mass for one sub-problem.

    left_bc/right_bc are ('dirichlet',), ('neumann',) or ('robin', l_over_h)
    where the Robin term adds +l/h * w(end)^2 to the quadratic form.
    """
    n = xs.size
    h = xs[1] - xs[0]
    if m_values is None:
        a = b = np.ones(n - 1)
    else:
        delta = 0.5 * alpha * np.diff(m_values)
        delta = np.clip(delta, -700.0, 700.0)
        a = np.exp(delta)        # weight of the left node in the cell flux
        b = np.exp(-delta)       # weight of the right node
    sqh = np.sqrt(h)
    fa = a / sqh
    fb = b / sqh
    diag = np.zeros(n)
    diag[:-1] += fa * fa
    diag[1:] += fb * fb
    offdiag = np.full(n - 1, -1.0 / h)  # -fa*fb with a*b = 1 exactly
    mass = np.full(n, h)
    mass[0] = mass[-1] = 0.5 * h
    q = mass * np.asarray(v_values, dtype=float)
    if left_bc[0] == "robin":
        q[0] += left_bc[1]
    if right_bc[0] == "robin":
        q[-1] += right_bc[1]
    diag += q
    lo = 1 if left_bc[0] == "dirichlet" else 0
    hi = n - 1 if right_bc[0] == "dirichlet" else n
    # Dirichlet elimination: the boundary cell's flux involves only the
    # surviving node, so it folds into the diagonal weight q.
    q_eff = q.copy()
    if left_bc[0] == "dirichlet":
        q_eff[1] += fb[0] * fb[0]
    if right_bc[0] == "dirichlet":
        q_eff[-2] += fa[-1] * fa[-1]
    return SymTriSystem(
        diag[lo:hi],
        offdiag[lo : hi - 1],
        mass[lo:hi],
        (left_bc[0] == "dirichlet", right_bc[0] == "dirichlet"),
        fa=fa[lo : hi - 1],
        fb=fb[lo : hi - 1],
        q=q_eff[lo:hi],
    )


def _side_term(side: RobinSide):
    if side.is_dirichlet:
        return ("dirichlet",)
    if side.is_neumann:
        return ("neumann",)
    return ("robin", side.ratio)


def assemble_symmetric(spec: ProblemSpec1D, alpha: float, grid: Grid1D) -> SymTriSystem:
    """Stiffness/mass pair of the transformed quadratic form on the grid."""
    report = validate(spec)
    if not report.valid:
        raise ValueError("invalid problem spec: " + "; ".join(report.violations))
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    xs = grid.nodes
    D = spec.diffusion
    sys_ = _assemble_core(
        xs,
        spec.m(xs),
        alpha / D,  # gauge factor of the D-scaled operator is e^{alpha m / D}
        spec.v(xs) / D,
        _side_term(spec.left),
        _side_term(spec.right),
    )
    if D != 1.0:
        # scale the unit-diffusion form: B_D = D * B_1(alpha/D, V/D, (l/h)/D...)
        sys_.diag *= D
        sys_.offdiag *= D
        sys_.fa *= np.sqrt(D)
        sys_.fb *= np.sqrt(D)
        sys_.q *= D
    return sys_


def _scaled_tridiagonal(sys_: SymTriSystem):
    s = 1.0 / np.sqrt(sys_.mass)
    d = sys_.diag * s * s
    e = sys_.offdiag * s[:-1] * s[1:]
    return d, e


def smallest_eigenvalue(sys_: SymTriSystem) -> float:
    """Minimal lambda of A w = lambda M w (deterministic).

    Sturm bisection (LAPACK stebz) on M^{-1/2} A M^{-1/2} gives the
    bracket; a Rayleigh-quotient refinement through inverse iteration
    restores absolute accuracy 1e-10*max(1, |lambda|) on fine meshes,
    where raw bisection saturates at eps*||A||.
    """
    lam, _ = _smallest_pair(sys_)
    return lam


def _bisection_estimate(sys_: SymTriSystem) -> float:
    d, e = _scaled_tridiagonal(sys_)
    if d.size == 1:
        return float(d[0])
    vals = eigh_tridiagonal(
        d, e, eigvals_only=True, select="i", select_range=(0, 0), tol=0.0
    )
    return float(vals[0])


def _banded(sys_: SymTriSystem, shift: float) -> np.ndarray:
    ab = np.zeros((3, sys_.n))
    ab[0, 1:] = sys_.offdiag
    ab[1] = sys_.diag - shift * sys_.mass
    ab[2, :-1] = sys_.offdiag
    return ab


def _inverse_iteration(sys_: SymTriSystem, lam: float):
    """Eigenvector at shift lam - 1e-8 (1+|lam|); positive start, M-normalized.

    Iterates until the pencil residual reaches its rounding floor (or
    1e-10 (1+|lam|)), not just until the iterate stalls: on fine meshes
    a sup-norm stall can hide badly scaled high-frequency content.
    """
    shift_gap = 1e-8 * (1.0 + abs(lam))
    w = np.sqrt(sys_.mass)
    w /= np.sqrt(np.dot(sys_.mass, w * w))
    last_err = None
    for attempt in range(INVERSE_ITER_RETRIES):
        shift = lam - shift_gap * (10.0 ** attempt)
        ab = _banded(sys_, shift)
        try:
            cur = w.copy()
            best = None
            best_res = np.inf
            for _ in range(INVERSE_ITER_MAX):
                nxt = solve_banded((1, 1), ab, sys_.mass * cur)
                nxt /= np.sqrt(np.dot(sys_.mass, nxt * nxt))
                if np.dot(nxt, cur) < 0:
                    nxt = -nxt
                change = np.max(np.abs(nxt - cur)) / max(np.max(np.abs(nxt)), 1e-300)
                cur = nxt
                rq = sys_.quadratic_form(cur) / np.dot(sys_.mass, cur * cur)
                res = float(np.max(np.abs(sys_.apply(cur) - rq * sys_.mass * cur)))
                if res < best_res:
                    best, best_res = cur, res
                floor = 8.0 * sys_.residual_floor(cur, rq)
                if res <= max(floor, 1e-10 * (1.0 + abs(rq)) * np.min(sys_.mass)):
                    return cur
                if change < 1e-13:
                    break
            if best is not None:
                return best
        except np.linalg.LinAlgError as err:  # exactly singular shift
            last_err = err
    raise RuntimeError(
        f"inverse iteration failed after {INVERSE_ITER_RETRIES} shift retries"
    ) from last_err


def _smallest_pair(sys_: SymTriSystem):
    lam0 = _bisection_estimate(sys_)
    w = _inverse_iteration(sys_, lam0)
    # Rayleigh refinement: the assembled form is evaluated as a sum of
    # well-scaled pieces, so this is accurate where bisection is not.
    lam = sys_.quadratic_form(w) / np.dot(sys_.mass, w * w)
    if abs(lam - lam0) > 1e-6 * (1.0 + abs(lam0)):
        # shift was off: iterate once more around the refined value
        w = _inverse_iteration(sys_, lam)
        lam = sys_.quadratic_form(w) / np.dot(sys_.mass, w * w)
    return float(lam), w


def _embed_full(w_red: np.ndarray, sys_: SymTriSystem, n: int) -> np.ndarray:
    w = np.zeros(n)
    lo = 1 if sys_.dirichlet_mask[0] else 0
    w[lo : lo + w_red.size] = w_red
    return w


def principal_eigenpair(spec: ProblemSpec1D, alpha: float, grid: Grid1D) -> EigenResult:
    """Principal eigenpair of the symmetric (gauge) discretization."""
    sys_ = assemble_symmetric(spec, alpha, grid)
    lam, w_red = _smallest_pair(sys_)
    if np.sum(w_red) < 0:
        w_red = -w_red
    resid = sys_.apply(w_red) - lam * sys_.mass * w_red
    w = _embed_full(w_red, sys_, grid.n)
    return EigenResult(lam, w, float(np.max(np.abs(resid))), grid)


# ---------------------------------------------------------------------------
# direct (untransformed) path
# ---------------------------------------------------------------------------

class _DirectRows:
    """Central-difference rows of -D phi'' - 2 alpha m' phi' + V phi.

    Holds both the banded arrays (for the LU solves) and enough data to
    apply the operator in difference form, which avoids the eps/h^2
    cancellation of a naive tridiagonal matvec.
    """

    def __init__(self, spec: ProblemSpec1D, alpha: float, grid: Grid1D):
        xs = grid.nodes
        self.h = grid.h
        self.D = spec.diffusion
        self.alpha = alpha
        n = grid.n
        h, D = self.h, self.D
        mp = spec.m(xs, 1)
        vv = spec.v(xs)
        lower = -D / h**2 + alpha * mp[1:] / h    # coefficient of phi_{i-1}
        upper = -D / h**2 - alpha * mp[:-1] / h   # coefficient of phi_{i+1}
        diag = 2.0 * D / h**2 + vv
        self.bleft = self.bright = 0.0
        if not spec.left.is_dirichlet:
            q1 = spec.left.ratio
            self.bleft = 2.0 * D * q1 / h - 2.0 * alpha * mp[0] * q1
            diag = diag.copy()
            diag[0] += self.bleft
            upper = upper.copy()
            upper[0] = -2.0 * D / h**2
        if not spec.right.is_dirichlet:
            q2 = spec.right.ratio
            self.bright = 2.0 * D * q2 / h + 2.0 * alpha * mp[-1] * q2
            diag = diag.copy() if spec.left.is_dirichlet else diag
            diag[-1] += self.bright
            lower = lower.copy()
            lower[-1] = -2.0 * D / h**2
        lo = 1 if spec.left.is_dirichlet else 0
        hi = n - 1 if spec.right.is_dirichlet else n
        self.lo, self.hi = lo, hi
        self.diag = diag[lo:hi]
        self.lower = lower[lo : hi - 1]
        self.upper = upper[lo : hi - 1]
        self.mp = mp[lo:hi]
        self.vv = vv[lo:hi]
        self.left_dirichlet = spec.left.is_dirichlet
        self.right_dirichlet = spec.right.is_dirichlet

    @property
    def n(self) -> int:
        return self.diag.size

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Operator applied through node differences (cancellation-free)."""
        h, D, alpha = self.h, self.D, self.alpha
        dx = np.diff(x)  # x_{i+1} - x_i
        out = self.vv * x
        lap = np.empty_like(x)
        lap[1:-1] = (dx[:-1] - dx[1:]) / h**2
        if self.left_dirichlet:
            lap[0] = (x[0] - dx[0]) / h**2  # ghost value 0 left of the first node
            out[0] -= alpha * self.mp[0] * x[1] / h
        else:
            lap[0] = -2.0 * dx[0] / h**2
            out[0] += self.bleft * x[0]
        if self.right_dirichlet:
            lap[-1] = (x[-1] + dx[-1]) / h**2
            out[-1] += alpha * self.mp[-1] * x[-2] / h
        else:
            lap[-1] = 2.0 * dx[-1] / h**2
            out[-1] += self.bright * x[-1]
        out += D * lap
        out[1:-1] -= alpha * self.mp[1:-1] * (dx[:-1] + dx[1:]) / h
        return out

    def rayleigh(self, y: np.ndarray) -> float:
        """x^T A x for normalized x, grouped so no 1/h^2 cancellation occurs.

        The Laplacian block is summed by parts into Sum dx_k^2 plus end
        products, so the constant eigenfunction evaluates exactly.
        """
        h, D, alpha = self.h, self.D, self.alpha
        dx = np.diff(y)
        lap = float(np.dot(dx, dx))
        if self.left_dirichlet:
            lap += y[0] * y[0]
        else:
            lap -= y[0] * dx[0]
        if self.right_dirichlet:
            lap += y[-1] * y[-1]
        else:
            lap += y[-1] * dx[-1]
        total = float(np.dot(self.vv, y * y)) + D * lap / h**2
        total -= alpha * float(
            np.dot(self.mp[1:-1] * y[1:-1], dx[:-1] + dx[1:])
        ) / h
        if self.left_dirichlet:
            total -= alpha * self.mp[0] * y[0] * y[1] / h
        else:
            total += self.bleft * y[0] * y[0]
        if self.right_dirichlet:
            total += alpha * self.mp[-1] * y[-1] * y[-2] / h
        else:
            total += self.bright * y[-1] * y[-1]
        return total

    def weighted_rayleigh(self, y: np.ndarray) -> float:
        """Rayleigh quotient in the symmetrizing weight of the rows.

        The tridiagonal rows are diagonally similar to a symmetric matrix
        whenever lower*upper > 0 (guaranteed under the mesh rule); in the
        weighted form the quotient is variational, so its error is
        quadratic in the eigenvector error instead of linear, and the
        1/h^2 diagonal blocks cancel algebraically (the node weight is
        exactly rho_i V_i plus boundary terms).  Falls back to the plain
        grouped quotient outside the M-matrix regime.
        """
        h, D, alpha = self.h, self.D, self.alpha
        z = alpha * h * self.mp / D
        r = 1.0 + z
        l = 1.0 - z
        if np.min(r) <= 0.0 or np.min(l) <= 0.0:
            return self.rayleigh(y) / float(np.dot(y, y))
        lr = np.log(r[:-1]) - np.log(l[1:])
        if not self.left_dirichlet:
            lr[0] = np.log(2.0) - np.log(l[1])
        if not self.right_dirichlet:
            lr[-1] = np.log(r[-2]) - np.log(2.0)
        lnrho = np.concatenate(([0.0], np.cumsum(lr)))
        lnrho -= np.max(lnrho)
        rho = np.exp(lnrho)
        den = float(np.dot(rho, y * y))
        if not np.isfinite(den) or den < 1e-280:
            return self.rayleigh(y) / float(np.dot(y, y))
        scale = D / h**2
        g = rho[:-1] * r[:-1] * scale
        if not self.left_dirichlet:
            g[0] = 2.0 * rho[0] * scale
        c = rho * self.vv
        if self.left_dirichlet:
            c[0] += rho[0] * l[0] * scale
        else:
            c[0] += rho[0] * self.bleft
        if self.right_dirichlet:
            c[-1] += rho[-1] * r[-1] * scale
        else:
            c[-1] += rho[-1] * self.bright
        dx = np.diff(y)
        num = float(np.dot(g, dx * dx)) + float(np.dot(c, y * y))
        return num / den

    def noise_floor(self, x: np.ndarray) -> float:
        """Rounding level of apply(x): the same sum with absolute values."""
        h, D, alpha = self.h, self.D, self.alpha
        adx = np.abs(np.diff(x))
        mag = np.abs(self.vv * x)
        mag[1:-1] += D * (adx[:-1] + adx[1:]) / h**2
        mag[1:-1] += np.abs(alpha * self.mp[1:-1]) * (adx[:-1] + adx[1:]) / h
        if self.left_dirichlet:
            mag[0] += D * (abs(x[0]) + adx[0]) / h**2 + abs(alpha * self.mp[0] * x[1]) / h
        else:
            mag[0] += 2.0 * D * adx[0] / h**2 + abs(self.bleft * x[0])
        if self.right_dirichlet:
            mag[-1] += D * (abs(x[-1]) + adx[-1]) / h**2 + abs(alpha * self.mp[-1] * x[-2]) / h
        else:
            mag[-1] += 2.0 * D * adx[-1] / h**2 + abs(self.bright * x[-1])
        return float(np.finfo(float).eps * np.max(mag))


def principal_eigen_direct(
    spec: ProblemSpec1D, alpha: float, grid: Grid1D, max_iter: int = 400
) -> EigenResult:
    """Independent oracle: inverse power iteration on the direct rows.

    Returns the eigenfunction converted to w = e^{alpha m} phi
    (renormalized against overflow) for comparison with the gauge path.
    """
    report = validate(spec)
    if not report.valid:
        raise ValueError("invalid problem spec: " + "; ".join(report.violations))
    rows = _DirectRows(spec, alpha, grid)
    n = rows.n
    ab = np.zeros((3, n))
    sigma = (
        float(
            np.min(
                rows.diag
                - np.abs(np.r_[0.0, rows.lower])
                - np.abs(np.r_[rows.upper, 0.0])
            )
        )
        - 1.0
    )
    x = np.ones(n) / np.sqrt(n)
    rho_old = np.inf
    trace = []
    best_res = np.inf
    no_gain = 0
    for it in range(max_iter):
        ab[0, 1:] = rows.upper
        ab[1] = rows.diag - sigma
        ab[2, :-1] = rows.lower
        try:
            y = solve_banded((1, 1), ab, x)
        except np.linalg.LinAlgError:
            sigma -= 1e-6 * (1.0 + abs(sigma))
            continue
        y /= np.linalg.norm(y)
        if np.sum(y) < 0:
            y = -y
        ay = rows.apply(y)
        rho = rows.weighted_rayleigh(y)
        res = float(np.max(np.abs(ay - rho * y)))
        trace.append((it, rho, res))
        no_gain = no_gain + 1 if res > 0.5 * best_res else 0
        best_res = min(best_res, res)
        at_floor = res <= 8.0 * rows.noise_floor(y) + 1e-14 * (1.0 + abs(rho))
        if at_floor or (no_gain >= 3 and abs(rho - rho_old) <= 1e-13 * (1.0 + abs(rho))):
            x = y
            rho_old = rho
            break
        # move the shift up toward the eigenvalue, staying below it
        sigma = max(sigma, rho - max(0.01 * (1.0 + abs(rho)), 4.0 * res))
        x = y
        rho_old = rho
    else:
        tail = ", ".join(f"({i}, {r:.6g}, {e:.2e})" for i, r, e in trace[-5:])
        raise RuntimeError(
            f"direct inverse power iteration did not converge in {max_iter} "
            f"iterations; last (iter, rho, residual): {tail}"
        )
    phi = np.zeros(grid.n)
    phi[rows.lo : rows.lo + n] = x
    # convert to w for comparison, with overflow-safe renormalization
    mv = spec.m(grid.nodes)
    ref = float(mv.max())
    w = phi * np.exp(alpha * (mv - ref))
    mass = np.full(grid.n, grid.h)
    mass[0] = mass[-1] = 0.5 * grid.h
    nrm = np.sqrt(np.dot(mass, w * w))
    if nrm > 0:
        w /= nrm
    if np.sum(w) < 0:
        w = -w
    return EigenResult(float(rho_old), w, trace[-1][2], grid)


# ---------------------------------------------------------------------------
# sub-interval eigenvalues and diagnostics
# ---------------------------------------------------------------------------

class BCKind:
    """End condition of a sub-interval problem: 'N', 'D' or Robin (h, l)."""

    NEUMANN = ("neumann",)
    DIRICHLET = ("dirichlet",)

    @staticmethod
    def robin(h: float, l: float):
        if h == 0.0:
            return BCKind.DIRICHLET
        if l == 0.0:
            return BCKind.NEUMANN
        return ("robin", l / h)

    @staticmethod
    def from_side(side: RobinSide):
        return _side_term(side)


def sub_eigenvalue(
    v: Potential, a: float, b: float, left, right, n: int = 4097
) -> float:
    """Principal eigenvalue of -phi'' + V phi on (a, b) with the given ends.

    `left`/`right` are BCKind terms (NEUMANN, DIRICHLET or BCKind.robin).
    This is the alpha = 0 solver on the sub-interval; it realizes every
    lambda_1^{ij}(a, b) with i, j in {N, D, R}.
    """
    if not (0.0 <= a < b <= 1.0):
        raise ValueError("need 0 <= a < b <= 1")
    if b - a < 1e-8:
        raise ValueError(f"degenerate interval ({a:g}, {b:g})")
    xs = np.linspace(a, b, n)
    sys_ = _assemble_core(xs, None, 0.0, v(xs), tuple(left), tuple(right))
    lam, _ = _smallest_pair(sys_)
    return lam


def sub_eigenvalue_refined(v, a, b, left, right, n: int = 4097):
    """(Richardson-extrapolated value, error estimate) of sub_eigenvalue."""
    coarse = sub_eigenvalue(v, a, b, left, right, n=(n - 1) // 2 + 1)
    fine = sub_eigenvalue(v, a, b, left, right, n=n)
    extrap = fine + (fine - coarse) / 3.0
    return extrap, abs(fine - coarse) / 3.0


def energy_functional(spec: ProblemSpec1D, alpha: float, result: EigenResult) -> float:
    """Discrete int (w' - alpha w m')^2 dx plus non-Dirichlet boundary terms.

    Evaluated from the assembled form, so energy + int V w^2 equals the
    reported eigenvalue up to the solve residual.
    """
    sys_ = assemble_symmetric(spec, alpha, result.grid)
    lo = 1 if sys_.dirichlet_mask[0] else 0
    hi = result.grid.n - 1 if sys_.dirichlet_mask[1] else result.grid.n
    w_red = result.w[lo:hi]
    xs = result.grid.nodes[lo:hi]
    return sys_.quadratic_form(w_red) - float(
        np.dot(sys_.mass * spec.v(xs), w_red * w_red)
    )
