"""Alpha sweeps: trend classification, concentration, verification.

A sweep solves the eigenproblem over an increasing alpha schedule at
mesh_for_alpha resolution, records the energy functional and boundary
masses per point, classifies the tail trend, and compares against the
predicted limit.  Agreement thresholds (0.1 absolute, delta shrink
factor 0.7) are heuristics calibrated on the bundled catalog; the limit
theorems carry no rate in alpha.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .classify import MaxStructure, local_maxima
from .eig1d import EigenResult, Grid1D, energy_functional, mesh_for_alpha, principal_eigenpair
from .model import ProblemSpec1D
from .predict import LimitPrediction, predict_limit

DEFAULT_SCHEDULE = (0.0, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 150.0, 200.0)

#: Converging requires successive |delta| ratios at or below this factor.
SHRINK_FACTOR = 0.7
#: Absolute agreement threshold for finite predictions.
AGREE_ABS = 0.1


@dataclass
class SweepPoint:
    alpha: float
    lam: float
    n: int
    residual: float
    energy: float
    w0sq: float
    w1sq: float
    ms: float
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


@dataclass
class TrendVerdict:
    kind: str  # converging | diverging_up | diverging_down | inconclusive
    estimate: float | None = None
    last_delta: float | None = None

    def to_dict(self) -> dict:
        names = {
            "converging": "Converging",
            "diverging_up": "DivergingUp",
            "diverging_down": "DivergingDown",
            "inconclusive": "Inconclusive",
        }
        out = {"kind": names[self.kind]}
        if self.kind == "converging":
            out["estimate"] = self.estimate
            out["last_delta"] = self.last_delta
        return out


@dataclass
class ConcentrationReport:
    region: list[tuple[float, float]]
    delta: float
    mass_per_alpha: list[float]


@dataclass
class VerificationReport:
    prediction: LimitPrediction
    points: list[SweepPoint]
    trend: TrendVerdict
    agree: bool
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "prediction": self.prediction.to_dict(),
            "trend": self.trend.to_dict(),
            "agree": self.agree,
            "detail": self.detail,
            "sweep": [
                {
                    "alpha": p.alpha,
                    "lambda": p.lam,
                    "n": p.n,
                    "residual": p.residual,
                    "energy": p.energy,
                    "w0sq": p.w0sq,
                    "w1sq": p.w1sq,
                    "error": p.error,
                }
                for p in self.points
            ],
        }


def _check_schedule(alphas) -> list[float]:
    sched = [float(a) for a in alphas]
    if any(a < 0 for a in sched):
        raise ValueError("alphas must be nonnegative")
    if any(b <= a for a, b in zip(sched, sched[1:])):
        raise ValueError("alpha schedule must be strictly increasing")
    return sched


def run_sweep(
    spec: ProblemSpec1D,
    alphas=DEFAULT_SCHEDULE,
    mesh: int | None = None,
    keep_results: bool = False,
):
    """One gauge-path solve per alpha; solver errors become point entries.

    Returns (points, results); `results` holds the EigenResult per point
    when keep_results is true (None entries on failures), else None.
    """
    sched = _check_schedule(alphas)
    points: list[SweepPoint] = []
    results: list[EigenResult | None] = []
    for a in sched:
        grid = Grid1D(mesh) if mesh else mesh_for_alpha(spec, a)
        t0 = time.perf_counter()
        try:
            r = principal_eigenpair(spec, a, grid)
            en = energy_functional(spec, a, r)
            pt = SweepPoint(
                alpha=a,
                lam=r.lam,
                n=grid.n,
                residual=r.residual,
                energy=en,
                w0sq=float(r.w[0] ** 2),
                w1sq=float(r.w[-1] ** 2),
                ms=1e3 * (time.perf_counter() - t0),
            )
            results.append(r if keep_results else None)
        except Exception as err:  # noqa: BLE001 - per-point failures recorded
            pt = SweepPoint(a, np.nan, grid.n, np.nan, np.nan, np.nan, np.nan,
                            1e3 * (time.perf_counter() - t0), error=str(err))
            results.append(None)
        points.append(pt)
    return points, (results if keep_results else None)


def classify_trend(points, prediction: LimitPrediction | None = None) -> TrendVerdict:
    """Tail trend of the lambda sequence.

    `prediction` is accepted for signature compatibility and unused: the
    verdict depends only on the sweep, `verify` does the comparison.
    Needs at least 4 valid points.
    """
    lams = [p.lam for p in points if isinstance(p, SweepPoint) and p.ok] \
        if points and isinstance(points[0], SweepPoint) else [float(x) for x in points]
    if len(lams) < 4:
        return TrendVerdict("inconclusive")
    l3, l2, l1, l0 = lams[-4], lams[-3], lams[-2], lams[-1]
    d2, d1, d0 = l2 - l3, l1 - l2, l0 - l1
    scale = 1.0 + abs(l0)
    tiny = 1e-9 * scale
    if abs(d0) <= tiny and abs(d1) <= tiny:
        return TrendVerdict("converging", estimate=l0, last_delta=abs(d0))
    if d2 > 0 and d1 > 0 and d0 > 0 and d1 >= d2 and d0 >= d1:
        return TrendVerdict("diverging_up")
    if d2 < 0 and d1 < 0 and d0 < 0 and d1 <= d2 and d0 <= d1:
        return TrendVerdict("diverging_down")
    if abs(d1) <= SHRINK_FACTOR * abs(d2) + tiny and abs(d0) <= SHRINK_FACTOR * abs(d1) + tiny:
        return TrendVerdict("converging", estimate=l0, last_delta=abs(d0))
    return TrendVerdict("inconclusive")


def concentration(result: EigenResult, items, delta: float) -> float:
    """Trapezoid-weighted mass of w^2 within `delta` of the given items.

    `items` is any iterable of MaxItems (pass a MaxStructure's items()
    or a subset, e.g. just the predicted minimizer).
    """
    if delta <= 0:
        raise ValueError("delta must be positive")
    xs = result.grid.nodes
    inside = np.zeros(xs.size, dtype=bool)
    for item in items:
        inside |= (xs >= item.a - delta) & (xs <= item.b + delta)
    mass = np.full(xs.size, result.grid.h)
    mass[0] = mass[-1] = 0.5 * result.grid.h
    return float(np.dot(mass[inside], result.w[inside] ** 2))


def concentration_report(
    spec: ProblemSpec1D,
    alphas,
    items,
    delta: float,
    mesh: int | None = None,
) -> ConcentrationReport:
    """Concentration masses along a sweep (one solve per alpha)."""
    items = list(items)
    _, results = run_sweep(spec, alphas, mesh=mesh, keep_results=True)
    masses = [np.nan if r is None else concentration(r, items, delta) for r in results]
    return ConcentrationReport(
        region=[(it.a, it.b) for it in items], delta=delta, mass_per_alpha=masses
    )


def verify(
    spec: ProblemSpec1D,
    alphas=DEFAULT_SCHEDULE,
    mesh: int | None = None,
    structure: MaxStructure | None = None,
) -> VerificationReport:
    """Prediction vs computation: sweep, trend, and the agreement flag.

    Finite predictions agree when |lambda(alpha_max) - value| is within
    max(0.1, 3*prediction error) and the discrepancy did not grow since
    mid-sweep; infinite predictions agree with the matching divergence
    verdict.
    """
    if structure is None:
        structure = local_maxima(spec.m)
    prediction = predict_limit(spec, structure=structure)
    points, _ = run_sweep(spec, alphas, mesh=mesh)
    trend = classify_trend(points, prediction)
    good = [p for p in points if p.ok]
    agree = False
    detail = ""
    if not good:
        detail = "no successful sweep points"
    elif prediction.verdict == "plus_infinity":
        agree = trend.kind == "diverging_up"
        detail = f"trend {trend.kind}"
    elif prediction.verdict == "minus_infinity":
        agree = trend.kind == "diverging_down"
        detail = f"trend {trend.kind}"
    else:
        tol = max(AGREE_ABS, 3.0 * prediction.error)
        disc_end = abs(good[-1].lam - prediction.value)
        disc_mid = abs(good[len(good) // 2].lam - prediction.value)
        shrunk = disc_end <= disc_mid * (1.0 + 1e-9) + 1e-9
        agree = disc_end <= tol and shrunk
        detail = (
            f"|lambda({good[-1].alpha:g}) - {prediction.value:.6g}| = {disc_end:.3g}"
            f" (tol {tol:.3g}), mid-sweep discrepancy {disc_mid:.3g}"
        )
    return VerificationReport(prediction, points, trend, agree, detail)
