"""Exact large-advection limit of the principal eigenvalue.

Assembles lim_{alpha->inf} lambda_1(alpha) from the local-maximum
structure and the boundary sign classes.  The verdict logic, with
a_1/a_2 the side classes:

* MinusInfinity  iff (a_1 = '-' and 0 is an isolated max) or
  (a_2 = '-' and 1 is an isolated max): a strict boundary maximum with
  negative Robin data swallows the eigenvalue.
* Otherwise every structural feature contributes a candidate value:
  interior plateaus their sub-interval eigenvalues (M2 -> ND, M3 -> NN,
  M4 -> DD, M5 -> DN, collectively the minimum called frak L), boundary
  plateaus the Robin-flavored ones (M6 -> RD, M7 -> RN, M8 -> NR,
  M9 -> DR, R being the problem's own condition on that side), interior
  isolated maxima V(x), and boundary isolated maxima V(0)/V(1) exactly
  when the matching side is Neumann.  Empty candidate set means
  PlusInfinity; else the limit is the minimum.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .classify import ConstantProfileError, MaxItem, MaxStructure, local_maxima
from .eig1d import BCKind, sub_eigenvalue_refined
from .model import ProblemSpec1D, RobinSide, side_class

SUB_SOLVE_NODES = 4097


@dataclass(frozen=True)
class Contribution:
    """One candidate limit value and where it came from."""

    source: str
    value: float
    error: float = 0.0
    region: tuple[float, float] = (0.0, 0.0)


@dataclass(frozen=True)
class FrakL:
    """Minimum over the interior plateau buckets; +inf when they are empty."""

    value: float
    error: float = 0.0

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.value)


@dataclass
class LimitPrediction:
    verdict: str  # "finite" | "plus_infinity" | "minus_infinity"
    value: float | None = None
    contributions: list[Contribution] = field(default_factory=list)
    error: float = 0.0
    reason: str = ""

    @property
    def is_finite(self) -> bool:
        return self.verdict == "finite"

    def argmin_contributions(self, slack: float = 1e-9) -> list[Contribution]:
        """Contributions attaining the minimum (within numerical slack)."""
        if not self.is_finite:
            return []
        tol = slack * (1.0 + abs(self.value)) + 2.0 * self.error
        return [c for c in self.contributions if c.value <= self.value + tol]

    def to_dict(self) -> dict:
        out = {"verdict": {"finite": "Finite",
                           "plus_infinity": "PlusInfinity",
                           "minus_infinity": "MinusInfinity"}[self.verdict]}
        if self.is_finite:
            out["value"] = self.value
            out["error"] = self.error
            out["contributions"] = [
                {"source": c.source, "value": c.value, "error": c.error}
                for c in self.contributions
            ]
        else:
            out["reason"] = self.reason
        return out


_PLATEAU_ENDS = {
    # bucket -> (left end kind, right end kind) of the sub-interval problem
    "m2": (BCKind.NEUMANN, BCKind.DIRICHLET),
    "m3": (BCKind.NEUMANN, BCKind.NEUMANN),
    "m4": (BCKind.DIRICHLET, BCKind.DIRICHLET),
    "m5": (BCKind.DIRICHLET, BCKind.NEUMANN),
}

_PLATEAU_TAG = {"m2": "ND", "m3": "NN", "m4": "DD", "m5": "DN"}


def _segment_contribution(bucket: str, item: MaxItem, spec: ProblemSpec1D, n: int):
    v = spec.v
    if bucket in _PLATEAU_ENDS:
        left, right = _PLATEAU_ENDS[bucket]
        lam, err = sub_eigenvalue_refined(v, item.a, item.b, left, right, n=n)
        tag = _PLATEAU_TAG[bucket]
        src = f"lambda1^{tag}({item.a:g},{item.b:g}), {bucket.upper()} segment"
    elif bucket == "m6":
        lam, err = sub_eigenvalue_refined(
            v, 0.0, item.b, BCKind.from_side(spec.left), BCKind.DIRICHLET, n=n
        )
        src = f"lambda1^RD(0,{item.b:g}), M6"
    elif bucket == "m7":
        lam, err = sub_eigenvalue_refined(
            v, 0.0, item.b, BCKind.from_side(spec.left), BCKind.NEUMANN, n=n
        )
        src = f"lambda1^RN(0,{item.b:g}), M7"
    elif bucket == "m8":
        lam, err = sub_eigenvalue_refined(
            v, item.a, 1.0, BCKind.NEUMANN, BCKind.from_side(spec.right), n=n
        )
        src = f"lambda1^NR({item.a:g},1), M8"
    elif bucket == "m9":
        lam, err = sub_eigenvalue_refined(
            v, item.a, 1.0, BCKind.DIRICHLET, BCKind.from_side(spec.right), n=n
        )
        src = f"lambda1^DR({item.a:g},1), M9"
    else:
        raise KeyError(bucket)
    return Contribution(src, lam, err, (item.a, item.b))


def frak_l(structure: MaxStructure, v, n: int = SUB_SOLVE_NODES) -> FrakL:
    """min over M2..M5 of the plateau sub-eigenvalues; +inf when empty."""
    best, best_err = math.inf, 0.0
    for bucket, (left, right) in _PLATEAU_ENDS.items():
        for item in structure.bucket(bucket):
            lam, err = sub_eigenvalue_refined(v, item.a, item.b, left, right, n=n)
            if lam < best:
                best, best_err = lam, err
    return FrakL(best, best_err)


def predict_limit(
    spec: ProblemSpec1D, n: int = SUB_SOLVE_NODES, structure: MaxStructure | None = None
) -> LimitPrediction:
    """Exact alpha -> infinity limit of lambda_1 for the given problem."""
    if structure is None:
        structure = local_maxima(spec.m)  # raises ConstantProfileError if constant
    a1, a2 = side_class(spec.left), side_class(spec.right)

    if a1 == "-" and structure.zero_is_isolated_max:
        return LimitPrediction(
            "minus_infinity",
            reason="left class '-' and 0 is an isolated local maximum",
        )
    if a2 == "-" and structure.one_is_isolated_max:
        return LimitPrediction(
            "minus_infinity",
            reason="right class '-' and 1 is an isolated local maximum",
        )

    contributions: list[Contribution] = []
    for bucket in ("m2", "m3", "m4", "m5", "m6", "m7", "m8", "m9"):
        for item in structure.bucket(bucket):
            contributions.append(_segment_contribution(bucket, item, spec, n))
    for point in structure.interior_m1():
        contributions.append(
            Contribution(
                f"V({point.a:g}) at interior M1 point",
                float(spec.v(point.a)),
                0.0,
                (point.a, point.a),
            )
        )
    if structure.zero_is_isolated_max and spec.left.l == 0.0:
        contributions.append(
            Contribution("V(0), 0 in M1 and l1=0", float(spec.v(0.0)), 0.0, (0.0, 0.0))
        )
    if structure.one_is_isolated_max and spec.right.l == 0.0:
        contributions.append(
            Contribution("V(1), 1 in M1 and l2=0", float(spec.v(1.0)), 0.0, (1.0, 1.0))
        )

    if not contributions:
        return LimitPrediction(
            "plus_infinity",
            reason=f"no admissible maxima under classes ({a1},{a2})",
        )
    best = min(contributions, key=lambda c: c.value)
    return LimitPrediction(
        "finite",
        value=best.value,
        contributions=contributions,
        error=max(c.error for c in contributions),
    )
