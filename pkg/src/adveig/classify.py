"""Local-maximum structure of the advection profile.

The sign runs of m' partition [0, 1]; plateaus (runs where m' = 0) and
sign junctions generate the nine buckets of "segments/points of local
maximum".  Flank letters follow the source convention: I means m
increases on that side of the segment, D means it decreases.  Note that
buckets M2, M4, M5 need not be maxima in the everyday sense (shelves in
monotone runs and valley floors qualify); the limit formulas consume
them all the same.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .model import PiecewiseProfile

BUCKET_NAMES = ("m1", "m2", "m3", "m4", "m5", "m6", "m7", "m8", "m9")


class ConstantProfileError(ValueError):
    """m' vanishes identically: the sign-structure machinery needs m nonconstant."""


@dataclass(frozen=True)
class Flank:
    """Monotonicity on one side of a segment: 'I', 'D', or 'End' at 0/1."""

    direction: str

    def __post_init__(self):
        if self.direction not in ("I", "D", "End"):
            raise ValueError("flank direction must be 'I', 'D' or 'End'")


FLANK_I = Flank("I")
FLANK_D = Flank("D")
FLANK_END = Flank("End")


@dataclass(frozen=True)
class MaxItem:
    """Isolated point (a == b) or plateau segment [a, b] with its flanks."""

    a: float
    b: float
    left: Flank
    right: Flank
    location: str = "interior"  # for points: interior | left_end | right_end

    @property
    def is_point(self) -> bool:
        return self.a == self.b

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.a + self.b)

    def covers(self, x: float, delta: float = 0.0) -> bool:
        return self.a - delta <= x <= self.b + delta


@dataclass
class MaxStructure:
    """Buckets M1..M9 of the local-maximum decomposition.

    m1: isolated points; m2..m5 interior plateaus by flank pair
    (I,I), (I,D), (D,I), (D,D); m6/m7 plateaus [0, a] with right flank
    I/D; m8/m9 plateaus [a, 1] with left flank I/D.
    """

    m1: list[MaxItem] = field(default_factory=list)
    m2: list[MaxItem] = field(default_factory=list)
    m3: list[MaxItem] = field(default_factory=list)
    m4: list[MaxItem] = field(default_factory=list)
    m5: list[MaxItem] = field(default_factory=list)
    m6: list[MaxItem] = field(default_factory=list)
    m7: list[MaxItem] = field(default_factory=list)
    m8: list[MaxItem] = field(default_factory=list)
    m9: list[MaxItem] = field(default_factory=list)

    def bucket(self, name: str) -> list[MaxItem]:
        return getattr(self, name)

    def items(self):
        for name in BUCKET_NAMES:
            yield from self.bucket(name)

    @property
    def zero_is_isolated_max(self) -> bool:
        return any(p.location == "left_end" for p in self.m1)

    @property
    def one_is_isolated_max(self) -> bool:
        return any(p.location == "right_end" for p in self.m1)

    def interior_m1(self) -> list[MaxItem]:
        return [p for p in self.m1 if p.location == "interior"]

    @property
    def only_isolated_boundary(self) -> bool:
        """M = M1 subset of {0, 1}: no segments, no interior points."""
        segments = any(self.bucket(n) for n in BUCKET_NAMES[1:])
        return not segments and not self.interior_m1()

    def counts(self) -> dict[str, int]:
        return {name: len(self.bucket(name)) for name in BUCKET_NAMES}


def critical_structure(m: PiecewiseProfile):
    """Maximal merged runs of the sign of m', covering [0, 1].

    Returns [((lo, hi), sign)] with sign in '+', '-', 'zero'; adjacent
    runs always differ.  Raises ConstantProfileError for constant m.
    """
    if m.constant or all(s == "zero" for s in m.declared_sign):
        raise ConstantProfileError("profile constant, sign structure undefined")
    runs: list[tuple[float, float, str]] = []
    for k, sign in enumerate(m.declared_sign):
        lo, hi = float(m.breakpoints[k]), float(m.breakpoints[k + 1])
        if runs and runs[-1][2] == sign:
            runs[-1] = (runs[-1][0], hi, sign)
        else:
            runs.append((lo, hi, sign))
    return [((lo, hi), sign) for lo, hi, sign in runs]


def local_maxima(m: PiecewiseProfile) -> MaxStructure:
    """Translate the sign runs into the M1..M9 buckets.

    Junction points between a '+' and a '-' run are interior isolated
    maxima; '-'/'+' junctions are local minima and are discarded.  The
    endpoint 0 joins M1 when the first run decreases, 1 when the last
    run increases.
    """
    runs = critical_structure(m)
    out = MaxStructure()
    first_sign = runs[0][1]
    last_sign = runs[-1][1]
    if first_sign == "-":
        out.m1.append(MaxItem(0.0, 0.0, FLANK_END, FLANK_D, "left_end"))
    if last_sign == "+":
        out.m1.append(MaxItem(1.0, 1.0, FLANK_I, FLANK_END, "right_end"))
    for k, ((lo, hi), sign) in enumerate(runs):
        if sign == "zero":
            left = runs[k - 1][1] if k > 0 else None
            right = runs[k + 1][1] if k + 1 < len(runs) else None
            if left is None:  # leading plateau [0, a]
                item = MaxItem(lo, hi, FLANK_END, FLANK_I if right == "+" else FLANK_D)
                (out.m6 if right == "+" else out.m7).append(item)
            elif right is None:  # trailing plateau [a, 1]
                item = MaxItem(lo, hi, FLANK_I if left == "+" else FLANK_D, FLANK_END)
                (out.m8 if left == "+" else out.m9).append(item)
            else:
                flanks = (left, right)
                item = MaxItem(
                    lo,
                    hi,
                    FLANK_I if left == "+" else FLANK_D,
                    FLANK_I if right == "+" else FLANK_D,
                )
                bucket = {
                    ("+", "+"): out.m2,
                    ("+", "-"): out.m3,
                    ("-", "+"): out.m4,
                    ("-", "-"): out.m5,
                }[flanks]
                bucket.append(item)
        elif sign == "+" and k + 1 < len(runs) and runs[k + 1][1] == "-":
            x = hi  # interior +/- junction: isolated maximum
            out.m1.append(MaxItem(x, x, FLANK_I, FLANK_D, "interior"))
        # '-'/'+' junctions are local minima: discarded
    return out
