"""Bundled problem catalog: the four figure-profile families.

Each family has a plateau variant (a) and a shrunk-to-boundary variant
(b), crossed with the six boundary sign-class combinations listed with
the 1D examples.  Profile constants are calibrated so that at the
default sweep schedule (max alpha 200):

* finite limits are met within 0.1 — plateau flanks rise steeply
  (though C^2, so quadratically) at the plateau edge, since the
  finite-alpha eigenvalue penetrates a soft wall by ~(alpha * wall
  slope)^(-1/3);
* minus-infinity cases cross zero near alpha = 50 — potentials carry
  boundary collars (about 200) that offset the linear decay
  -2 |l/h| m'(end) alpha, making lambda(200) <= -10 |lambda(50)| - 100
  satisfiable;
* plus-infinity cases grow like alpha^2 — class '+' is realized as a
  Dirichlet side, and the one interior-valley profile (fig4b) carries a
  deep potential well at the valley so its linear zero-point growth
  also crosses near alpha = 50.
"""
from __future__ import annotations

import numpy as np

from .model import PiecewiseProfile, Potential, ProblemSpec1D, RobinSide

FAMILIES = ("fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b")
CLASS_COMBOS = ("++", "+0", "00", "0-", "-0", "--")

#: Sign-class realizations: '+' as a Dirichlet side, '-' with l/h = -2.
CLASS_SIDES = {
    "+": (0.0, 1.0),
    "0": (1.0, 0.0),
    "-": (1.0, -2.0),
}


def _rise_turn(c: float, w: float):
    """m' pieces 0 -> 2cw^2 over width 2w: c y^2 then a quadratic turn.

    Starts with value, slope zero (C^2 against a plateau) and ends with
    slope zero; the edge curvature rate m''' = 2c sets the wall hardness.
    """
    rise = np.array([0.0, 0.0, c])
    turn = np.array([c * w * w, 2.0 * c * w, -c])
    return [rise, turn], 2.0 * c * w * w


def _hermite(p: float, q: float, w: float, slope_q: float = 0.0):
    """Cubic m' piece from (p, slope 0) to (q, slope_q) over width w."""
    # p*h00 + q*h01 + slope_q*w*h11 in s = t/w
    c0 = p
    c2 = (-3.0 * p + 3.0 * q - slope_q * w) / w**2
    c3 = (2.0 * p - 2.0 * q + slope_q * w) / w**3
    return np.array([c0, 0.0, c2, c3])


def _smoothstep(v0: float, v1: float, w: float):
    """Cubic potential ramp v0 -> v1 over width w (C^1 ends)."""
    d = v1 - v0
    return np.array([v0, 0.0, 3.0 * d / w**2, -2.0 * d / w**3])


def _potential(breaks, pieces) -> Potential:
    return Potential(breaks, pieces)


def _collared_potential(base: float, left=None, right=None, wells=()):
    """Piecewise potential: `base` with optional boundary collars and wells.

    left/right are (value, flat_width, ramp_width); wells are
    (center, value, flat_halfwidth, ramp_width).
    """
    breaks = [0.0]
    pieces = []
    cursor = 0.0

    def emit(upto: float, coeffs):
        nonlocal cursor
        if upto > cursor + 1e-12:
            breaks.append(upto)
            pieces.append(np.atleast_1d(np.asarray(coeffs, dtype=float)))
            cursor = upto

    if left is not None:
        val, flat, ramp = left
        emit(flat, [val])
        emit(flat + ramp, _smoothstep(val, base, ramp))
    for center, val, half, ramp in sorted(wells):
        emit(center - half - ramp, [base])
        emit(center - half, _smoothstep(base, val, ramp))
        emit(center + half, [val])
        emit(center + half + ramp, _smoothstep(val, base, ramp))
    if right is not None:
        val, flat, ramp = right
        emit(1.0 - flat - ramp, [base])
        emit(1.0 - flat, _smoothstep(base, val, ramp))
        emit(1.0, [val])
    else:
        emit(1.0, [base])
    return _potential(breaks, pieces)


def _profile(segments) -> PiecewiseProfile:
    """Build m from (width, m'-coeffs-or-None, sign) segments on [0, 1]."""
    breaks = [0.0]
    dpieces = []
    signs = []
    for width, coeffs, sign in segments:
        breaks.append(breaks[-1] + width)
        dpieces.append(np.zeros(1) if coeffs is None else np.asarray(coeffs, float))
        signs.append(sign)
    breaks[-1] = 1.0  # absorb accumulated rounding
    return PiecewiseProfile.from_derivative(breaks, dpieces, signs)


def _steep_flank_up(c: float, w: float, tail: float, x_end: float, x_start: float):
    """Segments for an increasing flank [x_start, x_end]: steep C^2 edge,
    ease down to slope `tail`, then constant-slope run to the end."""
    (rise, turn), peak = _rise_turn(c, w)
    ease_w = 0.4 * (x_end - x_start) - 2.0 * w
    const_w = x_end - x_start - 2.0 * w - ease_w
    return [
        (w, rise, "+"),
        (w, turn, "+"),
        (ease_w, _hermite(peak, tail, ease_w), "+"),
        (const_w, [tail], "+"),
    ]


# ---------------------------------------------------------------------------
# the eight profiles
# ---------------------------------------------------------------------------

def _m_fig1a() -> PiecewiseProfile:
    # flat on [0, 0.95], increasing on [0.95, 1] with m'(1) = 1
    segs = [(0.95, None, "zero")]
    segs += _steep_flank_up(c=1.0e6, w=0.004, tail=1.0, x_end=1.0, x_start=0.95)
    return _profile(segs)


def _m_fig1b() -> PiecewiseProfile:
    return PiecewiseProfile.linear(1.0)


def _m_fig2a() -> PiecewiseProfile:
    # flat [0, 0.25], up [0.25, 0.6], down [0.6, 1]; isolated max at 0.6
    c, w = 1.0e7, 0.0015
    (rise, turn), peak = _rise_turn(c, w)
    hump_w = 0.05
    down_w = 0.6 - 0.25 - 2.0 * w - hump_w
    curv = -7.84  # m''(0.6): sets the concentration well width
    segs = [
        (0.25, None, "zero"),
        (w, rise, "+"),
        (w, turn, "+"),
        (hump_w, _hermite(peak, 4.0, hump_w), "+"),
        (down_w, _hermite(4.0, 0.0, down_w, slope_q=curv), "+"),
        (0.4, [0.0, curv, 9.8], "-"),  # m' = -7.84 t + 9.8 t^2 < 0 on (0, 0.4)
    ]
    return _profile(segs)


def _m_fig2b() -> PiecewiseProfile:
    # up [0, 0.6] with m'(0) > 0, down [0.6, 1]; same max curvature at 0.6
    return _profile(
        [
            (0.6, [0.672, 5.6, -11.2], "+"),  # 11.2 (0.6 - x)(x + 0.1)
            (0.4, [0.0, -7.84, 9.8], "-"),
        ]
    )


def _m_fig3a() -> PiecewiseProfile:
    # flat [0, 0.95], decreasing to 1
    c, w = -6.0e5, 0.005
    (rise, turn), peak = _rise_turn(c, w)
    rest = 1.0 - 0.95 - 2.0 * w
    return _profile(
        [
            (0.95, None, "zero"),
            (w, rise, "-"),
            (w, turn, "-"),
            (rest, _hermite(peak, -1.0, rest), "-"),
        ]
    )


def _m_fig3b() -> PiecewiseProfile:
    return PiecewiseProfile.linear(-1.0)


def _m_fig4a() -> PiecewiseProfile:
    # flat [0, 0.9], down [0.9, 0.96], up [0.96, 1] with m'(1) = 1.
    # The up-flank reaches slope 1 by x = 0.968 so the boundary mode sees
    # m' = 1 on a region wider than the potential collar's flat part.
    c, w = -8.0e4, 0.0125
    (rise, turn), trough = _rise_turn(c, w)
    back_w = 0.96 - 0.9 - 2.0 * w
    # up-flank: overshoot to slope 8 and ease back to 1, so the m-gain
    # across the valley (~0.11) kills the tunneling transient of the
    # right-boundary mode (prefactor ~ alpha^2) well before alpha = 50
    cu, wu = 250000.0, 0.004
    (rise_u, turn_u), peak_u = _rise_turn(cu, wu)  # peak_u = 8.0
    ease_w = 0.01
    const_w = 1.0 - 0.96 - 2.0 * wu - ease_w
    return _profile(
        [
            (0.9, None, "zero"),
            (w, rise, "-"),
            (w, turn, "-"),
            (back_w, _hermite(trough, 0.0, back_w), "-"),
            (wu, rise_u, "+"),
            (wu, turn_u, "+"),
            (ease_w, _hermite(peak_u, 1.0, ease_w), "+"),
            (const_w, [1.0], "+"),
        ]
    )


def _m_fig4b() -> PiecewiseProfile:
    # down [0, 0.375] from slope -1.5, up [0.375, 1] to slope 1 at x = 1
    return _profile(
        [
            (0.375, [-1.5, 0.0, 1.5 / 0.375**2], "-"),
            (0.625, [0.0, 8.0, -10.24], "+"),  # 8t(1 - 1.28t); m'(1) = 1
        ]
    )


_RIGHT_COLLAR = (200.0, 0.015, 0.035)
_LEFT_COLLAR = (200.0, 0.02, 0.04)


def _v_for(family: str) -> Potential:
    if family in ("fig1a", "fig1b"):
        return _collared_potential(0.0, right=_RIGHT_COLLAR)
    if family in ("fig2a", "fig2b"):
        # 5 (x - 0.6)^2: the interior maximum is the strict minimum of V
        return _potential([0.0, 1.0], [np.array([1.8, -6.0, 5.0])])
    if family == "fig3a":
        return _potential([0.0, 1.0], [np.array([0.0])])
    if family == "fig3b":
        return _collared_potential(0.0, left=_LEFT_COLLAR)
    if family == "fig4a":
        # slightly lower collar: the boundary mode must undercut the
        # plateau cavity before alpha = 50 so the sweep tail is clean
        return _collared_potential(0.0, right=(190.0, 0.015, 0.035))
    if family == "fig4b":
        return _collared_potential(
            0.0,
            left=(300.0, 0.02, 0.04),
            right=(210.0, 0.015, 0.035),
            wells=((0.375, -800.0, 0.04, 0.04),),
        )
    raise KeyError(family)


_M_BUILDERS = {
    "fig1a": _m_fig1a,
    "fig1b": _m_fig1b,
    "fig2a": _m_fig2a,
    "fig2b": _m_fig2b,
    "fig3a": _m_fig3a,
    "fig3b": _m_fig3b,
    "fig4a": _m_fig4a,
    "fig4b": _m_fig4b,
}


def catalog_profile(family: str) -> tuple[PiecewiseProfile, Potential]:
    """(m, V) of one figure family."""
    if family not in _M_BUILDERS:
        raise KeyError(f"unknown catalog family {family!r}; choose from {FAMILIES}")
    return _M_BUILDERS[family](), _v_for(family)


def catalog_spec(family: str, combo: str) -> ProblemSpec1D:
    """Problem of one family under one sign-class combination like '+0'."""
    if combo not in CLASS_COMBOS:
        raise KeyError(f"unknown class combo {combo!r}; choose from {CLASS_COMBOS}")
    m, v = catalog_profile(family)
    hl, ll = CLASS_SIDES[combo[0]]
    hr, lr = CLASS_SIDES[combo[1]]
    return ProblemSpec1D(m, v, RobinSide(hl, ll, "left"), RobinSide(hr, lr, "right"))


def catalog_cases():
    """All (family, combo) pairs of the acceptance catalog."""
    return [(fam, combo) for fam in FAMILIES for combo in CLASS_COMBOS]
