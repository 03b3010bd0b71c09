"""Problem files: TOML input, deterministic serialization, 2D fields.

1D layout::

    diffusion = 1.0
    [m]
    breakpoints = [0.0, 0.5, 1.0]
    pieces = [[0.0, 1.0], [0.5, 1.0]]
    signs = ["+", "+"]
    [v]
    breakpoints = [0.0, 1.0]
    pieces = [[5.0]]
    [bc.left]
    h = 1.0
    l = 0.0
    [bc.right]
    h = 0.0
    l = 1.0

Piece coefficients are ascending powers of (x - left breakpoint of the
piece).  2D files use `domain = "torus" | "rectangle"` with analytic
field expressions from a small catalog, or `file = "..."` pointing to a
binary field (16-byte header: 8-byte magic "ADVEIG2D", int32 nx, int32
ny, then float64 values in row-major x-then-y order).
"""
from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover - environment dependent
    import tomli as tomllib

from .eig2d import Field2D, QuadraticField, Spec2D, TabulatedField, TrigPolyField
from .model import PiecewiseProfile, Potential, ProblemSpec1D, RobinSide

FIELD_MAGIC = b"ADVEIG2D"


class ProblemFileError(ValueError):
    """Malformed problem file, with a field-level diagnostic."""


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _require(table, key, where):
    if key not in table:
        raise ProblemFileError(f"missing key '{key}' in [{where}]")
    return table[key]


def parse_problem_1d(text: str) -> ProblemSpec1D:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ProblemFileError(f"TOML parse error: {err}") from err
    mt = _require(data, "m", "")
    m = PiecewiseProfile(
        _require(mt, "breakpoints", "m"),
        _require(mt, "pieces", "m"),
        _require(mt, "signs", "m"),
        constant=bool(mt.get("constant", False)),
    )
    vt = _require(data, "v", "")
    v = Potential(_require(vt, "breakpoints", "v"), _require(vt, "pieces", "v"))
    bc = _require(data, "bc", "")
    left = RobinSide(
        float(_require(bc.get("left", {}), "h", "bc.left")),
        float(_require(bc.get("left", {}), "l", "bc.left")),
        "left",
    )
    right = RobinSide(
        float(_require(bc.get("right", {}), "h", "bc.right")),
        float(_require(bc.get("right", {}), "l", "bc.right")),
        "right",
    )
    return ProblemSpec1D(m, v, left, right, float(data.get("diffusion", 1.0)))


def load_problem_1d(path) -> ProblemSpec1D:
    return parse_problem_1d(Path(path).read_text())


def _poly_table(name: str, poly) -> list[str]:
    lines = [f"[{name}]"]
    lines.append(
        "breakpoints = [" + ", ".join(_fmt(b) for b in poly.breakpoints) + "]"
    )
    rows = ", ".join(
        "[" + ", ".join(_fmt(c) for c in piece) + "]" for piece in poly.pieces
    )
    lines.append(f"pieces = [{rows}]")
    return lines


def serialize_problem_1d(spec: ProblemSpec1D) -> str:
    lines = [f"diffusion = {_fmt(spec.diffusion)}", ""]
    lines += _poly_table("m", spec.m)
    lines.append("signs = [" + ", ".join(f'"{s}"' for s in spec.m.declared_sign) + "]")
    if spec.m.constant:
        lines.append("constant = true")
    lines.append("")
    lines += _poly_table("v", spec.v)
    for side in (spec.left, spec.right):
        lines.append("")
        lines.append(f"[bc.{side.which_end}]")
        lines.append(f"h = {_fmt(side.h)}")
        lines.append(f"l = {_fmt(side.l)}")
    return "\n".join(lines) + "\n"


def save_problem_1d(spec: ProblemSpec1D, path) -> None:
    Path(path).write_text(serialize_problem_1d(spec))


# ---------------------------------------------------------------------------
# 2D
# ---------------------------------------------------------------------------

def write_field_binary(path, values: np.ndarray) -> None:
    values = np.ascontiguousarray(values, dtype=np.float64)
    with open(path, "wb") as fh:
        fh.write(FIELD_MAGIC)
        fh.write(struct.pack("<ii", values.shape[0], values.shape[1]))
        fh.write(values.tobytes())


def read_field_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if raw[:8] != FIELD_MAGIC:
        raise ProblemFileError(f"{path}: bad field magic")
    nx, ny = struct.unpack("<ii", raw[8:16])
    expect = 16 + 8 * nx * ny
    if len(raw) != expect:
        raise ProblemFileError(f"{path}: size {len(raw)} != expected {expect}")
    return np.frombuffer(raw[16:], dtype=np.float64).reshape(nx, ny).copy()


def _parse_field(table, base_dir: Path, where: str) -> Field2D:
    if "file" in table:
        return TabulatedField(read_field_binary(base_dir / table["file"]))
    kind = _require(table, "kind", where)
    if kind == "trig":
        terms = []
        for t in _require(table, "terms", where):
            terms.append(
                (float(t["c"]), t.get("fx", "one"), float(t.get("kx", 0.0)),
                 t.get("fy", "one"), float(t.get("ky", 0.0)))
            )
        return TrigPolyField(terms)
    if kind == "quadratic":
        return QuadraticField(
            float(table.get("c0", 0.0)),
            float(table.get("cx", 0.0)),
            float(table.get("x0", 0.0)),
            float(table.get("cy", 0.0)),
            float(table.get("y0", 0.0)),
        )
    raise ProblemFileError(f"[{where}]: unknown field kind {kind!r}")


def parse_problem_2d(text: str, base_dir=".") -> Spec2D:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as err:
        raise ProblemFileError(f"TOML parse error: {err}") from err
    domain = _require(data, "domain", "")
    base = Path(base_dir)
    spec = Spec2D(
        domain,
        _parse_field(_require(data, "m", ""), base, "m"),
        _parse_field(_require(data, "v", ""), base, "v"),
        lx=float(data.get("lx", 1.0)),
        ly=float(data.get("ly", 1.0)),
        beta=tuple(float(b) for b in data.get("beta", (0.0, 0.0, 0.0, 0.0))),
        declared_maxima=[tuple(map(float, p)) for p in data.get("maxima", [])],
    )
    return spec


def load_problem_2d(path) -> Spec2D:
    p = Path(path)
    return parse_problem_2d(p.read_text(), base_dir=p.parent)


def is_problem_2d(text: str) -> bool:
    try:
        return "domain" in tomllib.loads(text)
    except tomllib.TOMLDecodeError:
        return False
