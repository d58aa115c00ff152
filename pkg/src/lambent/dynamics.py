"""Orbit integration, diagonal equilibria and Figure-style orbit export."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from scipy.optimize import bisect

from .trig import VecField

DEFAULT_DT = 0.01
DEFAULT_SCAN_STEP = 0.05
FIGURE1_POINTS = ((6.0, 0.0), (6.5, 0.0), (7.0, 0.0), (7.5, 0.0), (11.0, 0.0))
VIEWBOX = (-30.0, 30.0)


class NonFiniteState(ArithmeticError):
    def __init__(self, t_last: float, point):
        super().__init__(f"non-finite state after t={t_last}")
        self.t_last = t_last
        self.point = point


@dataclass
class Orbit:
    times: list[float]
    points: list[tuple[float, ...]]
    x0: tuple[float, ...]
    dt: float
    method: str = "rk4"
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.times)

    @property
    def samples(self):
        return list(zip(self.times, self.points))

    def max_abs(self) -> float:
        return max(max(abs(c) for c in p) for p in self.points)

    def stays_within(self, lo: float, hi: float) -> bool:
        return all(lo <= c <= hi for p in self.points for c in p)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        names = ("x", "y", "z")[: len(self.x0)]
        w.writerow(("t",) + names)
        for t, p in zip(self.times, self.points):
            w.writerow([repr(t)] + [repr(c) for c in p])
        return buf.getvalue()


def _rhs(F: VecField | Callable) -> Callable:
    return F.compiled() if isinstance(F, VecField) else F


def rk4_steps(f: Callable, x0: Sequence[float], dt: float, nsteps: int, t0: float = 0.0):
    """Classical fixed-step RK4; returns the list of states (including ``x0``)."""
    x = tuple(float(c) for c in x0)
    out = [x]
    h2 = dt / 2
    h6 = dt / 6
    n = len(x)
    for k in range(nsteps):
        k1 = f(*x)
        k2 = f(*[x[i] + h2 * k1[i] for i in range(n)])
        k3 = f(*[x[i] + h2 * k2[i] for i in range(n)])
        k4 = f(*[x[i] + dt * k3[i] for i in range(n)])
        x = tuple(x[i] + h6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]) for i in range(n))
        if not all(math.isfinite(c) for c in x):
            raise NonFiniteState(t0 + k * dt, out[-1])
        out.append(x)
    return out


def integrate_orbit(F: VecField | Callable, x0: Sequence[float], t_span: tuple[float, float],
                    dt: float = DEFAULT_DT, method: str = "rk4", t_init: float | None = None) -> Orbit:
    """RK4 trajectory of dx/dt = F(x) over ``t_span``.

    ``x0`` is the state at ``t_init`` (default ``t_span[0]``); when ``t_init``
    is interior the orbit is traced in both directions.
    """
    if method != "rk4":
        raise ValueError("only the classical rk4 method is available")
    t0, t1 = t_span
    if not dt > 0 or not t1 > t0:
        raise ValueError("need dt > 0 and t1 > t0")
    if t_init is None:
        t_init = t0
    if not t0 <= t_init <= t1:
        raise ValueError("t_init must lie in t_span")
    f = _rhs(F)
    n_fwd = round((t1 - t_init) / dt)
    n_bwd = round((t_init - t0) / dt)
    fwd = rk4_steps(f, x0, dt, n_fwd, t_init)
    points = fwd
    times = [t_init + k * dt for k in range(n_fwd + 1)]
    if n_bwd:
        def g(*p):
            return tuple(-c for c in f(*p))
        bwd = rk4_steps(g, x0, dt, n_bwd, t_init)
        points = bwd[:0:-1] + fwd
        times = [t_init - k * dt for k in range(n_bwd, 0, -1)] + times
    return Orbit(times, points, tuple(float(c) for c in x0), dt, method)


# -- diagonal equilibria ----------------------------------------------------

@dataclass(frozen=True)
class DiagonalZero:
    x: float
    bracket: tuple[float, float]
    residual: float


def find_diagonal_zeros(F: VecField, x_range: tuple[float, float], scan_step: float = DEFAULT_SCAN_STEP,
                        xtol: float = 1e-14) -> list[DiagonalZero]:
    """Zeros of g(x) = F_x(x, x) on ``x_range``: sign-change scan, then bisection.

    A scan node where g is exactly 0.0 is reported as a zero with the
    neighbouring nodes as its bracket.  Tangential zeros without a sign
    change are not detected.
    """
    if F.nvars != 2:
        raise ValueError("diagonal zeros are defined for planar fields")
    lo, hi = x_range
    if not hi > lo:
        raise ValueError("empty range")
    gx = F[0].compiled()

    def g(s: float) -> float:
        return gx(s, s)

    n = int(math.floor((hi - lo) / scan_step + 1e-9))
    nodes = [lo + k * scan_step for k in range(n + 1)]
    if nodes[-1] < hi:
        nodes.append(hi)
    vals = [g(s) for s in nodes]
    zeros = []
    for k, (s, v) in enumerate(zip(nodes, vals)):
        if v == 0.0:
            left = nodes[k - 1] if k > 0 else s - scan_step
            right = nodes[k + 1] if k + 1 < len(nodes) else s + scan_step
            zeros.append(DiagonalZero(s, (left, right), 0.0))
        elif k + 1 < len(nodes) and vals[k + 1] != 0.0 and (v > 0) != (vals[k + 1] > 0):
            root = bisect(g, s, nodes[k + 1], xtol=xtol)
            zeros.append(DiagonalZero(root, (s, nodes[k + 1]), abs(g(root))))
    return zeros


@dataclass
class Confinement:
    max_deviation: float
    final: tuple[float, ...]
    limit_backward: tuple[float, ...]
    limit_forward: tuple[float, ...]
    nearest_backward: DiagonalZero | None
    nearest_forward: DiagonalZero | None


def diagonal_confinement(F: VecField, x0: Sequence[float], t_span: tuple[float, float],
                         dt: float = DEFAULT_DT, zeros: Sequence[DiagonalZero] | None = None) -> Confinement:
    """Trace a diagonal start in both directions and report max |x - y| and the end states."""
    if x0[0] != x0[1]:
        raise ValueError("start point must lie on the diagonal x = y")
    t0, t1 = t_span
    orbit = integrate_orbit(F, x0, (-(t1 - t0), t1 - t0), dt, t_init=0.0)
    dev = max(abs(p[0] - p[1]) for p in orbit.points)
    first, last = orbit.points[0], orbit.points[-1]

    def nearest(p):
        if not zeros:
            return None
        return min(zeros, key=lambda z: abs(z.x - p[0]))

    return Confinement(dev, last, first, last, nearest(first), nearest(last))


# -- export -----------------------------------------------------------------

def orbits_svg(orbits: Sequence[Orbit], size: int = 600, viewbox: tuple[float, float] = VIEWBOX,
               stride: int = 10) -> str:
    """Static SVG with one polyline per orbit in a fixed [lo, hi]^2 window (y axis up)."""
    lo, hi = viewbox
    colors = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
    width = hi - lo
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="{lo} {lo} {width} {width}">',
        f'<rect x="{lo}" y="{lo}" width="{width}" height="{width}" fill="white" stroke="black" stroke-width="0.05"/>',
        f'<line x1="{lo}" y1="0" x2="{hi}" y2="0" stroke="#ccc" stroke-width="0.05"/>',
        f'<line x1="0" y1="{lo}" x2="0" y2="{hi}" stroke="#ccc" stroke-width="0.05"/>',
        '<g transform="scale(1,-1)" fill="none" stroke-width="0.08">',
    ]
    for i, orb in enumerate(orbits):
        pts = orb.points[::stride]
        if pts[-1] is not orb.points[-1]:
            pts = pts + [orb.points[-1]]
        coords = " ".join(f"{p[0]:.4f},{p[1]:.4f}" for p in pts if lo <= p[0] <= hi and lo <= p[1] <= hi)
        label = ",".join(f"{c:g}" for c in orb.x0)
        lines.append(f'<polyline stroke="{colors[i % len(colors)]}" points="{coords}"><title>({label})</title></polyline>')
    lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def figure1_orbits(F: VecField, points: Sequence[Sequence[float]] = FIGURE1_POINTS,
                   t_max: float = 200.0, dt: float = DEFAULT_DT) -> list[Orbit]:
    return [integrate_orbit(F, p, (-t_max, t_max), dt, t_init=0.0) for p in points]
