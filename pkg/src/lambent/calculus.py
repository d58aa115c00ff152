"""Exact differential operators and the lambent-field verification suite."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .groups import FiniteGroup, conjugate_field
from .trig import SymFun, VecField


def grad(f: SymFun) -> VecField:
    return VecField(f.partial(i) for i in range(f.nvars))


def div(F: VecField) -> SymFun:
    out = SymFun.zero(F.nvars, F.d)
    for i, c in enumerate(F.components):
        out = out + c.partial(i)
    return out


def curl(F: VecField) -> VecField:
    if F.nvars != 3:
        raise ValueError("curl is only defined for fields on R^3")
    P, Q, R = F.components
    return VecField([
        R.partial(1) - Q.partial(2),
        P.partial(2) - R.partial(0),
        Q.partial(0) - P.partial(1),
    ])


def scalar_laplacian(f: SymFun) -> SymFun:
    out = SymFun.zero(f.nvars, f.d)
    for i in range(f.nvars):
        out = out + f.partial(i).partial(i)
    return out


def laplacian(F: VecField) -> VecField:
    return F.map(scalar_laplacian)


@dataclass
class Check:
    name: str
    passed: bool
    residual: object = None
    violators: list = field(default_factory=list)


@dataclass
class VerificationReport:
    mode: str
    group: str
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        from .serialize import matrix_to_json, pretty

        def render(res):
            if res is None:
                return None
            if isinstance(res, VecField):
                return [pretty(c) for c in res.components]
            return pretty(res)

        return {
            "mode": self.mode,
            "group": self.group,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "residual": None if c.passed else render(c.residual),
                    "violators": [matrix_to_json(g.matrix) for g in c.violators],
                }
                for c in self.checks
            ],
        }

    def table(self) -> str:
        lines = [f"mode={self.mode} group={self.group}"]
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            extra = ""
            if not c.passed and c.violators:
                extra = f"  ({len(c.violators)} violating elements)"
            elif not c.passed and c.residual is not None:
                extra = f"  residual: {_short(c.residual)}"
            lines.append(f"  {status}  {c.name}{extra}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _short(obj, limit: int = 160) -> str:
    text = str(obj) if not isinstance(obj, VecField) else " | ".join(str(c) for c in obj.components)
    return text if len(text) <= limit else text[: limit - 3] + "..."


def check_lambent(F: VecField, G: FiniteGroup | None, mode: str = "beltrami_3d") -> VerificationReport:
    """Run the exact lambent checks; failing checks carry their exact residual.

    A nonzero curl eigenfield cannot have only even compound degrees (curl
    flips parity), so in ``beltrami_3d`` mode the parity check asks instead
    that the odd part be the curl of the even part, i.e. ``F = E + curl E``
    with ``E`` even.
    """
    report = VerificationReport(mode, G.name if G is not None else "-")
    if mode == "beltrami_3d" and F.nvars != 3:
        raise ValueError("beltrami_3d mode needs a field on R^3")
    if mode not in ("beltrami_3d", "helmholtz_nd"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "beltrami_3d":
        res = curl(F) - F
        report.checks.append(Check("curl F = F", res.is_zero(), res))
    res = laplacian(F) + F
    report.checks.append(Check("laplacian F = -F", res.is_zero(), res))
    dres = div(F)
    report.checks.append(Check("div F = 0", dres.is_zero(), dres))
    if mode == "beltrami_3d":
        even = F.even_part()
        pres = (F - even) - curl(even)
        report.checks.append(Check("odd part = curl(even part)", pres.is_zero(), pres))
    else:
        pres = F.parity_negate() - F
        report.checks.append(Check("even compound degrees", pres.is_zero(), pres))
    if G is not None:
        if G.dimension != F.nvars:
            raise ValueError(f"group {G.name} acts on R^{G.dimension}, field lives on R^{F.nvars}")
        bad = [g for g in G if conjugate_field(F, g) != F]
        report.checks.append(Check(f"invariance under {G.name} ({len(G)} elements)", not bad, None, bad))
    return report


# -- finite-difference cross checks -----------------------------------------

def central_partial(fn: Callable, point: Sequence[float], axis: int, h: float = 1e-5) -> float:
    p = list(point)
    p[axis] += h
    up = fn(*p)
    p[axis] -= 2 * h
    down = fn(*p)
    return (up - down) / (2 * h)


def _mp_compile(f: SymFun) -> Callable:
    import mpmath

    args = ", ".join(f"x{i}" for i in range(f.nvars))
    return eval(f"lambda {args}: {f.source()}", {"sin": mpmath.sin, "cos": mpmath.cos})


def numeric_operator_errors(F: VecField, points: Sequence[Sequence[float]], h: float = 1e-5,
                            dps: int | None = None) -> dict[str, float]:
    """Max abs discrepancy between the symbolic operators and central differences.

    div, curl and grad are differenced from the field values.  The laplacian
    is checked by differencing the symbolic gradient once more: a plain second
    difference at h=1e-5 has round-off of order eps*|F|/h^2, far above 1e-6.

    With ``dps`` set, everything is evaluated in mpmath at that many digits,
    which removes round-off and leaves only the O(h^2) truncation error.
    """
    if dps is None:
        return _operator_errors(F, points, h, SymFun.compiled, float)
    import mpmath

    with mpmath.workdps(dps):
        return _operator_errors(F, points, mpmath.mpf(h), _mp_compile, mpmath.mpf)


def _operator_errors(F, points, h, compile_, conv) -> dict[str, float]:
    n = F.nvars
    comps = [compile_(c) for c in F.components]
    grad_fns = [[compile_(c.partial(j)) for j in range(n)] for c in F.components]
    sym_div = compile_(div(F))
    sym_lap = [compile_(c) for c in laplacian(F).components]
    sym_curl = [compile_(c) for c in curl(F).components] if n == 3 else None
    err = {"grad": 0.0, "div": 0.0, "laplacian": 0.0}
    if sym_curl:
        err["curl"] = 0.0
    for p in points:
        p = [conv(c) for c in p]
        fd = [[central_partial(comps[i], p, j, h) for j in range(n)] for i in range(n)]
        err["grad"] = max(err["grad"], max(abs(fd[i][j] - grad_fns[i][j](*p)) for i in range(n) for j in range(n)))
        err["div"] = max(err["div"], abs(sum(fd[i][i] for i in range(n)) - sym_div(*p)))
        if sym_curl:
            fd_curl = (fd[2][1] - fd[1][2], fd[0][2] - fd[2][0], fd[1][0] - fd[0][1])
            err["curl"] = max(err["curl"], max(abs(a - b(*p)) for a, b in zip(fd_curl, sym_curl)))
        for i in range(n):
            lap = sum(central_partial(grad_fns[i][j], p, j, h) for j in range(n))
            err["laplacian"] = max(err["laplacian"], abs(lap - sym_lap[i](*p)))
    return {k: float(v) for k, v in err.items()}


def random_points(n: int, count: int, lo: float = -3.0, hi: float = 3.0, seed: int = 0) -> list[tuple[float, ...]]:
    rng = random.Random(seed)
    return [tuple(rng.uniform(lo, hi) for _ in range(n)) for _ in range(count)]
