"""Constructors for the symmetric Helmholtz / Beltrami fields.

3-D fields default to Q(sqrt 5) so they can be compared and averaged with
icosahedral data; 2-D dihedral fields live in Q(sqrt 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

from .calculus import curl, div, laplacian
from .exact import ExactVector, QuadExt, solve_linear
from .groups import conjugate_field, dihedral_alpha, eta
from .trig import COS, SIN, SymFun, Term, TrigKind, VecField

VARIANTS = ("4l+1", "4l+3")
MAX_ELL = 8


class BeltramiPreconditionError(ValueError):
    """Input to :func:`beltramize` is not a solenoidal Helmholtz solution."""

    def __init__(self, message: str, residual: VecField | SymFun):
        super().__init__(message)
        self.residual = residual


class FrameError(ValueError):
    pass


# -- harmonic polynomials ---------------------------------------------------

def harmonic(n: int, kind: str, d: int = 5) -> SymFun:
    """P_n = Re (x + iy)^n or Q_n = Im (x + iy)^n as a polynomial in (x, y).

    P_0 = 1, Q_0 = 0, P_{-1} = Q_{-1} = 0.
    """
    if kind not in ("P", "Q"):
        raise ValueError("kind must be 'P' or 'Q'")
    if n < -1:
        raise ValueError("n must be >= -1")
    terms = []
    for k in range(max(n, -1) + 1):
        # (i y)^k contributes i^k
        if kind == "P" and k % 2 == 0:
            sign = (-1) ** (k // 2)
        elif kind == "Q" and k % 2 == 1:
            sign = (-1) ** ((k - 1) // 2)
        else:
            continue
        terms.append(Term(sign * comb(n, k), (n - k, k), None))
    return SymFun(2, d, terms)


def harmonic_of(n: int, kind: str, u: Sequence, v: Sequence, d: int = 5) -> SymFun:
    """Poly_n(u.x, v.x) for linear forms ``u, v`` on R^3 (or R^2)."""
    return harmonic(n, kind, d).compose([tuple(u), tuple(v)])


_E = ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def _h3(n: int, kind: str, i: int, j: int, d: int) -> SymFun:
    """Poly_n(x_i, x_j) on R^3."""
    return harmonic_of(n, kind, _E[i], _E[j], d)


def _trig3(kind: TrigKind, i: int, d: int) -> SymFun:
    return SymFun.trig(kind, _E[i], d)


X, Y, Z = 0, 1, 2


# -- Helmholtz building blocks ----------------------------------------------

def helmholtz_scalar(a: Sequence, b: Sequence, c: Sequence, n: int, poly_kind: str,
                     trig_kind: TrigKind, d_scale=1, d: int = 5, check: bool = True) -> SymFun:
    """``d_scale * Poly_n(a.x, b.x) * trig(c.x)`` for an orthonormal frame (a, b, c)."""
    a, b, c = (ExactVector(v, d) for v in (a, b, c))
    if check:
        one, zero = QuadExt(1, 0, d), QuadExt(0, 0, d)
        for u in (a, b, c):
            if u.norm2() != one:
                raise FrameError("frame vectors must have unit length")
        for u, v in ((a, b), (a, c), (b, c)):
            if u.dot(v) != zero:
                raise FrameError("frame vectors must be pairwise orthogonal")
    poly = harmonic_of(n, poly_kind, a, b, d)
    return (poly * SymFun.trig(trig_kind, tuple(c), d)).scale(QuadExt.coerce(d_scale, d))


def cyclic_lift(G: SymFun) -> VecField:
    """(G(x,y,z), G(y,z,x), G(z,x,y))."""
    if G.nvars != 3:
        raise ValueError("cyclic_lift needs a function of three variables")
    return VecField([G, G.permute((1, 2, 0)), G.permute((2, 0, 1))])


def odd_block(n: int, a, b, d: int = 5) -> SymFun:
    """a Q_n(x,y) sin z + b Q_n(x,z) sin y."""
    return (_h3(n, "Q", X, Y, d) * _trig3(SIN, Z, d)).scale(QuadExt.coerce(a, d)) + \
        (_h3(n, "Q", X, Z, d) * _trig3(SIN, Y, d)).scale(QuadExt.coerce(b, d))


def even_block(n: int, c, d: int = 5) -> SymFun:
    """c Q_n(y,z) cos x."""
    return (_h3(n, "Q", Y, Z, d) * _trig3(COS, X, d)).scale(QuadExt.coerce(c, d))


def mixed_precurl(m: int, a, b, c, d: int = 5) -> VecField:
    """Cyclic lift of  a Q_{2m+1}(x,y) sin z + b Q_{2m+1}(x,z) sin y + c Q_{2m}(y,z) cos x."""
    return cyclic_lift(odd_block(2 * m + 1, a, b, d) + even_block(2 * m, c, d))


def solenoidal_condition(m: int, a, b, c) -> bool:
    """(2m+1) a + (-1)^(m+1) (2m+1) b - c == 0."""
    return (2 * m + 1) * a + (-1) ** (m + 1) * (2 * m + 1) * b - c == 0


def _check_family(ell: int, variant: str, max_ell: int) -> None:
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}")
    if not 0 <= ell <= max_ell:
        raise ValueError(f"ell must be in [0, {max_ell}]")


def tetra_precurl(ell: int, variant: str, d: int = 5, max_ell: int = MAX_ELL) -> VecField:
    """Solenoidal Helmholtz field with tetrahedral symmetry (before adding its curl)."""
    _check_family(ell, variant, max_ell)
    if variant == "4l+1":
        return mixed_precurl(2 * ell, 1, 1, 0, d)
    return mixed_precurl(2 * ell + 1, 1, 1, 8 * ell + 6, d)


def octa_precurl(ell: int, variant: str, d: int = 5, max_ell: int = MAX_ELL) -> VecField:
    """Solenoidal Helmholtz field with octahedral symmetry (before adding its curl)."""
    _check_family(ell, variant, max_ell)
    if variant == "4l+3":
        return mixed_precurl(2 * ell + 1, 1, -1, 0, d)
    return mixed_precurl(2 * ell, 1, -1, 8 * ell + 2, d)


def beltramize(V: VecField) -> VecField:
    """V + curl V, which satisfies curl F = F when div V = 0 and lap V = -V."""
    dres = div(V)
    if not dres.is_zero():
        raise BeltramiPreconditionError("field is not solenoidal", dres)
    hres = laplacian(V) + V
    if not hres.is_zero():
        raise BeltramiPreconditionError("field does not satisfy lap V = -V", hres)
    return V + curl(V)


def tetra_field(ell: int, variant: str, d: int = 5, max_ell: int = MAX_ELL) -> VecField:
    return beltramize(tetra_precurl(ell, variant, d, max_ell))


def octa_field(ell: int, variant: str, d: int = 5, max_ell: int = MAX_ELL) -> VecField:
    return beltramize(octa_precurl(ell, variant, d, max_ell))


# -- icosahedral induction --------------------------------------------------

def induce_icosahedral(V: VecField) -> VecField:
    """sum_{j=0}^{4} eta^{-j} o V o eta^{j}."""
    if V.d != 5:
        V = V.retag(5)
    e = eta()
    total = VecField.zero(3, 5)
    power = e ** 0
    for _ in range(5):
        total = total + conjugate_field(V, power)
        power = power @ e
    return total


def icosa_seed(kind: str = "even-part") -> VecField:
    """Tetrahedral seeds for the induction.

    ``even-part``: lift of y sin z + z sin y.  ``golden``: lift of
    phi y sin z - phi^{-1} z sin y.
    """
    phi = QuadExt.phi()
    if kind == "even-part":
        a, b = 1, 1
    elif kind == "golden":
        a, b = phi, -phi.inverse()
    else:
        raise ValueError(f"unknown seed {kind!r}")
    return cyclic_lift(odd_block(1, a, b, 5))


# -- dihedral (2-D) fields --------------------------------------------------

def _s3() -> QuadExt:
    return QuadExt.sqrt(3)


def dihedral_forms() -> dict[str, tuple[QuadExt, QuadExt]]:
    h = QuadExt(Fraction(1, 2), 0, 3)
    r = _s3() * Fraction(1, 2)
    return {
        "x0": (h, r),
        "x1": (-h, r),
        "y0": (r, h),
        "y1": (r, -h),
    }


PARAM_NAMES = tuple("abcdefghijkl")


def dihedral_basis() -> tuple[SymFun, ...]:
    """The twelve functions multiplying a..l in the dihedral ansatz."""
    L = dihedral_forms()

    def lin(name):
        u, v = L[name]
        return SymFun(2, 3, [Term(u, (1, 0), None), Term(v, (0, 1), None)])

    x, y = SymFun.variables(2, 3)
    return (
        SymFun.cos((1, 0), 3),
        SymFun.cos((0, 1), 3),
        SymFun.cos(L["x0"], 3),
        SymFun.cos(L["x1"], 3),
        SymFun.cos(L["y0"], 3),
        SymFun.cos(L["y1"], 3),
        y * SymFun.sin((1, 0), 3),
        x * SymFun.sin((0, 1), 3),
        lin("y1") * SymFun.sin(L["x0"], 3),
        lin("y0") * SymFun.sin(L["x1"], 3),
        lin("x1") * SymFun.sin(L["y0"], 3),
        lin("x0") * SymFun.sin(L["y1"], 3),
    )


def _as_q3(v) -> QuadExt:
    return QuadExt.coerce(v, 3)


def dihedral_ansatz_scalar(coeffs: Sequence) -> SymFun:
    if len(coeffs) != 12:
        raise ValueError("need 12 coefficients a..l")
    out = SymFun.zero(2, 3)
    for c, f in zip(coeffs, dihedral_basis()):
        c = _as_q3(c)
        if c:
            out = out + f.scale(c)
    return out


def dihedral_ansatz_field(coeffs: Sequence) -> VecField:
    """(G(x,y), G(y,x)) for the twelve-parameter ansatz G."""
    G = dihedral_ansatz_scalar(coeffs)
    return VecField([G, G.permute((1, 0))])


def dihedral_quadratic(d: int = 3) -> tuple[SymFun, SymFun]:
    """(2xy - x^2 + y^2, 2xy + x^2 - y^2)."""
    quad_x = SymFun(2, d, [Term(2, (1, 1), None), Term(-1, (2, 0), None), Term(1, (0, 2), None)])
    quad_y = SymFun(2, d, [Term(2, (1, 1), None), Term(1, (2, 0), None), Term(-1, (0, 2), None)])
    return quad_x, quad_y


@dataclass(frozen=True)
class DihedralFamily:
    """Affine line ``base + a * direction`` of admissible coefficient tuples."""

    base: tuple[QuadExt, ...]
    direction: tuple[QuadExt, ...]
    stage_ranks: tuple[int, int, int]
    dimension: int

    def at(self, a, scale=1) -> tuple[QuadExt, ...]:
        a = _as_q3(a)
        s = _as_q3(scale)
        return tuple((b + a * v) * s for b, v in zip(self.base, self.direction))


def _equations(funcs: Sequence[SymFun], target: SymFun | None = None):
    """Coefficient-matching equations for sum_k c_k funcs[k] == target."""
    keys = set()
    for f in funcs:
        keys.update(f.term_map())
    if target is not None:
        keys.update(target.term_map())
    zero = QuadExt(0, 0, 3)
    rows, rhs = [], []
    for key in sorted(keys, key=repr):
        rows.append([f.term_map().get(key, zero) for f in funcs])
        rhs.append(target.term_map().get(key, zero) if target is not None else zero)
    return rows, rhs


def solve_dihedral_constraints() -> DihedralFamily:
    """Solve the Taylor, solenoidality and alpha-invariance conditions exactly.

    The unknowns are eliminated with ``a`` ordered last so that it is the
    free parameter of the solution line whenever the line is transverse to a = const.
    """
    basis = dihedral_basis()
    fields = [VecField([f, f.permute((1, 0))]) for f in basis]
    quad_x, _ = dihedral_quadratic(3)
    alpha = dihedral_alpha()

    taylor = [f.taylor_part(2) for f in basis]
    eq_i = _equations(taylor, quad_x)
    eq_ii = _equations([div(F) for F in fields])
    inv = [conjugate_field(F, alpha) - F for F in fields]
    eq_iii_x = _equations([v[0] for v in inv])
    eq_iii_y = _equations([v[1] for v in inv])

    order = list(range(1, 12)) + [0]  # b..l, a

    def reorder(eqs):
        rows, rhs = eqs
        return [[r[k] for k in order] for r in rows], rhs

    stages = [eq_i, eq_ii, (eq_iii_x[0] + eq_iii_y[0], eq_iii_x[1] + eq_iii_y[1])]
    rows: list = []
    rhs: list = []
    ranks = []
    prev = 0
    for eqs in stages:
        r, b = reorder(eqs)
        rows += r
        rhs += b
        _, _, rank = solve_linear(rows, rhs, 3)
        ranks.append(rank - prev)
        prev = rank
    particular, nullspace, _ = solve_linear(rows, rhs, 3)
    inverse_order = [order.index(k) for k in range(12)]
    base = tuple(particular[i] for i in inverse_order)
    dim = len(nullspace)
    if dim != 1:
        return DihedralFamily(base, tuple(QuadExt(0, 0, 3) for _ in range(12)), tuple(ranks), dim)
    vec = tuple(nullspace[0][i] for i in inverse_order)
    if not vec[0]:
        raise ValueError("solution line does not vary with a")
    vec = tuple(v / vec[0] for v in vec)
    base = tuple(b - base[0] * v for b, v in zip(base, vec))
    return DihedralFamily(base, vec, tuple(ranks), dim)


def dihedral_field(a=0, scale=1) -> VecField:
    return dihedral_ansatz_field(solve_dihedral_constraints().at(a, scale))


def dihedral_order0_field() -> VecField:
    """The order-0 dihedral field: family at a = 0, scaled by 3/8."""
    return dihedral_field(0, Fraction(3, 8))


def dihedral_symmetric_field() -> VecField:
    """Family at a = 4/3, scaled by 3/2."""
    return dihedral_field(Fraction(4, 3), Fraction(3, 2))
