"""Exact functions of the form  sum coeff * x^e * {1, sin(l.x), cos(l.x)}.

Every term carries at most one trigonometric factor whose argument is a
linear form ``l`` in canonical orientation (first nonzero coefficient
positive).  Products of trig factors are expanded with the product-to-sum
rules, so after normalization the remaining terms are linearly independent
over the polynomial ring and equality of term maps is a complete zero test.
"""

from __future__ import annotations

import math
from enum import IntEnum
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Mapping, NamedTuple, Sequence

from .exact import DiscriminantMismatch, ExactMatrix, QuadExt, quad_sign

VAR_NAMES = ("x", "y", "z")


class TrigKind(IntEnum):
    COS = 1
    SIN = 2


COS = TrigKind.COS
SIN = TrigKind.SIN

Form = tuple  # tuple[QuadExt, ...]


class Term(NamedTuple):
    coeff: QuadExt
    exponents: tuple[int, ...]
    trig: tuple[TrigKind, Form] | None


def canonical_form(form: Sequence[QuadExt]) -> tuple[int, Form]:
    """Return ``(s, l)`` with ``form == s * l`` and ``l`` canonically oriented.

    ``s`` is 0 for the zero form.
    """
    for c in form:
        if c:
            if quad_sign(c) > 0:
                return 1, tuple(form)
            return -1, tuple(-e for e in form)
    return 0, tuple(form)


def _form_add(f: Form, g: Form) -> Form:
    return tuple(u + v for u, v in zip(f, g))


def _form_sub(f: Form, g: Form) -> Form:
    return tuple(u - v for u, v in zip(f, g))


def _mono_mul(e1: tuple[int, ...], e2: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(a + b for a, b in zip(e1, e2))


class _Acc:
    """Mutable accumulator of canonical terms."""

    __slots__ = ("nvars", "d", "terms", "half")

    def __init__(self, nvars: int, d: int):
        self.nvars = nvars
        self.d = d
        self.terms: dict = {}
        self.half = QuadExt(Fraction(1, 2), 0, d)

    def _put(self, key, c: QuadExt) -> None:
        old = self.terms.get(key)
        self.terms[key] = c if old is None else old + c

    def add(self, c: QuadExt, exps: tuple[int, ...], kind: TrigKind | None, form: Form | None) -> None:
        if not c:
            return
        if kind is None:
            self._put((exps, None), c)
            return
        s, f = canonical_form(form)
        if s == 0:
            if kind == COS:
                self._put((exps, None), c)
            return
        if s < 0 and kind == SIN:
            c = -c
        self._put((exps, (kind, f)), c)

    def add_product(self, c: QuadExt, exps: tuple[int, ...], factors: Sequence[tuple[TrigKind, Form]]) -> None:
        """Add ``c * x^exps * prod(factors)``, expanding products of trig factors."""
        if not c:
            return
        if not factors:
            self.add(c, exps, None, None)
            return
        if len(factors) == 1:
            k, f = factors[0]
            self.add(c, exps, k, f)
            return
        (k1, a), (k2, b), rest = factors[0], factors[1], list(factors[2:])
        h = c * self.half
        plus, minus = _form_add(a, b), _form_sub(a, b)
        if k1 == SIN and k2 == SIN:
            pieces = ((h, COS, minus), (-h, COS, plus))
        elif k1 == SIN and k2 == COS:
            pieces = ((h, SIN, plus), (h, SIN, minus))
        elif k1 == COS and k2 == SIN:
            pieces = ((h, SIN, plus), (-h, SIN, minus))
        else:
            pieces = ((h, COS, minus), (h, COS, plus))
        for cc, kind, form in pieces:
            s, f = canonical_form(form)
            if s == 0:
                if kind == SIN:
                    continue
                self.add_product(cc, exps, rest)
                continue
            if s < 0 and kind == SIN:
                cc = -cc
            self.add_product(cc, exps, [(kind, f)] + rest)

    def build(self) -> "SymFun":
        return SymFun._trusted(self.nvars, self.d, {k: v for k, v in self.terms.items() if v})


def _term_sort_key(key):
    exps, trig = key
    if trig is None:
        tk, fk = 0, ()
    else:
        tk, fk = int(trig[0]), tuple(c.sort_key() for c in trig[1])
    return (sum(exps), tuple(-e for e in exps), tk, fk)


def _form_power(form: Form, j: int) -> tuple:
    """Multinomial expansion of ``(l.x)^j`` as a tuple of (exps, coeff) pairs."""
    # rational QuadExts compare equal across discriminants, so d is part of the key
    return _form_power_d(form, j, form[0].d)


@lru_cache(maxsize=4096)
def _form_power_d(form: Form, j: int, d: int) -> tuple:
    n = len(form)
    poly = {(0,) * n: QuadExt(1, 0, d)}
    units = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    for _ in range(j):
        nxt: dict = {}
        for exps, c in poly.items():
            for k, fk in enumerate(form):
                if not fk:
                    continue
                e = _mono_mul(exps, units[k])
                old = nxt.get(e)
                v = c * fk
                nxt[e] = v if old is None else old + v
        poly = {e: c for e, c in nxt.items() if c}
    return tuple(poly.items())


class SymFun:
    """Immutable canonical sum of ``coeff * monomial * (1 | sin l | cos l)`` terms."""

    __slots__ = ("nvars", "d", "_terms", "_fn", "_hash")

    def __init__(self, nvars: int, d: int, terms: Iterable[Term] = ()):
        acc = _Acc(nvars, d)
        for t in terms:
            c = QuadExt.coerce(t.coeff, d)
            exps = tuple(int(e) for e in t.exponents)
            if len(exps) != nvars:
                raise ValueError("exponent vector has wrong length")
            if t.trig is None:
                acc.add(c, exps, None, None)
            else:
                kind, form = t.trig
                acc.add(c, exps, TrigKind(kind), tuple(QuadExt.coerce(v, d) for v in form))
        built = acc.build()
        self.nvars = nvars
        self.d = d
        self._terms = built._terms
        self._fn = None
        self._hash = None

    @classmethod
    def _trusted(cls, nvars: int, d: int, terms: dict) -> "SymFun":
        f = object.__new__(cls)
        f.nvars = nvars
        f.d = d
        f._terms = terms
        f._fn = None
        f._hash = None
        return f

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, d: int = 5) -> "SymFun":
        return cls._trusted(nvars, d, {})

    @classmethod
    def const(cls, c, nvars: int, d: int = 5) -> "SymFun":
        c = QuadExt.coerce(c, d)
        return cls._trusted(nvars, d, {((0,) * nvars, None): c} if c else {})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1, d: int = 5) -> "SymFun":
        return cls(len(exps), d, [Term(coeff, tuple(exps), None)])

    @classmethod
    def var(cls, i: int, nvars: int, d: int = 5) -> "SymFun":
        return cls.monomial(tuple(int(k == i) for k in range(nvars)), 1, d)

    @classmethod
    def trig(cls, kind: TrigKind, form: Sequence, d: int = 5, coeff=1) -> "SymFun":
        n = len(form)
        return cls(n, d, [Term(coeff, (0,) * n, (kind, tuple(form)))])

    @classmethod
    def sin(cls, form: Sequence, d: int = 5) -> "SymFun":
        return cls.trig(SIN, form, d)

    @classmethod
    def cos(cls, form: Sequence, d: int = 5) -> "SymFun":
        return cls.trig(COS, form, d)

    @classmethod
    def variables(cls, nvars: int, d: int = 5) -> tuple["SymFun", ...]:
        return tuple(cls.var(i, nvars, d) for i in range(nvars))

    # -- access -----------------------------------------------------------
    def terms(self) -> list[Term]:
        """Terms in canonical order."""
        return [Term(self._terms[k], k[0], k[1]) for k in sorted(self._terms, key=_term_sort_key)]

    def term_map(self) -> Mapping:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.terms())

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_polynomial(self) -> bool:
        return all(k[1] is None for k in self._terms)

    def coefficient(self, exps: Sequence[int], trig=None) -> QuadExt:
        if trig is not None:
            kind, form = trig
            s, f = canonical_form(tuple(QuadExt.coerce(v, self.d) for v in form))
            c = self._terms.get((tuple(exps), (TrigKind(kind), f)), QuadExt(0, 0, self.d))
            return -c if (s < 0 and kind == SIN) else c
        return self._terms.get((tuple(exps), None), QuadExt(0, 0, self.d))

    def __eq__(self, other) -> bool:
        if isinstance(other, SymFun):
            return self.nvars == other.nvars and self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == SymFun.const(other, self.nvars, self.d)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._terms.items())))
        return self._hash

    def retag(self, d: int) -> "SymFun":
        """Same function over Q(sqrt d); only valid when every coefficient is rational."""
        if d == self.d:
            return self
        terms = {}
        for (exps, trig), c in self._terms.items():
            if trig is not None:
                trig = (trig[0], tuple(v.retag(d) for v in trig[1]))
            terms[(exps, trig)] = c.retag(d)
        return SymFun._trusted(self.nvars, d, terms)

    # -- ring operations --------------------------------------------------
    def _check(self, other: "SymFun") -> None:
        if other.nvars != self.nvars:
            raise ValueError(f"dimension mismatch: {self.nvars} vs {other.nvars}")
        if other.d != self.d:
            raise DiscriminantMismatch(f"Q(sqrt {self.d}) vs Q(sqrt {other.d})")

    def _lift(self, other) -> "SymFun | None":
        if isinstance(other, SymFun):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction, QuadExt)):
            return SymFun.const(other, self.nvars, self.d)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        terms = dict(self._terms)
        for k, c in o._terms.items():
            v = terms.get(k)
            v = c if v is None else v + c
            if v:
                terms[k] = v
            else:
                terms.pop(k, None)
        return SymFun._trusted(self.nvars, self.d, terms)

    __radd__ = __add__

    def __neg__(self) -> "SymFun":
        return SymFun._trusted(self.nvars, self.d, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "SymFun":
        c = QuadExt.coerce(c, self.d)
        if not c:
            return SymFun.zero(self.nvars, self.d)
        return SymFun._trusted(self.nvars, self.d, {k: v * c for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            return self.scale(other)
        o = self._lift(other)
        if o is None:
            return NotImplemented
        acc = _Acc(self.nvars, self.d)
        for (e1, t1), c1 in self._terms.items():
            for (e2, t2), c2 in o._terms.items():
                factors = [t for t in (t1, t2) if t is not None]
                acc.add_product(c1 * c2, _mono_mul(e1, e2), factors)
        return acc.build()

    def __rmul__(self, other):
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, QuadExt)):
            return self.scale(QuadExt.coerce(other, self.d).inverse())
        return NotImplemented

    def __pow__(self, k: int) -> "SymFun":
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = SymFun.const(1, self.nvars, self.d)
        for _ in range(k):
            result = result * self
        return result

    # -- calculus ---------------------------------------------------------
    def partial(self, axis: int) -> "SymFun":
        acc = _Acc(self.nvars, self.d)
        for (exps, trig), c in self._terms.items():
            e = exps[axis]
            if e:
                lowered = exps[:axis] + (e - 1,) + exps[axis + 1:]
                if trig is None:
                    acc.add(c * e, lowered, None, None)
                else:
                    acc.add(c * e, lowered, trig[0], trig[1])
            if trig is not None:
                kind, form = trig
                lk = form[axis]
                if lk:
                    if kind == SIN:
                        acc.add(c * lk, exps, COS, form)
                    else:
                        acc.add(-(c * lk), exps, SIN, form)
        return acc.build()

    def compose(self, rows: Sequence[Sequence], nvars_out: int | None = None) -> "SymFun":
        """Substitute variable ``i`` by the linear form ``rows[i]``.

        ``rows`` has one entry per variable of ``self``; each entry is a
        coefficient vector over the new variables.
        """
        if len(rows) != self.nvars:
            raise ValueError(f"need {self.nvars} substitution rows, got {len(rows)}")
        rows = [tuple(QuadExt.coerce(v, self.d) for v in r) for r in rows]
        m = nvars_out if nvars_out is not None else len(rows[0])
        if any(len(r) != m for r in rows):
            raise ValueError("substitution rows have inconsistent length")
        zero_form = tuple(QuadExt(0, 0, self.d) for _ in range(m))
        powers: dict = {}

        def poly_for(exps):
            poly = {(0,) * m: QuadExt(1, 0, self.d)}
            for i, e in enumerate(exps):
                if not e:
                    continue
                key = (i, e)
                if key not in powers:
                    powers[key] = _form_power(rows[i], e)
                nxt: dict = {}
                for pe, pc in poly.items():
                    for qe, qc in powers[key]:
                        k = _mono_mul(pe, qe)
                        v = pc * qc
                        old = nxt.get(k)
                        nxt[k] = v if old is None else old + v
                poly = nxt
            return poly

        acc = _Acc(m, self.d)
        poly_cache: dict = {}
        for (exps, trig), c in self._terms.items():
            if exps not in poly_cache:
                poly_cache[exps] = poly_for(exps)
            if trig is None:
                kind, new_form = None, None
            else:
                kind, form = trig
                new_form = zero_form
                for li, r in zip(form, rows):
                    if li:
                        new_form = tuple(a + li * b for a, b in zip(new_form, r))
            for pe, pc in poly_cache[exps].items():
                acc.add(c * pc, pe, kind, new_form)
        return acc.build()

    def substitute_linear(self, A: ExactMatrix) -> "SymFun":
        """The function ``x -> f(A x)``."""
        if A.n != self.nvars:
            raise ValueError(f"matrix is {A.n}x{A.n} but function has {self.nvars} variables")
        return self.compose(A.rows)

    def permute(self, order: Sequence[int]) -> "SymFun":
        """``f(x_{order[0]}, x_{order[1]}, ...)``, e.g. ``order=(1, 2, 0)`` gives f(y, z, x)."""
        rows = [tuple(int(j == k) for j in range(self.nvars)) for k in order]
        return self.compose(rows)

    def parity_negate(self) -> "SymFun":
        """``f(-x)``."""
        terms = {}
        for key, c in self._terms.items():
            exps, trig = key
            odd = sum(exps) % 2 == 1
            if trig is not None and trig[0] == SIN:
                odd = not odd
            terms[key] = -c if odd else c
        return SymFun._trusted(self.nvars, self.d, terms)

    def is_even(self) -> bool:
        return self.parity_negate() == self

    def taylor_part(self, k: int) -> "SymFun":
        """Homogeneous degree-``k`` part of the Maclaurin expansion."""
        if k < 0:
            raise ValueError("degree must be nonnegative")
        acc = _Acc(self.nvars, self.d)
        for (exps, trig), c in self._terms.items():
            j = k - sum(exps)
            if j < 0:
                continue
            if trig is None:
                if j == 0:
                    acc.add(c, exps, None, None)
                continue
            kind, form = trig
            if kind == SIN and j % 2 == 1:
                factor = Fraction((-1) ** ((j - 1) // 2), math.factorial(j))
            elif kind == COS and j % 2 == 0:
                factor = Fraction((-1) ** (j // 2), math.factorial(j))
            else:
                continue
            cf = c * factor
            for pe, pc in _form_power(form, j):
                acc.add(cf * pc, _mono_mul(exps, pe), None, None)
        return acc.build()

    def galois_conj(self) -> "SymFun":
        """Apply sqrt(d) -> -sqrt(d) to every coefficient, including those inside trig arguments."""
        acc = _Acc(self.nvars, self.d)
        for (exps, trig), c in self._terms.items():
            if trig is None:
                acc.add(c.conj(), exps, None, None)
            else:
                acc.add(c.conj(), exps, trig[0], tuple(v.conj() for v in trig[1]))
        return acc.build()

    def max_degree(self) -> int:
        return max((sum(e) for e, _ in self._terms), default=0)

    # -- numerics ---------------------------------------------------------
    def source(self, names: Sequence[str] | None = None) -> str:
        """Python expression evaluating the function in double precision."""
        names = list(names or [f"x{i}" for i in range(self.nvars)])
        parts = []
        for coeff, exps, trig in self.terms():
            factors = [repr(float(coeff))]
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}**{e}")
            if trig is not None:
                kind, form = trig
                arg = " + ".join(f"{float(v)!r}*{name}" for v, name in zip(form, names) if v)
                factors.append(f"{'sin' if kind == SIN else 'cos'}({arg})")
            parts.append("*".join(factors))
        return " + ".join(parts) if parts else "0.0"

    def compiled(self) -> Callable[..., float]:
        if self._fn is None:
            args = ", ".join(f"x{i}" for i in range(self.nvars))
            code = f"lambda {args}: {self.source()}"
            self._fn = eval(code, {"sin": math.sin, "cos": math.cos})
        return self._fn

    def eval_f64(self, point: Sequence[float]) -> float:
        if len(point) != self.nvars:
            raise ValueError("point has wrong dimension")
        return float(self.compiled()(*point))

    def __call__(self, *point: float) -> float:
        return self.eval_f64(point)

    def __str__(self) -> str:
        from .serialize import pretty

        return pretty(self)

    def __repr__(self) -> str:
        return f"SymFun({str(self)!r}, d={self.d})"


def normalize(raw_terms: Iterable[tuple], nvars: int, d: int = 5) -> SymFun:
    """Canonical SymFun from raw terms ``(coeff, exponents, [(kind, form), ...])``.

    Each raw term may carry any number of trig factors; products are reduced
    with the product-to-sum identities.
    """
    acc = _Acc(nvars, d)
    for coeff, exps, factors in raw_terms:
        fs = [(TrigKind(k), tuple(QuadExt.coerce(v, d) for v in f)) for k, f in factors]
        if any(len(f) != nvars for _, f in fs) or len(exps) != nvars:
            raise ValueError("term dimension mismatch")
        acc.add_product(QuadExt.coerce(coeff, d), tuple(exps), fs)
    return acc.build()


class VecField:
    """Tuple of ``n`` SymFuns in ``n`` variables over one discriminant."""

    __slots__ = ("components", "_fn")

    def __init__(self, components: Iterable[SymFun]):
        comps = tuple(components)
        if not comps:
            raise ValueError("empty vector field")
        n, d = comps[0].nvars, comps[0].d
        for c in comps:
            if c.nvars != n:
                raise ValueError("components live in different dimensions")
            if c.d != d:
                raise DiscriminantMismatch("components use different discriminants")
        if len(comps) != n:
            raise ValueError(f"{len(comps)} components for a field on R^{n}")
        self.components = comps
        self._fn = None

    @classmethod
    def zero(cls, n: int, d: int = 5) -> "VecField":
        return cls([SymFun.zero(n, d)] * n)

    @property
    def nvars(self) -> int:
        return self.components[0].nvars

    @property
    def d(self) -> int:
        return self.components[0].d

    def __len__(self) -> int:
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i: int) -> SymFun:
        return self.components[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, VecField) and self.components == other.components

    def __hash__(self) -> int:
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def map(self, fn: Callable[[SymFun], SymFun]) -> "VecField":
        return VecField(fn(c) for c in self.components)

    def __add__(self, other: "VecField") -> "VecField":
        return VecField(a + b for a, b in zip(self.components, other.components, strict=True))

    def __sub__(self, other: "VecField") -> "VecField":
        return VecField(a - b for a, b in zip(self.components, other.components, strict=True))

    def __neg__(self) -> "VecField":
        return self.map(lambda c: -c)

    def scale(self, c) -> "VecField":
        return self.map(lambda f: f.scale(c))

    def __mul__(self, c) -> "VecField":
        return self.scale(c)

    __rmul__ = __mul__

    def retag(self, d: int) -> "VecField":
        return self.map(lambda c: c.retag(d))

    def parity_negate(self) -> "VecField":
        return self.map(SymFun.parity_negate)

    def even_part(self) -> "VecField":
        return (self + self.parity_negate()).scale(Fraction(1, 2))

    def substitute_linear(self, A: ExactMatrix) -> "VecField":
        return self.map(lambda c: c.substitute_linear(A))

    def compiled(self) -> Callable[..., tuple[float, ...]]:
        if self._fn is None:
            args = ", ".join(f"x{i}" for i in range(self.nvars))
            body = ", ".join(f"({c.source()})" for c in self.components)
            self._fn = eval(f"lambda {args}: ({body},)", {"sin": math.sin, "cos": math.cos})
        return self._fn

    def eval_f64(self, point: Sequence[float]) -> tuple[float, ...]:
        return self.compiled()(*point)

    def __repr__(self) -> str:
        return f"VecField({list(self.components)!r})"


def partial(f: SymFun, axis: int) -> SymFun:
    return f.partial(axis)


def substitute_linear(f: SymFun, A: ExactMatrix) -> SymFun:
    return f.substitute_linear(A)


def parity_negate(f: SymFun) -> SymFun:
    return f.parity_negate()


def taylor_part(f: SymFun, k: int) -> SymFun:
    return f.taylor_part(k)


def eval_f64(f: SymFun, point: Sequence[float]) -> float:
    return f.eval_f64(point)
