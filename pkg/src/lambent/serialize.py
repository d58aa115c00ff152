"""JSON documents and human-readable rendering for SymFun / VecField."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exact import ExactMatrix, QuadExt, format_frac, quad_sign
from .trig import COS, SIN, SymFun, Term, TrigKind, VecField

FORMAT_VERSION = 1


class DocumentError(ValueError):
    pass


# -- exact scalars ----------------------------------------------------------

def quad_to_json(x: QuadExt) -> dict:
    return {"a": format_frac(x.a), "b": format_frac(x.b), "d": x.d}


def quad_from_json(obj: dict) -> QuadExt:
    try:
        return QuadExt(Fraction(obj["a"]), Fraction(obj["b"]), int(obj["d"]))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad exact number {obj!r}") from exc


# -- functions --------------------------------------------------------------

def symfun_to_json(f: SymFun) -> list:
    out = []
    for coeff, exps, trig in f.terms():
        item: dict[str, Any] = {"coeff": quad_to_json(coeff), "exponents": list(exps), "trig": None}
        if trig is not None:
            kind, form = trig
            item["trig"] = {"kind": "sin" if kind == SIN else "cos", "form": [quad_to_json(v) for v in form]}
        out.append(item)
    return out


def symfun_from_json(items: list, nvars: int, d: int) -> SymFun:
    terms = []
    for item in items:
        trig = item.get("trig")
        if trig is not None:
            kind = {"sin": SIN, "cos": COS}.get(trig.get("kind"))
            if kind is None:
                raise DocumentError(f"bad trig kind in {trig!r}")
            trig = (kind, tuple(quad_from_json(v) for v in trig["form"]))
        terms.append(Term(quad_from_json(item["coeff"]), tuple(item["exponents"]), trig))
    f = SymFun(nvars, d, terms)
    if symfun_to_json(f) != items:
        raise DocumentError("function terms are not in canonical form")
    return f


def field_to_document(F: VecField, constructor: str = "", params: dict | None = None) -> dict:
    return {
        "version": FORMAT_VERSION,
        "d": F.d,
        "dimension": F.nvars,
        "components": [symfun_to_json(c) for c in F.components],
        "provenance": {"constructor": constructor, "params": params or {}},
    }


def field_from_document(doc: dict) -> VecField:
    if doc.get("version") != FORMAT_VERSION:
        raise DocumentError(f"unsupported document version {doc.get('version')!r}")
    n, d = int(doc["dimension"]), int(doc["d"])
    comps = doc["components"]
    if len(comps) != n:
        raise DocumentError("component count does not match dimension")
    return VecField(symfun_from_json(c, n, d) for c in comps)


def dumps(doc: Any, pretty: bool = False) -> str:
    if pretty:
        return json.dumps(doc, indent=2, sort_keys=True)
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


def matrix_to_json(M: ExactMatrix) -> list:
    return [[quad_to_json(e) for e in row] for row in M.rows]


# -- pretty printing --------------------------------------------------------

def _scalar(c: QuadExt) -> str:
    if not c.b:
        return format_frac(c.a)
    root = f"√{c.d}"
    b = c.b
    if b == 1:
        irr = root
    elif b == -1:
        irr = f"-{root}"
    elif b.denominator == 1:
        irr = f"{b.numerator}{root}"
    elif abs(b.numerator) == 1:
        irr = f"{'-' if b < 0 else ''}{root}/{b.denominator}"
    else:
        irr = f"{b.numerator}{root}/{b.denominator}"
    if not c.a:
        return irr
    sign = "-" if irr.startswith("-") else "+"
    return f"({format_frac(c.a)} {sign} {irr.lstrip('-')})"


def _linear(form, names) -> str:
    pieces = []
    for c, name in zip(form, names):
        if not c:
            continue
        s = quad_sign(c)
        mag = -c if s < 0 else c
        if mag.a and mag.b:
            body = f"{_scalar(mag)}{name}"
        else:
            q = mag.a if mag.a else mag.b
            num = "" if q.numerator == 1 else str(q.numerator)
            if mag.b:
                num += f"√{mag.d}"
            body = f"{num}{name}" + (f"/{q.denominator}" if q.denominator != 1 else "")
        pieces.append(("-" if s < 0 else "+", body))
    text = pieces[0][1] if pieces[0][0] == "+" else "-" + pieces[0][1]
    for sign, body in pieces[1:]:
        text += f" {sign} {body}"
    return text


def pretty(f: SymFun, names=None) -> str:
    """Render in the canonical term order, e.g. ``y sin(z) + x cos(y) - x cos(z)``."""
    names = list(names or ("x", "y", "z")[: f.nvars] if f.nvars <= 3 else [f"x{i}" for i in range(f.nvars)])
    if f.is_zero():
        return "0"
    out = ""
    for i, (coeff, exps, trig) in enumerate(f.terms()):
        neg = quad_sign(coeff) < 0
        mag = -coeff if neg else coeff
        factors = []
        for name, e in zip(names, exps):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        if trig is not None:
            kind, form = trig
            factors.append(f"{'sin' if kind == SIN else 'cos'}({_linear(form, names)})")
        body = " ".join(factors)
        if mag != 1 or not body:
            body = _scalar(mag) + (" " + body if body else "")
        if i == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out


def pretty_field(F: VecField) -> str:
    names = ("x", "y", "z")[: F.nvars]
    return "\n".join(f"F_{n} = {pretty(c)}" for n, c in zip(names, F.components))
