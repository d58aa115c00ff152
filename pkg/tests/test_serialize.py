import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from lambent.exact import QuadExt
from lambent.fields import induce_icosahedral, icosa_seed, octa_field, dihedral_symmetric_field
from lambent.serialize import (
    DocumentError,
    dumps,
    field_from_document,
    field_to_document,
    pretty,
    quad_from_json,
    quad_to_json,
    symfun_from_json,
    symfun_to_json,
)
from lambent.trig import SymFun

rationals = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


@settings(max_examples=100)
@given(rationals, rationals, st.sampled_from((3, 5)))
def test_quad_roundtrip(a, b, d):
    q = QuadExt(a, b, d)
    assert quad_from_json(json.loads(json.dumps(quad_to_json(q)))) == q


@pytest.mark.parametrize("make", [lambda: octa_field(1, "4l+1"), dihedral_symmetric_field,
                                  lambda: induce_icosahedral(icosa_seed("golden"))])
def test_field_roundtrip_is_bit_stable(make):
    F = make()
    text = dumps(field_to_document(F, "x", {"k": 1}))
    G = field_from_document(json.loads(text))
    assert G == F
    assert dumps(field_to_document(G, "x", {"k": 1})) == text


def test_non_canonical_input_rejected():
    f = SymFun.sin((1, 0, 0))
    items = symfun_to_json(f)
    items[0]["trig"]["form"][0] = quad_to_json(QuadExt(-1))
    with pytest.raises(DocumentError):
        symfun_from_json(items, 3, 5)
    doubled = symfun_to_json(f) * 2
    with pytest.raises(DocumentError):
        symfun_from_json(doubled, 3, 5)


def test_bad_documents():
    doc = field_to_document(dihedral_symmetric_field())
    with pytest.raises(DocumentError):
        field_from_document(dict(doc, version=2))
    with pytest.raises(DocumentError):
        field_from_document(dict(doc, components=doc["components"][:1]))
    with pytest.raises(DocumentError):
        quad_from_json({"a": "1/0"})


def test_pretty():
    x, y = SymFun.variables(2, 3)
    s3 = QuadExt.sqrt(3)
    f = SymFun.cos((s3 * Fraction(1, 2), Fraction(1, 2)), 3) - (x * SymFun.sin((0, 1), 3)).scale(2)
    text = pretty(f)
    assert "cos(√3x/2 + y/2)" in text
    assert "2 x sin(y)" in text
    assert pretty(SymFun.zero(2, 3)) == "0"
