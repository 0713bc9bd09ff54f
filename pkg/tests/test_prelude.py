from __future__ import annotations

import pytest

from cubical import evaluator as E
from cubical import syntax as S
from cubical.prelude import build_prelude, load_prelude, prelude_source
from cubical.typechecker import TypeCheckError, check_program, conv, infer

from conftest import evaluate

EXPECTED = ["idp", "ctr", "subst", "H", "funext", "sym", "trans", "Contr", "fiber", "Equiv",
            "Ext", "toExt", "fromExt", "idfun", "idEquiv", "equivToPath", "coerce",
            "pathToEquiv", "uaCoherence", "coerceIdNat"]


def test_prelude_is_package_data():
    assert "def equivToPath" in prelude_source()


def test_all_entries_present_and_tagged():
    entries = {e.name: e for e in build_prelude()}
    for name in EXPECTED:
        assert name in entries, name
    assert "transport" in entries["subst"].tag
    assert entries["sym"].tag == ""


def test_prelude_checks(prelude):
    assert set(EXPECTED) <= set(prelude.order)


def test_load_returns_independent_copies():
    a, b = load_prelude(), load_prelude()
    check_program(S.parse("def z : Nat = zero"), a)
    assert "z" not in b.values


def test_coerce_along_identity_glue_is_identity(prelude):
    ctx = prelude.context()
    v = ctx.eval(S.parse_term("coerceIdNat (suc (suc zero))"))
    assert E.normal_form(v) == "suc (suc zero)"
    assert E.normal_form(ctx.eval(S.parse_term("coerceIdNat zero"))) == "zero"


def test_transport_over_constant_family_is_identity(prelude):
    ctx = prelude.context()
    t = S.parse_term("subst Nat (\\_. Nat) zero zero (idp Nat zero) (suc zero)")
    assert E.normal_form(ctx.eval(t)) == "suc zero"


def test_singleton_contraction_endpoints(ctx):
    t = S.parse_term("ctr A a b p @ 0")
    ty = infer(ctx, t)
    assert conv(ctx.eval(t), ctx.eval(S.parse_term("(a, idp A a)")), ty)


def test_ext_round_trip_keeps_centre(ctx):
    v, ty = evaluate(ctx, "(\\c. (fromExt A (toExt A c)).1 : Contr A -> A)")
    w, _ = evaluate(ctx, "(\\c. c.1 : Contr A -> A)")
    assert conv(v, w, ty)


@pytest.mark.parametrize("broken, replacement", [
    ("<i> p @ ~i", "<i> p @ i"),                                   # sym
    ("(a, idp A a) (b, p)", "(a, idp A a) (a, p)"),                # ctr endpoint
    ("(i = 1) -> (B, idfun B, idEquiv B)", "(i = 1) -> (A, f, e)"),  # glue end
])
def test_mutations_are_rejected(broken, replacement):
    src = prelude_source()
    assert broken in src
    with pytest.raises(TypeCheckError):
        check_program(S.parse(src.replace(broken, replacement, 1)))
