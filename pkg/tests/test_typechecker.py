from __future__ import annotations

import pytest

from cubical import evaluator as E
from cubical import syntax as S
from cubical.typechecker import (KINDS, Program, TypeCheckError, check, check_program, conv,
                                 infer)

from conftest import evaluate


def check_src(ctx, term: str, ty: str) -> None:
    check(ctx, S.parse_term(term), ctx.eval(S.parse_term(ty)))


def error_kind(ctx, term: str, ty: str | None = None) -> str:
    with pytest.raises(TypeCheckError) as err:
        if ty is None:
            infer(ctx, S.parse_term(term))
        else:
            check_src(ctx, term, ty)
    assert err.value.kind in KINDS
    return err.value.kind


# -- checking ----------------------------------------------------------------

def test_constant_path(ctx):
    check_src(ctx, "<i> zero", "Path Nat zero zero")


def test_constant_path_wrong_endpoint(ctx):
    assert error_kind(ctx, "<i> zero", "Path Nat zero (suc zero)") == "boundary"


def test_comp_cap_disagrees_with_tube(ctx):
    src = "comp 0 (<_> Nat) [(x = 0) -> <_> suc zero] zero"
    assert error_kind(ctx, src) == "boundary"


def test_incompatible_system(ctx):
    src = "comp 0 (<_> A) [(x = 0) -> <_> a, (y = 1) -> <_> b] a"
    assert error_kind(ctx, src) in {"incompatibleSystem", "boundary"}
    overlap = "comp 0 (<_> Nat) [(x = 0) -> <_> zero, (x = 0) -> <_> suc zero] zero"
    assert error_kind(ctx, overlap) == "incompatibleSystem"


def test_unbound_variable(ctx):
    assert error_kind(ctx, "nope") == "scope"


def test_unbound_direction(ctx):
    assert error_kind(ctx, "p @ k") == "scope"


def test_not_a_type(ctx):
    assert error_kind(ctx, "(a : zero)") == "notAType"


def test_mismatch(ctx):
    assert error_kind(ctx, "suc a") == "mismatch"


def test_endpoints_up_to_de_morgan(ctx):
    check_src(ctx, "<i> p @ (i \\/ (i /\\ x))", "Path A a b")


def test_dependent_composition(ctx):
    check_src(ctx, "comp 0 (<i> B (p @ i) (idPair (<j> p @ (i /\\ j)) (i = 0))) [] bb",
              "B b (idPair p (0 = 1))")


def test_glue_element_checks_against_glue(ctx):
    check_src(ctx, "glue [(x = 0) -> n] n", "Glue Nat [(x = 0) -> (Nat, idfun Nat, idEquiv Nat)]")


def test_glue_element_boundary(ctx):
    src = "glue [(x = 0) -> n] (suc n)"
    ty = "Glue Nat [(x = 0) -> (Nat, idfun Nat, idEquiv Nat)]"
    assert error_kind(ctx, src, ty) == "boundary"


# -- conversion --------------------------------------------------------------

def test_j_on_refl_converts(ctx):
    v, ty = evaluate(ctx, "idJ B bb (refl a)")
    w, _ = evaluate(ctx, "bb")
    assert conv(v, w, ty)


def test_glue_on_top_converts_with_fibre(ctx):
    v, _ = evaluate(ctx, "Glue A [(1 = 1) -> (A, idfun A, idEquiv A)]")
    assert conv(v, ctx.eval(S.parse_term("A")), E.VU())


def test_path_eta(ctx):
    v, ty = evaluate(ctx, "<i> p @ i")
    assert conv(v, ctx.eval(S.parse_term("p")), ty)


def test_function_eta(ctx):
    v, ty = evaluate(ctx, "(\\z. h z : A -> A)")
    assert conv(v, ctx.eval(S.parse_term("h")), ty)


def test_pair_eta(ctx):
    v, ty = evaluate(ctx, "(\\s. (s.1, s.2) : A * Path A b b -> A * Path A b b)")
    w, _ = evaluate(ctx, "(\\s. s : A * Path A b b -> A * Path A b b)")
    assert conv(v, w, ty)


def test_distinct_neutrals_differ(ctx):
    assert not conv(ctx.eval(S.parse_term("a")), ctx.eval(S.parse_term("b")), None)


def test_interval_terms_converted_up_to_de_morgan(ctx):
    v, ty = evaluate(ctx, "p @ ~(~x \\/ ~y)")
    w, _ = evaluate(ctx, "p @ (y /\\ x)")
    assert conv(v, w, ty)


# -- programs ----------------------------------------------------------------

def test_program_accumulates_definitions():
    prog = check_program(S.parse("def two : Nat = suc (suc zero)\n"
                                 "def p : Path Nat two two = <i> two"))
    assert prog.order == ["two", "p"]
    assert E.normal_form(prog.values["two"]) == "suc (suc zero)"


def test_duplicate_definition():
    prog = check_program(S.parse("def a : Nat = zero"))
    with pytest.raises(TypeCheckError) as err:
        check_program(S.parse("def a : Nat = suc zero"), prog)
    assert err.value.kind == "scope"


def test_error_carries_span():
    with pytest.raises(TypeCheckError) as err:
        check_program(S.parse("def a : Nat = zero\ndef w : Path Nat zero (suc zero) = <i> zero"))
    assert err.value.span is not None and err.value.span.line == 2


def test_program_copy_is_independent():
    prog = check_program(S.parse("def a : Nat = zero"))
    other = prog.copy()
    check_program(S.parse("def b : Nat = a"), other)
    assert "b" not in prog.values and "b" in other.values
    assert isinstance(Program(), Program)
