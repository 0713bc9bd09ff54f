from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubical import syntax as S
from cubical.interval import IDir, IMeet, INeg
from cubical.prelude import prelude_source
from cubical.selftest import Gen, random_problem


def test_single_definition():
    (d,) = S.parse("def id : (A : U) -> A -> A = \\A a. a")
    assert d.name == "id"
    assert isinstance(d.ty, S.Pi) and isinstance(d.body, S.Lam)


def test_path_abstraction():
    (d,) = S.parse("def p : Path Nat zero zero = <i> zero")
    assert d.body == S.PLam("i", S.Zero())
    assert d.ty == S.PathT(S.Nat(), S.Zero(), S.Zero())


def test_malformed_definition():
    with pytest.raises(S.ParseError) as err:
        S.parse("def bad : = ")
    assert err.value.span is not None and err.value.span.line == 1


def test_error_position():
    with pytest.raises(S.ParseError) as err:
        S.parse("def a : Nat = zero\n\ndef b : Nat = )")
    assert (err.value.span.line, err.value.span.col) == (3, 15)


def test_comments_and_spans():
    defs = S.parse("-- leading comment\ndef a : Nat = zero -- trailing\ndef b : Nat = a")
    assert [d.name for d in defs] == ["a", "b"]
    assert defs[1].span.line == 3


def test_interval_precedence():
    assert S.parse_interval("~i /\\ j") == IMeet(INeg(IDir("i")), IDir("j"))


def test_face_syntax():
    phi = S.parse_face("(i = 0) /\\ (j = 1) \\/ (k = 0)")
    assert isinstance(phi, S.FOr) and isinstance(phi.left, S.FAnd)


def test_system_and_comp():
    t = S.parse_term("comp 0 (<i> Nat) [(j = 0) -> <i> zero, (j = 1) -> <i> zero] zero")
    assert isinstance(t, S.Comp) and t.e == 0 and len(t.system.branches) == 2


def test_prelude_round_trips():
    for d in S.parse(prelude_source()):
        again = S.parse(S.show_definition(d))
        assert again == [d], d.name


@settings(max_examples=100, deadline=None)
@given(st.randoms(use_true_random=False))
def test_generated_terms_round_trip(rnd):
    pb = random_problem(rnd, Gen(rnd))
    for src in (pb.comp(), pb.fill("x"), pb.ty):
        t = S.parse_term(src)
        assert S.parse_term(S.show(t)) == t
