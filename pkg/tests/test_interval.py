from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubical.interval import (DNF, IDir, IJoin, IMeet, INeg, IOne, IZero, ScopeError,
                              dm4_equal, iequal, isubst, normalize)

x, y, z = IDir("x"), IDir("y"), IDir("z")


def terms(names=("x", "y", "z", "w")):
    leaf = st.one_of(st.just(IZero()), st.just(IOne()), st.sampled_from(names).map(IDir))
    return st.recursive(
        leaf,
        lambda kids: st.one_of(
            kids.map(INeg),
            st.tuples(kids, kids).map(lambda ab: IMeet(*ab)),
            st.tuples(kids, kids).map(lambda ab: IJoin(*ab)),
        ),
        max_leaves=10,
    )


# -- normalize ---------------------------------------------------------------

def test_one_meet_is_unit():
    assert normalize(IMeet(IOne(), x)) == normalize(x)


def test_double_negation():
    assert normalize(INeg(INeg(x))) == DNF.var("x")


def test_meet_with_negation_is_not_zero():
    d = normalize(IMeet(x, INeg(x)))
    assert d == DNF(((("x", True), ("x", False)),))
    assert not d.is_zero()


def test_absorption():
    assert normalize(IJoin(x, IMeet(x, y))) == DNF.var("x")


# -- iequal ------------------------------------------------------------------

def test_meet_commutes():
    assert iequal(IMeet(x, y), IMeet(y, x))


def test_de_morgan_join():
    assert iequal(IJoin(x, y), INeg(IMeet(INeg(x), INeg(y))))


def test_excluded_middle_fails():
    assert not iequal(IMeet(x, INeg(x)), IZero())


# -- isubst ------------------------------------------------------------------

def test_subst_endpoint():
    assert iequal(isubst(IMeet(x, y), {"x": IZero(), "y": y}), IZero())


def test_subst_generator():
    assert isubst(x, {"x": INeg(y)}) == INeg(y)


def test_subst_under_negation():
    out = isubst(INeg(x), {"x": IMeet(y, z)})
    assert iequal(out, IJoin(INeg(y), INeg(z)))


def test_subst_unbound_direction():
    with pytest.raises(ScopeError):
        isubst(IMeet(x, y), {"x": IZero()})


# -- properties --------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(terms(), terms())
def test_iequal_matches_dm4(a, b):
    assert iequal(a, b) == dm4_equal(a, b)


@settings(max_examples=200, deadline=None)
@given(terms())
def test_normal_form_is_fixed_point(t):
    d = normalize(t)
    assert normalize(d.to_term()) == d
    assert dm4_equal(t, d.to_term())


@settings(max_examples=200, deadline=None)
@given(terms(), terms())
def test_algebra_laws(a, b):
    assert iequal(INeg(IMeet(a, b)), IJoin(INeg(a), INeg(b)))
    assert iequal(IMeet(a, IJoin(a, b)), a)
    assert iequal(IMeet(a, IOne()), a) and iequal(IJoin(a, IZero()), a)
    assert iequal(IMeet(a, IZero()), IZero()) and iequal(IJoin(a, IOne()), IOne())


@settings(max_examples=200, deadline=None)
@given(terms(("x", "y")), terms(("x", "y")), terms(("x", "y")))
def test_subst_commutes_with_normalize(t, rx, ry):
    sigma = {"x": rx, "y": ry, "z": IDir("z"), "w": IDir("w")}
    direct = normalize(isubst(t, sigma))
    via_dnf = normalize(t).subst({k: normalize(v) for k, v in sigma.items()})
    assert direct == via_dnf
