from __future__ import annotations

from hypothesis import given, settings
from hypothesis import strategies as st

from cubical.face import (BOT, TOP, Face, Truth, eval3, face_eq, fand, for_, forall_dir,
                          fsubst, oracle_equal, oracle_leq, truth)
from cubical.interval import DNF, IDir, IMeet, INeg, IOne, IZero, normalize


def atom(name: str, bit: int) -> Face:
    return Face.atom(name, bit)


def faces(names=("x", "y", "z")):
    conj = st.dictionaries(st.sampled_from(names), st.integers(0, 1), max_size=3)
    return st.lists(conj, max_size=4).map(Face.of_maps)


assignments = st.fixed_dictionaries({n: st.sampled_from([0, 1, None]) for n in "xyz"})


# -- face_eq -----------------------------------------------------------------

def test_direction_equals_one():
    assert face_eq(IDir("x"), 1) == atom("x", 1)


def test_zero_equals_zero():
    assert face_eq(IZero(), 0) == TOP


def test_zero_equals_one():
    assert face_eq(IZero(), 1) == BOT


def test_meet_with_negation_equals_one_is_bottom():
    assert face_eq(IMeet(IDir("x"), INeg(IDir("x"))), 1) == BOT


# -- lattice -----------------------------------------------------------------

def test_join_idempotent():
    assert for_(atom("x", 0), atom("x", 0)) == atom("x", 0)


def test_opposite_atoms_meet_to_bottom():
    assert fand(atom("x", 0), atom("x", 1)) == BOT


def test_absorption():
    assert fand(atom("x", 0), for_(atom("x", 0), atom("y", 1))) == atom("x", 0)


# -- fsubst ------------------------------------------------------------------

def test_subst_to_endpoint():
    assert fsubst(atom("x", 1), {"x": DNF.one()}) == TOP


def test_subst_meet():
    sigma = {"x": normalize(IMeet(IDir("y"), IDir("z")))}
    assert fsubst(atom("x", 1), sigma) == fand(atom("y", 1), atom("z", 1))


def test_subst_negation():
    assert fsubst(atom("x", 0), {"x": normalize(INeg(IDir("y")))}) == atom("y", 1)


# -- forall ------------------------------------------------------------------

def test_forall_free():
    assert forall_dir("x", atom("y", 1)) == atom("y", 1)


def test_forall_bound_atom():
    assert forall_dir("x", atom("x", 0)) == BOT


def test_forall_drops_bound_disjunct():
    assert forall_dir("x", for_(atom("x", 0), atom("y", 1))) == atom("y", 1)


# -- truth -------------------------------------------------------------------

def test_truth():
    assert truth(TOP) is Truth.TRUE
    assert truth(BOT) is Truth.FALSE
    assert truth(atom("x", 0)) is Truth.NEITHER


# -- properties --------------------------------------------------------------

@settings(max_examples=300, deadline=None)
@given(faces(), faces(), assignments)
def test_operations_match_three_state_semantics(a, b, env):
    assert eval3(for_(a, b), env) == (eval3(a, env) or eval3(b, env))
    assert eval3(fand(a, b), env) == (eval3(a, env) and eval3(b, env))


@settings(max_examples=300, deadline=None)
@given(faces(), faces())
def test_canonical_forms_decide_equality(a, b):
    assert (a == b) == oracle_equal(a, b, "xyz")
    assert (a <= b) == oracle_leq(a, b, "xyz")


@settings(max_examples=300, deadline=None)
@given(faces(("y", "z")), faces())
def test_forall_adjunction(psi, phi):
    # psi does not mention x
    assert oracle_leq(psi, forall_dir("x", phi), "xyz") == oracle_leq(psi, phi, "xyz")


@settings(max_examples=200, deadline=None)
@given(faces(), st.sampled_from([IZero(), IOne(), IDir("y"), INeg(IDir("z")),
                                 IMeet(IDir("y"), IDir("z"))]))
def test_subst_is_lattice_map(phi, r):
    sigma = {"x": normalize(r)}
    other = for_(atom("y", 0), atom("x", 1))
    assert fsubst(for_(phi, other), sigma) == for_(fsubst(phi, sigma), fsubst(other, sigma))
    assert fsubst(fand(phi, other), sigma) == fand(fsubst(phi, sigma), fsubst(other, sigma))
    assert fsubst(TOP, sigma) == TOP and fsubst(BOT, sigma) == BOT


def test_subst_total_endpoint():
    assert fsubst(face_eq(IOne(), 1), {}) == TOP
