"""Kan operations as properties over randomly generated composition problems."""

from __future__ import annotations

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cubical.selftest import Gen, base_context, check_problem, check_uniformity, random_problem

CTX = base_context()
SETTINGS = settings(max_examples=60, deadline=None,
                    suppress_health_check=[HealthCheck.too_slow])


@SETTINGS
@given(st.randoms(use_true_random=False))
def test_composition_and_fill_contracts(rnd):
    pb = random_problem(rnd, Gen(rnd))
    assert check_problem(CTX, pb) is None


@SETTINGS
@given(st.randoms(use_true_random=False))
def test_composition_is_uniform(rnd):
    pb = random_problem(rnd, Gen(rnd))
    assert check_uniformity(rnd, CTX, pb) is None


@SETTINGS
@given(st.randoms(use_true_random=False), st.sampled_from(["Nat", "A", "DSig", "DPi"]))
def test_each_type_former(rnd, shape):
    pb = random_problem(rnd, Gen(rnd), shape)
    assert check_problem(CTX, pb) is None
