from __future__ import annotations

import pytest

from cubical import evaluator as E
from cubical import syntax as S
from cubical.prelude import load_prelude
from cubical.selftest import base_context
from cubical.typechecker import Context, infer


@pytest.fixture(scope="session")
def prelude():
    return load_prelude()


@pytest.fixture(scope="session")
def ctx(prelude) -> Context:
    """Prelude globals plus the variables A a b p n h np B bb and directions x y."""
    return base_context(prelude)


def evaluate(ctx: Context, src: str) -> tuple[E.Value, E.Value]:
    t = S.parse_term(src)
    ty = infer(ctx, t)
    return ctx.eval(t), ty


def nf(ctx: Context, src: str) -> str:
    return E.normal_form(evaluate(ctx, src)[0])
