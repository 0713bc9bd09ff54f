from __future__ import annotations

from cubical import evaluator as E
from cubical import syntax as S
from cubical.face import Face
from cubical.interval import DNF, fresh_dir
from cubical.typechecker import conv

from conftest import evaluate, nf

NAT_GLUE = "Glue Nat [{phi} -> (Nat, idfun Nat, idEquiv Nat)]"


# -- composition -------------------------------------------------------------

def test_nat_composition_returns_numeral(ctx):
    assert nf(ctx, "comp 0 (<_> Nat) [(x = 0) -> <_> suc zero] (suc zero)") == "suc zero"


def test_total_tube_decides(ctx):
    v, _ = evaluate(ctx, "comp 0 (<_> Nat) [(1 = 1) -> np] n")
    w, _ = evaluate(ctx, "np @ 1")
    assert conv(v, w, E.VNat())
    assert E.normal_form(v) == "suc n"


def test_path_composition_with_empty_system(ctx):
    assert nf(ctx, "comp 0 (<_> Path Nat zero zero) [] (<j> zero)") == "<j> zero"


def test_sigma_composition_with_empty_system(ctx):
    assert nf(ctx, "comp 1 (<_> Nat * Nat) [] (zero, suc zero)") == "(zero, suc zero)"


def test_moving_nat_tube_is_stuck(ctx):
    v, _ = evaluate(ctx, "comp 0 (<_> Nat) [(x = 1) -> np] n")
    assert isinstance(v, E.VNeu) and isinstance(v.ne, E.NComp)
    # and computes once the face is decided
    x = ctx.env.locals["x"].as_dir()
    assert E.normal_form(E.restrict(v, {x: DNF.one()})) == "suc n"
    assert E.normal_form(E.restrict(v, {x: DNF.zero()})) == "n"


def test_sum_composition_peels_constructor(ctx):
    v, _ = evaluate(ctx, "comp 0 (<_> Sum Nat A) [(x = 1) -> <i> inr (p @ i)] (inr a)")
    assert isinstance(v, E.VInr)


def test_pi_composition_transports_argument(ctx):
    # composing the constant line of a function applies it pointwise
    v, _ = evaluate(ctx, "comp 0 (<_> Nat -> Nat) [] (\\k. suc k)")
    assert E.normal_form(E.app(v, E.VZero())) == "suc zero"


# -- filling -----------------------------------------------------------------

def test_fill_at_start_is_cap(ctx):
    v, _ = evaluate(ctx, "fill 0 (<i> A) [(x = 0) -> <i> p @ i] a @ 0")
    assert E.normal_form(v) == "a"


def test_fill_at_end_is_composite(ctx):
    f, _ = evaluate(ctx, "fill 1 (<i> A) [(x = 1) -> <i> p @ i] b @ 0")
    c, ty = evaluate(ctx, "comp 1 (<i> A) [(x = 1) -> <i> p @ i] b")
    assert conv(f, c, ty)


def test_nat_fill_at_generic_point_is_cap(ctx):
    assert nf(ctx, "fill 0 (<_> Nat) [] n @ x") == "n"


# -- glue --------------------------------------------------------------------

def test_glue_type_collapses_on_top(ctx):
    v, _ = evaluate(ctx, NAT_GLUE.format(phi="(1 = 1)"))
    assert isinstance(v, E.VNat)


def test_glue_type_on_bottom_is_over_base(ctx):
    v, _ = evaluate(ctx, NAT_GLUE.format(phi="(0 = 1)"))
    assert isinstance(v, E.VGlue) and isinstance(v.base, E.VNat)


def test_glue_type_on_undecided_face(ctx):
    v, _ = evaluate(ctx, NAT_GLUE.format(phi="(x = 0)"))
    assert isinstance(v, E.VGlue)
    x = ctx.env.locals["x"].as_dir()
    assert isinstance(E.restrict(v, {x: DNF.zero()}), E.VNat)


def test_glue_intro_collapses_on_top(ctx):
    v, _ = evaluate(ctx, "(glue [(1 = 1) -> suc zero] (suc zero) : Nat)")
    assert E.normal_form(v) == "suc zero"


def test_unglue_of_glue_on_bottom(ctx):
    ty = NAT_GLUE.format(phi="(0 = 1)")
    assert nf(ctx, f"unglue [] (glue [] n : {ty})") == "n"


def test_unglue_of_glue_on_undecided_face(ctx):
    ty = NAT_GLUE.format(phi="(x = 0)")
    src = f"unglue [(x = 0) -> idfun Nat] (glue [(x = 0) -> n] n : {ty})"
    assert nf(ctx, src) == "n"


# -- J -----------------------------------------------------------------------

def test_j_on_refl(ctx):
    v, _ = evaluate(ctx, "idJ B bb (refl a)")
    assert E.normal_form(v) == "bb"


def test_j_on_unflagged_pair_over_nat(ctx):
    assert nf(ctx, "idJ (\\z q. Nat) zero (idPair (<_> n) (0 = 1))") == "zero"


def test_refl_is_constant_pair_with_top_flag(ctx):
    v, _ = evaluate(ctx, "refl n")
    assert isinstance(v, E.VIdPair) and v.face.is_top()
    assert E.normal_form(v) == "idPair (<i> n) (1 = 1)"


# -- restriction -------------------------------------------------------------

def test_restriction_under_binder_avoids_capture(ctx):
    # the line <i> p @ (i \/ j); substituting j := i must rename the binder
    p, _ = evaluate(ctx, "p")
    i, j = fresh_dir("i"), fresh_dir("j")
    line = E.SemLine(i, E.papp(p, DNF.var(i).join(DNF.var(j))))
    moved = line.restrict({j: DNF.var(i)})
    assert moved.dir != i
    at0 = moved.at(DNF.zero())
    assert conv(at0, E.papp(p, DNF.var(i)), None)
    assert E.normal_form(at0) != "a"


def test_restriction_to_endpoint_computes(ctx):
    v, _ = evaluate(ctx, "p @ (x /\\ y)")
    x = ctx.env.locals["x"].as_dir()
    assert E.normal_form(E.restrict(v, {x: DNF.zero()})) == "a"


# -- tracing -----------------------------------------------------------------

def test_trace_reports_dispatch(ctx):
    lines: list[str] = []
    with E.tracing(lines.append):
        evaluate(ctx, "comp 0 (<_> Nat * Nat) [(x = 0) -> <_> (zero, n)] (zero, n)")
    assert lines[0].startswith("comp Sigma face=(x = 0) depth=0")
    assert any(l.startswith("comp Nat") and "depth=1" in l for l in lines)


def test_face_of_system():
    top = Face.top()
    assert E.system_face(((top, E.VZero()),)).is_top()
    assert E.system_face(()).is_bot()


def test_readback_of_neutral_application(ctx):
    assert nf(ctx, "h (p @ x)") == "h (p @ x)"
    assert S.parse_term(nf(ctx, "(\\k. suc k : Nat -> Nat) n")) == S.Suc(S.Var("n"))
