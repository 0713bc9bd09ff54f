"""Bidirectional type checking and conversion.

Terms are checked against values.  Bound variables become neutral values
with unique semantic names; bound directions become fresh `DNF` variables.
Every system branch is checked in the context restricted by its conjunct,
so a branch only ever sees the values that hold on its face.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from . import evaluator as E
from . import syntax as S
from .evaluator import (Env, Sys, Value, VGlue, VGlueElem, VId, VIdPair, VLam, VNat,
                        VNeu, VPair, VPath, VPi, VPLam, VSigma, VSum, VU, app, papp,
                        restrict, under, vfst, vsnd)
from .face import BOT, Face, fand, for_
from .interval import DNF, IDir, IJoin, IMeet, INeg, IntervalTerm, fresh_dir

KINDS = ("mismatch", "boundary", "incompatibleSystem", "scope", "notAType", "stuck")


class TypeCheckError(Exception):
    def __init__(self, kind: str, message: str, span: S.Span | None = None,
                 values: tuple[Value, ...] = ()):
        assert kind in KINDS, kind
        super().__init__(message)
        self.kind = kind
        self.message = message
        self.span = span
        self.values = values

    def __str__(self) -> str:
        where = f"{self.span.line}:{self.span.col}: " if self.span else ""
        return f"{where}{self.kind}: {self.message}"


def show_face(phi: Face) -> str:
    return S.show_face(E.readback_face(phi))


def show_value(v: Value) -> str:
    try:
        return E.normal_form(v)
    except Exception:  # printing must never mask the real error
        return f"<{type(v).__name__}>"


# -- contexts --------------------------------------------------------------

@dataclass(frozen=True)
class Context:
    env: Env = field(default_factory=Env)
    types: Mapping[str, Value] = field(default_factory=dict)
    gtypes: Mapping[str, Value] = field(default_factory=dict)

    @staticmethod
    def empty(globals_: dict[str, Value] | None = None,
              gtypes: dict[str, Value] | None = None) -> "Context":
        return Context(Env({}, globals_ if globals_ is not None else {}), {}, gtypes or {})

    def bind(self, name: str, ty: Value) -> tuple["Context", VNeu]:
        x = E.var(fresh_dir(name if name != "_" else "x"), ty)
        types = dict(self.types)
        types[name] = ty
        return Context(self.env.extend(name, x), types, self.gtypes), x

    def bind_dir(self, name: str) -> tuple["Context", DNF]:
        r = DNF.var(fresh_dir(name))
        types = dict(self.types)
        types.pop(name, None)
        return Context(self.env.extend(name, r), types, self.gtypes), r

    def bind_dir_to(self, name: str, r: DNF) -> "Context":
        types = dict(self.types)
        types.pop(name, None)
        return Context(self.env.extend(name, r), types, self.gtypes)

    def is_dir(self, name: str) -> bool:
        return isinstance(self.env.locals.get(name), DNF)

    def lookup(self, name: str) -> tuple[Value, Value] | None:
        if name in self.types:
            v = self.env.locals[name]
            assert not isinstance(v, DNF)
            return v, self.types[name]
        if name in self.env.locals:
            return None
        if name in self.gtypes:
            return self.env.globals[name], self.gtypes[name]
        return None

    def restrict(self, c: Face) -> "Context":
        s = c.subst_map()
        if not s:
            return self
        types = {k: restrict(v, s) for k, v in self.types.items()}
        return Context(self.env.restrict(s), types, self.gtypes)

    def eval(self, t: S.Term) -> Value:
        return E.eval_term(t, self.env)


# -- conversion ------------------------------------------------------------

def conv(a: Value, b: Value, ty: Value | None = None) -> bool:
    """Definitional equality, typed where a type is known."""
    if a is b:
        return True
    match ty:
        case VPi(dom, clo):
            x = E.var(fresh_dir(clo.name), dom)
            return conv(app(a, x), app(b, x), clo.apply(x))
        case VSigma(dom, clo):
            a1, b1 = vfst(a), vfst(b)
            return conv(a1, b1, dom) and conv(vsnd(a), vsnd(b), clo.apply(a1))
        case VPath(t, _, _):
            r = DNF.var(fresh_dir("i"))
            return conv(papp(a, r), papp(b, r), t)
        case VGlue(base, sys):
            fsys = E.glue_funs(sys)
            if not conv(E.unglue(fsys, a), E.unglue(fsys, b), base):
                return False
            return all(conv(under(c, a), under(c, b), vfst(br)) for c, br in sys)
        case VId(t, x, y):
            if isinstance(a, VIdPair) and isinstance(b, VIdPair):
                return a.face == b.face and conv(a.path, b.path, VPath(t, x, y))
    return _conv_untyped(a, b)


def _conv_untyped(a: Value, b: Value) -> bool:
    # eta first: a lambda, pair or path abstraction against anything
    if isinstance(a, VLam) or isinstance(b, VLam):
        x = E.var(fresh_dir("x"), None)
        return conv(app(a, x), app(b, x))
    if isinstance(a, VPair) or isinstance(b, VPair):
        return conv(vfst(a), vfst(b)) and conv(vsnd(a), vsnd(b))
    if isinstance(a, VPLam) or isinstance(b, VPLam):
        r = DNF.var(fresh_dir("i"))
        return conv(papp(a, r), papp(b, r))
    match a, b:
        case (VU(), VU()) | (VNat(), VNat()) | (E.VZero(), E.VZero()):
            return True
        case E.VSuc(x), E.VSuc(y):
            return conv(x, y, VNat())
        case (VPi(a1, c1), VPi(a2, c2)) | (VSigma(a1, c1), VSigma(a2, c2)):
            if type(a) is not type(b) or not conv(a1, a2, VU()):
                return False
            x = E.var(fresh_dir(c1.name), a1)
            return conv(c1.apply(x), c2.apply(x), VU())
        case VSum(a1, b1), VSum(a2, b2):
            return conv(a1, a2, VU()) and conv(b1, b2, VU())
        case E.VInl(x), E.VInl(y):
            return conv(x, y)
        case E.VInr(x), E.VInr(y):
            return conv(x, y)
        case (VPath(t1, x1, y1), VPath(t2, x2, y2)) | (VId(t1, x1, y1), VId(t2, x2, y2)):
            if type(a) is not type(b):
                return False
            return conv(t1, t2, VU()) and conv(x1, x2, t1) and conv(y1, y2, t1)
        case VIdPair(p1, f1), VIdPair(p2, f2):
            return f1 == f2 and conv(p1, p2)
        case VGlue(b1, s1), VGlue(b2, s2):
            return conv(b1, b2, VU()) and conv_sys(s1, s2, lambda u, v: conv(u, v))
        case VGlueElem(s1, b1), VGlueElem(s2, b2):
            return conv(b1, b2) and conv_sys(s1, s2, lambda u, v: conv(u, v))
        case VNeu(n1, t1), VNeu(n2, t2):
            return conv_ne(n1, n2)
    return False


def branch_at(sys: Sys, c: Face) -> Value | None:
    """The value of `sys` on the single conjunct `c`, if `c` is covered."""
    for d, v in E.restrict_sys(sys, c.subst_map()):
        if d.is_top():
            return v
    return None


def conv_sys(s1: Sys, s2: Sys, eq) -> bool:
    if E.system_face(s1) != E.system_face(s2):
        return False
    for c, v in s1:
        w = branch_at(s2, c)
        if w is None or not eq(v, w):
            return False
    return True


def conv_ne(a: E.Neutral, b: E.Neutral) -> bool:
    match a, b:
        case E.NVar(x), E.NVar(y):
            return x == y
        case E.NApp(f1, x1), E.NApp(f2, x2):
            dom = f1.ty.dom if isinstance(f1.ty, VPi) else None
            return conv_ne(f1.ne, f2.ne) and conv(x1, x2, dom)
        case (E.NFst(p1), E.NFst(p2)) | (E.NSnd(p1), E.NSnd(p2)):
            return type(a) is type(b) and conv_ne(p1.ne, p2.ne)
        case E.NPApp(p1, r1), E.NPApp(p2, r2):
            return r1 == r2 and conv_ne(p1.ne, p2.ne)
        case E.NNatRec(m1, z1, s1, n1), E.NNatRec(m2, z2, s2, n2):
            return (conv_ne(n1.ne, n2.ne) and conv(m1, m2) and conv(z1, z2)
                    and conv(s1, s2))
        case E.NCase(m1, l1, r1, x1), E.NCase(m2, l2, r2, x2):
            return (conv_ne(x1.ne, x2.ne) and conv(m1, m2) and conv(l1, l2)
                    and conv(r1, r2))
        case E.NIdJ(m1, b1, p1), E.NIdJ(m2, b2, p2):
            return conv_ne(p1.ne, p2.ne) and conv(m1, m2) and conv(b1, b2)
        case E.NComp(e1, d1, t1, ts1, c1), E.NComp(e2, d2, t2, ts2, c2):
            if e1 != e2:
                return False
            k = DNF.var(fresh_dir("i"))
            ty1, ty2 = restrict(t1, {d1: k}), restrict(t2, {d2: k})
            if not conv(ty1, ty2, VU()):
                return False
            cap_ty = restrict(t1, {d1: DNF.const(e1)})
            if not conv(c1, c2, cap_ty):
                return False

            def eq(u: Value, v: Value) -> bool:
                return conv(restrict(u, {d1: k}), restrict(v, {d2: k}))
            return conv_sys(ts1, ts2, eq)
        case E.NUnglue(_, g1), E.NUnglue(_, g2):
            return conv_ne(g1.ne, g2.ne)
    return False


# -- checking --------------------------------------------------------------

GLUE_BRANCH = S.parse_term(
    "(A : U) * (f : A -> B) * ((b : B) -> (c : (a : A) * Path B (f a) b)"
    " * ((x : (a : A) * Path B (f a) b) -> Path ((a : A) * Path B (f a) b) c x))")

_NATREC_STEP = S.parse_term("(k : Nat) -> m k -> m (suc k)")
_CASE_MOTIVE = S.parse_term("Sum A B -> U")
_CASE_LEFT = S.parse_term("(a : A) -> m (inl a)")
_CASE_RIGHT = S.parse_term("(b : B) -> m (inr b)")
_J_MOTIVE = S.parse_term("(z : A) -> Id A x z -> U")


def _template(t: S.Term, **vals: Value) -> Value:
    return E.eval_term(t, Env(dict(vals)))


def glue_branch_type(base: Value) -> Value:
    return _template(GLUE_BRANCH, B=base)


def _err(kind: str, msg: str, t: S.Term | None, *values: Value) -> TypeCheckError:
    return TypeCheckError(kind, msg, t.span if t is not None else None, values)


def check(ctx: Context, t: S.Term, ty: Value) -> None:
    try:
        _check(ctx, t, ty)
    except TypeCheckError as err:
        if err.span is None:
            err.span = t.span
        raise
    except E.EvalError as err:
        raise _err("stuck", str(err), t) from None


def infer(ctx: Context, t: S.Term) -> Value:
    try:
        return _infer(ctx, t)
    except TypeCheckError as err:
        if err.span is None:
            err.span = t.span
        raise
    except E.EvalError as err:
        raise _err("stuck", str(err), t) from None


def check_type(ctx: Context, t: S.Term) -> Value:
    try:
        check(ctx, t, VU())
    except TypeCheckError as err:
        if err.kind == "mismatch" and err.span == t.span:
            raise _err("notAType", f"expected a type, got {S.show(t)}", t) from None
        raise
    return ctx.eval(t)


def expect_conv(a: Value, b: Value, ty: Value | None, t: S.Term, kind: str, what: str) -> None:
    if not conv(a, b, ty):
        raise _err(kind, f"{what}: {show_value(a)} is not {show_value(b)}", t, a, b)


def _check(ctx: Context, t: S.Term, ty: Value) -> None:
    match t, ty:
        case S.Lam(n, body), VPi(dom, clo):
            ctx2, x = ctx.bind(n, dom)
            check(ctx2, body, clo.apply(x))
        case S.Pair(a, b), VSigma(dom, clo):
            check(ctx, a, dom)
            check(ctx, b, clo.apply(ctx.eval(a)))
        case S.PLam(n, body), VPath(a, x, y):
            ctx2, r = ctx.bind_dir(n)
            check(ctx2, body, a)
            d = r.as_dir()
            v = ctx2.eval(body)
            expect_conv(restrict(v, {d: DNF.zero()}), x, a, t, "boundary", "left endpoint")
            expect_conv(restrict(v, {d: DNF.one()}), y, a, t, "boundary", "right endpoint")
        case S.Inl(a), VSum(left, _):
            check(ctx, a, left)
        case S.Inr(b), VSum(_, right):
            check(ctx, b, right)
        case S.Refl(a), VId(base, x, y):
            check(ctx, a, base)
            v = ctx.eval(a)
            expect_conv(v, x, base, t, "boundary", "left endpoint of refl")
            expect_conv(v, y, base, t, "boundary", "right endpoint of refl")
        case S.IdPair(p, phi), VId(base, x, y):
            check(ctx, p, VPath(base, x, y))
            check_face(ctx, phi, t)
            pv = ctx.eval(p)
            for c in E.eval_face(phi, ctx.env).split():
                r = DNF.var(fresh_dir("i"))
                expect_conv(papp(under(c, pv), r), under(c, x), under(c, base), t,
                            "boundary", "path is not constant on its flag")
        case S.GlueIntro(sys, b), VGlue(base, gsys):
            check_glue_intro(ctx, t, sys, b, base, gsys)
        case S.GlueIntro(sys, b), _ if _total(ctx, sys, t):
            # the Glue type has collapsed to its partial type, and so does glue
            infer(ctx, b)
            for c, body in _branches(ctx, sys, t):
                check(ctx.restrict(c), body, under(c, ty))
        case _:
            got = infer(ctx, t)
            if not conv(got, ty, VU()):
                raise _err("mismatch", f"expected {show_value(ty)}, got {show_value(got)}",
                           t, ty, got)


def _total(ctx: Context, sys: S.System, t: S.Term) -> bool:
    face = BOT
    for c, _ in _branches(ctx, sys, t):
        face = for_(face, c)
    return face.is_top()


def check_interval(ctx: Context, r: IntervalTerm, t: S.Term) -> None:
    match r:
        case IDir(n):
            if not ctx.is_dir(n):
                raise _err("scope", f"{n} is not a direction in scope", t)
        case INeg(a):
            check_interval(ctx, a, t)
        case IMeet(a, b) | IJoin(a, b):
            check_interval(ctx, a, t)
            check_interval(ctx, b, t)


def check_face(ctx: Context, phi: S.FaceTerm, t: S.Term) -> None:
    match phi:
        case S.FEq(r, _):
            check_interval(ctx, r, t)
        case S.FAnd(a, b) | S.FOr(a, b):
            check_face(ctx, a, t)
            check_face(ctx, b, t)
        case S.FForall(n, body):
            check_face(ctx.bind_dir(n)[0], body, t)


def _branches(ctx: Context, sys: S.System, t: S.Term) -> list[tuple[Face, S.Term]]:
    out = []
    for phi, body in sys.branches:
        check_face(ctx, phi, t)
        for c in E.eval_face(phi, ctx.env).split():
            out.append((c, body))
    return out


def check_compatible(branches: list[tuple[Face, Value]], eq, t: S.Term) -> None:
    for (c1, v1), (c2, v2) in itertools.combinations(branches, 2):
        for m in fand(c1, c2).split():
            if not eq(m, under(m, v1), under(m, v2)):
                raise _err("incompatibleSystem",
                           f"branches on {show_face(c1)} and {show_face(c2)} disagree on {show_face(m)}", t, v1, v2)


def check_tubes(ctx: Context, sys: S.System, line: Value, t: S.Term) -> Sys:
    """Check each tube as a line in `line` under its conjunct."""
    out: list[tuple[Face, Value]] = []
    for c, body in _branches(ctx, sys, t):
        cctx = ctx.restrict(c)
        lc = under(c, line)
        if isinstance(body, S.PLam):
            ictx, r = cctx.bind_dir(body.name)
            check(ictx, body.body, papp(lc, r))
        else:
            got = infer(cctx, body)
            if not isinstance(got, VPath):
                raise _err("mismatch", f"tube {S.show(body)} is not a line", body, got)
            r = DNF.var(fresh_dir("i"))
            ends = (papp(lc, DNF.zero()), papp(lc, DNF.one()), papp(lc, r))
            if not all(conv(got.ty, x, VU()) for x in ends):
                raise _err("mismatch", "tube type does not match the composition line",
                           body, got.ty, papp(lc, r))
        out.append((c, cctx.eval(body)))

    def eq(m: Face, u: Value, v: Value) -> bool:
        return conv(u, v, VPath(*_line_path(under(m, line))))
    check_compatible(out, eq, t)
    return tuple(out)


def _line_path(line: Value) -> tuple[Value, Value, Value]:
    # only the element type matters for comparing lines pointwise
    r = DNF.var(fresh_dir("i"))
    ty = papp(line, r)
    return ty, papp(line, DNF.zero()), papp(line, DNF.one())


def _comp_type(ctx: Context, t: S.Term, e: int, line_t: S.Term, sys: S.System,
               cap: S.Term) -> tuple[Value, Sys]:
    lt = infer(ctx, line_t)
    if not (isinstance(lt, VPath) and isinstance(lt.ty, VU)):
        raise _err("notAType", f"composition line must be a path of types, got "
                   f"{show_value(lt)}", line_t, lt)
    line = ctx.eval(line_t)
    check(ctx, cap, papp(line, DNF.const(e)))
    capv = ctx.eval(cap)
    tubes = check_tubes(ctx, sys, line, t)
    for c, tube in tubes:
        at_e = papp(tube, DNF.const(e))
        if not conv(at_e, under(c, capv), papp(under(c, line), DNF.const(e))):
            raise _err("boundary", f"tube on {show_face(c)} does not agree with the cap: "
                       f"{show_value(at_e)} is not {show_value(under(c, capv))}",
                       cap, at_e, capv)
    return line, tubes


def check_glue_intro(ctx: Context, t: S.Term, sys: S.System, b: S.Term, base: Value,
                     gsys: Sys) -> None:
    check(ctx, b, base)
    bv = ctx.eval(b)
    out: list[tuple[Face, Value]] = []
    for c, body in _branches(ctx, sys, t):
        br = branch_at(gsys, c)
        if br is None:
            raise _err("boundary", f"glue branch on {show_face(c)} is outside the glued face", body)
        cctx = ctx.restrict(c)
        check(cctx, body, vfst(br))
        a = cctx.eval(body)
        fa = app(vfst(vsnd(br)), a)
        expect_conv(fa, under(c, bv), under(c, base), body, "boundary",
                    "glued element does not map to the base")
        out.append((c, a))
    face = BOT
    for c, _ in out:
        face = for_(face, c)
    if face != E.system_face(gsys):
        raise _err("boundary", f"glue system face {show_face(face)} does not match the type's face "
                   f"{show_face(E.system_face(gsys))}", t)
    check_compatible(out, lambda m, u, v: conv(u, v), t)


def _infer(ctx: Context, t: S.Term) -> Value:
    match t:
        case S.Var(n):
            found = ctx.lookup(n)
            if found is None:
                if ctx.is_dir(n):
                    raise _err("scope", f"{n} is a direction, not a term", t)
                raise _err("scope", f"unbound variable {n}", t)
            return found[1]
        case S.Universe():
            return VU()
        case S.Pi(n, a, b) | S.Sigma(n, a, b):
            av = check_type(ctx, a)
            check_type(ctx.bind(n, av)[0], b)
            return VU()
        case S.App(f, a):
            ft = infer(ctx, f)
            if not isinstance(ft, VPi):
                raise _err("mismatch", f"{S.show(f)} is not a function, its type is "
                           f"{show_value(ft)}", f, ft)
            check(ctx, a, ft.dom)
            return ft.clo.apply(ctx.eval(a))
        case S.Fst(p) | S.Snd(p):
            pt = infer(ctx, p)
            if not isinstance(pt, VSigma):
                raise _err("mismatch", f"{S.show(p)} is not a pair, its type is "
                           f"{show_value(pt)}", p, pt)
            if isinstance(t, S.Fst):
                return pt.dom
            return pt.clo.apply(vfst(ctx.eval(p)))
        case S.Nat():
            return VU()
        case S.Zero():
            return VNat()
        case S.Suc(n):
            check(ctx, n, VNat())
            return VNat()
        case S.NatRec(m, z, s, n):
            check(ctx, m, VPi(VNat(), E.ConstClo(VU())))
            mv = ctx.eval(m)
            check(ctx, z, app(mv, E.VZero()))
            check(ctx, s, _template(_NATREC_STEP, m=mv))
            check(ctx, n, VNat())
            return app(mv, ctx.eval(n))
        case S.Sum(a, b):
            check_type(ctx, a)
            check_type(ctx, b)
            return VU()
        case S.Case(m, l, r, x):
            xt = infer(ctx, x)
            if not isinstance(xt, VSum):
                raise _err("mismatch", f"case target has type {show_value(xt)}, "
                           "expected a sum", x, xt)
            check(ctx, m, _template(_CASE_MOTIVE, A=xt.left, B=xt.right))
            mv = ctx.eval(m)
            check(ctx, l, _template(_CASE_LEFT, A=xt.left, m=mv))
            check(ctx, r, _template(_CASE_RIGHT, B=xt.right, m=mv))
            return app(mv, ctx.eval(x))
        case S.PathT(a, x, y) | S.IdT(a, x, y):
            av = check_type(ctx, a)
            check(ctx, x, av)
            check(ctx, y, av)
            return VU()
        case S.PLam(n, body):
            ctx2, r = ctx.bind_dir(n)
            bt = infer(ctx2, body)
            d = r.as_dir()
            b0 = restrict(bt, {d: DNF.zero()})
            if not conv(bt, b0, VU()):
                raise _err("mismatch", "the type of a path abstraction must not depend "
                           "on its direction", t, bt)
            v = ctx2.eval(body)
            return VPath(b0, restrict(v, {d: DNF.zero()}), restrict(v, {d: DNF.one()}))
        case S.PApp(S.PLam(n, body), r):
            # an applied abstraction is typed by binding its direction to the
            # argument, which also covers squares whose sides vary
            check_interval(ctx, r, t)
            return infer(ctx.bind_dir_to(n, E.eval_interval(r, ctx.env)), body)
        case S.PApp(S.PApp() as inner, r) if _applied_plam(inner):
            check_interval(ctx, r, t)
            head, args = _spine(t)
            ctx2 = ctx.bind_dir_to(head.name, E.eval_interval(args[0], ctx.env))
            rest: S.Term = head.body
            for a in args[1:]:
                rest = S.PApp(rest, a, span=t.span)
            return infer(ctx2, rest)
        case S.PApp(p, r):
            check_interval(ctx, r, t)
            pt = infer(ctx, p)
            if not isinstance(pt, VPath):
                raise _err("mismatch", f"{S.show(p)} is not a path, its type is "
                           f"{show_value(pt)}", p, pt)
            return pt.ty
        case S.IdPair(p, phi):
            pt = infer(ctx, p)
            if not isinstance(pt, VPath):
                raise _err("mismatch", f"{S.show(p)} is not a path", p, pt)
            ty = VId(pt.ty, pt.lhs, pt.rhs)
            check(ctx, t, ty)
            return ty
        case S.Refl(a):
            at = infer(ctx, a)
            v = ctx.eval(a)
            return VId(at, v, v)
        case S.IdJ(m, b, p):
            pt = infer(ctx, p)
            if not isinstance(pt, VId):
                raise _err("mismatch", f"J target has type {show_value(pt)}, expected "
                           "an identity type", p, pt)
            check(ctx, m, _template(_J_MOTIVE, A=pt.ty, x=pt.lhs))
            mv = ctx.eval(m)
            check(ctx, b, app(app(mv, pt.lhs), E.refl(pt.lhs)))
            return app(app(mv, pt.rhs), ctx.eval(p))
        case S.Comp(e, line, sys, cap):
            lv, _ = _comp_type(ctx, t, e, line, sys, cap)
            return papp(lv, DNF.const(1 - e))
        case S.Fill(e, line, sys, cap, r):
            check_interval(ctx, r, t)
            lv, _ = _comp_type(ctx, t, e, line, sys, cap)
            return papp(lv, E.eval_interval(r, ctx.env))
        case S.GlueT(b, sys):
            bv = check_type(ctx, b)
            out = []
            for c, body in _branches(ctx, sys, t):
                cctx = ctx.restrict(c)
                check(cctx, body, glue_branch_type(under(c, bv)))
                out.append((c, cctx.eval(body)))
            check_compatible(out, lambda m, u, v: conv(u, v), t)
            return VU()
        case S.Unglue(sys, g):
            gt = infer(ctx, g)
            fs = []
            for c, body in _branches(ctx, sys, t):
                cctx = ctx.restrict(c)
                fs.append((c, body, cctx))
            if not isinstance(gt, VGlue):
                if len(fs) == 1 and fs[0][0].is_top():
                    ft = infer(ctx, fs[0][1])
                    if isinstance(ft, VPi) and conv(ft.dom, gt, VU()):
                        return ft.clo.apply(ctx.eval(g))
                raise _err("mismatch", f"unglue argument has type {show_value(gt)}, "
                           "expected a Glue type", g, gt)
            face = BOT
            for c, body, cctx in fs:
                br = branch_at(gt.sys, c)
                if br is None:
                    raise _err("boundary", f"unglue branch on {show_face(c)} is outside the glued face",
                               body)
                a_ty, f = vfst(br), vfst(vsnd(br))
                check(cctx, body, VPi(a_ty, E.ConstClo(under(c, gt.base))))
                expect_conv(cctx.eval(body), f, None, body, "mismatch",
                            "unglue function differs from the glued one")
                face = for_(face, c)
            if face != E.system_face(gt.sys):
                raise _err("boundary", f"unglue face {show_face(face)} does not match "
                           f"{show_face(E.system_face(gt.sys))}", t)
            return gt.base
        case S.Ann(a, ty):
            tv = check_type(ctx, ty)
            check(ctx, a, tv)
            return tv
        case S.Lam() | S.Pair() | S.Inl() | S.Inr() | S.GlueIntro():
            raise _err("mismatch", f"cannot infer a type for {S.show(t)}; "
                       "add an annotation", t)
    raise _err("mismatch", f"cannot infer a type for {S.show(t)}", t)


def _spine(t: S.Term) -> tuple[S.PLam, list[IntervalTerm]]:
    args: list[IntervalTerm] = []
    while isinstance(t, S.PApp):
        args.append(t.r)
        t = t.path
    assert isinstance(t, S.PLam)
    return t, args[::-1]


def _applied_plam(t: S.Term) -> bool:
    while isinstance(t, S.PApp):
        t = t.path
    return isinstance(t, S.PLam)


# -- programs --------------------------------------------------------------

@dataclass
class Program:
    """Checked global definitions: values and their types, in order."""
    values: dict[str, Value] = field(default_factory=dict)
    types: dict[str, Value] = field(default_factory=dict)
    order: list[str] = field(default_factory=list)

    def context(self) -> Context:
        return Context.empty(self.values, self.types)

    def copy(self) -> "Program":
        return Program(dict(self.values), dict(self.types), list(self.order))


def check_definition(prog: Program, d: S.Definition) -> None:
    if d.name in prog.values:
        raise TypeCheckError("scope", f"{d.name} is already defined", d.span)
    ctx = prog.context()
    try:
        ty = check_type(ctx, d.ty)
        check(ctx, d.body, ty)
        val = ctx.eval(d.body)
    except TypeCheckError as err:
        if err.span is None:
            err.span = d.span
        raise
    prog.values[d.name] = val
    prog.types[d.name] = ty
    prog.order.append(d.name)


def check_program(defs: Iterable[S.Definition], prog: Program | None = None) -> Program:
    prog = prog if prog is not None else Program()
    for d in defs:
        check_definition(prog, d)
    return prog


def infer_closed(prog: Program, t: S.Term) -> tuple[Value, Value]:
    """Infer and evaluate a closed term against the globals of `prog`."""
    ctx = prog.context()
    ty = infer(ctx, t)
    return ctx.eval(t), ty
