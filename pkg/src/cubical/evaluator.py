"""Normalization by evaluation with free directions.

Values are weak head normal forms.  Free directions live inside values as
`DNF`s and faces; restriction along a cube morphism is substitution and is
pushed through every value former, re-running eliminators and compositions
whose inputs may have become canonical.

Composition is dispatched on the head of the type line.  A composition
problem is (e, d, T, tubes, cap): T and the tubes mention the bound direction
d, the cap lives at d = e and the answer lives at d = 1 - e.  Every tube is
stored under a single conjunct and is already restricted by it, so any value
from outside the tube must be restricted by that conjunct before the two are
combined.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping, Union

from . import syntax as S
from .face import (BOT, TOP, Face, compose_subst, face_eq, fand, for_, forall_dir,
                   fsubst)
from .interval import (DNF, IDir, IJoin, IMeet, INeg, IntervalTerm, IOne, IZero,
                       display_name, fresh_dir)


class EvalError(Exception):
    """Raised when evaluation meets an ill-typed combination of values."""


Subst = Mapping[str, DNF]


# -- values ----------------------------------------------------------------

class Value:
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class VU(Value):
    pass


@dataclass(frozen=True, eq=False)
class VNat(Value):
    pass


@dataclass(frozen=True, eq=False)
class VZero(Value):
    pass


@dataclass(frozen=True, eq=False)
class VSuc(Value):
    arg: Value


@dataclass(frozen=True, eq=False)
class VPi(Value):
    dom: Value
    clo: "Closure"


@dataclass(frozen=True, eq=False)
class VLam(Value):
    clo: "Closure"


@dataclass(frozen=True, eq=False)
class VSigma(Value):
    dom: Value
    clo: "Closure"


@dataclass(frozen=True, eq=False)
class VPair(Value):
    fst: Value
    snd: Value


@dataclass(frozen=True, eq=False)
class VSum(Value):
    left: Value
    right: Value


@dataclass(frozen=True, eq=False)
class VInl(Value):
    arg: Value


@dataclass(frozen=True, eq=False)
class VInr(Value):
    arg: Value


@dataclass(frozen=True, eq=False)
class VPath(Value):
    ty: Value
    lhs: Value
    rhs: Value


@dataclass(frozen=True, eq=False)
class VPLam(Value):
    line: "Line"


@dataclass(frozen=True, eq=False)
class VId(Value):
    ty: Value
    lhs: Value
    rhs: Value


@dataclass(frozen=True, eq=False)
class VIdPair(Value):
    path: Value
    face: Face


@dataclass(frozen=True, eq=False)
class VGlue(Value):
    """Glue B [c -> (A, f, equiv)], never with a top branch."""
    base: Value
    sys: "Sys"


@dataclass(frozen=True, eq=False)
class VGlueElem(Value):
    sys: "Sys"
    base: Value


@dataclass(frozen=True, eq=False)
class VNeu(Value):
    ne: "Neutral"
    ty: Value | None


# A system is a tuple of (single-conjunct face, value under that face).
Sys = tuple[tuple[Face, Value], ...]


# -- neutrals --------------------------------------------------------------

class Neutral:
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class NVar(Neutral):
    name: str


@dataclass(frozen=True, eq=False)
class NApp(Neutral):
    fn: VNeu
    arg: Value


@dataclass(frozen=True, eq=False)
class NFst(Neutral):
    arg: VNeu


@dataclass(frozen=True, eq=False)
class NSnd(Neutral):
    arg: VNeu


@dataclass(frozen=True, eq=False)
class NPApp(Neutral):
    path: VNeu
    r: DNF


@dataclass(frozen=True, eq=False)
class NNatRec(Neutral):
    motive: Value
    zero: Value
    succ: Value
    target: VNeu


@dataclass(frozen=True, eq=False)
class NCase(Neutral):
    motive: Value
    left: Value
    right: Value
    target: VNeu


@dataclass(frozen=True, eq=False)
class NIdJ(Neutral):
    motive: Value
    base: Value
    target: VNeu


@dataclass(frozen=True, eq=False)
class NComp(Neutral):
    e: int
    dir: str
    ty: Value
    tubes: Sys
    cap: Value


@dataclass(frozen=True, eq=False)
class NUnglue(Neutral):
    sys: Sys
    arg: VNeu


def var(name: str, ty: Value | None) -> VNeu:
    return VNeu(NVar(name), ty)


# -- environments and closures ---------------------------------------------

Binding = Union[Value, DNF]


class Env:
    """Local bindings (values and directions) plus a shared global table."""

    __slots__ = ("locals", "globals", "_fd")

    def __init__(self, locals_: dict[str, Binding] | None = None,
                 globals_: Mapping[str, Value] | None = None):
        self.locals = locals_ or {}
        self.globals = globals_ if globals_ is not None else {}
        self._fd: frozenset[str] | None = None

    def extend(self, name: str, v: Binding) -> "Env":
        d = dict(self.locals)
        d[name] = v
        return Env(d, self.globals)

    def lookup(self, name: str) -> Binding:
        if name in self.locals:
            return self.locals[name]
        if name in self.globals:
            return self.globals[name]
        raise EvalError(f"unbound name {name}")

    def free_dirs(self) -> frozenset[str]:
        if self._fd is None:
            out: set[str] = set()
            for v in self.locals.values():
                out |= v.dirs() if isinstance(v, DNF) else free_dirs(v)
            self._fd = frozenset(out)
        return self._fd

    def restrict(self, s: Subst) -> "Env":
        if not s or not self.locals or self.free_dirs().isdisjoint(s):
            return self
        d: dict[str, Binding] = {}
        for k, v in self.locals.items():
            d[k] = v.subst(s) if isinstance(v, DNF) else restrict(v, s)
        return Env(d, self.globals)


class Closure:
    name: str

    def apply(self, v: Value) -> Value:
        raise NotImplementedError

    def restrict(self, s: Subst) -> "Closure":
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Clo(Closure):
    env: Env
    name: str
    body: S.Term

    def apply(self, v: Value) -> Value:
        return eval_term(self.body, self.env.extend(self.name, v))

    def restrict(self, s: Subst) -> "Clo":
        return Clo(self.env.restrict(s), self.name, self.body)


@dataclass(frozen=True, eq=False)
class ConstClo(Closure):
    value: Value
    name: str = "_"

    def apply(self, v: Value) -> Value:
        return self.value

    def restrict(self, s: Subst) -> "ConstClo":
        return ConstClo(restrict(self.value, s), self.name)


class Line:
    name: str

    def at(self, r: DNF) -> Value:
        raise NotImplementedError

    def restrict(self, s: Subst) -> "Line":
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class DirClo(Line):
    env: Env
    name: str
    body: S.Term

    def at(self, r: DNF) -> Value:
        return eval_term(self.body, self.env.extend(self.name, r))

    def restrict(self, s: Subst) -> "DirClo":
        return DirClo(self.env.restrict(s), self.name, self.body)


@dataclass(frozen=True, eq=False)
class SemLine(Line):
    """A value in which the direction `dir` is bound."""
    dir: str
    value: Value

    @property
    def name(self) -> str:
        return display_name(self.dir)

    def at(self, r: DNF) -> Value:
        return restrict(self.value, {self.dir: r})

    def restrict(self, s: Subst) -> "SemLine":
        d, sub = rebind(self.dir, s)
        return SemLine(d, restrict(self.value, sub))


@dataclass(frozen=True, eq=False)
class ConstLine(Line):
    value: Value
    name: str = "_"

    def at(self, r: DNF) -> Value:
        return self.value

    def restrict(self, s: Subst) -> "ConstLine":
        return ConstLine(restrict(self.value, s), self.name)


def rebind(d: str, s: Subst) -> tuple[str, dict[str, DNF]]:
    """Push a substitution under a binder for `d`, renaming if needed."""
    clash = d in s or any(d in r.dirs() for r in s.values())
    if not clash:
        return d, dict(s)
    d2 = fresh_dir(d)
    sub = dict(s)
    sub[d] = DNF.var(d2)
    return d2, sub


# -- restriction -----------------------------------------------------------

_NO_DIRS: frozenset[str] = frozenset()


def free_dirs(x) -> frozenset[str]:
    """Directions that occur free in a value, closure, line or neutral (cached)."""
    try:
        return x.__dict__["_fd"]
    except KeyError:
        pass
    fd = _free_dirs(x)
    object.__setattr__(x, "_fd", fd)
    return fd


def _sys_dirs(sys: Sys) -> frozenset[str]:
    out: frozenset[str] = _NO_DIRS
    for c, v in sys:
        out = out | c.dirs() | free_dirs(v)
    return out


def _free_dirs(x) -> frozenset[str]:
    match x:
        case VU() | VNat() | VZero() | NVar():
            return _NO_DIRS
        case VSuc(a) | VInl(a) | VInr(a) | NFst(a) | NSnd(a):
            return free_dirs(a)
        case VPi(a, c) | VSigma(a, c):
            return free_dirs(a) | free_dirs(c)
        case VLam(c) | VPLam(c):
            return free_dirs(c)
        case VPair(a, b) | VSum(a, b) | NApp(a, b):
            return free_dirs(a) | free_dirs(b)
        case VPath(a, l, r) | VId(a, l, r):
            return free_dirs(a) | free_dirs(l) | free_dirs(r)
        case VIdPair(p, phi):
            return free_dirs(p) | phi.dirs()
        case VGlue(b, sys) | VGlueElem(sys, b):
            return free_dirs(b) | _sys_dirs(sys)
        case VNeu(ne, ty):
            return free_dirs(ne) | (free_dirs(ty) if ty is not None else _NO_DIRS)
        case NPApp(p, r):
            return free_dirs(p) | r.dirs()
        case NNatRec(a, b, c, t) | NCase(a, b, c, t):
            return free_dirs(a) | free_dirs(b) | free_dirs(c) | free_dirs(t)
        case NIdJ(a, b, t):
            return free_dirs(a) | free_dirs(b) | free_dirs(t)
        case NComp(_, d, ty, tubes, cap):
            return ((free_dirs(ty) | _sys_dirs(tubes)) - {d}) | free_dirs(cap)
        case NUnglue(sys, g):
            return _sys_dirs(sys) | free_dirs(g)
        case Clo(env) | DirClo(env):
            return env.free_dirs()
        case ConstClo(v) | ConstLine(v):
            return free_dirs(v)
        case SemLine(d, v):
            return free_dirs(v) - {d}
        case CompPiClo(_, d, ty, tubes, cap):
            return ((free_dirs(ty) | _sys_dirs(tubes)) - {d}) | free_dirs(cap)
    raise EvalError(f"free directions of {x!r}")


def restrict(v: Value, s: Subst) -> Value:
    if not s:
        return v
    fd = free_dirs(v)
    if fd.isdisjoint(s):
        return v
    if not fd.issuperset(s):
        s = {k: r for k, r in s.items() if k in fd}
    match v:
        case VU() | VNat() | VZero():
            return v
        case VSuc(a):
            return VSuc(restrict(a, s))
        case VPi(a, c):
            return VPi(restrict(a, s), c.restrict(s))
        case VLam(c):
            return VLam(c.restrict(s))
        case VSigma(a, c):
            return VSigma(restrict(a, s), c.restrict(s))
        case VPair(a, b):
            return VPair(restrict(a, s), restrict(b, s))
        case VSum(a, b):
            return VSum(restrict(a, s), restrict(b, s))
        case VInl(a):
            return VInl(restrict(a, s))
        case VInr(a):
            return VInr(restrict(a, s))
        case VPath(a, x, y):
            return VPath(restrict(a, s), restrict(x, s), restrict(y, s))
        case VPLam(line):
            return VPLam(line.restrict(s))
        case VId(a, x, y):
            return VId(restrict(a, s), restrict(x, s), restrict(y, s))
        case VIdPair(p, phi):
            return VIdPair(restrict(p, s), fsubst(phi, s))
        case VGlue(b, sys):
            return glue_type(restrict(b, s), restrict_sys(sys, s))
        case VGlueElem(sys, b):
            return glue_intro(restrict_sys(sys, s), restrict(b, s))
        case VNeu(ne, ty):
            return restrict_ne(ne, ty, s)
    raise EvalError(f"cannot restrict {v!r}")


def restrict_sys(sys: Sys, s: Subst) -> Sys:
    if not s:
        return sys
    out: list[tuple[Face, Value]] = []
    for c, v in sys:
        c2 = fsubst(c, s)
        for d in c2.split():
            out.append((d, restrict(v, compose_subst(s, d.subst_map()))))
    return tuple(out)


def restrict_ne(ne: Neutral, ty: Value | None, s: Subst) -> Value:
    match ne:
        case NVar():
            return VNeu(ne, None if ty is None else restrict(ty, s))
        case NApp(f, a):
            return app(restrict(f, s), restrict(a, s))
        case NFst(p):
            return vfst(restrict(p, s))
        case NSnd(p):
            return vsnd(restrict(p, s))
        case NPApp(p, r):
            return papp(restrict(p, s), r.subst(s))
        case NNatRec(m, z, f, n):
            return natrec(restrict(m, s), restrict(z, s), restrict(f, s), restrict(n, s))
        case NCase(m, l, r, x):
            return case(restrict(m, s), restrict(l, s), restrict(r, s), restrict(x, s))
        case NIdJ(m, b, p):
            return idj(restrict(m, s), restrict(b, s), restrict(p, s))
        case NComp(e, d, t, tubes, cap):
            d2, sub = rebind(d, s)
            return comp(e, d2, restrict(t, sub), restrict_sys(tubes, sub), restrict(cap, s))
        case NUnglue(sys, g):
            return unglue(restrict_sys(sys, s), restrict(g, s))
    raise EvalError(f"cannot restrict neutral {ne!r}")


def under(c: Face, v: Value) -> Value:
    """Restrict `v` to the single-conjunct face `c`."""
    return restrict(v, c.subst_map())


# -- eliminators -----------------------------------------------------------

def app(f: Value, a: Value) -> Value:
    match f:
        case VLam(c):
            return c.apply(a)
        case VNeu(_, ty):
            cod = ty.clo.apply(a) if isinstance(ty, VPi) else None
            return VNeu(NApp(f, a), cod)
    raise EvalError(f"cannot apply {type(f).__name__}")


def vfst(p: Value) -> Value:
    match p:
        case VPair(a, _):
            return a
        case VNeu(_, ty):
            return VNeu(NFst(p), ty.dom if isinstance(ty, VSigma) else None)
    raise EvalError(f"first projection of {type(p).__name__}")


def vsnd(p: Value) -> Value:
    match p:
        case VPair(_, b):
            return b
        case VNeu(_, ty):
            t = ty.clo.apply(vfst(p)) if isinstance(ty, VSigma) else None
            return VNeu(NSnd(p), t)
    raise EvalError(f"second projection of {type(p).__name__}")


def papp(p: Value, r: DNF) -> Value:
    match p:
        case VPLam(line):
            return line.at(r)
        case VNeu(_, ty):
            ep = r.endpoint()
            if isinstance(ty, VPath):
                if ep == 0:
                    return ty.lhs
                if ep == 1:
                    return ty.rhs
                return VNeu(NPApp(p, r), ty.ty)
            return VNeu(NPApp(p, r), None)
    raise EvalError(f"path application of {type(p).__name__}")


def natrec(m: Value, z: Value, s: Value, n: Value) -> Value:
    match n:
        case VZero():
            return z
        case VSuc(k):
            return app(app(s, k), natrec(m, z, s, k))
        case VNeu():
            return VNeu(NNatRec(m, z, s, n), app(m, n))
    raise EvalError(f"natrec on {type(n).__name__}")


def case(m: Value, l: Value, r: Value, x: Value) -> Value:
    match x:
        case VInl(a):
            return app(l, a)
        case VInr(b):
            return app(r, b)
        case VNeu():
            return VNeu(NCase(m, l, r, x), app(m, x))
    raise EvalError(f"case on {type(x).__name__}")


def idj(m: Value, b: Value, p: Value) -> Value:
    """J by composition over the family B(p(i), q(i)) with face the flag."""
    match p:
        case VIdPair(path, phi):
            i, j = fresh_dir("i"), fresh_dir("j")
            vi = DNF.var(i)
            q = VIdPair(VPLam(SemLine(j, papp(path, vi.meet(DNF.var(j))))),
                        for_(phi, Face.atom(i, 0)))
            ty = app(app(m, papp(path, vi)), q)
            tubes = tuple((c, under(c, b)) for c in phi.split())
            return comp(0, i, ty, tubes, b)
        case VNeu(_, ty):
            out = app(app(m, ty.rhs), p) if isinstance(ty, VId) else None
            return VNeu(NIdJ(m, b, p), out)
    raise EvalError(f"J on {type(p).__name__}")


# -- glueing ---------------------------------------------------------------

def glue_type(b: Value, sys: Sys) -> Value:
    for c, br in sys:
        if c.is_top():
            return vfst(br)
    return VGlue(b, sys)


def glue_intro(sys: Sys, b: Value) -> Value:
    for c, a in sys:
        if c.is_top():
            return a
    return VGlueElem(sys, b)


def unglue(fsys: Sys, g: Value) -> Value:
    for c, f in fsys:
        if c.is_top():
            return app(f, g)
    match g:
        case VGlueElem(_, b):
            return b
        case VNeu(_, ty):
            return VNeu(NUnglue(fsys, g), ty.base if isinstance(ty, VGlue) else None)
    raise EvalError(f"unglue of {type(g).__name__}")


def glue_funs(sys: Sys) -> Sys:
    return tuple((c, vfst(vsnd(br))) for c, br in sys)


def system_face(sys: Sys) -> Face:
    out = BOT
    for c, _ in sys:
        out = for_(out, c)
    return out


# -- tracing ---------------------------------------------------------------

_tracer: Callable[[str], None] | None = None
_depth = 0


@contextlib.contextmanager
def tracing(callback: Callable[[str], None]) -> Iterator[None]:
    global _tracer
    old = _tracer
    _tracer = callback
    try:
        yield
    finally:
        _tracer = old


def _head_name(t: Value) -> str:
    return {VNat: "Nat", VSigma: "Sigma", VPi: "Pi", VPath: "Path", VSum: "Sum",
            VId: "Id", VGlue: "Glue", VU: "U", VNeu: "neutral"}.get(type(t), type(t).__name__)


# -- composition and filling -----------------------------------------------

def comp(e: int, d: str, ty: Value, tubes: Sys, cap: Value) -> Value:
    """Compose from d = e to d = 1 - e in the line `ty` (bound direction d)."""
    global _depth
    ebar = 1 - e
    if _tracer is not None:
        face = S.show_face(readback_face(system_face(tubes)))
        _tracer(f"comp {_head_name(ty)} face={face} depth={_depth}")
    for c, t in tubes:
        if c.is_top():
            return restrict(t, {d: DNF.const(ebar)})
    _depth += 1
    try:
        return _comp(e, d, ty, tubes, cap)
    finally:
        _depth -= 1


def _stuck(e: int, d: str, ty: Value, tubes: Sys, cap: Value) -> Value:
    return VNeu(NComp(e, d, ty, tubes, cap), restrict(ty, {d: DNF.const(1 - e)}))


def _comp(e: int, d: str, ty: Value, tubes: Sys, cap: Value) -> Value:
    match ty:
        case VNat():
            return _comp_nat(e, d, ty, tubes, cap)
        case VSigma(a, clo):
            t1 = tuple((c, vfst(t)) for c, t in tubes)
            c1 = vfst(cap)
            a_line = fill(e, d, a, t1, c1, DNF.var(d))
            a1 = restrict(a_line, {d: DNF.const(1 - e)})
            b1 = comp(e, d, clo.apply(a_line), tuple((c, vsnd(t)) for c, t in tubes), vsnd(cap))
            return VPair(a1, b1)
        case VPi():
            return VLam(CompPiClo(e, d, ty, tubes, cap))
        case VPath(a, x, y):
            j = fresh_dir("j")
            vj = DNF.var(j)
            ts = tuple((c, papp(t, vj)) for c, t in tubes)
            ts += ((Face.atom(j, 0), x), (Face.atom(j, 1), y))
            return VPLam(SemLine(j, comp(e, d, a, ts, papp(cap, vj))))
        case VSum(a, b):
            if isinstance(cap, VInl) and all(isinstance(t, VInl) for _, t in tubes):
                return VInl(comp(e, d, a, tuple((c, t.arg) for c, t in tubes), cap.arg))
            if isinstance(cap, VInr) and all(isinstance(t, VInr) for _, t in tubes):
                return VInr(comp(e, d, b, tuple((c, t.arg) for c, t in tubes), cap.arg))
            return _stuck(e, d, ty, tubes, cap)
        case VId(a, x, y):
            if not isinstance(cap, VIdPair) or not all(isinstance(t, VIdPair) for _, t in tubes):
                return _stuck(e, d, ty, tubes, cap)
            path = comp(e, d, VPath(a, x, y), tuple((c, t.path) for c, t in tubes), cap.path)
            flag = BOT
            end = {d: DNF.const(1 - e)}
            for c, t in tubes:
                flag = for_(flag, fand(c, fsubst(t.face, end)))
            return VIdPair(path, flag)
        case VGlue(b, sys):
            return comp_glue(e, d, b, sys, tubes, cap)
    return _stuck(e, d, ty, tubes, cap)


def _comp_nat(e: int, d: str, ty: Value, tubes: Sys, cap: Value) -> Value:
    # numerals are constant along any line, so peel matching constructors;
    # tubes that do not move in d agree with the cap wherever they are defined
    if all(d not in free_dirs(t) for _, t in tubes):
        return cap
    match cap:
        case VZero() if all(isinstance(t, VZero) for _, t in tubes):
            return cap
        case VSuc(n) if all(isinstance(t, VSuc) for _, t in tubes):
            return VSuc(_comp_nat(e, d, ty, tuple((c, t.arg) for c, t in tubes), n))
    return _stuck(e, d, ty, tubes, cap)


def fill(e: int, d: str, ty: Value, tubes: Sys, cap: Value, r: DNF) -> Value:
    """The filler at point r: cap at r = e and the composite at r = 1 - e."""
    k = fresh_dir(d)
    vk = DNF.var(k)
    m = vk.meet(r) if e == 0 else vk.join(r)
    ty2 = restrict(ty, {d: m})
    ts: list[tuple[Face, Value]] = []
    for c, t in tubes:
        rc = r.subst(c.subst_map())
        mc = vk.meet(rc) if e == 0 else vk.join(rc)
        ts.append((c, restrict(t, {d: mc})))
    for c in face_eq(r, e).split():
        ts.append((c, under(c, cap)))
    return comp(e, k, ty2, tuple(ts), cap)


@dataclass(frozen=True, eq=False)
class CompPiClo(Closure):
    """The function produced by composing in a Pi line."""
    e: int
    dir: str
    ty: VPi
    tubes: Sys
    cap: Value
    name: str = "x"

    def apply(self, a1: Value) -> Value:
        e, d = self.e, self.dir
        a_line = fill(1 - e, d, self.ty.dom, (), a1, DNF.var(d))
        b_line = self.ty.clo.apply(a_line)
        ts = tuple((c, app(t, under(c, a_line))) for c, t in self.tubes)
        cap = app(self.cap, restrict(a_line, {d: DNF.const(e)}))
        return comp(e, d, b_line, ts, cap)

    def restrict(self, s: Subst) -> "CompPiClo":
        d2, sub = rebind(self.dir, s)
        ty = restrict(self.ty, sub)
        assert isinstance(ty, VPi)
        return CompPiClo(self.e, d2, ty, restrict_sys(self.tubes, sub),
                         restrict(self.cap, s), self.name)


_FIBER_BODY = S.PathT(S.Var("B"), S.App(S.Var("f"), S.Var("a")), S.Var("b"))


def fiber_type(a: Value, b_ty: Value, f: Value, b: Value) -> Value:
    """(a : A) * Path B (f a) b"""
    env = Env({"B": b_ty, "f": f, "b": b})
    return VSigma(a, Clo(env, "a", _FIBER_BODY))


def comp_glue(e: int, d: str, b: Value, sys: Sys, tubes: Sys, cap: Value) -> Value:
    """Glue composition, adapted on the face where the whole line is partial."""
    phi = system_face(sys)
    delta = forall_dir(d, phi)
    extra: list[tuple[Face, Value]] = []
    for c in delta.split():
        s = c.subst_map()
        ty_c = restrict(VGlue(b, sys), s)
        extra.append((c, fill(e, d, ty_c, restrict_sys(tubes, s), restrict(cap, s), DNF.var(d))))
    return comp_glue_core(e, d, b, sys, tubes + tuple(extra), cap)


def comp_glue_core(e: int, d: str, b: Value, sys: Sys, tubes: Sys, cap: Value) -> Value:
    ebar = 1 - e
    at_e, at_ebar = {d: DNF.const(e)}, {d: DNF.const(ebar)}
    fsys = glue_funs(sys)
    b_tubes = tuple((c, unglue(restrict_sys(fsys, c.subst_map()), t)) for c, t in tubes)
    b_cap = unglue(restrict_sys(fsys, at_e), cap)
    b1p = comp(e, d, b, b_tubes, b_cap)

    b1 = restrict(b, at_ebar)
    sys1 = restrict_sys(sys, at_ebar)
    tubes1 = tuple((c, restrict(t, at_ebar)) for c, t in tubes)
    btil = tuple((c, restrict(t, at_ebar)) for c, t in b_tubes)

    j = fresh_dir("j")
    vj = DNF.var(j)
    a_branches: list[tuple[Face, Value]] = []
    p_branches: list[tuple[Face, Value]] = []
    for c1, br in sys1:
        s = c1.subst_map()
        a_ty, f, eqv = vfst(br), vfst(vsnd(br)), vsnd(vsnd(br))
        b1p_c = restrict(b1p, s)
        fib = fiber_type(a_ty, restrict(b1, s), f, b1p_c)
        contr = app(eqv, b1p_c)
        centre, paths = vfst(contr), vsnd(contr)
        psys: list[tuple[Face, Value]] = []
        for (c, t1), (_, bt) in zip(tubes1, btil):
            for c2 in fsubst(c, s).split():
                s2 = compose_subst(s, c2.subst_map())
                elem = VPair(restrict(t1, s2), VPLam(ConstLine(restrict(bt, s2))))
                psys.append((c2, papp(app(under(c2, paths), elem), vj)))
        ext = comp(0, j, fib, tuple(psys), centre)
        a_branches.append((c1, vfst(ext)))
        p_branches.append((c1, papp(vsnd(ext), vj)))
    final = tuple(p_branches) + btil
    b_out = comp(1, j, b1, final, b1p)
    return glue_intro(tuple(a_branches), b_out)


# -- evaluation ------------------------------------------------------------

def eval_interval(r: IntervalTerm, env: Env) -> DNF:
    match r:
        case IZero():
            return DNF.zero()
        case IOne():
            return DNF.one()
        case IDir(name):
            v = env.lookup(name)
            if not isinstance(v, DNF):
                raise EvalError(f"{name} is not a direction")
            return v
        case INeg(a):
            return eval_interval(a, env).neg()
        case IMeet(a, b):
            return eval_interval(a, env).meet(eval_interval(b, env))
        case IJoin(a, b):
            return eval_interval(a, env).join(eval_interval(b, env))
    raise EvalError(f"not an interval term: {r!r}")


def eval_face(phi: S.FaceTerm, env: Env) -> Face:
    match phi:
        case S.FEq(r, bit):
            return face_eq(eval_interval(r, env), bit)
        case S.FAnd(a, b):
            return fand(eval_face(a, env), eval_face(b, env))
        case S.FOr(a, b):
            return for_(eval_face(a, env), eval_face(b, env))
        case S.FForall(name, body):
            x = fresh_dir(name)
            return forall_dir(x, eval_face(body, env.extend(name, DNF.var(x))))
    raise EvalError(f"not a face: {phi!r}")


def eval_system(sys: S.System, env: Env) -> Sys:
    out: list[tuple[Face, Value]] = []
    for phi, t in sys.branches:
        for c in eval_face(phi, env).split():
            out.append((c, eval_term(t, env.restrict(c.subst_map()))))
    return tuple(out)


def _line_problem(line: Value, sys: Sys) -> tuple[str, Value, Sys]:
    d = fresh_dir("i")
    vd = DNF.var(d)
    return d, papp(line, vd), tuple((c, papp(t, vd)) for c, t in sys)


def eval_term(t: S.Term, env: Env) -> Value:
    match t:
        case S.Var(name):
            v = env.lookup(name)
            if isinstance(v, DNF):
                raise EvalError(f"{name} is a direction, not a term")
            return v
        case S.Universe():
            return VU()
        case S.Pi(n, a, b):
            return VPi(eval_term(a, env), Clo(env, n, b))
        case S.Lam(n, b):
            return VLam(Clo(env, n, b))
        case S.App(f, a):
            return app(eval_term(f, env), eval_term(a, env))
        case S.Sigma(n, a, b):
            return VSigma(eval_term(a, env), Clo(env, n, b))
        case S.Pair(a, b):
            return VPair(eval_term(a, env), eval_term(b, env))
        case S.Fst(p):
            return vfst(eval_term(p, env))
        case S.Snd(p):
            return vsnd(eval_term(p, env))
        case S.Nat():
            return VNat()
        case S.Zero():
            return VZero()
        case S.Suc(n):
            return VSuc(eval_term(n, env))
        case S.NatRec(m, z, s, n):
            return natrec(eval_term(m, env), eval_term(z, env), eval_term(s, env),
                          eval_term(n, env))
        case S.Sum(a, b):
            return VSum(eval_term(a, env), eval_term(b, env))
        case S.Inl(a):
            return VInl(eval_term(a, env))
        case S.Inr(b):
            return VInr(eval_term(b, env))
        case S.Case(m, l, r, x):
            return case(eval_term(m, env), eval_term(l, env), eval_term(r, env),
                        eval_term(x, env))
        case S.PathT(a, x, y):
            return VPath(eval_term(a, env), eval_term(x, env), eval_term(y, env))
        case S.PLam(n, b):
            return VPLam(DirClo(env, n, b))
        case S.PApp(p, r):
            return papp(eval_term(p, env), eval_interval(r, env))
        case S.IdT(a, x, y):
            return VId(eval_term(a, env), eval_term(x, env), eval_term(y, env))
        case S.IdPair(p, phi):
            return VIdPair(eval_term(p, env), eval_face(phi, env))
        case S.Refl(a):
            return refl(eval_term(a, env))
        case S.IdJ(m, b, p):
            return idj(eval_term(m, env), eval_term(b, env), eval_term(p, env))
        case S.Comp(e, line, sys, cap):
            d, ty, tubes = _line_problem(eval_term(line, env), eval_system(sys, env))
            return comp(e, d, ty, tubes, eval_term(cap, env))
        case S.Fill(e, line, sys, cap, r):
            d, ty, tubes = _line_problem(eval_term(line, env), eval_system(sys, env))
            return fill(e, d, ty, tubes, eval_term(cap, env), eval_interval(r, env))
        case S.GlueT(b, sys):
            return glue_type(eval_term(b, env), eval_system(sys, env))
        case S.GlueIntro(sys, b):
            return glue_intro(eval_system(sys, env), eval_term(b, env))
        case S.Unglue(sys, g):
            return unglue(eval_system(sys, env), eval_term(g, env))
        case S.Ann(a, _):
            return eval_term(a, env)
    raise EvalError(f"cannot evaluate {t!r}")


def refl(a: Value) -> Value:
    return VIdPair(VPLam(ConstLine(a)), TOP)


# -- read back -------------------------------------------------------------

class Names:
    """Printing names for bound variables and directions during read back."""

    def __init__(self, avoid: Iterable[str] = ()) -> None:
        self.vars: dict[str, str] = {}
        self.used: set[str] = set(avoid)

    def bind(self, sem: str, base: str) -> tuple["Names", str]:
        base = display_name(base) or "x"
        if base == "_":
            base = "x"
        name = base
        n = 0
        while name in self.used:
            n += 1
            name = f"{base}{n}"
        out = Names()
        out.vars = dict(self.vars)
        out.vars[sem] = name
        out.used = set(self.used) | {name}
        return out, name

    def name(self, sem: str) -> str:
        return self.vars.get(sem, display_name(sem))


def readback(v: Value, names: Names | None = None) -> S.Term:
    return _rb(v, names or Names())


def _rb_binder(clo: Closure, dom: Value | None, names: Names) -> tuple[str, S.Term]:
    x = fresh_dir(clo.name if clo.name != "_" else "x")
    ns, name = names.bind(x, clo.name)
    body = _rb(clo.apply(var(x, dom)), ns)
    return name, body


def _rb_dnf(r: DNF, names: Names) -> IntervalTerm:
    return _rename_i(r.to_term(), names)


def _rename_i(r: IntervalTerm, names: Names) -> IntervalTerm:
    match r:
        case IDir(n):
            return IDir(names.name(n))
        case INeg(a):
            return INeg(_rename_i(a, names))
        case IMeet(a, b):
            return IMeet(_rename_i(a, names), _rename_i(b, names))
        case IJoin(a, b):
            return IJoin(_rename_i(a, names), _rename_i(b, names))
    return r


def readback_face(phi: Face, names: Names | None = None) -> S.FaceTerm:
    names = names or Names()
    if phi.is_top():
        return S.F_TOP
    if phi.is_bot():
        return S.F_BOT
    out: S.FaceTerm | None = None
    for m in phi.maps():
        conj: S.FaceTerm | None = None
        for k, bit in sorted(m.items()):
            atom = S.FEq(IDir(names.name(k)), bit)
            conj = atom if conj is None else S.FAnd(conj, atom)
        assert conj is not None
        out = conj if out is None else S.FOr(out, conj)
    assert out is not None
    return out


def _rb_sys(sys: Sys, names: Names, fn=None) -> S.System:
    fn = fn or (lambda v, ns: _rb(v, ns))
    return S.System(tuple((readback_face(c, names), fn(v, names)) for c, v in sys))


def _rb_line(d: str, v: Value, names: Names) -> S.Term:
    ns, name = names.bind(d, d)
    return S.PLam(name, _rb(v, ns))


def _rb(v: Value, names: Names) -> S.Term:
    match v:
        case VU():
            return S.Universe()
        case VNat():
            return S.Nat()
        case VZero():
            return S.Zero()
        case VSuc(a):
            return S.Suc(_rb(a, names))
        case VPi(a, clo):
            name, body = _rb_binder(clo, a, names)
            if name not in S.free_vars(body):
                name = "_"
            return S.Pi(name, _rb(a, names), body)
        case VSigma(a, clo):
            name, body = _rb_binder(clo, a, names)
            if name not in S.free_vars(body):
                name = "_"
            return S.Sigma(name, _rb(a, names), body)
        case VLam(clo):
            name, body = _rb_binder(clo, None, names)
            return S.Lam(name, body)
        case VPair(a, b):
            return S.Pair(_rb(a, names), _rb(b, names))
        case VSum(a, b):
            return S.Sum(_rb(a, names), _rb(b, names))
        case VInl(a):
            return S.Inl(_rb(a, names))
        case VInr(a):
            return S.Inr(_rb(a, names))
        case VPath(a, x, y):
            return S.PathT(_rb(a, names), _rb(x, names), _rb(y, names))
        case VPLam(line):
            d = fresh_dir(line.name if line.name != "_" else "i")
            return _rb_line(d, line.at(DNF.var(d)), names)
        case VId(a, x, y):
            return S.IdT(_rb(a, names), _rb(x, names), _rb(y, names))
        case VIdPair(p, phi):
            return S.IdPair(_rb(p, names), readback_face(phi, names))
        case VGlue(b, sys):
            return S.GlueT(_rb(b, names), _rb_sys(sys, names))
        case VGlueElem(sys, b):
            return S.GlueIntro(_rb_sys(sys, names), _rb(b, names))
        case VNeu(ne, _):
            return _rb_ne(ne, names)
    raise EvalError(f"cannot read back {v!r}")


def _rb_ne(ne: Neutral, names: Names) -> S.Term:
    match ne:
        case NVar(n):
            return S.Var(names.name(n))
        case NApp(f, a):
            return S.App(_rb(f, names), _rb(a, names))
        case NFst(p):
            return S.Fst(_rb(p, names))
        case NSnd(p):
            return S.Snd(_rb(p, names))
        case NPApp(p, r):
            return S.PApp(_rb(p, names), _rb_dnf(r, names))
        case NNatRec(m, z, s, n):
            return S.NatRec(_rb(m, names), _rb(z, names), _rb(s, names), _rb(n, names))
        case NCase(m, l, r, x):
            return S.Case(_rb(m, names), _rb(l, names), _rb(r, names), _rb(x, names))
        case NIdJ(m, b, p):
            return S.IdJ(_rb(m, names), _rb(b, names), _rb(p, names))
        case NComp(e, d, ty, tubes, cap):
            line = _rb_line(d, ty, names)
            sys = _rb_sys(tubes, names, lambda t, ns: _rb_line(d, t, ns))
            return S.Comp(e, line, sys, _rb(cap, names))
        case NUnglue(sys, g):
            return S.Unglue(_rb_sys(sys, names), _rb(g, names))
    raise EvalError(f"cannot read back neutral {ne!r}")


def normal_form(v: Value) -> str:
    return S.show(readback(v))
