"""Randomized and exhaustive property suites.

Every suite is deterministic for a given seed.  Composition problems are
generated as surface terms in a small context of neutrals, checked by the
typechecker (so the generator cannot silently produce ill-typed input) and
then judged by conversion.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable

from . import evaluator as E
from . import syntax as S
from .face import BOT, TOP, Face, eval3, face_eq, fand, for_, forall_dir, oracle_leq
from .interval import (DNF, IDir, IJoin, IMeet, INeg, IntervalTerm, IOne, IZero,
                       dm4_equal, iequal, normalize)
from .typechecker import Context, Program, TypeCheckError, check, conv, infer


@dataclass
class SuiteResult:
    name: str
    total: int = 0
    passed: int = 0
    failures: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return self.total > 0 and self.passed == self.total

    def record(self, ok: bool, what: str) -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 10:
            self.failures.append(what)

    def line(self, timed: bool = True) -> str:
        status = "PASS" if self.ok else "FAIL"
        out = f"{status} {self.name}: {self.passed}/{self.total}"
        return f"{out} in {self.seconds:.2f}s" if timed else out


def _timed(name: str, body: Callable[[SuiteResult], None]) -> SuiteResult:
    res = SuiteResult(name)
    start = time.perf_counter()
    try:
        body(res)
    except Exception as err:  # a crash is a failure of the suite, not of the runner
        res.record(False, f"crashed: {type(err).__name__}: {err}")
    res.seconds = time.perf_counter() - start
    return res


# -- interval terms ----------------------------------------------------------

def random_interval(rng: random.Random, names: list[str], depth: int = 3) -> IntervalTerm:
    if depth == 0 or rng.random() < 0.25:
        k = rng.random()
        if k < 0.1 or not names:
            return IZero() if rng.random() < 0.5 else IOne()
        return IDir(rng.choice(names))
    k = rng.randrange(3)
    if k == 0:
        return INeg(random_interval(rng, names, depth - 1))
    a = random_interval(rng, names, depth - 1)
    b = random_interval(rng, names, depth - 1)
    return IMeet(a, b) if k == 1 else IJoin(a, b)


def rewrite(rng: random.Random, t: IntervalTerm, steps: int = 3) -> IntervalTerm:
    """An equal term, obtained by applying de Morgan algebra laws at random."""
    for _ in range(steps):
        t = _rewrite_once(rng, t)
    return t


def _rewrite_once(rng: random.Random, t: IntervalTerm) -> IntervalTerm:
    match t:
        case INeg(INeg(a)) if rng.random() < 0.5:
            return a
        case INeg(IMeet(a, b)) if rng.random() < 0.5:
            return IJoin(INeg(a), INeg(b))
        case INeg(IJoin(a, b)) if rng.random() < 0.5:
            return IMeet(INeg(a), INeg(b))
        case IMeet(a, IJoin(b, c)) if rng.random() < 0.4:
            return IJoin(IMeet(a, b), IMeet(a, c))
        case IMeet(a, b) if rng.random() < 0.3:
            return IMeet(b, a)
        case IJoin(a, b) if rng.random() < 0.3:
            return IJoin(b, a)
    k = rng.randrange(6)
    if k == 0:
        return INeg(INeg(t))
    if k == 1:
        return IJoin(t, IMeet(t, random_interval(rng, ["x", "y"], 1)))
    if k == 2:
        return IMeet(t, IOne())
    match t:
        case INeg(a):
            return INeg(_rewrite_once(rng, a))
        case IMeet(a, b):
            return IMeet(_rewrite_once(rng, a), b) if rng.random() < 0.5 else IMeet(a, _rewrite_once(rng, b))
        case IJoin(a, b):
            return IJoin(_rewrite_once(rng, a), b) if rng.random() < 0.5 else IJoin(a, _rewrite_once(rng, b))
    return t


def suite_dm4(rng: random.Random, n: int = 1000) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        names = ["x", "y", "z", "w"]
        for k in range(n):
            ns = names[: rng.randint(1, 4)]
            a = random_interval(rng, ns, rng.randint(1, 4))
            b = rewrite(rng, a) if k % 2 == 0 else random_interval(rng, ns, rng.randint(1, 4))
            got, want = iequal(a, b), dm4_equal(a, b)
            res.record(got == want, f"{a} vs {b}: normal forms say {got}, DM4 says {want}")
    return _timed("de Morgan normal forms agree with the four element algebra", body)


# -- faces -------------------------------------------------------------------

_ASSIGNMENTS3 = [dict(zip("xyz", v)) for v in itertools.product((0, 1, None), repeat=3)]


def _signature(phi: Face) -> tuple[bool, ...]:
    return tuple(eval3(phi, a) for a in _ASSIGNMENTS3)


def _all_face_inputs(max_atoms: int = 6):
    """Every join of meets of atoms over x, y, z with at most `max_atoms` atoms."""
    atoms = [(n, b) for n in "xyz" for b in (0, 1)]
    conjs = [c for k in range(0, 4) for c in itertools.combinations(atoms, k)]

    def go(start: int, budget: int, acc: tuple):
        yield acc
        for i in range(start, len(conjs)):
            size = len(conjs[i])
            if size <= budget:
                yield from go(i + 1, budget - size, acc + (conjs[i],))
    yield from go(0, max_atoms, ())


def _build_face(conjs: tuple) -> Face:
    out = BOT
    for conj in conjs:
        acc = TOP
        for n, b in conj:
            acc = fand(acc, Face.atom(n, b))
        out = for_(out, acc)
    return out


def suite_faces(rng: random.Random) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        by_sig: dict[tuple[bool, ...], Face] = {}
        by_face: dict[Face, tuple[bool, ...]] = {}
        built: list[tuple[tuple, Face]] = []
        for conjs in _all_face_inputs():
            phi = _build_face(conjs)
            sig = _signature(phi)
            # the built face must mean what its input syntax means
            direct = tuple(any(all(a.get(n) == b for n, b in c) for c in conjs)
                           for a in _ASSIGNMENTS3)
            ok = sig == direct
            ok = ok and by_sig.setdefault(sig, phi) == phi
            ok = ok and by_face.setdefault(phi, sig) == sig
            res.record(ok, f"face {conjs} normalized to {phi}")
            built.append((conjs, phi))
        faces = list(by_face)
        for _ in range(3000):
            a, b = rng.choice(faces), rng.choice(faces)
            sa, sb = by_face[a], by_face[b]
            ok = _signature(fand(a, b)) == tuple(x and y for x, y in zip(sa, sb))
            ok = ok and _signature(for_(a, b)) == tuple(x or y for x, y in zip(sa, sb))
            ok = ok and (a <= b) == oracle_leq(a, b, "xyz")
            res.record(ok, f"meet, join or order of {a} and {b}")
    return _timed("face lattice agrees with three-state assignments", body)


def _faces_over(names: str) -> list[Face]:
    conjs = [tuple(zip(names, v)) for v in itertools.product((0, 1, None), repeat=len(names))]
    conjs = [tuple((n, b) for n, b in c if b is not None) for c in conjs]
    out = {Face.of_maps(dict(c) for c in sub)
           for k in range(len(conjs) + 1) for sub in itertools.combinations(conjs, k)}
    return sorted(out, key=str)


def suite_forall(rng: random.Random) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        for dims in ("x", "xy"):
            for x in dims:
                rest = dims.replace(x, "")
                psis = _faces_over(rest)
                for phi in _faces_over(dims):
                    q = forall_dir(x, phi)
                    for psi in psis:
                        lhs = oracle_leq(psi, q, dims)
                        rhs = oracle_leq(psi, phi, dims)
                        res.record(lhs == rhs and x not in q.dirs(),
                                   f"psi={psi} phi={phi} forall {x} gives {q}")
    return _timed("forall is right adjoint to weakening", body)


def suite_face_eq(rng: random.Random, n: int = 500) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        for _ in range(n):
            r = normalize(random_interval(rng, ["x", "y", "z"], 3))
            bit = rng.randrange(2)
            phi = face_eq(r, bit)
            for a in _ASSIGNMENTS3:
                sub = {k: DNF.const(v) for k, v in a.items() if v is not None}
                holds = r.subst(sub).endpoint() == bit
                res.record(eval3(phi, a) == holds, f"({r} = {bit}) at {a}")
    return _timed("interval equations become faces", body)


# -- composition problems ----------------------------------------------------

CONTEXT = [
    ("A", "U"), ("a", "A"), ("b", "A"), ("p", "Path A a b"), ("n", "Nat"),
    ("h", "A -> A"), ("np", "Path Nat n (suc n)"),
    ("B", "(z : A) -> Id A a z -> U"), ("bb", "B a (refl a)"),
]


def base_context(prog: Program | None = None, dirs: tuple[str, ...] = ("x", "y")) -> Context:
    ctx = prog.context() if prog is not None else Context.empty()
    for name, ty in CONTEXT:
        tv = ctx.eval(S.parse_term(ty))
        ctx = ctx.bind(name, tv)[0]
    for d in dirs:
        ctx = ctx.bind_dir(d)[0]
    return ctx


SIMPLE = ("Nat", "A", "Sum", "Sig")


def random_shape(rng: random.Random, depth: int = 2, simple: bool = False):
    kinds = list(SIMPLE) if simple else ["Nat", "A", "Sum", "Sig", "DSig", "Pi", "DPi", "Path"]
    if depth == 0:
        kinds = ["Nat", "A"]
    k = rng.choice(kinds)
    match k:
        case "Sum" | "Sig" if simple or k == "Sum":
            return (k, random_shape(rng, depth - 1, True), random_shape(rng, depth - 1, True))
        case "Sig":
            return (k, random_shape(rng, depth - 1), random_shape(rng, depth - 1))
        case "Pi":
            return (k, random_shape(rng, depth - 1, True), random_shape(rng, depth - 1))
        case "Path":
            return (k, random_shape(rng, depth - 1, True))
    return k


class Gen:
    """Generates a type and an element of it that vary along the given directions."""

    def __init__(self, rng: random.Random):
        self.rng = rng
        self.fresh = itertools.count()

    def interval(self, dirs: list[str]) -> str:
        return S.show_iatom(random_interval(self.rng, dirs, 2))

    def type_of(self, shape) -> str:
        match shape:
            case "Nat":
                return "Nat"
            case "A":
                return "A"
            case ("Sum", s1, s2):
                return f"Sum ({self.type_of(s1)}) ({self.type_of(s2)})"
            case ("Sig", s1, s2):
                return f"({self.type_of(s1)}) * ({self.type_of(s2)})"
        raise ValueError(shape)

    def nat(self, dirs: list[str]) -> str:
        if dirs and self.rng.random() < 0.4:
            return f"np @ {self.interval(dirs)}"
        return self.rng.choice(["zero", "suc zero", "n", "suc n", "suc (suc zero)"])

    def gen(self, shape, dirs: list[str]) -> tuple[str, str]:
        rng = self.rng
        match shape:
            case "Nat":
                return "Nat", self.nat(dirs)
            case "A":
                k = rng.randrange(4)
                if k == 0 or not dirs:
                    return "A", rng.choice(["a", "b", "h a"])
                r = self.interval(dirs)
                return "A", f"p @ {r}" if k < 3 else f"h (p @ {r})"
            case ("Sum", s1, s2):
                t = self.type_of(shape)
                if rng.random() < 0.5:
                    return t, f"inl ({self.gen(s1, dirs)[1]})"
                return t, f"inr ({self.gen(s2, dirs)[1]})"
            case ("Sig", s1, s2):
                t1, e1 = self.gen(s1, dirs)
                t2, e2 = self.gen(s2, dirs)
                return f"({t1}) * ({t2})", f"({e1}, {e2})"
            case "DSig":
                r = self.interval(dirs) if dirs else "0"
                k = f"k{next(self.fresh)}"
                return "(z : A) * Path A z b", f"(p @ {r}, <{k}> p @ ({r} \\/ {k}))"
            case "DPi":
                # the domain moves along the line, so the argument is transported
                r = self.interval(dirs) if dirs else "1"
                q = f"q{next(self.fresh)}"
                end = rng.choice(["0", "1", self.interval(dirs) if dirs else "0"])
                return f"(Path A a (p @ {r})) -> A", f"\\{q}. {q} @ {end}"
            case ("Pi", s1, s2):
                t1 = self.type_of(s1)
                t2, e2 = self.gen(s2, dirs)
                z = f"z{next(self.fresh)}"
                if s1 == s2 and rng.random() < 0.5:
                    body = z if s1 != "A" or rng.random() < 0.5 else f"h {z}"
                    return f"({t1}) -> ({t2})", f"\\{z}. {body}"
                return f"({t1}) -> ({t2})", f"\\{z}. {e2}"
            case ("Path", s):
                k = f"k{next(self.fresh)}"
                t, e = self.gen(s, dirs + [k])
                lam = f"(<{k}> ({e} : {t}))"
                return f"Path ({t}) ({lam} @ 0) ({lam} @ 1)", f"<{k}> {e}"
        raise ValueError(shape)

    def face(self, dirs: list[str]) -> str:
        rng = self.rng
        if not dirs:
            return rng.choice(["(0 = 1)", "(1 = 1)"])
        atoms = [f"({d} = {b})" for d in dirs for b in (0, 1)]
        k = rng.random()
        if k < 0.6:
            return rng.choice(atoms)
        if k < 0.8:
            return f"{rng.choice(atoms)} /\\ {rng.choice(atoms)}"
        if k < 0.95:
            return f"{rng.choice(atoms)} \\/ {rng.choice(atoms)}"
        return f"({self.interval(dirs)} = {rng.randrange(2)})"


@dataclass
class Problem:
    e: int
    ty: str
    elem: str
    faces: list[str]
    dirs: list[str]

    def system(self, tube: Callable[[str], str] | None = None) -> str:
        tube = tube or (lambda f: f"<i> {self.elem}")
        return "[" + ", ".join(f"{f} -> {tube(f)}" for f in self.faces) + "]"

    def at(self, r: str) -> str:
        return f"((<i> ({self.elem} : {self.ty})) @ {r})"

    def ty_at(self, r: str) -> str:
        return f"((<i> {self.ty}) @ {r})"

    def comp(self) -> str:
        return f"comp {self.e} (<i> {self.ty}) {self.system()} {self.at(str(self.e))}"

    def fill(self, r: str) -> str:
        return (f"fill {self.e} (<i> {self.ty}) {self.system()} "
                f"{self.at(str(self.e))} @ {r}")


def random_problem(rng: random.Random, gen: Gen, shape=None) -> Problem:
    others = rng.sample(["x", "y"], rng.randint(0, 2))
    shape = shape if shape is not None else random_shape(rng, rng.randint(1, 3))
    ty, elem = gen.gen(shape, ["i"] + others)
    faces = [gen.face(others) for _ in range(rng.randint(0, 3))]
    return Problem(rng.randrange(2), ty, elem, faces, others)


def _eval(ctx: Context, src: str) -> E.Value:
    return ctx.eval(S.parse_term(src))


def _conjuncts(ctx: Context, faces: list[str]) -> list[Face]:
    out: list[Face] = []
    for f in faces:
        out.extend(E.eval_face(S.parse_face(f), ctx.env).split())
    return out


def well_typed(ctx: Context, v: E.Value, ty: E.Value) -> str | None:
    """Read `v` back and check the resulting term against `ty`."""
    avoid = set(ctx.types) | {k for k in ctx.env.locals}
    term = E.readback(v, E.Names(avoid))
    try:
        check(ctx, term, ty)
    except TypeCheckError as err:
        return f"{err}: {S.show(term)}"
    return None


def check_problem(ctx: Context, pb: Problem) -> str | None:
    """None if every contract holds, otherwise a description of the failure."""
    term = S.parse_term(pb.comp())
    try:
        infer(ctx, term)
    except TypeCheckError as err:
        return f"generated problem is ill-typed: {err}\n  {pb.comp()}"
    ebar = str(1 - pb.e)
    v = ctx.eval(term)
    ty1 = _eval(ctx, pb.ty_at(ebar))
    target = _eval(ctx, pb.at(ebar))
    cs = _conjuncts(ctx, pb.faces)
    for c in cs:
        if not conv(E.under(c, v), E.under(c, target), E.under(c, ty1)):
            return f"extension contract fails on {c}: {pb.comp()}"
    msg = well_typed(ctx, v, ty1)
    if msg is not None:
        return f"composite is ill-typed ({msg}): {pb.comp()}"
    cap = _eval(ctx, pb.at(str(pb.e)))
    if not conv(_eval(ctx, pb.fill(str(pb.e))), cap, _eval(ctx, pb.ty_at(str(pb.e)))):
        return f"fill at e is not the cap: {pb.comp()}"
    if not conv(_eval(ctx, pb.fill(ebar)), v, ty1):
        return f"fill at 1-e is not the composite: {pb.comp()}"
    jctx = ctx.bind_dir("j")[0]
    fj = _eval(jctx, pb.fill("j"))
    tyj, uj = _eval(jctx, pb.ty_at("j")), _eval(jctx, pb.at("j"))
    for c in _conjuncts(jctx, pb.faces):
        if not conv(E.under(c, fj), E.under(c, uj), E.under(c, tyj)):
            return f"filler does not extend the tubes on {c}: {pb.comp()}"
    return None


def _random_subst(rng: random.Random, ctx: Context, dirs: list[str]) -> dict[str, DNF]:
    names = [ctx.env.locals[d].as_dir() for d in ("x", "y")]
    pool = [DNF.zero(), DNF.one()] + [DNF.var(n) for n in names]
    pool += [DNF.var(n).neg() for n in names]
    pool += [DNF.var(names[0]).meet(DNF.var(names[1])), DNF.var(names[0]).join(DNF.var(names[1]))]
    return {ctx.env.locals[d].as_dir(): rng.choice(pool) for d in dirs if rng.random() < 0.8}


def check_uniformity(rng: random.Random, ctx: Context, pb: Problem) -> str | None:
    sigma = _random_subst(rng, ctx, pb.dirs)
    term = S.parse_term(pb.comp())
    v = ctx.eval(term)
    restricted_env = ctx.env.restrict(sigma)
    after = E.eval_term(term, restricted_env)
    ty = E.restrict(_eval(ctx, pb.ty_at(str(1 - pb.e))), sigma)
    if not conv(E.restrict(v, sigma), after, ty):
        shown = {k: str(r) for k, r in sigma.items()}
        return f"composition does not commute with {shown}: {pb.comp()}"
    return None


def suite_compositions(rng: random.Random, n: int = 500) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        ctx = base_context()
        gen = Gen(rng)
        for _ in range(n):
            pb = random_problem(rng, gen)
            msg = check_problem(ctx, pb)
            res.record(msg is None, msg or "")
    return _timed("composition and filling meet their contracts", body)


def suite_uniformity(rng: random.Random, n: int = 200) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        ctx = base_context()
        gen = Gen(rng)
        for _ in range(n):
            pb = random_problem(rng, gen)
            infer(ctx, S.parse_term(pb.comp()))
            msg = check_uniformity(rng, ctx, pb)
            res.record(msg is None, msg or "")
    return _timed("composition commutes with direction substitutions", body)


# -- J, glueing and the prelude ----------------------------------------------

def suite_j(rng: random.Random, n: int = 50) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        ctx = base_context()
        gen = Gen(rng)
        kinds = ["Nat", ("Sig", "Nat", "A"), ("Pi", "Nat", "A"), ("Pi", "A", "A"),
                 "DSig", ("Sig", "Nat", ("Pi", "A", "Nat"))]
        for k in range(n):
            shape = kinds[k % len(kinds)] if k < len(kinds) else rng.choice(kinds)
            ty, a = gen.gen(shape, [])
            if rng.random() < 0.5:
                t2, b = gen.gen(random_shape(rng, 2), [])
                motive = f"\\z q. {t2}"
            else:
                t2 = f"Path ({ty}) ({a} : {ty}) z"
                motive = f"\\z q. {t2}"
                b = f"<_> ({a} : {ty})"
            term = S.parse_term(f"idJ ({motive}) ({b}) (refl ({a} : {ty}))")
            got_ty = infer(ctx, term)
            ok = conv(ctx.eval(term), _eval(ctx, b), got_ty)
            res.record(ok, f"J on refl over {ty} did not return {b}")
    return _timed("J computes on refl definitionally", body)


def suite_j_general(rng: random.Random, n: int = 50) -> SuiteResult:
    """J on targets whose flag is a proper face: well typed, and b on the flag."""
    def body(res: SuiteResult) -> None:
        ctx = base_context()
        gen = Gen(rng)
        motives = [("\\z q. Path (Id A a z) q q", "<_> refl a"),
                   ("\\z q. Id A a z", "refl a"),
                   ("\\z q. (w : Nat) * Path (Id A a z) q q", "(n, <_> refl a)"),
                   ("B", "bb")]
        for k in range(n):
            r = gen.interval(["x", "y"])
            target = f"idPair (<j> p @ (j /\\ {r})) ({r} = 0)"
            motive, b = motives[k % len(motives)]
            term = S.parse_term(f"idJ ({motive}) ({b}) ({target} : Id A a (p @ {r}))")
            ty = infer(ctx, term)
            v = ctx.eval(term)
            msg = well_typed(ctx, v, ty)
            ok = msg is None
            bv = _eval(ctx, b)
            for c in E.eval_face(S.parse_face(f"({r} = 0)"), ctx.env).split():
                ok = ok and conv(E.under(c, v), E.under(c, bv), E.under(c, ty))
            res.record(ok, f"J on {target}: {msg}")
    return _timed("J on flagged identity proofs", body)


def _glue_ctx() -> Context:
    from .prelude import load_prelude
    return base_context(load_prelude())


def _equiv(rng: random.Random, ty: str) -> tuple[str, str]:
    if rng.random() < 0.7:
        return f"idfun ({ty})", f"idEquiv ({ty})"
    line = f"(<_> {ty})"
    return f"coerce ({ty}) ({ty}) {line}", f"pathToEquiv ({ty}) ({ty}) {line}"


def _satisfying_subst(ctx: Context, phi: Face) -> dict[str, DNF] | None:
    if phi.is_bot():
        return None
    return phi.split()[0].subst_map()


def suite_glue(rng: random.Random, n: int = 100) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        ctx = _glue_ctx()
        gen = Gen(rng)
        for _ in range(n):
            shape = random_shape(rng, 2, simple=True)
            ty = gen.type_of(shape)
            phi_src = gen.face(["x", "y"])
            f, eqv = _equiv(rng, ty)
            gty = f"Glue ({ty}) [{phi_src} -> (({ty}), {f}, {eqv})]"
            _, a = gen.gen(shape, ["x", "y"])
            g = f"glue [{phi_src} -> {a}] ({f} ({a}))"
            u = f"unglue [{phi_src} -> {f}] ({g} : {gty})"
            try:
                gty_v = ctx.eval(S.parse_term(gty))
                infer(ctx, S.parse_term(gty))
                check(ctx, S.parse_term(g), gty_v)
                infer(ctx, S.parse_term(u))
            except TypeCheckError as err:
                res.record(False, f"ill-typed glue instance: {err}: {g}")
                continue
            g_v, u_v = _eval(ctx, g), _eval(ctx, u)
            base, fa = _eval(ctx, ty), _eval(ctx, f"{f} ({a})")
            ok = conv(u_v, fa, base)
            phi = E.eval_face(S.parse_face(phi_src), ctx.env)
            sigma = _satisfying_subst(ctx, phi)
            if sigma is not None:
                ok = ok and conv(E.restrict(gty_v, sigma), E.restrict(base, sigma), E.VU())
                a_s = E.restrict(_eval(ctx, a), sigma)
                ok = ok and conv(E.restrict(g_v, sigma), a_s, E.restrict(base, sigma))
                ok = ok and conv(E.restrict(u_v, sigma), E.restrict(fa, sigma),
                                 E.restrict(base, sigma))
            res.record(ok, f"strict glue fails for {g} : {gty}")
    return _timed("glueing is strict and unglue inverts glue", body)


def suite_adaptation(rng: random.Random, n: int = 50) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        ctx = _glue_ctx()
        gen = Gen(rng)
        done = 0
        while done < n:
            pb = random_problem(rng, gen, random_shape(rng, 2, simple=True))
            if not pb.dirs:
                continue
            phi_src = gen.face(pb.dirs)
            phi = E.eval_face(S.parse_face(phi_src), ctx.env)
            if phi.is_bot() or phi.is_top():
                continue
            done += 1
            f, eqv = _equiv(rng, "(" + pb.ty + ")")
            gline = f"Glue ({pb.ty}) [{phi_src} -> (({pb.ty}), {f}, {eqv})]"
            gelem = f"glue [{phi_src} -> {pb.elem}] ({f} ({pb.elem}))"
            gpb = Problem(pb.e, gline, gelem, pb.faces, pb.dirs)
            term = S.parse_term(gpb.comp())
            try:
                infer(ctx, term)
            except TypeCheckError as err:
                res.record(False, f"ill-typed adaptation instance: {err}")
                continue
            v = ctx.eval(term)
            ebar = str(1 - pb.e)
            ok = True
            # on the face where the line is constantly partial, glue
            # composition is composition in the partial type
            for c in phi.split():
                cctx = ctx.restrict(c)
                want = E.eval_term(S.parse_term(pb.comp()), cctx.env)
                ty_c = E.eval_term(S.parse_term(pb.ty_at(ebar)), cctx.env)
                ok = ok and conv(E.under(c, v), want, ty_c)
            # unfold the adapted operation by hand and compare
            d = E.fresh_dir("i")
            vd = DNF.var(d)
            line = _eval(ctx, f"<i> {gline}")
            glue_ty = E.papp(line, vd)
            tubes = tuple((c, E.papp(_eval(ctx.restrict(c), f"<i> {gelem}"), vd))
                          for c in _conjuncts(ctx, pb.faces))
            cap = _eval(ctx, gpb.at(str(pb.e)))
            assert isinstance(glue_ty, E.VGlue)
            delta = forall_dir(d, E.system_face(glue_ty.sys))
            extra = []
            for c in delta.split():
                s = c.subst_map()
                extra.append((c, E.fill(pb.e, d, E.restrict(glue_ty, s),
                                        E.restrict_sys(tubes, s), E.restrict(cap, s), vd)))
            raw = E.comp_glue_core(pb.e, d, glue_ty.base, glue_ty.sys,
                                   tubes + tuple(extra), cap)
            gty1 = _eval(ctx, gpb.ty_at(ebar))
            ok = ok and conv(raw, v, gty1)
            # and the result still extends the tubes
            target = _eval(ctx, gpb.at(ebar))
            for c in _conjuncts(ctx, pb.faces):
                ok = ok and conv(E.under(c, v), E.under(c, target), E.under(c, gty1))
            res.record(ok, f"adaptation fails for {gpb.comp()}")
    return _timed("glue composition adapts on the constant face", body)


def suite_univalence(rng: random.Random) -> SuiteResult:
    def body(res: SuiteResult) -> None:
        from .prelude import build_prelude
        from .typechecker import check_program
        try:
            prog = check_program(e.definition for e in build_prelude())
        except TypeCheckError as err:
            res.record(False, f"prelude does not check: {err}")
            return
        res.record(True, "")
        res.record("uaCoherence" in prog.values, "coherence path missing")
        ctx = prog.context()
        zero = ctx.eval(S.parse_term("coerceIdNat zero"))
        res.record(E.normal_form(zero) == "zero", f"coerce gave {E.normal_form(zero)}")
        for k in range(4):
            num = "zero"
            for _ in range(k):
                num = f"suc ({num})"
            v = ctx.eval(S.parse_term(f"coerceIdNat ({num})"))
            res.record(conv(v, ctx.eval(S.parse_term(num)), E.VNat()),
                       f"coerce is not the identity on {num}")
    return _timed("univalence pipeline", body)


# -- running -------------------------------------------------------------------

SUITES: list[tuple[str, Callable[[random.Random], SuiteResult]]] = [
    ("dm4", suite_dm4),
    ("faces", suite_faces),
    ("forall", suite_forall),
    ("face_eq", suite_face_eq),
    ("compositions", suite_compositions),
    ("uniformity", suite_uniformity),
    ("j", suite_j),
    ("j_general", suite_j_general),
    ("glue", suite_glue),
    ("adaptation", suite_adaptation),
    ("univalence", suite_univalence),
]


def run_suite(name: str, seed: int) -> SuiteResult:
    fn = dict(SUITES)[name]
    return fn(random.Random(f"{seed}:{name}"))


def run_all(seed: int, report: Callable[[str], None] | None = None,
            timed: bool = True) -> list[SuiteResult]:
    out = []
    for name, _ in SUITES:
        res = run_suite(name, seed)
        if report is not None:
            report(res.line(timed))
            for f in res.failures:
                report(f"  {f}")
        out.append(res)
    return out
