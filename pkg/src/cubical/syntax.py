"""Core terms, the `.cutt` surface parser and a printer whose output parses back."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Union

from .interval import IDir, IJoin, IMeet, INeg, IntervalTerm, IOne, IZero


@dataclass(frozen=True)
class Span:
    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


class ParseError(Exception):
    def __init__(self, message: str, span: Span | None = None):
        super().__init__(message)
        self.message = message
        self.span = span


# -- faces as written ------------------------------------------------------

@dataclass(frozen=True)
class FEq:
    r: IntervalTerm
    bit: int


@dataclass(frozen=True)
class FAnd:
    left: "FaceTerm"
    right: "FaceTerm"


@dataclass(frozen=True)
class FOr:
    left: "FaceTerm"
    right: "FaceTerm"


@dataclass(frozen=True)
class FForall:
    name: str
    body: "FaceTerm"


FaceTerm = Union[FEq, FAnd, FOr, FForall]

F_TOP = FEq(IOne(), 1)
F_BOT = FEq(IZero(), 1)


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class Term:
    span: Span | None = field(default=None, compare=False, repr=False, kw_only=True)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Universe(Term):
    pass


@dataclass(frozen=True)
class Pi(Term):
    name: str
    dom: Term
    cod: Term


@dataclass(frozen=True)
class Lam(Term):
    name: str
    body: Term


@dataclass(frozen=True)
class App(Term):
    fn: Term
    arg: Term


@dataclass(frozen=True)
class Sigma(Term):
    name: str
    dom: Term
    cod: Term


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Fst(Term):
    arg: Term


@dataclass(frozen=True)
class Snd(Term):
    arg: Term


@dataclass(frozen=True)
class Nat(Term):
    pass


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Suc(Term):
    arg: Term


@dataclass(frozen=True)
class NatRec(Term):
    motive: Term
    zero: Term
    succ: Term
    target: Term


@dataclass(frozen=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True)
class Inl(Term):
    arg: Term


@dataclass(frozen=True)
class Inr(Term):
    arg: Term


@dataclass(frozen=True)
class Case(Term):
    motive: Term
    left: Term
    right: Term
    target: Term


@dataclass(frozen=True)
class PathT(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class PLam(Term):
    name: str
    body: Term


@dataclass(frozen=True)
class PApp(Term):
    path: Term
    r: IntervalTerm


@dataclass(frozen=True)
class IdT(Term):
    ty: Term
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class IdPair(Term):
    path: Term
    face: FaceTerm


@dataclass(frozen=True)
class Refl(Term):
    arg: Term


@dataclass(frozen=True)
class IdJ(Term):
    motive: Term
    base: Term
    target: Term


@dataclass(frozen=True)
class System:
    branches: tuple[tuple[FaceTerm, Term], ...]


@dataclass(frozen=True)
class Comp(Term):
    e: int
    line: Term
    system: System
    cap: Term


@dataclass(frozen=True)
class Fill(Term):
    e: int
    line: Term
    system: System
    cap: Term
    point: IntervalTerm


@dataclass(frozen=True)
class GlueT(Term):
    base: Term
    system: System


@dataclass(frozen=True)
class GlueIntro(Term):
    system: System
    base: Term


@dataclass(frozen=True)
class Unglue(Term):
    system: System
    arg: Term


@dataclass(frozen=True)
class Ann(Term):
    term: Term
    ty: Term


@dataclass(frozen=True)
class Definition:
    name: str
    ty: Term
    body: Term
    span: Span | None = field(default=None, compare=False, repr=False)


# -- lexer -----------------------------------------------------------------

KEYWORDS = frozenset("""
def U Nat zero suc natrec Sum inl inr case Path Id idPair refl idJ
comp fill Glue glue unglue forall
""".split())

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>--[^\n]*)
  | (?P<sym>\|->|↦|->|→|/\\|\\/|\.1|\.2|[\\λ.<>()\[\],:=*@~])
  | (?P<num>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "sym", "num", "ident", "kw", "eof"
    text: str
    span: Span


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    pos, line, col = 0, 1, 1
    prev_ws = True
    while pos < len(src):
        m = _TOKEN_RE.match(src, pos)
        if m is None:
            raise ParseError(f"unexpected character {src[pos]!r}", Span(line, col))
        kind = m.lastgroup
        text = m.group()
        span = Span(line, col)
        if kind == "nl":
            line, col = line + 1, 1
            prev_ws = True
        else:
            col += len(text)
            if kind in ("ws", "comment"):
                prev_ws = True
            else:
                if kind == "sym" and text in (".1", ".2") and prev_ws:
                    # a detached dot followed by a digit, e.g. `\x.1`
                    toks.append(Token("sym", ".", span))
                    toks.append(Token("num", text[1], Span(span.line, span.col + 1)))
                else:
                    if text in ("→", "|->", "↦"):
                        text = "->" if text == "→" else "|->"
                    if text == "λ":
                        text = "\\"
                    if kind == "ident" and text in KEYWORDS:
                        kind = "kw"
                    toks.append(Token(kind, text, span))
                prev_ws = False
        pos = m.end()
    toks.append(Token("eof", "", Span(line, col)))
    return toks


# -- parser ----------------------------------------------------------------

class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.pos = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.pos]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.pos + k, len(self.toks) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("sym", "kw") and t.text == text

    def eat(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.error(f"expected '{text}'")
        t = self.tok
        self.pos += 1
        return t

    def error(self, msg: str) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(f"{msg}, found {found}", t.span)

    def ident(self) -> str:
        t = self.tok
        if t.kind != "ident":
            if t.kind == "kw":
                raise self.error(f"reserved word '{t.text}' cannot be used as a name")
            raise self.error("expected a name")
        self.pos += 1
        return t.text

    def bit(self) -> int:
        t = self.tok
        if t.kind == "num" and t.text in ("0", "1"):
            self.pos += 1
            return int(t.text)
        raise self.error("expected 0 or 1")

    # top level
    def program(self) -> list[Definition]:
        defs: list[Definition] = []
        seen: set[str] = set()
        while self.tok.kind != "eof":
            start = self.expect("def").span
            name_tok = self.tok
            name = self.ident()
            if name in seen:
                raise ParseError(f"duplicate definition of '{name}'", name_tok.span)
            seen.add(name)
            self.expect(":")
            ty = self.expr()
            self.expect("=")
            body = self.expr()
            defs.append(Definition(name, ty, body, span=start))
        return defs

    # terms
    def expr(self) -> Term:
        t = self.tok
        if self.eat("\\"):
            names = [self.binder_name()]
            while self.tok.kind == "ident":
                names.append(self.ident())
            self.expect(".")
            body = self.expr()
            for n in reversed(names):
                body = Lam(n, body, span=t.span)
            return body
        if self.at("<"):
            self.pos += 1
            names = [self.binder_name()]
            while self.tok.kind == "ident":
                names.append(self.ident())
            self.expect(">")
            body = self.expr()
            for n in reversed(names):
                body = PLam(n, body, span=t.span)
            return body
        tele = self.try_telescope()
        if tele is not None:
            kind, groups = tele
            cod = self.expr() if kind == "->" else self.prod_rhs()
            for names, dom in reversed(groups):
                for n in reversed(names):
                    cod = (Pi if kind == "->" else Sigma)(n, dom, cod, span=t.span)
            if kind == "*" and self.eat("->"):
                return Pi("_", cod, self.expr(), span=t.span)
            return cod
        left = self.prod()
        if self.eat("->"):
            return Pi("_", left, self.expr(), span=t.span)
        return left

    def prod_rhs(self) -> Term:
        # right operand of `*`, which may itself be a telescope
        t = self.tok
        tele = self.try_telescope()
        if tele is not None:
            kind, groups = tele
            cod = self.expr() if kind == "->" else self.prod_rhs()
            for names, dom in reversed(groups):
                for n in reversed(names):
                    cod = (Pi if kind == "->" else Sigma)(n, dom, cod, span=t.span)
            return cod
        return self.prod()

    def binder_name(self) -> str:
        return self.ident()

    def try_telescope(self):
        """Parse `(x y : A)(z : B) ->` or `... *` groups, or backtrack."""
        save = self.pos
        groups = []
        while self.at("(") and self.peek().kind == "ident":
            self.pos += 1
            names = []
            while self.tok.kind == "ident":
                names.append(self.ident())
            if not self.eat(":"):
                self.pos = save
                return None
            try:
                dom = self.expr()
                self.expect(")")
            except ParseError:
                self.pos = save
                return None
            groups.append((names, dom))
        if groups and (self.at("->") or self.at("*")):
            kind = self.tok.text
            self.pos += 1
            return kind, groups
        self.pos = save
        return None

    def prod(self) -> Term:
        t = self.tok
        left = self.papp()
        if self.eat("*"):
            return Sigma("_", left, self.prod_rhs(), span=t.span)
        return left

    def papp(self) -> Term:
        t = self.tok
        left = self.app()
        while self.eat("@"):
            left = PApp(left, self.iatom(), span=t.span)
        return left

    def app(self) -> Term:
        t = self.tok
        head = self.head()
        while self.starts_atom():
            head = App(head, self.atom(), span=t.span)
        return head

    def starts_atom(self) -> bool:
        t = self.tok
        if t.kind == "ident":
            return True
        if t.kind == "kw":
            return t.text in ("U", "Nat", "zero")
        return t.kind == "sym" and t.text == "("

    def head(self) -> Term:
        t = self.tok
        if t.kind != "kw" or t.text in ("U", "Nat", "zero"):
            return self.atom()
        kw = t.text
        self.pos += 1
        s = t.span
        match kw:
            case "suc":
                return Suc(self.atom(), span=s)
            case "inl":
                return Inl(self.atom(), span=s)
            case "inr":
                return Inr(self.atom(), span=s)
            case "refl":
                return Refl(self.atom(), span=s)
            case "Sum":
                return Sum(self.atom(), self.atom(), span=s)
            case "Path":
                return PathT(self.atom(), self.atom(), self.atom(), span=s)
            case "Id":
                return IdT(self.atom(), self.atom(), self.atom(), span=s)
            case "natrec":
                return NatRec(self.atom(), self.atom(), self.atom(), self.atom(), span=s)
            case "case":
                return Case(self.atom(), self.atom(), self.atom(), self.atom(), span=s)
            case "idJ":
                return IdJ(self.atom(), self.atom(), self.atom(), span=s)
            case "idPair":
                return IdPair(self.atom(), self.face_atom(), span=s)
            case "comp":
                e = self.bit()
                return Comp(e, self.atom(), self.system(), self.atom(), span=s)
            case "fill":
                e = self.bit()
                line, sys, cap = self.atom(), self.system(), self.atom()
                self.expect("@")
                return Fill(e, line, sys, cap, self.iatom(), span=s)
            case "Glue":
                return GlueT(self.atom(), self.system(), span=s)
            case "glue":
                return GlueIntro(self.system(), self.atom(), span=s)
            case "unglue":
                return Unglue(self.system(), self.atom(), span=s)
        self.pos -= 1
        raise self.error("unexpected keyword")

    def atom(self) -> Term:
        t = self.tok
        s = t.span
        if t.kind == "ident":
            self.pos += 1
            return self.postfix(Var(t.text, span=s))
        if t.kind == "kw" and t.text == "U":
            self.pos += 1
            return self.postfix(Universe(span=s))
        if t.kind == "kw" and t.text == "Nat":
            self.pos += 1
            return self.postfix(Nat(span=s))
        if t.kind == "kw" and t.text == "zero":
            self.pos += 1
            return self.postfix(Zero(span=s))
        if self.eat("("):
            inner = self.expr()
            if self.eat(","):
                items = [inner, self.expr()]
                while self.eat(","):
                    items.append(self.expr())
                self.expect(")")
                out = items[-1]
                for it in reversed(items[:-1]):
                    out = Pair(it, out, span=s)
                return self.postfix(out)
            if self.eat(":"):
                ty = self.expr()
                self.expect(")")
                return self.postfix(Ann(inner, ty, span=s))
            self.expect(")")
            return self.postfix(inner)
        raise self.error("expected a term")

    def postfix(self, t: Term) -> Term:
        while True:
            if self.eat(".1"):
                t = Fst(t, span=t.span)
            elif self.eat(".2"):
                t = Snd(t, span=t.span)
            else:
                return t

    def system(self) -> System:
        self.expect("[")
        branches: list[tuple[FaceTerm, Term]] = []
        if not self.at("]"):
            while True:
                phi = self.face()
                if not (self.eat("->") or self.eat("|->")):
                    raise self.error("expected '->' in system branch")
                branches.append((phi, self.expr()))
                if not self.eat(","):
                    break
        self.expect("]")
        return System(tuple(branches))

    # interval terms
    def iexpr(self) -> IntervalTerm:
        left = self.iconj()
        while self.eat("\\/"):
            left = IJoin(left, self.iconj())
        return left

    def iconj(self) -> IntervalTerm:
        left = self.ineg()
        while self.eat("/\\"):
            left = IMeet(left, self.ineg())
        return left

    def ineg(self) -> IntervalTerm:
        if self.eat("~"):
            return INeg(self.ineg())
        return self.iatom_plain()

    def iatom(self) -> IntervalTerm:
        if self.eat("~"):
            return INeg(self.iatom())
        return self.iatom_plain()

    def iatom_plain(self) -> IntervalTerm:
        t = self.tok
        if t.kind == "num" and t.text in ("0", "1"):
            self.pos += 1
            return IOne() if t.text == "1" else IZero()
        if t.kind == "ident":
            self.pos += 1
            return IDir(t.text)
        if self.eat("("):
            r = self.iexpr()
            self.expect(")")
            return r
        raise self.error("expected an interval term")

    # faces
    def face(self) -> FaceTerm:
        left = self.face_conj()
        while self.eat("\\/"):
            left = FOr(left, self.face_conj())
        return left

    def face_conj(self) -> FaceTerm:
        left = self.face_atom()
        while self.eat("/\\"):
            left = FAnd(left, self.face_atom())
        return left

    def face_atom(self) -> FaceTerm:
        if self.eat("forall"):
            name = self.ident()
            self.expect(".")
            return FForall(name, self.face())
        if not self.at("("):
            raise self.error("expected a face such as (i = 0)")
        save = self.pos
        self.pos += 1
        try:
            r = self.iexpr()
            self.expect("=")
            b = self.bit()
            self.expect(")")
            return FEq(r, b)
        except ParseError:
            self.pos = save + 1
        phi = self.face()
        self.expect(")")
        return phi


def parse(src: str) -> list[Definition]:
    return Parser(src).program()


def parse_term(src: str) -> Term:
    p = Parser(src)
    t = p.expr()
    if p.tok.kind != "eof":
        raise p.error("unexpected input after term")
    return t


def parse_face(src: str) -> FaceTerm:
    p = Parser(src)
    f = p.face()
    if p.tok.kind != "eof":
        raise p.error("unexpected input after face")
    return f


def parse_interval(src: str) -> IntervalTerm:
    p = Parser(src)
    r = p.iexpr()
    if p.tok.kind != "eof":
        raise p.error("unexpected input after interval term")
    return r


# -- free variables ----------------------------------------------------------

def free_vars(t: Term) -> frozenset[str]:
    match t:
        case Var(name):
            return frozenset([name])
        case Pi(n, a, b) | Sigma(n, a, b):
            return free_vars(a) | (free_vars(b) - {n})
        case Lam(n, b):
            return free_vars(b) - {n}
        case PLam(_, b):
            return free_vars(b)
        case Comp(_, line, sys, cap):
            return free_vars(line) | _sys_vars(sys) | free_vars(cap)
        case Fill(_, line, sys, cap, _):
            return free_vars(line) | _sys_vars(sys) | free_vars(cap)
        case GlueT(b, sys):
            return free_vars(b) | _sys_vars(sys)
        case GlueIntro(sys, b) | Unglue(sys, b):
            return free_vars(b) | _sys_vars(sys)
        case PApp(p, _):
            return free_vars(p)
        case IdPair(p, _):
            return free_vars(p)
    out: frozenset[str] = frozenset()
    for f in t.__dataclass_fields__:
        v = getattr(t, f)
        if isinstance(v, Term):
            out |= free_vars(v)
    return out


def _sys_vars(sys: System) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for _, b in sys.branches:
        out |= free_vars(b)
    return out


# -- printer ---------------------------------------------------------------

# precedence: 0 binders and arrows, 1 products, 2 path application,
# 3 application, 4 atoms
def show(t: Term, prec: int = 0) -> str:
    s, p = _show(t)
    return f"({s})" if p < prec else s


def _wrap(s: str, p: int, want: int) -> str:
    return f"({s})" if p < want else s


def _show(t: Term) -> tuple[str, int]:
    match t:
        case Var(name):
            return name, 4
        case Universe():
            return "U", 4
        case Nat():
            return "Nat", 4
        case Zero():
            return "zero", 4
        case Lam():
            names = []
            body: Term = t
            while isinstance(body, Lam):
                names.append(body.name)
                body = body.body
            return f"\\{' '.join(names)}. {show(body)}", 0
        case PLam():
            names = []
            body = t
            while isinstance(body, PLam):
                names.append(body.name)
                body = body.body
            return f"<{' '.join(names)}> {show(body)}", 0
        case Pi(name, dom, cod):
            if name == "_":
                d = show(dom, 1)
                if isinstance(dom, Ann):
                    d = f"({d})"
                return f"{d} -> {show(cod)}", 0
            return f"({name} : {show(dom)}) -> {show(cod)}", 0
        case Sigma(name, dom, cod):
            if name == "_":
                d = show(dom, 2)
                if isinstance(dom, Ann):
                    d = f"({d})"
                return f"{d} * {show(cod, 1)}", 1
            return f"({name} : {show(dom)}) * {show(cod, 1)}", 1
        case Pair():
            items = []
            cur: Term = t
            while isinstance(cur, Pair):
                items.append(show(cur.fst))
                cur = cur.snd
            items.append(show(cur))
            return f"({', '.join(items)})", 4
        case Fst(a):
            return f"{show(a, 4)}.1", 4
        case Snd(a):
            return f"{show(a, 4)}.2", 4
        case App(f, a):
            return f"{show(f, 3)} {show(a, 4)}", 3
        case PApp(p, r):
            return f"{show(p, 2)} @ {show_iatom(r)}", 2
        case Ann(a, ty):
            return f"({show(a)} : {show(ty)})", 4
        case Suc(a):
            return f"suc {show(a, 4)}", 3
        case Inl(a):
            return f"inl {show(a, 4)}", 3
        case Inr(a):
            return f"inr {show(a, 4)}", 3
        case Refl(a):
            return f"refl {show(a, 4)}", 3
        case Sum(a, b):
            return f"Sum {show(a, 4)} {show(b, 4)}", 3
        case PathT(a, x, y):
            return f"Path {show(a, 4)} {show(x, 4)} {show(y, 4)}", 3
        case IdT(a, x, y):
            return f"Id {show(a, 4)} {show(x, 4)} {show(y, 4)}", 3
        case NatRec(m, z, s, n):
            return f"natrec {show(m, 4)} {show(z, 4)} {show(s, 4)} {show(n, 4)}", 3
        case Case(m, l, r, n):
            return f"case {show(m, 4)} {show(l, 4)} {show(r, 4)} {show(n, 4)}", 3
        case IdJ(m, b, p):
            return f"idJ {show(m, 4)} {show(b, 4)} {show(p, 4)}", 3
        case IdPair(p, phi):
            return f"idPair {show(p, 4)} {show_face_atom(phi)}", 3
        case Comp(e, line, sys, cap):
            return f"comp {e} {show(line, 4)} {show_system(sys)} {show(cap, 4)}", 3
        case Fill(e, line, sys, cap, r):
            return (f"fill {e} {show(line, 4)} {show_system(sys)} {show(cap, 4)} @ "
                    f"{show_iatom(r)}", 2)
        case GlueT(b, sys):
            return f"Glue {show(b, 4)} {show_system(sys)}", 3
        case GlueIntro(sys, b):
            return f"glue {show_system(sys)} {show(b, 4)}", 3
        case Unglue(sys, g):
            return f"unglue {show_system(sys)} {show(g, 4)}", 3
    raise TypeError(f"cannot print {t!r}")


def show_system(sys: System) -> str:
    if not sys.branches:
        return "[]"
    parts = [f"{show_face(phi)} -> {show(b)}" for phi, b in sys.branches]
    return "[ " + ", ".join(parts) + " ]"


def _show_i(r: IntervalTerm) -> tuple[str, int]:
    match r:
        case IZero():
            return "0", 3
        case IOne():
            return "1", 3
        case IDir(n):
            return n, 3
        case INeg(a):
            s, p = _show_i(a)
            return "~" + (s if p >= 2 else f"({s})"), 2
        case IMeet(a, b):
            (s1, p1), (s2, p2) = _show_i(a), _show_i(b)
            return f"{s1 if p1 >= 1 else f'({s1})'} /\\ {s2 if p2 >= 2 else f'({s2})'}", 1
        case IJoin(a, b):
            (s1, p1), (s2, p2) = _show_i(a), _show_i(b)
            return f"{s1} \\/ {s2 if p2 >= 1 else f'({s2})'}", 0
    raise TypeError(r)


def show_interval(r: IntervalTerm) -> str:
    return _show_i(r)[0]


def show_iatom(r: IntervalTerm) -> str:
    s, p = _show_i(r)
    return s if p >= 2 else f"({s})"


def _show_f(phi: FaceTerm) -> tuple[str, int]:
    match phi:
        case FEq(r, b):
            return f"({show_interval(r)} = {b})", 3
        case FAnd(a, b):
            (s1, p1), (s2, p2) = _show_f(a), _show_f(b)
            return f"{s1 if p1 >= 1 else f'({s1})'} /\\ {s2 if p2 >= 2 else f'({s2})'}", 1
        case FOr(a, b):
            (s1, p1), (s2, p2) = _show_f(a), _show_f(b)
            return f"{s1 if p1 >= 0 else f'({s1})'} \\/ {s2 if p2 >= 1 else f'({s2})'}", 0
        case FForall(n, body):
            return f"forall {n}. {_show_f(body)[0]}", -1
    raise TypeError(phi)


def show_face(phi: FaceTerm) -> str:
    s, p = _show_f(phi)
    return s if p >= 0 else f"({s})"


def show_face_atom(phi: FaceTerm) -> str:
    s, p = _show_f(phi)
    return s if p >= 3 else f"({s})"


def show_definition(d: Definition) -> str:
    return f"def {d.name} : {show(d.ty)} = {show(d.body)}"
