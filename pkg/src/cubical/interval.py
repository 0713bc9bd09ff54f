"""The free de Morgan algebra on a set of directions.

Interval terms are small trees; `DNF` is their canonical form: a join of
meets of literals, kept as an antichain so that equality is structural.
The free de Morgan algebra on X is the free bounded distributive lattice
on X and its formal complements, so the irredundant DNF is unique.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Union


class ScopeError(Exception):
    """A direction was used outside the set it is supposed to live in."""


# -- directions ------------------------------------------------------------

_fresh_counter = itertools.count()


def fresh_dir(base: str = "i") -> str:
    """A direction name that cannot clash with any source identifier."""
    base = base.split("#", 1)[0] or "i"
    return f"{base}#{next(_fresh_counter)}"


def display_name(name: str) -> str:
    return name.split("#", 1)[0]


# -- terms -----------------------------------------------------------------

@dataclass(frozen=True)
class IZero:
    pass


@dataclass(frozen=True)
class IOne:
    pass


@dataclass(frozen=True)
class IDir:
    name: str


@dataclass(frozen=True)
class INeg:
    arg: "IntervalTerm"


@dataclass(frozen=True)
class IMeet:
    left: "IntervalTerm"
    right: "IntervalTerm"


@dataclass(frozen=True)
class IJoin:
    left: "IntervalTerm"
    right: "IntervalTerm"


IntervalTerm = Union[IZero, IOne, IDir, INeg, IMeet, IJoin]


def term_dirs(t: IntervalTerm) -> frozenset[str]:
    match t:
        case IZero() | IOne():
            return frozenset()
        case IDir(name):
            return frozenset([name])
        case INeg(a):
            return term_dirs(a)
        case IMeet(a, b) | IJoin(a, b):
            return term_dirs(a) | term_dirs(b)
    raise TypeError(f"not an interval term: {t!r}")


# -- canonical forms -------------------------------------------------------

# A literal is (name, positive).  A clause is a sorted tuple of literals.
Literal = tuple[str, bool]
Clause = tuple[Literal, ...]


def _lit_key(lit: Literal) -> tuple[str, int]:
    return (lit[0], 0 if lit[1] else 1)


def _clause_key(c: Clause) -> tuple:
    return (len(c), [_lit_key(l) for l in c])


def _canon(clauses) -> tuple[Clause, ...]:
    sets = {frozenset(c) for c in clauses}
    kept = [s for s in sets if not any(o < s for o in sets)]
    out = [tuple(sorted(s, key=_lit_key)) for s in kept]
    out.sort(key=_clause_key)
    return tuple(out)


@dataclass(frozen=True)
class DNF:
    """Join of meets of literals; `()` is 0 and `((),)` is 1."""

    clauses: tuple[Clause, ...]

    @staticmethod
    def zero() -> "DNF":
        return _ZERO

    @staticmethod
    def one() -> "DNF":
        return _ONE

    @staticmethod
    def const(bit: int) -> "DNF":
        return _ONE if bit else _ZERO

    @staticmethod
    def var(name: str) -> "DNF":
        return DNF((((name, True),),))

    def is_zero(self) -> bool:
        return not self.clauses

    def is_one(self) -> bool:
        return self.clauses == ((),)

    def endpoint(self) -> int | None:
        if self.is_zero():
            return 0
        if self.is_one():
            return 1
        return None

    def as_dir(self) -> str | None:
        if len(self.clauses) == 1 and len(self.clauses[0]) == 1:
            name, pos = self.clauses[0][0]
            if pos:
                return name
        return None

    def dirs(self) -> frozenset[str]:
        return frozenset(name for c in self.clauses for name, _ in c)

    def join(self, other: "DNF") -> "DNF":
        if self.is_one() or other.is_zero():
            return self
        if other.is_one() or self.is_zero():
            return other
        return DNF(_canon(self.clauses + other.clauses))

    def meet(self, other: "DNF") -> "DNF":
        if self.is_zero() or other.is_one():
            return self
        if other.is_zero() or self.is_one():
            return other
        return DNF(_canon(a + b for a in self.clauses for b in other.clauses))

    def neg(self) -> "DNF":
        # not (join of meets) = meet of joins of complemented literals
        out = _ONE
        for clause in self.clauses:
            disj = DNF(_canon(((n, not p),) for n, p in clause)) if clause else _ZERO
            out = out.meet(disj)
        return out

    def subst(self, sigma: Mapping[str, "DNF"]) -> "DNF":
        if not sigma or not (self.dirs() & sigma.keys()):
            return self
        out = _ZERO
        for clause in self.clauses:
            acc = _ONE
            for name, pos in clause:
                r = sigma.get(name)
                if r is None:
                    r = DNF.var(name)
                lit = r if pos else r.neg()
                acc = acc.meet(lit)
                if acc.is_zero():
                    break
            out = out.join(acc)
            if out.is_one():
                break
        return out

    def to_term(self) -> IntervalTerm:
        if self.is_zero():
            return IZero()
        if self.is_one():
            return IOne()
        joined: IntervalTerm | None = None
        for clause in self.clauses:
            met: IntervalTerm | None = None
            for name, pos in clause:
                lit: IntervalTerm = IDir(name) if pos else INeg(IDir(name))
                met = lit if met is None else IMeet(met, lit)
            assert met is not None
            joined = met if joined is None else IJoin(joined, met)
        assert joined is not None
        return joined

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        if self.is_one():
            return "1"
        parts = []
        for c in self.clauses:
            lits = [n if p else "~" + n for n, p in c]
            parts.append(" /\\ ".join(lits))
        if len(parts) == 1:
            return parts[0]
        return " \\/ ".join(f"({p})" if "/\\" in p else p for p in parts)


_ZERO = DNF(())
_ONE = DNF(((),))


def normalize(t: IntervalTerm) -> DNF:
    match t:
        case IZero():
            return _ZERO
        case IOne():
            return _ONE
        case IDir(name):
            return DNF.var(name)
        case INeg(a):
            return normalize(a).neg()
        case IMeet(a, b):
            return normalize(a).meet(normalize(b))
        case IJoin(a, b):
            return normalize(a).join(normalize(b))
    raise TypeError(f"not an interval term: {t!r}")


def iequal(a: IntervalTerm, b: IntervalTerm) -> bool:
    return normalize(a) == normalize(b)


def isubst(t: IntervalTerm, sigma: Mapping[str, IntervalTerm]) -> IntervalTerm:
    """Apply the homomorphism determined by `sigma` to `t`."""
    match t:
        case IZero() | IOne():
            return t
        case IDir(name):
            if name not in sigma:
                raise ScopeError(f"direction {name} is not covered by the substitution")
            return sigma[name]
        case INeg(a):
            return INeg(isubst(a, sigma))
        case IMeet(a, b):
            return IMeet(isubst(a, sigma), isubst(b, sigma))
        case IJoin(a, b):
            return IJoin(isubst(a, sigma), isubst(b, sigma))
    raise TypeError(f"not an interval term: {t!r}")


# -- the four element de Morgan algebra ------------------------------------
#
# Elements are bit pairs (p, q): 0 = (0,0), 1 = (1,1), b = (1,0), nb = (0,1).
# Meet and join are componentwise, negation is (p, q) -> (1-q, 1-p), which
# fixes both middle elements.  This algebra generates the whole variety.

DM4_ELEMENTS: tuple[tuple[int, int], ...] = ((0, 0), (1, 0), (0, 1), (1, 1))


def dm4_eval(t: IntervalTerm, env: Mapping[str, tuple[int, int]]) -> tuple[int, int]:
    match t:
        case IZero():
            return (0, 0)
        case IOne():
            return (1, 1)
        case IDir(name):
            return env[name]
        case INeg(a):
            p, q = dm4_eval(a, env)
            return (1 - q, 1 - p)
        case IMeet(a, b):
            (p, q), (r, s) = dm4_eval(a, env), dm4_eval(b, env)
            return (p & r, q & s)
        case IJoin(a, b):
            (p, q), (r, s) = dm4_eval(a, env), dm4_eval(b, env)
            return (p | r, q | s)
    raise TypeError(f"not an interval term: {t!r}")


def dm4_equal(a: IntervalTerm, b: IntervalTerm) -> bool:
    """Exhaustive oracle: equal under every assignment into DM4."""
    names = sorted(term_dirs(a) | term_dirs(b))
    for values in itertools.product(DM4_ELEMENTS, repeat=len(names)):
        env = dict(zip(names, values))
        if dm4_eval(a, env) != dm4_eval(b, env):
            return False
    return True
