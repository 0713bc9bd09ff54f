"""The face lattice: cofibrant propositions over a set of directions.

A `Face` is a join of conjuncts; each conjunct is a consistent partial map
from directions to endpoints.  Inconsistent conjuncts are dropped and the
join is kept as an antichain, which makes the representation canonical.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Union

from .interval import DNF, IntervalTerm, normalize

Conjunct = tuple[tuple[str, int], ...]


def _canon(conjs: Iterable[Mapping[str, int]]) -> tuple[Conjunct, ...]:
    sets = {frozenset(c.items()) for c in conjs}
    kept = [s for s in sets if not any(o < s for o in sets)]
    out = [tuple(sorted(s)) for s in kept]
    out.sort(key=lambda c: (len(c), c))
    return tuple(out)


def _merge(a: Mapping[str, int], b: Mapping[str, int]) -> dict[str, int] | None:
    out = dict(a)
    for k, v in b.items():
        if out.get(k, v) != v:
            return None
        out[k] = v
    return out


class Truth(Enum):
    TRUE = "true"
    FALSE = "false"
    NEITHER = "neither"


@dataclass(frozen=True)
class Face:
    """`()` is bottom and `((),)` is top."""

    conjuncts: tuple[Conjunct, ...]

    @staticmethod
    def top() -> "Face":
        return TOP

    @staticmethod
    def bot() -> "Face":
        return BOT

    @staticmethod
    def atom(name: str, bit: int) -> "Face":
        return Face((((name, bit),),))

    @staticmethod
    def of_maps(maps: Iterable[Mapping[str, int]]) -> "Face":
        return Face(_canon(maps))

    def is_top(self) -> bool:
        return self.conjuncts == ((),)

    def is_bot(self) -> bool:
        return not self.conjuncts

    def dirs(self) -> frozenset[str]:
        return frozenset(k for c in self.conjuncts for k, _ in c)

    def maps(self) -> Iterator[dict[str, int]]:
        for c in self.conjuncts:
            yield dict(c)

    def split(self) -> list["Face"]:
        """One single-conjunct face per conjunct."""
        return [Face((c,)) for c in self.conjuncts]

    def subst_map(self) -> dict[str, DNF]:
        """For a single conjunct, the substitution that realizes it."""
        assert len(self.conjuncts) == 1, self
        return {k: DNF.const(v) for k, v in self.conjuncts[0]}

    def __or__(self, other: "Face") -> "Face":
        return for_(self, other)

    def __and__(self, other: "Face") -> "Face":
        return fand(self, other)

    def __le__(self, other: "Face") -> bool:
        return fand(self, other) == self

    def __str__(self) -> str:
        if self.is_top():
            return "(1 = 1)"
        if self.is_bot():
            return "(0 = 1)"
        parts = []
        for c in self.conjuncts:
            parts.append(" /\\ ".join(f"({k} = {v})" for k, v in c))
        return " \\/ ".join(parts)


TOP = Face(((),))
BOT = Face(())


def for_(a: Face, b: Face) -> Face:
    if a.is_top() or b.is_bot():
        return a
    if b.is_top() or a.is_bot():
        return b
    return Face.of_maps(itertools.chain(a.maps(), b.maps()))


def fand(a: Face, b: Face) -> Face:
    if a.is_bot() or b.is_top():
        return a
    if b.is_bot() or a.is_top():
        return b
    out = []
    for x in a.maps():
        for y in b.maps():
            m = _merge(x, y)
            if m is not None:
                out.append(m)
    return Face.of_maps(out)


def face_eq(r: Union[DNF, IntervalTerm], e: int) -> Face:
    """The image of the equation r = e in the face lattice."""
    d = r if isinstance(r, DNF) else normalize(r)
    if e == 0:
        d = d.neg()
    out = []
    for clause in d.clauses:
        m: dict[str, int] | None = {}
        for name, pos in clause:
            m = _merge(m, {name: 1 if pos else 0})
            if m is None:
                break
        if m is not None:
            out.append(m)
    return Face.of_maps(out)


def fsubst(phi: Face, sigma: Mapping[str, DNF]) -> Face:
    """Image of phi under the lattice map induced by a cube morphism."""
    if not sigma or not (phi.dirs() & sigma.keys()):
        return phi
    out = BOT
    for c in phi.conjuncts:
        acc = TOP
        for name, bit in c:
            r = sigma.get(name)
            atom = Face.atom(name, bit) if r is None else face_eq(r, bit)
            acc = fand(acc, atom)
            if acc.is_bot():
                break
        out = for_(out, acc)
        if out.is_top():
            break
    return out


def forall_dir(x: str, phi: Face) -> Face:
    """Greatest x-free face below phi: drop every conjunct that mentions x."""
    return Face(tuple(c for c in phi.conjuncts if all(k != x for k, _ in c)))


def truth(phi: Face) -> Truth:
    if phi.is_top():
        return Truth.TRUE
    if phi.is_bot():
        return Truth.FALSE
    return Truth.NEITHER


def compose_subst(first: Mapping[str, DNF], then: Mapping[str, DNF]) -> dict[str, DNF]:
    """The substitution that applies `first` and then `then`."""
    out = {k: v.subst(then) for k, v in first.items()}
    for k, v in then.items():
        out.setdefault(k, v)
    return out


# -- three-state semantics -------------------------------------------------
#
# Each direction is independently "=0", "=1" or neither (None).  Faces are
# equal in the lattice exactly when they agree on every such assignment.

STATES = (0, 1, None)


def eval3(phi: Face, assignment: Mapping[str, int | None]) -> bool:
    return any(all(assignment.get(k) == v for k, v in c) for c in phi.conjuncts)


def oracle_equal(a: Face, b: Face, names: Iterable[str] | None = None) -> bool:
    ns = sorted(set(names) if names is not None else (a.dirs() | b.dirs()))
    for vals in itertools.product(STATES, repeat=len(ns)):
        env = dict(zip(ns, vals))
        if eval3(a, env) != eval3(b, env):
            return False
    return True


def oracle_leq(a: Face, b: Face, names: Iterable[str] | None = None) -> bool:
    ns = sorted(set(names) if names is not None else (a.dirs() | b.dirs()))
    for vals in itertools.product(STATES, repeat=len(ns)):
        env = dict(zip(ns, vals))
        if eval3(a, env) and not eval3(b, env):
            return False
    return True
