"""Twisted complexes over the generators and the negative braiding functor.

A twisted complex here is a list of slots ``(object, degree)`` together with
a square-zero differential raising degree by one. A morphism of degree ``g``
is a block matrix whose entry from slot ``s`` to slot ``t`` satisfies
``deg(t) - deg(s) = g``. Composition is naive block multiplication; the
structure maps are

    mu1_delta(a)     = (-1)^{|a|} delta . a - a . delta
    mu2_delta(a2, a1) = (-1)^{|a1|} a2 . a1
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .klrw_core import (
    AlgebraElement,
    KLRWError,
    NormalMorphism,
    QuiverConfig,
    compose,
    delta_ijk,
    e,
    mu2,
)


class Slot(tuple):
    """``(object, degree)``."""

    def __new__(cls, obj: int, degree: int):
        return super().__new__(cls, (obj, degree))

    @property
    def obj(self) -> int:
        return self[0]

    @property
    def degree(self) -> int:
        return self[1]


@dataclass(frozen=True)
class TwComplex:
    slots: tuple
    differential: tuple = ()  # ((target index, source index, AlgebraElement), ...)

    def __post_init__(self):
        for t, s, x in self.differential:
            if self.slots[t].degree != self.slots[s].degree + 1:
                raise KLRWError("differential must raise degree by one")

    @classmethod
    def single(cls, obj: int) -> "TwComplex":
        cx = _SINGLES.get(obj)
        if cx is None:
            cx = _SINGLES[obj] = cls((Slot(obj, 0),))
        return cx

    def delta(self) -> "TwMorphism":
        blocks = {(s, t): x for t, s, x in self.differential}
        return TwMorphism(self, self, 1, blocks)

    def __repr__(self) -> str:
        return "[" + ", ".join(f"T{o}<{d}>" for o, d in self.slots) + "]"


_SINGLES: dict[int, TwComplex] = {}


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


class TwMorphism:
    """Degree-``g`` morphism; ``blocks[(source slot index, target slot index)]``."""

    __slots__ = ("source", "target", "degree", "blocks")

    def __init__(self, source: TwComplex, target: TwComplex, degree: int, blocks: dict | None = None):
        self.source = source
        self.target = target
        self.degree = degree
        clean = {}
        for (si, ti), x in (blocks or {}).items():
            if not x:
                continue
            s, t = source.slots[si], target.slots[ti]
            if t.degree - s.degree != degree:
                raise KLRWError(f"block {s}->{t} does not have degree {degree}")
            for m in x.terms:
                if m.source != s.obj or m.target != t.obj:
                    raise KLRWError(f"block {s}->{t} contains {m!r}")
            clean[(si, ti)] = x
        self.blocks = clean

    @classmethod
    def zero(cls, source: TwComplex, target: TwComplex, degree: int) -> "TwMorphism":
        return cls(source, target, degree, {})

    def __bool__(self) -> bool:
        return bool(self.blocks)

    def is_zero(self) -> bool:
        return not self.blocks

    def _check_same(self, other: "TwMorphism"):
        if self.source != other.source or self.target != other.target:
            raise KLRWError("morphisms live in different hom spaces")

    def __add__(self, other: "TwMorphism") -> "TwMorphism":
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        self._check_same(other)
        if self.degree != other.degree:
            raise KLRWError("cannot add morphisms of different degree")
        blocks = dict(self.blocks)
        for k, x in other.blocks.items():
            blocks[k] = blocks[k] + x if k in blocks else x
        return TwMorphism(self.source, self.target, self.degree, blocks)

    def __neg__(self) -> "TwMorphism":
        return TwMorphism(self.source, self.target, self.degree, {k: -x for k, x in self.blocks.items()})

    def __sub__(self, other: "TwMorphism") -> "TwMorphism":
        return self + (-other)

    def __mul__(self, c) -> "TwMorphism":
        if c == 1 or not self.blocks:
            return self
        return TwMorphism(self.source, self.target, self.degree, {k: x * c for k, x in self.blocks.items()})

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, TwMorphism):
            return (self - other).is_zero()
        return NotImplemented

    def __matmul__(self, other: "TwMorphism") -> "TwMorphism":
        """Naive block composition ``self . other`` (other acts first)."""
        if other.target != self.source:
            raise KLRWError("twisted morphisms are not composable")
        blocks: dict = {}
        if not self.blocks or not other.blocks:
            return TwMorphism(other.source, self.target, self.degree + other.degree)
        for (s1, t1), x1 in other.blocks.items():
            for (s2, t2), x2 in self.blocks.items():
                if s2 != t1:
                    continue
                prod = mu2(x2, x1)
                if prod:
                    key = (s1, t2)
                    blocks[key] = blocks[key] + prod if key in blocks else prod
        return TwMorphism(other.source, self.target, self.degree + other.degree, blocks)

    def block_records(self) -> list[dict]:
        out = []
        for (si, ti), x in sorted(self.blocks.items()):
            s, t = self.source.slots[si], self.target.slots[ti]
            out.append({
                "sourceSlot": [s.obj, s.degree],
                "targetSlot": [t.obj, t.degree],
                "degree": self.degree,
                "terms": [{"morphism": repr(m), "coeff": str(c)} for m, c in x.sorted_items()],
            })
        return out

    def __repr__(self) -> str:
        if not self.blocks:
            return "0"
        parts = []
        for (si, ti), x in sorted(self.blocks.items()):
            s, t = self.source.slots[si], self.target.slots[ti]
            parts.append(f"[T{s.obj}<{s.degree}> -> T{t.obj}<{t.degree}>: {x!r}]")
        return " ".join(parts)


def mu_delta1(f: TwMorphism) -> TwMorphism:
    if not f.blocks:
        return TwMorphism(f.source, f.target, f.degree + 1)
    d_t, d_s = f.target.delta(), f.source.delta()
    sign = -1 if f.degree % 2 else 1
    return (d_t @ f) * sign - (f @ d_s)


def mu_delta2(f2: TwMorphism, f1: TwMorphism) -> TwMorphism:
    sign = -1 if f1.degree % 2 else 1
    return (f2 @ f1) * sign


def embed(x: AlgebraElement | NormalMorphism, source: TwComplex | None = None,
          target: TwComplex | None = None) -> TwMorphism:
    """A degree-0 morphism between generators viewed as one-slot complexes."""
    if isinstance(x, NormalMorphism):
        x = AlgebraElement({x: 1})
    if not x:
        if source is None or target is None:
            raise KLRWError("zero element needs explicit endpoints")
        return TwMorphism.zero(source, target, 0)
    m = next(iter(x.terms))
    src = source or TwComplex.single(m.source)
    tgt = target or TwComplex.single(m.target)
    return TwMorphism(src, tgt, 0, {(0, 0): x})


# ---------------------------------------------------------------------------
# negative braiding functor


def _el(j: int, i: int, dots: int = 0, c=1) -> AlgebraElement:
    return AlgebraElement({NormalMorphism(j, i, dots): c})


class NegativeBraiding:
    """The functor ``beta_{i-}`` on generators, morphisms and composable pairs."""

    def __init__(self, cfg: QuiverConfig, i: int):
        cfg.check_braid_index(i)
        self.cfg = cfg
        self.i = i
        i_ = i
        self._cone = TwComplex(
            (Slot(i_, -1), Slot(i_ - 1, 0), Slot(i_ + 1, 0)),
            (
                (1, 0, _el(i_ - 1, i_)),        # q_{i-1}
                (2, 0, _el(i_ + 1, i_, 0, -1)),  # -p_{i+1}
            ),
        )

    # slots of beta T_i
    TOP, LEFT, RIGHT = 0, 1, 2

    def object(self, j: int) -> TwComplex:
        self.cfg.check_object(j)
        if j == self.i:
            return self._cone
        return TwComplex.single(j)

    def beta1(self, m: NormalMorphism) -> TwMorphism:
        k, j, alpha = m
        i = self.i
        src, tgt = self.object(j), self.object(k)
        if j != i and k != i:
            return TwMorphism(src, tgt, 0, {(0, 0): _el(k, j, alpha)})
        if k == i and j != i:
            if j > i:
                return TwMorphism(src, tgt, 0, {(0, self.RIGHT): _el(i + 1, j, alpha)})
            return TwMorphism(src, tgt, 0, {(0, self.LEFT): _el(i - 1, j, alpha)})
        if j == i and k != i:
            if k > i:
                blocks = {(self.LEFT, 0): _el(k, i - 1, alpha), (self.RIGHT, 0): _el(k, i + 1, alpha + 1)}
            else:
                blocks = {(self.LEFT, 0): _el(k, i - 1, alpha + 1), (self.RIGHT, 0): _el(k, i + 1, alpha)}
            return TwMorphism(src, tgt, 0, blocks)
        return TwMorphism(src, tgt, 0, {
            (self.TOP, self.TOP): _el(i, i, alpha),
            (self.LEFT, self.LEFT): _el(i - 1, i - 1, alpha),
            (self.RIGHT, self.RIGHT): _el(i + 1, i + 1, alpha),
        })

    def beta1_elem(self, x: AlgebraElement, source: int, target: int) -> TwMorphism:
        out = TwMorphism.zero(self.object(source), self.object(target), 0)
        for m, c in x.terms.items():
            out = out + self.beta1(m) * c
        return out

    def beta2(self, m2: NormalMorphism, m1: NormalMorphism) -> TwMorphism:
        l, k, beta = m2
        k1, j, alpha = m1
        if k != k1:
            raise KLRWError(f"{m2!r} and {m1!r} are not composable")
        i = self.i
        src, tgt = self.object(j), self.object(l)
        if l != i:
            return TwMorphism.zero(src, tgt, -1)
        if j != i:
            if (i - j) * (i - k) < 0:
                x = _el(i, j, beta + alpha + abs(i - k) - 1, _sgn(i - k))
                return TwMorphism(src, tgt, -1, {(0, self.TOP): x})
            return TwMorphism.zero(src, tgt, -1)
        sg = _sgn(i - k)
        if sg == 0:
            return TwMorphism.zero(src, tgt, -1)
        slot = self.RIGHT if sg > 0 else self.LEFT
        x = _el(i, i + sg, beta + alpha + abs(i - k) - 1, sg)
        return TwMorphism(src, tgt, -1, {(slot, self.TOP): x})

    def beta2_elem(self, x2: AlgebraElement, x1: AlgebraElement, source: int, target: int) -> TwMorphism:
        out = TwMorphism.zero(self.object(source), self.object(target), -1)
        for m2, c2 in x2.terms.items():
            for m1, c1 in x1.terms.items():
                out = out + self.beta2(m2, m1) * (c2 * c1)
        return out


def check_chain(chain: Sequence[NormalMorphism]) -> None:
    for left, right in zip(chain, chain[1:]):
        if left.source != right.target:
            raise KLRWError(f"chain is not composable at {left!r}, {right!r}")


def verify_functor(cfg: QuiverConfig, i: int, chain: Sequence[NormalMorphism]) -> TwMorphism:
    """Residual of the A-infinity functor equation on a chain ``[a_d, ..., a_1]``.

    d = 1: ``mu1(beta1 a)``;
    d = 2: ``delta beta2 + beta2 delta - beta1(a2) beta1(a1) + beta1(a2 a1)``;
    d = 3: ``beta2(a3,a2) beta1(a1) - beta1(a3) beta2(a2,a1) - beta2(a3, a2 a1) + beta2(a3 a2, a1)``.
    """
    F = NegativeBraiding(cfg, i)
    chain = list(chain)
    check_chain(chain)
    d = len(chain)
    if d == 1:
        return mu_delta1(F.beta1(chain[0]))
    if d == 2:
        a2, a1 = chain
        b2 = F.beta2(a2, a1)
        lhs = F.object(a2.target).delta() @ b2 + b2 @ F.object(a1.source).delta()
        rhs = F.beta1(a2) @ F.beta1(a1) - F.beta1(compose(a2, a1))
        return lhs - rhs
    if d == 3:
        a3, a2, a1 = chain
        lhs = F.beta2(a3, a2) @ F.beta1(a1) - F.beta1(a3) @ F.beta2(a2, a1)
        rhs = F.beta2(a3, compose(a2, a1)) - F.beta2(compose(a3, a2), a1)
        return lhs - rhs
    raise KLRWError("functor equations are checked for chains of length 1, 2 or 3")


def composable_chains(cfg: QuiverConfig, length: int, max_dots: int):
    """All chains ``[a_d, ..., a_1]`` of basis morphisms with at most ``max_dots`` dots."""
    objs = list(cfg.objects)

    def rec(prefix_target_side: list, remaining: int):
        if remaining == 0:
            yield list(prefix_target_side)
            return
        last = prefix_target_side[-1]
        for src in objs:
            for d in range(max_dots + 1):
                prefix_target_side.append(NormalMorphism(last.source, src, d))
                yield from rec(prefix_target_side, remaining - 1)
                prefix_target_side.pop()

    for tgt in objs:
        for src in objs:
            for d in range(max_dots + 1):
                yield from rec([NormalMorphism(tgt, src, d)], length - 1)
