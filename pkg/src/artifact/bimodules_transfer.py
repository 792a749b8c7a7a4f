"""Bimodules over the KLRW algebra, the normalized bar complex and the transfer map.

Three bimodules are modelled concretely:

* ``Delta``: the algebra itself, basis ``a_{kj} s^alpha``;
* ``Braided(i)``: the kernel of ``Delta -> Simple(i)``, i.e. every basis
  element except ``e_i``; this is the bimodule of the negative braiding;
* ``Simple(i)``: one-dimensional, spanned by the class of ``e_i``.

The comparison map ``G_n`` from the normalized bar complex to the small
resolution is available in two forms, the recursive definition through
``rho`` and the closed "sum over descendants" rule; they agree.
"""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache
from typing import Hashable, NamedTuple, Sequence

from .klrw_core import (
    AlgebraElement,
    KLRWError,
    NormalMorphism,
    QuiverConfig,
    compose,
    descendants,
    e,
    hom_basis,
    normal_word,
)
from .linear import LinComb
from .resolution import ResolutionElement, rho, split, vertex


# ---------------------------------------------------------------------------
# bimodules


class SimpleClass(NamedTuple):
    """The image of ``e_i`` in the one-dimensional bimodule."""

    vertex: int

    def __repr__(self) -> str:
        return f"es{self.vertex}"


class ModuleElement(LinComb):
    __slots__ = ()


class Bimodule:
    """Graded bimodule with an explicit basis of each ``M(T_source, T_target)``."""

    name = "bimodule"

    def __init__(self, cfg: QuiverConfig):
        self.cfg = cfg

    def basis(self, source: int, target: int, q: int) -> list:
        raise NotImplementedError

    def label_qdeg(self, m) -> int:
        raise NotImplementedError

    def act(self, x: NormalMorphism, m, y: NormalMorphism) -> dict:
        """``x . m . y`` as a dict label -> coefficient."""
        raise NotImplementedError

    def contains(self, m) -> bool:
        raise NotImplementedError

    def __repr__(self) -> str:
        return self.name


class Diagonal(Bimodule):
    name = "delta"

    def basis(self, source, target, q):
        return hom_basis(self.cfg, source, target, q)

    def label_qdeg(self, m):
        return m.qdeg

    def contains(self, m):
        return isinstance(m, NormalMorphism)

    def act(self, x, m, y):
        return {compose(compose(x, m), y): Fraction(1)}


class Braided(Diagonal):
    """Kernel of the projection onto the simple bimodule at ``i``."""

    def __init__(self, cfg: QuiverConfig, i: int):
        super().__init__(cfg)
        cfg.check_object(i)
        self.i = i
        self.name = f"braided({i})"

    def basis(self, source, target, q):
        return [m for m in hom_basis(self.cfg, source, target, q) if m != e(self.i)]

    def contains(self, m):
        return isinstance(m, NormalMorphism) and m != e(self.i)

    def act(self, x, m, y):
        out = compose(compose(x, m), y)
        if out == e(self.i):  # cannot happen: q-degree is additive
            raise KLRWError("kernel model is not closed under the action")
        return {out: Fraction(1)}


class Simple(Bimodule):
    def __init__(self, cfg: QuiverConfig, i: int):
        super().__init__(cfg)
        cfg.check_object(i)
        self.i = i
        self.name = f"simple({i})"

    def basis(self, source, target, q):
        if source == target == self.i and q == 0:
            return [SimpleClass(self.i)]
        return []

    def label_qdeg(self, m):
        return 0

    def contains(self, m):
        return m == SimpleClass(self.i)

    def act(self, x, m, y):
        if x == e(self.i) and y == e(self.i):
            return {m: Fraction(1)}
        return {}


def make_module(cfg: QuiverConfig, name: str, i: int | None = None) -> Bimodule:
    key = name.lower()
    if key in ("delta", "diagonal", "id"):
        return Diagonal(cfg)
    if i is None:
        raise KLRWError(f"module {name!r} needs an index")
    if key in ("braided", "b", "beta"):
        return Braided(cfg, i)
    if key in ("simple", "s"):
        return Simple(cfg, i)
    raise KLRWError(f"unknown module {name!r}")


def iota(i: int, x: ModuleElement | LinComb) -> AlgebraElement:
    """Inclusion of the braided bimodule into the diagonal one."""
    out = AlgebraElement()
    for m, c in x.items():
        if not isinstance(m, NormalMorphism) or m == e(i):
            raise KLRWError(f"{m!r} is not a basis element of braided({i})")
        out.add_term(m, c)
    return out


def pi(i: int, x: AlgebraElement | NormalMorphism) -> ModuleElement:
    """Projection of the diagonal bimodule onto the simple one at ``i``."""
    if isinstance(x, NormalMorphism):
        x = AlgebraElement({x: 1})
    return ModuleElement({SimpleClass(i): x.coeff(e(i))})


# ---------------------------------------------------------------------------
# normalized bar complex


class BarElement(LinComb):
    """Combination of ``a (x) [y_n | ... | y_1] (x) b`` (tuple stored left to right)."""

    __slots__ = ()

    @property
    def degree(self) -> int | None:
        degs = {len(ys) for (_, ys, _) in self.terms}
        if len(degs) > 1:
            raise KLRWError("mixed bar degrees")
        return degs.pop() if degs else None

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (x, ys, y), c in self.sorted_items():
            t = f"{x!r}[{'|'.join(repr(m) for m in ys)}]{y!r}"
            parts.append(t if c == 1 else f"{c}*{t}")
        return " + ".join(parts)


def bar_term(a: NormalMorphism, ys: Sequence[NormalMorphism], b: NormalMorphism) -> tuple:
    ys = tuple(ys)
    chain = (a,) + ys + (b,)
    for left, right in zip(chain, chain[1:]):
        if left.source != right.target:
            raise KLRWError(f"bar tensor is not composable at {left!r}, {right!r}")
    for y in ys:
        if y.is_idempotent:
            raise KLRWError("idempotent entries are zero in the normalized bar complex")
    return (a, ys, b)


def bar_generator(ys: Sequence[NormalMorphism]) -> BarElement:
    ys = tuple(ys)
    return BarElement({bar_term(e(ys[0].target), ys, e(ys[-1].source)): 1})


def bar_boundary(x: BarElement) -> BarElement:
    out = BarElement()
    for (a, ys, b), c in x.terms.items():
        n = len(ys)
        if n == 0:
            raise KLRWError("bar boundary needs degree >= 1")
        # ys[k] is y_{n-k}
        out.add_term((a, ys[:-1], compose(ys[-1], b)), c)
        for i in range(1, n):
            pos = n - 1 - i  # index of y_{i+1}
            prod = compose(ys[pos], ys[pos + 1])
            if prod.is_idempotent:
                continue
            out.add_term((a, ys[:pos] + (prod,) + ys[pos + 2:], b), c * (-1) ** i)
        out.add_term((compose(a, ys[0]), ys[1:], b), c * (-1) ** n)
    return out


def bar_to_resolution0(x: BarElement) -> ResolutionElement:
    out = ResolutionElement()
    for (a, ys, b), c in x.terms.items():
        if ys:
            raise KLRWError("only degree-0 bar elements are identified with P_0")
        out.add_term((a, vertex(a.source), b), c)
    return out


def random_bar_element(rng: random.Random, cfg: QuiverConfig, n: int, max_dots: int = 3,
                       terms: int = 1) -> BarElement:
    """Random composable bar element with non-idempotent middle entries."""
    out = BarElement()
    objs = list(cfg.objects)
    for _ in range(terms):
        verts = [rng.choice(objs) for _ in range(n + 1)]
        ys = []
        for k in range(n):
            tgt, src = verts[k], verts[k + 1]
            lo = 1 if tgt == src else 0
            ys.append(NormalMorphism(tgt, src, rng.randint(lo, max(lo, max_dots))))
        a = NormalMorphism(rng.choice(objs), verts[0], rng.randint(0, max_dots))
        b = NormalMorphism(verts[-1], rng.choice(objs), rng.randint(0, max_dots))
        out.add_term(bar_term(a, ys, b), rng.choice([1, -1, 2, Fraction(1, 2)]))
    return out


# ---------------------------------------------------------------------------
# transfer map


def _left_act(x: NormalMorphism, elem: ResolutionElement) -> ResolutionElement:
    return ResolutionElement({(compose(x, u), w, v): c for (u, w, v), c in elem.terms.items()})


@lru_cache(maxsize=None)
def _G_unit(ys: tuple, b: NormalMorphism) -> ResolutionElement:
    """``G_n(1 (x) [ys] (x) b)`` through ``rho_{n-1} G_{n-1} dbar_n``."""
    n = len(ys)
    if n == 0:
        return ResolutionElement({(e(b.target), vertex(b.target), b): 1})
    unit = e(ys[0].target)
    lower = transfer_G_recursive(n - 1, bar_boundary(BarElement({(unit, ys, b): 1})))
    return rho(n - 1, lower)


def transfer_G_recursive(n: int, x: BarElement) -> ResolutionElement:
    out = ResolutionElement()
    for (a, ys, b), c in x.terms.items():
        if len(ys) != n:
            raise KLRWError(f"bar element of degree {len(ys)}, expected {n}")
        out.iadd(_left_act(a, _G_unit(ys, b)), c)
    return out


@lru_cache(maxsize=None)
def _G_closed_unit(ys: tuple) -> ResolutionElement:
    n = len(ys)
    if n == 0:
        raise KLRWError("degree-0 transfer is the identity")
    word = ()
    for y in ys:
        word += normal_word(y)
    seen = set()
    for w in descendants(word):
        seen.update(split(n, w).terms)
    return ResolutionElement({t: 1 for t in seen})


def transfer_G_closed(n: int, x: BarElement) -> ResolutionElement:
    """``G_n(a (x) [y] (x) b) = a . (sum of distinct split_n(w), w <= y_n...y_1) . b``.

    Enumerates every descendant of ``y_n...y_1``; the count grows
    exponentially with the number of dots, so this is a reference
    implementation for small inputs.
    """
    out = ResolutionElement()
    for (a, ys, b), c in x.terms.items():
        if len(ys) != n:
            raise KLRWError(f"bar element of degree {len(ys)}, expected {n}")
        if n == 0:
            out.add_term((a, vertex(a.source), b), c)
            continue
        for (u, w, v), k in _G_closed_unit(ys).terms.items():
            out.add_term((compose(a, u), w, compose(v, b)), c * k)
    return out


def transfer_G(n: int, x: BarElement, method: str = "recursive") -> ResolutionElement:
    """The comparison map ``G_n``; ``method`` is ``"recursive"`` or ``"closed"``."""
    if method == "recursive":
        return transfer_G_recursive(n, x)
    if method == "closed":
        return transfer_G_closed(n, x)
    raise KLRWError(f"unknown transfer method {method!r}")
