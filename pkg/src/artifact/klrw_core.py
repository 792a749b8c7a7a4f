"""The sl2 KLRW quiver algebra with one black strand.

Objects are ``T_0 .. T_N`` where ``N`` is the number of punctures. Arrows:

* ``p(i)``: ``T_{i-1} -> T_i``  (``1 <= i <= N``)
* ``q(i)``: ``T_{i+1} -> T_i``  (``0 <= i <= N-1``)
* ``s(i)``: ``T_i -> T_i``      (a dot)

Words are written in composition order: the rightmost letter acts first.
The reduction system

    q_i p_{i+1} -> s_i,   p_i q_{i-1} -> s_i,
    s_i p_i -> p_i s_{i-1},   s_i q_i -> q_i s_{i+1}

is confluent, and its irreducible words are the monotone paths with all
dots pushed to the source end. These are stored as :class:`NormalMorphism`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .linear import LinComb


class KLRWError(ValueError):
    """Structural error: bad index or non-composable input."""


class CompositionError(KLRWError):
    pass


@dataclass(frozen=True)
class QuiverConfig:
    punctures: int

    def __post_init__(self):
        if not isinstance(self.punctures, int) or self.punctures < 1:
            raise KLRWError(f"number of punctures must be a positive integer, got {self.punctures!r}")

    @property
    def objects(self) -> range:
        return range(self.punctures + 1)

    @property
    def braid_indices(self) -> range:
        return range(1, self.punctures)

    def check_object(self, i: int) -> None:
        if not 0 <= i <= self.punctures:
            raise KLRWError(f"object index {i} outside 0..{self.punctures}")

    def check_braid_index(self, i: int) -> None:
        if not 1 <= i <= self.punctures - 1:
            raise KLRWError(f"braid index {i} outside 1..{self.punctures - 1}")


class Arrow(NamedTuple):
    kind: str  # "p", "q" or "s"
    index: int

    @property
    def source(self) -> int:
        if self.kind == "p":
            return self.index - 1
        if self.kind == "q":
            return self.index + 1
        return self.index

    @property
    def target(self) -> int:
        return self.index

    @property
    def qdeg(self) -> int:
        return 2 if self.kind == "s" else 1

    def check(self, cfg: QuiverConfig) -> None:
        n = cfg.punctures
        ok = {
            "p": 1 <= self.index <= n,
            "q": 0 <= self.index <= n - 1,
            "s": 0 <= self.index <= n,
        }.get(self.kind, False)
        if not ok:
            raise KLRWError(f"arrow {self} does not exist for {n} punctures")

    def __repr__(self) -> str:
        return f"{self.kind}{self.index}"


def p(i: int) -> Arrow:
    return Arrow("p", i)


def q(i: int) -> Arrow:
    return Arrow("q", i)


def s(i: int) -> Arrow:
    return Arrow("s", i)


Word = tuple  # tuple[Arrow, ...]


def word_endpoints(word: Sequence[Arrow]) -> tuple[int, int]:
    """(source, target) of a nonempty word; raises on non-composable letters."""
    if not word:
        raise KLRWError("empty word has no intrinsic endpoints")
    for left, right in zip(word, word[1:]):
        if left.source != right.target:
            raise CompositionError(f"letters {left!r} and {right!r} are not composable")
    return word[-1].source, word[0].target


@dataclass(frozen=True)
class Path:
    """A composable word; the empty word needs an explicit vertex."""

    word: tuple
    source: int
    target: int

    @classmethod
    def of(cls, word: Iterable[Arrow], vertex: int | None = None) -> "Path":
        w = tuple(word)
        if not w:
            if vertex is None:
                raise KLRWError("empty path needs a vertex")
            return cls((), vertex, vertex)
        src, tgt = word_endpoints(w)
        return cls(w, src, tgt)

    def __len__(self) -> int:
        return len(self.word)

    def __mul__(self, other: "Path") -> "Path":
        if self.source != other.target:
            raise CompositionError(f"cannot compose {self} after {other}")
        return Path(self.word + other.word, other.source, self.target)

    def __repr__(self) -> str:
        if not self.word:
            return f"e{self.source}"
        return "".join(repr(a) for a in self.word)


class NormalMorphism(NamedTuple):
    """Basis element ``a_{target,source} s^dots`` of Hom(T_source, T_target)."""

    target: int
    source: int
    dots: int = 0

    @property
    def qdeg(self) -> int:
        return 2 * self.dots + abs(self.source - self.target)

    @property
    def is_idempotent(self) -> bool:
        return self.dots == 0 and self.source == self.target

    def word(self) -> tuple:
        return normal_word(self)

    def path(self) -> Path:
        return Path(normal_word(self), self.source, self.target)

    def __repr__(self) -> str:
        j, i, a = self.target, self.source, self.dots
        if i == j:
            base = f"e{i}" if a == 0 else f"s{i}"
            return base if a <= 1 else f"s{i}^{a}"
        tail = "" if a == 0 else ("*s" if a == 1 else f"*s^{a}")
        return f"a({j},{i}){tail}"


def e(i: int) -> NormalMorphism:
    return NormalMorphism(i, i, 0)


def a(j: int, i: int, dots: int = 0) -> NormalMorphism:
    return NormalMorphism(j, i, dots)


def normal_word(m: NormalMorphism) -> tuple:
    """Irreducible word of ``a_{ji} s^alpha``: monotone strand, dots at the source."""
    j, i, alpha = m
    if i < j:
        strand = tuple(Arrow("p", t) for t in range(j, i, -1))
    elif i > j:
        strand = tuple(Arrow("q", t) for t in range(j, i))
    else:
        strand = ()
    return strand + (Arrow("s", i),) * alpha


class AlgebraElement(LinComb):
    """Rational combination of :class:`NormalMorphism` basis elements."""

    __slots__ = ()

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for m, c in self.sorted_items():
            out.append(f"{c}*{m!r}" if c != 1 else repr(m))
        return " + ".join(out)


def as_element(x) -> AlgebraElement:
    if isinstance(x, AlgebraElement):
        return x
    if isinstance(x, NormalMorphism):
        return AlgebraElement({x: 1})
    if isinstance(x, Arrow):
        return AlgebraElement({reduce_word((x,)): 1})
    if isinstance(x, Path):
        return AlgebraElement({reduce(x): 1})
    raise TypeError(f"cannot interpret {x!r} as an algebra element")


# ---------------------------------------------------------------------------
# rewriting


def rewrite_pair(left: Arrow, right: Arrow) -> tuple | None:
    """Right-hand side of the rule whose left side is ``left right``, if any."""
    lk, li = left
    rk, ri = right
    if lk == "q" and rk == "p" and ri == li + 1:
        return (Arrow("s", li),)
    if lk == "p" and rk == "q" and ri == li - 1:
        return (Arrow("s", li),)
    if lk == "s" and rk == "p" and ri == li:
        return (Arrow("p", li), Arrow("s", li - 1))
    if lk == "s" and rk == "q" and ri == li:
        return (Arrow("q", li), Arrow("s", li + 1))
    return None


def one_step_rewrites(word: Sequence[Arrow]) -> list[tuple]:
    """All words obtained from ``word`` by a single rule application."""
    out = []
    for k in range(len(word) - 1):
        rhs = rewrite_pair(word[k], word[k + 1])
        if rhs is not None:
            out.append(tuple(word[:k]) + rhs + tuple(word[k + 2:]))
    return out


def is_irreducible(word: Sequence[Arrow]) -> bool:
    return all(rewrite_pair(x, y) is None for x, y in zip(word, word[1:]))


def reduce_word_sequence(word: Sequence[Arrow]) -> tuple:
    """Irreducible form reached by always rewriting the leftmost redex."""
    w = tuple(word)
    while True:
        for k in range(len(w) - 1):
            rhs = rewrite_pair(w[k], w[k + 1])
            if rhs is not None:
                w = w[:k] + rhs + w[k + 2:]
                break
        else:
            return w


def parse_normal_word(word: Sequence[Arrow], vertex: int | None = None) -> NormalMorphism:
    if not word:
        if vertex is None:
            raise KLRWError("empty word needs a vertex")
        return e(vertex)
    src, tgt = word_endpoints(word)
    dots = sum(1 for x in word if x.kind == "s")
    m = NormalMorphism(tgt, src, dots)
    if normal_word(m) != tuple(word):
        raise KLRWError(f"word {word!r} is not irreducible")
    return m


def reduce_word(word: Sequence[Arrow], vertex: int | None = None) -> NormalMorphism:
    word = tuple(word)
    if word:
        word_endpoints(word)
    return parse_normal_word(reduce_word_sequence(word), vertex)


def reduce(path: Path | Sequence[Arrow]) -> NormalMorphism:
    """Normal form of a composable path under the rewriting system."""
    if isinstance(path, Path):
        return reduce_word(path.word, path.source)
    return reduce_word(path)


@lru_cache(maxsize=None)
def descendants(word: tuple) -> frozenset:
    """Every word reachable from ``word`` by zero or more rewriting steps."""
    seen = {word}
    todo = deque([word])
    while todo:
        w = todo.popleft()
        for v in one_step_rewrites(w):
            if v not in seen:
                seen.add(v)
                todo.append(v)
    return frozenset(seen)


def precedes(w1: Sequence[Arrow], w2: Sequence[Arrow]) -> bool:
    """``w1 <= w2`` in the reduction preorder (w1 reachable from w2)."""
    return tuple(w1) in descendants(tuple(w2))


# ---------------------------------------------------------------------------
# closed-form product and gradings


def delta_ijk(i: int, j: int, k: int) -> int:
    """Extra dots produced when composing ``T_i -> T_j -> T_k``."""
    if (i - j) * (j - k) >= 0:
        return 0
    return min(abs(i - j), abs(j - k))


def compose(m2: NormalMorphism, m1: NormalMorphism) -> NormalMorphism:
    """``m2 . m1`` for basis elements (m1 acts first)."""
    k, j2, beta = m2
    j, i, alpha = m1
    if j2 != j:
        raise CompositionError(f"cannot compose {m2!r} after {m1!r}")
    return NormalMorphism(k, i, beta + alpha + delta_ijk(i, j, k))


def mu2(a2, a1) -> AlgebraElement:
    """Bilinear product; raises if some pair of terms is not composable."""
    x2, x1 = as_element(a2), as_element(a1)
    out: dict = {}
    for m2, c2 in x2.terms.items():
        for m1, c1 in x1.terms.items():
            m = compose(m2, m1)
            v = out.get(m, 0) + c2 * c1
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return AlgebraElement._raw(out)


def qdeg(x) -> int:
    """q-degree: dots weigh 2, strand steps weigh 1."""
    if isinstance(x, NormalMorphism):
        return x.qdeg
    if isinstance(x, Arrow):
        return x.qdeg
    if isinstance(x, Path):
        x = x.word
    if isinstance(x, AlgebraElement):
        degs = {m.qdeg for m in x.terms}
        if len(degs) != 1:
            raise KLRWError("element is not q-homogeneous")
        return degs.pop()
    return sum(letter.qdeg for letter in x)


def turning_number(path: Path | Sequence[Arrow]) -> int:
    """Number of immediate out-and-back excursions ``e_i -> e_{i+-1} -> e_i``."""
    word = path.word if isinstance(path, Path) else tuple(path)
    if not word:
        return 0
    verts = [word[-1].source]
    for letter in reversed(word):
        if letter.kind != "s":
            verts.append(letter.target)
    return sum(1 for k in range(len(verts) - 2) if verts[k] == verts[k + 2])


def hom_basis(cfg: QuiverConfig, source: int, target: int, q: int) -> list[NormalMorphism]:
    """Basis of the q-degree ``q`` part of Hom(T_source, T_target)."""
    rest = q - abs(source - target)
    if rest < 0 or rest % 2:
        return []
    return [NormalMorphism(target, source, rest // 2)]


def all_basis(cfg: QuiverConfig, max_dots: int) -> list[NormalMorphism]:
    return [NormalMorphism(j, i, d) for i in cfg.objects for j in cfg.objects for d in range(max_dots + 1)]
