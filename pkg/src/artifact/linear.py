"""Sparse rational linear combinations and exact matrix helpers."""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Iterator, Mapping

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def frac(x: Any) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not accepted")
    return Fraction(x)


class LinComb:
    """Finite formal sum ``sum c_k * k`` with rational coefficients.

    Zero coefficients are never stored. Subclasses only change how terms are
    printed and which keys are legal.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Hashable, Any] | Iterable[tuple[Hashable, Any]] | None = None):
        acc: dict[Hashable, Fraction] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for k, c in items:
                c = frac(c)
                if c:
                    v = acc.get(k, 0) + c
                    if v:
                        acc[k] = v
                    else:
                        del acc[k]
        self.terms = acc

    @classmethod
    def _raw(cls, terms: dict):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    @classmethod
    def single(cls, key: Hashable, coeff: Any = 1):
        return cls({key: coeff})

    def _like(self, terms: dict):
        return type(self)._raw(terms)

    def copy(self):
        return self._like(dict(self.terms))

    def __iter__(self) -> Iterator[tuple[Hashable, Fraction]]:
        return iter(self.terms.items())

    def items(self):
        return self.terms.items()

    def keys(self):
        return self.terms.keys()

    def sorted_items(self) -> list[tuple[Hashable, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __getitem__(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def coeff(self, key) -> Fraction:
        return self.terms.get(key, Fraction(0))

    def __eq__(self, other) -> bool:
        if isinstance(other, LinComb):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def iadd(self, other: "LinComb", scale: Any = 1) -> "LinComb":
        """In-place ``self += scale * other``."""
        scale = frac(scale)
        if not scale:
            return self
        t = self.terms
        for k, c in other.terms.items():
            v = t.get(k, 0) + scale * c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return self

    def add_term(self, key, coeff: Any) -> "LinComb":
        coeff = frac(coeff)
        if coeff:
            v = self.terms.get(key, 0) + coeff
            if v:
                self.terms[key] = v
            else:
                del self.terms[key]
        return self

    def __add__(self, other):
        return self.copy().iadd(other)

    def __sub__(self, other):
        return self.copy().iadd(other, -1)

    def __neg__(self):
        return self._like({k: -c for k, c in self.terms.items()})

    def __mul__(self, scalar):
        s = frac(scalar)
        if not s:
            return self._like({})
        return self._like({k: s * c for k, c in self.terms.items()})

    __rmul__ = __mul__

    def map_keys(self, fn: Callable[[Hashable], Hashable]):
        out = self._like({})
        for k, c in self.terms.items():
            out.add_term(fn(k), c)
        return out

    def __repr__(self) -> str:
        if not self.terms:
            return f"{type(self).__name__}(0)"
        parts = []
        for k, c in self.sorted_items():
            parts.append(f"{c}*{k!r}")
        return f"{type(self).__name__}({' + '.join(parts)})"


# ---------------------------------------------------------------------------
# exact matrices


def _qq(c: Fraction):
    return QQ(c.numerator, c.denominator)


def to_domain_matrix(rows: dict[int, dict[int, Fraction]], nrows: int, ncols: int) -> DomainMatrix:
    data = {}
    for r, row in rows.items():
        conv = {c: _qq(v) for c, v in row.items() if v}
        if conv:
            data[r] = conv
    return DomainMatrix(data, (nrows, ncols), QQ)


def rank(rows: dict[int, dict[int, Fraction]], nrows: int, ncols: int) -> int:
    if nrows == 0 or ncols == 0 or not rows:
        return 0
    return to_domain_matrix(rows, nrows, ncols).rank()


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


def nullspace(rows: dict[int, dict[int, Fraction]], nrows: int, ncols: int) -> list[dict[int, Fraction]]:
    """Basis of ``{v : M v = 0}`` as sparse column-index -> value maps."""
    if ncols == 0:
        return []
    if nrows == 0 or not rows:
        return [{j: Fraction(1)} for j in range(ncols)]
    ns = to_domain_matrix(rows, nrows, ncols).to_dense().nullspace()
    out = []
    for vec in ns.to_Matrix().tolist():
        out.append({j: _to_fraction(QQ.convert(v)) for j, v in enumerate(vec) if v != 0})
    return out


def solve(rows: dict[int, dict[int, Fraction]], nrows: int, ncols: int,
          rhs: dict[int, Fraction]) -> dict[int, Fraction] | None:
    """One solution of ``M x = rhs`` (free variables set to zero), or None."""
    aug = {r: dict(row) for r, row in rows.items()}
    for r, v in rhs.items():
        if v:
            aug.setdefault(r, {})[ncols] = v
    if nrows == 0:
        return {} if not any(rhs.values()) else None
    R, pivots = to_domain_matrix(aug, nrows, ncols + 1).rref()
    if ncols in pivots:
        return None
    sol: dict[int, Fraction] = {}
    rep = R.to_sdm() if hasattr(R, "to_sdm") else R.rep
    for r, pc in enumerate(pivots):
        val = rep.get(r, {}).get(ncols)
        if val is not None and val != 0:
            sol[pc] = _to_fraction(val)
    return sol
