"""Hochschild cochains ``Hom_{A-A}(P_n, M)`` and their graded cohomology.

A cochain is determined by its values on generators, ``phi(w) in
M(source w, target w)``, and is stored as a combination of pairs
``(w, m)`` with ``m`` a module basis label. The internal degree of the pair
is ``D = q(w) - q(m)``; the differential ``(d phi)(w) = phi(d(1 (x) w (x) 1))``
preserves it, so every computation splits into finite ``D``-slices.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Iterable

from . import linear
from .bimodules_transfer import Bimodule, Braided, Diagonal, Simple
from .klrw_core import KLRWError, NormalMorphism, QuiverConfig, e
from .linear import LinComb
from .resolution import Ambiguity, P, Q, boundary_gen, enumerate_S, vertex


class Cochain(LinComb):
    """Values on generators; keys are ``(ambiguity, module label)``."""

    __slots__ = ()

    @property
    def degree(self) -> int | None:
        degs = {w.length for (w, _) in self.terms}
        if len(degs) > 1:
            raise KLRWError("mixed cochain degrees")
        return degs.pop() if degs else None

    def value(self, w: Ambiguity) -> dict:
        return {m: c for (x, m), c in self.terms.items() if x == w}

    def phi(self, w: Ambiguity, ell: int) -> Fraction:
        """Coefficient of ``a_{target,source} s^ell`` in ``phi(w)``; zero for ``ell < 0``."""
        if ell < 0:
            return Fraction(0)
        return self.coeff((w, NormalMorphism(w.target, w.source, ell)))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*[{w!r}->{m!r}]" for (w, m), c in self.sorted_items())


def internal_degree(module: Bimodule, w: Ambiguity, m) -> int:
    return w.qdeg - module.label_qdeg(m)


def cochain_coordinates(module: Bimodule, n: int, D: int) -> list[tuple]:
    """Basis of the ``D``-slice of ``C^n``: pairs ``(w, m)`` with ``q(w) - q(m) = D``."""
    out = []
    for w in enumerate_S(n, module.cfg):
        for m in module.basis(w.source, w.target, w.qdeg - D):
            out.append((w, m))
    return out


@lru_cache(maxsize=None)
def _boundary_index(cfg: QuiverConfig, n: int) -> dict:
    """For each ``r`` in ``S_n``: the list ``(w', u, v, coeff)`` with ``u r v`` in ``d(w')``."""
    index: dict = {}
    for w in enumerate_S(n + 1, cfg):
        for (u, r, v), c in boundary_gen(w).terms.items():
            index.setdefault(r, []).append((w, u, v, c))
    return index


def induced_d(module: Bimodule, phi: Cochain, n: int | None = None) -> Cochain:
    """``d_n phi = phi o d_{n+1}``."""
    if n is None:
        n = phi.degree
        if n is None:
            raise KLRWError("cannot infer the degree of the zero cochain")
    index = _boundary_index(module.cfg, n)
    out = Cochain()
    for (r, m), c in phi.terms.items():
        for (w, u, v, lam) in index.get(r, ()):
            for m2, k in module.act(u, m, v).items():
                out.add_term((w, m2), c * lam * k)
    return out


def d_matrix(module: Bimodule, n: int, D: int):
    """Matrix of ``d_n`` on the ``D``-slice, with row and column labels."""
    cols = cochain_coordinates(module, n, D)
    rows = cochain_coordinates(module, n + 1, D)
    index = {r: i for i, r in enumerate(rows)}
    mat: dict[int, dict[int, Fraction]] = {}
    for j, col in enumerate(cols):
        img = induced_d(module, Cochain({col: 1}), n)
        for key, val in img.terms.items():
            i = index.get(key)
            if i is None:
                raise KLRWError(f"d_{n} leaves the D={D} slice at {key!r}")
            mat.setdefault(i, {})[j] = val
    return mat, rows, cols


@lru_cache(maxsize=None)
def _rank(module_key, n: int, D: int) -> tuple[int, int]:
    module = _MODULES[module_key]
    mat, rows, cols = d_matrix(module, n, D)
    return linear.rank(mat, len(rows), len(cols)), len(cols)


_MODULES: dict = {}


def _key(module: Bimodule):
    k = (type(module).__name__, module.cfg.punctures, getattr(module, "i", None))
    _MODULES.setdefault(k, module)
    return k


def hh_dim(module: Bimodule, n: int, D: int) -> int:
    k = _key(module)
    rank_n, dim_n = _rank(k, n, D)
    rank_prev = _rank(k, n - 1, D)[0] if n >= 1 else 0
    return dim_n - rank_n - rank_prev


def d_range(module: Bimodule, n: int, lowest: int) -> range:
    """Internal degrees from ``lowest`` up to the largest one occurring in ``C^n``."""
    return range(lowest, n + 2)


def hh_dims(module: Bimodule, n_max: int, D_values: Iterable[int]) -> dict[tuple[int, int], int]:
    """``(n, D) -> dim HH^n`` in slice ``D`` for ``0 <= n <= n_max``."""
    D_values = list(D_values)
    return {(n, D): hh_dim(module, n, D) for n in range(n_max + 1) for D in D_values}


def hh_table(module: Bimodule, n_max: int, D_min: int) -> list[dict]:
    rows = []
    for n in range(n_max + 1):
        for D in range(D_min, n + 2):
            dim = hh_dim(module, n, D)
            if dim:
                rows.append({"module": module.name, "n": n, "D": D, "dim": dim})
    return rows


def is_cocycle(module: Bimodule, phi: Cochain, n: int) -> bool:
    return not induced_d(module, phi, n)


def _coords(phi: Cochain, index: dict) -> dict[int, Fraction]:
    out = {}
    for key, c in phi.terms.items():
        if key not in index:
            raise KLRWError(f"{key!r} outside the slice")
        out[index[key]] = c
    return out


def independent_mod_image(module: Bimodule, n: int, D: int, cochains: list[Cochain]) -> bool:
    """True iff the cochains are linearly independent modulo ``im d_{n-1}``."""
    cols = cochain_coordinates(module, n, D)
    index = {c: i for i, c in enumerate(cols)}
    rows: list[dict[int, Fraction]] = []
    if n >= 1:
        mat, _, prev = d_matrix(module, n - 1, D)
        for j in range(len(prev)):
            rows.append({i: row[j] for i, row in mat.items() if j in row})
    base_rank = linear.rank(dict(enumerate(rows)), len(rows), len(cols))
    extended = rows + [_coords(phi, index) for phi in cochains]
    full = linear.rank(dict(enumerate(extended)), len(extended), len(cols))
    return full - base_rank == len(cochains)


def cohomology_basis(module: Bimodule, n: int, D: int) -> list[Cochain]:
    """Cocycles in slice ``D`` whose classes form a basis of ``HH^n``."""
    mat, rows, cols = d_matrix(module, n, D)
    kernel = linear.nullspace(mat, len(rows), len(cols))
    chosen: list[Cochain] = []
    for vec in kernel:
        cand = Cochain({cols[j]: c for j, c in vec.items()})
        if independent_mod_image(module, n, D, chosen + [cand]):
            chosen.append(cand)
    return chosen


# ---------------------------------------------------------------------------
# explicit representatives


def frak_V(cfg: QuiverConfig, t: int) -> Cochain:
    """The degree-2 cocycle attached to the interior strand ``t``."""
    if not 1 <= t <= cfg.punctures - 1:
        raise KLRWError(f"no cocycle attached to strand {t}")
    half = []
    half.append((Q(2, t - 1, True), NormalMorphism(t - 1, t), 1))        # s_{t-1} q_{t-1}
    half.append((P(2, t), e(t), 1))                                      # p_t q_{t-1}
    half.append((P(2, t, True), NormalMorphism(t, t - 1), -1))           # s_t p_t
    half.append((Q(2, t, True), NormalMorphism(t, t + 1), 1))            # s_t q_t
    half.append((Q(2, t), e(t), -1))                                     # q_t p_{t+1}
    half.append((P(2, t + 1, True), NormalMorphism(t + 1, t), -1))       # s_{t+1} p_{t+1}
    return Cochain({(w, m): c for w, m, c in half})


def theta_cochain(cfg: QuiverConfig, theta: dict[int, Fraction] | list) -> Cochain:
    """``sum_t theta_t V_t`` (entries at 0 and N are ignored)."""
    if not isinstance(theta, dict):
        theta = dict(enumerate(theta))
    out = Cochain()
    for t in range(1, cfg.punctures):
        c = Fraction(theta.get(t, 0))
        if c:
            out.iadd(frak_V(cfg, t), c)
    return out


def identity_like(cfg: QuiverConfig, ell: int) -> Cochain:
    return Cochain({(vertex(v), NormalMorphism(v, v, ell)): 1 for v in cfg.objects})


def grading_like(cfg: QuiverConfig, ell: int) -> Cochain:
    terms = {}
    half = Fraction(1, 2)
    for v in cfg.objects:
        terms[(Q(1, v, True), NormalMorphism(v, v, ell + 1))] = 1
    for b in range(cfg.punctures):
        terms[(Q(1, b), NormalMorphism(b, b + 1, ell))] = half
        terms[(P(1, b + 1), NormalMorphism(b + 1, b, ell))] = half
    return Cochain(terms)


def representatives(module: Bimodule, n: int, D: int) -> list[Cochain]:
    """Explicit cocycles spanning ``HH^n`` in slice ``D``.

    The diagonal and braided bimodules use the standard families (vertex
    dots, the grading derivation, the strand cocycles ``V_t``); other
    slices fall back to a computed complement of the coboundaries.
    """
    cfg = module.cfg
    if isinstance(module, Diagonal):
        excluded = getattr(module, "i", None)
        if n == 0 and D <= 0 and D % 2 == 0:
            ell = -D // 2
            if excluded is not None and ell == 0:
                return []
            return [identity_like(cfg, ell)]
        if n == 1 and D <= 0 and D % 2 == 0:
            return [grading_like(cfg, -D // 2)]
        if n == 2 and D == 2:
            return [frak_V(cfg, t) for t in range(1, cfg.punctures) if t != excluded]
        if n >= 3 or (n <= 2 and hh_dim(module, n, D) == 0):
            return []
    return cohomology_basis(module, n, D)


def cochain_records(phi: Cochain) -> list[dict]:
    out = []
    for (w, m), c in phi.sorted_items():
        ell = m.dots if isinstance(m, NormalMorphism) else 0
        out.append({"generator": w.label(), "value": repr(m), "ell": ell, "coeff": str(c)})
    return out


def check_d_squared(module: Bimodule, n_max: int, D_min: int) -> list[tuple]:
    """Basis cochains ``phi`` in degrees ``n < n_max - 1`` with ``d d phi != 0``.

    Slices run over ``D_min <= D <= n + 1``; ``d`` preserves ``D``.
    """
    bad = []
    for n in range(0, n_max - 1):
        for D in range(D_min, n + 2):
            for col in cochain_coordinates(module, n, D):
                once = induced_d(module, Cochain({col: 1}), n)
                if once and induced_d(module, once, n + 1):
                    bad.append((n, D, col))
    return bad
