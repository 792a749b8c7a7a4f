"""Natural transformations ``id => id`` and ``id => beta_{i-}`` in degrees 0, 1, 2.

Parameters:

* degree 0: ``epsilon`` (dot power -> coefficient),
* degree 1: ``sigma`` (dot power -> coefficient),
* degree 2: ``theta`` (interior strand -> coefficient).

Values are :class:`~artifact.braiding.TwMorphism` objects from the plain
generator ``T_{source}`` to ``G T_{target}``; for the identity target these
are one-block morphisms between one-slot complexes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from . import linear
from .braiding import (
    NegativeBraiding,
    TwComplex,
    TwMorphism,
    check_chain,
    embed,
    mu_delta1,
    mu_delta2,
)
from .klrw_core import (
    AlgebraElement,
    KLRWError,
    NormalMorphism,
    QuiverConfig,
    compose,
    delta_ijk,
)


class ParameterError(KLRWError):
    pass


class InvariantViolation(RuntimeError):
    """An equation that must be solvable was not; indicates a bug."""


def _sgn(x: int) -> int:
    return (x > 0) - (x < 0)


def _fracmap(d: Mapping | None) -> dict[int, Fraction]:
    out = {}
    for k, v in (d or {}).items():
        v = Fraction(v) if not isinstance(v, float) else None
        if v is None:
            raise ParameterError("floating point parameters are not accepted")
        if v:
            out[int(k)] = v
    return out


@dataclass(frozen=True)
class NatParams:
    degree: int
    target: str = "id"          # "id" or "beta"
    braid_index: int | None = None
    epsilon: Mapping = field(default_factory=dict)
    sigma: Mapping = field(default_factory=dict)
    theta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.degree not in (0, 1, 2):
            raise ParameterError("degree must be 0, 1 or 2")
        if self.target not in ("id", "beta"):
            raise ParameterError("target must be 'id' or 'beta'")
        if self.target == "beta" and self.braid_index is None:
            raise ParameterError("target beta needs a braid index")
        theta = self.theta
        if isinstance(theta, (list, tuple)):
            theta = dict(enumerate(theta))
        object.__setattr__(self, "epsilon", _fracmap(self.epsilon))
        object.__setattr__(self, "sigma", _fracmap(self.sigma))
        object.__setattr__(self, "theta", _fracmap(theta))
        if self.target == "beta" and self.epsilon.get(0):
            raise ParameterError("epsilon_0 must vanish for the braided target")
        if any(k < 0 for k in list(self.epsilon) + list(self.sigma)):
            raise ParameterError("dot powers must be nonnegative")

    def validate(self, cfg: QuiverConfig) -> None:
        if self.target == "beta":
            cfg.check_braid_index(self.braid_index)
        forced = {0, cfg.punctures}
        if self.target == "beta":
            forced.add(self.braid_index)
        for t, v in self.theta.items():
            if not 0 <= t <= cfg.punctures:
                raise ParameterError(f"theta index {t} outside 0..{cfg.punctures}")
            if t in forced and v:
                raise ParameterError(f"theta_{t} is forced to vanish")

    def scaled(self, c) -> "NatParams":
        c = Fraction(c)
        return NatParams(self.degree, self.target, self.braid_index,
                         {k: c * v for k, v in self.epsilon.items()},
                         {k: c * v for k, v in self.sigma.items()},
                         {k: c * v for k, v in self.theta.items()})

    @classmethod
    def from_json(cls, data: Mapping) -> "NatParams":
        target = data.get("target", "id")
        index = data.get("braid_index")
        if isinstance(target, str) and target.startswith("beta"):
            tail = target[4:].strip("()")
            if tail:
                index = int(tail)
            target = "beta"
        return cls(int(data["degree"]), target, index,
                   data.get("epsilon") or {}, data.get("sigma") or {}, data.get("theta") or {})

    @classmethod
    def load(cls, path: str) -> "NatParams":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


# ---------------------------------------------------------------------------
# coefficient functions


def coeff_C_form(m2: NormalMorphism, m1: NormalMorphism) -> dict[int, Fraction]:
    """The coefficient of ``eta^2`` as a linear form in ``theta``: strand -> weight.

    The bend of ``a2 a1`` is slid away first; the accumulated dots then
    travel back to the source vertex ``i``, each strand crossing adding
    ``dots * (theta_t + theta_{t-1})``. Monotone paths have no bend.
    """
    k, j, beta = m2
    j1, i, _ = m1
    if j1 != j:
        raise KLRWError(f"{m2!r} and {m1!r} are not composable")
    form: dict[int, Fraction] = {}

    def add(t, c):
        if c:
            form[t] = form.get(t, 0) + Fraction(c)

    def tail(lo, hi, dots, sign):
        # dots carried from one end of [lo, hi] to the other
        add(lo, sign * dots)
        for t in range(lo + 1, hi):
            add(t, sign * 2 * dots)
        add(hi, sign * dots)

    if i < j:
        kk = min(k, j)
        if i < kk:
            add(j, -beta)
            for t in range(1, j - kk + 1):
                add(j - t, -2 * (beta + t))
            dots = beta + j - kk
            add(kk, dots)  # the crossing at kk is counted once in the sum above
            tail(i, kk, dots, -1)
        else:
            add(j, -beta)
            for t in range(1, j - i + 1):
                add(j - t, -2 * (beta + t))
            add(i, beta + j - i)
    elif j < i:
        kk = max(k, j)
        if kk < i:
            add(j, beta)
            for t in range(1, kk - j + 1):
                add(j + t, 2 * (beta + t))
            dots = beta + kk - j
            add(kk, -dots)
            tail(kk, i, dots, 1)
        else:
            add(j, beta)
            for t in range(1, i - j + 1):
                add(j + t, 2 * (beta + t))
            add(i, -(beta + i - j))
    return {t: c for t, c in form.items() if c}


def coeff_C(m2: NormalMorphism, m1: NormalMorphism, theta: Mapping) -> Fraction:
    theta = dict(enumerate(theta)) if isinstance(theta, (list, tuple)) else theta
    return sum((c * Fraction(theta.get(t, 0)) for t, c in coeff_C_form(m2, m1).items()), Fraction(0))


def coeff_Q(i: int, m2: NormalMorphism, m1: NormalMorphism) -> Fraction:
    """Weight of the degree-1 braided ``eta^2`` on ``a_{ik} s^beta (x) a_{kj} s^alpha``."""
    l, k, _ = m2
    _, j, _ = m1
    if l != i:
        raise KLRWError("the weight is only defined for morphisms ending at the braid index")
    q21 = m2.qdeg + m1.qdeg
    if k < i < j or j < i < k:
        return Fraction(_sgn(i - k) * q21)
    if k == i:
        return Fraction(_sgn(j - i) * m2.qdeg, 2)
    if j == i:
        return Fraction(_sgn(i - k) * q21, 2)
    return Fraction(0)


# ---------------------------------------------------------------------------
# evaluators


class IdentityFunctor:
    def __init__(self, cfg: QuiverConfig):
        self.cfg = cfg

    def object(self, j: int) -> TwComplex:
        self.cfg.check_object(j)
        return TwComplex.single(j)

    def beta1(self, m: NormalMorphism) -> TwMorphism:
        return embed(m)

    def beta2(self, m2: NormalMorphism, m1: NormalMorphism) -> TwMorphism:
        return TwMorphism.zero(self.object(m1.source), self.object(m2.target), -1)


def _el(j: int, i: int, dots: int, c) -> AlgebraElement:
    if dots < 0:
        if c:
            raise InvariantViolation(f"negative dot power with nonzero coefficient {c}")
        return AlgebraElement()
    return AlgebraElement({NormalMorphism(j, i, dots): c})


class NaturalTransformation:
    """A pre-natural transformation ``id => G`` given by closed formulas."""

    def __init__(self, cfg: QuiverConfig, params: NatParams):
        params.validate(cfg)
        self.cfg = cfg
        self.params = params
        self.g = params.degree
        if params.target == "id":
            self.G = IdentityFunctor(cfg)
            self.i = None
        else:
            self.G = NegativeBraiding(cfg, params.braid_index)
            self.i = params.braid_index
        self._eta3_cache: dict = {}
        self._cache: dict = {}

    # -- helpers -----------------------------------------------------------

    def _hom(self, source: int, target: int, d: int, blocks: dict) -> TwMorphism:
        return TwMorphism(TwComplex.single(source), self.G.object(target), self.g - d, blocks)

    def _to_target(self, source: int, target_obj: int, slot_obj: int, x: AlgebraElement, degree_slot: int):
        """Place ``x: T_source -> T_slot_obj`` into the slot of ``G T_target_obj``."""
        cx = self.G.object(target_obj)
        for idx, sl in enumerate(cx.slots):
            if sl.obj == slot_obj and sl.degree == degree_slot:
                return {(0, idx): x}
        raise KLRWError(f"no slot T{slot_obj}<{degree_slot}> in the target")

    def _half_pair(self, source: int, shift: int, c: Fraction) -> dict:
        """``[1/2 q_{i-1} s^shift, 1/2 p_{i+1} s^shift]`` from ``T_source = T_i`` into the degree-0 slots."""
        i = self.i
        blocks = {}
        blocks.update(self._to_target(source, i, i - 1, _el(i - 1, i, shift, c / 2), 0))
        blocks.update(self._to_target(source, i, i + 1, _el(i + 1, i, shift, c / 2), 0))
        return blocks

    # -- components --------------------------------------------------------

    def eta(self, chain: Sequence[NormalMorphism], obj: int | None = None) -> TwMorphism:
        """``eta^d(a_d, ..., a_1)``; for ``d = 0`` pass the object index."""
        chain = tuple(chain)
        key = (chain, obj if not chain else None)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        check_chain(chain)
        val = self._eta(chain, obj)
        self._cache[key] = val
        return val

    def _eta(self, chain: tuple, obj: int | None) -> TwMorphism:
        d = len(chain)
        if d == 0:
            if obj is None:
                raise KLRWError("eta^0 needs an object")
            source = target = obj
        else:
            source, target = chain[-1].source, chain[0].target
        zero = self._hom(source, target, d, {})
        if self.params.target == "id":
            return self._eta_id(chain, source, target) or zero
        return self._eta_beta(chain, source, target) or zero

    def _eta_id(self, chain, source, target):
        g, P = self.g, self.params
        d = len(chain)
        if d != g:
            return None
        if g == 0:
            x = AlgebraElement({NormalMorphism(source, source, l): c for l, c in P.epsilon.items()})
            return self._hom(source, target, 0, {(0, 0): x})
        if g == 1:
            (m,) = chain
            k, j, alpha = m
            x = AlgebraElement({NormalMorphism(k, j, alpha + l): Fraction(m.qdeg) * c / 2
                                for l, c in P.sigma.items()})
            return self._hom(source, target, 1, {(0, 0): x})
        m2, m1 = chain
        k, j, beta = m2
        _, i, alpha = m1
        c = coeff_C(m2, m1, P.theta)
        x = _el(k, i, beta + alpha + delta_ijk(i, j, k) - 1, c)
        return self._hom(source, target, 2, {(0, 0): x})

    def _eta_beta(self, chain, source, target):
        g, P, i = self.g, self.params, self.i
        d = len(chain)
        if g == 0:
            if d == 0:
                j = source
                if j != i:
                    x = AlgebraElement({NormalMorphism(j, j, l): c for l, c in P.epsilon.items()})
                    return self._hom(j, j, 0, {(0, 0): x})
                blocks: dict = {}
                for l, c in P.epsilon.items():
                    for key, val in self._half_pair(j, l - 1, c).items():
                        blocks[key] = blocks[key] + val if key in blocks else val
                return self._hom(j, j, 0, blocks)
            if d == 1:
                (m,) = chain
                k, j, alpha = m
                if k != i or j == i:
                    return None
                x = AlgebraElement()
                for l, c in P.epsilon.items():
                    x.iadd(_el(i, j, alpha + l - 1, _sgn(i - j) * c / 2))
                return self._hom(j, k, 1, self._to_target(j, i, i, x, -1))
            return None
        if g == 1:
            if d == 1:
                (m,) = chain
                k, j, alpha = m
                qd = Fraction(m.qdeg)
                if k != i:
                    x = AlgebraElement({NormalMorphism(k, j, alpha + l): qd * c / 2 for l, c in P.sigma.items()})
                    return self._hom(j, k, 1, {(0, 0): x})
                if j != i:
                    t = i + _sgn(j - i)
                    x = AlgebraElement({NormalMorphism(t, j, alpha + l): qd * c / 2 for l, c in P.sigma.items()})
                    return self._hom(j, k, 1, self._to_target(j, i, t, x, 0))
                blocks = {}
                for l, c in P.sigma.items():
                    if alpha + l - 1 < 0:
                        continue  # weight q(s^0) = 0 kills the would-be s^{-1} term
                    for key, val in self._half_pair(i, alpha + l - 1, qd * c / 2).items():
                        blocks[key] = blocks[key] + val if key in blocks else val
                return self._hom(j, k, 1, blocks)
            if d == 2:
                m2, m1 = chain
                l_, k, beta = m2
                _, j, alpha = m1
                if l_ != i:
                    return None
                w = coeff_Q(i, m2, m1)
                if not w:
                    return None
                base = beta + alpha + delta_ijk(j, k, i) - 1
                x = AlgebraElement()
                for l, c in P.sigma.items():
                    x.iadd(_el(i, j, base + l, w * c / 2))
                return self._hom(j, l_, 2, self._to_target(j, i, i, x, -1))
            return None
        # degree 2
        if d == 2:
            m2, m1 = chain
            l_, k, beta = m2
            _, j, alpha = m1
            c = coeff_C(m2, m1, P.theta)
            if not c:
                return None
            if l_ != i:
                x = _el(l_, j, beta + alpha + delta_ijk(j, k, l_) - 1, c)
                return self._hom(j, l_, 2, {(0, 0): x})
            if j != i:
                t = i + _sgn(j - i)
                x = _el(t, j, beta + alpha + delta_ijk(j, k, i) - 1, c)
                return self._hom(j, l_, 2, self._to_target(j, i, t, x, 0))
            return self._hom(j, l_, 2, self._half_pair(i, beta + alpha + abs(i - k) - 2, c))
        if d == 3:
            return self.eta3(*chain)
        return None

    # -- eta^3 for the braided degree-2 family --------------------------------

    def eta3_rhs(self, a3: NormalMorphism, a2: NormalMorphism, a1: NormalMorphism) -> TwMorphism:
        """``beta1(a3) eta2(a2,a1) - eta2(a3,a2) a1 + eta2(a3, a2 a1) - eta2(a3 a2, a1)``."""
        G = self.G
        e21 = self.eta((a2, a1))
        e32 = self.eta((a3, a2))
        out = G.beta1(a3) @ e21
        out = out - e32 @ embed(a1)
        out = out + self.eta((a3, compose(a2, a1)))
        out = out - self.eta((compose(a3, a2), a1))
        return out

    def eta3(self, a3: NormalMorphism, a2: NormalMorphism, a1: NormalMorphism) -> TwMorphism | None:
        if self.params.target != "beta" or self.g != 2:
            return None
        key = (a3, a2, a1)
        if key not in self._eta3_cache:
            self._eta3_cache[key] = eta3_solve(self, a3, a2, a1)
        return self._eta3_cache[key]


def eta3_solve(nt: NaturalTransformation, a3: NormalMorphism, a2: NormalMorphism,
               a1: NormalMorphism) -> TwMorphism:
    """Solve ``delta . eta3 = rhs`` for the single block into the degree -1 slot.

    Left composition with ``q_{i-1}`` is injective on ``Hom(T_j, T_i)``, so the
    solution is unique whenever it exists.
    """
    check_chain((a3, a2, a1))
    i = nt.i
    j0 = a1.source
    zero = nt._hom(j0, a3.target, 3, {})
    if a3.target != i:
        rhs = nt.eta3_rhs(a3, a2, a1)
        if rhs:
            raise InvariantViolation(f"nonzero right-hand side {rhs!r} outside the support")
        return zero
    rhs = nt.eta3_rhs(a3, a2, a1)
    if not rhs:
        return zero
    target = nt.G.object(i)
    delta = target.delta()
    qs = {m.qdeg for x in rhs.blocks.values() for m in x.terms}
    cands = []
    for qv in sorted(qs):
        rest = qv - 1 - abs(i - j0)
        if rest >= 0 and rest % 2 == 0:
            cands.append(NormalMorphism(i, j0, rest // 2))
    rows: list = []
    row_index: dict = {}

    def row(key):
        if key not in row_index:
            row_index[key] = len(rows)
            rows.append(key)
        return row_index[key]

    mat: dict[int, dict[int, Fraction]] = {}
    for col, c in enumerate(cands):
        trial = delta @ TwMorphism(TwComplex.single(j0), target, -1, {(0, 0): AlgebraElement({c: 1})})
        for (si, ti), x in trial.blocks.items():
            for m, v in x.terms.items():
                mat.setdefault(row((ti, m)), {})[col] = v
    vec = {}
    for (si, ti), x in rhs.blocks.items():
        for m, v in x.terms.items():
            vec[row((ti, m))] = v
    sol = linear.solve(mat, len(rows), len(cands), vec)
    if sol is None:
        raise InvariantViolation(f"eta3 equation has no solution on {(a3, a2, a1)!r}")
    x = AlgebraElement({cands[col]: v for col, v in sol.items()})
    out = TwMorphism(TwComplex.single(j0), target, -1, {(0, 0): x})
    if delta @ out != rhs:
        raise InvariantViolation("eta3 solution does not reproduce the right-hand side")
    return out


# ---------------------------------------------------------------------------
# cocycle condition


def cocycle_residual(nt: NaturalTransformation, chain: Sequence[NormalMorphism],
                     obj: int | None = None) -> TwMorphism:
    """``mu^1_Fun(eta)`` evaluated on ``[a_d, ..., a_1]`` (``obj`` for d = 0).

    With ``F = id`` and only ``mu^2`` nonzero on generators the formula reads

        mu1(eta^d(a))
        + sum_{s>=1} mu2(G^s(a_d..a_{d-s+1}), eta^{d-s}(a_{d-s}..a_1))
        + (-1)^{g-1} mu2(eta^{d-1}(a_d..a_2), a_1)
        + sum_n (-1)^{g-n} eta^{d-1}(.., a_{n+2} a_{n+1}, ..)
    """
    chain = tuple(chain)
    check_chain(chain)
    d, g, G = len(chain), nt.g, nt.G
    x0 = chain[-1].source if d else obj
    if x0 is None:
        raise KLRWError("empty chain needs an object")

    def eta_of(sub, at=None):
        return nt.eta(sub, obj=at if not sub else None)

    total = mu_delta1(eta_of(chain, x0))
    for s in range(1, d + 1):
        head, rest = chain[:s], chain[s:]
        if s == 1:
            gs = G.beta1(head[0])
        elif s == 2:
            gs = G.beta2(head[0], head[1])
        else:
            continue  # higher components of the functor vanish
        total = total + mu_delta2(gs, eta_of(rest, x0))
    if d >= 1:
        sign = -1 if (g - 1) % 2 else 1
        total = total + mu_delta2(eta_of(chain[:-1], chain[-1].target), embed(chain[-1])) * sign
    for n in range(0, d - 1):
        # contract a_{n+2} a_{n+1}: positions d-n-2 and d-n-1 in the tuple
        pos = d - n - 2
        merged = chain[:pos] + (compose(chain[pos], chain[pos + 1]),) + chain[pos + 2:]
        sign = -1 if (g - n) % 2 else 1
        total = total + eta_of(merged) * sign
    return total


def verify_cocycle(cfg: QuiverConfig, params: NatParams, chain: Sequence[NormalMorphism],
                   obj: int | None = None) -> TwMorphism:
    return cocycle_residual(NaturalTransformation(cfg, params), chain, obj)


def eta_id(cfg: QuiverConfig, params: NatParams, chain: Sequence[NormalMorphism],
           obj: int | None = None) -> AlgebraElement:
    """Value of an ``id => id`` transformation as an algebra element."""
    if params.target != "id":
        raise ParameterError("eta_id needs target id")
    val = NaturalTransformation(cfg, params).eta(chain, obj)
    return val.blocks.get((0, 0), AlgebraElement())


def eta_beta(cfg: QuiverConfig, params: NatParams, chain: Sequence[NormalMorphism],
             obj: int | None = None) -> TwMorphism:
    if params.target != "beta":
        raise ParameterError("eta_beta needs target beta")
    return NaturalTransformation(cfg, params).eta(chain, obj)


def family_basis(cfg: QuiverConfig, target: str, i: int | None, max_ell: int = 2) -> list[NatParams]:
    """One parameter set per basis vector of each family (degrees 0, 1, 2)."""
    out = []
    lo = 1 if target == "beta" else 0
    for l in range(lo, max_ell + 1):
        out.append(NatParams(0, target, i, epsilon={l: 1}))
    for l in range(0, max_ell + 1):
        out.append(NatParams(1, target, i, sigma={l: 1}))
    for t in range(1, cfg.punctures):
        if target == "beta" and t == i:
            continue
        out.append(NatParams(2, target, i, theta={t: 1}))
    return out
