"""Acceptance checks; each test prints one ``criterion k: PASS/FAIL`` line."""

import random
from fractions import Fraction

from artifact.bimodules_transfer import (
    Braided,
    Diagonal,
    Simple,
    bar_boundary,
    bar_generator,
    random_bar_element,
    transfer_G,
)
from artifact.braiding import composable_chains, embed, verify_functor
from artifact.hochschild import Cochain, check_d_squared, cochain_coordinates, hh_dim, induced_d, internal_degree
from artifact.klrw_core import (
    NormalMorphism,
    QuiverConfig,
    a,
    all_basis,
    compose,
    descendants,
    e,
    is_irreducible,
    normal_word,
)
from artifact.nattrans import (
    NatParams,
    NaturalTransformation,
    cocycle_residual,
    coeff_C_form,
    eta3_solve,
    family_basis,
)
from artifact.resolution import (
    P,
    Q,
    S_counts,
    boundary,
    check_boundary_squared,
    check_exactness,
    check_recursive_agreement,
)
from helpers import composable_words

D_MIN = -10


def _total(module, n):
    return sum(hh_dim(module, n, D) for D in range(D_MIN, n + 2))


def _modules(cfg):
    yield Diagonal(cfg)
    for i in cfg.objects:
        yield Braided(cfg, i)
        yield Simple(cfg, i)


def test_criterion_1_ambiguity_counts(criterion):
    counts = S_counts(QuiverConfig(4), 8)
    ok = counts[0] == 5 and counts[1:] == [13, 16, 16, 16, 16, 16, 16, 16]
    assert criterion(1, ok), counts


def test_criterion_2_differentials_square_to_zero(criterion):
    bad = []
    for N in range(1, 6):
        cfg = QuiverConfig(N)
        bad += [(N, w) for w in check_boundary_squared(cfg, 8)]
        for module in _modules(cfg):
            bad += [(N, type(module).__name__, x) for x in check_d_squared(module, 9, D_MIN)]
    assert criterion(2, not bad), bad[:5]


def test_criterion_3_closed_form_matches_recursion(criterion):
    bad = [(N, w) for N in range(1, 5) for w in check_recursive_agreement(QuiverConfig(N), 5)]
    assert criterion(3, not bad), bad[:5]


def test_criterion_4_resolution_is_exact(criterion):
    reports = [check_exactness(QuiverConfig(N), 6, 10) for N in (1, 2, 3)]
    degrees = {r["degree"] for rep in reports for r in rep}
    bad = [r for rep in reports for r in rep if not r["exact"]]
    ok = all(reports) and not bad and set(range(0, 6)) <= degrees
    assert criterion(4, ok), (sorted(degrees), bad[:5])


def test_criterion_5_hh_of_the_diagonal(criterion):
    bad = []
    for N in (2, 3, 4, 5):
        module = Diagonal(QuiverConfig(N))
        for n in (0, 1):
            for D in range(D_MIN, n + 2):
                want = 1 if D <= 0 and D % 2 == 0 else 0
                if hh_dim(module, n, D) != want:
                    bad.append((N, n, D))
        if hh_dim(module, 2, 2) != N - 1 or _total(module, 2) != N - 1:
            bad.append((N, 2))
        bad += [(N, n) for n in range(3, 9) if _total(module, n)]
    assert criterion(5, not bad), bad


def test_criterion_6_hh_of_simple_and_braided(criterion):
    bad = []
    for N in (2, 3, 4, 5):
        cfg = QuiverConfig(N)
        for i in cfg.braid_indices:
            got = [_total(Simple(cfg, i), n) for n in range(9)]
            if got != [1, 0, 1, 0, 0, 0, 0, 0, 0]:
                bad.append(("simple", N, i, got))
            B = Braided(cfg, i)
            zero_slice = [hh_dim(B, 0, D) for D in range(D_MIN, 2)]
            want = [1 if D < 0 and D % 2 == 0 else 0 for D in range(D_MIN, 2)]
            if zero_slice != want or _total(B, 2) != N - 2 or hh_dim(B, 2, 2) != N - 2:
                bad.append(("braided", N, i))
            bad += [("braided", N, i, n) for n in range(3, 9) if _total(B, n)]
    assert criterion(6, not bad), bad


G4_INPUT = (a(3, 0, 1), a(0, 4), a(4, 1, 2), a(1, 4, 1))

G4_TERMS = {
    (a(3, 1, 1), Q(4, 1, True), a(2, 4, 5)),
    (a(3, 1), Q(4, 1, True), a(2, 4, 6)),
    (a(3, 2), P(4, 2), a(2, 4, 7)),
    (a(3, 2), Q(4, 2, True), a(3, 4, 7)),
    (a(3, 2, 1), Q(4, 2, True), a(3, 4, 6)),
    (a(3, 2, 2), Q(4, 2, True), a(3, 4, 5)),
    (e(3), P(4, 3), a(3, 4, 8)),
    (e(3), Q(4, 3, True), a(4, 4, 8)),
    (a(3, 3, 1), Q(4, 3, True), a(4, 4, 7)),
    (a(3, 3, 2), Q(4, 3, True), a(4, 4, 6)),
    (a(3, 3, 3), Q(4, 3, True), a(4, 4, 5)),
}


def test_criterion_7_transfer_map(criterion):
    ok = transfer_G(4, bar_generator(G4_INPUT)).terms == {t: 1 for t in G4_TERMS}
    rng = random.Random(7)
    bad = []
    for k in range(500):
        cfg = QuiverConfig(rng.randint(1, 4))
        n = rng.randint(1, 4)
        x = random_bar_element(rng, cfg, n, max_dots=2, terms=rng.randint(1, 3))
        if boundary(n, transfer_G(n, x)) != transfer_G(n - 1, bar_boundary(x)):
            bad.append(k)
    assert criterion(7, ok and not bad), (ok, bad[:5])


def test_criterion_8_functor_equations(criterion):
    bad = []
    for N in range(1, 5):
        cfg = QuiverConfig(N)
        for i in cfg.braid_indices:
            for d in (1, 2, 3):
                bad += [(N, i, c) for c in composable_chains(cfg, d, 2) if verify_functor(cfg, i, c)]
    assert criterion(8, not bad), bad[:5]


def _zero_sum_identity_holds():
    cfg = QuiverConfig(4)
    for t in (1, 2, 3):
        nt = NaturalTransformation(cfg, NatParams(2, theta={t: 1}))
        x1 = nt.eta([a(1, 3, 1), a(3, 0)]) @ embed(a(0, 2))
        x2 = embed(a(1, 3, 1)) @ nt.eta([a(3, 0), a(0, 2)])
        x3 = nt.eta([a(1, 0, 3), a(0, 2)])
        x4 = nt.eta([a(1, 3, 1), a(3, 2, 2)])
        if x2 - x1 - x3 + x4:
            return False
    return True


def _cocycle_sweep_failures():
    bad = []
    for N in (2, 3, 4):
        cfg = QuiverConfig(N)
        targets = [("id", None)] + [("beta", i) for i in cfg.braid_indices]
        chains = [c for d in (1, 2, 3) for c in composable_chains(cfg, d, 2)]
        for target, i in targets:
            for params in family_basis(cfg, target, i):
                nt = NaturalTransformation(cfg, params)
                bad += [(N, params, j) for j in cfg.objects if cocycle_residual(nt, (), obj=j)]
                bad += [(N, params, c) for c in chains if cocycle_residual(nt, c)]
    return bad


def _eta3_failures():
    rng = random.Random(29)
    bad = []
    for _ in range(200):
        N = rng.randint(2, 4)
        cfg = QuiverConfig(N)
        i = rng.choice(list(cfg.braid_indices))
        theta = {t: Fraction(rng.randint(-3, 3)) for t in range(1, N) if t != i}
        nt = NaturalTransformation(cfg, NatParams(2, "beta", i, theta=theta))
        objs = [rng.choice(list(cfg.objects)) for _ in range(4)]
        if rng.random() < 0.7:
            objs[0] = i
        chain = tuple(NormalMorphism(objs[k], objs[k + 1], rng.randint(0, 2)) for k in range(3))
        sol = eta3_solve(nt, *chain)
        if nt.G.object(chain[0].target).delta() @ sol != nt.eta3_rhs(*chain):
            bad.append(chain)
    return bad


def test_criterion_9_natural_transformations(criterion):
    part_a = coeff_C_form(a(2, 4, 2), a(4, 1, 1)) == {1: -4, 2: -8, 3: -6, 4: -2}
    part_b = _zero_sum_identity_holds()
    sweep = _cocycle_sweep_failures()
    eta3 = _eta3_failures()
    ok = part_a and part_b and not sweep and not eta3
    assert criterion(9, ok), (part_a, part_b, sweep[:3], eta3[:3])


def test_criterion_10_property_suites(criterion):
    bad = []
    for N in range(1, 6):
        basis = all_basis(QuiverConfig(N), 3)
        by_target = {}
        for m in basis:
            by_target.setdefault(m.target, []).append(m)
        for m3 in basis:
            for m2 in by_target[m3.source]:
                if compose(m3, m2).qdeg != m3.qdeg + m2.qdeg:
                    bad.append(("qdeg", m3, m2))
                for m1 in by_target[m2.source]:
                    if compose(compose(m3, m2), m1) != compose(m3, compose(m2, m1)):
                        bad.append(("assoc", m3, m2, m1))
    for N in range(1, 5):
        cfg = QuiverConfig(N)
        for length in range(1, 9):
            for word in composable_words(cfg, length):
                finals = {w for w in descendants(word) if is_irreducible(w)}
                if len(finals) != 1:
                    bad.append(("confluence", word))
    for N in range(1, 4):
        for module in _modules(QuiverConfig(N)):
            for n in range(0, 6):
                for D in range(-6, n + 2):
                    for col in cochain_coordinates(module, n, D):
                        img = induced_d(module, Cochain({col: 1}), n)
                        if any(internal_degree(module, *key) != D for key in img.terms):
                            bad.append(("D", module, col))
    assert criterion(10, not bad), bad[:5]
