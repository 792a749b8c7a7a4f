import random

import pytest

from artifact.bimodules_transfer import (
    BarElement,
    Braided,
    Diagonal,
    Simple,
    SimpleClass,
    bar_boundary,
    bar_generator,
    bar_term,
    iota,
    make_module,
    pi,
    random_bar_element,
    transfer_G,
    transfer_G_recursive,
)
from artifact.klrw_core import (
    AlgebraElement,
    KLRWError,
    NormalMorphism,
    QuiverConfig,
    a,
    compose,
    descendants,
    e,
    normal_word,
)
from artifact.resolution import P, Q, boundary, split, vertex


# -- bimodules -------------------------------------------------------------------


def test_projection_examples():
    assert pi(2, e(2)).terms == {SimpleClass(2): 1}
    assert pi(2, a(2, 2, 1)).terms == {}
    assert pi(2, a(1, 1)).terms == {}


def test_iota_rejects_the_missing_idempotent():
    with pytest.raises(KLRWError):
        iota(2, AlgebraElement({e(2): 1}))


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_short_exact_sequence_slicewise(N):
    cfg = QuiverConfig(N)
    for i in cfg.objects:
        D, B, S = Diagonal(cfg), Braided(cfg, i), Simple(cfg, i)
        for j in cfg.objects:
            for k in cfg.objects:
                for qd in range(0, 9):
                    dd, bb, ss = D.basis(j, k, qd), B.basis(j, k, qd), S.basis(j, k, qd)
                    assert len(bb) + len(ss) == len(dd)
                    images = [iota(i, AlgebraElement({m: 1})) for m in bb]
                    # injective: distinct basis vectors go to distinct basis vectors
                    assert len({tuple(x.terms) for x in images}) == len(bb)
                    for x in images:
                        assert not pi(i, x).terms
                    # pi is onto and its kernel is the image of iota
                    hit = [m for m in dd if pi(i, m).terms]
                    assert len(hit) == len(ss)
                    assert {next(iter(x.terms)) for x in images} == set(dd) - set(hit)


def test_simple_action():
    cfg = QuiverConfig(3)
    S = Simple(cfg, 1)
    m = SimpleClass(1)
    assert S.act(e(1), m, e(1)) == {m: 1}
    assert S.act(a(1, 1, 1), m, e(1)) == {}
    assert S.act(e(1), m, a(1, 1, 1)) == {}


def test_braided_action_never_produces_the_idempotent():
    cfg = QuiverConfig(3)
    B = Braided(cfg, 2)
    basis = [NormalMorphism(t, s_, d) for t in cfg.objects for s_ in cfg.objects for d in range(2)]
    for m in basis:
        if m == e(2):
            continue
        for x in basis:
            for y in basis:
                if x.source == m.target and m.source == y.target:
                    assert e(2) not in B.act(x, m, y)


def test_make_module():
    cfg = QuiverConfig(2)
    assert isinstance(make_module(cfg, "delta"), Diagonal)
    assert isinstance(make_module(cfg, "braided", 1), Braided)
    with pytest.raises(KLRWError):
        make_module(cfg, "simple")


# -- bar complex -----------------------------------------------------------------


def test_bar_boundary_degree_one():
    x = BarElement({bar_term(a(0, 1), (a(1, 2, 1),), a(2, 3)): 1})
    assert bar_boundary(x).terms == {
        (a(0, 1), (), a(1, 3, 1)): 1,
        (a(0, 2, 1), (), a(2, 3)): -1,
    }


def test_bar_boundary_degree_two_drops_idempotent_products():
    x = bar_generator((a(1, 2), a(2, 0)))
    assert bar_boundary(x).terms == {
        (e(1), (a(1, 2),), a(2, 0)): 1,
        (e(1), (a(1, 0, 1),), e(0)): -1,
        (a(1, 2), (a(2, 0),), e(0)): 1,
    }
    # y2 y1 = p2 q1 is dotted, not an idempotent, so it stays
    assert len(bar_boundary(bar_generator((a(2, 1), a(1, 2)))).terms) == 3


def test_idempotent_middle_entries_are_rejected():
    with pytest.raises(KLRWError):
        bar_generator((e(1),))


def test_bar_boundary_squared_random():
    rng = random.Random(3)
    for _ in range(200):
        cfg = QuiverConfig(rng.randint(1, 4))
        n = rng.randint(2, 6)
        x = random_bar_element(rng, cfg, n, max_dots=2, terms=2)
        assert not bar_boundary(bar_boundary(x)).terms


# -- transfer map ----------------------------------------------------------------


G4_INPUT = (a(3, 0, 1), a(0, 4), a(4, 1, 2), a(1, 4, 1))

G4_TERMS = {
    (a(3, 1, 1), Q(4, 1, True), a(2, 4, 5)),
    (a(3, 1), Q(4, 1, True), a(2, 4, 6)),
    # the listing writes a_{31} here; the tensor only composes with a_{32}
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


def test_transfer_four_term_example():
    out = transfer_G(4, bar_generator(G4_INPUT))
    assert len(out.terms) == 11
    assert out.terms == {t: 1 for t in G4_TERMS}


def test_transfer_four_term_example_closed_rule():
    out = transfer_G(4, bar_generator(G4_INPUT), method="closed")
    assert out.terms == {t: 1 for t in G4_TERMS}


def test_transfer_low_degrees():
    x = BarElement({bar_term(a(2, 1), (), a(1, 3, 1)): 3})
    assert transfer_G(0, x).terms == {(a(2, 1), vertex(1), a(1, 3, 1)): 3}
    y = BarElement({bar_term(a(0, 1), (a(1, 2, 1),), a(2, 0)): 1})
    want = {(compose(a(0, 1), u), r, compose(v, a(2, 0))): c
            for (u, r, v), c in split(1, normal_word(a(1, 2, 1))).terms.items()}
    assert transfer_G(1, y).terms == want
    assert transfer_G(1, y, method="closed").terms == want


def test_transfer_terms_precede_input():
    rng = random.Random(5)
    for _ in range(100):
        cfg = QuiverConfig(rng.randint(1, 4))
        n = rng.randint(1, 4)
        ys = random_bar_element(rng, cfg, n, max_dots=2)
        (_, mids, _), = ys.terms
        word = ()
        for y in mids:
            word += normal_word(y)
        reach = descendants(word)
        for (u, r, v) in transfer_G(n, bar_generator(mids)).terms:
            assert normal_word(u) + r.word() + normal_word(v) in reach


def test_transfer_degree_mismatch():
    with pytest.raises(KLRWError):
        transfer_G(2, bar_generator((a(1, 0),)))
    with pytest.raises(KLRWError):
        transfer_G(2, bar_generator((a(1, 0),)), method="closed")
    with pytest.raises(KLRWError):
        transfer_G(1, bar_generator((a(1, 0),)), method="other")


def test_chain_map_identity_random():
    rng = random.Random(17)
    for _ in range(150):
        cfg = QuiverConfig(rng.randint(1, 5))
        n = rng.randint(1, 4)
        x = random_bar_element(rng, cfg, n, max_dots=3, terms=rng.randint(1, 3))
        assert boundary(n, transfer_G(n, x)) == transfer_G(n - 1, bar_boundary(x))


def test_recursive_and_closed_transfer_agree():
    rng = random.Random(19)
    for _ in range(60):
        cfg = QuiverConfig(rng.randint(1, 4))
        n = rng.randint(1, 4)
        x = random_bar_element(rng, cfg, n, max_dots=2, terms=2)
        assert transfer_G_recursive(n, x) == transfer_G(n, x, method="closed")
