import pytest

from artifact.klrw_core import KLRWError, QuiverConfig, a, e, p, q, rewrite_pair, s
from artifact.resolution import (
    P,
    Q,
    ResolutionElement,
    S_counts,
    boundary,
    boundary_gen,
    boundary_recursive_gen,
    check_boundary_squared,
    check_exactness,
    check_recursive_agreement,
    contract,
    enumerate_S,
    split,
    split_L,
    terms_precede,
    vertex,
)
from helpers import arrows


@pytest.mark.parametrize("N", range(1, 9))
def test_ambiguity_counts(N):
    counts = S_counts(QuiverConfig(N), 8)
    assert counts[0] == N + 1
    assert counts[1] == 3 * N + 1
    assert counts[2:] == [4 * N] * 7


def test_counts_four_punctures():
    assert S_counts(QuiverConfig(4), 8) == [5, 13, 16, 16, 16, 16, 16, 16, 16]


def test_counts_one_puncture_has_two_vertices():
    assert len(enumerate_S(0, QuiverConfig(1))) == 2


def test_two_ambiguities_are_the_rule_left_sides():
    for N in range(1, 6):
        letters = arrows(QuiverConfig(N))
        lhs = {(x, y) for x in letters for y in letters
               if x.source == y.target and rewrite_pair(x, y) is not None}
        assert {w.word() for w in enumerate_S(2, QuiverConfig(N))} == lhs


def test_ambiguity_words_overlap_in_redexes():
    # consecutive letters of every n-ambiguity form a rule left side
    for n in range(2, 7):
        for w in enumerate_S(n, QuiverConfig(3)):
            word = w.word()
            assert len(word) == n
            assert all(rewrite_pair(x, y) is not None for x, y in zip(word, word[1:]))


def _as_words(elem):
    return {(u, r.word(), v): c for (u, r, v), c in elem.terms.items()}


def test_split_examples():
    assert _as_words(split(1, [q(1), p(2), p(1)])) == {
        (e(1), (q(1),), a(2, 0)): 1,
        (a(1, 2), (p(2),), a(1, 0)): 1,
        (a(1, 1, 1), (p(1),), e(0)): 1,
    }
    assert _as_words(split(2, [q(1), p(2)])) == {(e(1), (q(1), p(2)), e(1)): 1}
    assert _as_words(split(2, [s(1), q(1), p(2)])) == {
        (e(1), (s(1), q(1)), a(2, 1)): 1,
        (a(1, 1, 1), (q(1), p(2)), e(1)): 1,
    }


def test_split_of_irreducible_path_is_signalled():
    with pytest.raises(KLRWError):
        split_L(2, [p(2), p(1)])


def test_boundary_examples():
    d1 = boundary_gen(P(1, 1))
    assert d1.terms == {(e(1), vertex(1), a(1, 0)): 1, (a(1, 0), vertex(0), e(0)): -1}
    for i in range(3):
        d2 = boundary_gen(Q(2, i))
        assert d2.terms == {
            (e(i), Q(1, i), a(i + 1, i)): 1,
            (a(i, i + 1), P(1, i + 1), e(i)): 1,
            (e(i), Q(1, i, True), e(i)): -1,
        }
    assert contract(ResolutionElement({(a(2, 1), vertex(1), a(1, 0)): 1})).terms == {a(2, 0): 1}


def test_boundary_is_homogeneous_and_precedes():
    for n in range(1, 7):
        for w in enumerate_S(n, QuiverConfig(4)):
            img = boundary_gen(w)
            assert img
            assert terms_precede(w, img)
            for (u, r, v) in img.terms:
                assert r.length == n - 1
                assert u.target == w.target and v.source == w.source
                assert u.qdeg + r.qdeg + v.qdeg == w.qdeg


@pytest.mark.parametrize("N", range(1, 6))
def test_boundary_squared_vanishes(N):
    assert check_boundary_squared(QuiverConfig(N), 8) == []


@pytest.mark.parametrize("N", range(1, 5))
def test_closed_form_matches_recursion(N):
    assert check_recursive_agreement(QuiverConfig(N), 5) == []


def test_recursion_on_a_single_generator():
    w = Q(4, 1, True)
    assert boundary_recursive_gen(w) == boundary_gen(w)


def test_boundary_is_bimodule_linear():
    w = P(3, 2)
    x = ResolutionElement({(a(0, 2, 1), w, a(1, 3)): 2})
    got = boundary(3, x)
    for (u, r, v), c in got.terms.items():
        assert u.target == 0 and v.source == 3
    assert boundary(2, got).terms == {}


@pytest.mark.parametrize("N", [1, 2, 3])
def test_exactness(N):
    report = check_exactness(QuiverConfig(N), 6, 10)
    assert report
    assert [r for r in report if not r["exact"]] == []
