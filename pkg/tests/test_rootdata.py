import itertools
from collections import deque

import numpy as np
import pytest

from alcovekit.errors import ConfigurationError, DomainError
from alcovekit.rootdata import (
    SUPPORTED_TYPES,
    CartanDatum,
    build_root_datum,
    cw_is_nonneg,
    cw_leq,
    cw_norm,
    parse_coweight,
)


@pytest.fixture(params=SUPPORTED_TYPES)
def R(request):
    return build_root_datum(request.param)


def test_weyl_group_orders():
    expected = {"A1": 2, "A2": 6, "B2": 8, "G2": 12, "A3": 24}
    for label, n in expected.items():
        assert build_root_datum(label).order == n


def test_spec_examples():
    A2 = build_root_datum("A2")
    assert A2.order == 6 and len(A2.positive_coroots) == 3
    A1 = build_root_datum("A1")
    assert A1.positive_coroots == ((1,),)
    assert A1.w0 == A1.gens[0] and A1.dim_X == 1
    G2 = build_root_datum("G2")
    assert len(G2.positive_coroots) == 6 and G2.lengths[G2.w0] == 6 and G2.order == 12


def test_unknown_type():
    with pytest.raises(ConfigurationError):
        build_root_datum("E8")
    with pytest.raises(ConfigurationError):
        CartanDatum("C2x")


def test_cartan_invariants(R):
    a = R.cartan.pairing
    for i in range(R.rank):
        assert a[i][i] == 2
        for j in range(R.rank):
            if i != j:
                assert a[j][i] <= 0
            assert R.cartan.dot[i][j] == R.cartan.dot[j][i]
        assert R.cartan.d[i] in (1, 2, 3)


def test_reflect_examples():
    A1 = build_root_datum("A1")
    assert A1.reflect((1,), 1) == (-1,)
    A2 = build_root_datum("A2")
    assert A2.reflect((1, 0), 2) == (1, 1)
    # (2,1) pairs to zero with the second simple root in A2
    assert A2.reflect((2, 1), 2) == (2, 1)
    with pytest.raises(DomainError):
        A2.reflect((1, 0), 3)


def test_generators_are_involutions_and_braid(R):
    mats = [R.elements[g].matrix for g in R.gens]
    eye = np.eye(R.rank, dtype=np.int64)
    for m in mats:
        assert np.array_equal(m @ m, eye)
    for i, j in itertools.combinations(range(R.rank), 2):
        m_ij = R.cartan.braid_orders[i][j]
        prod = np.linalg.matrix_power(mats[i] @ mats[j], m_ij)
        assert np.array_equal(prod, eye)


def test_length_is_cayley_distance(R):
    dist = {0: 0}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for g in R.gens:
            v = R.mult[g][u]
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    assert len(dist) == R.order
    assert all(R.lengths[w] == dist[w] for w in range(R.order))
    assert R.lengths[0] == 0
    assert R.lengths[R.w0] == len(R.positive_coroots) == R.dim_X


def test_coroot_tables(R):
    assert all(cw_is_nonneg(c) for c in R.positive_coroots)
    assert set(R.coroots) == set(R.positive_coroots) | {tuple(-x for x in c) for c in R.positive_coroots}
    two_rho = tuple(sum(c[i] for c in R.positive_coroots) for i in range(R.rank))
    assert two_rho == R.two_rho
    for i in range(R.rank):
        simple_root = tuple(int(j == i) for j in range(R.rank))
        assert R.pair(R.two_rho, simple_root) == 2
    for c in R.positive_coroots:
        s = R.reflection[c]
        assert R.mult[s][s] == 0
        assert R.act_index(c, s) == tuple(-x for x in c)
    # beta0 is the coroot of the highest root
    assert R.root_of_coroot[R.beta0] == R.highest_root
    assert all(cw_leq(r, R.highest_root) for r in R.positive_roots)


def test_reflection_length_parity(R):
    for c in R.positive_coroots:
        assert R.lengths[R.reflection[c]] % 2 == 1


def _all_reduced_words(R, w):
    n = R.lengths[w]
    return [
        word
        for word in itertools.product(range(1, R.rank + 1), repeat=n)
        if R.from_word(word) == w
    ]


@pytest.mark.parametrize("label", ["A2", "B2"])
def test_reduced_words_lexicographically_minimal(label):
    R = build_root_datum(label)
    for w in range(R.order):
        words = _all_reduced_words(R, w)
        assert R.reduced_word(w) == min(words)


def _subword_set(R, w):
    word = R.reduced_word(w)
    out = set()
    for r in range(len(word) + 1):
        for pos in itertools.combinations(range(len(word)), r):
            out.add(R.from_word([word[p] for p in pos]))
    return out


def test_bruhat_matches_subwords(R):
    if R.order > 24:
        pytest.skip("subword oracle is exponential")
    for y in range(R.order):
        below = _subword_set(R, y)
        for w in range(R.order):
            assert R.bruhat_leq(w, y) == (w in below)


def test_bruhat_examples():
    A2 = build_root_datum("A2")
    s1, s2 = A2.from_word([1]), A2.from_word([2])
    assert all(A2.bruhat_leq(0, w) for w in range(A2.order))
    assert A2.bruhat_leq(s1, A2.from_word([1, 2]))
    assert not A2.bruhat_leq(s1, s2)


def test_bruhat_partial_order_axioms(R):
    n = R.order
    for a in range(n):
        assert R.bruhat_leq(a, a)
        for b in range(n):
            if a != b and R.bruhat_leq(a, b):
                assert not R.bruhat_leq(b, a)
                assert R.lengths[a] < R.lengths[b]
            for c in range(n):
                if R.bruhat_leq(a, b) and R.bruhat_leq(b, c):
                    assert R.bruhat_leq(a, c)


def test_covers_are_reflection_covers(R):
    reflections = set(R.reflection.values())
    for w in range(R.order):
        for y in range(R.order):
            if R.lengths[y] != R.lengths[w] + 1:
                continue
            by_reflection = any(R.mult[t][w] == y for t in reflections)
            assert R.bruhat_leq(w, y) == by_reflection


def test_coweight_parsing():
    assert parse_coweight("1,2", 2) == (1, 2)
    assert parse_coweight(" -1 , 0 ", 2) == (-1, 0)
    with pytest.raises(DomainError):
        parse_coweight("1,2,3", 2)
    with pytest.raises(DomainError):
        parse_coweight("a,b", 2)
    assert cw_norm((2, -1, 3)) == 4
