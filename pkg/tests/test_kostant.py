import itertools
from collections import Counter

import pytest

from alcovekit.errors import DomainError
from alcovekit.exactalg import LaurentPoly
from alcovekit.globalcoh import at_q_equals_one
from alcovekit.icstalks import central_fiber_component_count
from alcovekit.kostant import (
    diagonal_stratum_dims,
    enumerate_partitions,
    kostant_number,
    kostant_poly,
    kostant_product,
    kostant_series,
)
from alcovekit.rootdata import build_root_datum, cw_add, cw_below


def t(*exps):
    return LaurentPoly(Counter(exps), "t")


def brute_force_partitions(R, alpha):
    """Multisets of positive coroots summing to alpha, by trying every size."""
    total = sum(alpha)
    found = []
    for n in range(total + 1):
        for combo in itertools.combinations_with_replacement(R.positive_coroots, n):
            acc = tuple(0 for _ in alpha)
            for c in combo:
                acc = cw_add(acc, c)
            if acc == tuple(alpha):
                found.append(tuple(sorted(combo)))
    return found


def test_enumeration_examples():
    A2 = build_root_datum("A2")
    assert [p.coroots for p in enumerate_partitions(A2, (0, 0))] == [()]
    got = [sorted(p.coroots) for p in enumerate_partitions(A2, (1, 1))]
    assert got == [[(1, 1)], [(0, 1), (1, 0)]]
    for n in range(6):
        parts = enumerate_partitions("A1", (n,))
        assert len(parts) == 1 and parts[0].size == n


def test_poly_examples():
    assert kostant_poly("A2", (1, 1)) == t(-1, -2)
    assert kostant_poly("A2", (0, 0)) == 1
    for n in range(8):
        assert kostant_poly("A1", (n,)) == t(-n)
    assert kostant_number("A2", (1, 1)) == 2
    assert kostant_number("A2", (2, 1)) == 2


def test_negative_coweight_rejected():
    with pytest.raises(DomainError):
        kostant_poly("A2", (1, -1))
    with pytest.raises(DomainError):
        enumerate_partitions("A2", (-1, 0))
    with pytest.raises(DomainError):
        kostant_number("A2", (1, 1, 1))


@pytest.mark.parametrize("label,bound", [("A1", (9,)), ("A2", (4, 4)), ("B2", (4, 3)), ("G2", (3, 4)), ("A3", (2, 2, 2))])
def test_against_brute_force(label, bound):
    R = build_root_datum(label)
    for alpha in cw_below(bound):
        oracle = brute_force_partitions(R, alpha)
        got = enumerate_partitions(R, alpha)
        assert sorted(tuple(sorted(p.coroots)) for p in got) == sorted(oracle)
        assert len(set(p.parts for p in got)) == len(got)
        assert all(p.total == alpha or not p.coroots for p in got)
        assert kostant_poly(R, alpha) == t(*(-len(k) for k in oracle))
        assert kostant_number(R, alpha) == len(got)


def test_parts_non_increasing_and_ordered():
    parts = enumerate_partitions("G2", (3, 4))
    assert all(list(p.parts) == sorted(p.parts, reverse=True) for p in parts)
    keys = [(p.size, p.parts) for p in parts]
    assert keys == sorted(keys)


def test_series_examples():
    one = kostant_series("A2", (0, 0))
    assert one.items() == [((0, 0), LaurentPoly.const(1, "t"))]
    s = kostant_series("A1", (3,))
    assert [(a, p) for a, p in s.items()] == [((k,), t(-k)) for k in range(4)]
    assert kostant_series("A2", (2, 2)) == kostant_product("A2", (2, 2))


@pytest.mark.parametrize("label,bound", [("B2", (5, 5)), ("A3", (3, 3, 3))])
def test_generating_identity(label, bound):
    assert kostant_series(label, bound) == kostant_product(label, bound)


def test_min_exponents_add():
    R = build_root_datum("B2")
    box = list(cw_below((3, 3)))
    for a, b in itertools.product(box, repeat=2):
        pa, pb, pab = kostant_poly(R, a), kostant_poly(R, b), kostant_poly(R, cw_add(a, b))
        prod = pa * pb
        # the most-parts partition of a+b is the union of the most-parts ones
        assert prod.min_degree() == pab.min_degree()
        assert prod.max_degree() <= pab.max_degree()


def test_diagonal_dims():
    assert list(diagonal_stratum_dims("A2", (0, 0)).values()) == [0]
    dims = diagonal_stratum_dims("A2", (1, 1))
    assert sorted((sorted(k.coroots), d) for k, d in dims.items()) == [
        ([(0, 1), (1, 0)], 2),
        ([(1, 1)], 1),
    ]
    assert list(diagonal_stratum_dims("A1", (5,)).values()) == [5]
    for alpha in cw_below((3, 3)):
        values = Counter(diagonal_stratum_dims("G2", alpha).values())
        assert values == Counter({-e: c for e, c in kostant_poly("G2", alpha).terms()})


def test_count_equals_components_and_series_at_one():
    for label, bound in (("A1", (10,)), ("A2", (5, 5))):
        series = kostant_series(label, bound)
        at_one = at_q_equals_one(series)
        for alpha in cw_below(bound):
            n = kostant_number(label, alpha)
            assert n == len(enumerate_partitions(label, alpha))
            assert n == central_fiber_component_count(build_root_datum(label), alpha)
            assert at_one.coefficient(alpha) == n
