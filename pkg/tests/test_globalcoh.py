import pytest

from alcovekit.exactalg import LaurentPoly
from alcovekit.globalcoh import (
    at_q_equals_one,
    char_t1,
    h_weight,
    is_palindromic,
    pg_closed,
    pg_stratified,
    poincare_wf,
    projective_space_poincare,
    series_rows,
    single_parity,
    t_form,
)
from alcovekit.rootdata import build_root_datum, cw_add, cw_below, cw_norm

A1 = build_root_datum("A1")
A2 = build_root_datum("A2")


def test_poincare_wf():
    assert poincare_wf(A1) == LaurentPoly({0: 1, 1: 1}, "t")
    assert poincare_wf(A2) == LaurentPoly({0: 1, 1: 2, 2: 2, 3: 1}, "t")
    for label in ("B2", "G2", "A3"):
        R = build_root_datum(label)
        assert poincare_wf(R).evaluate(1) == R.order


def test_projective_space_oracle():
    series = pg_closed(A1, (12,))
    for n in range(12):
        got = series.coefficient_at(((n + 1),))
        assert got == projective_space_poincare(2 * n + 1)
        assert got.evaluate(1) == 2 * (n + 1)


def test_base_coefficient():
    for R in (A1, A2):
        series = pg_closed(R, tuple(0 for _ in range(R.rank)))
        expected = poincare_wf(R).substitute_square("q").shift(-R.dim_X)
        assert series.coefficient_at(R.two_rho) == expected


def test_stratified_example():
    s = pg_stratified(A1, (1,))
    assert s.coefficient((1,)) == LaurentPoly({-3: 1, -1: 1, 1: 1, 3: 1}, "q")


@pytest.mark.parametrize("label,bound", [("A1", (12,)), ("A2", (4, 4)), ("B2", (3, 3))])
def test_closed_equals_stratified(label, bound):
    R = build_root_datum(label)
    assert pg_closed(R, bound) == pg_stratified(R, bound)


@pytest.mark.parametrize("label,bound", [("A1", (10,)), ("A2", (4, 4)), ("G2", (3, 3))])
def test_coefficients_palindromic_single_parity(label, bound):
    R = build_root_datum(label)
    for _, p in pg_closed(R, bound).items():
        assert is_palindromic(p) and single_parity(p)


def test_char_t1():
    c = char_t1(A1, (8,))
    assert c.coefficient_at(A1.two_rho) == 2
    for n in range(8):
        assert c.coefficient_at((n + 1,)) == 2 * (n + 1)
    assert char_t1(A2, (0, 0)).coefficient_at(A2.two_rho) == 6
    for R, bound in ((A1, (10,)), (A2, (4, 4))):
        assert at_q_equals_one(pg_closed(R, bound)) == char_t1(R, bound)


def test_h_weight():
    assert h_weight(A1, (0,), 1) == 2
    assert h_weight(A2, (1, 0), 1) == 4
    for a in cw_below((2, 2)):
        for b in cw_below((2, 2)):
            for i in (1, 2):
                lhs = h_weight(A2, cw_add(a, b), i)
                assert lhs == h_weight(A2, a, i) + h_weight(A2, b, i) - h_weight(A2, (0, 0), i)


def test_t_form_and_rows():
    assert t_form(LaurentPoly({-2: 1, 2: 1}, "q")) == LaurentPoly({-1: 1, 1: 1}, "t")
    assert t_form(LaurentPoly({-1: 1}, "q")) is None
    rows = series_rows(pg_closed(A1, (2,)), A1)
    assert [r["alpha"] for r in rows] == [[0], [1], [2]]
    assert rows[0]["poly_q"] == "q+q^-1"
    assert rows[0]["poly_t_if_integral"] is None
    assert all(r["palindromic"] and r["parity_ok"] for r in rows)
    # dim X is 4 in type B2, so every exponent is even
    B2 = build_root_datum("B2")
    b2_rows = series_rows(pg_closed(B2, (1, 1)), B2)
    assert all(r["poly_t_if_integral"] is not None for r in b2_rows)


def test_total_dimension_a1():
    series = pg_closed(A1, (15,))
    for (alpha,), p in series.items():
        assert p.evaluate(1) == 2 * (cw_norm((alpha,)) + 1)
