"""Global intersection cohomology Poincare series of quasimaps' spaces.

All series use the variable ``q`` with ``t = q^2`` so that the prefactor
``t^(-dim X / 2)`` stays integral.  A Poincare series is a
:class:`CharacterSeries` with base ``2 rho``; its coefficient at relative
exponent ``alpha`` is the polynomial attached to ``e^(alpha + 2 rho)``.
"""
from __future__ import annotations

from .exactalg import CharacterSeries, LaurentPoly
from .kostant import kostant_poly
from .rootdata import Coweight, RootDatum, cw_add, cw_below, cw_sub


def poincare_wf(R: RootDatum, var: str = "t") -> LaurentPoly:
    """``sum_w t^l(w)``."""
    return LaurentPoly(dict(enumerate(R.poincare_counts())), var)


def _prefactor(R: RootDatum) -> LaurentPoly:
    return poincare_wf(R, "t").substitute_square("q").shift(-R.dim_X)


def pg_closed(R: RootDatum, bound: Coweight) -> CharacterSeries:
    """``e^(2 rho) q^-dimX sum_w q^(2l(w)) prod_theta 1/((1 - q^2 e^theta)(1 - q^-2 e^theta))``."""
    bound = tuple(bound)
    out = CharacterSeries.unit(bound, "q")
    up, down = LaurentPoly({2: 1}, "q"), LaurentPoly({-2: 1}, "q")
    for c in R.positive_coroots:
        out = out * CharacterSeries.invert_one_minus_term(up, c, bound)
        out = out * CharacterSeries.invert_one_minus_term(down, c, bound)
    return (out * _prefactor(R)).shifted(R.two_rho)


def pg_stratified(R: RootDatum, bound: Coweight) -> CharacterSeries:
    """Coefficientwise ``q^-dimX sum_w q^(2l(w)) sum_{beta <= alpha} K^beta(q^-2) K^(alpha-beta)(q^2)``."""
    bound = tuple(bound)
    pre = _prefactor(R)
    cache = {a: kostant_poly(R, a).substitute_square("q") for a in cw_below(bound)}
    coeffs = {}
    for alpha in cw_below(bound):
        acc = LaurentPoly.zero("q")
        for beta in cw_below(alpha):
            acc = acc + cache[beta].bar() * cache[cw_sub(alpha, beta)]
        coeffs[alpha] = pre * acc
    return CharacterSeries(bound, coeffs, "q", R.two_rho)


def char_t1(R: RootDatum, bound: Coweight) -> CharacterSeries:
    """``|W_f| e^(2 rho) / prod_theta (1 - e^theta)^2``."""
    bound = tuple(bound)
    one = LaurentPoly.const(1, "q")
    out = CharacterSeries.unit(bound, "q")
    for c in R.positive_coroots:
        geo = CharacterSeries.invert_one_minus_term(one, c, bound)
        out = out * geo * geo
    return (out * R.order).shifted(R.two_rho)


def at_q_equals_one(series: CharacterSeries) -> CharacterSeries:
    return series.map(lambda p: LaurentPoly.const(p.evaluate(1), series.var))


def h_weight(R: RootDatum, beta: Coweight, i: int) -> int:
    """``<beta + 2 rho, i'>``."""
    simple_root = tuple(int(j == i - 1) for j in range(R.rank))
    return R.pair(cw_add(tuple(beta), R.two_rho), simple_root)


def is_palindromic(p: LaurentPoly) -> bool:
    return p.is_palindromic()


def single_parity(p: LaurentPoly) -> bool:
    return len(p.parities()) <= 1


def t_form(p: LaurentPoly) -> LaurentPoly | None:
    """The polynomial rewritten in ``t = q^2`` when all exponents are even."""
    if p.parities() - {0}:
        return None
    return p.halve("t")


def projective_space_poincare(n: int) -> LaurentPoly:
    """``q^-n (1 + q^2 + ... + q^(2n))``: the shifted Poincare polynomial of ``P^n``."""
    return LaurentPoly({2 * j - n: 1 for j in range(n + 1)}, "q")


def series_rows(series: CharacterSeries, R: RootDatum) -> list[dict]:
    rows = []
    for alpha in series.exponents():
        p = series.coefficient(alpha)
        tp = t_form(p)
        rows.append(
            {
                "alpha": list(alpha),
                "poly_q": str(p),
                "poly_t_if_integral": None if tp is None else str(tp),
                "palindromic": is_palindromic(p),
                "parity_ok": single_parity(p),
            }
        )
    return rows

