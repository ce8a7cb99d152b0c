"""Stalk generating functions of intersection cohomology sheaves on
quasimaps' spaces.

A :class:`StalkPolynomial` is a polynomial ``p`` in ``t`` together with an
integer shift; it encodes the v-polynomial ``v^-shift * p(v^2)``.  Only
relative degrees are meaningful: a stratum's own stalk is ``1`` at shift 0.
Generic polynomials ``qbar_{B,A}`` are converted with shift ``d(B, A)``, which
makes the t-exponents integral because ``qbar`` has the parity of ``d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import prod

from .alcoves import Alcove, distance
from .errors import DomainError
from .exactalg import LaurentPoly
from .kostant import kostant_number, kostant_poly
from .periodic import GenericKLTable, default_table
from .rootdata import Coweight, RootDatum, cw_add, cw_is_nonneg, cw_leq, cw_sub


@dataclass(frozen=True)
class DefectPartition:
    """An unordered multiset of nonzero coweights in ``N[I]``."""

    parts: tuple[Coweight, ...]

    def __init__(self, parts=()):
        normalized = tuple(sorted(tuple(int(a) for a in p) for p in parts))
        for p in normalized:
            if not cw_is_nonneg(p) or not any(p):
                raise DomainError(f"defect part {p} must be a nonzero element of N[I]")
        object.__setattr__(self, "parts", normalized)

    def total(self, rank: int) -> Coweight:
        out = tuple(0 for _ in range(rank))
        for p in self.parts:
            out = cw_add(out, p)
        return out

    def __len__(self) -> int:
        return len(self.parts)

    def union(self, other: "DefectPartition") -> "DefectPartition":
        return DefectPartition(self.parts + other.parts)


@dataclass(frozen=True)
class StalkPolynomial:
    poly: LaurentPoly
    shift: int = 0

    def __mul__(self, other: "StalkPolynomial") -> "StalkPolynomial":
        return StalkPolynomial(self.poly * other.poly, self.shift + other.shift)

    def as_v(self) -> LaurentPoly:
        """The encoded polynomial ``v^-shift p(v^2)``."""
        return self.poly.substitute_square("v").shift(-self.shift)

    @classmethod
    def from_v(cls, q: LaurentPoly, shift: int) -> "StalkPolynomial":
        return cls(q.with_var("v").shift(shift).halve("t"), shift)

    def rank(self) -> int:
        """Total dimension: the value at ``t = 1``."""
        return self.poly.evaluate(1)

    def __str__(self) -> str:
        return f"{self.poly} [shift {self.shift}]"


def _one() -> LaurentPoly:
    return LaurentPoly.const(1, "t")


def simple_stalk(R: RootDatum, alpha: Coweight) -> StalkPolynomial:
    """``K^alpha(t)``: the stalk of ``IC^alpha`` at the most degenerate point."""
    return StalkPolynomial(kostant_poly(R, alpha), 0)


def multiset_stalk(R: RootDatum, gamma: DefectPartition) -> StalkPolynomial:
    """``prod_r K^(gamma_r)(t)``."""
    return StalkPolynomial(prod((kostant_poly(R, g) for g in gamma.parts), start=_one()), 0)


def fine_stalk(
    R: RootDatum,
    A: Alcove,
    B: Alcove,
    gamma: DefectPartition | None = None,
    table: GenericKLTable | None = None,
) -> StalkPolynomial:
    """Stalk of the sheaf labelled ``A`` at the stratum ``(B, gamma)``.

    The defect parts are split off by factorization: the generic factor is
    taken for ``A`` lowered by the total defect, the rest is ``multiset_stalk``.
    """
    gamma = gamma or DefectPartition()
    total = gamma.total(R.rank)
    if not cw_leq(cw_add(total, B.chi), A.chi):
        raise DomainError("total defect plus the stratum coweight exceeds the sheaf coweight")
    lowered = Alcove(A.w, cw_sub(A.chi, total))
    if table is None:
        table = default_table(R)
    qbar = table.qbar(B, lowered)
    d = distance(R, B, lowered)
    base = StalkPolynomial.from_v(qbar, d) if qbar else StalkPolynomial(LaurentPoly.zero("t"), d)
    return base * multiset_stalk(R, gamma)


def parity_check(p: StalkPolynomial) -> bool:
    """True iff all cohomological degrees have one parity.

    A ``t``-exponent ``e`` sits in degree ``2e + shift``; a ``v``-exponent in
    degree ``e + shift``.
    """
    step = 2 if p.poly.var == "t" else 1
    return len({(step * e + p.shift) % 2 for e in p.poly.exponents()}) <= 1


def central_fiber_component_count(R: RootDatum, alpha: Coweight) -> int:
    return kostant_number(R, alpha)
