"""Sparse Laurent polynomials with big-integer coefficients and truncated
formal character series.

Text format
-----------
A polynomial renders as signed ``c*v^k`` terms in decreasing exponent order,
with unit coefficients and the ``^1`` exponent elided: ``v^2-2+3*v^-1``.
The zero polynomial renders as ``0``.  :meth:`LaurentPoly.parse` inverts
:meth:`LaurentPoly.__str__`.
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .errors import OutOfRangeError, UsageError
from .rootdata import Coweight, cw_add, cw_below, cw_is_nonneg, cw_leq, cw_sub

__all__ = ["LaurentPoly", "CharacterSeries"]


class LaurentPoly:
    """Immutable element of ``Z[x, x^-1]`` for a named variable ``x``."""

    __slots__ = ("_terms", "var", "_hash")

    def __init__(self, terms: Mapping[int, int] | None = None, var: str = "v"):
        self._terms = {k: c for k, c in (terms or {}).items() if c}
        self.var = var
        self._hash = None

    # -- constructors ------------------------------------------------------

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1, var: str = "v") -> "LaurentPoly":
        return cls({exponent: coeff}, var)

    @classmethod
    def const(cls, c: int, var: str = "v") -> "LaurentPoly":
        return cls({0: c}, var)

    @classmethod
    def zero(cls, var: str = "v") -> "LaurentPoly":
        return cls({}, var)

    @classmethod
    def _raw(cls, terms: dict[int, int], var: str) -> "LaurentPoly":
        # caller guarantees no zero coefficients
        p = cls.__new__(cls)
        p._terms = terms
        p.var = var
        p._hash = None
        return p

    # -- inspection --------------------------------------------------------

    def terms(self) -> list[tuple[int, int]]:
        """``(exponent, coefficient)`` pairs, increasing exponent."""
        return sorted(self._terms.items())

    def coefficient(self, k: int) -> int:
        return self._terms.get(k, 0)

    def exponents(self) -> list[int]:
        return sorted(self._terms)

    def min_degree(self) -> int | None:
        return min(self._terms) if self._terms else None

    def max_degree(self) -> int | None:
        return max(self._terms) if self._terms else None

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(k == 0 for k in self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # -- arithmetic --------------------------------------------------------

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.var != self.var and other._terms and self._terms:
                raise UsageError(f"variable mismatch: {self.var} vs {other.var}")
            return other
        if isinstance(other, int):
            return LaurentPoly.const(other, self.var)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        var = self.var if self._terms else other.var
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return LaurentPoly._raw(out, var)

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly._raw({k: -c for k, c in self._terms.items()}, self.var)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            if not other:
                return LaurentPoly.zero(self.var)
            return LaurentPoly._raw({k: c * other for k, c in self._terms.items()}, self.var)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        var = self.var if self._terms else other.var
        out: dict[int, int] = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                k = k1 + k2
                out[k] = out.get(k, 0) + c1 * c2
        return LaurentPoly(out, var)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            if len(self._terms) != 1:
                raise UsageError("only monomials are invertible")
            (k, c), = self._terms.items()
            if c not in (1, -1):
                raise UsageError("only unit monomials are invertible")
            return LaurentPoly.monomial(k * n, c ** (-n), self.var)
        out = LaurentPoly.const(1, self.var)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by ``var^k``."""
        return LaurentPoly._raw({e + k: c for e, c in self._terms.items()}, self.var)

    def bar(self) -> "LaurentPoly":
        """``var -> var^-1``."""
        return LaurentPoly._raw({-k: c for k, c in self._terms.items()}, self.var)

    def substitute_square(self, new_var: str = "v") -> "LaurentPoly":
        """``sum c_k t^k -> sum c_k v^(2k)``."""
        return LaurentPoly._raw({2 * k: c for k, c in self._terms.items()}, new_var)

    def halve(self, new_var: str = "t") -> "LaurentPoly":
        """Inverse of :meth:`substitute_square`; requires even exponents."""
        if any(k % 2 for k in self._terms):
            raise UsageError(f"{self} has odd exponents")
        return LaurentPoly._raw({k // 2: c for k, c in self._terms.items()}, new_var)

    def with_var(self, var: str) -> "LaurentPoly":
        return LaurentPoly._raw(dict(self._terms), var)

    def evaluate(self, x):
        """Value at ``x`` (int or Fraction); negative powers use exact division."""
        total = 0
        for k, c in self._terms.items():
            total += c * (Fraction(x) ** k if k < 0 else x ** k)
        if isinstance(total, Fraction) and total.denominator == 1:
            return int(total)
        return total

    def is_palindromic(self) -> bool:
        return self._terms == self.bar()._terms

    def parities(self) -> set[int]:
        return {k % 2 for k in self._terms}

    # -- comparison / hashing ---------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            return self._terms == ({0: other} if other else {})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self._terms and not other._terms:
            return True
        return self.var == other.var and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.var if self._terms else "", frozenset(self._terms.items())))
        return self._hash

    # -- text ----------------------------------------------------------------

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for k, c in sorted(self._terms.items(), reverse=True):
            if k == 0:
                body = str(abs(c))
            else:
                mono = self.var if k == 1 else f"{self.var}^{k}"
                body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += sign + body
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({str(self)!r}, var={self.var!r})"

    _TERM = re.compile(r"([+-]?)(?:(\d+)(?:\*([a-z])(?:\^(-?\d+))?)?|([a-z])(?:\^(-?\d+))?)")

    @classmethod
    def parse(cls, text: str, var: str = "v") -> "LaurentPoly":
        text = text.replace(" ", "")
        if text in ("", "0"):
            return cls.zero(var)
        terms: dict[int, int] = {}
        pos = 0
        while pos < len(text):
            m = cls._TERM.match(text, pos)
            if not m or m.end() == pos:
                raise UsageError(f"cannot parse polynomial {text!r} at {pos}")
            sign, num, v1, e1, v2, e2 = m.groups()
            s = -1 if sign == "-" else 1
            if num is not None:
                c = int(num)
                if v1 is None:
                    k = 0
                else:
                    var = v1
                    k = int(e1) if e1 is not None else 1
            else:
                c = 1
                var = v2
                k = int(e2) if e2 is not None else 1
            terms[k] = terms.get(k, 0) + s * c
            pos = m.end()
        return cls(terms, var)


def _graded_key(a: Coweight):
    return (sum(a), a)


class CharacterSeries:
    """A truncated formal series ``sum_alpha p_alpha e^(base + alpha)``.

    Exponents ``alpha`` range over ``0 <= alpha <= bound`` componentwise; terms
    beyond the bound are discarded by products.  ``base`` records an overall
    monomial prefactor such as ``e^(2 rho)``.
    """

    __slots__ = ("bound", "base", "var", "_coeffs")

    def __init__(
        self,
        bound: Coweight,
        coeffs: Mapping[Coweight, LaurentPoly] | None = None,
        var: str = "t",
        base: Coweight | None = None,
    ):
        self.bound = tuple(bound)
        self.base = tuple(base) if base is not None else tuple(0 for _ in bound)
        self.var = var
        self._coeffs: dict[Coweight, LaurentPoly] = {}
        for alpha, p in (coeffs or {}).items():
            alpha = tuple(alpha)
            if not (cw_is_nonneg(alpha) and cw_leq(alpha, self.bound)):
                continue
            if p:
                self._coeffs[alpha] = p

    # -- constructors --------------------------------------------------------

    @classmethod
    def unit(cls, bound: Coweight, var: str = "t") -> "CharacterSeries":
        zero = tuple(0 for _ in bound)
        return cls(bound, {zero: LaurentPoly.const(1, var)}, var)

    @classmethod
    def invert_one_minus_term(
        cls, c: LaurentPoly, theta: Coweight, bound: Coweight
    ) -> "CharacterSeries":
        """Truncated geometric series ``1 / (1 - c e^theta) = sum_n c^n e^(n theta)``."""
        if not cw_is_nonneg(theta) or not any(theta):
            raise UsageError("theta must be a nonzero element of the positive cone")
        coeffs = {}
        alpha = tuple(0 for _ in bound)
        power = LaurentPoly.const(1, c.var)
        while cw_leq(alpha, bound):
            coeffs[alpha] = power
            alpha = cw_add(alpha, theta)
            power = power * c
        return cls(bound, coeffs, c.var)

    # -- access ---------------------------------------------------------------

    def items(self) -> list[tuple[Coweight, LaurentPoly]]:
        """Nonzero ``(alpha, coefficient)`` pairs in graded-lex order of alpha."""
        return sorted(self._coeffs.items(), key=lambda kv: _graded_key(kv[0]))

    def support(self) -> list[Coweight]:
        return [a for a, _ in self.items()]

    def exponents(self) -> list[Coweight]:
        """Every ``alpha`` inside the truncation box, graded-lex."""
        return cw_below(self.bound)

    def coefficient(self, alpha: Coweight) -> LaurentPoly:
        """Coefficient of ``e^(base + alpha)``."""
        alpha = tuple(alpha)
        if not (cw_is_nonneg(alpha) and cw_leq(alpha, self.bound)):
            raise OutOfRangeError(f"{alpha} outside truncation bound {self.bound}")
        return self._coeffs.get(alpha, LaurentPoly.zero(self.var))

    def coefficient_at(self, exponent: Coweight) -> LaurentPoly:
        """Coefficient of ``e^exponent`` (absolute exponent, base included)."""
        return self.coefficient(cw_sub(tuple(exponent), self.base))

    # -- arithmetic -------------------------------------------------------------

    def _check(self, other: "CharacterSeries") -> None:
        if self.bound != other.bound:
            raise UsageError(f"truncation bounds differ: {self.bound} vs {other.bound}")

    def __add__(self, other: "CharacterSeries") -> "CharacterSeries":
        self._check(other)
        if self.base != other.base:
            raise UsageError("cannot add series with different base shifts")
        out = dict(self._coeffs)
        for a, p in other._coeffs.items():
            out[a] = out[a] + p if a in out else p
        return CharacterSeries(self.bound, out, self.var, self.base)

    def __neg__(self) -> "CharacterSeries":
        return CharacterSeries(self.bound, {a: -p for a, p in self._coeffs.items()}, self.var, self.base)

    def __sub__(self, other: "CharacterSeries") -> "CharacterSeries":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (LaurentPoly, int)):
            return CharacterSeries(
                self.bound, {a: p * other for a, p in self._coeffs.items()}, self.var, self.base
            )
        self._check(other)
        out: dict[Coweight, LaurentPoly] = {}
        bound = self.bound
        for a, p in self._coeffs.items():
            for b, q in other._coeffs.items():
                c = cw_add(a, b)
                if not cw_leq(c, bound):
                    continue
                pq = p * q
                out[c] = out[c] + pq if c in out else pq
        return CharacterSeries(bound, out, self.var, cw_add(self.base, other.base))

    __rmul__ = __mul__

    def shifted(self, base: Coweight) -> "CharacterSeries":
        """Multiply by ``e^base``."""
        return CharacterSeries(self.bound, self._coeffs, self.var, cw_add(self.base, base))

    def map(self, fn: Callable[[LaurentPoly], LaurentPoly], var: str | None = None) -> "CharacterSeries":
        return CharacterSeries(
            self.bound, {a: fn(p) for a, p in self._coeffs.items()}, var or self.var, self.base
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharacterSeries):
            return NotImplemented
        return (
            self.bound == other.bound
            and self.base == other.base
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.bound, self.base, frozenset(self._coeffs.items())))

    def render(self) -> str:
        """One ``alpha=[..] poly=..`` line per nonzero coefficient."""
        lines = []
        if any(self.base):
            lines.append("base=[" + ",".join(map(str, self.base)) + "]")
        for a, p in self.items():
            lines.append("alpha=[" + ",".join(map(str, a)) + f"] poly={p}")
        return "\n".join(lines)

    def __repr__(self) -> str:
        return f"CharacterSeries(bound={self.bound}, base={self.base}, terms={len(self._coeffs)})"


def product(series: Iterable[CharacterSeries], bound: Coweight, var: str = "t") -> CharacterSeries:
    out = CharacterSeries.unit(bound, var)
    for s in series:
        out = out * s
    return out
