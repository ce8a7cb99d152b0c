"""Partitions of a coweight into positive coroots and the graded count
``K^alpha(t) = sum_kappa t^(-|kappa|)``."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import DomainError
from .exactalg import CharacterSeries, LaurentPoly
from .rootdata import Coweight, RootDatum, build_root_datum, cw_below, cw_is_nonneg, cw_sub


@dataclass(frozen=True, order=True)
class KostantPartition:
    """A multiset of positive coroots, stored as non-increasing indices into
    ``RootDatum.positive_coroots``."""

    parts: tuple[int, ...]
    coroots: tuple[Coweight, ...]

    @property
    def size(self) -> int:
        return len(self.parts)

    @property
    def total(self) -> Coweight:
        r = len(self.coroots[0]) if self.coroots else 0
        return tuple(sum(c[i] for c in self.coroots) for i in range(r))

    def __len__(self) -> int:
        return len(self.parts)


def _check(R: RootDatum, alpha) -> Coweight:
    alpha = tuple(int(a) for a in alpha)
    if len(alpha) != R.rank:
        raise DomainError(f"coweight {alpha} has wrong rank for {R.label}")
    if not cw_is_nonneg(alpha):
        raise DomainError(f"{alpha} is not a non-negative combination of simple coroots")
    return alpha


def _datum(root) -> RootDatum:
    return root if isinstance(root, RootDatum) else build_root_datum(root)


@lru_cache(maxsize=None)
def _multiplicities(label: str, alpha: Coweight, k: int) -> tuple[tuple[int, ...], ...]:
    # multiplicity vectors over the first k positive coroots summing to alpha
    if k == 0:
        return ((),) if not any(alpha) else ()
    R = build_root_datum(label)
    c = R.positive_coroots[k - 1]
    out = []
    m, rest = 0, alpha
    while cw_is_nonneg(rest):
        for vec in _multiplicities(label, rest, k - 1):
            out.append(vec + (m,))
        m += 1
        rest = cw_sub(rest, c)
    return tuple(out)


def enumerate_partitions(root, alpha) -> list[KostantPartition]:
    """All partitions of ``alpha``, ordered by part count then parts."""
    R = _datum(root)
    alpha = _check(R, alpha)
    cor = R.positive_coroots
    out = []
    for vec in _multiplicities(R.label, alpha, len(cor)):
        parts = tuple(i for i in reversed(range(len(cor))) for _ in range(vec[i]))
        out.append(KostantPartition(parts, tuple(cor[i] for i in parts)))
    out.sort(key=lambda p: (p.size, p.parts))
    return out


@lru_cache(maxsize=None)
def _graded_counts(label: str, alpha: Coweight, k: int) -> tuple[tuple[int, int], ...]:
    # (part count, number of partitions) using the first k coroots
    if k == 0:
        return ((0, 1),) if not any(alpha) else ()
    R = build_root_datum(label)
    c = R.positive_coroots[k - 1]
    acc: dict[int, int] = {}
    m, rest = 0, alpha
    while cw_is_nonneg(rest):
        for n, cnt in _graded_counts(label, rest, k - 1):
            acc[n + m] = acc.get(n + m, 0) + cnt
        m += 1
        rest = cw_sub(rest, c)
    return tuple(sorted(acc.items()))


def kostant_poly(root, alpha) -> LaurentPoly:
    R = _datum(root)
    alpha = _check(R, alpha)
    counts = _graded_counts(R.label, alpha, len(R.positive_coroots))
    return LaurentPoly({-n: c for n, c in counts}, "t")


def kostant_number(root, alpha) -> int:
    return kostant_poly(root, alpha).evaluate(1)


def kostant_series(root, bound) -> CharacterSeries:
    """``sum_{alpha <= bound} K^alpha(t) e^alpha``."""
    R = _datum(root)
    bound = _check(R, bound)
    return CharacterSeries(bound, {a: kostant_poly(R, a) for a in cw_below(bound)}, "t")


def kostant_product(root, bound) -> CharacterSeries:
    """``prod_theta 1/(1 - t^-1 e^theta)`` truncated at ``bound``."""
    R = _datum(root)
    bound = _check(R, bound)
    out = CharacterSeries.unit(bound, "t")
    inv_t = LaurentPoly.monomial(-1, 1, "t")
    for c in R.positive_coroots:
        out = out * CharacterSeries.invert_one_minus_term(inv_t, c, bound)
    return out


def diagonal_stratum_dims(root, alpha) -> dict[KostantPartition, int]:
    """Dimension ``|kappa|`` of the diagonal stratum attached to each partition."""
    return {p: p.size for p in enumerate_partitions(root, alpha)}
