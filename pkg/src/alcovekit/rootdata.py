"""Cartan data, finite Weyl groups, (co)roots and Bruhat order.

Conventions
-----------
* Simple coroots and simple roots are labelled ``1..r``; a coweight is a tuple
  ``(a_1, ..., a_r)`` of coefficients on the simple coroots.
* ``<i, j'> = 2 (i.j) / (i.i)`` is the pairing of the coroot ``i`` with the
  root ``j'``.
* The finite Weyl group acts on coweights **on the right**: a coweight is a row
  vector and ``y . w = y @ M_w``.  Consequently ``M_{uw} = M_u @ M_w`` and the
  word ``(i_1, ..., i_k)`` denotes the product ``s_{i_1} ... s_{i_k}``.
"""
from __future__ import annotations

import itertools
from collections import deque
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ConfigurationError, DomainError

Coweight = tuple[int, ...]

SUPPORTED_TYPES = ("A1", "A2", "B2", "G2", "A3")

# symmetric bilinear form i.j on the simple coroots
_DOT_PRODUCTS: dict[str, tuple[tuple[int, ...], ...]] = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "B2": ((4, -2), (-2, 2)),
    "G2": ((2, -3), (-3, 6)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
}

_BRAID_ORDER = {0: 2, 1: 3, 2: 4, 3: 6}


# --------------------------------------------------------------------------
# coweight arithmetic


def cw_add(a: Coweight, b: Coweight) -> Coweight:
    return tuple(x + y for x, y in zip(a, b))


def cw_sub(a: Coweight, b: Coweight) -> Coweight:
    return tuple(x - y for x, y in zip(a, b))


def cw_scale(k: int, a: Coweight) -> Coweight:
    return tuple(k * x for x in a)


def cw_norm(a: Coweight) -> int:
    """``|chi|``: the sum of the coefficients."""
    return sum(a)


def cw_is_nonneg(a: Coweight) -> bool:
    return all(x >= 0 for x in a)


def cw_leq(a: Coweight, b: Coweight) -> bool:
    """Componentwise order: ``b - a`` lies in the positive cone."""
    return all(x <= y for x, y in zip(a, b))


def cw_below(bound: Coweight):
    """All coweights ``0 <= alpha <= bound`` in graded-lex order."""
    out = itertools.product(*(range(b + 1) for b in bound))
    return sorted(out, key=lambda a: (sum(a), a))


def _height_key(c: Coweight):
    # by height, simple coroots in label order
    return (sum(c), tuple(-x for x in c))


def parse_coweight(text: str, rank: int) -> Coweight:
    try:
        parts = tuple(int(p) for p in text.split(",")) if text.strip() else ()
    except ValueError as exc:
        raise DomainError(f"malformed coweight {text!r}") from exc
    if len(parts) != rank:
        raise DomainError(f"coweight {text!r} must have {rank} entries")
    return parts


def format_coweight(a: Coweight) -> str:
    return ",".join(str(x) for x in a)


# --------------------------------------------------------------------------


class CartanDatum:
    """A Cartan datum ``(I, .)`` from the supported allow-list."""

    def __init__(self, label: str):
        if label not in _DOT_PRODUCTS:
            raise ConfigurationError(
                f"unknown Cartan type {label!r}; supported: {', '.join(SUPPORTED_TYPES)}"
            )
        self.label = label
        self.dot = _DOT_PRODUCTS[label]
        self.rank = len(self.dot)
        self.d = tuple(self.dot[i][i] // 2 for i in range(self.rank))
        r = self.rank
        # pairing[i][j] = <i, j'>
        self.pairing = tuple(
            tuple(2 * self.dot[i][j] // self.dot[i][i] for j in range(r)) for i in range(r)
        )
        self.braid_orders = tuple(
            tuple(
                1 if i == j else _BRAID_ORDER[self.pairing[i][j] * self.pairing[j][i]]
                for j in range(r)
            )
            for i in range(r)
        )

    def scalar_product(self, i: int, j: int) -> Fraction:
        """``(i|j) = d (i.j) / (d_i d_j)`` on simple coroots (1-based labels)."""
        dmax = max(self.d)
        return Fraction(dmax * self.dot[i - 1][j - 1], self.d[i - 1] * self.d[j - 1])

    def pair(self, y: Sequence[int], x: Sequence[int]) -> int:
        """``<y, x>`` for a coweight ``y`` and a root-lattice element ``x``."""
        p = self.pairing
        return sum(y[i] * p[i][j] * x[j] for i in range(self.rank) for j in range(self.rank) if y[i] and x[j])

    def __repr__(self) -> str:
        return f"CartanDatum({self.label!r})"


class WeylElement:
    """An element of the finite Weyl group, stored as its right action matrix."""

    __slots__ = ("matrix", "index", "length", "_key")

    def __init__(self, matrix: np.ndarray, index: int, length: int):
        matrix = np.array(matrix, dtype=np.int64)
        matrix.setflags(write=False)
        self.matrix = matrix
        self.index = index
        self.length = length
        self._key = matrix.tobytes()

    def __eq__(self, other) -> bool:
        if not isinstance(other, WeylElement):
            return NotImplemented
        return np.array_equal(self.matrix, other.matrix)

    def __hash__(self) -> int:
        return hash(self._key)

    def __repr__(self) -> str:
        return f"WeylElement(index={self.index}, length={self.length})"


class RootDatum:
    """Complete tables for one Cartan type.

    Weyl group elements are addressed by their index into ``elements``; index 0
    is the identity and indices are assigned in breadth-first order.
    """

    def __init__(self, label: str):
        self.cartan = CartanDatum(label)
        self.label = label
        self.rank = r = self.cartan.rank
        a = self.cartan.pairing

        self.simple_coroots: tuple[Coweight, ...] = tuple(
            tuple(int(i == j) for j in range(r)) for i in range(r)
        )
        gens = []
        for i in range(r):
            m = np.eye(r, dtype=np.int64)
            for j in range(r):
                m[j, i] -= a[j][i]
            gens.append(m)

        # breadth-first closure of the generators
        mats = [np.eye(r, dtype=np.int64)]
        index = {mats[0].tobytes(): 0}
        dist = [0]
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for g in gens:
                m = g @ mats[u]
                key = m.tobytes()
                if key not in index:
                    index[key] = len(mats)
                    mats.append(m)
                    dist.append(dist[u] + 1)
                    queue.append(index[key])
        self._index = index
        n = len(mats)
        self.order = n
        self.mult = [[index[(mats[x] @ mats[y]).tobytes()] for y in range(n)] for x in range(n)]
        self.inverse = [self.mult[x].index(0) for x in range(n)]
        self.gens = tuple(index[g.tobytes()] for g in gens)

        # roots (in the simple-root basis) paired with their coroots
        pairs = {}
        queue = deque()
        for i in range(r):
            cr = self.simple_coroots[i]
            pairs[cr] = cr  # simple root i' also has coordinates e_i
            queue.append(cr)
        while queue:
            y = queue.popleft()
            x = pairs[y]
            for i in range(r):
                y2 = self.reflect(y, i + 1)
                x2 = tuple(x[j] - (self.cartan.pair(self.simple_coroots[i], x) if j == i else 0) for j in range(r))
                if y2 not in pairs:
                    pairs[y2] = x2
                    queue.append(y2)
        self.coroots = tuple(sorted(pairs, key=_height_key))
        self.positive_coroots: tuple[Coweight, ...] = tuple(c for c in self.coroots if cw_is_nonneg(c))
        self.root_of_coroot: dict[Coweight, tuple[int, ...]] = dict(pairs)
        self.positive_roots = tuple(
            sorted((pairs[c] for c in self.positive_coroots), key=_height_key)
        )

        # reflection s_theta for each positive coroot
        self.reflection: dict[Coweight, int] = {}
        for c in self.positive_coroots:
            theta = pairs[c]
            m = np.eye(r, dtype=np.int64)
            for j in range(r):
                pj = self.cartan.pair(self.simple_coroots[j], theta)
                for k in range(r):
                    m[j, k] -= pj * c[k]
            self.reflection[c] = index[m.tobytes()]

        self.lengths = [
            sum(1 for c in self.positive_coroots if (np.asarray(c) @ mats[w] < 0).any())
            for w in range(n)
        ]
        self.elements = [WeylElement(mats[w], w, self.lengths[w]) for w in range(n)]
        self.w0 = max(range(n), key=lambda w: self.lengths[w])
        self.highest_root = max(self.positive_roots, key=lambda x: (sum(x), x))
        self.beta0 = next(c for c in self.positive_coroots if pairs[c] == self.highest_root)
        self.s_beta0 = self.reflection[self.beta0]
        self.two_rho = tuple(sum(c[i] for c in self.positive_coroots) for i in range(r))
        self.dim_X = len(self.positive_coroots)

        self._bruhat = self._bruhat_table()
        self.down_mask = [
            sum(1 << u for u in range(n) if self._bruhat[u][y]) for y in range(n)
        ]

    # ----------------------------------------------------------------- actions

    def reflect(self, y: Coweight, i: int) -> Coweight:
        """``s_i(y) = y - <y, i'> i`` for the simple reflection labelled ``i``."""
        if not 1 <= i <= self.rank:
            raise DomainError(f"generator {i} not in 1..{self.rank}")
        p = sum(y[j] * self.cartan.pairing[j][i - 1] for j in range(self.rank))
        return tuple(y[j] - (p if j == i - 1 else 0) for j in range(self.rank))

    def act_index(self, y: Coweight, w: int) -> Coweight:
        """Right action ``y . w``."""
        return tuple(int(v) for v in np.asarray(y, dtype=np.int64) @ self.elements[w].matrix)

    def act(self, y: Coweight, w: WeylElement | int) -> Coweight:
        return self.act_index(y, w if isinstance(w, int) else w.index)

    def pair(self, y: Coweight, x: Sequence[int]) -> int:
        return self.cartan.pair(y, x)

    # ----------------------------------------------------------------- group

    def element(self, w: int | WeylElement) -> WeylElement:
        return self.elements[w if isinstance(w, int) else w.index]

    def from_word(self, word: Sequence[int]) -> int:
        """Index of ``s_{i_1} ... s_{i_k}`` (labels ``1..r``)."""
        w = 0
        for i in word:
            if not 1 <= i <= self.rank:
                raise DomainError(f"generator {i} not in 1..{self.rank}")
            w = self.mult[w][self.gens[i - 1]]
        return w

    def left_descent(self, w: int) -> int | None:
        """Smallest label ``i`` with ``l(s_i w) < l(w)``."""
        for i, g in enumerate(self.gens):
            if self.lengths[self.mult[g][w]] < self.lengths[w]:
                return i + 1
        return None

    @lru_cache(maxsize=None)
    def reduced_word(self, w: int) -> tuple[int, ...]:
        """Lexicographically smallest reduced word (greedy left descents)."""
        word = []
        while w:
            i = self.left_descent(w)
            word.append(i)
            w = self.mult[self.gens[i - 1]][w]
        return tuple(word)

    def _bruhat_table(self) -> list[list[bool]]:
        n, lengths = self.order, self.lengths
        by_len = sorted(range(n), key=lambda w: lengths[w])
        table = [[False] * n for _ in range(n)]
        # u <= x  iff  min(u, s u) <= s x   for a left descent s of x
        for x in by_len:
            if x == 0:
                table[0][0] = True
                continue
            g = self.gens[self.left_descent(x) - 1]
            sx = self.mult[g][x]
            for u in range(n):
                su = self.mult[g][u]
                m = su if lengths[su] < lengths[u] else u
                table[u][x] = table[m][sx]
        return table

    def bruhat_leq(self, w: int | WeylElement, y: int | WeylElement) -> bool:
        w = w if isinstance(w, int) else w.index
        y = y if isinstance(y, int) else y.index
        return self._bruhat[w][y]

    def bruhat_covers(self, w: int) -> list[int]:
        """Elements covering ``w`` in the Bruhat order."""
        lw = self.lengths[w]
        return [y for y in range(self.order) if self.lengths[y] == lw + 1 and self._bruhat[w][y]]

    def bruhat_cocovers(self, w: int) -> list[int]:
        lw = self.lengths[w]
        return [y for y in range(self.order) if self.lengths[y] == lw - 1 and self._bruhat[y][w]]

    def poincare_counts(self) -> list[int]:
        """Number of elements of each length."""
        counts = [0] * (self.dim_X + 1)
        for length in self.lengths:
            counts[length] += 1
        return counts

    def __repr__(self) -> str:
        return f"RootDatum({self.label!r})"


@lru_cache(maxsize=None)
def build_root_datum(type_label: str) -> RootDatum:
    """Tables for ``type_label``; cached, the result is treated as immutable."""
    return RootDatum(type_label)
