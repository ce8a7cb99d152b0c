"""Affine Weyl group, affine Hecke algebra, bar involution and the self-dual
basis.

An affine Weyl group element ``x`` is identified with the alcove ``x A_0``
(:class:`~alcovekit.alcoves.Alcove`), on which the group acts simply
transitively from the left.

Hecke algebra conventions::

    H_s^2 = (v^-1 - v) H_s + 1
    C_s   = H_s - v^-1               (bar-invariant, C_s^2 = -(v + v^-1) C_s)
    bar(H_s) = H_s^-1 = H_s - v^-1 + v

The self-dual element ``C_x`` is the unique bar-invariant element in
``H_x + sum_{y < x} v^-1 Z[v^-1] H_y``; ``h_poly(y, x)`` is its coefficient at
``H_y``.
"""
from __future__ import annotations

import threading
from collections import deque
from fractions import Fraction
from itertools import combinations
from math import floor
from typing import Iterable, Mapping, Sequence

from .alcoves import Alcove, gen_action, identity_alcove, right_gen_action
from .errors import ConsistencyError, DomainError
from .exactalg import LaurentPoly
from .rootdata import RootDatum, build_root_datum


class AffineWeylGroup:
    """Lengths, words and Bruhat order on the affine Weyl group of a root datum.

    Elements met during a computation are interned to integer ids so that the
    Hecke algebra can work with flat tables.
    """

    def __init__(self, R: RootDatum | str):
        self.R = R if isinstance(R, RootDatum) else build_root_datum(R)
        R = self.R
        self.rank = R.rank
        self.generators = tuple(range(R.rank + 1))
        self.identity = identity_alcove(R)
        self.coxeter_number = sum(R.highest_root) + 1

        def height(x):
            return sum(x)

        h = self.coxeter_number
        self._pairings = [
            tuple(R.pair(tuple(int(i == j) for i in range(R.rank)), R.root_of_coroot[c]) for j in range(R.rank))
            for c in R.positive_coroots
        ]
        # offsets[w][theta] = floor(<b w, theta>) + 1, b an interior point of A_0
        self._offsets = []
        for w in range(R.order):
            winv = R.inverse[w]
            row = []
            for c in R.positive_coroots:
                root = R.root_of_coroot[R.act_index(c, winv)]
                row.append(floor(Fraction(-height(root), h)) + 1)
            self._offsets.append(tuple(row))

        self._lock = threading.RLock()
        self._ids: dict[Alcove, int] = {}
        self._alcoves: list[Alcove] = []
        self._lengths: list[int] = []
        self._left: list[list[int]] = [[] for _ in self.generators]
        self._right: list[list[int]] = [[] for _ in self.generators]
        self._bruhat_memo: dict[tuple[int, int], bool] = {}
        self.intern(self.identity)

    # ---------------------------------------------------------------- ids

    def intern(self, x: Alcove) -> int:
        i = self._ids.get(x)
        if i is not None:
            return i
        with self._lock:
            i = self._ids.get(x)
            if i is None:
                i = len(self._alcoves)
                self._alcoves.append(x)
                self._lengths.append(self.hyperplane_length(x))
                for table in self._left:
                    table.append(-1)
                for table in self._right:
                    table.append(-1)
                self._ids[x] = i
        return i

    def alcove(self, i: int) -> Alcove:
        return self._alcoves[i]

    def length_id(self, i: int) -> int:
        return self._lengths[i]

    def left_id(self, k: int, i: int) -> int:
        j = self._left[k][i]
        if j < 0:
            j = self.intern(gen_action(self.R, k, self._alcoves[i]))
            self._left[k][i] = j
            self._left[k][j] = i
        return j

    def right_id(self, i: int, k: int) -> int:
        j = self._right[k][i]
        if j < 0:
            j = self.intern(right_gen_action(self.R, k, self._alcoves[i]))
            self._right[k][i] = j
            self._right[k][j] = i
        return j

    # ------------------------------------------------------------- lengths

    def hyperplane_length(self, x: Alcove) -> int:
        """Number of affine hyperplanes separating ``A_0`` from ``x A_0``."""
        off = self._offsets[x.w]
        chi = x.chi
        total = 0
        for t, p in enumerate(self._pairings):
            total += abs(off[t] + sum(a * b for a, b in zip(chi, p)))
        return total

    def length(self, x: Alcove) -> int:
        return self._lengths[self.intern(x)]

    def bfs_lengths(self, max_length: int) -> dict[Alcove, int]:
        """Word distance from the identity, by breadth-first search."""
        dist = {self.identity: 0}
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            if dist[x] == max_length:
                continue
            for k in self.generators:
                y = gen_action(self.R, k, x)
                if y not in dist:
                    dist[y] = dist[x] + 1
                    queue.append(y)
        return dist

    # --------------------------------------------------------------- words

    def left_descents(self, x: Alcove) -> list[int]:
        i = self.intern(x)
        return [k for k in self.generators if self._lengths[self.left_id(k, i)] < self._lengths[i]]

    def _first_descent(self, i: int) -> int | None:
        li = self._lengths[i]
        for k in self.generators:
            if self._lengths[self.left_id(k, i)] < li:
                return k
        return None

    def reduced_word(self, x: Alcove) -> tuple[int, ...]:
        """Reduced word taking the smallest left descent at each step."""
        i = self.intern(x)
        word = []
        while self._lengths[i]:
            k = self._first_descent(i)
            word.append(k)
            i = self.left_id(k, i)
        return tuple(word)

    def from_word(self, word: Sequence[int]) -> Alcove:
        """The element ``s_{i_1} ... s_{i_k}``."""
        x = self.identity
        for k in reversed(word):
            if k not in self.generators:
                raise DomainError(f"generator {k} not in 0..{self.rank}")
            x = gen_action(self.R, k, x)
        return x

    def multiply(self, x: Alcove, y: Alcove) -> Alcove:
        out = x
        for k in self.reduced_word(y):
            out = right_gen_action(self.R, k, out)
        return out

    # -------------------------------------------------------------- Bruhat

    def _leq_id(self, j: int, i: int) -> bool:
        if j == i:
            return True
        lj, li = self._lengths[j], self._lengths[i]
        if lj >= li:
            return False
        key = (j, i)
        hit = self._bruhat_memo.get(key)
        if hit is not None:
            return hit
        # y <= x  iff  min(y, s y) <= s x, for s a left descent of x
        k = self._first_descent(i)
        si, sj = self.left_id(k, i), self.left_id(k, j)
        m = sj if self._lengths[sj] < lj else j
        ans = self._leq_id(m, si)
        self._bruhat_memo[key] = ans
        return ans

    def bruhat_leq(self, y: Alcove, x: Alcove) -> bool:
        return self._leq_id(self.intern(y), self.intern(x))

    def subword_lower_set(self, x: Alcove) -> set[Alcove]:
        """All products of subwords of a reduced word of ``x`` (for cross-checks)."""
        word = self.reduced_word(x)
        out = set()
        for r in range(len(word) + 1):
            for pos in combinations(range(len(word)), r):
                out.add(self.from_word([word[p] for p in pos]))
        return out

    def elements_up_to(self, max_length: int) -> list[Alcove]:
        d = self.bfs_lengths(max_length)
        return sorted(d, key=lambda x: (d[x], x.chi, x.w))


# ------------------------------------------------------------------ Hecke


def _lp(coeffs: Mapping[int, int]) -> LaurentPoly:
    return LaurentPoly(coeffs, "v")


class HeckeElement:
    """Finite combination ``sum_x p_x H_x`` with ``p_x`` Laurent polynomials in v."""

    __slots__ = ("W", "_terms")

    def __init__(self, W: AffineWeylGroup, terms: Mapping[Alcove, LaurentPoly] | None = None):
        self.W = W
        self._terms = {x: p for x, p in (terms or {}).items() if p}

    @classmethod
    def basis(cls, W: AffineWeylGroup, x: Alcove, coeff: LaurentPoly | int = 1) -> "HeckeElement":
        c = coeff if isinstance(coeff, LaurentPoly) else LaurentPoly.const(coeff)
        return cls(W, {x: c})

    def items(self) -> list[tuple[Alcove, LaurentPoly]]:
        W = self.W
        return sorted(self._terms.items(), key=lambda kv: (-W.length(kv[0]), kv[0].chi, kv[0].w))

    def coefficient(self, x: Alcove) -> LaurentPoly:
        return self._terms.get(x, LaurentPoly.zero())

    def support(self) -> list[Alcove]:
        return [x for x, _ in self.items()]

    def __add__(self, other: "HeckeElement") -> "HeckeElement":
        out = dict(self._terms)
        for x, p in other._terms.items():
            out[x] = out[x] + p if x in out else p
        return HeckeElement(self.W, out)

    def __neg__(self) -> "HeckeElement":
        return HeckeElement(self.W, {x: -p for x, p in self._terms.items()})

    def __sub__(self, other: "HeckeElement") -> "HeckeElement":
        return self + (-other)

    def scale(self, c: LaurentPoly | int) -> "HeckeElement":
        return HeckeElement(self.W, {x: p * c for x, p in self._terms.items()})

    def __mul__(self, other: "HeckeElement") -> "HeckeElement":
        out = HeckeElement(self.W)
        for y, q in other._terms.items():
            # H_x H_y = H_x applied to the generators of y from the right
            part = self
            for k in self.W.reduced_word(y):
                part = mult_gen(k, part, "right")
            out = out + part.scale(q)
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, HeckeElement) and self._terms == other._terms

    def __len__(self) -> int:
        return len(self._terms)

    def __repr__(self) -> str:
        W = self.W
        body = " + ".join(f"({p})*H[{''.join(map(str, W.reduced_word(x))) or 'e'}]" for x, p in self.items())
        return f"HeckeElement({body or '0'})"


_V = _lp({1: 1})
_VINV = _lp({-1: 1})


def mult_gen(k: int, H: HeckeElement, side: str = "left") -> HeckeElement:
    """``H_{s_k} H`` (left) or ``H H_{s_k}`` (right)."""
    W = H.W
    out: dict[Alcove, LaurentPoly] = {}
    for x, p in H._terms.items():
        i = W.intern(x)
        j = W.left_id(k, i) if side == "left" else W.right_id(i, k)
        y = W.alcove(j)
        out[y] = out[y] + p if y in out else p
        if W.length_id(j) < W.length_id(i):
            extra = p * (_VINV - _V)
            out[x] = out[x] + extra if x in out else extra
    return HeckeElement(W, out)


def ctilde(W: AffineWeylGroup, k: int) -> HeckeElement:
    s = gen_action(W.R, k, W.identity)
    return HeckeElement(W, {s: LaurentPoly.const(1), W.identity: -_VINV})


class HeckeAlgebra:
    """Bar involution and self-dual basis with memo tables shared per instance."""

    def __init__(self, W: AffineWeylGroup | RootDatum | str):
        self.W = W if isinstance(W, AffineWeylGroup) else AffineWeylGroup(W)
        self._lock = threading.RLock()
        # id -> {id: {exp: coeff}}
        self._bar_memo: dict[int, dict[int, dict[int, int]]] = {0: {0: {0: 1}}}
        # id -> {id: [c_0, c_1, ...]} meaning sum_k c_k v^-k
        self._kl_memo: dict[int, dict[int, list[int]]] = {0: {0: [1]}}
        self._bar_checked: set[int] = {0}

    # -------------------------------------------------------------- bar

    def _bar_basis(self, i: int) -> dict[int, dict[int, int]]:
        hit = self._bar_memo.get(i)
        if hit is not None:
            return hit
        W = self.W
        k = W._first_descent(i)
        prev = self._bar_basis(W.left_id(k, i))
        # bar(H_x) = (H_s - v^-1 + v) bar(H_{s x})
        out: dict[int, dict[int, int]] = {}

        def add(j, e, c):
            d = out.setdefault(j, {})
            d[e] = d.get(e, 0) + c

        for j, poly in prev.items():
            sj = W.left_id(k, j)
            up = W.length_id(sj) > W.length_id(j)
            for e, c in poly.items():
                add(sj, e, c)
                if up:
                    add(j, e - 1, -c)
                    add(j, e + 1, c)
                # descent: (v^-1 - v) from H_s H_y cancels -v^-1 + v
        out = {j: {e: c for e, c in d.items() if c} for j, d in out.items()}
        out = {j: d for j, d in out.items() if d}
        with self._lock:
            self._bar_memo[i] = out
        return out

    def bar(self, H: HeckeElement) -> HeckeElement:
        W = self.W
        acc: dict[int, dict[int, int]] = {}
        for x, p in H._terms.items():
            pb = p.bar()
            for j, poly in self._bar_basis(W.intern(x)).items():
                d = acc.setdefault(j, {})
                for e1, c1 in pb.terms():
                    for e2, c2 in poly.items():
                        d[e1 + e2] = d.get(e1 + e2, 0) + c1 * c2
        return HeckeElement(W, {W.alcove(j): _lp(d) for j, d in acc.items()})

    # ---------------------------------------------------------- self-dual

    def _kl(self, i: int) -> dict[int, list[int]]:
        hit = self._kl_memo.get(i)
        if hit is not None:
            return hit
        W = self.W
        # build the chain of predecessors iteratively to avoid deep recursion
        chain = []
        j = i
        while j not in self._kl_memo:
            chain.append(j)
            j = W.left_id(W._first_descent(j), j)
        for j in reversed(chain):
            self._kl_build(j)
        return self._kl_memo[i]

    def _kl_build(self, i: int) -> None:
        W = self.W
        k = W._first_descent(i)
        prev = self._kl_memo[W.left_id(k, i)]
        # candidate = C_s * C_{s x}; coefficient lists indexed by power of v^-1,
        # index 0 holds the constant term
        cand: dict[int, list[int]] = {}

        def add(j, shift, coeffs, sign):
            cur = cand.get(j)
            need = len(coeffs) + shift
            if cur is None:
                cur = [0] * need
                cand[j] = cur
            elif len(cur) < need:
                cur.extend([0] * (need - len(cur)))
            for n, c in enumerate(coeffs):
                if c:
                    cur[n + shift] += sign * c

        for j, coeffs in prev.items():
            sj = W.left_id(k, j)
            add(sj, 0, coeffs, 1)
            if W.length_id(sj) > W.length_id(j):
                add(j, 1, coeffs, -1)  # -v^-1 h
            else:
                # -v h: the constant term of h is zero for j != s x
                if coeffs[0]:
                    raise ConsistencyError("self-dual element has a nonzero constant term below the top")
                add(j, 0, coeffs[1:], -1)

        by_len: dict[int, list[int]] = {}
        for j in cand:
            by_len.setdefault(W.length_id(j), []).append(j)
        top_len = W.length_id(i)
        for L in range(top_len - 1, -1, -1):
            for j in sorted(by_len.get(L, ())):
                coeffs = cand.get(j)
                if not coeffs or not coeffs[0]:
                    continue
                mu = coeffs[0]
                for z, zc in self._kl(j).items():
                    if z not in cand:
                        by_len.setdefault(W.length_id(z), []).append(z)
                    add(z, 0, zc, -mu)
        out = {}
        for j, coeffs in cand.items():
            while coeffs and not coeffs[-1]:
                coeffs.pop()
            if coeffs:
                out[j] = coeffs
        if out.get(i) != [1]:
            raise ConsistencyError("self-dual element does not have leading coefficient 1")
        for j, coeffs in out.items():
            if j != i and coeffs[0]:
                raise ConsistencyError("self-dual element leaves the v^-1 Z[v^-1] lattice")
        with self._lock:
            self._kl_memo[i] = out

    def kl_selfdual(self, x: Alcove, verify: bool = True) -> HeckeElement:
        """The self-dual element ``C_x``; with ``verify`` its bar-invariance is
        checked exactly (raising :class:`ConsistencyError` on failure)."""
        W = self.W
        i = W.intern(x)
        data = self._kl(i)
        H = HeckeElement(W, {W.alcove(j): _lp({-n: c for n, c in enumerate(cs) if c}) for j, cs in data.items()})
        if verify and i not in self._bar_checked:
            if self.bar(H) != H:
                raise ConsistencyError(f"bar(C_x) != C_x for x = {W.reduced_word(x)}")
            self._bar_checked.add(i)
        return H

    def h_poly(self, y: Alcove, x: Alcove) -> LaurentPoly:
        """Coefficient of ``H_y`` in ``C_x``."""
        W = self.W
        data = self._kl(W.intern(x))
        j = W._ids.get(y)
        if j is None or j not in data:
            return LaurentPoly.zero()
        return _lp({-n: c for n, c in enumerate(data[j]) if c})

    def memo_size(self) -> int:
        return len(self._kl_memo)


def word_label(W: AffineWeylGroup, x: Alcove) -> str:
    return "".join(map(str, W.reduced_word(x))) or "e"


def hecke_from_words(W: AffineWeylGroup, terms: Iterable[tuple[Sequence[int], LaurentPoly]]) -> HeckeElement:
    out = HeckeElement(W)
    for word, p in terms:
        out = out + HeckeElement.basis(W, W.from_word(word), p)
    return out
