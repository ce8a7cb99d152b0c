"""Alcoves as pairs ``(w, chi)`` and the partial order on them.

An alcove is stored as ``Alcove(w, chi)`` with ``w`` an index into the finite
Weyl group tables of a :class:`~alcovekit.rootdata.RootDatum`.  The grading is
``val(w, chi) = 2|chi| + l(w)``.

The order is decided in two independent ways:

* :func:`leq` uses the criterion "``chi_B - chi_A >= 0`` and the pair
  ``(w_A, w_B)`` is connected by a chain of reflections whose coroots sum to at
  most ``chi_B - chi_A``";
* :meth:`AlcoveWindow.leq_generated` takes the transitive closure of Bruhat
  moves and coroot translates on a finite box.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, NamedTuple

from . import conventions
from .errors import DomainError, UsageError
from .rootdata import (
    Coweight,
    RootDatum,
    build_root_datum,
    cw_add,
    cw_below,
    cw_is_nonneg,
    cw_norm,
    cw_sub,
    format_coweight,
)

SIDES = ("left", "right")


class Alcove(NamedTuple):
    w: int
    chi: Coweight


def _side(side: str | None) -> str:
    side = side or conventions.REFLECTION_SIDE
    if side not in SIDES:
        raise UsageError(f"unknown reflection side {side!r}")
    return side


# ---------------------------------------------------------------- basics


def identity_alcove(R: RootDatum) -> Alcove:
    return Alcove(0, tuple(0 for _ in range(R.rank)))


def val(R: RootDatum, A: Alcove) -> int:
    return 2 * cw_norm(A.chi) + R.lengths[A.w]


def distance(R: RootDatum, A: Alcove, B: Alcove) -> int:
    """Signed distance ``val(B) - val(A)``."""
    return val(R, B) - val(R, A)


def gen_action(R: RootDatum, k: int, A: Alcove) -> Alcove:
    """Left action of the generator ``s_k``; ``k = 0`` is the affine one."""
    if k == 0:
        shift = R.act_index(R.beta0, A.w)
        return Alcove(R.mult[R.s_beta0][A.w], cw_sub(A.chi, shift))
    if not 1 <= k <= R.rank:
        raise DomainError(f"generator {k} not in 0..{R.rank}")
    return Alcove(R.mult[R.gens[k - 1]][A.w], A.chi)


def right_gen_action(R: RootDatum, k: int, A: Alcove) -> Alcove:
    """Action of ``s_k`` through the commuting right action on alcoves.

    With the alcove ``(w, chi)`` standing for the affine element ``x`` with
    ``x A_0 = (w, chi)``, this computes ``x s_k``.
    """
    if k == 0:
        chi = cw_sub(R.act_index(A.chi, R.s_beta0), R.beta0)
        return Alcove(R.mult[A.w][R.s_beta0], chi)
    if not 1 <= k <= R.rank:
        raise DomainError(f"generator {k} not in 0..{R.rank}")
    g = R.gens[k - 1]
    return Alcove(R.mult[A.w][g], R.act_index(A.chi, g))


def translate(A: Alcove, nu: Coweight) -> Alcove:
    return Alcove(A.w, cw_add(A.chi, nu))


def s0_order_side(R: RootDatum, A: Alcove) -> bool:
    """Whether ``s_0 A <= A``: decided by positivity of ``beta_0 w``."""
    return cw_is_nonneg(R.act_index(R.beta0, A.w))


def stratum_dim(R: RootDatum, w: int, eta: Coweight, chi: Coweight, alpha: Coweight) -> int:
    """``2|eta - chi + alpha| + l(w) - dim X``."""
    defect = cw_add(cw_sub(eta, chi), alpha)
    if not cw_is_nonneg(defect):
        raise DomainError(f"eta - chi + alpha = {defect} is not in N[I]")
    return 2 * cw_norm(defect) + R.lengths[w] - R.dim_X


def format_alcove(R: RootDatum, A: Alcove) -> str:
    word = "".join(map(str, R.reduced_word(A.w))) or "e"
    return f"{word}@{format_coweight(A.chi)}"


def parse_alcove(R: RootDatum, word: str, chi: Coweight) -> Alcove:
    word = word.strip()
    letters = [] if word in ("", "e") else [int(c) for c in word.replace(",", "")]
    return Alcove(R.from_word(letters), tuple(chi))


# -------------------------------------------------------- reflection composites


def composite(R: RootDatum, coroot: Coweight, w: int, side: str | None = None) -> int:
    """``s_theta w`` (left) or ``w s_theta`` (right)."""
    s = R.reflection[coroot]
    return R.mult[s][w] if _side(side) == "left" else R.mult[w][s]


@lru_cache(maxsize=None)
def _reach(label: str, side: str, w: int, budget: Coweight) -> int:
    # bitmask of Weyl elements reachable from w by composites with total coroot <= budget
    R = build_root_datum(label)
    mask = 1 << w
    for c in R.positive_coroots:
        rest = cw_sub(budget, c)
        if not cw_is_nonneg(rest):
            continue
        prev = _reach(label, side, w, rest)
        u = 0
        while prev:
            if prev & 1:
                mask |= 1 << composite(R, c, u, side)
            prev >>= 1
            u += 1
    return mask


def gamma_connected(R: RootDatum, w: int, y: int, gamma: Coweight, side: str | None = None) -> bool:
    gamma = tuple(gamma)
    if not cw_is_nonneg(gamma):
        raise DomainError(f"budget {gamma} is not in N[I]")
    return bool(_reach(R.label, _side(side), w, gamma) & R.down_mask[y])


def leq(R: RootDatum, A: Alcove, B: Alcove, side: str | None = None) -> bool:
    delta = cw_sub(B.chi, A.chi)
    if not cw_is_nonneg(delta):
        return False
    return bool(_reach(R.label, _side(side), A.w, delta) & R.down_mask[B.w])


# ------------------------------------------------------------------- covers


def _is_translate_cover(R: RootDatum, coroot: Coweight, w: int, y: int) -> bool:
    h = 2 * cw_norm(coroot) - 1
    return R.lengths[R.reflection[coroot]] == h and R.lengths[w] == R.lengths[y] + h


def covers_up(R: RootDatum, A: Alcove, side: str | None = None) -> list[Alcove]:
    """Alcoves covering ``A``: Bruhat covers and codimension-one translates."""
    side = _side(side)
    out = [Alcove(y, A.chi) for y in R.bruhat_covers(A.w)]
    for c in R.positive_coroots:
        y = composite(R, c, A.w, side)
        if _is_translate_cover(R, c, A.w, y):
            out.append(Alcove(y, cw_add(A.chi, c)))
    return sorted(set(out))


def covers_down(R: RootDatum, B: Alcove, side: str | None = None) -> list[Alcove]:
    """Alcoves covered by ``B``."""
    side = _side(side)
    out = [Alcove(u, B.chi) for u in R.bruhat_cocovers(B.w)]
    for c in R.positive_coroots:
        s = R.reflection[c]
        w = R.mult[s][B.w] if side == "left" else R.mult[B.w][s]
        if _is_translate_cover(R, c, w, B.w):
            out.append(Alcove(w, cw_sub(B.chi, c)))
    return sorted(set(out))


def cover_type(R: RootDatum, A: Alcove, B: Alcove, side: str | None = None) -> str | None:
    """``"bruhat"``, ``"translate"`` or ``None`` when ``B`` does not cover ``A``."""
    side = _side(side)
    if A.chi == B.chi:
        return "bruhat" if B.w in R.bruhat_covers(A.w) else None
    c = cw_sub(B.chi, A.chi)
    if c in R.reflection and composite(R, c, A.w, side) == B.w and _is_translate_cover(R, c, A.w, B.w):
        return "translate"
    return None


# ------------------------------------------------------------------- windows


class AlcoveWindow:
    """``{B <= top : distance(B, top) <= depth}``, enumerated downward along covers."""

    def __init__(self, R: RootDatum, top: Alcove, depth: int, side: str | None = None):
        if depth < 0:
            raise UsageError("window depth must be non-negative")
        self.R = R
        self.top = Alcove(top.w, tuple(top.chi))
        self.depth = depth
        self.side = _side(side)
        self.top_val = val(R, self.top)
        seen = {self.top}
        queue = deque([self.top])
        while queue:
            B = queue.popleft()
            for A in covers_down(R, B, self.side):
                if A not in seen and self.top_val - val(R, A) <= depth:
                    seen.add(A)
                    queue.append(A)
        self.members: tuple[Alcove, ...] = tuple(
            sorted(seen, key=lambda A: (-val(R, A), A.chi, A.w))
        )
        self._member_set = frozenset(seen)
        self._closure: dict[Alcove, int] | None = None
        self._box_index: dict[Alcove, int] | None = None

    def __contains__(self, A) -> bool:
        return A in self._member_set

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def depth_of(self, A: Alcove) -> int:
        return self.top_val - val(self.R, A)

    def box(self) -> list[Alcove]:
        """Every ``(w, chi_top - beta)`` with ``beta >= 0`` within the depth bound.

        The box is built without reference to any order and contains every
        chain of generating moves ending at the top.
        """
        R, top = self.R, self.top
        n = (self.depth + R.dim_X) // 2 + 1
        out = []
        for beta in cw_below(tuple(n for _ in range(R.rank))):
            chi = cw_sub(top.chi, beta)
            for w in range(R.order):
                A = Alcove(w, chi)
                if 0 <= self.top_val - val(R, A) <= self.depth:
                    out.append(A)
        return out

    def _generated_closure(self) -> None:
        R, side = self.R, self.side
        box = self.box()
        index = {A: k for k, A in enumerate(box)}
        up: dict[Alcove, int] = {}
        for A in sorted(box, key=lambda A: -val(R, A)):
            mask = 1 << index[A]
            targets: list[Alcove] = [Alcove(y, A.chi) for y in R.bruhat_covers(A.w)]
            for c in R.positive_coroots:
                targets.append(Alcove(composite(R, c, A.w, side), cw_add(A.chi, c)))
            for C in targets:
                if C in up:
                    mask |= up[C]
            up[A] = mask
        self._closure, self._box_index = up, index

    def leq_generated(self, A: Alcove, B: Alcove) -> bool:
        """Closure of the generating moves, decided inside the window's box."""
        if A not in self or B not in self:
            raise UsageError("alcove outside the window")
        if self._closure is None:
            self._generated_closure()
        return bool(self._closure[A] >> self._box_index[B] & 1)

    def __repr__(self) -> str:
        return f"AlcoveWindow(top={self.top}, depth={self.depth}, size={len(self.members)})"


def brute_force_window(R: RootDatum, top: Alcove, depth: int, side: str | None = None) -> set[Alcove]:
    """The window by filtering the box with :func:`leq` (for cross-checks)."""
    w = AlcoveWindow.__new__(AlcoveWindow)
    w.R, w.top, w.depth, w.top_val = R, top, depth, val(R, top)
    return {A for A in w.box() if leq(R, A, top, side)}


def calibrate_reflection_side(label: str = "A2", depth: int = 4) -> dict[str, bool]:
    """For each side, whether ``leq == leq_generated`` on a window of ``w0`` at 0,
    whether adjacent alcoves are comparable, and whether the ``s_0`` positivity
    test matches the order."""
    R = build_root_datum(label)
    top = Alcove(R.w0, tuple(0 for _ in range(R.rank)))
    report = {}
    for side in SIDES:
        win = AlcoveWindow(R, top, depth, side)
        box = win.box()
        members = [A for A in box if leq(R, A, top, side)]
        ok = set(members) == set(win.members)
        ok = ok and all(
            leq(R, A, B, side) == win.leq_generated(A, B) for A in members for B in members
        )
        adjacent = all(
            leq(R, A, gen_action(R, k, A), side) or leq(R, gen_action(R, k, A), A, side)
            for A in box
            for k in range(R.rank + 1)
        )
        s0 = all(leq(R, gen_action(R, 0, A), A, side) == s0_order_side(R, A) for A in box)
        report[side] = ok and adjacent and s0
    return report


def enumerate_pairs(members: Iterable[Alcove]):
    ms = list(members)
    for A in ms:
        for B in ms:
            yield A, B
