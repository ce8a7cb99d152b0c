"""The periodic module, generic Kazhdan-Lusztig polynomials and Kato's formula.

Elements of the completed periodic module are stored as finite sums
``sum_A p_A [M(A)]`` over the alcoves of an :class:`AlcoveWindow`.  Each
element carries a *margin*: coefficients at alcoves whose depth below the
window top is at most the margin are exact; everything deeper has been
dropped.  Applying ``C_i`` costs one unit of margin.

Generic polynomials are obtained by stabilisation: for ``C`` an alcove let
``x_C`` be the affine Weyl group element with ``x_C A_0 = C``.  Then
``h(x_{B + k nu}, x_{A + k nu})`` becomes independent of ``k`` for ``k`` large,
with ``nu = +-2 rho`` (see :mod:`alcovekit.conventions`), and
``qbar_{B,A} = (-1)^d(A,B)`` times that stable value.  The sequence starts at
the first ``k`` putting both alcoves inside the chamber that ``nu`` points
into; earlier terms can repeat a wrong value and fake convergence.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Mapping

from . import conventions
from .alcoves import (
    Alcove,
    AlcoveWindow,
    distance,
    gen_action,
    leq,
    translate,
    val,
)
from .errors import ConsistencyError, ConvergenceError, UsageError
from .exactalg import LaurentPoly
from .hecke import HeckeAlgebra
from .kostant import kostant_poly
from .rootdata import Coweight, RootDatum, build_root_datum, cw_is_nonneg, cw_scale, cw_sub

_V = LaurentPoly({1: 1}, "v")
_VINV = LaurentPoly({-1: 1}, "v")


class PeriodicElement:
    """``sum_A p_A [M(A)]`` truncated to a window, exact up to depth ``margin``."""

    __slots__ = ("window", "margin", "_coeffs")

    def __init__(self, window: AlcoveWindow, coeffs: Mapping[Alcove, LaurentPoly], margin: int | None = None):
        self.window = window
        self.margin = window.depth if margin is None else margin
        if self.margin < 0:
            raise UsageError("margin must be non-negative")
        out = {}
        for A, p in coeffs.items():
            if not p:
                continue
            if A not in window:
                raise UsageError(f"alcove {A} outside the window")
            if window.depth_of(A) <= self.margin:
                out[A] = p
        self._coeffs = out

    def coefficient(self, A: Alcove) -> LaurentPoly:
        if A in self.window and self.window.depth_of(A) > self.margin:
            raise UsageError(f"coefficient at {A} lies outside the trusted band")
        return self._coeffs.get(A, LaurentPoly.zero())

    def trusted(self) -> list[Alcove]:
        return [A for A in self.window if self.window.depth_of(A) <= self.margin]

    def items(self) -> list[tuple[Alcove, LaurentPoly]]:
        R = self.window.R
        return sorted(self._coeffs.items(), key=lambda kv: (-val(R, kv[0]), kv[0].chi, kv[0].w))

    def restrict(self, margin: int) -> "PeriodicElement":
        return PeriodicElement(self.window, self._coeffs, min(margin, self.margin))

    def _combine(self, other: "PeriodicElement", sign: int) -> "PeriodicElement":
        if other.window is not self.window:
            raise UsageError("elements live on different windows")
        out = dict(self._coeffs)
        for A, p in other._coeffs.items():
            q = p if sign > 0 else -p
            out[A] = out[A] + q if A in out else q
        return PeriodicElement(self.window, out, min(self.margin, other.margin))

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def scale(self, c: LaurentPoly | int) -> "PeriodicElement":
        return PeriodicElement(self.window, {A: p * c for A, p in self._coeffs.items()}, self.margin)

    def agrees_with(self, other: "PeriodicElement") -> bool:
        """Equality of coefficients on the common trusted band."""
        m = min(self.margin, other.margin)
        band = [A for A in self.window if self.window.depth_of(A) <= m]
        return all(self.coefficient(A) == other.coefficient(A) for A in band)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, PeriodicElement)
            and self.margin == other.margin
            and self._coeffs == other._coeffs
        )

    def __repr__(self) -> str:
        return f"PeriodicElement(margin={self.margin}, terms={len(self._coeffs)})"


def ctilde_action(i: int, N: PeriodicElement) -> PeriodicElement:
    """``C_i N`` by the wall-crossing rule:
    ``C_i [M(A)] = [M(s_i A)] - v^-1 [M(A)]`` if ``s_i A > A``, else
    ``[M(s_i A)] - v [M(A)]``."""
    if N.margin < 1:
        raise UsageError("margin exhausted; rebuild on a deeper window")
    window, R = N.window, N.window.R
    margin = N.margin - 1
    out: dict[Alcove, LaurentPoly] = {}

    def add(A, p):
        out[A] = out[A] + p if A in out else p

    for A, p in N._coeffs.items():
        D = gen_action(R, i, A)
        up = val(R, D) > val(R, A)
        if window.depth_of(D) <= margin:
            if D not in window:
                raise UsageError(f"C_{i} moves support to {D}, outside the window; raise the window top")
            add(D, p)
        if window.depth_of(A) <= margin:
            add(A, -(p * (_VINV if up else _V)))
    return PeriodicElement(window, out, margin)


# --------------------------------------------------------- generic KL table


@dataclass(frozen=True)
class KLEntry:
    signed: LaurentPoly
    qbar: LaurentPoly
    sign: int
    stabilized_at: int
    start: int = 0
    history: tuple[LaurentPoly, ...] = field(default=(), compare=False)


class GenericKLTable:
    """Cache of stabilised generic polynomials keyed by
    ``(w_B, chi_B - chi_A, w_A)``, so entries are translation invariant by
    construction."""

    def __init__(
        self,
        R: RootDatum | str,
        k_max: int = 6,
        direction: int | None = None,
        confirm: bool = False,
        hecke: HeckeAlgebra | None = None,
    ):
        self.R = R if isinstance(R, RootDatum) else build_root_datum(R)
        if k_max < 2:
            raise UsageError("k_max must be at least 2")
        self.k_max = k_max
        self.direction = conventions.STABILIZATION_DIRECTION if direction is None else direction
        self.nu = cw_scale(self.direction, self.R.two_rho)
        self.confirm = confirm
        self.hecke = hecke or HeckeAlgebra(self.R)
        self._lock = threading.Lock()
        self._entries: dict[tuple, KLEntry] = {}

    @staticmethod
    def key(B: Alcove, A: Alcove) -> tuple:
        return (B.w, cw_sub(B.chi, A.chi), A.w)

    def start_step(self, *alcoves: Alcove) -> int:
        """Least ``k >= 0`` with every ``<chi + k nu, i'>`` at least 1 in the direction of ``nu``."""
        R, k = self.R, 0
        for A in alcoves:
            for i in range(R.rank):
                simple_root = tuple(int(j == i) for j in range(R.rank))
                p = self.direction * R.pair(A.chi, simple_root)
                step = self.direction * R.pair(self.nu, simple_root)
                if p < 1:
                    k = max(k, -(-(1 - p) // step))
        return k

    def stabilize(self, B: Alcove, A: Alcove) -> KLEntry:
        """Run the translation sequence without consulting the cache.

        ``stabilized_at`` counts translates used from the start step, so it is
        at most ``k_max``.
        """
        d = distance(self.R, B, A)
        sign = -1 if d % 2 else 1
        if not leq(self.R, B, A):
            zero = LaurentPoly.zero()
            return KLEntry(zero, zero, sign, 0)
        need = 3 if self.confirm else 2
        start = self.start_step(A, B)
        history: list[LaurentPoly] = []
        run = 0
        for n in range(1, self.k_max + 1):
            shift = cw_scale(start + n - 1, self.nu)
            h = self.hecke.h_poly(translate(B, shift), translate(A, shift))
            run = run + 1 if history and history[-1] == h else 1
            history.append(h)
            if run >= need:
                return KLEntry(h, h * sign, sign, n, start, tuple(history))
        raise ConvergenceError(
            f"generic polynomial for B={B}, A={A} did not stabilise within k_max={self.k_max}: "
            + ", ".join(map(str, history))
        )

    def entry(self, B: Alcove, A: Alcove) -> KLEntry:
        key = self.key(B, A)
        hit = self._entries.get(key)
        if hit is None:
            hit = self.stabilize(B, A)
            with self._lock:
                self._entries.setdefault(key, hit)
        return hit

    def qbar(self, B: Alcove, A: Alcove) -> LaurentPoly:
        return self.entry(B, A).qbar

    def entries(self) -> dict[tuple, KLEntry]:
        return dict(self._entries)

    def __len__(self) -> int:
        return len(self._entries)


_TABLES: dict[tuple, GenericKLTable] = {}
_TABLES_LOCK = threading.Lock()


def default_table(R: RootDatum | str, k_max: int = 6) -> GenericKLTable:
    R = R if isinstance(R, RootDatum) else build_root_datum(R)
    key = (R.label, k_max, conventions.STABILIZATION_DIRECTION)
    with _TABLES_LOCK:
        if key not in _TABLES:
            _TABLES[key] = GenericKLTable(R, k_max)
        return _TABLES[key]


def generic_kl(R: RootDatum, B: Alcove, A: Alcove, k_max: int = 6, table: GenericKLTable | None = None) -> LaurentPoly:
    """``qbar_{B,A}``, or 0 when ``B`` is not below ``A``."""
    if table is None:
        table = default_table(R, k_max)
    return table.qbar(B, A)


# ---------------------------------------------------------- expansions


def kato_element(R: RootDatum, chi: Coweight, window: AlcoveWindow) -> PeriodicElement:
    """``sum_{w, beta} (-v)^(l(w) - l(w0)) K^beta(v^2) [M(w, chi - beta)]`` on the window."""
    top = Alcove(R.w0, tuple(chi))
    if top not in window:
        raise UsageError(f"{top} is not in the window")
    lw0 = R.lengths[R.w0]
    coeffs = {}
    for C in window:
        beta = cw_sub(tuple(chi), C.chi)
        if not cw_is_nonneg(beta):
            continue
        e = R.lengths[C.w] - lw0
        sign = -1 if e % 2 else 1
        coeffs[C] = kostant_poly(R, beta).substitute_square("v").shift(e) * sign
    return PeriodicElement(window, coeffs)


def l_expansion(R: RootDatum, A: Alcove, window: AlcoveWindow, table: GenericKLTable | None = None) -> PeriodicElement:
    """``[L(A)] = sum_{B <= A} (-1)^d(A,B) qbar_{B,A} [M(B)]`` on the window."""
    if A not in window:
        raise UsageError(f"{A} is not in the window")
    if table is None:
        table = default_table(R)
    coeffs = {}
    for B in window:
        if leq(R, B, A):
            coeffs[B] = table.entry(B, A).signed
    return PeriodicElement(window, coeffs)


@dataclass
class ConsistencyReport:
    alcove: Alcove
    generator: int
    case: str
    passed: bool
    multiplicities: dict[Alcove, int]
    residuals: dict[Alcove, LaurentPoly]
    margin: int


def verify_module_consistency(
    R: RootDatum,
    A: Alcove,
    i: int,
    depth: int,
    table: GenericKLTable | None = None,
    raise_on_failure: bool = False,
) -> ConsistencyReport:
    """Check that ``C_i [L(A)]`` is an integer combination of self-dual elements.

    Ascent (``s_i A > A``): peel off ``[L(s_i A)]`` and then lower ``[L(C)]`` in
    decreasing grading; every peeled multiplicity must be an integer constant.
    Descent: compare with ``-(v + v^-1) [L(A)]``.
    """
    if table is None:
        table = default_table(R)
    sA = gen_action(R, i, A)
    ascent = val(R, sA) > val(R, A)
    top = sA if ascent else A
    window = AlcoveWindow(R, top, depth)
    image = ctilde_action(i, l_expansion(R, A, window, table))
    band = image.margin
    residuals: dict[Alcove, LaurentPoly] = {}
    mults: dict[Alcove, int] = {}

    if not ascent:
        target = l_expansion(R, A, window, table).scale(-(_V + _VINV)).restrict(band)
        diff = image - target
        residuals = {C: p for C, p in diff.items()}
        passed = not residuals
    else:
        rest = image - l_expansion(R, sA, window, table).restrict(band)
        mults[sA] = 1
        for C in image.trusted():
            p = rest.coefficient(C)
            if not p:
                continue
            if not p.is_constant():
                residuals[C] = p
                break
            m = p.coefficient(0)
            mults[C] = m
            rest = rest - l_expansion(R, C, window, table).restrict(band).scale(m)
        passed = not residuals and all(not p for _, p in rest.items())
    report = ConsistencyReport(A, i, "ascent" if ascent else "descent", passed, mults, residuals, band)
    if raise_on_failure and not passed:
        raise ConsistencyError(f"C_{i} L({A}) is not an integer combination: residuals {residuals}")
    return report


def calibrate_direction(label: str = "A1", depth: int = 4) -> dict[int, bool]:
    """Which translation direction reproduces Kato's formula on a window."""
    R = build_root_datum(label)
    chi = tuple(0 for _ in range(R.rank))
    window = AlcoveWindow(R, Alcove(R.w0, chi), depth)
    out = {}
    for direction in (1, -1):
        table = GenericKLTable(R, 6, direction)
        try:
            got = l_expansion(R, window.top, window, table)
            out[direction] = got == kato_element(R, chi, window)
        except ConvergenceError:
            out[direction] = False
    return out
