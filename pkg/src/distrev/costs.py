"""Exact costs, pseudo-distance tables, and distance-property checkers.

Costs are exact rationals, optionally extended with a single infinite top
element.  Two order modes exist: the real order (finite costs only) and the
liberal order (the top element strictly above every finite cost).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .errors import FileFormatError, ModeMismatchError, UnknownAtomError
from .logic import hamming_diff


class _Infinite:
    """The infinite cost marker; compare via the module singleton INF."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _Infinite()
ZERO = Fraction(0)


class OrderMode(Enum):
    REAL = "real"
    LIBERAL = "liberal"


class Ordering(Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def parse_cost(text):
    """Parse "num/den", decimal shorthand ("1.4"), or "inf"."""
    text = text.strip()
    if text == "inf":
        return INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FileFormatError(f"bad cost literal {text!r}") from exc


def format_cost(c):
    if c is INF:
        return "inf"
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def compare_costs(a, b, mode=OrderMode.REAL):
    """Strict-total-order comparison of two admitted costs."""
    a_inf = a is INF
    b_inf = b is INF
    if mode is OrderMode.REAL and (a_inf or b_inf):
        raise ModeMismatchError("infinite cost is not admitted under the real order")
    if a_inf and b_inf:
        return Ordering.EQUAL
    if a_inf:
        return Ordering.GREATER
    if b_inf:
        return Ordering.LESS
    if a < b:
        return Ordering.LESS
    if a > b:
        return Ordering.GREATER
    return Ordering.EQUAL


def cost_lt(a, b, mode):
    return compare_costs(a, b, mode) is Ordering.LESS


def cost_le(a, b, mode):
    return compare_costs(a, b, mode) is not Ordering.GREATER


def add_costs(a, b):
    """Rational addition with the top element absorbing."""
    if a is INF or b is INF:
        return INF
    return a + b


@dataclass(frozen=True)
class PseudoDistance:
    """A finite universe of labeled points with a total cost table."""

    universe: tuple
    mode: OrderMode
    table: dict

    def __post_init__(self):
        points = set(self.universe)
        for v in self.universe:
            for w in self.universe:
                if (v, w) not in self.table:
                    raise UnknownAtomError(f"cost table misses pair ({v}, {w})")
        for (v, w), c in self.table.items():
            if v not in points or w not in points:
                raise UnknownAtomError(f"pair ({v}, {w}) outside the universe")
            if c is INF and self.mode is OrderMode.REAL:
                raise ModeMismatchError(
                    f"infinite cost at ({v}, {w}) under the real order"
                )

    def d(self, v, w):
        return self.table[(v, w)]

    @classmethod
    def from_function(cls, universe, mode, fn):
        universe = tuple(universe)
        table = {(v, w): fn(v, w) for v in universe for w in universe}
        return cls(universe, mode, table)

    def replaced(self, overrides):
        """A copy with some pair costs replaced."""
        table = dict(self.table)
        table.update(overrides)
        return PseudoDistance(self.universe, self.mode, table)


@dataclass
class PropertyReport:
    """Outcome of one exhaustive property check with capped witnesses."""

    name: str
    passed: bool
    witnesses: list = field(default_factory=list)
    total_violations: int = 0
    witness_cap: int = 16

    def record(self, witness):
        self.passed = False
        self.total_violations += 1
        if len(self.witnesses) < self.witness_cap:
            self.witnesses.append(witness)


REAL_PROPERTIES = ("symmetric", "ir", "positive", "tir")
LIBERAL_PROPERTIES = ("symmetric", "liberal_ir", "liberal_positive", "liberal_tir")


def check_property(dist, prop, witness_cap=16):
    """Exhaustively check one distance property; witnesses in deterministic
    order.  ``prop`` is one of symmetric, ir, positive, tir, liberal_ir,
    liberal_positive, liberal_tir."""
    if prop in ("ir", "positive", "tir") and dist.mode is not OrderMode.REAL:
        raise ModeMismatchError(f"{prop} requires the real order mode")
    if prop.startswith("liberal_") and dist.mode is not OrderMode.LIBERAL:
        raise ModeMismatchError(f"{prop} requires the liberal order mode")
    report = PropertyReport(prop, True, witness_cap=witness_cap)
    pts = dist.universe
    if prop == "symmetric":
        for i, v in enumerate(pts):
            for w in pts[i + 1:]:
                if compare_costs(dist.d(v, w), dist.d(w, v), dist.mode) is not Ordering.EQUAL:
                    report.record((v, w))
    elif prop in ("ir", "liberal_ir"):
        for v in pts:
            for w in pts:
                zero = dist.d(v, w) is not INF and dist.d(v, w) == ZERO
                if zero != (v == w):
                    report.record((v, w))
    elif prop in ("positive", "liberal_positive"):
        for v in pts:
            for w in pts:
                if cost_lt(dist.d(v, w), ZERO, dist.mode):
                    report.record((v, w))
    elif prop == "tir":
        for v in pts:
            for w in pts:
                for x in pts:
                    if not cost_le(
                        dist.d(v, x), add_costs(dist.d(v, w), dist.d(w, x)), dist.mode
                    ):
                        report.record((v, w, x))
    elif prop == "liberal_tir":
        for v in pts:
            for w in pts:
                for x in pts:
                    dvx, dvw, dwx = dist.d(v, x), dist.d(v, w), dist.d(w, x)
                    if dvx is INF:
                        if dvw is not INF and dwx is not INF:
                            report.record((v, w, x))
                    elif dvw is not INF and dwx is not INF:
                        if not cost_le(dvx, add_costs(dvw, dwx), dist.mode):
                            report.record((v, w, x))
    else:
        raise ValueError(f"unknown property {prop!r}")
    return report


def check_hir(dist, vals, witness_cap=16):
    """Hamming-inequality respect: strictly fewer differing atoms forces a
    strictly smaller cost.  ``vals`` maps every universe point to a valuation."""
    for p in dist.universe:
        if p not in vals:
            raise UnknownAtomError(f"point {p!r} has no valuation")
    report = PropertyReport("hir", True, witness_cap=witness_cap)
    pts = dist.universe
    hsize = {
        (v, w): len(hamming_diff(vals[v], vals[w])) for v in pts for w in pts
    }
    for v in pts:
        for w in pts:
            for x in pts:
                if hsize[(v, w)] < hsize[(v, x)]:
                    if not cost_lt(dist.d(v, w), dist.d(v, x), dist.mode):
                        report.record((v, w, x))
    return report
