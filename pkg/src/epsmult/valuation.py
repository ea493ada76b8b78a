"""Monomial valuations, value filtrations and graded value-semigroup points.

A valuation order assigns to an exponent vector the weighted sum of its
entries (one rational weight ≥ 1 per ambient variable) and breaks ties
lexicographically, so distinct monomials always compare strictly. The residue
degree of this model is 1: a value slice of a monomial component is either
zero or one dimensional.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterator, Sequence

from .errors import BudgetExceededError, IngestionError, InternalInvariantError
from .monomials import Exponents, MonomialIdeal, total_degree
from .pairs import (
    ComponentDecomposition,
    GradedPair,
    YMono,
    base_power_component,
    component_basis,
)


@dataclass(frozen=True)
class ValuationOrder:
    """Weighted-degree valuation with a lexicographic tie break."""

    weights: tuple[Fraction, ...]
    residue_degree: int = 1

    @property
    def nvars(self) -> int:
        return len(self.weights)

    def value(self, exps: Exponents) -> Fraction:
        return sum(
            (w * e for w, e in zip(self.weights, exps)), start=Fraction(0)
        )

    def value_key(self, exps: Exponents) -> tuple[Fraction, Exponents]:
        """Total order: weighted value first, then the fixed lexicographic order."""
        return (self.value(exps), exps)


def make_valuation(weights: Sequence[Fraction | int | str], nvars: int) -> ValuationOrder:
    if len(weights) != nvars:
        raise IngestionError(
            f"expected {nvars} weights (one per ambient variable), got {len(weights)}"
        )
    parsed = []
    for w in weights:
        try:
            f = Fraction(w)
        except (ValueError, ZeroDivisionError) as exc:
            raise IngestionError(f"unparseable weight {w!r}") from exc
        if f < 1:
            raise IngestionError(f"weight {f} rejected; all weights must be >= 1")
        parsed.append(f)
    return ValuationOrder(tuple(parsed))


def trivial_valuation(nvars: int) -> ValuationOrder:
    return ValuationOrder(tuple(Fraction(1) for _ in range(nvars)))


def comparison_alpha(v: ValuationOrder) -> int:
    """Least integer α with value ≥ α·n forcing total degree ≥ n, namely
    ceil(max weight); links the value filtration to the degree filtration."""
    biggest = max(v.weights) if v.weights else Fraction(1)
    return max(1, ceil(biggest))


def alpha_certificate_holds(v: ValuationOrder, degree_cap: int) -> bool:
    """Exhaustively confirm value(f) ≤ α·deg(f) for all monomials up to the cap."""
    alpha = comparison_alpha(v)
    for exps in _degree_capped(v.nvars, degree_cap):
        if v.value(exps) > alpha * total_degree(exps):
            return False
    return True


def _degree_capped(nvars: int, cap: int) -> Iterator[Exponents]:
    if nvars == 0:
        yield ()
        return

    def rec(prefix: list[int], remaining: int, pos: int) -> Iterator[Exponents]:
        if pos == nvars - 1:
            for e in range(remaining + 1):
                yield tuple(prefix + [e])
            return
        for e in range(remaining + 1):
            yield from rec(prefix + [e], remaining - e, pos + 1)

    yield from rec([], cap, 0)


def _weighted_box(weights: Sequence[Fraction], strict_bound: Fraction, cap: int | None = None) -> Iterator[Exponents]:
    """All exponent tuples with weighted value strictly below the bound."""
    n = len(weights)
    if strict_bound <= 0:
        return
    if n == 0:
        yield ()
        return
    limits = [int(ceil(strict_bound / w)) for w in weights]
    if cap is not None:
        size = 1
        for b in limits:
            size *= b + 1
        if size > cap:
            raise BudgetExceededError("weighted enumeration box exceeds the cap")

    def rec(prefix: list[int], used: Fraction, pos: int) -> Iterator[Exponents]:
        if pos == n:
            yield tuple(prefix)
            return
        e = 0
        while used + weights[pos] * e < strict_bound:
            yield from rec(prefix + [e], used + weights[pos] * e, pos + 1)
            e += 1

    yield from rec([], Fraction(0), 0)


def value_floor_ideal(weights: Sequence[Fraction], bound: Fraction, nvars: int) -> MonomialIdeal:
    """Monomial ideal {x^a : weighted value of a ≥ bound}. Upward closed under
    divisibility, so it really is an ideal; generated by its minimal points."""
    if bound <= 0:
        return MonomialIdeal.unit(nvars)
    mins: list[Exponents] = []
    for below in _weighted_box(weights, bound):
        # minimal members sit one step above points below the bound
        for i in range(nvars):
            cand = below[:i] + (below[i] + 1,) + below[i + 1 :]
            val = sum((w * e for w, e in zip(weights, cand)), start=Fraction(0))
            if val >= bound:
                mins.append(cand)
    if not mins:
        # bound > 0 but no point below it: the origin itself clears the bound
        return MonomialIdeal.generated_by([tuple([0] * nvars)], nvars)
    return MonomialIdeal.generated_by(mins, nvars)


# -- components of A_n and of its truncations under the value filtration -------


def _component_family(
    pair: GradedPair, n: int, truncation: int | None
) -> ComponentDecomposition:
    """Full component ideals of A_n, or of (m^(c n) B) ∩ A_n when truncation=c."""
    base = component_basis(pair, n)
    if truncation is None:
        return base
    comps = {}
    for mu, (ideal, ann) in base.components.items():
        ms = base_power_component(pair, truncation * n, mu)
        comps[mu] = (ideal.plus(ann).intersect(ms), ann)
    return ComponentDecomposition(n, comps)


def fiber_value(pair: GradedPair, v: ValuationOrder, mu: YMono) -> Fraction:
    return sum(
        (v.weights[pair.d + j] * e for j, e in zip(range(pair.e), mu)),
        start=Fraction(0),
    )


def length_below_value(
    pair: GradedPair,
    v: ValuationOrder,
    n: int,
    bound: Fraction,
    truncation: int | None = None,
) -> int:
    """ℓ(F_n / K_bound ∩ F_n) where F is A or its base-power truncation.

    Computed through the lattice-point counter: per live μ, count the part of
    the component outside the value-floor ideal.
    """
    from .monomials import quotient_lattice_points

    if n == 0:
        return 0
    family = _component_family(pair, n, truncation)
    total = 0
    xw = list(v.weights[: pair.d])
    for mu, (ideal, ann) in family.components.items():
        full = ideal.plus(ann) if truncation is None else ideal
        floor = value_floor_ideal(xw, bound - fiber_value(pair, v, mu), pair.d)
        cut = full.intersect(floor.plus(ann))
        cnt = quotient_lattice_points(full, cut)
        assert cnt is not None  # quotient killed by a base-ideal power
        total += cnt
    return total


def value_filter_count(
    pair: GradedPair,
    v: ValuationOrder,
    n: int,
    value: Exponents | tuple[Fraction, Exponents],
    value_bound: Fraction,
) -> tuple[int, int]:
    """(number of basis monomials of A_n at exactly this value, number strictly
    above it with weighted part below `value_bound`).

    `value` is a full value key (weighted sum, exponent vector) or an exponent
    vector whose key is taken. The exact count is 0 or 1 because the key order
    is total on monomials; this realizes the residue degree 1 of the model.
    """
    key = v.value_key(value) if not isinstance(value[0], Fraction) else value
    base = component_basis(pair, n)
    at = 0
    above = 0
    xw = list(v.weights[: pair.d])
    for mu, (ideal, ann) in base.components.items():
        shift = fiber_value(pair, v, mu)
        for a in _weighted_box(xw, value_bound - shift, cap=None):
            if not ideal.contains(a) or ann.contains(a):
                continue
            this = v.value_key(a + mu)
            if this == key:
                at += 1
            elif this > key and this[0] < value_bound:
                above += 1
    if at > 1:
        raise InternalInvariantError(
            "two distinct basis monomials shared one value key"
        )
    return at, above


# -- graded value-semigroup points ----------------------------------------------


@dataclass(frozen=True)
class ValueSemigroup:
    """Level-graded point set of attained valuation exponents.

    Points at level n are ambient exponent vectors of basis monomials whose
    weighted value is below slope_bound·n (which forces the plain coordinate
    sum below the same multiple, all weights being ≥ 1). Only the t=1 slice is
    realizable here: value slices of monomial components are at most one
    dimensional.
    """

    width: int                                  # ambient coordinates (no level)
    slope_bound: Fraction                       # β
    levels: tuple[tuple[Exponents, ...], ...]   # index = level, 0..n_max

    def points(self, n: int) -> tuple[Exponents, ...]:
        return self.levels[n]

    def counts(self) -> list[int]:
        return [len(p) for p in self.levels]

    def as_rows(self) -> list[tuple[int, ...]]:
        """Flat (coords..., level) rows for export."""
        rows = []
        for n, pts in enumerate(self.levels):
            rows.extend(tuple(p) + (n,) for p in pts)
        return rows


def gamma_points(
    pair: GradedPair,
    v: ValuationOrder,
    c: int,
    n_max: int,
    beta: Fraction | int | None = None,
    cap: int | None = 2_000_000,
) -> tuple[ValueSemigroup, ValueSemigroup]:
    """Value points of A_n and of the truncated family (m^(c n)B) ∩ A_n for
    n ≤ n_max, with the slope bound β (default: α·(c+1))."""
    if pair.d < 1:
        raise IngestionError("value semigroups need at least one base variable")
    if beta is None:
        beta = Fraction(comparison_alpha(v) * (c + 1))
    beta = Fraction(beta)
    xw = list(v.weights[: pair.d])
    levels_a: list[tuple[Exponents, ...]] = []
    levels_t: list[tuple[Exponents, ...]] = []
    for n in range(n_max + 1):
        base = component_basis(pair, n)
        trunc = _component_family(pair, n, c)
        pts_a: list[Exponents] = []
        pts_t: list[Exponents] = []
        for mu, (ideal, ann) in base.components.items():
            shift = fiber_value(pair, v, mu)
            tr_ideal = trunc.components[mu][0]
            for a in _weighted_box(xw, beta * n - shift, cap=cap):
                if ann.contains(a):
                    continue
                point = a + mu
                if ideal.contains(a):
                    pts_a.append(point)
                if tr_ideal.contains(a):
                    pts_t.append(point)
        levels_a.append(tuple(sorted(pts_a)))
        levels_t.append(tuple(sorted(pts_t)))
    width = pair.nvars
    return (
        ValueSemigroup(width, beta, tuple(levels_a)),
        ValueSemigroup(width, beta, tuple(levels_t)),
    )
