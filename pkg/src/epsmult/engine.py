"""Length sequences, stabilization search, growth bounds and cross-checks.

Every sequence value is an exact integer obtained by lattice-point counting in
the per-component decomposition; nothing here rounds or extrapolates. The
normalization constant and the limit estimation live in the analysis layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import IngestionError, InternalInvariantError
from .monomials import (
    MonomialIdeal,
    format_monomial,
    quotient_lattice_points,
)
from .pairs import (
    GradedPair,
    KrullDims,
    base_power_component,
    check_hypotheses,
    component_basis,
    krull_dims,
    saturated_component,
)
from .valuation import (
    ValuationOrder,
    comparison_alpha,
    gamma_points,
    length_below_value,
)


@dataclass(frozen=True)
class LengthSequence:
    """Exact values ℓ_0..ℓ_N of one of the length functions."""

    kind: str                     # saturation-quotient | truncated | field-case | ...
    values: tuple[int, ...]
    c: int | None = None

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


def epsilon_length_sequence(
    pair: GradedPair, n_max: int, cap: int | None = None
) -> LengthSequence:
    """ℓ_n = length of (A_n : m^∞)/A_n for n = 0..n_max (0 at n = 0).

    Refuses when the minimal-prime hypothesis fails; each component quotient is
    finite because the saturation quotient is killed by a base-ideal power.
    """
    check_hypotheses(pair).require()
    if pair.d < 1:
        raise IngestionError("base is a field; use field_case_sequence")
    values = [0]
    for n in range(1, n_max + 1):
        base = component_basis(pair, n)
        sat = saturated_component(pair, n)
        total = 0
        for mu, (sat_ideal, ann) in sat.components.items():
            full = base.components[mu][0].plus(ann)
            cnt = quotient_lattice_points(sat_ideal, full, cap)
            if cnt is None:
                raise InternalInvariantError(
                    "saturation quotient came out infinite; counting is broken"
                )
            total += cnt
        values.append(total)
    return LengthSequence("saturation-quotient", tuple(values))


def field_case_sequence(pair: GradedPair, n_max: int) -> LengthSequence:
    """Over a field base: ℓ_n = dim B_n - dim A_n, counted per component."""
    if pair.d != 0:
        raise IngestionError("base has positive dimension; use epsilon_length_sequence")
    values = [0]
    unit = MonomialIdeal.unit(0)
    for n in range(1, n_max + 1):
        total = 0
        for mu, (ideal, ann) in component_basis(pair, n).components.items():
            cnt = quotient_lattice_points(unit, ideal.plus(ann))
            assert cnt is not None
            total += cnt
        values.append(total)
    return LengthSequence("field-case", tuple(values))


def truncated_sequence(
    pair: GradedPair, c: int, n_max: int, of_saturation: bool = False
) -> LengthSequence:
    """ℓ_n = length of F_n/(m^(c n)B ∩ F_n) with F either A or its saturation."""
    if pair.d < 1:
        raise IngestionError("truncated lengths need at least one base variable")
    if c < 1:
        raise IngestionError("the truncation rate must be a positive integer")
    values = [0]
    for n in range(1, n_max + 1):
        if of_saturation:
            family = saturated_component(pair, n)
            fulls = {mu: ideal for mu, (ideal, _) in family.components.items()}
        else:
            family = component_basis(pair, n)
            fulls = {mu: ideal.plus(ann) for mu, (ideal, ann) in family.components.items()}
        total = 0
        for mu, (_, ann) in family.components.items():
            full = fulls[mu]
            cut = full.intersect(base_power_component(pair, c * n, mu))
            cnt = quotient_lattice_points(full, cut)
            if cnt is None:
                raise InternalInvariantError("truncated quotient came out infinite")
            total += cnt
        values.append(total)
    return LengthSequence(
        "omega-truncated" if of_saturation else "truncated", tuple(values), c=c
    )


# -- stabilization of the truncation against the saturation ---------------------


@dataclass(frozen=True)
class StabilizationReport:
    c0: int | None
    certified_n_max: int
    searched_c_max: int
    witnesses: dict[int, tuple[tuple[int, str], ...]]  # c -> ((n, monomial), ...)

    def holds(self) -> bool:
        return self.c0 is not None


def stabilization_search(pair: GradedPair, c_max: int, n_max: int) -> StabilizationReport:
    """Least c with m^(c n)B_n ∩ (A_n : m^∞) ⊆ A_n for all n ≤ n_max.

    Exact generator-wise containment per component; failures below the found
    constant are reported with explicit monomial witnesses.
    """
    check_hypotheses(pair).require()
    witnesses: dict[int, tuple[tuple[int, str], ...]] = {}
    c0 = None
    for c in range(1, c_max + 1):
        found: list[tuple[int, str]] = []
        for n in range(1, n_max + 1):
            base = component_basis(pair, n)
            sat = saturated_component(pair, n)
            for mu, (sat_ideal, ann) in sat.components.items():
                full = base.components[mu][0].plus(ann)
                inter = sat_ideal.intersect(base_power_component(pair, c * n, mu))
                for g in inter.gens:
                    if not full.contains(g):
                        mono = format_monomial(g + mu, pair.all_vars)
                        found.append((n, mono))
                        break
                if found and found[-1][0] == n:
                    break
        if found:
            witnesses[c] = tuple(found[:1]) if len(found) == 1 else tuple(found[:3])
        else:
            c0 = c
            break
    return StabilizationReport(
        c0=c0, certified_n_max=n_max, searched_c_max=c_max, witnesses=witnesses
    )


# -- multiplicity of a base-primary ideal (staircase volume) --------------------


def newton_multiplicity(ideal: MonomialIdeal) -> Fraction:
    """d! times the volume under the staircase: the multiplicity e(I) of a
    primary monomial ideal equals the normalized volume of the complement of
    its exponent polyhedron, computed here by exact hull volume."""
    from .geometry import convex_hull_volume

    d = ideal.nvars
    if d == 0:
        raise IngestionError("multiplicity needs at least one variable")
    axis_bounds = []
    for i in range(d):
        pure = [g[i] for g in ideal.gens if all(e == 0 for j, e in enumerate(g) if j != i)]
        if not pure:
            raise IngestionError(
                "ideal is not primary to the variable ideal; multiplicity undefined"
            )
        axis_bounds.append(min(pure))
    corners: set[tuple[int, ...]] = set()
    for g in ideal.gens:
        for mask in range(1 << d):
            corners.add(
                tuple(
                    axis_bounds[i] if (mask >> i) & 1 else g[i] for i in range(d)
                )
            )
    clipped_volume, _ = convex_hull_volume(sorted(corners))
    box = Fraction(1)
    for b in axis_bounds:
        box *= b
    return math.factorial(d) * (box - clipped_volume)


# -- growth bounds ---------------------------------------------------------------


@dataclass(frozen=True)
class BoundWitness:
    kind: str
    exponent: int
    gamma: Fraction       # max observed ℓ_n/n^exponent, so the bound is tight
    at_n: int
    n_max: int

    def bound_holds(self, values: tuple[int, ...]) -> bool:
        return all(
            Fraction(v, n**self.exponent) <= self.gamma
            for n, v in enumerate(values)
            if n >= 1
        )


def bound_checks(
    pair: GradedPair,
    saturation_seq: LengthSequence | None,
    truncated_seqs: list[LengthSequence],
) -> list[BoundWitness]:
    """Exhibit constants for ℓ_n ≤ γ n^(dim A - 1) (truncations) and
    ℓ_n ≤ α n^(dim B - 1) (saturation quotient); dimension sanity included."""
    dims = krull_dims(pair)
    if dims.dim_a > dims.dim_b:
        raise InternalInvariantError(
            f"dim A = {dims.dim_a} exceeds dim B = {dims.dim_b}"
        )
    out: list[BoundWitness] = []

    def witness(kind: str, values: tuple[int, ...], exponent: int) -> BoundWitness:
        exponent = max(exponent, 0)
        best = Fraction(0)
        at = 1
        for n, v in enumerate(values):
            if n == 0:
                continue
            ratio = Fraction(v, n**exponent)
            if ratio > best:
                best, at = ratio, n
        return BoundWitness(kind=kind, exponent=exponent, gamma=best, at_n=at, n_max=len(values) - 1)

    if saturation_seq is not None:
        out.append(witness(saturation_seq.kind, saturation_seq.values, dims.dim_b - 1))
    for seq in truncated_seqs:
        out.append(witness(f"truncated-c{seq.c}", seq.values, dims.dim_a - 1))
    return out


def truncated_growth_exponent(pair: GradedPair, c: int, n_max: int) -> float | None:
    """Log-log growth slope of the truncated lengths; a numeric oracle for
    dim A - 1 (the lattice-rank computation is the authoritative value)."""
    seq = truncated_sequence(pair, c, n_max)
    lo, hi = max(2, n_max // 2), n_max
    if seq.values[lo] <= 0 or seq.values[hi] <= 0:
        return None
    return (math.log(seq.values[hi]) - math.log(seq.values[lo])) / (
        math.log(hi) - math.log(lo)
    )


# -- valuation decomposition identities ------------------------------------------


@dataclass(frozen=True)
class IdentityRow:
    n: int
    lhs: int
    rhs: int

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


@dataclass(frozen=True)
class DecompositionCheck:
    label: str
    rows: tuple[IdentityRow, ...]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def counterexample(self) -> IdentityRow | None:
        return next((r for r in self.rows if not r.ok), None)


def eq1_decomposition_check(
    pair: GradedPair,
    v: ValuationOrder,
    c: int,
    beta: Fraction | int | None,
    n_max: int,
) -> DecompositionCheck:
    """Exact check of ℓ(A_n/(m^(c n)B) ∩ A_n)
    = ℓ(A_n/K_(βn) ∩ A_n) - ℓ(Ā_n/K_(βn) ∩ Ā_n) for n ≤ n_max."""
    alpha = comparison_alpha(v)
    if beta is None:
        beta = Fraction(alpha * (c + 1))
    beta = Fraction(beta)
    if beta < alpha * (c + 1):
        raise IngestionError(
            f"filtration slope {beta} is below alpha(c+1) = {alpha * (c + 1)}; "
            "the value cut would not refine the truncation"
        )
    trunc = truncated_sequence(pair, c, n_max)
    rows = []
    for n in range(n_max + 1):
        a_len = length_below_value(pair, v, n, beta * n)
        abar_len = length_below_value(pair, v, n, beta * n, truncation=c)
        rows.append(IdentityRow(n=n, lhs=trunc.values[n], rhs=a_len - abar_len))
    return DecompositionCheck("truncation-vs-value-filtration", tuple(rows))


def value_count_identity_checks(
    pair: GradedPair,
    v: ValuationOrder,
    c: int,
    n_max: int,
    beta: Fraction | int | None = None,
) -> tuple[DecompositionCheck, DecompositionCheck]:
    """Exact agreement between filtration lengths and value-point counts, for
    the algebra and for its truncated companion."""
    if beta is None:
        beta = Fraction(comparison_alpha(v) * (c + 1))
    beta = Fraction(beta)
    sg_a, sg_t = gamma_points(pair, v, c, n_max, beta)
    rows_a = []
    rows_t = []
    for n in range(n_max + 1):
        rows_a.append(
            IdentityRow(
                n=n,
                lhs=length_below_value(pair, v, n, beta * n),
                rhs=len(sg_a.points(n)),
            )
        )
        rows_t.append(
            IdentityRow(
                n=n,
                lhs=length_below_value(pair, v, n, beta * n, truncation=c),
                rhs=len(sg_t.points(n)),
            )
        )
    return (
        DecompositionCheck("algebra-length-vs-value-points", tuple(rows_a)),
        DecompositionCheck("truncated-length-vs-value-points", tuple(rows_t)),
    )


def short_exact_sequence_check(
    pair: GradedPair, c: int, n_max: int
) -> DecompositionCheck:
    """For a stabilized truncation rate, the saturation-truncated and
    A-truncated lengths differ exactly by the saturation-quotient length."""
    eps = epsilon_length_sequence(pair, n_max)
    a_side = truncated_sequence(pair, c, n_max)
    sat_side = truncated_sequence(pair, c, n_max, of_saturation=True)
    rows = [
        IdentityRow(
            n=n,
            lhs=sat_side.values[n] - a_side.values[n],
            rhs=eps.values[n],
        )
        for n in range(n_max + 1)
    ]
    return DecompositionCheck("length-additivity-along-saturation", tuple(rows))


def normalized_values(values: tuple[int, ...], dims: KrullDims) -> list[Fraction | None]:
    """(dim B - 1)! ℓ_n / n^(dim B - 1); None at n = 0."""
    p = max(dims.dim_b - 1, 0)
    fact = math.factorial(p)
    out: list[Fraction | None] = [None]
    for n in range(1, len(values)):
        out.append(Fraction(fact * values[n], n**p))
    return out
