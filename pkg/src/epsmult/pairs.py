"""Graded pairs A ⊂ B of monomial algebras over a local base.

B = k[x_1..x_d, y_1..y_e]/Δ graded by total y-degree; the x-variables have
degree 0 and span the base maximal ideal m. Δ is a squarefree monomial ideal
(so B is reduced and its minimal primes come from the facets of the associated
complex). A is the subalgebra generated over the base by finitely many
monomials of y-degree 1.

Per degree n, everything decomposes over the y-monomials μ of degree n: the
component of B_n at μ is k[x]/N_μ for the annihilator ideal N_μ, and the
component of A_n is the image of a monomial ideal I_μ of achievable x-parts.
All lengths are lattice-point counts of such components.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations

from .errors import (
    DimensionMismatchError,
    HypothesisError,
    IngestionError,
    InternalInvariantError,
)
from .geometry import fraction_rank
from .monomials import (
    Exponents,
    MonomialIdeal,
    divides,
    format_monomial,
    minimalize_gens,
    quotient_lattice_points,
    total_degree,
    variable_power_ideal,
    vec_add,
)


@dataclass(frozen=True)
class GradedPair:
    """The pair A ⊂ B; immutable and hashable (components are memoized)."""

    base_vars: tuple[str, ...]
    fiber_vars: tuple[str, ...]
    delta: MonomialIdeal          # over all d+e variables, squarefree
    a_gens: tuple[Exponents, ...]  # over all d+e variables, y-degree 1 each

    @property
    def d(self) -> int:
        return len(self.base_vars)

    @property
    def e(self) -> int:
        return len(self.fiber_vars)

    @property
    def nvars(self) -> int:
        return self.d + self.e

    @property
    def all_vars(self) -> tuple[str, ...]:
        return self.base_vars + self.fiber_vars

    def xpart(self, exps: Exponents) -> Exponents:
        return exps[: self.d]

    def ypart(self, exps: Exponents) -> Exponents:
        return exps[self.d :]

    def monomial_str(self, exps: Exponents) -> str:
        return format_monomial(exps, self.all_vars)


def make_pair(
    base_vars: tuple[str, ...] | list[str],
    fiber_vars: tuple[str, ...] | list[str],
    delta_gens: list[Exponents],
    a_gens: list[Exponents],
) -> GradedPair:
    """Validate and build a pair; every violated invariant gets its own message."""
    base_vars = tuple(base_vars)
    fiber_vars = tuple(fiber_vars)
    if len(set(base_vars + fiber_vars)) != len(base_vars) + len(fiber_vars):
        raise IngestionError("variable names must be distinct")
    if not fiber_vars:
        raise IngestionError("at least one fiber variable is required")
    d, e = len(base_vars), len(fiber_vars)
    nvars = d + e
    for g in delta_gens:
        if len(g) != nvars:
            raise DimensionMismatchError("relation monomial has wrong ambient length")
        if any(x > 1 for x in g):
            raise IngestionError(
                f"relation {g} is not squarefree; the quotient would not be reduced"
            )
        if not any(g):
            raise IngestionError("the unit monomial cannot be a relation (B would vanish)")
    delta = MonomialIdeal.generated_by(delta_gens, nvars)
    seen = []
    for g in a_gens:
        if len(g) != nvars:
            raise DimensionMismatchError("subalgebra generator has wrong ambient length")
        ydeg = sum(g[d:])
        if ydeg != 1:
            raise IngestionError(
                f"subalgebra generator {g} has fiber degree {ydeg}, expected exactly 1"
            )
        if delta.contains(g):
            raise IngestionError(f"subalgebra generator {g} is zero in the quotient ring")
        if g not in seen:
            seen.append(g)
    return GradedPair(base_vars, fiber_vars, delta, tuple(sorted(seen)))


# -- per-degree decomposition -------------------------------------------------

YMono = Exponents  # exponent tuple over the fiber variables only


def fiber_monomials(e: int, n: int) -> list[YMono]:
    """All y-monomials of degree n, lexicographically sorted."""
    if e == 0:
        return [()] if n == 0 else []
    out: list[YMono] = []

    def rec(prefix: list[int], remaining: int, pos: int) -> None:
        if pos == e - 1:
            out.append(tuple(prefix + [remaining]))
            return
        for k in range(remaining + 1):
            rec(prefix + [k], remaining - k, pos + 1)

    rec([], n, 0)
    return sorted(out)


def annihilator(pair: GradedPair, mu: YMono) -> MonomialIdeal:
    """x-parts killing the component of μ: x^a μ ∈ Δ iff a lies here.

    Returns the unit ideal when μ itself is zero in B (a dead component).
    """
    gens = []
    for g in pair.delta.gens:
        if divides(pair.ypart(g), mu):
            gens.append(pair.xpart(g))
    return MonomialIdeal.generated_by(gens, pair.d)


@lru_cache(maxsize=None)
def a_components(pair: GradedPair, n: int) -> dict[YMono, MonomialIdeal]:
    """Achievable x-part ideals of A_n per fiber monomial.

    Dynamic programming over n-fold products of the degree-1 generators;
    products that die in Δ are dropped (their multiples die as well, so the
    generated components are unchanged).
    """
    if n == 0:
        return {(0,) * pair.e: MonomialIdeal.unit(pair.d)}
    prev = a_components(pair, n - 1)
    raw: dict[YMono, list[Exponents]] = {}
    for mu_prev, ideal in prev.items():
        for g in pair.a_gens:
            mu = vec_add(mu_prev, pair.ypart(g))
            gx = pair.xpart(g)
            bucket = raw.setdefault(mu, [])
            for h in ideal.gens:
                bucket.append(vec_add(h, gx))
    out: dict[YMono, MonomialIdeal] = {}
    for mu, gens in raw.items():
        ann = annihilator(pair, mu)
        alive = [g for g in minimalize_gens(gens) if not ann.contains(g)]
        if alive:
            out[mu] = MonomialIdeal(pair.d, tuple(alive), _trusted=True)
    return out


@dataclass(frozen=True)
class ComponentDecomposition:
    """Per-μ data of one graded piece: (component ideal, annihilator ideal)."""

    degree: int
    components: dict[YMono, tuple[MonomialIdeal, MonomialIdeal]] = field(default_factory=dict)

    def full(self, mu: YMono) -> MonomialIdeal:
        """Component ideal together with the annihilator (the submodule preimage)."""
        ideal, ann = self.components[mu]
        return ideal.plus(ann)


def component_basis(pair: GradedPair, n: int) -> ComponentDecomposition:
    """A- and annihilator ideals for every live fiber monomial of degree n."""
    achieved = a_components(pair, n)
    comps: dict[YMono, tuple[MonomialIdeal, MonomialIdeal]] = {}
    for mu in fiber_monomials(pair.e, n):
        ann = annihilator(pair, mu)
        if ann.is_unit:
            continue
        ideal = achieved.get(mu, MonomialIdeal.zero(pair.d))
        comps[mu] = (ideal, ann)
    return ComponentDecomposition(n, comps)


def saturated_component(pair: GradedPair, n: int) -> ComponentDecomposition:
    """Saturation of each A-component by the base maximal ideal, inside the
    quotient by the annihilator: sat(I_μ + N_μ) per live μ."""
    if pair.d == 0:
        raise IngestionError(
            "saturation over a field base is trivial; use the field-case sequence"
        )
    base = component_basis(pair, n)
    comps = {}
    for mu, (ideal, ann) in base.components.items():
        sat = ideal.plus(ann).saturate(tuple(range(pair.d)))
        comps[mu] = (sat, ann)
    return ComponentDecomposition(n, comps)


# -- minimal primes and hypotheses --------------------------------------------


@dataclass(frozen=True)
class PrimeDecomposition:
    """Minimal primes of Δ as variable-index sets, with surviving variables."""

    primes: tuple[tuple[int, ...], ...]
    quotient_tags: tuple[tuple[int, ...], ...]


def _minimal_hitting_sets(edges: list[frozenset[int]], universe: int) -> list[tuple[int, ...]]:
    results: set[frozenset[int]] = set()

    def rec(chosen: frozenset[int], remaining: list[frozenset[int]]) -> None:
        if not remaining:
            results.add(chosen)
            return
        edge = min(remaining, key=len)
        for v in sorted(edge):
            nxt = chosen | {v}
            if any(r <= nxt for r in results):
                continue
            rec(nxt, [e for e in remaining if v not in e])

    rec(frozenset(), edges)
    minimal = [
        s for s in results if not any(other < s for other in results)
    ]
    return sorted(tuple(sorted(s)) for s in minimal)


@lru_cache(maxsize=None)
def minimal_primes(pair: GradedPair) -> PrimeDecomposition:
    """Minimal primes of Δ: minimal transversals of the generator supports.

    The complementary variable sets are the facets of the associated complex.
    """
    edges = [
        frozenset(i for i, e in enumerate(g) if e) for g in pair.delta.gens
    ]
    if not edges:
        primes: list[tuple[int, ...]] = [()]
    else:
        primes = _minimal_hitting_sets(edges, pair.nvars)
    tags = tuple(
        tuple(i for i in range(pair.nvars) if i not in set(p)) for p in primes
    )
    return PrimeDecomposition(tuple(primes), tags)


@dataclass(frozen=True)
class HypothesisReport:
    holds: bool
    reduced: bool
    field_base: bool
    prime_checks: tuple[tuple[tuple[str, ...], bool], ...]  # (facet vars, ok)
    witness: tuple[str, ...] | None

    def require(self) -> None:
        if not self.holds:
            raise HypothesisError(
                "a minimal prime contracts to the base maximal ideal; "
                "the limit machinery does not apply",
                witness="facet without base variable: {" + ", ".join(self.witness or ()) + "}",
            )


def check_hypotheses(pair: GradedPair) -> HypothesisReport:
    """Reducedness (by construction) and the minimal-prime contraction test:
    every facet must contain a base variable, unless the base is a field."""
    dec = minimal_primes(pair)
    checks = []
    witness = None
    for facet in dec.quotient_tags:
        names = tuple(pair.all_vars[i] for i in facet)
        ok = pair.d == 0 or any(i < pair.d for i in facet)
        checks.append((names, ok))
        if not ok and witness is None:
            witness = names
    return HypothesisReport(
        holds=witness is None,
        reduced=True,
        field_base=pair.d == 0,
        prime_checks=tuple(checks),
        witness=witness,
    )


# -- intersection ideals from the prime decomposition --------------------------


def _prime_component(pair: GradedPair, prime: tuple[int, ...], mu: YMono) -> MonomialIdeal:
    """Component at μ of the ideal P·B: unit if a fiber variable of P divides μ,
    else the ideal of P's base variables."""
    for i in prime:
        if i >= pair.d and mu[i - pair.d] > 0:
            return MonomialIdeal.unit(pair.d)
    gens = [
        tuple(1 if j == i else 0 for j in range(pair.d))
        for i in prime
        if i < pair.d
    ]
    return MonomialIdeal.generated_by(gens, pair.d)


def omega_component(pair: GradedPair, n: int, s: int) -> ComponentDecomposition:
    """Per-μ ideal of ⋂_i (m^s + P_i)·B in degree n."""
    if pair.d < 1:
        raise IngestionError("intersection ideals need at least one base variable")
    dec = minimal_primes(pair)
    ms = variable_power_ideal(pair.d, tuple(range(pair.d)), s)
    comps = {}
    for mu, (_, ann) in component_basis(pair, n).components.items():
        w = MonomialIdeal.unit(pair.d)
        for prime in dec.primes:
            w = w.intersect(ms.plus(_prime_component(pair, prime, mu)))
        comps[mu] = (w, ann)
    return ComponentDecomposition(n, comps)


def prime_ladder_lengths(pair: GradedPair, n: int, s: int) -> list[int]:
    """Lengths of the successive quotients along the prime ladder
    L^j = (⋂_{i<=j} (m^s + P_i)B) ∩ A_n, j = 0..t; their sum telescopes to the
    length of A_n modulo the full intersection."""
    if pair.d < 1:
        raise IngestionError("the prime ladder needs at least one base variable")
    dec = minimal_primes(pair)
    t = len(dec.primes)
    if n == 0:
        return [0] * t
    ms = variable_power_ideal(pair.d, tuple(range(pair.d)), s)
    base = component_basis(pair, n)
    lengths = [0] * t
    for mu, (ideal, ann) in base.components.items():
        full = ideal.plus(ann)
        current = full
        for j, prime in enumerate(dec.primes):
            w = ms.plus(_prime_component(pair, prime, mu))
            nxt = current.intersect(w)
            cnt = quotient_lattice_points(current, nxt)
            if cnt is None:
                raise InternalInvariantError(
                    "ladder quotient is infinite; the intersection ideals are broken"
                )
            lengths[j] += cnt
            current = nxt
    return lengths


# -- dimensions ----------------------------------------------------------------


@dataclass(frozen=True)
class KrullDims:
    dim_b: int
    dim_a: int
    per_prime_b: tuple[int, ...]


@lru_cache(maxsize=None)
def krull_dims(pair: GradedPair) -> KrullDims:
    """dim B from the facet sizes; dim A from exponent-lattice ranks taken
    modulo each minimal prime (standard monomial-algebra dimension)."""
    dec = minimal_primes(pair)
    facet_sizes = tuple(len(tag) for tag in dec.quotient_tags)
    dim_b = max(facet_sizes) if facet_sizes else pair.nvars
    dim_a = 0
    for prime in dec.primes:
        pset = set(prime)
        surviving = [i for i in range(pair.nvars) if i not in pset]
        pos = {v: k for k, v in enumerate(surviving)}
        rows = []
        for i in range(pair.d):
            if i not in pset:
                row = [0] * len(surviving)
                row[pos[i]] = 1
                rows.append(row)
        for g in pair.a_gens:
            if any(g[i] for i in pset):
                continue  # generator dies in B/P
            rows.append([g[i] for i in surviving])
        rank = fraction_rank(rows) if rows else 0
        dim_a = max(dim_a, rank)
    return KrullDims(dim_b, dim_a, facet_sizes)


# -- helpers for the graded maximal-ideal identity ------------------------------


def specialize_ideal(pair: GradedPair, big: MonomialIdeal, mu: YMono) -> MonomialIdeal:
    """Component at μ of an ideal of B given over all d+e variables: the x-parts
    of generators whose y-part divides μ (plus the annihilator)."""
    if big.nvars != pair.nvars:
        raise DimensionMismatchError("ideal is not over the pair's ambient variables")
    gens = [pair.xpart(g) for g in big.gens if divides(pair.ypart(g), mu)]
    return MonomialIdeal.generated_by(gens, pair.d).plus(annihilator(pair, mu))


def graded_max_power_component(pair: GradedPair, power: int, mu: YMono) -> MonomialIdeal:
    """Component at μ of (all variables)^power: a monomial lies in that power
    exactly when its total degree reaches `power`, so the component is the
    base-ideal power m^(power - |μ|) plus the annihilator."""
    k = total_degree(mu)
    ms = variable_power_ideal(pair.d, tuple(range(pair.d)), max(power - k, 0))
    return ms.plus(annihilator(pair, mu))


def base_power_component(pair: GradedPair, power: int, mu: YMono) -> MonomialIdeal:
    """Component at μ of m^power · B."""
    ms = variable_power_ideal(pair.d, tuple(range(pair.d)), power)
    return ms.plus(annihilator(pair, mu))


def artin_rees_lag(pair: GradedPair, s_max: int, n_max: int) -> int:
    """Least k0 ≥ 0 with ω_s ⊆ m^(s-k0)·B for all k0 < s ≤ s_max, checked on
    components of degree ≤ n_max. m^s·B ⊆ ω_s always holds."""
    for k0 in range(s_max + 1):
        ok = True
        for s in range(k0 + 1, s_max + 1):
            for n in range(n_max + 1):
                omg = omega_component(pair, n, s)
                for mu, (w, _) in omg.components.items():
                    target = base_power_component(pair, s - k0, mu)
                    if not target.contains_ideal(w):
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
        if ok:
            return k0
    raise InternalInvariantError("no lag constant found; contradicts the sandwich")
