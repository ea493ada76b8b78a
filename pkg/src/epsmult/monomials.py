"""Exact arithmetic for monomials and monomial ideals in a fixed variable list.

Monomials are exponent tuples of nonnegative (arbitrary precision) integers.
Ideals keep their generating set minimal (an antichain under componentwise
divisibility), so structural equality is ideal equality. All operations are
pure and return new objects.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Sequence

from .errors import (
    BudgetExceededError,
    ContainmentError,
    DimensionMismatchError,
    MonomialParseError,
)

Exponents = tuple[int, ...]


def divides(a: Exponents, b: Exponents) -> bool:
    """Whether x^a divides x^b."""
    return all(ai <= bi for ai, bi in zip(a, b))


def vec_add(a: Exponents, b: Exponents) -> Exponents:
    return tuple(ai + bi for ai, bi in zip(a, b))


def vec_lcm(a: Exponents, b: Exponents) -> Exponents:
    return tuple(max(ai, bi) for ai, bi in zip(a, b))


def vec_colon(a: Exponents, b: Exponents) -> Exponents:
    """Exponent of x^a : x^b, i.e. max(a - b, 0) componentwise."""
    return tuple(max(ai - bi, 0) for ai, bi in zip(a, b))


def total_degree(a: Exponents) -> int:
    return sum(a)


def minimalize_gens(gens: Iterable[Exponents]) -> tuple[Exponents, ...]:
    """Reduce a generating set to the divisibility antichain, sorted."""
    pool = sorted(set(gens), key=lambda g: (total_degree(g), g))
    kept: list[Exponents] = []
    for g in pool:
        if not any(divides(h, g) for h in kept):
            kept.append(g)
    return tuple(sorted(kept))


class MonomialIdeal:
    """A monomial ideal given by its minimal generators.

    The empty generating set is the zero ideal; the single zero vector is the
    unit ideal. Instances are immutable and hashable.
    """

    __slots__ = ("nvars", "gens")

    def __init__(self, nvars: int, gens: tuple[Exponents, ...], *, _trusted: bool = False):
        if not _trusted:
            for g in gens:
                if len(g) != nvars:
                    raise DimensionMismatchError(
                        f"generator of length {len(g)} in ambient of {nvars} variables"
                    )
                if any(e < 0 for e in g):
                    raise MonomialParseError(f"negative exponent in {g}")
            gens = minimalize_gens(gens)
        object.__setattr__(self, "nvars", nvars)
        object.__setattr__(self, "gens", gens)

    def __setattr__(self, *args):  # pragma: no cover - immutability guard
        raise AttributeError("MonomialIdeal is immutable")

    @classmethod
    def generated_by(cls, gens: Iterable[Exponents], nvars: int) -> "MonomialIdeal":
        return cls(nvars, tuple(gens))

    @classmethod
    def zero(cls, nvars: int) -> "MonomialIdeal":
        return cls(nvars, (), _trusted=True)

    @classmethod
    def unit(cls, nvars: int) -> "MonomialIdeal":
        return cls(nvars, ((0,) * nvars,), _trusted=True)

    # -- predicates ---------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.gens

    @property
    def is_unit(self) -> bool:
        return bool(self.gens) and not any(self.gens[0])

    def contains(self, mono: Exponents) -> bool:
        if len(mono) != self.nvars:
            raise DimensionMismatchError("monomial length does not match ambient")
        return any(divides(g, mono) for g in self.gens)

    def contains_ideal(self, other: "MonomialIdeal") -> bool:
        self._check_ambient(other)
        return all(self.contains(g) for g in other.gens)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, MonomialIdeal)
            and self.nvars == other.nvars
            and self.gens == other.gens
        )

    def __hash__(self) -> int:
        return hash((self.nvars, self.gens))

    def __repr__(self) -> str:
        return f"MonomialIdeal({self.nvars}, {list(self.gens)})"

    def _check_ambient(self, other: "MonomialIdeal") -> None:
        if self.nvars != other.nvars:
            raise DimensionMismatchError(
                f"ambients differ: {self.nvars} vs {other.nvars} variables"
            )

    # -- arithmetic ---------------------------------------------------------

    def plus(self, other: "MonomialIdeal") -> "MonomialIdeal":
        self._check_ambient(other)
        return MonomialIdeal(self.nvars, self.gens + other.gens)

    def times(self, other: "MonomialIdeal") -> "MonomialIdeal":
        self._check_ambient(other)
        if self.is_zero or other.is_zero:
            return MonomialIdeal.zero(self.nvars)
        prods = [vec_add(g, h) for g in self.gens for h in other.gens]
        return MonomialIdeal(self.nvars, tuple(prods))

    def power(self, n: int) -> "MonomialIdeal":
        """I^n by repeated squaring with intermediate minimalization."""
        if n < 0:
            raise ValueError("negative ideal power")
        if n == 0:
            return MonomialIdeal.unit(self.nvars)
        result: MonomialIdeal | None = None
        base = self
        k = n
        while k:
            if k & 1:
                result = base if result is None else result.times(base)
            k >>= 1
            if k:
                base = base.times(base)
        assert result is not None
        return result

    def colon_monomial(self, g: Exponents) -> "MonomialIdeal":
        if len(g) != self.nvars:
            raise DimensionMismatchError("monomial length does not match ambient")
        return MonomialIdeal(self.nvars, tuple(vec_colon(h, g) for h in self.gens))

    def colon(self, other: "MonomialIdeal") -> "MonomialIdeal":
        """(I : J) as the intersection of the single-monomial colons."""
        self._check_ambient(other)
        if other.is_zero:
            return MonomialIdeal.unit(self.nvars)
        result = self.colon_monomial(other.gens[0])
        for g in other.gens[1:]:
            result = result.intersect(self.colon_monomial(g))
        return result

    def intersect(self, other: "MonomialIdeal") -> "MonomialIdeal":
        self._check_ambient(other)
        if self.is_zero or other.is_zero:
            return MonomialIdeal.zero(self.nvars)
        if self.is_unit:
            return other
        if other.is_unit:
            return self
        meets = [vec_lcm(g, h) for g in self.gens for h in other.gens]
        return MonomialIdeal(self.nvars, tuple(meets))

    def saturate_variable(self, i: int) -> "MonomialIdeal":
        """(I : x_i^infinity): zero the i-th coordinate of every generator."""
        if not 0 <= i < self.nvars:
            raise DimensionMismatchError(f"variable index {i} out of range")
        zeroed = tuple(g[:i] + (0,) + g[i + 1 :] for g in self.gens)
        return MonomialIdeal(self.nvars, zeroed)

    def saturate(self, var_indices: Sequence[int]) -> "MonomialIdeal":
        """(I : m^infinity) for m generated by the listed variables."""
        if not var_indices:
            raise DimensionMismatchError("saturation needs a nonempty variable set")
        result = self.saturate_variable(var_indices[0])
        for i in var_indices[1:]:
            result = result.intersect(self.saturate_variable(i))
        return result


def variable_power_ideal(nvars: int, var_indices: Sequence[int], power: int) -> MonomialIdeal:
    """(x_i : i in var_indices)^power, generated by all degree-`power` monomials."""
    if power == 0:
        return MonomialIdeal.unit(nvars)
    gens: list[Exponents] = []

    def rec(prefix: list[int], remaining: int, pos: int) -> None:
        if pos == len(var_indices) - 1:
            full = [0] * nvars
            for idx, e in zip(var_indices, prefix + [remaining]):
                full[idx] = e
            gens.append(tuple(full))
            return
        for e in range(remaining + 1):
            rec(prefix + [e], remaining - e, pos + 1)

    if not var_indices:
        return MonomialIdeal.zero(nvars)
    rec([], power, 0)
    return MonomialIdeal(nvars, tuple(gens))


# -- lattice-point counting -------------------------------------------------


class _Budget:
    __slots__ = ("remaining",)

    def __init__(self, cap: int | None):
        self.remaining = cap

    def spend(self) -> None:
        if self.remaining is None:
            return
        self.remaining -= 1
        if self.remaining < 0:
            raise BudgetExceededError("lattice-point exploration cap exceeded")


@lru_cache(maxsize=None)
def _standard_count(gens: tuple[Exponents, ...], nvars: int) -> int | None:
    """Monomials outside the ideal; None when infinite (not primary to all vars)."""
    if gens and not any(gens[0]):
        return 0
    if nvars == 0:
        return 1
    if not gens:
        return None
    # m-primary test: a pure power of the last variable must be present.
    pure = [g[-1] for g in gens if not any(g[:-1])]
    if not pure:
        return None
    bound = min(pure)
    thresholds = sorted({g[-1] for g in gens if g[-1] < bound} | {0})
    total = 0
    for pos, t in enumerate(thresholds):
        upper = thresholds[pos + 1] if pos + 1 < len(thresholds) else bound
        sliced = minimalize_gens(g[:-1] for g in gens if g[-1] <= t)
        inner = _standard_count(sliced, nvars - 1)
        if inner is None:
            return None
        total += (upper - t) * inner
    return total


def standard_monomial_count(ideal: MonomialIdeal) -> int | None:
    """Count of monomials not in the ideal; None when infinite."""
    return _standard_count(ideal.gens, ideal.nvars)


def quotient_is_finite(outer: MonomialIdeal, inner: MonomialIdeal) -> bool:
    """Absorption criterion: every generator of `outer` eventually multiplies
    into `inner` along every variable direction, which happens exactly when
    each (inner : g) is primary to the full variable set."""
    outer._check_ambient(inner)
    for g in outer.gens:
        for i in range(outer.nvars):
            if not any(
                all(h[j] <= g[j] for j in range(outer.nvars) if j != i)
                for h in inner.gens
            ):
                return False
    return True


def quotient_lattice_points(
    outer: MonomialIdeal, inner: MonomialIdeal, cap: int | None = None
) -> int | None:
    """Exact number of monomials in outer \\ inner, or None when infinite.

    Requires inner to be contained in outer. Computed by filtering in the
    generators of `outer` one at a time; each layer is a translated standard
    monomial count. `cap` bounds the number of recursion cells explored.
    """
    outer._check_ambient(inner)
    if not outer.contains_ideal(inner):
        raise ContainmentError("inner ideal is not contained in outer ideal")
    if outer.is_zero:
        return 0
    if not quotient_is_finite(outer, inner):
        return None
    budget = _Budget(cap)
    total = 0
    acc = inner
    for g in outer.gens:
        layer = acc.colon_monomial(g)
        budget.spend()
        cnt = _counted_standard(layer, budget)
        if cnt is None:
            raise ContainmentError(
                "absorption held but a layer is infinite; counting invariant broken"
            )
        total += cnt
        acc = acc.plus(MonomialIdeal(acc.nvars, (g,), _trusted=True))
    return total


def _counted_standard(ideal: MonomialIdeal, budget: _Budget) -> int | None:
    """Standard-monomial count with a recursion budget (uncached path when capped)."""
    if budget.remaining is None:
        return _standard_count(ideal.gens, ideal.nvars)
    return _budgeted_count(ideal.gens, ideal.nvars, budget)


def _budgeted_count(gens: tuple[Exponents, ...], nvars: int, budget: _Budget) -> int | None:
    budget.spend()
    if gens and not any(gens[0]):
        return 0
    if nvars == 0:
        return 1
    if not gens:
        return None
    pure = [g[-1] for g in gens if not any(g[:-1])]
    if not pure:
        return None
    bound = min(pure)
    thresholds = sorted({g[-1] for g in gens if g[-1] < bound} | {0})
    total = 0
    for pos, t in enumerate(thresholds):
        upper = thresholds[pos + 1] if pos + 1 < len(thresholds) else bound
        sliced = minimalize_gens(g[:-1] for g in gens if g[-1] <= t)
        inner = _budgeted_count(sliced, nvars - 1, budget)
        if inner is None:
            return None
        total += (upper - t) * inner
    return total


# -- the monomial text grammar ----------------------------------------------
#
#   term := var ('^' posint)? ; monomial := term ('*' term)* | '1'
#
# Whitespace-tolerant; variables must come from the declared name list.


def parse_monomial(text: str, variables: Sequence[str]) -> Exponents:
    index = {name: i for i, name in enumerate(variables)}
    exps = [0] * len(variables)
    body = text.strip()
    if not body:
        raise MonomialParseError("empty monomial string")
    if body == "1":
        return tuple(exps)
    for raw in body.split("*"):
        term = raw.strip()
        if not term:
            raise MonomialParseError(f"empty factor in {text!r}")
        if "^" in term:
            name, _, exp_text = term.partition("^")
            name = name.strip()
            exp_text = exp_text.strip()
            if not exp_text.isdigit() or int(exp_text) < 1:
                raise MonomialParseError(f"exponent must be a positive integer in {text!r}")
            exp = int(exp_text)
        else:
            name, exp = term, 1
        if name not in index:
            raise MonomialParseError(f"unknown variable {name!r} in {text!r}")
        exps[index[name]] += exp
    return tuple(exps)


def format_monomial(exps: Exponents, variables: Sequence[str]) -> str:
    if len(exps) != len(variables):
        raise DimensionMismatchError("exponent length does not match variable list")
    parts = []
    for name, e in zip(variables, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def parse_ideal(texts: Iterable[str], variables: Sequence[str]) -> MonomialIdeal:
    return MonomialIdeal.generated_by(
        (parse_monomial(t, variables) for t in texts), len(variables)
    )


def format_ideal(ideal: MonomialIdeal, variables: Sequence[str]) -> list[str]:
    return [format_monomial(g, variables) for g in ideal.gens]
