from __future__ import annotations

import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from epsmult.monomials import MonomialIdeal, parse_monomial
from epsmult.pairs import GradedPair, make_pair


def random_ideal(rng: random.Random, d: int, max_gens: int, max_exp: int) -> MonomialIdeal:
    gens = []
    for _ in range(rng.randint(1, max_gens)):
        gens.append(tuple(rng.randint(0, max_exp) for _ in range(d)))
    gens = [g for g in gens if any(g)] or [tuple([1] + [0] * (d - 1))]
    return MonomialIdeal.generated_by(gens, d)


def random_pair(rng: random.Random, d: int, e: int, with_delta: bool = True) -> GradedPair:
    """A valid pair that satisfies the minimal-prime hypothesis: relations are
    squarefree and always include at least one base variable."""
    nvars = d + e
    delta_gens = []
    if with_delta and d >= 1 and rng.random() < 0.6:
        for _ in range(rng.randint(1, 2)):
            ys = [i for i in range(e) if rng.random() < 0.5]
            if not ys:
                continue
            xs = [rng.randrange(d)]
            g = [0] * nvars
            for i in xs:
                g[i] = 1
            for j in ys:
                g[d + j] = 1
            delta_gens.append(tuple(g))
    a_gens = []
    for _ in range(rng.randint(1, 3)):
        j = rng.randrange(e)
        g = [rng.randint(0, 2) for _ in range(d)] + [0] * e
        g[d + j] = 1
        a_gens.append(tuple(g))
    base = [f"x{i}" for i in range(1, d + 1)]
    fiber = [f"y{j}" for j in range(1, e + 1)]
    delta_gens = [g for g in delta_gens if not any(divless(g, a) for a in a_gens)]
    try:
        return make_pair(base, fiber, delta_gens, a_gens)
    except Exception:
        return make_pair(base, fiber, [], a_gens)


def divless(g, a) -> bool:
    return all(x <= y for x, y in zip(g, a))


@pytest.fixture
def rees_pair() -> GradedPair:
    """The pair encoding the ideal (x^2, x y) in two base variables."""
    names = ["x", "y", "t"]
    return make_pair(
        ["x", "y"],
        ["t"],
        [],
        [parse_monomial("x^2*t", names), parse_monomial("x*y*t", names)],
    )


@pytest.fixture
def split_pair() -> GradedPair:
    """Two fiber variables tied by a squarefree relation y1·y2 = 0."""
    names = ["x", "y1", "y2"]
    return make_pair(
        ["x"],
        ["y1", "y2"],
        [parse_monomial("y1*y2", names)],
        [parse_monomial("x*y1", names), parse_monomial("x*y2", names)],
    )


@pytest.fixture
def field_pair() -> GradedPair:
    names = ["y1", "y2"]
    return make_pair([], ["y1", "y2"], [], [parse_monomial("y1", names)])


def rees_pair_for(ideal_texts: list[str], variables: list[str]) -> GradedPair:
    names = variables + ["t"]
    gens = [parse_monomial(t, variables) + (1,) for t in ideal_texts]
    return make_pair(variables, ["t"], [], [tuple(g) for g in gens])
