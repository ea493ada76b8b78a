"""Level-graded affine semigroups: counts, group/cone data, cross-section body.

A semigroup lives in N^(w+1) with the last coordinate the level. It is given
either by finitely many generators or extensionally by its points per level
(the mode used for value semigroups). The cross-section body is the slice of
the generated cone at level m(S), measured in the integer lattice of its
direction space; the lattice index of the level-0 subgroup enters the limit
statement separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import DegenerateSemigroupError, IngestionError
from .geometry import (
    convex_hull_volume,
    diagonalize_with_saturation,
    hermite_row_basis,
    int_kernel_basis,
    solve_in_basis,
)

IntVec = tuple[int, ...]


@dataclass(frozen=True)
class AffineSemigroup:
    """Either finitely generated (generators set) or an explicit level-graded
    point set. Vectors carry the level as their last coordinate."""

    width: int                                   # coordinates excluding the level
    generators: tuple[IntVec, ...] | None = None
    level_points: tuple[tuple[IntVec, ...], ...] | None = None  # index = level

    @classmethod
    def from_generators(cls, gens) -> "AffineSemigroup":
        gens = tuple(sorted(set(tuple(int(x) for x in g) for g in gens)))
        if not gens:
            raise DegenerateSemigroupError("no generators given")
        width = len(gens[0]) - 1
        if width < 0:
            raise IngestionError("generators need at least the level coordinate")
        for g in gens:
            if len(g) != width + 1:
                raise IngestionError("generators of mixed lengths")
            if any(x < 0 for x in g):
                raise IngestionError(f"negative entry in generator {g}")
        return cls(width=width, generators=gens)

    @classmethod
    def from_level_points(cls, levels) -> "AffineSemigroup":
        packed = tuple(
            tuple(sorted(set(tuple(int(x) for x in p) for p in pts))) for pts in levels
        )
        width = None
        for pts in packed:
            for p in pts:
                width = len(p) if width is None else width
                if len(p) != width:
                    raise IngestionError("points of mixed lengths")
                if any(x < 0 for x in p):
                    raise IngestionError(f"negative entry in point {p}")
        if width is None:
            raise DegenerateSemigroupError("empty point set")
        return cls(width=width, level_points=packed)

    @property
    def is_degenerate(self) -> bool:
        if self.generators is not None:
            return all(g[-1] == 0 for g in self.generators)
        return all(
            not pts for level, pts in enumerate(self.level_points or ()) if level > 0
        )

    def vectors(self) -> list[IntVec]:
        """All defining vectors with the level as last coordinate."""
        if self.generators is not None:
            return list(self.generators)
        out = []
        for level, pts in enumerate(self.level_points or ()):
            out.extend(tuple(p) + (level,) for p in pts)
        return out

    def max_level(self) -> int:
        if self.level_points is not None:
            return len(self.level_points) - 1
        raise IngestionError("max_level applies to point-set semigroups only")


def level_counts(s: AffineSemigroup, n_max: int) -> list[int]:
    """#S_n for n = 0..n_max (exact dynamic programming in generated mode)."""
    if s.level_points is not None:
        if n_max > s.max_level():
            raise IngestionError(
                f"point data reaches level {s.max_level()}, requested {n_max}"
            )
        return [len(s.level_points[n]) for n in range(n_max + 1)]
    assert s.generators is not None
    if any(g[-1] == 0 for g in s.generators):
        raise DegenerateSemigroupError(
            "level-0 generators present; strong nonnegativity fails in this model"
        )
    layers: list[set[IntVec]] = [{(0,) * s.width}]
    for n in range(1, n_max + 1):
        cur: set[IntVec] = set()
        for g in s.generators:
            lev = g[-1]
            if lev <= n:
                head = g[:-1]
                for p in layers[n - lev]:
                    cur.add(tuple(a + b for a, b in zip(p, head)))
        layers.append(cur)
    return [len(layer) for layer in layers]


@dataclass(frozen=True)
class OkounkovData:
    """Group, step, dimension, cross-section body, exact volume and index."""

    m: int
    q: int
    body_vertices: tuple[tuple[Fraction, ...], ...]  # ambient coords at level m
    volume: Fraction
    index: int
    group_basis: tuple[IntVec, ...]

    @property
    def predicted_limit(self) -> Fraction:
        return self.volume / self.index


def okounkov_data(s: AffineSemigroup) -> OkounkovData:
    vecs = s.vectors()
    positive = [v for v in vecs if v[-1] > 0]
    if not positive:
        raise DegenerateSemigroupError("no vector with positive level")
    basis = hermite_row_basis(vecs)
    rank = len(basis)
    q = rank - 1
    m = 0
    for b in basis:
        m = gcd(m, b[-1])
    if m == 0:
        raise DegenerateSemigroupError("level projection of the group is zero")

    # Normalize every defining vector into the level-m slice of the cone.
    slice_points: list[tuple[Fraction, ...]] = sorted(
        set(
            tuple(Fraction(x * m, v[-1]) for x in v[:-1])
            for v in positive
        )
    )
    if q == 0:
        vertex = slice_points[0] + (Fraction(m),)
        return OkounkovData(
            m=m,
            q=0,
            body_vertices=(vertex,),
            volume=Fraction(1),
            index=1,
            group_basis=tuple(tuple(b) for b in basis),
        )

    # Level-0 sublattice of the group: integer kernel of the level functional
    # applied to the basis rows.
    kernel = int_kernel_basis([b[-1] for b in basis])
    l0_rows = [
        [sum(c[i] * basis[i][j] for i in range(rank)) for j in range(s.width + 1)]
        for c in kernel
    ]
    divisors, saturation = diagonalize_with_saturation(l0_rows)
    index = 1
    for dv in divisors:
        index *= dv
    # Direction-lattice coordinates of the slice points relative to the first.
    base = slice_points[0]
    sat_dirs = [row[:-1] for row in saturation]  # level coordinate is 0 on L0
    coords = [
        tuple(solve_in_basis(sat_dirs, [p[i] - base[i] for i in range(s.width)]))
        for p in slice_points
    ]
    volume, hull_coords = convex_hull_volume(coords)
    verts = []
    for cv in hull_coords:
        amb = [base[i] for i in range(s.width)]
        for t, direction in zip(cv, sat_dirs):
            for i in range(s.width):
                amb[i] += t * direction[i]
        verts.append(tuple(amb) + (Fraction(m),))
    return OkounkovData(
        m=m,
        q=q,
        body_vertices=tuple(sorted(verts)),
        volume=volume,
        index=index,
        group_basis=tuple(tuple(b) for b in basis),
    )


@dataclass(frozen=True)
class LimitTrace:
    n: int
    count: int
    normalized: Fraction
    predicted: Fraction


@dataclass(frozen=True)
class LimitVerdict:
    passed: bool
    relative_error: Fraction | None
    data: OkounkovData
    trace: tuple[LimitTrace, ...]


def verify_volume_limit(
    s: AffineSemigroup, n_max: int, tol: Fraction | float = Fraction(1, 50)
) -> LimitVerdict:
    """Compare #S_(m n)/n^q at n = n_max against volume/index."""
    data = okounkov_data(s)
    tol = Fraction(tol).limit_denominator(10**9) if not isinstance(tol, Fraction) else tol
    counts = level_counts(s, data.m * n_max)
    predicted = data.predicted_limit
    trace = []
    for n in range(1, n_max + 1):
        cnt = counts[data.m * n]
        trace.append(
            LimitTrace(n=n, count=cnt, normalized=Fraction(cnt, n**data.q), predicted=predicted)
        )
    final = trace[-1].normalized
    if predicted == 0:
        passed = final == 0
        rel = None
    else:
        rel = abs(final - predicted) / predicted
        passed = rel <= tol
    return LimitVerdict(passed=passed, relative_error=rel, data=data, trace=tuple(trace))


@dataclass(frozen=True)
class BoundednessWitness:
    bounded: bool
    exponent: int
    max_ratio: Fraction
    at_level: int
    dimension: int
    offending_level: int | None


def boundedness_witness(s: AffineSemigroup, p: int, n_max: int = 60) -> BoundednessWitness:
    """Check #S_(m n)/n^p over the computed range; the exact decision comes from
    the body dimension (counts grow like n^q), the trace supplies the witness."""
    data = okounkov_data(s)
    if s.level_points is not None:
        n_max = min(n_max, s.max_level() // max(data.m, 1))
    counts = level_counts(s, data.m * n_max)
    best = Fraction(0)
    at = 0
    for n in range(1, n_max + 1):
        ratio = Fraction(counts[data.m * n], n**p)
        if ratio > best:
            best, at = ratio, n
    bounded = data.q <= p
    return BoundednessWitness(
        bounded=bounded,
        exponent=p,
        max_ratio=best,
        at_level=at,
        dimension=data.q,
        offending_level=None if bounded else at,
    )
