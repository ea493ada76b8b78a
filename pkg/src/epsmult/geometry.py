"""Exact integer/rational linear algebra and polytope volume.

Everything here runs on Python ints and Fractions; no floating point touches
any value that feeds a reported number. Matrices are small (desk scale), so
classical elimination algorithms are used throughout.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Sequence

from .errors import InternalInvariantError

Vec = tuple[Fraction, ...]


def fraction_rank(rows: Sequence[Sequence[int | Fraction]]) -> int:
    """Rank of a matrix over the rationals."""
    mat = [[Fraction(x) for x in row] for row in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = mat[rank][col]
        mat[rank] = [x / inv for x in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[rank])]
        rank += 1
        if rank == len(mat):
            break
    return rank


def solve_in_basis(basis: Sequence[Sequence[int | Fraction]], target: Sequence[int | Fraction]) -> list[Fraction]:
    """Coordinates of `target` in the span of `basis` rows; errors if outside."""
    n = len(target)
    k = len(basis)
    a = [[Fraction(basis[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    pivots: list[int] = []
    row = 0
    for col in range(k):
        pivot = next((r for r in range(row, n) if a[r][col] != 0), None)
        if pivot is None:
            continue
        a[row], a[pivot] = a[pivot], a[row]
        inv = a[row][col]
        a[row] = [x / inv for x in a[row]]
        for r in range(n):
            if r != row and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
        pivots.append(col)
        row += 1
    coords = [Fraction(0)] * k
    for r, col in enumerate(pivots):
        coords[col] = a[r][k]
    for r in range(row, n):
        if a[r][k] != 0:
            raise InternalInvariantError("vector outside the lattice span")
    # Verify (also catches inconsistencies among pivot rows).
    for i in range(n):
        s = sum(coords[j] * Fraction(basis[j][i]) for j in range(k))
        if s != Fraction(target[i]):
            raise InternalInvariantError("vector outside the lattice span")
    return coords


def hermite_row_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Basis of the integer row lattice (row-style Hermite form, nonzero rows)."""
    mat = [list(map(int, r)) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    basis: list[list[int]] = []
    work = [list(r) for r in mat]
    col = 0
    while col < ncols and work:
        nz = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not nz:
            col += 1
            continue
        # Euclid on the leading column.
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            head = nz[0]
            out = [head]
            for r in nz[1:]:
                q = r[col] // head[col]
                reduced = [a - q * b for a, b in zip(r, head)]
                if reduced[col] != 0:
                    out.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            if len(out) == 1:
                break
            nz = out
        pivot = nz[0] if nz[0][col] > 0 else [-a for a in nz[0]]
        basis.append(pivot)
        work = [r for r in rest if any(r)]
        col += 1
    # Reduce entries above pivots for a canonical-ish form.
    for i in range(len(basis) - 1, -1, -1):
        lead = next(c for c in range(ncols) if basis[i][c] != 0)
        for j in range(i):
            q = basis[j][lead] // basis[i][lead]
            if q:
                basis[j] = [a - q * b for a, b in zip(basis[j], basis[i])]
    return basis


def diagonalize_with_saturation(rows: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]]]:
    """Diagonalize an integer matrix by row/column operations.

    Returns (divisors, saturation_basis): the nonzero diagonal entries (up to
    sign) and an integer basis of the saturation of the row lattice, i.e. of
    (Q-span of rows) ∩ Z^n. Column operations are tracked through the inverse
    of the accumulated right transform, whose leading rows form that basis.
    """
    mat = [list(map(int, r)) for r in rows]
    if not mat:
        return [], []
    nrows, ncols = len(mat), len(mat[0])
    w = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_op(i: int, j: int, k: int) -> None:
        # col_j += k * col_i  on mat; row_i -= k * row_j on w = V^{-1}.
        for r in range(nrows):
            mat[r][j] += k * mat[r][i]
        w[i] = [a - k * b for a, b in zip(w[i], w[j])]

    def col_swap(i: int, j: int) -> None:
        for r in range(nrows):
            mat[r][i], mat[r][j] = mat[r][j], mat[r][i]
        w[i], w[j] = w[j], w[i]

    divisors: list[int] = []
    k = 0
    while k < min(nrows, ncols):
        # Find a pivot in the trailing submatrix.
        pivot = None
        for r in range(k, nrows):
            for c in range(k, ncols):
                if mat[r][c] != 0:
                    if pivot is None or abs(mat[r][c]) < abs(mat[pivot[0]][pivot[1]]):
                        pivot = (r, c)
        if pivot is None:
            break
        pr, pc = pivot
        mat[k], mat[pr] = mat[pr], mat[k]
        if pc != k:
            col_swap(k, pc)
        while True:
            # Clear column k below the pivot with row ops.
            dirty = False
            for r in range(k + 1, nrows):
                if mat[r][k] != 0:
                    q = mat[r][k] // mat[k][k]
                    mat[r] = [a - q * b for a, b in zip(mat[r], mat[k])]
                    if mat[r][k] != 0:
                        mat[k], mat[r] = mat[r], mat[k]
                        dirty = True
            # Clear row k to the right of the pivot with column ops.
            for c in range(k + 1, ncols):
                if mat[k][c] != 0:
                    q = mat[k][c] // mat[k][k]
                    col_op(k, c, -q)
                    if mat[k][c] != 0:
                        col_swap(k, c)
                        dirty = True
            if not dirty:
                break
        divisors.append(abs(mat[k][k]))
        k += 1
    saturation = [w[i] for i in range(len(divisors))]
    return divisors, saturation


def lattice_index(rows: Sequence[Sequence[int]]) -> int:
    """Index of the row lattice inside its saturation (Z^n ∩ Q-span)."""
    divisors, _ = diagonalize_with_saturation(rows)
    idx = 1
    for d in divisors:
        idx *= d
    return idx if idx else 1


def int_kernel_basis(vec: Sequence[int]) -> list[list[int]]:
    """Basis of the integer kernel {c : sum c_i vec_i = 0}."""
    n = len(vec)
    if n == 0:
        return []
    # Column ops only; track the transform V: the kernel of vec is V applied
    # to the kernel of the reduced (single nonzero entry) vector.
    mat = [list(map(int, vec))]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_op(i: int, j: int, k: int) -> None:
        mat[0][j] += k * mat[0][i]
        for r in range(n):
            v[r][j] += k * v[r][i]

    def col_swap(i: int, j: int) -> None:
        mat[0][i], mat[0][j] = mat[0][j], mat[0][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    # Euclid across columns until a single nonzero remains at position 0.
    while True:
        nz = [c for c in range(n) if mat[0][c] != 0]
        if not nz:
            break
        lead = min(nz, key=lambda c: abs(mat[0][c]))
        if lead != 0:
            col_swap(0, lead)
        done = True
        for c in range(1, n):
            if mat[0][c] != 0:
                q = mat[0][c] // mat[0][0]
                col_op(0, c, -q)
                if mat[0][c] != 0:
                    done = False
        if done:
            break
    if mat[0][0] == 0:
        cols = range(n)
    else:
        cols = range(1, n)
    return [[v[r][c] for r in range(n)] for c in cols]


# -- exact convex hull volume -------------------------------------------------


def _det(mat: list[list[Fraction]]) -> Fraction:
    n = len(mat)
    a = [row[:] for row in mat]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = a[col][col]
        for r in range(col + 1, n):
            if a[r][col] != 0:
                f = a[r][col] / inv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return det


def _simplex_volume(verts: Sequence[Vec]) -> Fraction:
    dim = len(verts) - 1
    if dim == 0:
        return Fraction(1)
    base = verts[0]
    mat = [[v[i] - base[i] for i in range(dim)] for v in verts[1:]]
    return abs(_det(mat)) / factorial(dim)


def _affine_rank(points: Sequence[Vec]) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    rows = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return fraction_rank(rows)


def _hyperplane(face: Sequence[Vec], inner: Vec) -> tuple[Vec, Fraction]:
    """Normal and offset of the hyperplane through `face`, oriented away from
    `inner` (inner strictly below). `face` must be affinely independent."""
    dim = len(face[0])
    base = face[0]
    rows = [[p[i] - base[i] for i in range(dim)] for p in face[1:]]
    # Nullspace of rows (dimension 1 for a facet of a simplex).
    mat = [list(map(Fraction, r)) for r in rows]
    ncols = dim
    pivots: list[int] = []
    row = 0
    for col in range(ncols):
        pivot = next((r for r in range(row, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = mat[row][col]
        mat[row] = [x / inv for x in mat[row]]
        for r in range(len(mat)):
            if r != row and mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [x - f * y for x, y in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
    free = [c for c in range(ncols) if c not in pivots]
    if len(free) != 1:
        raise InternalInvariantError("degenerate facet in hull construction")
    f = free[0]
    normal = [Fraction(0)] * ncols
    normal[f] = Fraction(1)
    for r, col in enumerate(pivots):
        normal[col] = -mat[r][f]
    offset = sum(n * b for n, b in zip(normal, base))
    side = sum(n * x for n, x in zip(normal, inner))
    if side > offset:
        normal = [-n for n in normal]
        offset = -offset
    elif side == offset:
        raise InternalInvariantError("hyperplane orientation reference lies on the plane")
    return tuple(normal), offset


def convex_hull_volume(points: Sequence[Sequence[int | Fraction]]) -> tuple[Fraction, list[Vec]]:
    """Exact volume of the convex hull, full-dimensional in its ambient space.

    Returns (volume, boundary_vertices). Degenerate input (affine dimension
    below the ambient dimension) yields volume 0. Dimension 0 follows the
    0-dimensional convention vol = 1.

    Incremental placing construction: points are inserted in lexicographic
    order; each new point adds pyramids over the strictly visible boundary
    facets. Coplanar degeneracies only ever contribute zero-volume pieces, so
    the accumulated volume stays exact.
    """
    pts: list[Vec] = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    if not pts:
        return Fraction(0), []
    dim = len(pts[0])
    if dim == 0:
        return Fraction(1), [()]
    if _affine_rank(pts) < dim:
        return Fraction(0), pts
    if dim == 1:
        lo, hi = pts[0], pts[-1]
        return hi[0] - lo[0], [lo, hi]
    if dim == 2:
        hull = _hull_2d(pts)
        return _polygon_area(hull), hull

    # Initial simplex: greedy scan for dim+1 affinely independent points.
    simplex: list[Vec] = [pts[0]]
    for p in pts[1:]:
        if _affine_rank(simplex + [p]) == len(simplex):
            simplex.append(p)
        if len(simplex) == dim + 1:
            break
    volume = _simplex_volume(simplex)
    facets: dict[frozenset[Vec], tuple[Vec, Fraction]] = {}
    for drop in range(dim + 1):
        face = [v for i, v in enumerate(simplex) if i != drop]
        facets[frozenset(face)] = _hyperplane(face, simplex[drop])

    consumed = set(simplex)
    for p in pts:
        if p in consumed:
            continue
        visible = [
            fs for fs, (normal, offset) in facets.items()
            if sum(n * x for n, x in zip(normal, p)) > offset
        ]
        if not visible:
            continue
        ridge_count: dict[frozenset[Vec], int] = {}
        for fs in visible:
            volume += _simplex_volume([p] + list(fs))
            for v in fs:
                ridge = fs - {v}
                ridge_count[ridge] = ridge_count.get(ridge, 0) + 1
        for fs in visible:
            for v in fs:
                ridge = fs - {v}
                if ridge_count[ridge] == 1:
                    new_face = ridge | {p}
                    facets[frozenset(new_face)] = _hyperplane(list(new_face), v)
            del facets[fs]
        consumed.add(p)

    boundary = sorted({v for fs in facets for v in fs})
    return volume, boundary


def _hull_2d(pts: list[Vec]) -> list[Vec]:
    """Monotone chain; input sorted and deduplicated. Returns CCW vertices."""

    def cross(o: Vec, a: Vec, b: Vec) -> Fraction:
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    if len(pts) <= 2:
        return list(pts)
    lower: list[Vec] = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[Vec] = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _polygon_area(hull: list[Vec]) -> Fraction:
    if len(hull) < 3:
        return Fraction(0)
    area = Fraction(0)
    for i in range(len(hull)):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % len(hull)]
        area += x1 * y2 - x2 * y1
    return abs(area) / 2
