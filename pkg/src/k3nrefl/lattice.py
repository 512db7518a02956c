"""Exact arithmetic on integral lattices.

A lattice is an integer Gram matrix in a fixed basis. Vectors are integer
(or rational) coordinate tuples in that basis, and isometries are integer
matrices acting on column coordinate vectors. Nothing here uses floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import kernels

Matrix = tuple[tuple[int, ...], ...]


def _as_matrix(rows) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in rows)


def identity_matrix(size: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(size)) for i in range(size))


def transpose(m):
    return tuple(zip(*m))


def determinant(m) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    a = [list(row) for row in m]
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign, prev = 1, 1
    for k in range(size - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, size) if a[i][k]), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
        prev = pivot
    return sign * a[-1][-1] if size else 1


def smith_normal_form(m) -> tuple[tuple[int, ...], Matrix, Matrix]:
    """Smith normal form with transforms.

    Returns ``(divisors, left, right)`` where ``left @ m @ right`` is the
    diagonal matrix with the nonnegative elementary divisors on its
    diagonal (each dividing the next) and ``left``, ``right`` are
    unimodular. Only nonzero divisors are listed.
    """
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    left = [list(r) for r in identity_matrix(rows)]
    right = [list(r) for r in identity_matrix(cols)]

    def row_add(dst, src, q):  # row_dst -= q * row_src
        a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
        left[dst] = [x - q * y for x, y in zip(left[dst], left[src])]

    def col_add(dst, src, q):  # col_dst -= q * col_src
        for mat in (a, right):
            for row in mat:
                row[dst] -= q * row[src]

    divisors = []
    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
            if not entries:
                return tuple(divisors), _as_matrix(left), _as_matrix(right)
            _, pi, pj = min(entries)
            a[t], a[pi] = a[pi], a[t]
            left[t], left[pi] = left[pi], left[t]
            for mat in (a, right):
                for row in mat:
                    row[t], row[pj] = row[pj], row[t]
            pivot = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    row_add(i, t, a[i][t] // pivot)
            for j in range(t + 1, cols):
                if a[t][j]:
                    col_add(j, t, a[t][j] // pivot)
            if any(a[i][t] for i in range(t + 1, rows)) or any(a[t][j] for j in range(t + 1, cols)):
                continue
            bad = next((i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % pivot), None)
            if bad is None:
                break
            row_add(t, bad, -1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            left[t] = [-x for x in left[t]]
        divisors.append(a[t][t])
    return tuple(divisors), _as_matrix(left), _as_matrix(right)


def integer_kernel(rows) -> Matrix:
    """A basis (as rows) of the integer vectors x with ``rows @ x = 0``."""
    divisors, _, right = smith_normal_form(rows)
    cols = transpose(right)
    return tuple(tuple(c) for c in cols[len(divisors):])


def solve_rational_many(rows, targets) -> list[tuple[Fraction, ...] | None]:
    """For each target, coefficients c with ``sum c_i rows[i] = target`` (or None)."""
    k = len(rows)
    ntargets = len(targets)
    # One equation per coordinate; unknowns are the row coefficients.
    aug = [
        [Fraction(r[j]) for r in rows] + [Fraction(t[j]) for t in targets]
        for j in range(len(rows[0]))
    ]
    pivots = []
    row = 0
    for col in range(k):
        piv = next((i for i in range(row, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [x * inv for x in aug[row]]
        for i in range(len(aug)):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    out = []
    for t in range(ntargets):
        if any(r[k + t] for r in aug[row:]):
            out.append(None)
            continue
        coeffs = [Fraction(0)] * k
        for i, col in enumerate(pivots):
            coeffs[col] = aug[i][k + t]
        out.append(tuple(coeffs))
    return out


def solve_rational(rows, target) -> tuple[Fraction, ...] | None:
    """Coefficients c with ``sum c_i rows[i] = target``, or None if none exist."""
    return solve_rational_many(rows, [target])[0]


@dataclass(frozen=True)
class IntegralLattice:
    gram: Matrix
    label: str = ""
    positive_frames: tuple[Matrix, ...] = ()
    det: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        gram = _as_matrix(self.gram)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "positive_frames", tuple(_as_matrix(f) for f in self.positive_frames))
        if any(len(row) != len(gram) for row in gram) or not gram:
            raise ValueError("Gram matrix must be square and nonempty")
        if gram != transpose(gram):
            raise ValueError("Gram matrix must be symmetric")
        det = determinant(gram)
        if det == 0:
            raise ValueError("Gram matrix is degenerate")
        object.__setattr__(self, "det", det)

    @property
    def rank(self) -> int:
        return len(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def vector(self, coords) -> LatticeVector:
        return LatticeVector(self, coords)

    def basis_vector(self, i: int) -> LatticeVector:
        return LatticeVector(self, tuple(int(i == j) for j in range(self.rank)))

    def zero(self) -> LatticeVector:
        return LatticeVector(self, (0,) * self.rank)


def orthogonal_sum(*parts: IntegralLattice, label: str = "") -> IntegralLattice:
    size = sum(p.rank for p in parts)
    gram = [[0] * size for _ in range(size)]
    offset = 0
    for p in parts:
        for i, row in enumerate(p.gram):
            gram[offset + i][offset:offset + p.rank] = row
        offset += p.rank
    return IntegralLattice(gram, label or " + ".join(p.label for p in parts))


# Negative of the E8 Cartan matrix (Bourbaki labelling): even, unimodular,
# negative definite.
_E8_EDGES = ((0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7))


def e8_negative() -> IntegralLattice:
    gram = [[-2 if i == j else 0 for j in range(8)] for i in range(8)]
    for i, j in _E8_EDGES:
        gram[i][j] = gram[j][i] = 1
    return IntegralLattice(gram, "E8(-1)")


def hyperbolic_plane(scale: int = 1) -> IntegralLattice:
    return IntegralLattice(((0, scale), (scale, 0)), "U" if scale == 1 else f"U({scale})")


def rank_one(value: int, label: str = "") -> IntegralLattice:
    return IntegralLattice(((value,),), label or f"<{value}>")


@dataclass(frozen=True)
class LatticeVector:
    lattice: IntegralLattice
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.lattice.rank:
            raise ValueError(f"expected {self.lattice.rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def _check(self, other: LatticeVector):
        if other.lattice != self.lattice:
            raise ValueError("vectors belong to different lattices")

    def __add__(self, other: LatticeVector) -> LatticeVector:
        self._check(other)
        return LatticeVector(self.lattice, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: LatticeVector) -> LatticeVector:
        self._check(other)
        return LatticeVector(self.lattice, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> LatticeVector:
        return LatticeVector(self.lattice, tuple(-a for a in self.coords))

    def __mul__(self, k: int) -> LatticeVector:
        return LatticeVector(self.lattice, tuple(k * a for a in self.coords))

    __rmul__ = __mul__

    def exact_div(self, k: int) -> LatticeVector:
        """Divide every coordinate by k, which must divide them all."""
        if any(c % k for c in self.coords):
            raise ValueError(f"vector is not divisible by {k}")
        return LatticeVector(self.lattice, tuple(c // k for c in self.coords))

    def is_zero(self) -> bool:
        return not any(self.coords)


@dataclass(frozen=True)
class RationalVector:
    lattice: IntegralLattice
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != self.lattice.rank:
            raise ValueError(f"expected {self.lattice.rank} coordinates, got {len(coords)}")
        object.__setattr__(self, "coords", coords)

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def to_integral(self) -> LatticeVector:
        if not self.is_integral():
            raise ValueError("vector has non-integral coordinates")
        return LatticeVector(self.lattice, tuple(int(c) for c in self.coords))

    def scaled(self, k) -> RationalVector:
        return RationalVector(self.lattice, tuple(k * c for c in self.coords))


@dataclass(frozen=True)
class Isometry:
    lattice: IntegralLattice
    matrix: Matrix

    def __post_init__(self):
        matrix = _as_matrix(self.matrix)
        object.__setattr__(self, "matrix", matrix)
        if len(matrix) != self.lattice.rank or any(len(r) != self.lattice.rank for r in matrix):
            raise ValueError("isometry matrix has the wrong shape")
        if not kernels.is_isometry(matrix, self.lattice.gram):
            raise ValueError("matrix does not preserve the Gram form")

    def __call__(self, x: LatticeVector) -> LatticeVector:
        if x.lattice != self.lattice:
            raise ValueError("vector belongs to a different lattice")
        return LatticeVector(self.lattice, kernels.matvec(self.matrix, x.coords))

    def compose(self, other: Isometry) -> Isometry:
        """self after other."""
        if other.lattice != self.lattice:
            raise ValueError("isometries act on different lattices")
        return Isometry(self.lattice, kernels.matmul(self.matrix, other.matrix))

    def inverse(self) -> Isometry:
        # g^{-1} = G^{-1} g^T G; computed exactly, then checked integral.
        gram = self.lattice.gram
        gtg = kernels.matmul(transpose(self.matrix), gram)
        inv = transpose(solve_rational_many(gram, transpose(gtg)))
        if any(x.denominator != 1 for row in inv for x in row):
            raise ArithmeticError("inverse of an isometry is not integral")
        return Isometry(self.lattice, tuple(tuple(int(x) for x in row) for row in inv))

    @classmethod
    def identity(cls, lattice: IntegralLattice) -> Isometry:
        return cls(lattice, identity_matrix(lattice.rank))


def pairing(x: LatticeVector, y: LatticeVector) -> int:
    if x.lattice != y.lattice:
        raise ValueError("vectors belong to different lattices")
    return kernels.bilinear(x.lattice.gram, x.coords, y.coords)


def square(x: LatticeVector) -> int:
    return pairing(x, x)


def content(x: LatticeVector) -> int:
    return math.gcd(*x.coords)


def is_primitive(x: LatticeVector) -> bool:
    return content(x) == 1


def dual_coordinates(e: LatticeVector) -> tuple[int, ...]:
    """The pairings (e, b_i) with the basis vectors."""
    return kernels.matvec(e.lattice.gram, e.coords)


def divisibility(e: LatticeVector) -> int:
    if e.is_zero():
        raise ValueError("divisibility of the zero vector")
    return math.gcd(*dual_coordinates(e))


@dataclass(frozen=True)
class Reflection:
    axis: LatticeVector
    matrix: tuple[tuple[Fraction, ...], ...]
    integral: bool

    def isometry(self) -> Isometry:
        if not self.integral:
            raise ValueError("reflection is not integral")
        return Isometry(self.axis.lattice, tuple(tuple(int(x) for x in row) for row in self.matrix))


def reflection(e: LatticeVector) -> Reflection:
    """Matrix of x -> x - 2 (x,e)/(e,e) e, with exact rational entries."""
    ee = square(e)
    if ee == 0:
        raise ValueError("cannot reflect in an isotropic vector")
    ge = dual_coordinates(e)
    matrix = tuple(
        tuple(Fraction(int(i == j) * ee - 2 * ei * gj, ee) for j, gj in enumerate(ge))
        for i, ei in enumerate(e.coords)
    )
    integral = all(x.denominator == 1 for row in matrix for x in row)
    return Reflection(e, matrix, integral)


def reflection_isometry(e: LatticeVector) -> Isometry:
    """The reflection in e as an integer isometry; raises if it is not integral."""
    ee = square(e)
    if ee == 0:
        raise ValueError("cannot reflect in an isotropic vector")
    ge = dual_coordinates(e)
    rows = []
    for i, ei in enumerate(e.coords):
        row = []
        for j, gj in enumerate(ge):
            num = int(i == j) * ee - 2 * ei * gj
            if num % ee:
                raise ValueError("reflection is not integral")
            row.append(num // ee)
        rows.append(tuple(row))
    return Isometry(e.lattice, tuple(rows))


def reflect(e: LatticeVector, x: LatticeVector) -> RationalVector:
    """Image of x under the reflection in e."""
    factor = Fraction(2 * pairing(x, e), square(e))
    return RationalVector(x.lattice, tuple(a - factor * b for a, b in zip(x.coords, e.coords)))


def is_orientation_preserving(g: Isometry, frame: int = 0) -> bool:
    """Whether g preserves the orientation of positive definite subspaces.

    Uses the sign of det[(p_i, g p_j)] for a stored positive frame p.
    """
    frames = g.lattice.positive_frames
    if not frames:
        raise ValueError(f"lattice {g.lattice.label!r} has no positive reference frame")
    p = frames[frame]
    gram = g.lattice.gram
    images = [kernels.matvec(g.matrix, pj) for pj in p]
    det = determinant([[kernels.bilinear(gram, pi, gpj) for gpj in images] for pi in p])
    if det == 0:
        raise ArithmeticError("degenerate frame determinant")
    return det > 0


def discriminant_order(lattice: IntegralLattice) -> int:
    return abs(lattice.det)


def saturate(ambient: IntegralLattice, generators: Sequence[LatticeVector]) -> Matrix:
    """Basis (rows) of the primitive closure of a rank-2 span in ``ambient``.

    Uses the Smith form ``L B R = D``: row i of ``L B`` is divisible by the
    i-th divisor and the quotients span all lattice points of the rational
    span. The result is re-certified to have divisors (1, 1).
    """
    if abs(ambient.det) != 1:
        raise ValueError("saturation requires a unimodular ambient lattice")
    if any(g.lattice != ambient for g in generators):
        raise ValueError("generators do not belong to the ambient lattice")
    rows = [g.coords for g in generators]
    divisors, left, _ = smith_normal_form(rows)
    if len(divisors) != 2:
        raise ValueError(f"generators span a rank-{len(divisors)} subspace, expected 2")
    lb = kernels.matmul(left, rows)
    basis = tuple(tuple(x // d for x in lb[i]) for i, d in enumerate(divisors))
    if any(x % d for i, d in enumerate(divisors) for x in lb[i]):
        raise ArithmeticError("Smith form rows are not divisible by their divisors")
    if smith_normal_form(basis)[0] != (1, 1):
        raise ArithmeticError("saturated basis is not primitive")
    return basis


@dataclass(frozen=True)
class Rank2Type:
    tag: str
    canonical_gram: Matrix


M_U: Matrix = ((0, -1), (-1, 0))
M_U2: Matrix = ((0, -2), (-2, 0))
M_HEV: Matrix = ((2, 0), (0, -2))

TYPE_U = Rank2Type("U", M_U)
TYPE_U2 = Rank2Type("U2", M_U2)
TYPE_HEV = Rank2Type("Hev", M_HEV)
RANK2_TYPES = {t.tag: t for t in (TYPE_U, TYPE_U2, TYPE_HEV)}


def classify_rank2_even(gram) -> Rank2Type:
    """Isometry class of an even rank-2 lattice of determinant -1 or -4."""
    (a, b), (b2, c) = _as_matrix(gram)
    if b != b2:
        raise ValueError("Gram matrix must be symmetric")
    if a % 2 or c % 2:
        raise ValueError("lattice is not even")
    det = a * c - b * b
    if det == -1:
        return TYPE_U
    if det == -4:
        values = (a, c, a + 2 * b + c)
        return TYPE_U2 if all(q % 4 == 0 for q in values) else TYPE_HEV
    raise ValueError(f"determinant {det} is not -1 or -4")


def gram_of(lattice: IntegralLattice, rows) -> Matrix:
    return tuple(tuple(kernels.bilinear(lattice.gram, x, y) for y in rows) for x in rows)
