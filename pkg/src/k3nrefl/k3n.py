"""Lattice models of H^2 of a K3^[n]-type manifold and of the Mukai lattice.

Basis order shared by both models (0-based indices):

* 0..7    first E8(-1)
* 8..15   second E8(-1)
* 16..21  three hyperbolic planes U, each as (e_j, f_j) with (e_j, f_j) = 1
* 22      delta in the K3^[n] lattice, with (delta, delta) = 2 - 2n

The Mukai lattice replaces delta by a plane with Gram [[0,-1],[-1,0]]
holding the rank r (index 22) and the Euler coordinate s (index 23), so
that ((r,c,s), (r',c',s')) = (c,c') - r s' - s r'.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import kernels
from .lattice import (
    IntegralLattice,
    Isometry,
    LatticeVector,
    e8_negative,
    hyperbolic_plane,
    identity_matrix,
    is_primitive,
    orthogonal_sum,
    pairing,
    smith_normal_form,
    square,
    transpose,
)

NS_RANK = 22
DELTA = 22
RANK_INDEX = 22
EULER_INDEX = 23
U_OFFSET = 16


def u_index(j: int) -> tuple[int, int]:
    """Indices of (e_j, f_j) in the j-th hyperbolic plane, j = 0, 1, 2."""
    if j not in (0, 1, 2):
        raise ValueError("hyperbolic plane index must be 0, 1 or 2")
    return U_OFFSET + 2 * j, U_OFFSET + 2 * j + 1


def _frames(size: int, mukai_plane: bool) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Two positive frames: the orthogonal (e_j + f_j) frame and a skewed one."""

    def vec(entries):
        coords = [0] * size
        for idx, val in entries.items():
            coords[idx] = val
        return tuple(coords)

    (e1, f1), (e2, f2), (e3, f3) = (u_index(j) for j in range(3))
    plain = [vec({e1: 1, f1: 1}), vec({e2: 1, f2: 1}), vec({e3: 1, f3: 1})]
    skewed = [vec({e1: 1, f1: 2}), vec({e2: 1, f2: 3}), vec({e3: 1, f3: 1, e1: 1, f1: 2})]
    if mukai_plane:
        plain.append(vec({RANK_INDEX: 1, EULER_INDEX: -1}))
        skewed.append(vec({RANK_INDEX: 2, EULER_INDEX: -1, e1: 1}))
    return tuple(plain), tuple(skewed)


@lru_cache(maxsize=None)
def ns_lattice() -> IntegralLattice:
    """E8(-1)^2 + U^3, the common rank-22 block."""
    e8, u = e8_negative(), hyperbolic_plane()
    return orthogonal_sum(e8, e8, u, u, u, label="E8(-1)^2+U^3")


@dataclass(frozen=True)
class K3nLattice:
    n: int
    lattice: IntegralLattice

    @property
    def delta(self) -> LatticeVector:
        return self.lattice.basis_vector(DELTA)

    def vector(self, coords) -> LatticeVector:
        return self.lattice.vector(coords)

    def from_ns(self, c: LatticeVector, delta_coeff: int = 0) -> LatticeVector:
        return self.lattice.vector(c.coords + (delta_coeff,))


@lru_cache(maxsize=None)
def make_k3n(n: int) -> K3nLattice:
    if n < 2:
        raise ValueError("n must be at least 2")
    ns = ns_lattice()
    gram = [list(row) + [0] for row in ns.gram] + [[0] * NS_RANK + [2 - 2 * n]]
    lattice = IntegralLattice(gram, f"Lambda_{n}", _frames(NS_RANK + 1, False))
    return K3nLattice(n, lattice)


@lru_cache(maxsize=None)
def mukai_lattice() -> IntegralLattice:
    ns = ns_lattice()
    gram = [list(row) + [0, 0] for row in ns.gram]
    gram.append([0] * NS_RANK + [0, -1])
    gram.append([0] * NS_RANK + [-1, 0])
    lattice = IntegralLattice(gram, "Mukai", _frames(NS_RANK + 2, True))
    assert abs(lattice.det) == 1 and lattice.is_even
    return lattice


@dataclass(frozen=True)
class MukaiVector:
    r: int
    c: LatticeVector
    s: int

    def __post_init__(self):
        if self.c.lattice != ns_lattice():
            raise ValueError("c must live in the rank-22 NS model")

    @classmethod
    def of(cls, r: int, c=None, s: int = 0) -> MukaiVector:
        """Build from plain integers; c may be None (zero) or 22 coordinates."""
        ns = ns_lattice()
        c = ns.zero() if c is None else c if isinstance(c, LatticeVector) else ns.vector(c)
        return cls(int(r), c, int(s))

    @classmethod
    def from_lattice(cls, x: LatticeVector) -> MukaiVector:
        if x.lattice != mukai_lattice():
            raise ValueError("vector is not in the Mukai lattice")
        return cls(x.coords[RANK_INDEX], ns_lattice().vector(x.coords[:NS_RANK]), x.coords[EULER_INDEX])

    def to_lattice(self) -> LatticeVector:
        return mukai_lattice().vector(self.c.coords + (self.r, self.s))

    def __neg__(self) -> MukaiVector:
        return MukaiVector(-self.r, -self.c, -self.s)


def mukai_pairing(a: MukaiVector, b: MukaiVector) -> int:
    return pairing(a.c, b.c) - a.r * b.s - a.s * b.r


def mukai_vector(rank: int, c1: LatticeVector, chi: int) -> MukaiVector:
    """Mukai vector (rank, c1, chi - rank) of a sheaf with the given invariants."""
    return MukaiVector(rank, c1, chi - rank)


@dataclass(frozen=True)
class CanonicalEmbedding:
    n: int
    source: K3nLattice
    injection: tuple[tuple[int, ...], ...]  # 24 x 23, columns are images of basis vectors
    v: LatticeVector

    def embed(self, x: LatticeVector) -> LatticeVector:
        if x.lattice != self.source.lattice:
            raise ValueError("vector is not in the K3^[n] lattice")
        return mukai_lattice().vector(kernels.matvec(self.injection, x.coords))

    @property
    def v_mukai(self) -> MukaiVector:
        return MukaiVector.from_lattice(self.v)


def canonical_v(n: int) -> MukaiVector:
    return MukaiVector.of(1, None, 1 - n)


@lru_cache(maxsize=None)
def canonical_embedding(n: int) -> CanonicalEmbedding:
    """Identity on the NS block, delta -> (1, 0, n-1); complement v = (1, 0, 1-n)."""
    source = make_k3n(n)
    rows = [[int(i == j) for j in range(NS_RANK)] + [0] for i in range(NS_RANK)]
    rows.append([0] * NS_RANK + [1])
    rows.append([0] * NS_RANK + [n - 1])
    emb = CanonicalEmbedding(n, source, tuple(tuple(r) for r in rows), canonical_v(n).to_lattice())

    mukai = mukai_lattice()
    images = transpose(emb.injection)
    if kernels.matmul(kernels.matmul(images, mukai.gram), emb.injection) != source.lattice.gram:
        raise ArithmeticError("embedding is not isometric")
    if set(smith_normal_form(emb.injection)[0]) != {1}:
        raise ArithmeticError("embedding is not primitive")
    if square(emb.v) != 2 * n - 2 or any(kernels.bilinear(mukai.gram, emb.v.coords, col) for col in images):
        raise ArithmeticError("v does not generate the orthogonal complement")
    return emb


def theta_transport(emb: CanonicalEmbedding, m) -> LatticeVector:
    """The K3^[n] class whose image under the embedding is m (m must be orthogonal to v)."""
    x = m.to_lattice() if isinstance(m, MukaiVector) else m
    if x.lattice != mukai_lattice():
        raise ValueError("expected a Mukai lattice vector")
    if pairing(x, emb.v) != 0:
        raise ValueError("class is not orthogonal to v")
    r, s = x.coords[RANK_INDEX], x.coords[EULER_INDEX]
    # Orthogonality to (1, 0, 1-n) forces s = r (n-1), i.e. x = c + r * iota(delta).
    assert s == r * (emb.n - 1), "orthogonal class outside the image"
    y = emb.source.vector(x.coords[:NS_RANK] + (r,))
    assert emb.embed(y) == x
    return y


# --- moving an arbitrary v onto the canonical one -------------------------

def _unit(i: int, size: int = NS_RANK + 2, scale: int = 1) -> tuple[int, ...]:
    return tuple(scale if j == i else 0 for j in range(size))


def _axpy(k: int, a, x):
    return tuple(xi + k * ai for xi, ai in zip(x, a))


class _Transvections:
    """Accumulates Eichler transvections x -> x + (x,a)f - (x,f)a - (a,a)/2 (x,f) f.

    Each one is an isometry of an even lattice whenever f is isotropic and
    orthogonal to a.
    """

    def __init__(self, x):
        self.gram = mukai_lattice().gram
        self.x = tuple(x)
        self.cols = [_unit(i) for i in range(len(self.gram))]

    def pair(self, a, b) -> int:
        return kernels.bilinear(self.gram, a, b)

    def _apply(self, f, a, half_aa, y):
        yf, ya = self.pair(y, f), self.pair(y, a)
        if not (yf or ya):
            return y
        return _axpy(ya - half_aa * yf, f, _axpy(-yf, a, y))

    def apply(self, f, a):
        assert self.pair(f, f) == 0 and self.pair(f, a) == 0
        half_aa = self.pair(a, a) // 2
        self.x = self._apply(f, a, half_aa, self.x)
        self.cols = [self._apply(f, a, half_aa, c) for c in self.cols]

    def negate(self, indices):
        flip = lambda y: tuple(-c if i in indices else c for i, c in enumerate(y))
        self.x = flip(self.x)
        self.cols = [flip(c) for c in self.cols]


def isometry_to_canonical(v: MukaiVector | LatticeVector, n: int) -> Isometry:
    """An isometry of the Mukai lattice taking v to (1, 0, 1-n).

    v must be primitive with (v, v) = 2n - 2. By Eichler's criterion such an
    isometry exists; it is built from transvections by a Euclidean algorithm
    that first makes the pairing of v with f0 equal to 1 and then clears
    the rest.
    """
    x = v.to_lattice() if isinstance(v, MukaiVector) else v
    if square(x) != 2 * n - 2 or not is_primitive(x):
        raise ValueError("v must be primitive of square 2n-2")
    size = NS_RANK + 2
    e0 = _unit(RANK_INDEX, size)
    f0 = _unit(EULER_INDEX, size, -1)
    hyperbolic = [tuple(_unit(i, size) for i in u_index(j)) for j in range(3)]
    isotropic = [(p[0], p[1]) for p in hyperbolic] + [(p[1], p[0]) for p in hyperbolic]
    definite = [_unit(i, size) for i in range(16)]
    t = _Transvections(x.coords)

    def a0():
        return t.pair(t.x, f0)

    def reduce_against(w, partner):
        while True:
            a, c = a0(), t.pair(t.x, w)
            if c == 0:
                return
            if a == 0:
                t.apply(e0, w)  # (x, f0) becomes c
                continue
            q = c // a
            if q:
                t.apply(partner, tuple(-q * y for y in f0))  # (x, w) -= q (x, f0)
                c = t.pair(t.x, w)
                if c == 0:
                    return
            q = a // c
            t.apply(e0, tuple(-q * y for y in w))  # (x, f0) -= q (x, w)

    while True:
        while any((a0() == 0 and t.pair(t.x, w)) or (a0() and t.pair(t.x, w) % a0()) for w, _ in isotropic):
            for w, partner in isotropic:
                reduce_against(w, partner)
        a = a0()
        if a:
            for w, partner in isotropic:
                q = t.pair(t.x, w) // a
                if q:
                    t.apply(partner, tuple(-q * y for y in f0))
        if abs(a) == 1:
            break
        # All hyperbolic pairings now vanish; pull in (x, e0) or a definite pairing.
        e1, f1 = hyperbolic[0]
        b0 = t.pair(t.x, e0)
        if (b0 and not a) or (a and b0 % a):
            t.apply(e1, e0)
            continue
        m = next((m for m in definite if (a == 0 and t.pair(t.x, m)) or (a and t.pair(t.x, m) % a)), None)
        if m is None:
            raise ArithmeticError("v is not primitive")
        t.apply(e1, m)

    if a0() == -1:
        t.negate({RANK_INDEX, EULER_INDEX})
    y = tuple(0 if i in (RANK_INDEX, EULER_INDEX) else c for i, c in enumerate(t.x))
    if any(y):
        t.apply(f0, y)
    target = canonical_v(n).to_lattice()
    if t.x != target.coords:
        raise ArithmeticError("transvection algorithm did not reach the canonical vector")
    g = Isometry(mukai_lattice(), transpose(t.cols))
    assert g(x) == target
    return g


def transport_class(v: MukaiVector, m: MukaiVector, n: int) -> LatticeVector:
    """The K3^[n] class of m in v-perp, moved into the canonical frame."""
    if mukai_pairing(v, m) != 0:
        raise ValueError("class is not orthogonal to v")
    g = isometry_to_canonical(v, n)
    return theta_transport(canonical_embedding(n), g(m.to_lattice()))


# --- standard NS classes ---------------------------------------------------

def ns_isotropic(j: int = 0) -> LatticeVector:
    """The isotropic primitive class e_j of the j-th hyperbolic plane."""
    return ns_lattice().basis_vector(u_index(j)[0])


def ns_class_of_square(sq: int, j: int = 0) -> LatticeVector:
    """The primitive class e_j + (sq/2) f_j, of square sq (sq even)."""
    if sq % 2:
        raise ValueError("square must be even")
    e, f = u_index(j)
    coords = [0] * NS_RANK
    coords[e], coords[f] = 1, sq // 2
    return ns_lattice().vector(coords)
