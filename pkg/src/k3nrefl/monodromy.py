"""Monodromy group membership and the reflective-class predicate.

An isometry of the K3^[n] lattice is a monodromy operator exactly when it
preserves the orientation of positive 3-planes and acts as +1 or -1 on the
discriminant group, which is cyclic of order 2n-2 and generated by
delta / (2n-2).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .k3n import DELTA, K3nLattice, make_k3n, u_index
from .lattice import (
    Isometry,
    LatticeVector,
    content,
    divisibility,
    is_orientation_preserving,
    reflection_isometry,
    square,
)


@dataclass(frozen=True)
class DiscriminantAction:
    multiplier: int
    modulus: int


@dataclass(frozen=True)
class MonodromyVerdict:
    in_O_plus: bool
    discriminant_multiplier: int
    in_Mon2: bool


def _k3n_degree(g: Isometry) -> int:
    """Recover n from the Gram matrix of a K3^[n] lattice."""
    lat = g.lattice
    if lat.rank != 23:
        raise ValueError("expected an isometry of the rank-23 K3^[n] lattice")
    n = (2 - lat.gram[DELTA][DELTA]) // 2
    if make_k3n(n).lattice != lat:
        raise ValueError("lattice is not a K3^[n] lattice")
    return n


def _solve_congruences(equations, modulus: int) -> int | None:
    """Smallest m >= 0 with a*m = b (mod modulus) for every (a, b), if unique mod modulus."""
    m0, step = 0, 1  # solutions are m0 + step * t
    for a, b in equations:
        coeff = a * step
        rhs = b - a * m0
        g = math.gcd(coeff, modulus)
        if rhs % g:
            return None
        if g == modulus:
            continue
        reduced = modulus // g
        t0 = (rhs // g) * pow(coeff // g, -1, reduced) % reduced
        m0 += step * t0
        step = math.gcd(step * reduced, modulus)
    if step % modulus:
        return None
    return m0 % modulus


def discriminant_action(g: Isometry) -> DiscriminantAction:
    """The residue m with g(delta) = m delta modulo (2n-2) times the lattice."""
    n = _k3n_degree(g)
    modulus = 2 * n - 2
    image = tuple(row[DELTA] for row in g.matrix)
    equations = [(int(j == DELTA), c) for j, c in enumerate(image)]
    m = _solve_congruences(equations, modulus)
    assert m is not None, "isometry does not preserve the discriminant group"
    assert math.gcd(m, modulus) == 1
    return DiscriminantAction(m, modulus)


def mon2_membership(g: Isometry) -> MonodromyVerdict:
    orient = is_orientation_preserving(g)
    action = discriminant_action(g)
    m, mod = action.multiplier, action.modulus
    plus_minus_one = (m - 1) % mod == 0 or (m + 1) % mod == 0
    return MonodromyVerdict(orient, m, orient and plus_minus_one)


@dataclass(frozen=True)
class Reflectivity:
    value: bool
    reason: str

    def __bool__(self) -> bool:
        return self.value


def is_monodromy_reflective(e: LatticeVector) -> Reflectivity:
    """Degree -2, or degree 2-2n with n-1 dividing the divisibility."""
    n = (2 - e.lattice.gram[DELTA][DELTA]) // 2
    if content(e) != 1:
        raise ValueError("class is not primitive")
    ee = square(e)
    if ee >= 0:
        raise ValueError("class is not negative")
    if ee == -2:
        return Reflectivity(True, "degree -2")
    div = divisibility(e)
    if ee == 2 - 2 * n:
        if div % (n - 1) == 0:
            return Reflectivity(True, f"degree 2-2n with divisibility {div}")
        return Reflectivity(False, f"degree 2-2n but divisibility {div} is not a multiple of n-1")
    return Reflectivity(False, f"degree {ee} is neither -2 nor 2-2n")


@dataclass(frozen=True)
class Step1Record:
    """Congruence conditions for e = x a + y delta to have a monodromy reflection."""

    degree: int
    coprime: bool
    x_condition: bool
    y_condition: bool
    y_prime: Fraction
    y_prime_condition: bool

    @property
    def all_hold(self) -> bool:
        return self.coprime and self.x_condition and self.y_condition and self.y_prime_condition


def step1_constraints(n: int, x: int, y: int, a_square: int) -> Step1Record:
    if math.gcd(x, y) != 1:
        raise ValueError("x and y must be coprime")
    ee = x * x * a_square + (2 - 2 * n) * y * y
    if ee >= 0:
        raise ValueError("class is not negative")
    x_ok = (2 * x) % ee == 0
    y_ok = (4 * y * (n - 1)) % ee == 0
    y_prime = 1 - Fraction(4 * y * y * (1 - n), ee)
    mod = 2 * n - 2
    yp_ok = y_prime.denominator == 1 and ((y_prime - 1) % mod == 0 or (y_prime + 1) % mod == 0)
    return Step1Record(ee, True, x_ok, y_ok, y_prime, yp_ok)


# --- random monodromy ------------------------------------------------------

def random_minus2_class(k3n: K3nLattice, rng: random.Random) -> LatticeVector:
    """A primitive class of square -2, drawn from a few families that mix the blocks."""
    coords = [0] * 23
    kind = rng.randrange(3)
    if kind == 0:
        # (a, b, c, d) in U + U with ab + cd = -1
        j1, j2 = rng.sample(range(3), 2)
        while True:
            a, b, c = (rng.randint(-3, 3) for _ in range(3))
            rest = -1 - a * b
            if c == 0 and rest == 0:
                d = rng.randint(-3, 3)
                break
            if c and rest % c == 0:
                d = rest // c
                break
        (e1, f1), (e2, f2) = u_index(j1), u_index(j2)
        coords[e1], coords[f1], coords[e2], coords[f2] = a, b, c, d
    elif kind == 1:
        # E8 root plus an isotropic vector
        coords[rng.randrange(16)] = rng.choice((1, -1))
        coords[u_index(rng.randrange(3))[1]] = rng.randint(-2, 2)
    else:
        # e_j + (y^2 (n-1) - 1) f_j + y delta
        y = rng.choice((1, -1, 2, -2))
        e, f = u_index(rng.randrange(3))
        coords[e], coords[f], coords[DELTA] = 1, y * y * (k3n.n - 1) - 1, y
    u = k3n.vector(coords)
    assert square(u) == -2 and content(u) == 1
    return u


def random_monodromy(n: int, seed: int, length: int) -> Isometry:
    """A product of `length` reflections in (-2)-classes, each possibly followed by R_delta."""
    if length < 1:
        raise ValueError("length must be positive")
    k3n = make_k3n(n)
    rng = random.Random(seed)
    r_delta = reflection_isometry(k3n.delta)
    g = Isometry.identity(k3n.lattice)
    for _ in range(length):
        factor = reflection_isometry(random_minus2_class(k3n, rng))
        if rng.random() < 0.5:
            factor = r_delta.compose(factor)
        assert mon2_membership(factor).in_Mon2
        g = g.compose(factor)
    return g


def embedding_orbit_count(n: int) -> int:
    """Number of orbits of primitive embeddings of the K3^[n] lattice into the Mukai lattice."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if n == 2:
        return 1
    from sympy import primefactors

    return 2 ** (len(primefactors(n - 1)) - 1)
