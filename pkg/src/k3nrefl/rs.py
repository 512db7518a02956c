"""The rs invariant of a reflective class of degree 2-2n.

Embed e into the Mukai lattice next to the generator v of the orthogonal
complement. rho and sigma are the contents of e+v and e-v. The rank-2
lattice spanned by e and v, once saturated, is one of U, U(2), H_ev; that
type together with rho and sigma determines an unordered coprime pair.

Two routes compute it: a closed form driven by divisibility and the parity
of n, and a structural one that saturates the span, classifies its Gram
matrix and rebuilds an explicit basis of the saturation from e and v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .k3n import CanonicalEmbedding, mukai_lattice
from .lattice import (
    TYPE_HEV,
    TYPE_U,
    TYPE_U2,
    LatticeVector,
    Matrix,
    Rank2Type,
    classify_rank2_even,
    content,
    determinant,
    divisibility,
    gram_of,
    saturate,
    solve_rational,
    square,
)


@dataclass(frozen=True)
class RSInvariant:
    """rho <= sigma: a monodromy acting by -1 on the discriminant swaps them."""

    rho: int
    sigma: int
    pair: tuple[int, int]  # sorted, r <= s
    lattice_type: Rank2Type
    rs_product: int


def _ordered(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a <= b else (b, a)


def _validated(e: LatticeVector, emb: CanonicalEmbedding) -> int:
    """Check the input is a primitive class of degree 2-2n with div n-1 or 2n-2; return div."""
    n = emb.n
    if e.lattice != emb.source.lattice:
        raise ValueError("class does not belong to the embedding's K3^[n] lattice")
    if content(e) != 1:
        raise ValueError("class is not primitive")
    if square(e) != 2 - 2 * n:
        raise ValueError(f"class has degree {square(e)}, expected {2 - 2 * n}")
    div = divisibility(e)
    if div not in (n - 1, 2 * n - 2):
        raise ValueError(f"divisibility {div} is neither n-1 nor 2n-2")
    return div


def rho_sigma(e: LatticeVector, emb: CanonicalEmbedding) -> tuple[int, int]:
    _validated(e, emb)
    x = emb.embed(e)
    rho, sigma = content(x + emb.v), content(x - emb.v)
    assert math.gcd(rho, sigma) in (1, 2)
    return rho, sigma


def rs_closed_form(e: LatticeVector, emb: CanonicalEmbedding) -> RSInvariant:
    n = emb.n
    div = _validated(e, emb)
    rho, sigma = rho_sigma(e, emb)
    prod = rho * sigma
    if div == 2 * n - 2:
        kind, halve, expected = TYPE_U, True, n - 1
    elif n % 2 == 0:
        kind, halve, expected = TYPE_HEV, False, n - 1
    elif prod == 2 * n - 2:
        kind, halve, expected = TYPE_U2, True, (n - 1) // 2
    elif n % 8 == 1 and prod == n - 1:
        kind, halve, expected = TYPE_HEV, True, (n - 1) // 4
    else:
        raise ArithmeticError(f"no table row for n={n}, div={div}, rho*sigma={prod}")
    r, s = (rho // 2, sigma // 2) if halve else (rho, sigma)
    if (halve and (rho % 2 or sigma % 2)) or r * s != expected:
        raise ArithmeticError(f"inconsistent rho={rho}, sigma={sigma} for {kind.tag}")
    return RSInvariant(*_ordered(rho, sigma), _ordered(r, s), kind, r * s)


@dataclass(frozen=True)
class SaturationData:
    basis: Matrix  # rows span the saturation of span(e, v)
    gram: Matrix
    lattice_type: Rank2Type
    alpha: LatticeVector
    beta: LatticeVector
    alpha_beta_gram: Matrix
    rho: int
    sigma: int


def _coefficients(basis: Matrix, x: LatticeVector) -> tuple[int, int]:
    coeffs = solve_rational(basis, x.coords)
    if coeffs is None or any(c.denominator != 1 for c in coeffs):
        raise ArithmeticError("vector is not in the saturated lattice")
    return tuple(int(c) for c in coeffs)


def _combine(terms) -> LatticeVector:
    """Sum of q * x over (q, x) with rational q; the result must be integral."""
    size = mukai_lattice().rank
    acc = [Fraction(0)] * size
    for q, x in terms:
        for i, c in enumerate(x.coords):
            acc[i] += q * c
    if any(c.denominator != 1 for c in acc):
        raise ArithmeticError("basis vector is not integral")
    return mukai_lattice().vector(int(c) for c in acc)


def saturation_data(e: LatticeVector, emb: CanonicalEmbedding) -> SaturationData:
    _validated(e, emb)
    mukai = mukai_lattice()
    x, v = emb.embed(e), emb.v
    basis = saturate(mukai, [x, v])
    gram = gram_of(mukai, basis)
    kind = classify_rank2_even(gram)

    # Contents measured inside the saturation, which is primitive in the ambient lattice.
    rho = math.gcd(*_coefficients(basis, x + v))
    sigma = math.gcd(*_coefficients(basis, x - v))
    g = math.gcd(rho, sigma)
    r, s = rho // g, sigma // g
    plus, minus = x + v, x - v
    if kind in (TYPE_U, TYPE_U2):
        if g != 2:
            raise ArithmeticError(f"{kind.tag} saturation needs gcd(rho, sigma) = 2")
        alpha = _combine([(Fraction(1, 2 * r), plus)])
        beta = _combine([(Fraction(1, 2 * s), minus)])
    else:
        # gcd 1 happens for even n, gcd 2 for n = 1 mod 8; scale by 1 or 2 accordingly.
        a, b = Fraction(1, 2 * g * r), Fraction(1, 2 * g * s)
        alpha = _combine([(a, plus), (-b, minus)])
        beta = _combine([(a, plus), (b, minus)])
    ab_gram = gram_of(mukai, [alpha.coords, beta.coords])
    if ab_gram != kind.canonical_gram:
        raise ArithmeticError(f"basis Gram {ab_gram} differs from the canonical {kind.tag} form")
    change = [_coefficients(basis, alpha), _coefficients(basis, beta)]
    if abs(determinant(change)) != 1:
        raise ArithmeticError("reconstructed basis does not span the saturation")
    return SaturationData(basis, gram, kind, alpha, beta, ab_gram, rho, sigma)


def rs_via_saturation(e: LatticeVector, emb: CanonicalEmbedding) -> RSInvariant:
    data = saturation_data(e, emb)
    g = math.gcd(data.rho, data.sigma)
    r, s = data.rho // g, data.sigma // g
    return RSInvariant(*_ordered(data.rho, data.sigma), _ordered(r, s), data.lattice_type, r * s)


def coprime_pairs(m: int) -> frozenset[tuple[int, int]]:
    """Unordered coprime pairs {r, s} with r * s = m, as sorted tuples."""
    return frozenset(
        (r, m // r) for r in range(1, math.isqrt(m) + 1) if m % r == 0 and math.gcd(r, m // r) == 1
    )


@dataclass(frozen=True)
class AdmissibleSet:
    pairs: frozenset[tuple[int, int]]

    def __contains__(self, pair) -> bool:
        return _ordered(*pair) in self.pairs


def admissible_rs(n: int, div: int) -> AdmissibleSet:
    if div == 2 * n - 2:
        return AdmissibleSet(coprime_pairs(n - 1))
    if div != n - 1:
        raise ValueError("divisibility must be n-1 or 2n-2")
    if n % 2 == 0:
        return AdmissibleSet(coprime_pairs(n - 1))
    pairs = coprime_pairs((n - 1) // 2)
    if n % 8 == 1:
        pairs |= coprime_pairs((n - 1) // 4)
    return AdmissibleSet(pairs)

