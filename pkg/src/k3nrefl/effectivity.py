"""Predicted effectivity of reflective classes and the prime-exceptional multiplier.

A reflective class e is numerically exceptional when its degree,
divisibility and rs pair fall in a short list of cases. Such classes have a
multiple k*e (k = 1 or 2) represented by a prime exceptional divisor;
all other reflective classes are predicted not to be Q-effective.

The lattice model has no Kaehler cone, so every invariant here is the same
for e and -e. Effectivity statements attach to exactly one of the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .k3n import CanonicalEmbedding
from .lattice import LatticeVector, content, divisibility, square
from .monodromy import is_monodromy_reflective
from .rs import RSInvariant, rs_closed_form


class Verdict(str, Enum):
    PRIME_EXCEPTIONAL = "PrimeExceptionalPredicted"
    NOT_Q_EFFECTIVE = "NotQEffectivePredicted"
    NOT_REFLECTIVE = "NotReflective"


@dataclass(frozen=True)
class ClassificationReport:
    n: int
    degree: int
    divisibility: int
    primitive: bool
    monodromy_reflective: bool
    rs: RSInvariant | None
    numerically_exceptional: bool
    k: int | None
    divisor_multiplicity: str | None
    dual_multiplicity: str | None
    chi_L: int
    chi_L2: int
    verdict: Verdict
    reason: str


def _rs_defined(e: LatticeVector, emb: CanonicalEmbedding) -> bool:
    n = emb.n
    return (
        content(e) == 1
        and square(e) == 2 - 2 * n
        and divisibility(e) in (n - 1, 2 * n - 2)
    )


def _check_negative_primitive(e: LatticeVector):
    if content(e) != 1:
        raise ValueError("class is not primitive")
    if square(e) >= 0:
        raise ValueError("class is not negative")


def numerically_exceptional(e: LatticeVector, emb: CanonicalEmbedding) -> bool:
    _check_negative_primitive(e)
    n, ee = emb.n, square(e)
    if ee == -2:
        return True
    if ee != 2 - 2 * n or n <= 2 or not _rs_defined(e, emb):
        return False
    div = divisibility(e)
    pair = rs_closed_form(e, emb).pair
    if div == 2 * n - 2:
        return pair == (1, n - 1) or ((n - 1) % 2 == 0 and pair == tuple(sorted((2, (n - 1) // 2))))
    if n % 2 == 0:
        return pair == (1, n - 1)
    return pair == (1, (n - 1) // 2)


def multiplier_k(e: LatticeVector, emb: CanonicalEmbedding) -> int:
    if not numerically_exceptional(e, emb):
        raise ValueError("class is not numerically exceptional")
    n, ee, div = emb.n, square(e), divisibility(e)
    if ee == -2:
        return 2 if div == 2 and n == 2 else 1
    if div == 2 * n - 2:
        # At n = 3 the pairs {1, n-1} and {2, (n-1)/2} coincide; the first rule wins.
        return 2 if rs_closed_form(e, emb).pair == (1, n - 1) else 1
    return 1


def divisor_multiplicities(e: LatticeVector, k: int) -> tuple[str, str]:
    """How the divisor class [E] = k e and its dual relate to e and e-dual."""
    if k not in (1, 2):
        raise ValueError("k must be 1 or 2")
    ee, div = square(e), divisibility(e)
    if 2 * div == -ee:
        if k != 1:
            raise ValueError(f"k=2 is impossible when div = -(e,e)/2 = {div}")
        return "[E]=e", "[E]^v=e^v"
    if div == -ee:
        return ("[E]=2e", "[E]^v=e^v") if k == 2 else ("[E]=e", "[E]^v=2e^v")
    raise ValueError(f"divisibility {div} is incompatible with degree {ee}")


def euler_characteristic(n: int, alpha_square: int) -> int:
    """Binomial (m choose n) with m = alpha_square/2 + n + 1, allowing negative m."""
    if n < 2 or alpha_square % 2:
        raise ValueError("need n >= 2 and an even square")
    m = alpha_square // 2 + n + 1
    return math.prod(range(m - n + 1, m + 1)) // math.factorial(n)


def classify(e: LatticeVector, emb: CanonicalEmbedding) -> ClassificationReport:
    if e.is_zero():
        raise ValueError("zero class")
    if e.lattice != emb.source.lattice:
        raise ValueError("class does not belong to the embedding's K3^[n] lattice")
    n, ee, div = emb.n, square(e), divisibility(e)
    primitive = content(e) == 1
    if not primitive:
        reflective, reason = False, "class is not primitive"
    elif ee >= 0:
        reflective, reason = False, "class is not negative"
    else:
        refl = is_monodromy_reflective(e)
        reflective, reason = refl.value, refl.reason

    rs = rs_closed_form(e, emb) if _rs_defined(e, emb) else None
    exceptional = reflective and numerically_exceptional(e, emb)
    k = multiplier_k(e, emb) if exceptional else None
    mult, dual = divisor_multiplicities(e, k) if k else (None, None)
    if not reflective:
        verdict = Verdict.NOT_REFLECTIVE
    elif exceptional:
        verdict = Verdict.PRIME_EXCEPTIONAL
    else:
        verdict = Verdict.NOT_Q_EFFECTIVE
    return ClassificationReport(
        n=n,
        degree=ee,
        divisibility=div,
        primitive=primitive,
        monodromy_reflective=reflective,
        rs=rs,
        numerically_exceptional=exceptional,
        k=k,
        divisor_multiplicity=mult,
        dual_multiplicity=dual,
        chi_L=euler_characteristic(n, ee),
        chi_L2=euler_characteristic(n, 4 * ee),
        verdict=verdict,
        reason=reason,
    )
