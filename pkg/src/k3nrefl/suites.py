"""Randomised cross-checks shared by the test-suite and the ``verify`` command.

Each suite compares two independent computations and records disagreements.
All randomness comes from an explicit seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import kernels
from .catalog import CatalogEntry
from .effectivity import classify
from .k3n import canonical_embedding, make_k3n, mukai_lattice, ns_lattice, u_index
from .lattice import (
    LatticeVector,
    content,
    gram_of,
    identity_matrix,
    reflection,
    saturate,
    smith_normal_form,
    square,
    transpose,
)
from .monodromy import is_monodromy_reflective, mon2_membership, random_minus2_class, random_monodromy
from .rs import rs_closed_form, rs_via_saturation


@dataclass
class SuiteResult:
    name: str
    trials: int = 0
    failures: int = 0
    details: list[str] = field(default_factory=list)

    def record(self, ok: bool, detail: str = ""):
        self.trials += 1
        if not ok:
            self.failures += 1
            if len(self.details) < 20:
                self.details.append(detail)


# --- generators -------------------------------------------------------------

def random_negative_class(n: int, rng: random.Random, bound: int = 4) -> LatticeVector:
    """A primitive class of negative square with coordinates in [-bound, bound].

    Half the draws are sparse uniform vectors; the rest are biased towards
    the interesting region (square -2 classes and x*a + y*delta with a in a
    hyperbolic plane), which uniform sampling almost never hits.
    """
    k3n = make_k3n(n)
    while True:
        coords = [0] * 23
        kind = rng.random()
        if kind < 0.5:
            for idx in rng.sample(range(23), rng.randint(1, 4)):
                coords[idx] = rng.choice([c for c in range(-bound, bound + 1) if c])
        elif kind < 0.75:
            coords = list(random_minus2_class(k3n, rng).coords)
            if coords[22] and n > 2:
                continue  # delta-touching (-2)-classes have large coordinates
        else:
            e, f = u_index(rng.randrange(3))
            x, y = rng.randint(-bound, bound), rng.randint(-bound, bound)
            coords[e], coords[f] = x, x * rng.randint(-bound, bound)
            coords[22] = y
            if rng.random() < 0.3:
                coords[rng.randrange(16)] = rng.randint(-bound, bound)
        if max(map(abs, coords)) > bound:
            continue
        vec = k3n.vector(coords)
        if content(vec) == 1 and square(vec) < 0:
            return vec


def random_reflective_class(n: int, rng: random.Random, scramble: bool = True) -> LatticeVector:
    """A class of degree 2-2n and divisibility n-1 or 2n-2, moved by a random monodromy."""
    k3n = make_k3n(n)
    big = rng.random() < 0.5
    scale = 2 * n - 2 if big else n - 1
    modulus = 4 * (n - 1) if big else n - 1
    while True:
        t = rng.randint(-6 * modulus, 6 * modulus)
        if (t * t - 1) % modulus == 0:
            break
    half_sq = (t * t - 1) // modulus  # (xi, xi) / 2
    e, f = u_index(rng.randrange(3))
    coords = [0] * 23
    coords[e], coords[f] = 1, half_sq
    if rng.random() < 0.5:
        # add an E8 root, compensated along f
        coords[rng.randrange(16)] = rng.choice((1, -1))
        coords[f] += 1
    xi = ns_lattice().vector(coords[:22])
    assert square(xi) == 2 * half_sq
    vec = k3n.from_ns(xi * scale, t)
    assert square(vec) == 2 - 2 * n and content(vec) == 1
    if scramble:
        g = random_monodromy(n, rng.randrange(2**32), rng.randint(1, 3))
        vec = g(vec)
    return vec


# --- suites -------------------------------------------------------------------

def reflectivity_fuzz(n_values, trials: int, seed: int) -> SuiteResult:
    """The degree/divisibility predicate against 'reflection integral and in Mon2'."""
    result = SuiteResult("reflectivity_fuzz")
    rng = random.Random(seed)
    for n in n_values:
        for _ in range(trials):
            e = random_negative_class(n, rng)
            predicted = is_monodromy_reflective(e).value
            refl = reflection(e)
            direct = refl.integral and mon2_membership(refl.isometry()).in_Mon2
            result.record(predicted == direct, f"n={n} e={e.coords} predicate={predicted} direct={direct}")
    return result


def rs_route_equivalence(n_values, trials: int, seed: int, entries=()) -> SuiteResult:
    """Closed-form rs against the saturation route on random classes and catalog entries."""
    result = SuiteResult("rs_route_equivalence")
    rng = random.Random(seed)
    cases = [(entry.n, entry.e, entry.name) for entry in entries]
    for n in n_values:
        cases += [(n, random_reflective_class(n, rng), f"random n={n}") for _ in range(trials)]
    for n, e, label in cases:
        emb = canonical_embedding(n)
        if square(e) != 2 - 2 * n:
            continue  # rs is only defined in degree 2-2n
        try:
            ok = rs_closed_form(e, emb) == rs_via_saturation(e, emb)
            detail = f"{label}: routes disagree on {e.coords}"
        except (ArithmeticError, ValueError) as exc:
            ok, detail = False, f"{label}: {exc}"
        result.record(ok, detail)
    return result


def monodromy_invariance(entries: list[CatalogEntry], products: int, seed: int) -> SuiteResult:
    """classify(g e) == classify(e) for random monodromy products g."""
    result = SuiteResult("monodromy_invariance")
    rng = random.Random(seed)
    for entry in entries:
        emb = canonical_embedding(entry.n)
        base = classify(entry.e, emb)
        for _ in range(products):
            g = random_monodromy(entry.n, rng.randrange(2**32), rng.randint(1, 5))
            moved = classify(g(entry.e), emb)
            result.record(moved == base, f"{entry.name}: invariants changed under monodromy")
    return result


def structural_invariants(n_values, trials: int, seed: int) -> SuiteResult:
    """Exact identities: R^2 = I and R^T G R = G for reflections, primitive
    saturations, and an isometric primitive canonical embedding."""
    result = SuiteResult("structural_invariants")
    rng = random.Random(seed)
    mukai = mukai_lattice()
    for n in n_values:
        emb = canonical_embedding(n)
        gram = emb.source.lattice.gram
        pulled = kernels.matmul(kernels.matmul(transpose(emb.injection), mukai.gram), emb.injection)
        result.record(
            pulled == gram
            and set(smith_normal_form(emb.injection)[0]) == {1},
            f"n={n}: canonical embedding is not a primitive isometry",
        )
        for _ in range(trials):
            e = random_negative_class(n, rng) if rng.random() < 0.5 else random_reflective_class(n, rng)
            # (e,e) R is integral; compare against (e,e)^2 I and (e,e)^2 G.
            ee = square(e)
            scaled = tuple(tuple(int(x * ee) for x in row) for row in reflection(e).matrix)
            target_i = tuple(tuple(ee * ee * x for x in row) for row in identity_matrix(len(gram)))
            target_g = tuple(tuple(ee * ee * x for x in row) for row in gram)
            ok = (
                kernels.matmul(scaled, scaled) == target_i
                and kernels.matmul(kernels.matmul(transpose(scaled), gram), scaled) == target_g
            )
            result.record(ok, f"n={n} e={e.coords}: reflection identities fail")
            if square(e) == 2 - 2 * n and content(e) == 1:
                basis = saturate(mukai, [emb.embed(e), emb.v])
                ok = smith_normal_form(basis)[0] == (1, 1) and len(gram_of(mukai, basis)) == 2
                result.record(ok, f"n={n} e={e.coords}: saturation is not primitive")
    return result
