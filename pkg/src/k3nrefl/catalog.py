"""Worked examples with known invariants, plus the numeric side conditions.

Every example is a pair (v, m) of Mukai vectors with m orthogonal to v.
The class m is moved into the canonical frame by an isometry sending v to
(1, 0, 1-n), then pulled back to the K3^[n] lattice. Each entry carries the
invariants its construction guarantees; ``mismatches`` compares them with
``classify``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .effectivity import ClassificationReport, Verdict, classify
from .k3n import (
    MukaiVector,
    canonical_embedding,
    canonical_v,
    mukai_lattice,
    mukai_pairing,
    ns_class_of_square,
    ns_isotropic,
    theta_transport,
    transport_class,
)
from .lattice import LatticeVector, RationalVector, content, integer_kernel

PRIME = Verdict.PRIME_EXCEPTIONAL
NOT_Q = Verdict.NOT_Q_EFFECTIVE


@dataclass(frozen=True)
class Expected:
    degree: int | None = None
    divisibility: int | None = None
    lattice_type: str | None = None
    pair: tuple[int, int] | None = None
    verdict: Verdict | None = None
    k: int | None = None

    def mismatches(self, report: ClassificationReport) -> list[str]:
        found = {
            "degree": report.degree,
            "divisibility": report.divisibility,
            "lattice_type": report.rs.lattice_type.tag if report.rs else None,
            "pair": report.rs.pair if report.rs else None,
            "verdict": report.verdict,
            "k": report.k,
        }
        bad = [name for name, want in self.populated().items() if found[name] != want]
        if self.verdict is not None and self.verdict != PRIME and report.k is not None:
            bad.append("k")
        return bad

    def populated(self) -> dict:
        return {name: getattr(self, name) for name in self.__dataclass_fields__ if getattr(self, name) is not None}


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    n: int
    v: MukaiVector
    m: MukaiVector
    e: LatticeVector
    expected: Expected
    provenance: str
    row: int | None = field(default=None, compare=False)

    def classify(self) -> ClassificationReport:
        return classify(self.e, canonical_embedding(self.n))

    def mismatches(self) -> list[str]:
        return self.expected.mismatches(self.classify())


def _sorted(a: int, b: int) -> tuple[int, int]:
    return (min(a, b), max(a, b))


def _entry(name, n, v, m, expected, provenance, row=None) -> CatalogEntry:
    if mukai_pairing(v, m) != 0:
        raise AssertionError(f"{name}: class is not orthogonal to v")
    if mukai_pairing(v, v) != 2 * n - 2 or content(v.to_lattice()) != 1:
        raise AssertionError(f"{name}: v is not primitive of square 2n-2")
    if expected.degree is not None and mukai_pairing(m, m) != expected.degree:
        raise AssertionError(f"{name}: class has the wrong square")
    if v == canonical_v(n):
        e = theta_transport(canonical_embedding(n), m)
    else:
        e = transport_class(v, m, n)
    return CatalogEntry(name, n, v, m, e, expected, provenance, row)


def _require(cond: bool, message: str):
    if not cond:
        raise ValueError(message)


# --- degree 2-2n families ---------------------------------------------------

def example_div_2n2(r: int, s: int) -> CatalogEntry:
    """e = (r, 0, s) against v = (r, 0, -s): divisibility 2n-2, type U, pair {r, s}."""
    _require(s >= r >= 1 and math.gcd(r, s) == 1, "need s >= r >= 1 and gcd(r, s) = 1")
    n = r * s + 1
    if r == 1:
        verdict, k = PRIME, 2
    elif r == 2:
        verdict, k = PRIME, 1
    else:
        verdict, k = NOT_Q, None
    return _entry(
        f"div_2n2(r={r},s={s})", n,
        MukaiVector.of(r, None, -s), MukaiVector.of(r, None, s),
        Expected(2 - 2 * n, 2 * n - 2, "U", (r, s), verdict, k),
        "moduli of rank-r sheaves with trivial c1; the class (r,0,s)",
    )


def example_div_n1(r: int, s: int) -> CatalogEntry:
    """e = (r, (n-1)A, s) with A isotropic, against v = (r, 0, -s): divisibility n-1."""
    _require(s > r >= 1 and math.gcd(r, s) == 1, "need s > r >= 1 and gcd(r, s) = 1")
    n = r * s + 1
    c = ns_isotropic() * (n - 1)
    if n % 2 == 0:
        kind, pair = "Hev", (r, s)
        exceptional = pair == (1, n - 1)
    else:
        kind = "U2"
        pair = _sorted(r // 2, s) if r % 2 == 0 else _sorted(r, s // 2)
        exceptional = pair == (1, (n - 1) // 2)
    return _entry(
        f"div_n1(r={r},s={s})", n,
        MukaiVector.of(r, None, -s), MukaiVector(r, c, s),
        Expected(2 - 2 * n, n - 1, kind, pair, PRIME if exceptional else NOT_Q, 1 if exceptional else None),
        "class (r,(n-1)A,s) with A isotropic primitive",
    )


def _smallest_odd_lambda(r: int, s: int) -> int:
    lam = 1
    while (lam * r + 1) % s:
        lam += 2
    return lam


def example_hev_1mod8(r: int, s: int) -> CatalogEntry:
    """Type H_ev with pair {r, s} for n = 4rs + 1 (r even, s odd)."""
    _require(r >= 2 and r % 2 == 0 and s % 2 == 1 and s >= 1 and math.gcd(r, s) == 1,
             "need r even, s odd, gcd(r, s) = 1")
    n = 4 * r * s + 1
    lam = _smallest_odd_lambda(r, s)
    g = (r * lam + 1) // s
    xi = ns_class_of_square(2 * lam * g)
    a = 2 * lam * r + 1
    v = canonical_v(n)
    m = MukaiVector(a, xi * (n - 1), a * (n - 1))
    plus = m.to_lattice() + v.to_lattice()
    minus = m.to_lattice() - v.to_lattice()
    for vec, div in ((plus, 2 * s), (minus, 2 * r)):
        if content(vec.exact_div(div)) != 1:
            raise AssertionError("construction produced a non-primitive half class")
    assert plus.exact_div(2 * s) == MukaiVector(g, xi * (2 * r), 4 * lam * r * r).to_lattice()
    return _entry(
        f"hev_1mod8(r={r},s={s})", n, v, m,
        Expected(2 - 2 * n, n - 1, "Hev", _sorted(r, s), NOT_Q, None),
        f"n = 8k+1 construction with lambda={lam}, g={g}, (xi,xi)={2 * lam * g}",
    )


def example_rank2_moduli(n: int, b: int, divisible_c1: bool = False) -> CatalogEntry:
    """e = (2, L, n-b-1) against v = (2, L, -b), (L, L) = 2n-2-4b."""
    sq = 2 * n - 2 - 4 * b
    if divisible_c1:
        _require(n % 4 == 3 and n >= 7 and b % 2 == 1, "divisible c1 needs n = 3 mod 4, n >= 7, b odd")
        c1 = ns_class_of_square(sq // 4) * 2
        expected = Expected(2 - 2 * n, 2 * n - 2, "U", _sorted(2, (n - 1) // 2), PRIME, 1)
    else:
        _require(n >= 3, "need n >= 3")
        c1 = ns_class_of_square(sq)
        if n % 2 == 0:
            expected = Expected(2 - 2 * n, n - 1, "Hev", (1, n - 1), PRIME, 1)
        else:
            expected = Expected(2 - 2 * n, n - 1, "U2", (1, (n - 1) // 2), PRIME, 1)
    return _entry(
        f"rank2_moduli(n={n},b={b},divisible={divisible_c1})", n,
        MukaiVector(2, c1, -b), MukaiVector(2, c1, n - b - 1), expected,
        "rank-2 moduli space with a class (2,L,n-b-1)",
    )


def example_noneffective_n1(r: int, sigma: int, d: int | None = None) -> CatalogEntry:
    """Slope-one-half family v = (2r, rh, -b), e = (2r, rh, sigma-b), n = r sigma + 1."""
    _require(r >= 3 and r % 2 == 1 and sigma >= 3 and math.gcd(r, sigma) == 1,
             "need r >= 3 odd, sigma >= 3, gcd(r, sigma) = 1")
    if d is None:
        d = 1 if sigma % 2 else 2
    _require(d >= 1 and (d - sigma) % 2 == 0, "d must be positive with the parity of sigma")
    _require(d % 2 == 0 or sigma > r, "odd d needs sigma > r")
    n = r * sigma + 1
    b = (sigma - r * d) // 2
    h = ns_class_of_square(2 * d)
    if sigma % 2:
        kind, pair = "Hev", _sorted(r, sigma)
    else:
        kind, pair = "U2", _sorted(r, sigma // 2)
    return _entry(
        f"noneffective_n1(r={r},sigma={sigma},d={d})", n,
        MukaiVector(2 * r, h * r, -b), MukaiVector(2 * r, h * r, sigma - b),
        Expected(2 - 2 * n, n - 1, kind, pair, NOT_Q, None),
        f"slope one half, (h,h)={2 * d}, b={b}",
    )


def example_noneffective_1mod8(r: int, s: int, d: int = 1) -> CatalogEntry:
    """v = (4r, 2rh, -s+rd), e = (4r, 2rh, s+rd), n = 4rs + 1; type H_ev, pair {r, s}."""
    _require(s > r >= 1 and (r + s) % 2 == 1 and math.gcd(r, s) == 1, "need s > r, one even, coprime")
    _require(d >= 1 and d % 2 == 1, "d must be odd and positive")
    n = 4 * r * s + 1
    h = ns_class_of_square(2 * d)
    return _entry(
        f"noneffective_1mod8(r={r},s={s},d={d})", n,
        MukaiVector(4 * r, h * (2 * r), -s + r * d), MukaiVector(4 * r, h * (2 * r), s + r * d),
        Expected(2 - 2 * n, n - 1, "Hev", _sorted(r, s), NOT_Q, None),
        f"n = 4rs+1 with (h,h)={2 * d}",
    )


# --- degree -2 families -----------------------------------------------------

def example_minus2_div1(n: int) -> CatalogEntry:
    """A smooth rational curve class on the K3 surface: degree -2, divisibility 1."""
    _require(n >= 2, "need n >= 2")
    curve = ns_class_of_square(-2)
    return _entry(
        f"minus2_div1(n={n})", n, canonical_v(n), MukaiVector(0, curve, 0),
        Expected(-2, 1, None, None, PRIME, 1),
        "rational curve class on the surface, pulled back to the Hilbert scheme",
    )


def example_minus2_div2(n: int) -> CatalogEntry:
    """Brill-Noether divisor: e = -(1,0,1) against v = (1, 2H, -1), (H,H) = (n-2)/2."""
    _require(n >= 6 and n % 4 == 2, "need n >= 6 and n = 2 mod 4")
    h = ns_class_of_square((n - 2) // 2)
    return _entry(
        f"minus2_div2(n={n})", n, MukaiVector(1, h * 2, -1), MukaiVector.of(-1, None, -1),
        Expected(-2, 2, None, None, PRIME, 1),
        f"Brill-Noether divisor in M_H(1,2H,-1), (H,H)={(n - 2) // 2}",
    )


def example_delta_n2() -> CatalogEntry:
    entry = example_div_2n2(1, 1)
    return CatalogEntry(
        "delta(n=2)", 2, entry.v, entry.m, entry.e,
        Expected(-2, 2, None, None, PRIME, 2),
        "half the exceptional divisor of the Hilbert-Chow morphism", 3,
    )


# --- the table ----------------------------------------------------------------

def _with_row(entry: CatalogEntry, row: int) -> CatalogEntry:
    return CatalogEntry(entry.name, entry.n, entry.v, entry.m, entry.e, entry.expected, entry.provenance, row)


ROW_MIN_N = {1: 2, 2: 6, 3: 2, 4: 2, 5: 7, 6: 13, 7: 4, 8: 3, 9: 16, 10: 13, 11: 9}


def _row_instances(row: int, n_max: int):
    """All instances of a table row with n <= n_max, smallest n first."""
    if row == 1:
        yield from (example_minus2_div1(n) for n in range(2, n_max + 1))
    elif row == 2:
        yield from (example_minus2_div2(n) for n in range(6, n_max + 1, 4))
    elif row == 3:
        if n_max >= 2:
            yield example_delta_n2()
    elif row == 4:
        yield from (example_div_2n2(1, n - 1) for n in range(2, n_max + 1))
    elif row == 5:
        yield from (example_rank2_moduli(n, 1, True) for n in range(7, n_max + 1, 4))
    elif row == 6:
        for n in range(2, n_max + 1):
            for r in range(3, math.isqrt(n - 1) + 1):
                s, rem = divmod(n - 1, r)
                if not rem and s > r and math.gcd(r, s) == 1:
                    yield example_div_2n2(r, s)
    elif row in (7, 8):
        start = 4 if row == 7 else 3
        yield from (example_rank2_moduli(n, 0) for n in range(start, n_max + 1, 2))
    elif row in (9, 10):
        for n in range(2, n_max + 1):
            for r in range(3, n, 2):
                sigma, rem = divmod(n - 1, r)
                if rem or sigma < 3 or math.gcd(r, sigma) != 1:
                    continue
                if row == 9 and sigma % 2 == 1 and sigma > r:
                    yield example_noneffective_n1(r, sigma)
                elif row == 10 and sigma % 2 == 0 and sigma >= 4:
                    yield example_noneffective_n1(r, sigma)
    elif row == 11:
        for n in range(9, n_max + 1, 8):
            rs = (n - 1) // 4
            for r in range(1, math.isqrt(rs) + 1):
                s, rem = divmod(rs, r)
                if not rem and s > r and (r + s) % 2 and math.gcd(r, s) == 1:
                    yield example_noneffective_1mod8(r, s)
    else:
        raise ValueError(f"no table row {row}; rows are 1..11")


def row_entries(row: int, n_max: int) -> list[CatalogEntry]:
    return [_with_row(e, row) for e in _row_instances(row, n_max)]


def full_table() -> list[CatalogEntry]:
    """One entry per table row, each at its smallest admissible n."""
    return [row_entries(row, ROW_MIN_N[row])[0] for row in range(1, 12)]


def worked_examples() -> list[CatalogEntry]:
    """The individually documented instances."""
    return [
        example_div_2n2(1, 4),
        example_div_2n2(2, 5),
        example_div_2n2(3, 4),
        example_div_n1(1, 3),
        example_div_n1(2, 3),
        example_div_n1(1, 2),
        example_hev_1mod8(2, 1),
        example_hev_1mod8(2, 3),
        example_hev_1mod8(4, 1),
        example_rank2_moduli(4, 0),
        example_rank2_moduli(5, 1),
        example_rank2_moduli(7, 1, True),
        example_noneffective_n1(3, 5),
        example_noneffective_n1(3, 4),
        example_noneffective_1mod8(1, 2),
        example_minus2_div2(6),
    ]


def all_entries() -> list[CatalogEntry]:
    return full_table() + worked_examples()


# --- strata of slope-semistable sheaves --------------------------------------

U_CLASS = (1, -1)  # (r_i, s_i) of the class (1, 0, 1)


@dataclass(frozen=True)
class StratumDatum:
    classes: tuple[tuple[int, int], ...]  # (r_i, s_i) for v_i = (r_i, 0, -s_i)
    multiplicities: tuple[int, ...]
    ambient: tuple[int, int]
    epsilon: int = 1

    @property
    def t(self) -> int:
        return self.ambient[1] - sum(d * s for d, (_, s) in zip(self.multiplicities, self.classes))

    @property
    def is_open(self) -> bool:
        return self.classes == (self.ambient,) and self.multiplicities == (1,)


def stratum_codimension(datum: StratumDatum) -> int:
    r, _ = datum.ambient
    ds, cls = datum.multiplicities, datum.classes
    if sum(d * ri for d, (ri, _) in zip(ds, cls)) != r:
        raise ValueError("ranks do not add up to the ambient rank")
    t = datum.t
    if t < 0:
        raise ValueError("negative t")
    cross = sum(
        di * dj * (ri * sj + rj * si)
        for di, (ri, si) in zip(ds, cls)
        for dj, (rj, sj) in zip(ds, cls)
    )
    diag = sum(d * (ri * si + 1) for d, (ri, si) in zip(ds, cls))
    return 2 + 2 * t * (datum.epsilon * r - 1) + cross - 2 * diag


def enumerate_strata(r: int, s: int) -> list[StratumDatum]:
    """All strata for ambient (r, 0, -s) with slope-zero classes allowed by the stability constraint."""
    candidates = [U_CLASS] + [
        (ri, si) for ri in range(2, r + 1) for si in range(ri, s + r + 1)
    ]
    strata = []

    def extend(idx, chosen, remaining):
        if remaining == 0:
            classes = tuple(c for c, _ in chosen)
            mults = tuple(d for _, d in chosen)
            datum = StratumDatum(classes, mults, (r, s))
            if datum.t >= 0:
                strata.append(datum)
            return
        for j in range(idx, len(candidates)):
            ri = candidates[j][0]
            for d in range(1, remaining // ri + 1):
                extend(j + 1, chosen + [(candidates[j], d)], remaining - d * ri)

    extend(0, [], r)
    return strata


# --- stability constraints ------------------------------------------------------

@dataclass(frozen=True)
class StabilityVerdict:
    admissible: bool
    condition: str
    pairing: int | None = None
    reference: MukaiVector | None = None


def standard_h(d: int) -> LatticeVector:
    """The polarisation h = e + d f of square 2d used for slope-one-half classes."""
    return ns_class_of_square(2 * d)


def slope_stability_constraints(v: MukaiVector, d: int | None = None) -> StabilityVerdict:
    """Necessary numeric conditions for a locally free slope-stable sheaf of class v."""
    if v.c.is_zero():
        r, s = v.r, -v.s
        if r <= 0:
            raise ValueError("rank must be positive")
        if (r, s) == U_CLASS:
            return StabilityVerdict(True, "v is the class of the trivial bundle")
        if s >= r >= 2:
            return StabilityVerdict(True, "s >= r >= 2")
        return StabilityVerdict(False, "needs s >= r >= 2 unless v = (1,0,1)")
    if d is None or d < 1:
        raise ValueError("slope one half classes need a positive half-degree d")
    h = standard_h(d)
    if v.r <= 0 or v.r % 2 or v.c != h * (v.r // 2):
        raise ValueError("unsupported shape: expected (2r, r h, -b)")
    r, b = v.r // 2, -v.s
    if math.gcd(r, b) != 1:
        raise ValueError("need gcd(r, b) = 1")
    vv = mukai_pairing(v, v)
    if d % 2:
        u = MukaiVector(2, h, (d + 1) // 2)
        if vv == -2:
            ok = v == u
            return StabilityVerdict(ok, "(v,v) = -2 forces v = u", None, u)
        if vv < -2:
            return StabilityVerdict(False, "(v,v) >= -2", None, u)
        vu = mukai_pairing(v, u)
        if vu < 0 or vu % 2:
            return StabilityVerdict(False, "(v,u) must be even and nonnegative", vu, u)
        boundary = v == MukaiVector(2, h, (d - 1) // 2)
        if (vu == 0) != boundary:
            return StabilityVerdict(False, "(v,u) = 0 only for v = (2,h,(d-1)/2)", vu, u)
        return StabilityVerdict(True, "boundary: (v,u) = 0" if boundary else "(v,u) even and positive", vu, u)
    u = MukaiVector(2, h, d // 2)
    if vv == 0:
        return StabilityVerdict(v == u, "(v,v) = 0 forces v = u", None, u)
    vu = mukai_pairing(u, v)
    if vu <= 0 or vu % 2:
        return StabilityVerdict(False, "(u,v) must be even and positive", vu, u)
    return StabilityVerdict(True, "(u,v) even and positive", vu, u)


# --- contracted curve class -----------------------------------------------------

def contracted_curve_class(v: MukaiVector) -> RationalVector:
    """w = (r / (v,v)) v + (0,0,1): orthogonal to v, pairing to -rank on v-perp."""
    vv = mukai_pairing(v, v)
    if vv < 2 or v.r < 2:
        raise ValueError("need (v,v) >= 2 and rank >= 2")
    mukai = mukai_lattice()
    point = MukaiVector.of(0, None, 1).to_lattice()
    coeff = Fraction(v.r, vv)
    w = RationalVector(mukai, tuple(coeff * a + b for a, b in zip(v.to_lattice().coords, point.coords)))

    def pair_w(x: LatticeVector) -> Fraction:
        gx = [sum(g * c for g, c in zip(row, x.coords)) for row in mukai.gram]
        return sum(a * b for a, b in zip(w.coords, gx))

    if pair_w(v.to_lattice()) != 0:
        raise ArithmeticError("w is not orthogonal to v")
    gv = [sum(g * c for g, c in zip(row, v.to_lattice().coords)) for row in mukai.gram]
    for row in integer_kernel([gv]):
        x = mukai.vector(row)
        if pair_w(x) != -MukaiVector.from_lattice(x).r:
            raise ArithmeticError("w does not pair to minus the rank on v-perp")
    return w
