import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3nrefl.catalog import all_entries, example_div_2n2, example_div_n1, example_minus2_div1
from k3nrefl.effectivity import (
    Verdict,
    classify,
    divisor_multiplicities,
    euler_characteristic,
    multiplier_k,
    numerically_exceptional,
)
from k3nrefl.k3n import canonical_embedding, make_k3n, u_index
from k3nrefl.lattice import content, divisibility, square
from k3nrefl.monodromy import random_monodromy
from k3nrefl.suites import random_negative_class, random_reflective_class


def _minus4_class_n7():
    e, f = u_index(1)
    coords = [0] * 23
    coords[e], coords[f], coords[22] = 2, 2, 1
    return make_k3n(7).vector(coords)


@pytest.mark.parametrize("n", [2, 3, 6, 11])
def test_delta_is_numerically_exceptional(n):
    emb = canonical_embedding(n)
    assert numerically_exceptional(emb.source.delta, emb)


def test_numerical_exceptionality_examples():
    assert not numerically_exceptional(example_div_2n2(3, 4).e, canonical_embedding(13))
    assert numerically_exceptional(example_div_2n2(2, 5).e, canonical_embedding(11))
    with pytest.raises(ValueError):
        numerically_exceptional(make_k3n(3).delta * 2, canonical_embedding(3))


def test_multiplier_examples():
    emb5 = canonical_embedding(5)
    assert multiplier_k(emb5.source.delta, emb5) == 2
    assert multiplier_k(example_div_2n2(2, 5).e, canonical_embedding(11)) == 1
    assert multiplier_k(example_minus2_div1(3).e, canonical_embedding(3)) == 1
    emb2 = canonical_embedding(2)
    assert multiplier_k(emb2.source.delta, emb2) == 2
    with pytest.raises(ValueError):
        multiplier_k(example_div_2n2(3, 4).e, canonical_embedding(13))


def test_divisor_multiplicities():
    delta5 = make_k3n(5).delta
    assert divisor_multiplicities(delta5, 2) == ("[E]=2e", "[E]^v=e^v")
    assert divisor_multiplicities(delta5, 1) == ("[E]=e", "[E]^v=2e^v")
    e = example_div_n1(2, 3).e
    assert divisibility(e) == 6
    assert divisor_multiplicities(e, 1) == ("[E]=e", "[E]^v=e^v")
    with pytest.raises(ValueError):
        divisor_multiplicities(e, 2)
    with pytest.raises(ValueError):
        divisor_multiplicities(delta5, 3)


def test_euler_characteristic_examples():
    assert euler_characteristic(3, -2) == 1
    assert euler_characteristic(3, 2 - 6) == 0
    assert euler_characteristic(3, -8) == 0
    assert euler_characteristic(2, 0) == math.comb(3, 2)
    with pytest.raises(ValueError):
        euler_characteristic(3, -3)


@pytest.mark.parametrize("n", range(2, 31))
def test_euler_characteristic_identities(n):
    assert euler_characteristic(n, -2) == 1
    if n >= 3:
        assert euler_characteristic(n, 2 - 2 * n) == 0
        assert euler_characteristic(n, -8) == 0


def test_euler_characteristic_of_square_at_n4_is_positive():
    # The value at (alpha, alpha) = 4 (2 - 2n) alternates in sign with n.
    assert euler_characteristic(4, 4 * (2 - 8)) == 210
    assert euler_characteristic(5, 4 * (2 - 10)) < 0


def test_classify_examples():
    emb2 = canonical_embedding(2)
    report = classify(emb2.source.delta, emb2)
    assert report.verdict is Verdict.PRIME_EXCEPTIONAL and report.k == 2

    report = classify(example_div_2n2(3, 4).e, canonical_embedding(13))
    assert report.verdict is Verdict.NOT_Q_EFFECTIVE and report.k is None

    report = classify(_minus4_class_n7(), canonical_embedding(7))
    assert report.verdict is Verdict.NOT_REFLECTIVE and report.rs is None


def test_classify_rejects_zero_and_foreign_classes():
    emb = canonical_embedding(4)
    with pytest.raises(ValueError):
        classify(emb.source.lattice.zero(), emb)
    with pytest.raises(ValueError):
        classify(make_k3n(5).delta, emb)


def test_classify_non_primitive_and_positive():
    emb = canonical_embedding(4)
    report = classify(emb.source.delta * 2, emb)
    assert not report.primitive and report.verdict is Verdict.NOT_REFLECTIVE
    e, f = u_index(0)
    coords = [0] * 23
    coords[e], coords[f] = 1, 1
    report = classify(emb.source.vector(coords), emb)
    assert report.verdict is Verdict.NOT_REFLECTIVE


def _check_report(report):
    assert (report.k is not None) == report.numerically_exceptional
    assert (report.divisor_multiplicity == "[E]=2e") == (report.k == 2)
    if report.k == 2:
        n = report.n
        two_branches = (report.degree == 2 - 2 * n and report.divisibility == 2 * n - 2) or (
            report.degree == -2 and report.divisibility == 2 and n == 2
        )
        assert two_branches


@given(st.integers(2, 12), st.integers(0, 2**32))
def test_report_invariants_and_sign_symmetry(n, seed):
    rng = random.Random(seed)
    emb = canonical_embedding(n)
    e = random_reflective_class(n, rng) if rng.random() < 0.5 else random_negative_class(n, rng)
    report = classify(e, emb)
    _check_report(report)
    assert classify(-e, emb) == report
    g = random_monodromy(n, rng.randrange(2**32), rng.randint(1, 3))
    assert classify(g(e), emb) == report


def test_catalog_reports_are_consistent():
    for entry in all_entries():
        _check_report(entry.classify())


def _minus2_div2_classes(n, bound=6):
    """Classes 2 (a e_j + b f_j) + t delta with t odd, square -2."""
    found = []
    e, f = u_index(0)
    for t in range(1, bound, 2):
        for a in range(-bound, bound + 1):
            for b in range(-bound, bound + 1):
                coords = [0] * 23
                coords[e], coords[f], coords[22] = 2 * a, 2 * b, t
                x = make_k3n(n).vector(coords)
                if square(x) == -2 and content(x) == 1:
                    found.append(x)
    return found


@pytest.mark.parametrize("n", range(2, 15))
def test_degree_minus2_divisibility_2_needs_n_2_mod_4(n):
    found = _minus2_div2_classes(n)
    assert all(divisibility(x) == 2 for x in found)
    assert bool(found) == (n % 4 == 2)


def test_classify_is_thread_safe():
    from concurrent.futures import ThreadPoolExecutor

    entries = all_entries()
    serial = [entry.classify() for entry in entries]
    with ThreadPoolExecutor(max_workers=8) as pool:
        parallel = list(pool.map(lambda entry: entry.classify(), entries * 3))
    assert parallel == serial * 3
