import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3nrefl.k3n import make_k3n, u_index
from k3nrefl.lattice import Isometry, content, reflection, reflection_isometry, square
from k3nrefl.monodromy import (
    discriminant_action,
    embedding_orbit_count,
    is_monodromy_reflective,
    mon2_membership,
    random_minus2_class,
    random_monodromy,
    step1_constraints,
)
from k3nrefl.suites import random_negative_class, reflectivity_fuzz


def _minus2_in_u(k3n):
    e, f = u_index(0)
    coords = [0] * 23
    coords[e], coords[f] = 1, -1
    return k3n.vector(coords)


def _minus4_class_n7():
    k7 = make_k3n(7)
    e, f = u_index(1)
    coords = [0] * 23
    coords[e], coords[f], coords[22] = 2, 2, 1
    return k7.vector(coords)


def test_discriminant_action_examples():
    k = make_k3n(6)
    assert discriminant_action(Isometry.identity(k.lattice)).multiplier == 1
    r_delta = reflection_isometry(k.delta)
    assert discriminant_action(r_delta).multiplier == 2 * 6 - 2 - 1
    assert discriminant_action(reflection_isometry(_minus2_in_u(k))).multiplier == 1


@pytest.mark.parametrize("n", [2, 3, 5, 9, 14])
def test_reflection_in_delta_is_monodromy(n):
    verdict = mon2_membership(reflection_isometry(make_k3n(n).delta))
    assert verdict.in_O_plus and verdict.in_Mon2


def test_minus_identity_is_not_monodromy():
    lat = make_k3n(4).lattice
    minus = Isometry(lat, tuple(tuple(-int(i == j) for j in range(23)) for i in range(23)))
    assert not mon2_membership(minus).in_Mon2


def test_integral_reflection_outside_mon2():
    e = _minus4_class_n7()
    refl = reflection(e)
    assert refl.integral
    verdict = mon2_membership(refl.isometry())
    assert verdict.in_O_plus
    assert verdict.discriminant_multiplier % 12 not in (1, 11)
    assert not verdict.in_Mon2
    assert not is_monodromy_reflective(e)


def test_reflectivity_examples():
    for n in (2, 5, 11):
        k = make_k3n(n)
        assert is_monodromy_reflective(k.delta)
        assert is_monodromy_reflective(_minus2_in_u(k))
    with pytest.raises(ValueError):
        is_monodromy_reflective(make_k3n(3).delta * 2)
    with pytest.raises(ValueError):
        e, f = u_index(0)
        coords = [0] * 23
        coords[e], coords[f] = 1, 1
        is_monodromy_reflective(make_k3n(3).vector(coords))


@given(st.integers(2, 12), st.integers(0, 2**32))
def test_reflectivity_predicate_matches_direct_route(n, seed):
    rng = random.Random(seed)
    for _ in range(5):
        e = random_negative_class(n, rng)
        refl = reflection(e)
        direct = refl.integral and mon2_membership(refl.isometry()).in_Mon2
        assert is_monodromy_reflective(e).value == direct


def test_reflectivity_fuzz_suite_small():
    result = reflectivity_fuzz(range(2, 6), 30, seed=11)
    assert result.trials == 120 and result.failures == 0


@pytest.mark.parametrize("n", [2, 3, 7, 12])
def test_step1_for_delta(n):
    rec = step1_constraints(n, 0, 1, -2)
    assert rec.degree == 2 - 2 * n
    assert rec.x_condition and rec.y_condition
    assert rec.y_prime == -1
    assert rec.all_hold == bool(is_monodromy_reflective(make_k3n(n).delta))


def test_step1_for_minus2_class():
    rec = step1_constraints(5, 1, 0, -2)
    assert rec.degree == -2 and rec.all_hold
    assert rec.y_prime == 1


def test_step1_fails_for_minus6():
    rec = step1_constraints(5, 1, 0, -6)
    assert not rec.x_condition and not rec.all_hold


def test_step1_requires_coprime():
    with pytest.raises(ValueError):
        step1_constraints(5, 2, 2, -2)


@given(st.integers(2, 10), st.integers(-4, 4), st.integers(-3, 3), st.integers(-3, 2))
def test_step1_agrees_with_reflectivity(n, x, y, half):
    import math

    a_square = 2 * half
    if math.gcd(x, y) != 1 or x * x * a_square + (2 - 2 * n) * y * y >= 0:
        return
    e, f = u_index(0)
    coords = [0] * 23
    coords[e], coords[f], coords[22] = x, x * half, y
    cls = make_k3n(n).vector(coords)
    if content(cls) != 1:
        return
    # a = e_0 + half f_0 is primitive of square 2 half, and cls = x a + y delta.
    assert step1_constraints(n, x, y, a_square).all_hold == bool(is_monodromy_reflective(cls))


def test_y_prime_is_exact():
    rec = step1_constraints(4, 1, 1, -4)
    assert isinstance(rec.y_prime, Fraction)


def test_random_monodromy_examples():
    g = random_monodromy(5, 42, 3)
    assert mon2_membership(g).in_Mon2
    assert g.lattice == make_k3n(5).lattice  # Isometry construction verifies the Gram form
    assert random_monodromy(5, 42, 3) == g
    with pytest.raises(ValueError):
        random_monodromy(5, 1, 0)


@given(st.integers(2, 12), st.integers(0, 2**32))
def test_minus2_generator(n, seed):
    u = random_minus2_class(make_k3n(n), random.Random(seed))
    assert square(u) == -2 and content(u) == 1


@given(st.integers(2, 12), st.integers(0, 2**32), st.integers(0, 2**32))
def test_discriminant_action_is_multiplicative(n, s1, s2):
    g, h = random_monodromy(n, s1, 2), random_monodromy(n, s2, 2)
    mod = 2 * n - 2
    product = discriminant_action(g.compose(h)).multiplier
    assert product == discriminant_action(g).multiplier * discriminant_action(h).multiplier % mod


@given(st.integers(2, 12), st.integers(0, 2**32), st.integers(0, 2**32))
def test_mon2_closed_under_composition_and_inverse(n, s1, s2):
    g, h = random_monodromy(n, s1, 3), random_monodromy(n, s2, 2)
    assert mon2_membership(g.compose(h)).in_Mon2
    assert mon2_membership(g.inverse()).in_Mon2
    assert g.compose(g.inverse()) == Isometry.identity(g.lattice)


@pytest.mark.parametrize("n,count", [(2, 1), (3, 1), (5, 1), (7, 2), (10, 1), (31, 4)])
def test_embedding_orbit_count(n, count):
    assert embedding_orbit_count(n) == count


def test_embedding_orbit_count_rejects_small_n():
    with pytest.raises(ValueError):
        embedding_orbit_count(1)
