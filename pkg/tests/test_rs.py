import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from k3nrefl.catalog import all_entries, example_div_2n2
from k3nrefl.k3n import MukaiVector, canonical_embedding, ns_class_of_square, ns_isotropic, theta_transport, transport_class
from k3nrefl.lattice import M_HEV, M_U, M_U2, TYPE_HEV, TYPE_U, TYPE_U2, divisibility, square
from k3nrefl.monodromy import random_monodromy
from k3nrefl.rs import admissible_rs, coprime_pairs, rho_sigma, rs_closed_form, rs_via_saturation, saturation_data
from k3nrefl.suites import random_reflective_class, rs_route_equivalence


def _canonical(n, r, c, s):
    return theta_transport(canonical_embedding(n), MukaiVector.of(r, c, s))


def u2_example():
    """n = 7, class (2, 6A, 3) against v = (2, 0, -3)."""
    m = MukaiVector.of(2, (ns_isotropic() * 6).coords, 3)
    return transport_class(MukaiVector.of(2, None, -3), m, 7)


def hev_example_n4():
    return _canonical(4, 1, (ns_isotropic() * 3).coords, 3)


def hev_example_n9():
    return _canonical(9, 5, (ns_class_of_square(6) * 8).coords, 40)


@pytest.mark.parametrize("n", [2, 3, 5, 8, 13])
def test_rho_sigma_of_delta(n):
    emb = canonical_embedding(n)
    assert rho_sigma(emb.source.delta, emb) == (2, 2 * n - 2)


def test_rho_sigma_examples():
    e = example_div_2n2(2, 5).e
    assert sorted(rho_sigma(e, canonical_embedding(11))) == [4, 10]
    assert rho_sigma(hev_example_n4(), canonical_embedding(4)) == (1, 3)
    assert sorted(rho_sigma(hev_example_n9(), canonical_embedding(9))) == [2, 4]


def test_rho_sigma_rejects_invalid_input():
    emb = canonical_embedding(5)
    with pytest.raises(ValueError):
        rho_sigma(emb.source.delta * 2, emb)
    with pytest.raises(ValueError):
        rho_sigma(emb.source.vector([1] + [0] * 22), emb)
    with pytest.raises(ValueError):
        rho_sigma(canonical_embedding(4).source.delta, emb)


def test_closed_form_examples():
    emb5 = canonical_embedding(5)
    rs = rs_closed_form(emb5.source.delta, emb5)
    assert (rs.lattice_type, rs.pair, rs.rs_product) == (TYPE_U, (1, 4), 4)

    rs = rs_closed_form(u2_example(), canonical_embedding(7))
    assert (rs.lattice_type, rs.pair, rs.rs_product) == (TYPE_U2, (1, 3), 3)

    e = hev_example_n9()
    assert square(e) == -16 and divisibility(e) == 8
    rs = rs_closed_form(e, canonical_embedding(9))
    assert (rs.lattice_type, rs.pair, rs.rs_product, rs.rho, rs.sigma) == (TYPE_HEV, (1, 2), 2, 2, 4)

    rs = rs_closed_form(hev_example_n4(), canonical_embedding(4))
    assert (rs.lattice_type, rs.pair, rs.rho, rs.sigma) == (TYPE_HEV, (1, 3), 1, 3)


def test_saturation_route_bases():
    emb5 = canonical_embedding(5)
    data = saturation_data(emb5.source.delta, emb5)
    assert data.lattice_type is TYPE_U and data.alpha_beta_gram == M_U

    data = saturation_data(u2_example(), canonical_embedding(7))
    assert data.lattice_type is TYPE_U2 and data.alpha_beta_gram == M_U2

    data = saturation_data(hev_example_n4(), canonical_embedding(4))
    assert data.lattice_type is TYPE_HEV and data.alpha_beta_gram == M_HEV


@pytest.mark.parametrize(
    "n,div,pairs",
    [
        (5, 8, {(1, 4)}),
        (7, 6, {(1, 3)}),
        (9, 8, {(1, 4), (1, 2)}),
        (13, 24, {(1, 12), (3, 4)}),
        (4, 3, {(1, 3)}),
    ],
)
def test_admissible_sets(n, div, pairs):
    assert admissible_rs(n, div).pairs == frozenset(pairs)


def test_admissible_rejects_bad_divisibility():
    with pytest.raises(ValueError):
        admissible_rs(5, 3)


def test_coprime_pairs():
    assert coprime_pairs(12) == {(1, 12), (3, 4)}
    assert coprime_pairs(1) == {(1, 1)}


def test_routes_agree_on_catalog():
    for entry in all_entries():
        if square(entry.e) == 2 - 2 * entry.n:
            emb = canonical_embedding(entry.n)
            assert rs_closed_form(entry.e, emb) == rs_via_saturation(entry.e, emb), entry.name


def test_route_suite_small():
    result = rs_route_equivalence(range(2, 8), 10, seed=5)
    assert result.trials == 60 and result.failures == 0


EXPECTED_PRODUCT = {"U": lambda n: n - 1, "U2": lambda n: (n - 1) // 2}


@given(st.integers(2, 13), st.integers(0, 2**32))
def test_rs_properties_on_random_classes(n, seed):
    rng = random.Random(seed)
    emb = canonical_embedding(n)
    e = random_reflective_class(n, rng)
    rs = rs_closed_form(e, emb)
    r, s = rs.pair
    assert r <= s and r * s == rs.rs_product
    assert rs.pair in admissible_rs(n, divisibility(e))
    if rs.lattice_type.tag == "Hev":
        assert rs.rs_product == (n - 1 if n % 2 == 0 else (n - 1) // 4)
    else:
        assert rs.rs_product == EXPECTED_PRODUCT[rs.lattice_type.tag](n)
    assert rs_closed_form(-e, emb) == rs
    g = random_monodromy(n, rng.randrange(2**32), rng.randint(1, 5))
    assert rs_closed_form(g(e), emb) == rs
    assert rs_via_saturation(e, emb) == rs
