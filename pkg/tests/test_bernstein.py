import itertools

import pytest

from heckecells.affine import affine_weyl
from heckecells.bernstein import (
    bernstein_central,
    dominant_weights_by_dim,
    is_central,
    j_multiply_poly,
    jf_weight_correspondence,
    phi_cell,
    theta,
)
from heckecells.cells import CellAlgebra, cell_partition
from heckecells.errors import BoundExceeded, NonDominant
from heckecells.hecke import KLCache, mul_standard, t_element
from heckecells.laurent import LaurentPoly
from heckecells.rootdata import tensor_decompose, weight_multiplicities

A1 = affine_weyl("A1")
A2 = affine_weyl("A2")

one = LaurentPoly.one()


@pytest.fixture(scope="module")
def a1():
    cache = KLCache(A1)
    part = cell_partition(A1, 8, cache)
    return CellAlgebra(part, cache)


@pytest.fixture(scope="module")
def a2():
    cache = KLCache(A2)
    part = cell_partition(A2, 12, cache)
    return CellAlgebra(part, cache)


# -- translation elements -------------------------------------------------------


def test_theta_zero():
    assert theta(A1, (0,)).terms == {A1.identity: one}
    assert theta(A2, (0, 0)).terms == {A2.identity: one}


def test_theta_dominant_is_plain_t():
    t = A1.translation((2,))
    assert theta(A1, (2,)).terms == {t: one}


def test_theta_leading_term():
    th = theta(A1, (-2,))
    t = A1.translation((-2,))
    assert th.terms[t] == one
    assert all(x.length <= t.length for x in th.terms)


def test_theta_inverse_pairs():
    for lam in [(2,), (4,)]:
        neg = tuple(-c for c in lam)
        prod = mul_standard(theta(A1, lam), theta(A1, neg))
        assert prod.terms == {A1.identity: one}
    prod = mul_standard(theta(A2, (1, 1)), theta(A2, (-1, -1)))
    assert prod.terms == {A2.identity: one}


def test_theta_additive():
    for lam, mu in [((2,), (2,)), ((2,), (-4,))]:
        lhs = mul_standard(theta(A1, lam), theta(A1, mu))
        rhs = theta(A1, tuple(l + m for l, m in zip(lam, mu)))
        assert lhs == rhs


def test_theta_decomposition_independent():
    for lam in [(2,), (-2,), (4,)]:
        assert theta(A1, lam) == theta(A1, lam, shift=1)
    for lam in [(1, 1), (-1, -1), (0, 3), (3, 0)]:
        assert theta(A2, lam) == theta(A2, lam, shift=1)


def test_theta_rejects_non_lattice():
    with pytest.raises(ValueError):
        theta(A1, (1,))


# -- central elements ------------------------------------------------------------


def test_bernstein_trivial():
    z = bernstein_central(A1, (0,))
    assert z.expansion.terms == {A1.identity: one}


def test_bernstein_adjoint_a1():
    z = bernstein_central(A1, (2,))
    expected = {}
    for mu, m in weight_multiplicities(A1.datum, (2,)).items():
        for x, p in theta(A1, mu).terms.items():
            expected[x] = expected.get(x, LaurentPoly.zero()) + p.scale(m)
    assert z.expansion.terms == {x: p for x, p in expected.items() if p}


@pytest.mark.parametrize(
    "group,lam",
    [(A1, (2,)), (A1, (4,)), (A2, (1, 1)), (A2, (0, 3))],
)
def test_centrality(group, lam):
    assert is_central(bernstein_central(group, lam).expansion)


def test_t_s_is_not_central():
    assert not is_central(t_element(A1, A1.simples[0]))


def test_bernstein_multiplicative_a2():
    z1 = bernstein_central(A2, (1, 1))
    prod = mul_standard(z1.expansion, z1.expansion)
    total = {}
    for nu, m in tensor_decompose(A2.datum, (1, 1), (1, 1)).items():
        for x, p in bernstein_central(A2, nu).expansion.terms.items():
            total[x] = total.get(x, LaurentPoly.zero()) + p.scale(m)
    assert prod.terms == {x: p for x, p in total.items() if p}


def test_bernstein_rejects_nondominant():
    with pytest.raises(NonDominant):
        bernstein_central(A1, (-2,))


# -- the cell homomorphism ----------------------------------------------------------


def test_phi_of_unit(a1):
    part = a1.partition
    for i in range(part.num_cells):
        image = phi_cell(t_element(A1, A1.identity), a1, i)
        assert image == {d: one for d in a1.duflo_involutions(i)}


def test_phi_homomorphism(a1, a2):
    for alg, group in [(a1, A1), (a2, A2)]:
        lams = dominant_weights_by_dim(group.datum, 2)
        zs = {lam: bernstein_central(group, lam).expansion for lam in lams}
        for cell in range(alg.partition.num_cells):
            for l1, l2 in itertools.product(lams, repeat=2):
                lhs = phi_cell(mul_standard(zs[l1], zs[l2]), alg, cell)
                rhs = j_multiply_poly(
                    alg,
                    phi_cell(zs[l1], alg, cell),
                    phi_cell(zs[l2], alg, cell),
                )
                assert lhs == rhs, (group.datum.label, cell, l1, l2)


def test_phi_bimodule_compatibility(a1):
    # z (t_x . t_y) agrees with (z t_x) . t_y for central z: the K-level
    # shadow of the bimodule commutation, specialised to h_2 = 1
    z = bernstein_central(A1, (2,)).expansion
    cell = 1
    members = [x for x in a1.partition.two_sided_cells[cell] if x.length <= 3]
    for x, y in itertools.product(members, repeat=2):
        txy = {w: LaurentPoly.const(c) for w, c in a1.t_product(x, y).items()}
        lhs = j_multiply_poly(a1, phi_cell(z, a1, cell), txy)
        zx = phi_cell(z, a1, cell)
        zx = j_multiply_poly(a1, zx, {x: one})
        rhs = j_multiply_poly(a1, zx, {y: one})
        assert lhs == rhs


def test_phi_needs_large_enough_partition():
    cache = KLCache(A1)
    part = cell_partition(A1, 2, cache, max_extension=2)
    alg = CellAlgebra(part, cache)
    z = bernstein_central(A1, (6,)).expansion
    with pytest.raises(BoundExceeded):
        phi_cell(z, alg, part.cell_of[A1.identity])


def test_phi_stability(a1):
    cache = a1.cache
    big_part = cell_partition(A1, 10, cache)
    big = CellAlgebra(big_part, cache)
    z = bernstein_central(A1, (2,)).expansion
    for cell in range(a1.partition.num_cells):
        rep = a1.partition.two_sided_cells[cell][0]
        assert phi_cell(z, a1, cell) == phi_cell(
            z, big, big_part.cell_of[rep]
        )


# -- identification of the minimal-coset slice ------------------------------------------


def test_jf_weight_correspondence_a1(a1):
    cache = a1.cache
    part = cell_partition(A1, 16, cache)
    alg = CellAlgebra(part, cache)
    corr = jf_weight_correspondence(alg, 1, [(2,), (4,)])
    assert corr[(0,)].word_str == "0"
    assert corr[(2,)].word_str == "0.1.0"
    assert corr[(4,)].word_str == "0.1.0.1.0"


def test_dominant_weights_by_dim():
    assert dominant_weights_by_dim(A1.datum, 2) == [(2,), (4,)]
    assert dominant_weights_by_dim(A2.datum, 2) == [(1, 1), (0, 3)]
