import itertools

import pytest
from hypothesis import given, settings, strategies as st

from heckecells.errors import NonDominant
from heckecells.rootdata import (
    cartan_datum,
    affine_datum,
    tensor_decompose,
    weight_multiplicities,
    weyl_dim,
    weyl_orbit,
)

ALL_LABELS = ["A1", "A2", "B2", "C2", "G2", "G2v"]


# -- datum sanity -----------------------------------------------------------


@pytest.mark.parametrize("label", ALL_LABELS)
def test_datum_tables(label):
    d = cartan_datum(label)
    assert all(d.cartan[i][i] == 2 for i in range(d.rank))
    assert d.dual.dual is d


def test_affine_labels():
    assert affine_datum("A2~").label == "A2"
    assert affine_datum("C2~").label == "C2"
    with pytest.raises(ValueError):
        affine_datum("B2~")


def test_translation_lattice_membership():
    a1 = cartan_datum("A1")
    assert a1.in_translation_lattice((2,))
    assert not a1.in_translation_lattice((1,))
    a2 = cartan_datum("A2")
    assert a2.in_translation_lattice((1, 1))
    assert not a2.in_translation_lattice((1, 0))
    c2 = cartan_datum("C2")
    assert c2.in_translation_lattice((1, 0))
    assert not c2.in_translation_lattice((0, 1))
    g2 = cartan_datum("G2")
    assert g2.in_translation_lattice((1, 0))
    assert g2.in_translation_lattice((0, 1))


def test_highest_coroot_labels():
    assert cartan_datum("A1").highest_coroot_labels == (2,)
    assert cartan_datum("A2").highest_coroot_labels == (1, 1)
    assert cartan_datum("C2").highest_coroot_labels == (1, 0)
    assert cartan_datum("G2").highest_coroot_labels == (0, 1)


# -- Weyl orbits ------------------------------------------------------------


def test_orbit_rank_one():
    d = cartan_datum("A1")
    assert weyl_orbit(d, (1,)) == {(1,), (-1,)}


@pytest.mark.parametrize("label", ALL_LABELS)
def test_orbit_of_zero(label):
    d = cartan_datum(label)
    zero = d.zero_coweight()
    assert weyl_orbit(d, zero) == {zero}


def test_orbit_a2_fundamental():
    d = cartan_datum("A2")
    orbit = weyl_orbit(d, (1, 0))
    assert orbit == {(1, 0), (-1, 1), (0, -1)}


@pytest.mark.parametrize(
    "label,order", [("A1", 2), ("A2", 6), ("B2", 8), ("C2", 8), ("G2", 12)]
)
def test_regular_orbit_size_is_group_order(label, order):
    d = cartan_datum(label)
    assert len(weyl_orbit(d, (1,) * d.rank)) == order


def test_orbit_closed_under_reflections():
    d = cartan_datum("C2")
    orbit = weyl_orbit(d, (1, 2))
    for x in orbit:
        for i in range(d.rank):
            assert d.reflect_coweight(i, x) in orbit


# -- weight multiplicities --------------------------------------------------


def test_adjoint_a1():
    d = cartan_datum("A1")
    assert weight_multiplicities(d, (2,)) == {(2,): 1, (0,): 1, (-2,): 1}


@pytest.mark.parametrize("label", ["A1", "A2", "C2", "G2"])
def test_trivial_rep(label):
    d = cartan_datum(label)
    zero = d.zero_coweight()
    assert weight_multiplicities(d, zero) == {zero: 1}


def test_adjoint_a2():
    d = cartan_datum("A2")
    mults = weight_multiplicities(d, (1, 1))
    assert sum(mults.values()) == 8
    assert mults[(0, 0)] == 2
    # nonzero weights of the adjoint representation are the roots of the
    # dual group, i.e. the coroots
    assert mults[(2, -1)] == 1 and mults[(-1, 2)] == 1 and mults[(1, 1)] == 1


def test_nondominant_rejected():
    d = cartan_datum("A2")
    with pytest.raises(NonDominant):
        weight_multiplicities(d, (-1, 1))
    with pytest.raises(NonDominant):
        weight_multiplicities(d, (1, 0))  # outside the coroot lattice


def dominant_lattice_coweights(label, bound):
    d = cartan_datum(label)
    out = []
    for coords in itertools.product(range(bound + 1), repeat=d.rank):
        if any(coords) and d.in_translation_lattice(coords):
            out.append(tuple(coords))
    return out


@pytest.mark.parametrize("label", ["A1", "A2", "C2", "G2"])
def test_multiplicities_sum_to_weyl_dim(label):
    d = cartan_datum(label)
    for lam in dominant_lattice_coweights(label, 3):
        mults = weight_multiplicities(d, lam)
        assert sum(mults.values()) == weyl_dim(d, lam)


@pytest.mark.parametrize("label", ["A2", "C2", "G2"])
def test_multiplicities_weyl_invariant(label):
    d = cartan_datum(label)
    for lam in dominant_lattice_coweights(label, 2)[:4]:
        mults = weight_multiplicities(d, lam)
        for mu, m in mults.items():
            for i in range(d.rank):
                assert mults[d.reflect_coweight(i, mu)] == m


def test_known_dimensions():
    assert weyl_dim(cartan_datum("A1"), (2,)) == 3
    assert weyl_dim(cartan_datum("A2"), (1, 1)) == 8
    assert weyl_dim(cartan_datum("A2"), (0, 3)) == 10
    # vector representation of SO5 and the 7-dim representation of G2
    assert weyl_dim(cartan_datum("C2"), (1, 0)) == 5
    assert weyl_dim(cartan_datum("G2"), (0, 1)) == 7


def test_dual_adjoint_weights():
    cases = {"A1": (2,), "A2": (1, 1), "C2": (0, 2), "G2": (1, 0)}
    for label, lam in cases.items():
        d = cartan_datum(label)
        assert d.dual_adjoint_weight() == lam
    # adjoint dimension equals the dimension of the dual group
    assert weyl_dim(cartan_datum("C2"), (0, 2)) == 10
    assert weyl_dim(cartan_datum("G2"), (1, 0)) == 14


# -- tensor products --------------------------------------------------------


def test_clebsch_gordan_a1():
    d = cartan_datum("A1")
    assert tensor_decompose(d, (2,), (2,)) == {(4,): 1, (2,): 1, (0,): 1}


@pytest.mark.parametrize("label", ["A1", "A2", "C2", "G2"])
def test_tensor_unit(label):
    d = cartan_datum(label)
    zero = d.zero_coweight()
    for lam in dominant_lattice_coweights(label, 2):
        assert tensor_decompose(d, zero, lam) == {lam: 1}


def test_adjoint_square_a2():
    d = cartan_datum("A2")
    dec = tensor_decompose(d, (1, 1), (1, 1))
    total = sum(m * weyl_dim(d, nu) for nu, m in dec.items())
    assert total == 64
    assert dec == {(2, 2): 1, (3, 0): 1, (0, 3): 1, (1, 1): 2, (0, 0): 1}


@pytest.mark.parametrize("label", ["A2", "C2", "G2"])
def test_tensor_dimension_bookkeeping(label):
    d = cartan_datum(label)
    weights = dominant_lattice_coweights(label, 2)[:3]
    for lam in weights:
        for mu in weights:
            dec = tensor_decompose(d, lam, mu)
            assert sum(m * weyl_dim(d, nu) for nu, m in dec.items()) == (
                weyl_dim(d, lam) * weyl_dim(d, mu)
            )


@pytest.mark.parametrize("label", ["A2", "C2"])
def test_tensor_commutative(label):
    d = cartan_datum(label)
    weights = dominant_lattice_coweights(label, 2)[:3]
    for lam in weights:
        for mu in weights:
            assert tensor_decompose(d, lam, mu) == tensor_decompose(d, mu, lam)


def test_tensor_associative_a2():
    d = cartan_datum("A2")
    a = b = (1, 1)
    c = (0, 3)

    def mult_then(dec, other):
        out = {}
        for nu, m in dec.items():
            for tau, k in tensor_decompose(d, nu, other).items():
                out[tau] = out.get(tau, 0) + m * k
        return out

    left = mult_then(tensor_decompose(d, a, b), c)
    right = mult_then(tensor_decompose(d, b, c), a)
    assert left == right
