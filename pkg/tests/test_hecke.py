import itertools

import pytest

from heckecells.affine import affine_weyl
from heckecells.errors import BasisMismatch, BoundExceeded
from heckecells.hecke import (
    HeckeElement,
    KLCache,
    bar_standard,
    canonical_basis_element,
    kl_by_bar_solve,
    kl_polynomial,
    mul_standard,
    structure_constants,
    t_element,
    to_canonical,
    to_standard,
    verify_kl_layer,
)
from heckecells.laurent import LaurentPoly

A1 = affine_weyl("A1")
A2 = affine_weyl("A2")

v = LaurentPoly.v
one = LaurentPoly.one()


@pytest.fixture(scope="module")
def cache_a1():
    c = KLCache(A1)
    c.ensure_ball(9)
    return c


@pytest.fixture(scope="module")
def cache_a2():
    c = KLCache(A2)
    c.ensure_ball(8)
    return c


# -- standard basis -----------------------------------------------------------


def test_unit():
    w = A1.from_word([0, 1])
    assert mul_standard(t_element(A1, A1.identity), t_element(A1, w)) == t_element(A1, w)


def test_quadratic_relation():
    s = A1.simples[0]
    prod = mul_standard(t_element(A1, s), t_element(A1, s))
    assert prod.terms == {A1.identity: one, s: v(-1) - v(1)}


def test_braid_free_product():
    s0, s1 = A1.simples
    prod = mul_standard(
        mul_standard(t_element(A1, s0), t_element(A1, s1)), t_element(A1, s0)
    )
    assert prod.terms == {A1.from_word([0, 1, 0]): one}


def test_braid_relation_a2():
    s1, s2 = A2.simples[1], A2.simples[2]
    t1, t2 = t_element(A2, s1), t_element(A2, s2)
    assert mul_standard(mul_standard(t1, t2), t1) == mul_standard(
        mul_standard(t2, t1), t2
    )


def test_associativity_sampled():
    ball = A2.ball(3)
    els = [t_element(A2, x) for x in ball[::4]]
    for a, b, c in itertools.islice(itertools.product(els, repeat=3), 40):
        assert mul_standard(mul_standard(a, b), c) == mul_standard(
            a, mul_standard(b, c)
        )


def test_basis_mismatch_rejected(cache_a1):
    c = canonical_basis_element(A1.simples[0], cache_a1)
    canon = to_canonical(c, cache_a1)
    with pytest.raises(BasisMismatch):
        mul_standard(canon, canon)
    with pytest.raises(BasisMismatch):
        to_canonical(canon, cache_a1)


def test_bar_fixes_generators_plus_v():
    # T_s + v is bar invariant; T_s itself is not
    s = A1.simples[1]
    el = HeckeElement(A1, "standard", {s: one, A1.identity: v(1)})
    assert bar_standard(el) == el
    assert bar_standard(t_element(A1, s)) != t_element(A1, s)


# -- KL polynomials ------------------------------------------------------------


def test_kl_diagonal_and_support(cache_a1):
    w = A1.from_word([0, 1, 0])
    assert kl_polynomial(w, w, cache_a1) == one
    x = A1.from_word([1, 0, 1])
    # incomparable: same length, different element
    assert kl_polynomial(x, w, cache_a1).is_zero()


def test_dihedral_kl_polynomials(cache_a1):
    # in the infinite dihedral group p_{x,w} = v^(l(w)-l(x)) for all x <= w
    for w in A1.ball(8):
        col = cache_a1.column(w)
        expected = [x for x in A1.ball(w.length) if A1.bruhat_leq(x, w)]
        assert sorted(col, key=lambda e: e.sort_key()) == sorted(
            expected, key=lambda e: e.sort_key()
        )
        for x, p in col.items():
            assert LaurentPoly(p) == v(w.length - x.length)


def test_canonical_examples(cache_a1):
    assert canonical_basis_element(A1.identity, cache_a1).terms == {
        A1.identity: one
    }
    s0 = A1.simples[0]
    assert canonical_basis_element(s0, cache_a1).terms == {
        s0: one,
        A1.identity: v(1),
    }
    w = A1.from_word([0, 1])
    c_w = canonical_basis_element(w, cache_a1)
    assert c_w.terms == {
        w: one,
        A1.simples[0]: v(1),
        A1.simples[1]: v(1),
        A1.identity: v(2),
    }


def test_bar_solve_matches_recursion_a2(cache_a2):
    for w in A2.ball(4):
        got = kl_by_bar_solve(w, A2)
        want = {x: LaurentPoly(p) for x, p in cache_a2.column(w).items()}
        assert got == want


def test_verify_kl_layer_small():
    cache = KLCache(A2)
    out = verify_kl_layer(cache, 5, solve_bound=3)
    assert all(out.values()), out


# -- structure constants ----------------------------------------------------------


def test_h_unit(cache_a1):
    y = A1.from_word([0, 1])
    h = structure_constants(A1.identity, y, cache_a1, bound=4)
    assert h == {y: one}


def test_h_quadratic(cache_a1):
    s = A1.simples[1]
    h = structure_constants(s, s, cache_a1, bound=4)
    assert h == {s: v(1) + v(-1)}


def test_h_mu_cross_check(cache_a1):
    # C_{s0} C_{s1 s0} = C_{s0 s1 s0} + C_{s0}; the coefficient at C_{s0}
    # equals mu(s0, s1 s0) = 1
    s0 = A1.simples[0]
    y = A1.from_word([1, 0])
    h = structure_constants(s0, y, cache_a1, bound=5)
    assert h == {A1.from_word([0, 1, 0]): one, s0: one}
    assert cache_a1.mu(s0, y) == 1


def test_h_bar_symmetric(cache_a2):
    ball = A2.ball(3)
    for x in ball[1:6]:
        for y in ball[1:6]:
            h = structure_constants(x, y, cache_a2, bound=8)
            for z, p in h.items():
                assert p.bar() == p, (x, y, z, p)
                assert all(c >= 0 for _, c in p.pairs())


def test_h_associativity(cache_a2):
    ball = [x for x in A2.ball(2) if x.length >= 1]
    for x, y, z in itertools.islice(itertools.product(ball, repeat=3), 30):
        hxy = structure_constants(x, y, cache_a2, bound=8)
        lhs = {}
        for u, p in hxy.items():
            for t, q in structure_constants(u, z, cache_a2, bound=8).items():
                lhs[t] = lhs.get(t, LaurentPoly.zero()) + p * q
        hyz = structure_constants(y, z, cache_a2, bound=8)
        rhs = {}
        for u, p in hyz.items():
            for t, q in structure_constants(x, u, cache_a2, bound=8).items():
                rhs[t] = rhs.get(t, LaurentPoly.zero()) + p * q
        lhs = {t: p for t, p in lhs.items() if p}
        rhs = {t: p for t, p in rhs.items() if p}
        assert lhs == rhs


def test_bound_exceeded(cache_a1):
    w = A1.from_word([0, 1, 0])
    with pytest.raises(BoundExceeded) as err:
        structure_constants(w, w, cache_a1, bound=4)
    # w is an involution, so the top term pairs w with the length-2 element
    assert err.value.needed == 5
    h = structure_constants(w, w, cache_a1, bound=err.value.needed)
    assert max(z.length for z in h) <= 5


def test_conversion_round_trip(cache_a2):
    for w in A2.ball(4):
        el = HeckeElement(A2, "canonical", {w: one, A2.identity: v(2)})
        back = to_canonical(to_standard(el, cache_a2), cache_a2)
        assert back == el


# -- persistence --------------------------------------------------------------


def test_cache_save_load_round_trip(tmp_path, cache_a1):
    path = str(tmp_path / "kl.jsonl")
    n = cache_a1.save(path)
    assert n > 0
    fresh = KLCache(A1)
    added = fresh.load(path)
    assert added == cache_a1.num_columns()
    for w in A1.ball(9):
        assert fresh.column(w) == cache_a1.column(w)
    # appending nothing new keeps the file byte-identical
    with open(path, "rb") as fh:
        before = fh.read()
    cache_a1.save(path)
    with open(path, "rb") as fh:
        assert fh.read() == before


def test_cache_rejects_wrong_header(tmp_path, cache_a1):
    path = str(tmp_path / "kl.jsonl")
    cache_a1.save(path)
    other = KLCache(A2)
    with pytest.raises(ValueError):
        other.load(path)


def test_cache_ignores_torn_tail(tmp_path):
    cache = KLCache(A1)
    cache.ensure_ball(2)
    path = str(tmp_path / "kl.jsonl")
    cache.save(path)
    with open(path, "a", encoding="ascii") as fh:
        fh.write('["0.1.0", "0.1.0"')  # interrupted write, no newline flush
    fresh = KLCache(A1)
    added = fresh.load(path)
    assert added == cache.num_columns()
