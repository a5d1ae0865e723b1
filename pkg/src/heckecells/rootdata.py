"""
Root-system combinatorics for the supported rank <= 2 types.

Conventions, fixed once for the whole package:

* The group G is simply connected, so the translation lattice of the
  affine Weyl group is the full coroot lattice Q^vee and the dual group
  G^vee is adjoint.  Characters of G^vee therefore have all their
  weights inside Q^vee.
* A coweight is a tuple of integers in the basis of *fundamental
  coweights*: coordinate ``i`` is the pairing with the simple root
  ``alpha_i`` of G.  In these coordinates dominance is simply
  "all coordinates >= 0", and the adjoint highest weight of the dual
  group of type A1 is ``(2,)``.
* ``cartan[i][j]`` is the pairing of the simple coroot ``alpha_i^vee``
  with the simple root ``alpha_j``.
* Roots are tuples of integers in the basis of simple roots, so the
  pairing of a coweight with a root is a plain dot product.

Membership of a coweight in Q^vee is a congruence condition on the
coordinates (index of Q^vee in the coweight lattice is the order of the
fundamental group; 2, 3, 2, 1 for A1, A2, C2, G2).

Representation-theoretic operations (weight multiplicities by the
Freudenthal recursion, tensor products by the Klimyk rule) always refer
to the dual group and run in exact integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .errors import NonDominant

__all__ = [
    "Coweight",
    "CartanDatum",
    "cartan_datum",
    "affine_datum",
    "AFFINE_TYPES",
    "weyl_orbit",
    "weight_multiplicities",
    "weyl_dim",
    "tensor_decompose",
]

Coweight = tuple[int, ...]
Root = tuple[int, ...]

# label -> (cartan rows <a_i^vee, a_j>, positive roots, symmetrizers, dual label)
# Symmetrizers d_i = (alpha_i, alpha_i)/2 normalised so short roots get 1.
_TABLES: dict[str, tuple[tuple[tuple[int, ...], ...], tuple[Root, ...], tuple[int, ...], str]] = {
    "A1": (((2,),), ((1,),), (1,), "A1"),
    "A2": (
        ((2, -1), (-1, 2)),
        ((1, 0), (0, 1), (1, 1)),
        (1, 1),
        "A2",
    ),
    # B2: alpha_1 long, alpha_2 short.
    "B2": (
        ((2, -1), (-2, 2)),
        ((1, 0), (0, 1), (1, 1), (1, 2)),
        (2, 1),
        "C2",
    ),
    # C2: alpha_1 short, alpha_2 long.
    "C2": (
        ((2, -2), (-1, 2)),
        ((1, 0), (0, 1), (1, 1), (2, 1)),
        (1, 2),
        "B2",
    ),
    # G2: alpha_1 short, alpha_2 long.
    "G2": (
        ((2, -3), (-1, 2)),
        ((1, 0), (0, 1), (1, 1), (2, 1), (3, 1), (3, 2)),
        (1, 3),
        "G2v",
    ),
    # G2 with the roles swapped: alpha_1 long, alpha_2 short.  Used as
    # the dual of G2; not user facing.
    "G2v": (
        ((2, -1), (-3, 2)),
        ((1, 0), (0, 1), (1, 1), (1, 2), (1, 3), (2, 3)),
        (3, 1),
        "G2",
    ),
}

# Affine labels accepted by the CLI; tilde marks the affine group built
# on the finite type.
AFFINE_TYPES = {"A1~": "A1", "A2~": "A2", "C2~": "C2", "G2~": "G2"}


class CartanDatum:
    """Immutable root datum of one finite type.

    Build through :func:`cartan_datum`, which interns one instance per
    label; identity comparison is then safe.
    """

    def __init__(self, label: str):
        if label not in _TABLES:
            raise ValueError(f"unsupported type label {label!r}")
        cartan, pos_roots, sym, dual_label = _TABLES[label]
        self.label = label
        self.rank = len(cartan)
        self.cartan = cartan
        self.pos_roots = pos_roots
        self.symmetrizers = sym
        self._dual_label = dual_label
        self.highest_root = pos_roots[-1]
        self.num_pos_roots = len(pos_roots)
        # Coordinates of the coroot of each positive root in the basis
        # of simple coroots: for alpha = sum d_i alpha_i,
        # alpha^vee = sum d_i * sym_i / sym_alpha * alpha_i^vee.
        self.pos_coroots = tuple(
            self._coroot_of(alpha) for alpha in pos_roots
        )
        self.highest_coroot = self.pos_coroots[-1]
        # Labels of the highest coroot, needed for the affine reflection.
        self.highest_coroot_labels = self.coweight_from_coroot_coords(
            self.highest_coroot
        )
        self._validate()

    # -- construction helpers ------------------------------------------

    def _root_norm(self, alpha: Root) -> int:
        """Half the squared length of ``alpha`` (1 for short roots)."""
        # (alpha, alpha)/2 with (a_i, a_j) = sym_i * cartan[i][j]
        total = 0
        for i in range(self.rank):
            for j in range(self.rank):
                total += alpha[i] * alpha[j] * self.symmetrizers[i] * self.cartan[i][j]
        assert total % 2 == 0
        return total // 2

    def _coroot_of(self, alpha: Root) -> tuple[int, ...]:
        norm = self._root_norm(alpha)
        coords = []
        for i in range(self.rank):
            num = alpha[i] * self.symmetrizers[i]
            assert num % norm == 0, (alpha, norm)
            coords.append(num // norm)
        return tuple(coords)

    def _validate(self) -> None:
        c = self.cartan
        for i in range(self.rank):
            assert c[i][i] == 2
            for j in range(self.rank):
                if i != j:
                    assert c[i][j] <= 0
                # symmetrizability of the Gram matrix
                assert self.symmetrizers[i] * c[i][j] == self.symmetrizers[j] * c[j][i]
        expected = {"A1": 1, "A2": 3, "B2": 4, "C2": 4, "G2": 6, "G2v": 6}
        assert self.num_pos_roots == expected[self.label]
        # positive roots must be closed under the root-reflection test:
        # reflecting any positive root by any simple reflection lands in
        # +-(positive roots).
        pos = set(self.pos_roots)
        for alpha in self.pos_roots:
            for i in range(self.rank):
                beta = self.reflect_root(i, alpha)
                neg = tuple(-x for x in beta)
                assert beta in pos or neg in pos, (self.label, alpha, i)

    # -- basic geometry --------------------------------------------------

    @property
    def dual(self) -> "CartanDatum":
        return cartan_datum(self._dual_label)

    def pairing(self, cw: Coweight, root: Root) -> int:
        """Pairing of a coweight with a root; a dot product here."""
        return sum(c * r for c, r in zip(cw, root))

    def reflect_coweight(self, i: int, cw: Coweight) -> Coweight:
        """Simple reflection s_i acting on a coweight (label coords)."""
        t = cw[i]
        if t == 0:
            return cw
        row = self.cartan[i]
        return tuple(c - t * r for c, r in zip(cw, row))

    def reflect_root(self, i: int, root: Root) -> Root:
        """Simple reflection s_i acting on a root (root coords)."""
        t = sum(self.cartan[i][j] * root[j] for j in range(self.rank))
        out = list(root)
        out[i] -= t
        return tuple(out)

    def is_dominant(self, cw: Coweight) -> bool:
        return all(c >= 0 for c in cw)

    def zero_coweight(self) -> Coweight:
        return (0,) * self.rank

    # -- lattice bookkeeping ---------------------------------------------

    def coroot_coords(self, cw: Coweight) -> tuple[Fraction, ...]:
        """Coordinates of ``cw`` in the basis of simple coroots."""
        n = self.rank
        if n == 1:
            return (Fraction(cw[0], self.cartan[0][0]),)
        # labels = c . cartan  (row vector times matrix); solve 2x2.
        a, b = self.cartan[0]
        c, d = self.cartan[1]
        det = a * d - b * c
        x = Fraction(cw[0] * d - cw[1] * c, det)
        y = Fraction(cw[1] * a - cw[0] * b, det)
        return (x, y)

    def coweight_from_coroot_coords(self, coords) -> Coweight:
        out = []
        for j in range(self.rank):
            val = sum(coords[i] * self.cartan[i][j] for i in range(self.rank))
            assert val == int(val)
            out.append(int(val))
        return tuple(out)

    def in_translation_lattice(self, cw: Coweight) -> bool:
        """True when ``cw`` lies in Q^vee (an actual translation)."""
        return all(f.denominator == 1 for f in self.coroot_coords(cw))

    def check_coweight(self, cw) -> Coweight:
        cw = tuple(int(x) for x in cw)
        if len(cw) != self.rank:
            raise ValueError(
                f"coweight {cw} has length {len(cw)}, expected {self.rank}"
            )
        return cw

    # -- dual-side bilinear form -----------------------------------------

    def gram(self) -> tuple[tuple[int, ...], ...]:
        """Invariant form on the root lattice: (alpha_i, alpha_j)."""
        return tuple(
            tuple(self.symmetrizers[i] * self.cartan[i][j] for j in range(self.rank))
            for i in range(self.rank)
        )

    def dual_adjoint_weight(self) -> Coweight:
        """Highest weight of the adjoint representation of the dual group.

        The dual group's highest root, written in dual root coordinates,
        lives in the coroot lattice of this datum; convert to labels.
        """
        return self.coweight_from_coroot_coords(self.dual.highest_root)

    def __repr__(self) -> str:
        return f"CartanDatum({self.label})"


@lru_cache(maxsize=None)
def cartan_datum(label: str) -> CartanDatum:
    return CartanDatum(label)


def affine_datum(affine_label: str) -> CartanDatum:
    """Resolve an affine type label such as ``"A2~"``."""
    if affine_label not in AFFINE_TYPES:
        raise ValueError(
            f"unknown affine type {affine_label!r}; expected one of "
            f"{sorted(AFFINE_TYPES)}"
        )
    return cartan_datum(AFFINE_TYPES[affine_label])


# ---------------------------------------------------------------------------
# Weyl orbits


def weyl_orbit(datum: CartanDatum, cw: Coweight) -> set[Coweight]:
    """The finite Weyl orbit of a coweight, by closure under s_i."""
    cw = datum.check_coweight(cw)
    orbit = {cw}
    frontier = [cw]
    while frontier:
        nxt = []
        for x in frontier:
            for i in range(datum.rank):
                y = datum.reflect_coweight(i, x)
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    return orbit


# ---------------------------------------------------------------------------
# Weight multiplicities of irreducible representations of the dual group.
#
# All arithmetic happens in the coroot-coordinate lattice, where the
# weights of the adjoint dual group are integer vectors and the
# invariant form is an integer Gram matrix.


def _dual_gram(dual: CartanDatum) -> tuple[tuple[int, ...], ...]:
    return dual.gram()


def _form(gram, x, y) -> int:
    n = len(x)
    total = 0
    for i in range(n):
        xi = x[i]
        if not xi:
            continue
        row = gram[i]
        for j in range(n):
            total += xi * row[j] * y[j]
    return total


def _require_dominant(datum: CartanDatum, cw: Coweight) -> Coweight:
    cw = datum.check_coweight(cw)
    if not datum.is_dominant(cw):
        raise NonDominant(f"{cw} is not dominant")
    if not datum.in_translation_lattice(cw):
        raise NonDominant(
            f"{cw} is not in the coroot lattice, hence not a weight of the "
            f"adjoint dual group"
        )
    return cw


def weight_multiplicities(
    datum: CartanDatum, lam: Coweight
) -> dict[Coweight, int]:
    """Weight multiplicities of the dual-group irreducible V_lam.

    Computed by the Freudenthal recursion, exactly.  Keys are coweights
    in label coordinates; values are positive multiplicities.
    """
    lam = _require_dominant(datum, lam)
    dual = datum.dual
    gram = _dual_gram(dual)
    n = dual.rank
    # dual positive roots in dual root coordinates = coroot coords here
    pos = list(dual.pos_roots)
    two_rho = tuple(sum(beta[i] for beta in pos) for i in range(n))

    lam_c = tuple(int(f) for f in datum.coroot_coords(lam))
    lam_norm = _form(gram, lam_c, lam_c)

    mults: dict[tuple[int, ...], int] = {lam_c: 1}
    level = [lam_c]
    while level:
        candidates = set()
        for mu in level:
            for beta in dual.pos_roots[:n]:  # the simple roots come first
                candidates.add(tuple(m - b for m, b in zip(mu, beta)))
        nxt = []
        for mu in sorted(candidates):
            num = 0
            for beta in pos:
                k = 1
                while True:
                    up = tuple(m + k * b for m, b in zip(mu, beta))
                    m_up = mults.get(up)
                    if m_up is None:
                        # weight strings are unbroken, so the first miss
                        # ends the walk in this direction
                        break
                    num += m_up * _form(gram, up, beta)
                    k += 1
            if num == 0:
                continue
            den = (
                lam_norm
                - _form(gram, mu, mu)
                + _form(gram, two_rho, tuple(l - m for l, m in zip(lam_c, mu)))
            )
            assert den > 0, (lam, mu)
            assert (2 * num) % den == 0, (lam, mu, num, den)
            m = (2 * num) // den
            if m:
                mults[mu] = m
                nxt.append(mu)
        level = nxt

    out: dict[Coweight, int] = {}
    for mu, m in mults.items():
        out[datum.coweight_from_coroot_coords(mu)] = m
    return out


def weyl_dim(datum: CartanDatum, lam: Coweight) -> int:
    """Dimension of the dual-group irreducible V_lam (Weyl formula)."""
    lam = _require_dominant(datum, lam)
    # Coroots of the dual group are the roots of G, so the numerator
    # factors are pairings of lam + rho with the positive roots of G.
    dim = Fraction(1)
    for alpha in datum.pos_roots:
        num = sum(a * (l + 1) for a, l in zip(alpha, lam))
        den = sum(alpha)
        dim *= Fraction(num, den)
    assert dim.denominator == 1 and dim > 0
    return int(dim)


# ---------------------------------------------------------------------------
# Tensor product decomposition (Klimyk rule)


def _dominant_with_sign(datum: CartanDatum, x: Coweight) -> tuple[Coweight, int]:
    """Reflect ``x`` into the dominant chamber, tracking det(w).

    Returns ``(dominant representative, sign)``; sign 0 when the orbit
    touches a wall.
    """
    x = tuple(x)
    sign = 1
    while True:
        if 0 in x:
            return x, 0
        for i, xi in enumerate(x):
            if xi < 0:
                x = datum.reflect_coweight(i, x)
                sign = -sign
                break
        else:
            return x, sign


def tensor_decompose(
    datum: CartanDatum, lam: Coweight, mu: Coweight
) -> dict[Coweight, int]:
    """Decompose V_lam (x) V_mu into dual-group irreducibles.

    Klimyk rule: for every weight nu of V_mu, reflect lam + nu + rho to
    the dominant chamber and accumulate the sign.
    """
    lam = _require_dominant(datum, lam)
    mu = _require_dominant(datum, mu)
    rho = (1,) * datum.rank
    out: dict[Coweight, int] = {}
    for nu, m in weight_multiplicities(datum, mu).items():
        x = tuple(l + n + r for l, n, r in zip(lam, nu, rho))
        dom, sign = _dominant_with_sign(datum, x)
        if sign == 0:
            continue
        key = tuple(d - r for d, r in zip(dom, rho))
        val = out.get(key, 0) + sign * m
        if val:
            out[key] = val
        elif key in out:
            del out[key]
    assert all(v > 0 for v in out.values()), out
    return out
