"""
Exact arithmetic in the affine Weyl group W = Q^vee x| W_f.

An element is stored as the pair ``(w, lam)`` meaning ``w * t_lam`` with
``w`` in the finite Weyl group and ``lam`` a translation in the coroot
lattice, so the group law reads

    (w, lam) (w', lam') = (w w', w'^{-1}(lam) + lam').

Lengths come from the closed formula

    l(w t_lam) = sum over positive roots alpha of
                 | <lam, alpha> + [w(alpha) < 0] |

which is checked against breadth-first word enumeration in the tests.
The affine simple reflection is s_0 = t_{theta^vee} s_theta for the
highest root theta, stored as ``(s_theta, -theta^vee)``.

Elements are interned per group: equality is identity, and lengths,
descent sets and canonical reduced words are cached on the instance.
The canonical reduced word is the lexicographically smallest one,
obtained by always stripping the smallest left descent.  Its textual
form is the dot-separated index string used everywhere downstream
("0.1.0", with "e" for the identity).
"""

from __future__ import annotations

from functools import lru_cache

from .errors import TypeMismatch
from .rootdata import CartanDatum, Coweight, cartan_datum

__all__ = ["FiniteWeyl", "AffineElement", "AffineWeyl", "affine_weyl"]


Matrix = tuple[tuple[int, ...], ...]


def _apply(rows: Matrix, vec: tuple[int, ...]) -> tuple[int, ...]:
    """Image of ``vec`` under the linear map with basis images ``rows``."""
    n = len(vec)
    out = [0] * n
    for k, c in enumerate(vec):
        if c:
            row = rows[k]
            for j in range(n):
                out[j] += c * row[j]
    return tuple(out)


def _compose(outer: Matrix, inner: Matrix) -> Matrix:
    """Basis images of ``outer o inner``."""
    return tuple(_apply(outer, row) for row in inner)


class FiniteWeyl:
    """The finite Weyl group of a Cartan datum, fully enumerated.

    Elements are integer ids; id 0 is the identity.  For each element we
    store its action on coweights (label coordinates) and on roots (root
    coordinates), its length, inverse, and products with the simple
    reflections on both sides.
    """

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        n = datum.rank
        ident = tuple(
            tuple(1 if i == j else 0 for j in range(n)) for i in range(n)
        )
        # generator actions: s_i on coweights and on roots
        gen_cw = []
        gen_rt = []
        for i in range(n):
            cw = [list(row) for row in ident]
            for j in range(n):
                cw[i][j] -= datum.cartan[i][j]
            gen_cw.append(tuple(tuple(r) for r in cw))
            rt = [list(row) for row in ident]
            for k in range(n):
                rt[k][i] -= datum.cartan[i][k]
            gen_rt.append(tuple(tuple(r) for r in rt))
        self.gen_cw = tuple(gen_cw)

        # breadth-first enumeration by right multiplication
        index: dict[Matrix, int] = {ident: 0}
        cw_mats: list[Matrix] = [ident]
        rt_mats: list[Matrix] = [ident]
        frontier = [0]
        while frontier:
            nxt = []
            for e in frontier:
                for i in range(n):
                    cw = _compose(cw_mats[e], gen_cw[i])
                    if cw not in index:
                        index[cw] = len(cw_mats)
                        cw_mats.append(cw)
                        rt_mats.append(_compose(rt_mats[e], gen_rt[i]))
                        nxt.append(index[cw])
            frontier = nxt
        self.size = len(cw_mats)
        self.cw_mats = cw_mats
        self.rt_mats = rt_mats
        self._index = index

        self.length = [self._count_inversions(e) for e in range(self.size)]
        self.mult = [
            [index[_compose(gen_cw[i], cw_mats[e])] for i in range(n)]
            for e in range(self.size)
        ]  # mult[e][i] = s_i * e
        self.rmult = [
            [index[_compose(cw_mats[e], gen_cw[i])] for i in range(n)]
            for e in range(self.size)
        ]  # rmult[e][i] = e * s_i
        self.inverse = [0] * self.size
        for e in range(self.size):
            # e = s_{i1}...s_{ik}, so the inverse is the reversed word
            inv = 0
            for i in reversed(self._some_word(e)):
                inv = self.rmult[inv][i]
            self.inverse[e] = inv
        self.prod = [
            [self._mult_full(a, b) for b in range(self.size)]
            for a in range(self.size)
        ]
        self._check_presentation()
        self.longest = max(range(self.size), key=lambda e: self.length[e])
        assert self.length[self.longest] == datum.num_pos_roots
        # reflection in the highest root
        theta = datum.highest_root
        tl = datum.highest_coroot_labels
        n_ = datum.rank
        rows = tuple(
            tuple(
                (1 if k == j else 0) - theta[k] * tl[j] for j in range(n_)
            )
            for k in range(n_)
        )
        self.highest_reflection = index[rows]

    def _count_inversions(self, e: int) -> int:
        rt = self.rt_mats[e]
        count = 0
        for alpha in self.datum.pos_roots:
            img = _apply(rt, alpha)
            if all(c <= 0 for c in img):
                count += 1
        return count

    def _some_word(self, e: int) -> list[int]:
        word = []
        while e != 0:
            for i in range(self.datum.rank):
                f = self.mult[e][i]
                if self.length[f] < self.length[e]:
                    word.append(i)
                    e = f
                    break
        return word

    def _mult_full(self, a: int, b: int) -> int:
        # (a b)(lam) = a(b(lam)): basis images compose with b inside
        return self._index[_compose(self.cw_mats[a], self.cw_mats[b])]

    def _check_presentation(self) -> None:
        """Verify the Coxeter-matrix presentation on the stored tables."""
        n = self.datum.rank
        order = {0: 2, 1: 3, 2: 4, 3: 6}
        for i in range(n):
            assert self.mult[self.mult[0][i]][i] == 0
            for j in range(i + 1, n):
                m = order[self.datum.cartan[i][j] * self.datum.cartan[j][i]]
                e = 0
                for _ in range(m):
                    e = self.mult[e][i]
                    e = self.mult[e][j]
                assert e == 0, (self.datum.label, i, j, m)

    def act_coweight(self, e: int, cw: Coweight) -> Coweight:
        return _apply(self.cw_mats[e], cw)

    def act_root(self, e: int, root):
        return _apply(self.rt_mats[e], root)

    def root_is_negative(self, e: int, alpha) -> bool:
        img = _apply(self.rt_mats[e], alpha)
        return all(c <= 0 for c in img)


class AffineElement:
    """An element ``w * t_lam`` of the affine Weyl group, interned."""

    __slots__ = (
        "group", "fin", "tr", "length", "_hash",
        "_word", "_ldesc", "_rdesc", "_inv",
    )

    def __init__(self, group: "AffineWeyl", fin: int, tr: Coweight, length: int):
        self.group = group
        self.fin = fin
        self.tr = tr
        self.length = length
        self._hash = hash((id(group), fin, tr))
        self._word: tuple[int, ...] | None = None
        self._ldesc: frozenset[int] | None = None
        self._rdesc: frozenset[int] | None = None
        self._inv: AffineElement | None = None

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other

    @property
    def word(self) -> tuple[int, ...]:
        if self._word is None:
            self._word = self.group.canonical_word(self)
        return self._word

    @property
    def word_str(self) -> str:
        return "e" if not self.word else ".".join(str(i) for i in self.word)

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.length, self.word)

    def inverse(self) -> "AffineElement":
        if self._inv is None:
            g = self.group
            w_inv = g.fin.inverse[self.fin]
            neg = tuple(-c for c in g.fin.act_coweight(self.fin, self.tr))
            self._inv = g.element(w_inv, neg)
            self._inv._inv = self
        return self._inv

    def is_involution(self) -> bool:
        return self.inverse() is self

    def is_translation(self) -> bool:
        return self.fin == 0

    def __repr__(self) -> str:
        return f"<{self.word_str}>"


class AffineWeyl:
    """The affine Weyl group attached to a Cartan datum."""

    def __init__(self, datum: CartanDatum):
        self.datum = datum
        self.fin = FiniteWeyl(datum)
        self.rank = datum.rank
        self.num_gens = datum.rank + 1  # index 0 is the affine node
        self._elems: dict[tuple[int, Coweight], AffineElement] = {}
        self._lmul: dict[tuple[int, AffineElement], AffineElement] = {}
        self._rmul: dict[tuple[AffineElement, int], AffineElement] = {}
        self._parsed: dict[str, AffineElement] = {}
        self.identity = self.element(0, datum.zero_coweight())
        theta_vee = datum.highest_coroot_labels
        neg = tuple(-c for c in theta_vee)
        self.simples = [self.element(self.fin.highest_reflection, neg)] + [
            self.element(self.fin.rmult[0][i], datum.zero_coweight())
            for i in range(datum.rank)
        ]
        assert all(s.length == 1 for s in self.simples)

    # -- element bookkeeping ----------------------------------------------

    def element(self, fin: int, tr: Coweight) -> AffineElement:
        key = (fin, tr)
        e = self._elems.get(key)
        if e is None:
            e = AffineElement(self, fin, tr, self._length(fin, tr))
            self._elems[key] = e
        return e

    def _length(self, fin: int, tr: Coweight) -> int:
        datum = self.datum
        total = 0
        for alpha in datum.pos_roots:
            pairing = datum.pairing(tr, alpha)
            if self.fin.root_is_negative(fin, alpha):
                pairing += 1
            total += pairing if pairing >= 0 else -pairing
        return total

    def translation(self, cw: Coweight) -> AffineElement:
        cw = self.datum.check_coweight(cw)
        if not self.datum.in_translation_lattice(cw):
            raise ValueError(f"{cw} is not in the coroot lattice")
        return self.element(0, cw)

    def from_word(self, word) -> AffineElement:
        x = self.identity
        for i in word:
            x = self.right_mul(x, i)
        return x

    def parse_word(self, text: str) -> AffineElement:
        cached = self._parsed.get(text)
        if cached is not None:
            return cached
        stripped = text.strip()
        if stripped in ("e", ""):
            x = self.identity
        else:
            try:
                word = [int(part) for part in stripped.split(".")]
            except ValueError as exc:
                raise ValueError(f"malformed word {text!r}") from exc
            if any(i < 0 or i >= self.num_gens for i in word):
                raise ValueError(
                    f"word {text!r} uses generators outside "
                    f"0..{self.num_gens - 1}"
                )
            x = self.from_word(word)
        self._parsed[text] = x
        return x

    # -- group operations ---------------------------------------------------

    def left_mul(self, i: int, x: AffineElement) -> AffineElement:
        key = (i, x)
        y = self._lmul.get(key)
        if y is None:
            s = self.simples[i]
            fin = self.fin.prod[s.fin][x.fin]
            w_inv = self.fin.inverse[x.fin]
            mu = self.fin.act_coweight(w_inv, s.tr)
            tr = tuple(a + b for a, b in zip(mu, x.tr))
            y = self.element(fin, tr)
            self._lmul[key] = y
        return y

    def right_mul(self, x: AffineElement, i: int) -> AffineElement:
        key = (x, i)
        y = self._rmul.get(key)
        if y is None:
            s = self.simples[i]
            fin = self.fin.prod[x.fin][s.fin]
            s_inv = self.fin.inverse[s.fin]
            tr = tuple(
                a + b
                for a, b in zip(self.fin.act_coweight(s_inv, x.tr), s.tr)
            )
            y = self.element(fin, tr)
            self._rmul[key] = y
        return y

    def multiply(self, x: AffineElement, y: AffineElement) -> AffineElement:
        if x.group is not y.group:
            raise TypeMismatch("elements of different affine Weyl groups")
        fin = self.fin.prod[x.fin][y.fin]
        y_inv = self.fin.inverse[y.fin]
        tr = tuple(
            a + b
            for a, b in zip(self.fin.act_coweight(y_inv, x.tr), y.tr)
        )
        return self.element(fin, tr)

    # -- descents and words --------------------------------------------------

    def left_descents(self, x: AffineElement) -> frozenset[int]:
        if x._ldesc is None:
            x._ldesc = frozenset(
                i
                for i in range(self.num_gens)
                if self.left_mul(i, x).length < x.length
            )
        return x._ldesc

    def right_descents(self, x: AffineElement) -> frozenset[int]:
        if x._rdesc is None:
            x._rdesc = frozenset(
                i
                for i in range(self.num_gens)
                if self.right_mul(x, i).length < x.length
            )
        return x._rdesc

    def descents(self, x: AffineElement, side: str) -> frozenset[int]:
        if side == "left":
            return self.left_descents(x)
        if side == "right":
            return self.right_descents(x)
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")

    def canonical_word(self, x: AffineElement) -> tuple[int, ...]:
        word = []
        while x.length:
            i = min(self.left_descents(x))
            word.append(i)
            x = self.left_mul(i, x)
        return tuple(word)

    def is_min_double_coset_rep(self, x: AffineElement) -> bool:
        """No finite simple reflection descends x on either side."""
        finite = range(1, self.num_gens)
        ld = self.left_descents(x)
        if any(i in ld for i in finite):
            return False
        rd = self.right_descents(x)
        return not any(i in rd for i in finite)

    # -- Bruhat order ---------------------------------------------------------

    def bruhat_leq(self, x: AffineElement, w: AffineElement) -> bool:
        """Subword criterion, evaluated through the lifting property."""
        if x.length > w.length:
            return False
        if x is w or x.length == 0:
            return True
        # lifting property: for a left descent s of w,
        #   x <= w  iff  (sx <= sw when sx < x)  else  (x <= sw)
        i = min(self.left_descents(w))
        sw = self.left_mul(i, w)
        sx = self.left_mul(i, x)
        if sx.length < x.length:
            return self.bruhat_leq(sx, sw)
        return self.bruhat_leq(x, sw)

    # -- ball enumeration -------------------------------------------------------

    def ball(self, bound: int) -> list[AffineElement]:
        """All elements of length <= bound, sorted by (length, word)."""
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        shells: list[list[AffineElement]] = [[self.identity]]
        seen = {self.identity}
        for n in range(bound):
            nxt = []
            for x in shells[n]:
                for i in range(self.num_gens):
                    y = self.left_mul(i, x)
                    if y.length == n + 1 and y not in seen:
                        seen.add(y)
                        nxt.append(y)
            shells.append(nxt)
        out = [x for shell in shells for x in shell]
        out.sort(key=AffineElement.sort_key)
        return out


@lru_cache(maxsize=None)
def _affine_weyl_cached(label: str) -> AffineWeyl:
    return AffineWeyl(cartan_datum(label))


def affine_weyl(datum: CartanDatum | str) -> AffineWeyl:
    """One shared affine Weyl group per Cartan datum."""
    if isinstance(datum, CartanDatum):
        return _affine_weyl_cached(datum.label)
    return _affine_weyl_cached(cartan_datum(datum).label)
