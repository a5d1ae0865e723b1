"""
The affine Hecke algebra over $Z[v, v^{-1}]$ in its standard and
canonical bases, with memoized Kazhdan-Lusztig data.

Normalization (the package-wide convention, stamped into caches and
reports):

* standard basis T_w with T_s T_w = T_{sw} when l(sw) > l(w) and
  T_s T_w = T_{sw} + (v^{-1} - v) T_w otherwise, so
  (T_s - v^{-1})(T_s + v) = 0;
* canonical basis C_w = sum_{x <= w} p_{x,w} T_x with p_{w,w} = 1 and
  p_{x,w} in v Z[v] for x < w; in particular C_s = T_s + v T_e;
* the bridge to the classical polynomials is
  p_{x,w}(v) = v^{l(w)-l(x)} P_{x,w}(v^{-2}).

Canonical columns are produced by the C_s-multiplication recursion

    C_s C_w = C_{sw} + sum_{z: sz < z} mu(z, w) C_z        (sw > w)

with mu(z, w) the coefficient of v in p_{z,w}.  An independent check,
the triangular bar-fixed-point solve against bar(T_z) = (T_{z^{-1}})^{-1},
is kept alongside as a test oracle.

Internally a Hecke element is a dict mapping group elements to raw
exponent->coefficient dicts; the public `HeckeElement` wraps values in
`LaurentPoly`.  The KL memo cache persists to a versioned, append-safe
record file: one JSON header line, then one JSON record
``[x_word, w_word, [[exp, coeff], ...]]`` per pair, where the diagonal
record of a column is always written last and acts as its commit
marker.  Truncated tails therefore leave at worst an ignorable,
incomplete column.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field

from . import CONVENTION_ID
from .affine import AffineElement, AffineWeyl, affine_weyl
from .errors import BasisMismatch, BoundExceeded, TypeMismatch
from .laurent import LaurentPoly
from .rootdata import CartanDatum

__all__ = [
    "HeckeElement",
    "KLCache",
    "t_element",
    "mul_standard",
    "bar_standard",
    "kl_polynomial",
    "canonical_basis_element",
    "to_canonical",
    "to_standard",
    "structure_constants",
    "kl_by_bar_solve",
    "verify_kl_layer",
]

Poly = dict[int, int]
Vec = dict[AffineElement, Poly]


# -- raw polynomial-vector helpers -------------------------------------------


def _acc(dst: Poly, src: Poly, coeff: int = 1, shift: int = 0) -> None:
    """dst += coeff * v^shift * src, in place."""
    for e, c in src.items():
        k = e + shift
        val = dst.get(k, 0) + coeff * c
        if val:
            dst[k] = val
        elif k in dst:
            del dst[k]


def _acc_poly(dst: Poly, src: Poly, poly: Poly) -> None:
    """dst += poly * src, in place."""
    for e, c in poly.items():
        _acc(dst, src, c, e)


def _vec_acc(dst: Vec, src: Vec, poly: Poly | None = None) -> None:
    for x, p in src.items():
        q = dst.setdefault(x, {})
        if poly is None:
            _acc(q, p)
        else:
            _acc_poly(q, p, poly)
        if not q:
            del dst[x]


def _ts_left(group: AffineWeyl, i: int, vec: Vec) -> Vec:
    """T_{s_i} * vec in the standard basis."""
    out: Vec = {}
    for x, p in vec.items():
        sx = group.left_mul(i, x)
        q = out.setdefault(sx, {})
        _acc(q, p)
        if not q:
            del out[sx]
        if sx.length < x.length:
            q = out.setdefault(x, {})
            _acc(q, p, 1, -1)  # +v^{-1} p
            _acc(q, p, -1, 1)  # -v p
            if not q:
                del out[x]
    return out


def _ts_inv_left(group: AffineWeyl, i: int, vec: Vec) -> Vec:
    """T_{s_i}^{-1} * vec = (T_{s_i} + (v - v^{-1})) * vec."""
    out = _ts_left(group, i, vec)
    for x, p in vec.items():
        q = out.setdefault(x, {})
        _acc(q, p, 1, 1)
        _acc(q, p, -1, -1)
        if not q:
            del out[x]
    return out


def _cs_left(group: AffineWeyl, i: int, vec: Vec) -> Vec:
    """C_{s_i} * vec: on T_x it gives T_{sx} + v^{+-1} T_x."""
    out: Vec = {}
    for x, p in vec.items():
        sx = group.left_mul(i, x)
        shift = 1 if sx.length > x.length else -1
        q = out.setdefault(sx, {})
        _acc(q, p)
        if not q:
            del out[sx]
        q = out.setdefault(x, {})
        _acc(q, p, 1, shift)
        if not q:
            del out[x]
    return out


def _t_word_left(group: AffineWeyl, word, vec: Vec) -> Vec:
    """T_u * vec for u given by a reduced word."""
    for i in reversed(word):
        vec = _ts_left(group, i, vec)
    return vec


def _mul_vec(group: AffineWeyl, a: Vec, b: Vec) -> Vec:
    """Product of two standard-basis vectors."""
    out: Vec = {}
    for u, p in a.items():
        term = _t_word_left(group, u.word, b)
        _vec_acc(out, term, p)
    return out


def _bar_poly(p: Poly) -> Poly:
    return {-e: c for e, c in p.items()}


# -- public element type -------------------------------------------------------


@dataclass(frozen=True)
class HeckeElement:
    """A finite A-linear combination of group elements in a tagged basis."""

    group: AffineWeyl
    basis: str  # "standard" | "canonical"
    terms: dict[AffineElement, LaurentPoly]

    def __post_init__(self):
        if self.basis not in ("standard", "canonical"):
            raise BasisMismatch(f"unknown basis tag {self.basis!r}")

    @classmethod
    def from_raw(cls, group: AffineWeyl, basis: str, vec: Vec) -> "HeckeElement":
        return cls(
            group,
            basis,
            {x: LaurentPoly(p) for x, p in vec.items() if p},
        )

    def raw(self) -> Vec:
        return {x: p.terms() for x, p in self.terms.items()}

    def coeff(self, x: AffineElement) -> LaurentPoly:
        return self.terms.get(x, LaurentPoly.zero())

    def support(self) -> list[AffineElement]:
        return sorted(self.terms, key=AffineElement.sort_key)

    def max_length(self) -> int:
        return max((x.length for x in self.terms), default=0)

    def __eq__(self, other):
        return (
            isinstance(other, HeckeElement)
            and self.group is other.group
            and self.basis == other.basis
            and self.terms == other.terms
        )

    def __repr__(self):
        tag = "T" if self.basis == "standard" else "C"
        bits = [
            f"({p})*{tag}[{x.word_str}]"
            for x, p in sorted(self.terms.items(), key=lambda kv: kv[0].sort_key())
        ]
        return " + ".join(bits) if bits else "0"


def t_element(group: AffineWeyl, x: AffineElement, poly=None) -> HeckeElement:
    coeff = LaurentPoly.one() if poly is None else poly
    return HeckeElement(group, "standard", {x: coeff})


def _check_same(a: HeckeElement, b: HeckeElement) -> AffineWeyl:
    if a.group is not b.group:
        raise TypeMismatch("elements over different Cartan data")
    return a.group


def mul_standard(a: HeckeElement, b: HeckeElement) -> HeckeElement:
    group = _check_same(a, b)
    if a.basis != "standard" or b.basis != "standard":
        raise BasisMismatch("mul_standard needs both factors in the T basis")
    return HeckeElement.from_raw(group, "standard", _mul_vec(group, a.raw(), b.raw()))


def _t_inverse_vec(group: AffineWeyl, x: AffineElement) -> Vec:
    """(T_x)^{-1} as a standard-basis vector."""
    vec: Vec = {group.identity: {0: 1}}
    for i in x.word:
        vec = _ts_inv_left(group, i, vec)
    return vec


def _bar_vec(group: AffineWeyl, vec: Vec) -> Vec:
    """Bar involution: v -> v^{-1}, T_x -> (T_{x^{-1}})^{-1}."""
    out: Vec = {}
    for x, p in vec.items():
        bar_tx = _t_inverse_vec(group, x.inverse())
        _vec_acc(out, bar_tx, _bar_poly(p))
    return out


def bar_standard(a: HeckeElement) -> HeckeElement:
    if a.basis != "standard":
        raise BasisMismatch("bar_standard needs the T basis")
    return HeckeElement.from_raw(a.group, "standard", _bar_vec(a.group, a.raw()))


# -- the KL cache ---------------------------------------------------------------


FORMAT_VERSION = 1


class KLCache:
    """Memo table of canonical-basis columns, with file persistence.

    ``column(w)`` is the T-basis expansion of C_w as a raw vector
    ``{x: {exp: coeff}}``; entries are exactly the p_{x,w} for x <= w.
    Construction is driven per length ball so that every dependency of
    a column is already present.  Two workers computing the same column
    produce identical values, so concurrent idempotent writes are safe.
    """

    def __init__(self, group: AffineWeyl):
        self.group = group
        self.type_label = group.datum.label + "~"
        self.convention_id = CONVENTION_ID
        self._columns: dict[AffineElement, dict[AffineElement, Poly]] = {}
        self._ball_done = -1
        self._dirty: list[AffineElement] = []

    # -- construction -----------------------------------------------------

    def ensure_ball(self, bound: int) -> None:
        if bound <= self._ball_done:
            return
        group = self.group
        for x in group.ball(bound):
            if x not in self._columns:
                self._build_column(x)
        self._ball_done = bound

    def _build_column(self, w: AffineElement) -> None:
        group = self.group
        if w.length == 0:
            self._columns[w] = {w: {0: 1}}
            self._dirty.append(w)
            return
        i = min(group.left_descents(w))
        wp = group.left_mul(i, w)
        col = self._columns[wp]
        prod = _cs_left(group, i, col)
        for z, p in col.items():
            if z is wp:
                continue
            mu = p.get(1, 0)
            if mu and group.left_mul(i, z).length < z.length:
                _vec_acc(prod, self._columns[z], {0: -mu})
        diag = prod.get(w)
        assert diag == {0: 1}, f"bad diagonal for {w}"
        for x, p in prod.items():
            if x is not w:
                assert min(p) >= 1, f"p_{x},{w} not in vZ[v]: {p}"
        self._columns[w] = prod
        self._dirty.append(w)

    def column(self, w: AffineElement) -> dict[AffineElement, Poly]:
        if w not in self._columns:
            self.ensure_ball(w.length)
        return self._columns[w]

    def has_column(self, w: AffineElement) -> bool:
        return w in self._columns

    def mu(self, z: AffineElement, w: AffineElement) -> int:
        """Coefficient of v in p_{z,w}; zero unless z < w."""
        p = self.column(w).get(z)
        return p.get(1, 0) if p else 0

    def num_columns(self) -> int:
        return len(self._columns)

    # -- persistence ------------------------------------------------------

    def header(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "type_label": self.type_label,
            "convention_id": self.convention_id,
        }

    def save(self, path: str) -> int:
        """Append the not-yet-persisted columns; returns records written."""
        new_file = not os.path.exists(path) or os.path.getsize(path) == 0
        written = 0
        with open(path, "a", encoding="ascii") as fh:
            if new_file:
                fh.write(json.dumps(self.header(), sort_keys=True) + "\n")
            for w in sorted(self._dirty, key=AffineElement.sort_key):
                col = self._columns[w]
                rows = sorted(
                    ((x, p) for x, p in col.items() if x is not w),
                    key=lambda kv: kv[0].sort_key(),
                )
                for x, p in rows:
                    fh.write(_record_line(x, w, p))
                    written += 1
                # diagonal last: the commit marker for the column
                fh.write(_record_line(w, w, col[w]))
                written += 1
        self._dirty = []
        return written

    def load(self, path: str) -> int:
        """Merge complete columns from ``path``; returns columns added."""
        with open(path, encoding="ascii") as fh:
            head_line = fh.readline()
            if not head_line:
                return 0
            head = json.loads(head_line)
            for key, want in self.header().items():
                got = head.get(key)
                if got != want:
                    raise ValueError(
                        f"cache file {path!r} has {key}={got!r}, expected {want!r}"
                    )
            lines = [line for line in fh.read().split("\n") if line.strip()]
        try:
            # fast path: one parse for the whole record stream
            records = json.loads("[" + ",".join(lines) + "]")
        except ValueError:
            # torn tail of an interrupted append: fall back to per line
            records = []
            for line in lines:
                try:
                    records.append(json.loads(line))
                except ValueError:
                    continue
        pending: dict[AffineElement, dict[AffineElement, Poly]] = {}
        added = 0
        group = self.group
        for record in records:
            try:
                x_word, w_word, pairs = record
            except (ValueError, TypeError):
                continue
            x = group.parse_word(x_word)
            w = group.parse_word(w_word)
            pending.setdefault(w, {})[x] = {int(e): int(c) for e, c in pairs}
            if x is w:  # column committed
                if w not in self._columns:
                    self._columns[w] = pending.pop(w)
                    added += 1
                else:
                    pending.pop(w, None)
        return added


def _record_line(x: AffineElement, w: AffineElement, p: Poly) -> str:
    pairs = sorted(p.items())
    return json.dumps([x.word_str, w.word_str, pairs]) + "\n"


# -- KL polynomials and basis conversion ------------------------------------------


def kl_polynomial(
    x: AffineElement, w: AffineElement, cache: KLCache
) -> LaurentPoly:
    """p_{x,w} in the v-normalization; zero when x is not below w."""
    p = cache.column(w).get(x)
    return LaurentPoly(p) if p else LaurentPoly.zero()


def canonical_basis_element(w: AffineElement, cache: KLCache) -> HeckeElement:
    """C_w expanded in the standard basis."""
    col = cache.column(w)
    return HeckeElement.from_raw(cache.group, "standard", {x: dict(p) for x, p in col.items()})


def _to_canonical_vec(vec: Vec, cache: KLCache) -> Vec:
    work = {x: dict(p) for x, p in vec.items()}
    if work:
        cache.ensure_ball(max(x.length for x in work))
    out: Vec = {}
    while work:
        x = max(work, key=AffineElement.sort_key)
        c = work.pop(x)
        out[x] = c
        col = cache.column(x)
        for z, p in col.items():
            if z is x:
                continue
            q = work.setdefault(z, {})
            _acc_poly(q, p, {e: -co for e, co in c.items()})
            if not q:
                del work[z]
    return out


def to_canonical(a: HeckeElement, cache: KLCache) -> HeckeElement:
    if a.basis != "standard":
        raise BasisMismatch("to_canonical expects the T basis")
    return HeckeElement.from_raw(
        a.group, "canonical", _to_canonical_vec(a.raw(), cache)
    )


def _to_standard_vec(vec: Vec, cache: KLCache) -> Vec:
    out: Vec = {}
    for w, c in vec.items():
        _vec_acc(out, cache.column(w), c)
    return out


def to_standard(a: HeckeElement, cache: KLCache) -> HeckeElement:
    if a.basis != "canonical":
        raise BasisMismatch("to_standard expects the C basis")
    return HeckeElement.from_raw(
        a.group, "standard", _to_standard_vec(a.raw(), cache)
    )


def product_h_vec(
    x: AffineElement, y: AffineElement, cache: KLCache
) -> Vec:
    """C_x C_y expanded back in the canonical basis: z -> h_{x,y,z}."""
    group = cache.group
    cache.ensure_ball(x.length)
    cache.ensure_ball(y.length)
    prod = _mul_vec(group, dict(cache.column(x)), dict(cache.column(y)))
    return _to_canonical_vec(prod, cache)


def structure_constants(
    x: AffineElement, y: AffineElement, cache: KLCache, bound: int
) -> dict[AffineElement, LaurentPoly]:
    """The map z -> h_{x,y,z} with C_x C_y = sum_z h_{x,y,z} C_z.

    Raises BoundExceeded when the support leaves the length ball of
    radius ``bound``; nothing is ever silently truncated.
    """
    group = cache.group
    prod = _mul_vec(group, dict(cache.column(x)), dict(cache.column(y)))
    maxlen = max((z.length for z in prod), default=0)
    if maxlen > bound:
        raise BoundExceeded(
            f"support of C[{x.word_str}] C[{y.word_str}] reaches length "
            f"{maxlen} > bound {bound}",
            needed=maxlen,
        )
    h = _to_canonical_vec(prod, cache)
    return {z: LaurentPoly(p) for z, p in h.items()}


# -- independent oracle: triangular bar-fixed-point solve --------------------------


def kl_by_bar_solve(w: AffineElement, group: AffineWeyl) -> dict[AffineElement, LaurentPoly]:
    """Solve for C_w directly from bar-invariance and the degree bound.

    Wholly independent of the C_s recursion: uses only bar(T_z) and the
    Bruhat order.  Intended as a test oracle at small lengths.
    """
    interval = [z for z in group.ball(w.length) if group.bruhat_leq(z, w)]
    interval.sort(key=AffineElement.sort_key, reverse=True)
    bar_t: dict[AffineElement, Vec] = {}
    for z in interval:
        vec = _t_inverse_vec(group, z.inverse())
        bar_t[z] = vec
    p: dict[AffineElement, Poly] = {w: {0: 1}}
    for x in interval[1:]:
        q: Poly = {}
        for z in interval:
            if z is x or z not in p:
                continue
            r = bar_t[z].get(x)
            if r:
                _acc_poly(q, r, _bar_poly(p[z]))
        # q must split as p_x - bar(p_x) with p_x in vZ[v]
        px = {e: c for e, c in q.items() if e > 0}
        check: Poly = dict(px)
        _acc(check, _bar_poly(px), -1)
        assert check == q, (w, x, q)
        if px:
            p[x] = px
    return {x: LaurentPoly(poly) for x, poly in p.items()}


# -- whole-layer verification -------------------------------------------------------


def verify_kl_layer(cache: KLCache, bound: int, solve_bound: int = 0) -> dict[str, bool]:
    """Run the KL-layer invariants on the full ball of radius ``bound``.

    Returns a name -> passed map; all checks are exact.
    """
    group = cache.group
    cache.ensure_ball(bound)
    ball = group.ball(bound)

    positivity = True
    degree_bounds = True
    for w in ball:
        col = cache.column(w)
        for x, p in col.items():
            if any(c < 0 for c in p.values()):
                positivity = False
            diff = w.length - x.length
            if x is not w:
                if min(p) < 1 or max(p) > diff or p.get(diff) != 1:
                    degree_bounds = False
                if any((e - diff) % 2 for e in p):
                    degree_bounds = False

    bar_invariant = True
    for w in ball:
        vec = dict(cache.column(w))
        if _bar_vec(group, vec) != vec:
            bar_invariant = False
            break

    round_trip = True
    for w in ball:
        vec = {w: {0: 1}}
        back = _to_canonical_vec(_to_standard_vec(vec, cache), cache)
        if back != vec:
            round_trip = False
            break

    solve_agrees = True
    if solve_bound:
        for w in group.ball(solve_bound):
            got = kl_by_bar_solve(w, group)
            want = {x: LaurentPoly(p) for x, p in cache.column(w).items()}
            if got != want:
                solve_agrees = False
                break

    out = {
        "positivity": positivity,
        "degree_bounds": degree_bounds,
        "bar_invariant": bar_invariant,
        "round_trip": round_trip,
    }
    if solve_bound:
        out["bar_solve_agrees"] = solve_agrees
    return out
