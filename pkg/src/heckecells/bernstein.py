"""
The center of the affine Hecke algebra and its transport to the
asymptotic ring of a cell.

Translation elements: for dominant lam the element theta_lam is plainly
T_{t_lam} (dominant translation lengths add, so these multiply), and
for general lam in the coroot lattice

    theta_lam = T_{t_{lam_+}} (T_{t_{lam_-}})^{-1}

for any decomposition lam = lam_+ - lam_- into dominant pieces; the
result is independent of the decomposition, which the tests check
explicitly.  The central element attached to a dominant weight lam of
the dual group is the weight-multiplicity sum

    B(V_lam) = sum_mu m_{V_lam}(mu) theta_mu,

and its centrality against every generator is an executable check, not
an assumption.

The homomorphism into a cell's ring multiplies by the sum of the
distinguished involutions' canonical basis elements, expands the result
canonically, discards the part supported in strictly lower cells, and
reads surviving C_w off as t_w.  Terms in strictly higher cells would
contradict the two-sided ideal property and raise IdealViolation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .affine import AffineElement, AffineWeyl
from .cells import CellAlgebra
from .errors import BoundExceeded, IdealViolation, NonDominant
from .hecke import (
    HeckeElement,
    KLCache,
    _mul_vec,
    _t_inverse_vec,
    _to_canonical_vec,
    _ts_left,
    Vec,
)
from .laurent import LaurentPoly
from .rootdata import Coweight, weyl_dim, weight_multiplicities

__all__ = [
    "CentralElement",
    "theta",
    "bernstein_central",
    "is_central",
    "phi_cell",
    "j_multiply_poly",
    "dominant_weights_by_dim",
]

# a strictly dominant member of the coroot lattice for each type, used
# to shift arbitrary lattice points into the dominant cone
_DOMINANT_SHIFT = {
    "A1": (2,),
    "A2": (1, 1),
    "C2": (1, 2),
    "G2": (1, 1),
}


def _dominant_decomposition(group: AffineWeyl, lam: Coweight):
    datum = group.datum
    xi = _DOMINANT_SHIFT[datum.label]
    k = 0
    while not datum.is_dominant(tuple(l + k * x for l, x in zip(lam, xi))):
        k += 1
    plus = tuple(l + k * x for l, x in zip(lam, xi))
    minus = tuple(k * x for x in xi)
    return plus, minus


def theta(group: AffineWeyl, lam: Coweight, shift: int = 0) -> HeckeElement:
    """The translation element theta_lam in the standard basis.

    ``shift`` adds that many extra copies of the dominant shift to both
    sides of the decomposition; the result must not depend on it.
    """
    datum = group.datum
    lam = datum.check_coweight(lam)
    if not datum.in_translation_lattice(lam):
        raise ValueError(f"{lam} is not in the coroot lattice")
    plus, minus = _dominant_decomposition(group, lam)
    if shift:
        xi = _DOMINANT_SHIFT[datum.label]
        plus = tuple(p + shift * x for p, x in zip(plus, xi))
        minus = tuple(m + shift * x for m, x in zip(minus, xi))
    vec: Vec = {group.translation(plus): {0: 1}}
    if any(minus):
        inv = _t_inverse_vec(group, group.translation(minus))
        vec = _mul_vec(group, vec, inv)
    return HeckeElement.from_raw(group, "standard", vec)


@dataclass(frozen=True)
class CentralElement:
    """A central Hecke element labeled by a dominant dual-group weight."""

    source: Coweight
    expansion: HeckeElement


def bernstein_central(group: AffineWeyl, lam: Coweight) -> CentralElement:
    """The central element B(V_lam) = sum of theta over the weights."""
    datum = group.datum
    lam = datum.check_coweight(lam)
    if not datum.is_dominant(lam):
        raise NonDominant(f"{lam} is not dominant")
    total: Vec = {}
    for mu, mult in sorted(weight_multiplicities(datum, lam).items()):
        vec = theta(group, mu).raw()
        for x, p in vec.items():
            q = total.setdefault(x, {})
            for e, c in p.items():
                val = q.get(e, 0) + mult * c
                if val:
                    q[e] = val
                elif e in q:
                    del q[e]
            if not q:
                del total[x]
    return CentralElement(lam, HeckeElement.from_raw(group, "standard", total))


def is_central(el: HeckeElement) -> bool:
    """Exact check that ``el`` commutes with every generator T_s."""
    group = el.group
    vec = el.raw()
    for i in range(group.num_gens):
        left = _ts_left(group, i, vec)
        # right multiplication through inverses: (el T_s)^T computed as
        # T_s acting on the left of the transposed element
        right: Vec = {}
        for x, p in vec.items():
            sx = group.right_mul(x, i)
            q = right.setdefault(sx, {})
            for e, c in p.items():
                val = q.get(e, 0) + c
                if val:
                    q[e] = val
                elif e in q:
                    del q[e]
            if not q:
                del right[sx]
            if sx.length < x.length:
                q = right.setdefault(x, {})
                for e, c in p.items():
                    for de, dc in ((-1, 1), (1, -1)):
                        val = q.get(e + de, 0) + dc * c
                        if val:
                            q[e + de] = val
                        elif e + de in q:
                            del q[e + de]
                if not q:
                    del right[x]
        if left != right:
            return False
    return True


def phi_cell(
    z: HeckeElement,
    algebra: CellAlgebra,
    cell_index: int,
) -> dict[AffineElement, LaurentPoly]:
    """Image of ``z`` in the cell's ring slice: multiply by the sum of
    the distinguished involutions' C-basis elements, expand canonically,
    drop strictly lower cells, and read C_w off as t_w."""
    cache = algebra.cache
    part = algebra.partition
    group = part.group
    duflos = algebra.duflo_involutions(cell_index)
    d_sum: Vec = {}
    for d in duflos:
        for x, p in cache.column(d).items():
            q = d_sum.setdefault(x, {})
            for e, c in p.items():
                val = q.get(e, 0) + c
                if val:
                    q[e] = val
                elif e in q:
                    del q[e]
            if not q:
                del d_sum[x]
    prod = _mul_vec(group, z.raw(), d_sum)
    canon = _to_canonical_vec(prod, cache)
    out: dict[AffineElement, LaurentPoly] = {}
    for w, p in canon.items():
        idx = part.classify(w)
        if idx is None:
            raise BoundExceeded(
                f"phi support element {w.word_str} is outside the computed "
                f"partition",
                needed=w.length,
            )
        if idx == cell_index:
            out[w] = LaurentPoly(p)
        elif part.below(idx, cell_index):
            continue  # the quotient kills strictly lower cells
        else:
            raise IdealViolation(
                f"phi produced a term at {w.word_str} in cell {idx}, not "
                f"below cell {cell_index}"
            )
    return out


def j_multiply_poly(
    algebra: CellAlgebra,
    a: dict[AffineElement, LaurentPoly],
    b: dict[AffineElement, LaurentPoly],
) -> dict[AffineElement, LaurentPoly]:
    """Bilinear extension of the t-basis product to A-coefficients."""
    out: dict[AffineElement, LaurentPoly] = {}
    for x, pa in a.items():
        for y, pb in b.items():
            scale = pa * pb
            if scale.is_zero():
                continue
            for z, g in algebra.t_product(x, y).items():
                val = out.get(z, LaurentPoly.zero()) + scale.scale(g)
                if val.is_zero():
                    out.pop(z, None)
                else:
                    out[z] = val
    return out


def jf_weight_correspondence(
    algebra: CellAlgebra,
    cell_index: int,
    weights,
) -> dict[Coweight, AffineElement]:
    """Identify minimal-coset basis elements of a cell with dominant
    weights through the center's image.

    For each dominant weight lam, the part of phi(B(V_lam)) supported on
    minimal double coset representatives must be a single basis element
    with coefficient one; that element is the match.  The zero weight
    pairs with the distinguished involution d^f.
    """
    group = algebra.group
    out: dict[Coweight, AffineElement] = {
        group.datum.zero_coweight(): algebra.jf_duflo(cell_index)
    }
    for lam in weights:
        z = bernstein_central(group, lam)
        image = phi_cell(z.expansion, algebra, cell_index)
        wf_part = {
            x: p for x, p in image.items() if group.is_min_double_coset_rep(x)
        }
        if len(wf_part) != 1:
            raise IdealViolation(
                f"phi(B(V_{lam})) has {len(wf_part)} minimal-coset terms, "
                f"expected exactly one"
            )
        x, p = next(iter(wf_part.items()))
        if p != LaurentPoly.one():
            raise IdealViolation(
                f"phi(B(V_{lam})) minimal-coset coefficient is {p}, "
                f"expected 1"
            )
        out[lam] = x
    return out


def dominant_weights_by_dim(datum, count: int, skip_zero: bool = True):
    """The first ``count`` dominant coroot-lattice weights by dimension.

    Ties break lexicographically on the label coordinates.  The search
    radius grows until enlarging it stops changing the answer, since
    dimensions grow monotonically in every coordinate.
    """
    from itertools import product as iproduct

    def best_within(radius):
        cands = []
        for coords in iproduct(range(radius + 1), repeat=datum.rank):
            lam = tuple(coords)
            if skip_zero and not any(lam):
                continue
            if datum.in_translation_lattice(lam):
                cands.append((weyl_dim(datum, lam), lam))
        cands.sort()
        return [lam for _, lam in cands[:count]]

    radius = count + 2
    found = best_within(radius)
    while True:
        bigger = best_within(radius + 2)
        if bigger == found and len(found) == count:
            return found
        found = bigger
        radius += 2
        if radius > 40:
            raise RuntimeError("dominant weight search did not converge")
