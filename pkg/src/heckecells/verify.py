"""
Executable identity suites over the computed structures.

Each check function returns (name, passed, detail) triples; suites
aggregate them per type.  All comparisons are exact.  The CLI ``verify``
subcommand prints one line per check, and the acceptance tests assert
the same triples, so the two surfaces cannot drift apart.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor

from .affine import AffineWeyl, affine_weyl
from .bernstein import (
    bernstein_central,
    dominant_weights_by_dim,
    is_central,
    j_multiply_poly,
    jf_weight_correspondence,
    phi_cell,
    theta,
)
from .cells import CellAlgebra, cell_partition
from .dualside import match_cells_to_classes, trace_sv, unipotent_classes
from .errors import BoundExceeded, NoBijection
from .hecke import KLCache, mul_standard, verify_kl_layer
from .laurent import LaurentPoly
from .rootdata import AFFINE_TYPES, tensor_decompose

Check = tuple[str, bool, str]

# per-type defaults: cell ball, gamma-table ball, KL verification ball
DEFAULT_BOUNDS = {"A1~": 8, "A2~": 12, "C2~": 12, "G2~": 14}
GAMMA_BOUNDS = {"A1~": 6, "A2~": 6, "C2~": 6, "G2~": 5}
KL_BOUNDS = {"A1~": 12, "A2~": 12, "C2~": 10, "G2~": 10}
SOLVE_BOUNDS = {"A1~": 8, "A2~": 8, "C2~": 6, "G2~": 5}


def _algebra(affine_label: str, bound: int, cache: KLCache) -> CellAlgebra:
    group = cache.group
    part = cell_partition(group, bound, cache)
    return CellAlgebra(part, cache)


def check_kl_layer(cache: KLCache, bound: int, solve_bound: int) -> list[Check]:
    results = verify_kl_layer(cache, bound, solve_bound=solve_bound)
    return [
        (f"kl/{name}", ok, f"ball {bound}")
        for name, ok in sorted(results.items())
    ]


def check_cells(
    algebra: CellAlgebra,
    expected_count: int | None = None,
    expected_a: list[int] | None = None,
) -> list[Check]:
    part = algebra.partition
    out: list[Check] = []
    all_complete = all(part.complete)
    out.append(
        (
            "cells/complete",
            all_complete,
            f"{part.num_cells} cells at bound {part.bound}",
        )
    )
    a_values = []
    all_exact = True
    for i in range(part.num_cells):
        value, exact = algebra.a_function(i)
        a_values.append(value)
        all_exact = all_exact and exact
    out.append(("cells/a_exact", all_exact, f"a-values {sorted(a_values)}"))
    if expected_count is not None:
        out.append(
            (
                "cells/count",
                part.num_cells == expected_count,
                f"got {part.num_cells}, expected {expected_count}",
            )
        )
    if expected_a is not None:
        out.append(
            (
                "cells/a_values",
                sorted(a_values) == sorted(expected_a),
                f"got {sorted(a_values)}, expected {sorted(expected_a)}",
            )
        )
    # structural invariants of the partition
    refine = True
    for lc in part.left_cells:
        cells = {part.cell_of[x] for x in lc}
        if len(cells) != 1:
            refine = False
    for rc in part.right_cells:
        cells = {part.cell_of[x] for x in rc}
        if len(cells) != 1:
            refine = False
    out.append(("cells/one_sided_refine", refine, "left/right refine two-sided"))
    inv_ok = all(
        part.cell_of[x.inverse()] == part.cell_of[x] for x in part.cell_of
    )
    out.append(("cells/inverse_stable", inv_ok, "x and x^-1 share a cell"))
    e_cell = part.two_sided_cells[part.cell_of[part.group.identity]]
    out.append(
        ("cells/identity_singleton", e_cell == [part.group.identity], "")
    )
    return out


def check_duflo(algebra: CellAlgebra) -> list[Check]:
    part = algebra.partition
    out: list[Check] = []
    per_left_ok = True
    delta_ok = True
    for i in range(part.num_cells):
        ds = algebra.duflo_involutions(i)
        a, _ = algebra.a_function(i)
        counts: dict[int, int] = {}
        for li, lc in enumerate(part.left_cells):
            n = sum(1 for d in ds if d in set(lc))
            counts[li] = n
            if n > 1:
                per_left_ok = False
        for z in part.two_sided_cells[i]:
            if z.is_involution():
                delta = algebra._delta(z)
                if delta < a or ((delta == a) != (z in ds)):
                    delta_ok = False
    out.append(
        ("duflo/at_most_one_per_left_cell", per_left_ok, "")
    )
    out.append(
        (
            "duflo/delta_criterion",
            delta_ok,
            "l(z) - 2 deg P_{e,z} >= a, equality exactly on the set",
        )
    )
    return out


def check_jring(algebra: CellAlgebra, gamma_algebra: CellAlgebra) -> list[Check]:
    """Idempotents, vanishing and the unit at full bound; gamma symmetry,
    positivity and associativity over the smaller gamma ball."""
    out: list[Check] = []
    part = algebra.partition

    idem = True
    vanish = True
    unit_ok = True
    for i in range(part.num_cells):
        ds = algebra.duflo_involutions(i)
        for d in ds:
            if algebra.t_product(d, d) != {d: 1}:
                idem = False
        for d1, d2 in itertools.permutations(ds, 2):
            if algebra.t_product(d1, d2) != {}:
                vanish = False
        unit = {d: 1 for d in ds}
        for w in part.two_sided_cells[i]:
            if algebra.j_multiply(unit, {w: 1}) != {w: 1}:
                unit_ok = False
            if algebra.j_multiply({w: 1}, unit) != {w: 1}:
                unit_ok = False
    out.append(("jring/duflo_idempotent", idem, "t_d t_d = t_d"))
    out.append(("jring/duflo_vanishing", vanish, "t_d' t_d = 0 for d' != d"))
    out.append(("jring/unit", unit_ok, "sum of t_d is a two-sided unit"))

    gpart = gamma_algebra.partition
    sym = True
    nonneg = True
    for i in range(gpart.num_cells):
        members = gpart.two_sided_cells[i]
        for x, y in itertools.product(members, repeat=2):
            for z in members:
                g = gamma_algebra.gamma(x, y, z)
                if g < 0:
                    nonneg = False
                if g != gamma_algebra.gamma(y, z, x):
                    sym = False
                if g != gamma_algebra.gamma(
                    y.inverse(), x.inverse(), z.inverse()
                ):
                    sym = False
    out.append(
        ("jring/gamma_symmetry", sym, f"gamma ball {gpart.bound}")
    )
    out.append(("jring/gamma_nonnegative", nonneg, ""))

    assoc = True
    in_ball = set(gpart.cell_of)
    for i in range(gpart.num_cells):
        members = gpart.two_sided_cells[i]
        for x, y, z in itertools.product(members, repeat=3):
            try:
                xy = gamma_algebra.t_product(x, y)
                yz = gamma_algebra.t_product(y, z)
                if not set(xy) <= in_ball or not set(yz) <= in_ball:
                    continue  # products leave the gamma ball
                lhs = gamma_algebra.j_multiply(xy, {z: 1})
                rhs = gamma_algebra.j_multiply({x: 1}, yz)
            except BoundExceeded:
                continue
            if lhs != rhs:
                assoc = False
    out.append(
        ("jring/associativity", assoc, f"in-ball triples, ball {gpart.bound}")
    )
    return out


def check_jf(algebra: CellAlgebra) -> list[Check]:
    out: list[Check] = []
    part = algebra.partition
    closure_ok = True
    detail = ""
    for i in range(part.num_cells):
        try:
            algebra.jf_subalgebra(i)
        except Exception as exc:  # ClosureViolation or a missing d^f
            closure_ok = False
            detail = f"cell {i}: {exc}"
    out.append(("jf/closure", closure_ok, detail))
    return out


def check_lowest_cell_rep_ring(algebra: CellAlgebra) -> list[Check]:
    """Products in the minimal-coset slice of the lowest cell against
    tensor product multiplicities of the dual group."""
    part = algebra.partition
    datum = algebra.group.datum
    low = next(i for i in range(part.num_cells) if part.is_lowest(i))
    if datum.label == "A1":
        check_weights = [(0,), (2,), (4,), (6,)]
        ident_weights = [(2 * k,) for k in range(1, 7)]
    else:
        check_weights = [datum.zero_coweight(), datum.dual_adjoint_weight()]
        ident_weights = dominant_weights_by_dim(datum, 4)
    corr = jf_weight_correspondence(algebra, low, ident_weights)
    inv = {x: lam for lam, x in corr.items()}
    ok = True
    detail = ""
    for l1, l2 in itertools.product(check_weights, repeat=2):
        want = tensor_decompose(datum, l1, l2)
        got_t = algebra.t_product(corr[l1], corr[l2])
        got = {}
        for z, c in got_t.items():
            lam = inv.get(z)
            if lam is None:
                ok = False
                detail = f"unidentified basis element {z.word_str}"
                break
            got[lam] = c
        if got != want:
            ok = False
            detail = detail or f"{l1} x {l2}: got {got}, want {want}"
    return [("jf/rep_ring", ok, detail or "products match tensor rule")]


def check_bernstein_phi(
    algebra: CellAlgebra,
    stability_algebra: CellAlgebra | None = None,
    jobs: int = 1,
) -> list[Check]:
    group = algebra.group
    datum = group.datum
    part = algebra.partition
    lams = dominant_weights_by_dim(datum, 2)
    out: list[Check] = []

    centrals = {lam: bernstein_central(group, lam) for lam in lams}
    central_ok = all(is_central(z.expansion) for z in centrals.values())
    out.append(("phi/centrality", central_ok, f"weights {lams}"))

    # multiplicativity of the center against the tensor ring
    mult_ok = True
    for l1, l2 in itertools.product(lams, repeat=2):
        prod = mul_standard(centrals[l1].expansion, centrals[l2].expansion)
        total: dict = {}
        for nu, m in tensor_decompose(datum, l1, l2).items():
            for x, p in bernstein_central(group, nu).expansion.terms.items():
                total[x] = total.get(x, LaurentPoly.zero()) + p.scale(m)
        total = {x: p for x, p in total.items() if p}
        if prod.terms != total:
            mult_ok = False
    out.append(("phi/center_multiplicative", mult_ok, "B is a ring map"))

    # theta decomposition independence
    theta_ok = True
    for lam in lams:
        for mu in ([-c for c in lam], list(lam)):
            mu = tuple(mu)
            if theta(group, mu) != theta(group, mu, shift=1):
                theta_ok = False
    out.append(("phi/theta_well_defined", theta_ok, ""))

    def phi_image(cell, lam):
        return phi_cell(centrals[lam].expansion, algebra, cell)

    cells = list(range(part.num_cells))
    images: dict[tuple[int, tuple], dict] = {}
    works = [(c, lam) for c in cells for lam in lams]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            for (c, lam), img in zip(
                works, pool.map(lambda cl: phi_image(*cl), works)
            ):
                images[(c, lam)] = img
    else:
        for c, lam in works:
            images[(c, lam)] = phi_image(c, lam)

    hom_ok = True
    for c in cells:
        for l1, l2 in itertools.product(lams, repeat=2):
            z12 = mul_standard(centrals[l1].expansion, centrals[l2].expansion)
            lhs = phi_cell(z12, algebra, c)
            rhs = j_multiply_poly(algebra, images[(c, l1)], images[(c, l2)])
            if lhs != rhs:
                hom_ok = False
    out.append(
        ("phi/homomorphism", hom_ok, f"all cells, weight pairs from {lams}")
    )

    if stability_algebra is not None:
        stable = True
        spart = stability_algebra.partition
        for c in cells:
            rep = part.two_sided_cells[c][0]
            sc = spart.cell_of[rep]
            for lam in lams:
                big = phi_cell(
                    centrals[lam].expansion, stability_algebra, sc
                )
                if big != images[(c, lam)]:
                    stable = False
        out.append(
            (
                "phi/stable_under_bigger_ball",
                stable,
                f"bound {part.bound} vs {spart.bound}",
            )
        )
    return out


def check_phi_trace(algebra: CellAlgebra) -> list[Check]:
    """The graded-dimension identity at the identity cell and the
    v-independence of the lowest cell's minimal-coset part."""
    group = algebra.group
    datum = group.datum
    part = algebra.partition
    classes = unipotent_classes(datum)
    adj = datum.dual_adjoint_weight()
    z = bernstein_central(group, adj)
    out: list[Check] = []

    e_cell = part.cell_of[group.identity]
    regular = max(classes, key=lambda c: c.dim_orbit)
    img = phi_cell(z.expansion, algebra, e_cell)
    want = {group.identity: trace_sv(datum, adj, regular)}
    out.append(
        (
            "phiBV/identity_cell_trace",
            img == want,
            f"t_e coefficient vs regular class series for V_{adj}",
        )
    )

    low = next(i for i in range(part.num_cells) if part.is_lowest(i))
    lams = dominant_weights_by_dim(datum, 2)
    shifts = set()
    v_indep = True
    for lam in lams:
        img = phi_cell(
            bernstein_central(group, lam).expansion, algebra, low
        )
        wf = {
            x: p
            for x, p in img.items()
            if group.is_min_double_coset_rep(x)
        }
        for p in wf.values():
            if not p.is_monomial():
                v_indep = False
            else:
                shifts.add(p.min_exp())
    v_indep = v_indep and len(shifts) <= 1
    shift = shifts.pop() if len(shifts) == 1 else None
    out.append(
        (
            "phiBV/lowest_cell_v_independent",
            v_indep and shift == 0,
            f"global shift {shift}",
        )
    )
    return out


def check_bijection(algebra: CellAlgebra) -> list[Check]:
    datum = algebra.group.datum
    classes = unipotent_classes(datum)
    try:
        matching = match_cells_to_classes(algebra, classes)
        detail = ", ".join(f"{i}->{label}" for i, label in matching)
        ok = True
    except NoBijection as exc:
        detail = str(exc)
        ok = False
    return [("bijection/cells_to_classes", ok, detail)]


# -- suite assembly ------------------------------------------------------------

EXPECTED_CELLS = {
    "A1~": (2, [0, 1]),
    "A2~": (3, [0, 1, 3]),
    "C2~": (4, [0, 1, 2, 4]),
    "G2~": (5, [0, 1, 2, 3, 6]),
}


def run_suite(
    suite: str,
    affine_label: str,
    cache: KLCache,
    bound: int | None = None,
    jobs: int = 1,
) -> list[Check]:
    if affine_label not in AFFINE_TYPES:
        raise ValueError(f"unknown affine type {affine_label!r}")
    if bound is None:
        bound = DEFAULT_BOUNDS[affine_label]
    checks: list[Check] = []
    if suite == "kl-suite":
        kl_bound = min(bound, KL_BOUNDS[affine_label])
        checks += check_kl_layer(
            cache, kl_bound, SOLVE_BOUNDS[affine_label]
        )
        return checks
    if suite == "cells-suite":
        algebra = _algebra(affine_label, bound, cache)
        count, a_vals = EXPECTED_CELLS[affine_label]
        checks += check_cells(algebra, count, a_vals)
        checks += check_duflo(algebra)
        checks += check_bijection(algebra)
        return checks
    if suite == "paper-suite":
        algebra = _algebra(affine_label, bound, cache)
        count, a_vals = EXPECTED_CELLS[affine_label]
        checks += check_cells(algebra, count, a_vals)
        checks += check_duflo(algebra)
        gamma_algebra = _algebra(
            affine_label, GAMMA_BOUNDS[affine_label], cache
        )
        checks += check_jring(algebra, gamma_algebra)
        checks += check_jf(algebra)
        if affine_label in ("A1~", "A2~"):
            rep_algebra = (
                algebra
                if affine_label == "A2~"
                else _algebra(affine_label, 16, cache)
            )
            checks += check_lowest_cell_rep_ring(rep_algebra)
            stability = _algebra(affine_label, bound + 2, cache)
            checks += check_bernstein_phi(algebra, stability, jobs=jobs)
            checks += check_phi_trace(algebra)
        checks += check_bijection(algebra)
        return checks
    raise ValueError(
        f"unknown suite {suite!r}; expected kl-suite, cells-suite or "
        f"paper-suite"
    )
