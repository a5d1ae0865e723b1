"""
Unipotent conjugacy classes of the dual group, from weighted Dynkin
diagrams, and the matching of two-sided cells to classes.

Only the marks are stored.  Everything else is recomputed at load time
from the dual root system: the semisimple element h of a standard sl2
triple grades the Lie algebra by ad-eigenvalues, root spaces landing in
the grade given by pairing the root with the marks, and

    dim Z(u) = dim g_0(h) + dim g_1(h),
    dim orbit = dim G - dim Z(u),
    springer_dim = (dim Z(u) - rank) / 2.

The recomputed orbit dimension is asserted against the stored value, so
a transposed table (the classic B2/C2 trap) fails immediately at load.

The grading element also grades any representation of the dual group:
a weight mu sits in grade <mu, h>, the pairing of its coordinates in
the dual simple-root basis with the marks.  ``trace_sv`` packages that
graded dimension count as a Laurent polynomial, the trace of the
diagonal one-parameter element attached to the class.

Cells match classes through a-value = Springer fiber dimension; the
matching must be a bijection and any failure is reported with full
diagnostics, never silently resolved.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NoBijection
from .laurent import LaurentPoly
from .rootdata import CartanDatum, Coweight, weight_multiplicities, weyl_dim

__all__ = [
    "UnipotentClass",
    "unipotent_classes",
    "jm_graded_dims",
    "trace_sv",
    "match_cells_to_classes",
]


@dataclass(frozen=True)
class UnipotentClass:
    label: str
    dynkin_marks: tuple[int, ...]
    dim_orbit: int
    dim_centralizer: int
    springer_dim: int
    reductive_centralizer_label: str


# label, marks on the dual simple roots, expected orbit dimension,
# reductive part of the centralizer (informational only).
# Marks are written in this package's dual-root order; for C2 the dual
# is B2 with the first simple root long, for G2 it is G2 with the first
# simple root long.
_CLASS_TABLES: dict[str, list[tuple[str, tuple[int, ...], int, str]]] = {
    "A1": [
        ("[1^2]", (0,), 0, "A1"),
        ("[2]", (2,), 2, "1"),
    ],
    "A2": [
        ("[1^3]", (0, 0), 0, "A2"),
        ("[2,1]", (1, 1), 4, "T1"),
        ("[3]", (2, 2), 6, "1"),
    ],
    "C2": [
        ("[1^5]", (0, 0), 0, "B2"),
        ("[2^2,1]", (0, 1), 4, "A1"),
        ("[3,1^2]", (2, 0), 6, "O2"),
        ("[5]", (2, 2), 8, "Z2"),
    ],
    "G2": [
        ("1", (0, 0), 0, "G2"),
        ("A1", (1, 0), 6, "A1"),
        ("A1~", (0, 1), 8, "A1"),
        ("G2(a1)", (2, 0), 10, "S3"),
        ("G2", (2, 2), 12, "1"),
    ],
}


def _grade_of_root(root, marks) -> int:
    return sum(r * m for r, m in zip(root, marks))


def unipotent_classes(datum: CartanDatum) -> list[UnipotentClass]:
    """All unipotent classes of the adjoint dual group, dimensions
    recomputed from the stored weighted Dynkin marks."""
    table = _CLASS_TABLES.get(datum.label)
    if table is None:
        raise ValueError(f"no class table for type {datum.label}")
    dual = datum.dual
    dim_g = 2 * dual.num_pos_roots + dual.rank
    out = []
    for label, marks, expected_orbit, red_label in table:
        grades = [_grade_of_root(beta, marks) for beta in dual.pos_roots]
        g0 = dual.rank + 2 * sum(1 for g in grades if g == 0)
        g1 = sum(1 for g in grades if abs(g) == 1)
        centralizer = g0 + g1
        orbit = dim_g - centralizer
        assert orbit == expected_orbit, (
            f"{datum.label} class {label}: recomputed orbit dimension "
            f"{orbit} != stored {expected_orbit}"
        )
        assert (centralizer - dual.rank) % 2 == 0
        springer = (centralizer - dual.rank) // 2
        assert springer >= 0
        out.append(
            UnipotentClass(
                label=label,
                dynkin_marks=marks,
                dim_orbit=orbit,
                dim_centralizer=centralizer,
                springer_dim=springer,
                reductive_centralizer_label=red_label,
            )
        )
    return out


def jm_graded_dims(
    datum: CartanDatum, lam: Coweight, cls: UnipotentClass
) -> dict[int, int]:
    """Dimensions of the ad(h)-grading of the dual irreducible V_lam.

    A weight sits in the grade obtained by pairing its dual-root
    coordinates with the class marks.  The result is symmetric about 0
    and totals dim V_lam.
    """
    grades: dict[int, int] = {}
    for mu, m in weight_multiplicities(datum, lam).items():
        coords = datum.coroot_coords(mu)
        g = sum(int(c) * mk for c, mk in zip(coords, cls.dynkin_marks))
        grades[g] = grades.get(g, 0) + m
    assert sum(grades.values()) == weyl_dim(datum, lam)
    assert all(grades.get(-g, 0) == d for g, d in grades.items())
    return grades


def trace_sv(
    datum: CartanDatum, lam: Coweight, cls: UnipotentClass
) -> LaurentPoly:
    """Graded dimension series sum_i dim(grade i) v^i for the class."""
    return LaurentPoly(jm_graded_dims(datum, lam, cls))


def match_cells_to_classes(algebra, classes: list[UnipotentClass]) -> list[tuple[int, str]]:
    """Match complete cells to classes through a-value = Springer dim.

    ``algebra`` is a CellAlgebra over a partition whose cells must all
    be complete with exact a-values.  Returns (cell index, class label)
    pairs; raises NoBijection with diagnostics when the pairing is not
    one to one.
    """
    part = algebra.partition
    problems = []
    for i in range(part.num_cells):
        if not part.complete[i]:
            problems.append(f"cell {i} is not complete at bound {part.bound}")
    cell_a: dict[int, int] = {}
    for i in range(part.num_cells):
        value, exact = algebra.a_function(i)
        if not exact:
            problems.append(f"cell {i}: a-value only bounded below by {value}")
        cell_a[i] = value
    if len(classes) != part.num_cells:
        problems.append(
            f"{part.num_cells} cells but {len(classes)} unipotent classes"
        )
    if problems:
        raise NoBijection("; ".join(problems))

    by_springer: dict[int, list[UnipotentClass]] = {}
    for cls in classes:
        by_springer.setdefault(cls.springer_dim, []).append(cls)
    matching = []
    for i in sorted(cell_a):
        a = cell_a[i]
        hits = by_springer.get(a, [])
        if len(hits) != 1:
            labels = [c.label for c in hits]
            raise NoBijection(
                f"cell {i} with a-value {a} matches {len(hits)} classes "
                f"{labels}; springer dims are "
                f"{sorted(c.springer_dim for c in classes)}"
            )
        matching.append((i, hits[0].label))
    matched_labels = {label for _, label in matching}
    if len(matched_labels) != len(classes):
        raise NoBijection(
            f"matching is not onto: {sorted(matched_labels)} vs "
            f"{sorted(c.label for c in classes)}"
        )
    return matching
