"""
Kazhdan-Lusztig cells within a length ball, and the asymptotic ring.

The left preorder is generated by the appearances in canonical-basis
products with the generators:

    C_s C_y = C_{sy} + sum_{z: sz < z} mu(z, y) C_z      (sy > y),

so the outgoing edges of y are sy together with the mu-targets; the
right preorder is the left one transported through inverses, and the
two-sided preorder is their join.  Cells are the strongly connected
components of the resulting graph on the ball.

Everything the paper's objects do at the level of Grothendieck groups is
driven by three exact quantities per cell:

* the a-value, the largest power of v^{-1} appearing in any structure
  constant h_{x,y,z} over the cell.  We certify it by a two-sided
  squeeze: diagonal products C_{y^{-1}} C_y push a lower bound up, and
  min over involutions z of (l(z) - 2 deg P_{e,z}) is an upper bound,
  tight exactly at distinguished involutions.  When the bounds meet the
  value is exact; otherwise it is reported as a lower bound.
* gamma_{x,y,z^{-1}}, the coefficient of v^{-a(z)} in h_{x,y,z}; these
  are the structure constants t_x t_y = sum_z gamma_{x,y,z^{-1}} t_z of
  the asymptotic ring.
* the distinguished (Duflo) involutions, d = d^{-1} with
  l(d) - 2 deg P_{e,d} = a(d); their t_d sum is the unit of the cell's
  ring summand.

Ball truncation is handled honestly: each cell carries a completeness
flag, true when recomputing the partition in the ball of radius
bound + 2 leaves the cell's membership unchanged, and the bigger
partition is kept for classifying product supports that spill past the
requested bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .affine import AffineElement, AffineWeyl, affine_weyl
from .errors import BoundExceeded, ClosureViolation, InexactAValue
from .hecke import KLCache, Poly, product_h_vec
from .laurent import LaurentPoly
from .rootdata import CartanDatum

__all__ = ["CellPartition", "JRing", "CellAlgebra", "cell_partition"]

Graph = dict[AffineElement, list[AffineElement]]


def _left_edges(group: AffineWeyl, cache: KLCache, ball: list[AffineElement]) -> Graph:
    in_ball = set(ball)
    adj: Graph = {y: [] for y in ball}
    for y in ball:
        targets = set()
        non_desc = [
            i for i in range(group.num_gens) if i not in group.left_descents(y)
        ]
        for i in non_desc:
            sy = group.left_mul(i, y)
            if sy in in_ball:
                targets.add(sy)
        if non_desc and y.length:
            col = cache.column(y)
            for z, p in col.items():
                if z is y or 1 not in p:
                    continue
                zdesc = group.left_descents(z)
                if any(i in zdesc for i in non_desc):
                    targets.add(z)
        adj[y] = sorted(targets, key=AffineElement.sort_key)
    return adj


def _transport_edges(graph: Graph) -> Graph:
    """Right edges: x <=_R y iff x^{-1} <=_L y^{-1}."""
    out: Graph = {}
    for y in graph:
        yi = y.inverse()
        out[yi] = sorted(
            (t.inverse() for t in graph[y]), key=AffineElement.sort_key
        )
    return out


def _union(a: Graph, b: Graph) -> Graph:
    out: Graph = {}
    for y in a:
        out[y] = sorted(set(a[y]) | set(b[y]), key=AffineElement.sort_key)
    return out


def _sccs(graph: Graph) -> list[list[AffineElement]]:
    """Tarjan's algorithm, iterative, deterministic component order."""
    index: dict[AffineElement, int] = {}
    low: dict[AffineElement, int] = {}
    on_stack: set[AffineElement] = set()
    stack: list[AffineElement] = []
    comps: list[list[AffineElement]] = []
    counter = 0
    for root in graph:
        if root in index:
            continue
        work = [(root, iter(graph[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            node, it = work[-1]
            advanced = False
            for nxt in it:
                if nxt not in index:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack.add(nxt)
                    work.append((nxt, iter(graph[nxt])))
                    advanced = True
                    break
                if nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                comp = []
                while True:
                    x = stack.pop()
                    on_stack.discard(x)
                    comp.append(x)
                    if x is node:
                        break
                comp.sort(key=AffineElement.sort_key)
                comps.append(comp)
    comps.sort(key=lambda c: c[0].sort_key())
    return comps


@dataclass
class CellPartition:
    """Cell decomposition of a length ball."""

    group: AffineWeyl
    bound: int
    left_cells: list[list[AffineElement]]
    right_cells: list[list[AffineElement]]
    two_sided_cells: list[list[AffineElement]]
    cell_order: set[tuple[int, int]]  # (i, j): cell i strictly below cell j
    complete: list[bool]
    cell_of: dict[AffineElement, int]
    extended: "CellPartition | None" = None
    big_to_small: dict[int, int] = field(default_factory=dict)

    @property
    def num_cells(self) -> int:
        return len(self.two_sided_cells)

    def classify(self, x: AffineElement) -> int | None:
        """Cell index of x, consulting the extended partition if needed.

        Extended cells translate back only through complete cells, where
        membership provably agrees; None when x cannot be classified.
        """
        idx = self.cell_of.get(x)
        if idx is not None or self.extended is None:
            return idx
        big = self.extended.cell_of.get(x)
        if big is None:
            return None
        return self.big_to_small.get(big)

    def below(self, i: int, j: int) -> bool:
        return (i, j) in self.cell_order

    def is_lowest(self, i: int) -> bool:
        return all(
            self.below(i, j) for j in range(self.num_cells) if j != i
        )


def _raw_partition(
    group: AffineWeyl, bound: int, cache: KLCache
) -> CellPartition:
    cache.ensure_ball(bound)
    ball = group.ball(bound)
    left = _left_edges(group, cache, ball)
    right = _transport_edges(left)
    both = _union(left, right)
    two_sided = _sccs(both)
    cell_of = {x: i for i, comp in enumerate(two_sided) for x in comp}

    # strict order on cells from condensation reachability;
    # an edge y -> x means cell(x) <= cell(y)
    succ: dict[int, set[int]] = {i: set() for i in range(len(two_sided))}
    for y, targets in both.items():
        cy = cell_of[y]
        for t in targets:
            ct = cell_of[t]
            if ct != cy:
                succ[cy].add(ct)
    reach: dict[int, set[int]] = {}

    def _reach(i: int) -> set[int]:
        if i in reach:
            return reach[i]
        out: set[int] = set()
        reach[i] = out  # cells form a DAG; safe placeholder
        for j in succ[i]:
            out.add(j)
            out |= _reach(j)
        return out

    order = {(j, i) for i in succ for j in _reach(i)}

    return CellPartition(
        group=group,
        bound=bound,
        left_cells=_sccs(left),
        right_cells=_sccs(right),
        two_sided_cells=two_sided,
        cell_order=order,
        complete=[False] * len(two_sided),
        cell_of=cell_of,
    )


def _restrict(
    cells: list[list[AffineElement]], keep: set[AffineElement]
) -> list[list[AffineElement]]:
    out = [[x for x in comp if x in keep] for comp in cells]
    out = [comp for comp in out if comp]
    out.sort(key=lambda c: c[0].sort_key())
    return out


def cell_partition(
    datum: CartanDatum | AffineWeyl,
    bound: int,
    cache: KLCache,
    max_extension: int = 12,
) -> CellPartition:
    """Cells in the ball of radius ``bound``, with completeness flags.

    Near the boundary of a ball, elements of one true cell can fall into
    separate strongly connected components because their connecting
    paths pass through longer elements.  The partition is therefore
    computed on successively enlarged balls and restricted back to the
    requested one, growing by two until three consecutive enlargements
    agree on the restriction (stability under two successive
    increments), or ``max_extension`` is reached.  A cell is flagged
    complete when its membership is a block of all of the last three
    restrictions.  The final enlarged partition is kept for classifying
    product supports that spill past the requested bound.
    """
    group = datum if isinstance(datum, AffineWeyl) else affine_weyl(datum)
    raws: list[CellPartition] = []
    blocks: list[set[frozenset[AffineElement]]] = []
    in_ball: set[AffineElement] | None = None
    ext = 2
    while True:
        raw = _raw_partition(group, bound + ext, cache)
        raws.append(raw)
        if in_ball is None:
            in_ball = {x for x in raw.cell_of if x.length <= bound}
        blocks.append(
            {frozenset(c) for c in _restrict(raw.two_sided_cells, in_ball)}
        )
        if len(blocks) >= 3 and blocks[-1] == blocks[-2] == blocks[-3]:
            break
        if ext >= max_extension:
            break
        ext += 2

    big = raws[-1]
    two_sided = _restrict(big.two_sided_cells, in_ball)
    cell_of = {x: i for i, comp in enumerate(two_sided) for x in comp}
    earlier = blocks[-3:-1] if len(blocks) >= 3 else blocks[:-1]
    complete = [
        all(frozenset(comp) in b for b in earlier) if earlier else False
        for comp in two_sided
    ]

    big_to_small: dict[int, int] = {}
    for i, comp in enumerate(two_sided):
        big_to_small[big.cell_of[comp[0]]] = i

    # order induced from the enlarged condensation
    order = set()
    for bi, bj in big.cell_order:
        i = big_to_small.get(bi)
        j = big_to_small.get(bj)
        if i is not None and j is not None and i != j:
            order.add((i, j))

    return CellPartition(
        group=group,
        bound=bound,
        left_cells=_restrict(big.left_cells, in_ball),
        right_cells=_restrict(big.right_cells, in_ball),
        two_sided_cells=two_sided,
        cell_order=order,
        complete=complete,
        cell_of=cell_of,
        extended=big,
        big_to_small=big_to_small,
    )


# ---------------------------------------------------------------------------


@dataclass
class JRing:
    """The computed slice of one cell's summand of the asymptotic ring."""

    cell_index: int
    a_value: int
    a_exact: bool
    basis: list[AffineElement]
    duflo: list[AffineElement]


class CellAlgebra:
    """Cell-level computations over one partition and KL cache.

    Memoizes structure-constant products, a-values and Duflo sets; all
    public results are exact integers and Laurent polynomials.
    """

    def __init__(self, partition: CellPartition, cache: KLCache):
        self.partition = partition
        self.cache = cache
        self.group = partition.group
        self._h_memo: dict[tuple[AffineElement, AffineElement], dict] = {}
        self._a_memo: dict[int, tuple[int, bool]] = {}
        self._duflo_memo: dict[int, list[AffineElement]] = {}

    # -- raw products -------------------------------------------------------

    def h_product(self, x: AffineElement, y: AffineElement) -> dict:
        key = (x, y)
        h = self._h_memo.get(key)
        if h is None:
            h = product_h_vec(x, y, self.cache)
            self._h_memo[key] = h
        return h

    # -- the a-function ------------------------------------------------------

    def _delta(self, z: AffineElement) -> int:
        """l(z) - 2 deg P_{e,z}, i.e. the lowest exponent of p_{e,z}."""
        p = self.cache.column(z)[self.group.identity]
        return min(p)

    def a_function(self, cell_index: int) -> tuple[int, bool]:
        """The cell's a-value and whether it is certified exact.

        Lower bounds come from v^{-1}-degrees of diagonal products over
        members in increasing length; the upper bound is the smallest
        l(z) - 2 deg P_{e,z} over involutions in the cell.  Their meeting
        certifies the exact value; otherwise the max found is reported as
        a lower bound.
        """
        got = self._a_memo.get(cell_index)
        if got is not None:
            return got
        part = self.partition
        members = part.two_sided_cells[cell_index]
        upper = min(
            (self._delta(z) for z in members if z.is_involution()),
            default=None,
        )
        cap = self.group.datum.num_pos_roots
        low = 0
        exact = False
        for y in sorted(members, key=AffineElement.sort_key):
            h = self.h_product(y.inverse(), y)
            for z, p in h.items():
                if part.cell_of.get(z) == cell_index:
                    d = -min(p)
                    if d > low:
                        low = d
            assert low <= cap, (cell_index, low, cap)
            if upper is not None and low == upper:
                exact = True
                break
        self._a_memo[cell_index] = (low, exact)
        return (low, exact)

    def a_of(self, x: AffineElement) -> int:
        idx = self.partition.classify(x)
        if idx is None:
            raise BoundExceeded(
                f"{x.word_str} lies outside the computed partition",
                needed=x.length,
            )
        value, exact = self.a_function(idx)
        if not exact:
            raise InexactAValue(
                f"a-value of cell {idx} is only known to be >= {value}"
            )
        return value

    # -- distinguished involutions ---------------------------------------------

    def duflo_involutions(self, cell_index: int) -> list[AffineElement]:
        got = self._duflo_memo.get(cell_index)
        if got is None:
            a, exact = self.a_function(cell_index)
            if not exact:
                raise InexactAValue(
                    f"cell {cell_index}: need an exact a-value for the "
                    f"distinguished involutions"
                )
            got = [
                z
                for z in self.partition.two_sided_cells[cell_index]
                if z.is_involution() and self._delta(z) == a
            ]
            got.sort(key=AffineElement.sort_key)
            self._duflo_memo[cell_index] = got
        return got

    # -- gamma and the J-ring -----------------------------------------------------

    def gamma(self, x: AffineElement, y: AffineElement, z: AffineElement) -> int:
        """gamma_{x,y,z}: coefficient of v^{-a(z)} in h_{x,y,z^{-1}}."""
        a = self.a_of(z)
        h = self.h_product(x, y)
        p = h.get(z.inverse())
        return p.get(-a, 0) if p else 0

    def j_multiply(
        self,
        a: dict[AffineElement, int],
        b: dict[AffineElement, int],
    ) -> dict[AffineElement, int]:
        """t-basis product of two integer combinations.

        Every support element of every Hecke product must be
        classifiable (by the extended partition at worst); otherwise a
        gamma could be missed and BoundExceeded is raised.
        """
        out: dict[AffineElement, int] = {}
        for x, cx in a.items():
            if cx == 0:
                continue
            for y, cy in b.items():
                if cy == 0:
                    continue
                h = self.h_product(x, y)
                for z, p in h.items():
                    idx = self.partition.classify(z)
                    if idx is None:
                        # gamma vanishes unless z sits in the cell of x, so
                        # only terms at depth a(cell(x)) or beyond matter;
                        # test against the known lower bound, conservatively
                        ax = self.partition.classify(x)
                        if ax is not None and min(p) <= -self.a_function(ax)[0]:
                            raise BoundExceeded(
                                f"support element {z.word_str} of a J-product "
                                f"is outside the computed partition",
                                needed=z.length,
                            )
                        continue
                    value, exact = self.a_function(idx)
                    if not exact:
                        raise InexactAValue(
                            f"cell {idx} has inexact a-value"
                        )
                    # the t_z coefficient is gamma_{x,y,z^{-1}}, read off
                    # the bottom of h_{x,y,z} directly
                    g = p.get(-value, 0)
                    if g:
                        out[z] = out.get(z, 0) + cx * cy * g
        return {z: c for z, c in out.items() if c}

    def t_product(self, x: AffineElement, y: AffineElement) -> dict[AffineElement, int]:
        return self.j_multiply({x: 1}, {y: 1})

    def jring(self, cell_index: int) -> JRing:
        a, exact = self.a_function(cell_index)
        return JRing(
            cell_index=cell_index,
            a_value=a,
            a_exact=exact,
            basis=list(self.partition.two_sided_cells[cell_index]),
            duflo=self.duflo_involutions(cell_index) if exact else [],
        )

    # -- the minimal double coset subalgebra ------------------------------------

    def jf_basis(self, cell_index: int) -> list[AffineElement]:
        return [
            x
            for x in self.partition.two_sided_cells[cell_index]
            if self.group.is_min_double_coset_rep(x)
        ]

    def jf_duflo(self, cell_index: int) -> AffineElement:
        cands = [
            d
            for d in self.duflo_involutions(cell_index)
            if self.group.is_min_double_coset_rep(d)
        ]
        assert len(cands) == 1, (
            f"cell {cell_index}: expected one distinguished involution "
            f"among minimal double coset representatives, got {cands}"
        )
        return cands[0]

    def jf_subalgebra(self, cell_index: int, max_pair_length: int | None = None):
        """Basis of the W^f slice and its verified products.

        Returns ``(basis, d^f, products)`` where products maps basis
        pairs (within the verifiable range) to t-basis combinations.
        Raises ClosureViolation if any product has support outside W^f.
        """
        basis = self.jf_basis(cell_index)
        df = self.jf_duflo(cell_index)
        limit = max_pair_length
        if limit is None:
            limit = self.partition.bound
        products = {}
        for x in basis:
            for y in basis:
                if x.length + y.length > limit:
                    continue
                try:
                    prod = self.t_product(x, y)
                except BoundExceeded:
                    continue
                for z in prod:
                    if not self.group.is_min_double_coset_rep(z):
                        raise ClosureViolation(
                            f"t[{x.word_str}] t[{y.word_str}] has support at "
                            f"{z.word_str}, outside the minimal double coset "
                            f"representatives"
                        )
                products[(x, y)] = prod
        return basis, df, products
