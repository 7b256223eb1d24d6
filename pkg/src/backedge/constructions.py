"""Composition operators and parametric tournament constructions.

Covers the chain/cyclic compositions, the single-vertex lift, the
copy-amplification construction that preserves the ordering clique number
while forcing copies of the base into every vertex subset or its
complement, the two-sided variant that raises the acyclic partition
number, and the recursive family built from the directed triangle.

Copy bookkeeping conventions (all deterministic):
  * label subsets are enumerated in colexicographic order;
  * the i-th vertex of a copy's fixed ordering gets the i-th smallest
    label of the copy's subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Optional, Union

from .core import Digraph, Tournament, _bits, check_ordering
from .solvers import omega

DEFAULT_VERTEX_BUDGET = 100_000


class MaterializationRefused(Exception):
    """The requested construction exceeds the vertex budget; carries sizing."""

    def __init__(self, report: "SizingReport"):
        super().__init__(
            f"{report.construction} needs {report.total_vertices} vertices, "
            f"budget is {report.budget}"
        )
        self.report = report


@dataclass(frozen=True)
class SizingReport:
    construction: str
    parameters: tuple[tuple[str, int], ...]
    total_vertices: int
    materializable: bool
    budget: int

    def parameter(self, name: str) -> int:
        for key, value in self.parameters:
            if key == name:
                return value
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "parameters": dict(self.parameters),
            "total_vertices": self.total_vertices,
            "materializable": self.materializable,
            "budget": self.budget,
        }


@dataclass(frozen=True)
class CopyInfo:
    role: str  # "copy" in the amplifier; "A", "B" or "C" in the two-sided variant
    block: int
    family: Optional[int]  # label-subset index; None for the middle copy
    start: int
    size: int
    psi: Optional[tuple[int, ...]]  # local vertex -> label

    @property
    def span(self) -> tuple[int, int]:
        return self.start, self.start + self.size

    def vertices(self) -> range:
        return range(self.start, self.start + self.size)


@dataclass(frozen=True)
class CopyLayout:
    base_size: int
    label_universe: int
    subsets: tuple[tuple[int, ...], ...]  # family index -> label subset
    copies: tuple[CopyInfo, ...]

    def to_dict(self) -> dict:
        return {
            "base_size": self.base_size,
            "label_universe": self.label_universe,
            "subsets": [list(s) for s in self.subsets],
            "copies": [
                {
                    "role": c.role,
                    "block": c.block,
                    "family": c.family,
                    "start": c.start,
                    "size": c.size,
                    "psi": None if c.psi is None else list(c.psi),
                }
                for c in self.copies
            ],
        }


@dataclass(frozen=True)
class BuiltTournament:
    tournament: Tournament
    ordering: tuple[int, ...]
    layout: Optional[CopyLayout]


@dataclass(frozen=True)
class Lift:
    """The single-vertex cyclic composition: v beats the inner part, the
    inner part beats the outer part, the outer part beats v."""

    digraph: Digraph
    v: int
    inner_span: tuple[int, int]
    outer_span: tuple[int, int]


def tt(n: int) -> Tournament:
    """Transitive tournament: arc i -> j whenever i < j."""
    if n < 0:
        raise ValueError("n must be non-negative")
    full = (1 << n) - 1
    return Tournament(n, tuple((full >> (i + 1)) << (i + 1) for i in range(n)))


def c3() -> Tournament:
    return Tournament.from_arcs(3, [(0, 1), (1, 2), (2, 0)])


def _as_digraph(x: Union[int, Digraph]) -> Digraph:
    return tt(x) if isinstance(x, int) else x


def arrow(d1: Union[int, Digraph], d2: Union[int, Digraph]) -> Digraph:
    """Disjoint union plus every arc from the first part to the second."""
    d1, d2 = _as_digraph(d1), _as_digraph(d2)
    n1, n2 = d1.n, d2.n
    later = ((1 << n2) - 1) << n1
    rows = [row | later for row in d1.rows]
    rows += [row << n1 for row in d2.rows]
    cls = Tournament if isinstance(d1, Tournament) and isinstance(d2, Tournament) else Digraph
    return cls(n1 + n2, tuple(rows))


def delta(
    t1: Union[int, Digraph], t2: Union[int, Digraph], t3: Union[int, Digraph]
) -> Digraph:
    """Three disjoint parts with all arcs part1->part2, part2->part3, part3->part1."""
    t1, t2, t3 = _as_digraph(t1), _as_digraph(t2), _as_digraph(t3)
    n1, n2, n3 = t1.n, t2.n, t3.n
    n = n1 + n2 + n3
    mask1 = (1 << n1) - 1
    mask2 = ((1 << n2) - 1) << n1
    mask3 = ((1 << n3) - 1) << (n1 + n2)
    rows = [row | mask2 for row in t1.rows]
    rows += [(row << n1) | mask3 for row in t2.rows]
    rows += [(row << (n1 + n2)) | mask1 for row in t3.rows]
    all_t = all(isinstance(t, Tournament) for t in (t1, t2, t3))
    return (Tournament if all_t else Digraph)(n, tuple(rows))


def lift(d: Union[int, Digraph], w: Union[int, Digraph]) -> Lift:
    """delta(1, d, w) with landmarks: the extra vertex is 0, then d, then w."""
    d, w = _as_digraph(d), _as_digraph(w)
    composite = delta(tt(1), d, w)
    return Lift(composite, 0, (1, 1 + d.n), (1 + d.n, 1 + d.n + w.n))


def _colex_subsets(universe: int, size: int) -> tuple[tuple[int, ...], ...]:
    return tuple(
        sorted(combinations(range(universe), size), key=lambda s: tuple(reversed(s)))
    )


def amplifier_sizing(
    n: int, *, vertex_budget: int = DEFAULT_VERTEX_BUDGET
) -> SizingReport:
    """Vertex count n^2 * C(n(n-1)+1, n) of the amplifier over an n-vertex base."""
    if n < 1:
        raise ValueError("base size must be positive")
    universe = n * (n - 1) + 1
    m = math.comb(universe, n)
    total = n * n * m
    return SizingReport(
        "amplifier",
        (("n", n), ("label_universe", universe), ("m", m), ("copies", n * m)),
        total,
        total <= vertex_budget,
        vertex_budget,
    )


def pi_sizing(n: int, *, vertex_budget: int = DEFAULT_VERTEX_BUDGET) -> SizingReport:
    """Vertex count n * (2*C(2n-1, n) + 1) of the two-sided construction."""
    if n < 1:
        raise ValueError("base size must be positive")
    universe = 2 * n - 1
    m = math.comb(universe, n)
    total = n * (2 * m + 1)
    return SizingReport(
        "pi",
        (("n", n), ("label_universe", universe), ("m", m), ("copies", 2 * m + 1)),
        total,
        total <= vertex_budget,
        vertex_budget,
    )


def amplifier(
    t: Tournament,
    omega_ordering: Optional[tuple[int, ...]] = None,
    *,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> BuiltTournament:
    """Tournament with the same ordering clique number as ``t`` in which every
    vertex subset or its complement contains a copy of ``t``.

    Transitive bases take the short route ``t -> t``.  Otherwise n*m copies
    are chained front-to-back (m per block, one block per position of the
    base ordering) and the arc between equal-label vertices of two copies is
    flipped exactly when the base has the arc from the later copy's block
    vertex to the earlier copy's block vertex.
    """
    result = omega(t)
    if omega_ordering is None:
        omega_ordering = result.witness
    else:
        omega_ordering = check_ordering(omega_ordering, t.n)
        from .core import backedge_graph, clique_number

        if clique_number(backedge_graph(t, omega_ordering)) != result.value:
            raise ValueError("supplied ordering does not achieve the minimum")

    if result.value == 1:
        doubled = arrow(t, t)
        ordering = tuple(omega_ordering) + tuple(v + t.n for v in omega_ordering)
        return BuiltTournament(doubled, ordering, None)

    n = t.n
    sizing = amplifier_sizing(n, vertex_budget=vertex_budget)
    if not sizing.materializable:
        raise MaterializationRefused(sizing)
    universe = sizing.parameter("label_universe")
    m = sizing.parameter("m")
    ncopies = n * m
    total = sizing.total_vertices

    pos = {v: i for i, v in enumerate(omega_ordering)}
    subsets = _colex_subsets(universe, n)
    copies = []
    psi_all = []
    for c in range(ncopies):
        family = c % m
        labels = subsets[family]
        psi = tuple(labels[pos[v]] for v in range(n))
        psi_all.append(psi)
        copies.append(CopyInfo("copy", c // m, family, c * n, n, psi))
    layout = CopyLayout(n, universe, subsets, tuple(copies))

    rows = [0] * total
    for c in range(ncopies):
        start = c * n
        later = ((1 << (total - start - n)) - 1) << (start + n)
        for u in range(n):
            row = later
            for v in _bits(t.rows[u]):
                row |= 1 << (start + v)
            rows[start + u] = row
    # flip matching-label arcs between copies of distinct blocks when the base
    # arc runs from the later block's vertex to the earlier block's vertex
    label_pos = [{lab: i for i, lab in enumerate(p)} for p in psi_all]
    for ci in range(ncopies):
        bi = ci // m
        for cj in range(ci + 1, ncopies):
            bj = cj // m
            if bi == bj or not t.has_arc(omega_ordering[bj], omega_ordering[bi]):
                continue
            for label in set(psi_all[ci]) & set(psi_all[cj]):
                u = ci * n + label_pos[ci][label]
                w = cj * n + label_pos[cj][label]
                rows[u] &= ~(1 << w)
                rows[w] |= 1 << u
    built = Tournament(total, tuple(rows))
    ordering = tuple(
        c * n + omega_ordering[i] for c in range(ncopies) for i in range(n)
    )
    return BuiltTournament(built, ordering, layout)


def pi(
    t: Tournament,
    omega_ordering: Optional[tuple[int, ...]] = None,
    *,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> BuiltTournament:
    """Two-sided copy construction: m front copies, a middle copy, m back
    copies, chained front-to-back; the arc between a front and a back vertex
    is flipped exactly when their labels agree.  Front copy j and back copy j
    share the same label map."""
    if t.n == 0:
        raise ValueError("base tournament must be nonempty")
    n = t.n
    sizing = pi_sizing(n, vertex_budget=vertex_budget)
    if not sizing.materializable:
        raise MaterializationRefused(sizing)
    if omega_ordering is None:
        omega_ordering = omega(t).witness
    else:
        omega_ordering = check_ordering(omega_ordering, n)

    universe = sizing.parameter("label_universe")
    m = sizing.parameter("m")
    ncopies = 2 * m + 1
    total = sizing.total_vertices
    pos = {v: i for i, v in enumerate(omega_ordering)}
    subsets = _colex_subsets(universe, n)
    psi_family = [tuple(subsets[j][pos[v]] for v in range(n)) for j in range(m)]

    copies = []
    for j in range(m):
        copies.append(CopyInfo("A", 0, j, j * n, n, psi_family[j]))
    copies.append(CopyInfo("B", 1, None, m * n, n, None))
    for j in range(m):
        copies.append(CopyInfo("C", 2, j, (m + 1 + j) * n, n, psi_family[j]))
    layout = CopyLayout(n, universe, subsets, tuple(copies))

    rows = [0] * total
    for c in range(ncopies):
        start = c * n
        later = ((1 << (total - start - n)) - 1) << (start + n)
        for u in range(n):
            row = later
            for v in _bits(t.rows[u]):
                row |= 1 << (start + v)
            rows[start + u] = row
    label_pos = [{lab: i for i, lab in enumerate(p)} for p in psi_family]
    for i in range(m):
        for j in range(m):
            for label in set(psi_family[i]) & set(psi_family[j]):
                u = i * n + label_pos[i][label]
                v = (m + 1 + j) * n + label_pos[j][label]
                rows[u] &= ~(1 << v)
                rows[v] |= 1 << u
    built = Tournament(total, tuple(rows))
    ordering = tuple(
        c * n + omega_ordering[i] for c in range(ncopies) for i in range(n)
    )
    return BuiltTournament(built, ordering, layout)


def d_family(
    k: int, *, vertex_budget: int = DEFAULT_VERTEX_BUDGET
) -> Union[Tournament, SizingReport]:
    """The recursive family: level 1 is the directed triangle, each further
    level applies the two-sided construction.  Levels 1 and 2 materialize;
    level 3 only admits symbolic sizing, and beyond that even the vertex
    count has astronomically many digits."""
    if k < 1:
        raise ValueError("k must be positive")
    if k == 1:
        return c3()
    if k == 2:
        return pi(c3(), vertex_budget=vertex_budget).tournament
    if k == 3:
        base = pi_sizing(3).total_vertices  # 63
        return pi_sizing(base, vertex_budget=vertex_budget)
    raise ValueError(
        "vertex counts beyond level 3 are too large even to write down"
    )


def cross_copy_backward_arcs(
    t: Tournament, layout: CopyLayout
) -> list[tuple[int, int]]:
    """All arcs running from a later copy to an earlier copy, i.e. the arcs
    the construction flipped; handy for structural audits."""
    flipped = []
    for idx, ci in enumerate(layout.copies):
        for cj in layout.copies[idx + 1:]:
            for w in cj.vertices():
                row = t.rows[w]
                for u in ci.vertices():
                    if row >> u & 1:
                        flipped.append((w, u))
    return flipped
