"""Exact solvers: ordering clique number, acyclic partition number, ordering
enumeration, pairwise forcing, and extremal-witness search.

The ordering searches build orderings left to right.  Once a prefix is
fixed, every backedge among prefix vertices is determined, so the clique
number of the partial backedge graph only grows along a branch; a branch
dies the moment a placement completes a (k+1)-clique.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Iterator, Optional

from ._sat import Solver, lit
from .core import (
    BudgetExhausted,
    Digraph,
    Tournament,
    _bits,
    directed_triangle,
    has_clique_in_mask,
    is_acyclic,
)
from .generation import canonical_tournaments


class Deadline:
    """Wall-clock budget polled by solvers; `check` raises BudgetExhausted."""

    def __init__(self, seconds: Optional[float] = None):
        self.seconds = seconds
        self._end = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self._end is not None and time.monotonic() > self._end

    def check(self) -> None:
        if self.expired():
            raise BudgetExhausted(f"budget of {self.seconds}s exhausted")


@dataclass
class SearchStats:
    nodes: int = 0


@dataclass(frozen=True)
class OmegaResult:
    value: int
    witness: tuple[int, ...]
    nodes: int = 0


@dataclass(frozen=True)
class DecideResult:
    decision: bool
    witness: Optional[tuple[int, ...]]
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.decision


@dataclass(frozen=True)
class ChiResult:
    value: int
    classes: tuple[tuple[int, ...], ...]
    conflicts: int = 0


@dataclass(frozen=True)
class ChiDecideResult:
    decision: bool
    classes: Optional[tuple[tuple[int, ...], ...]]
    conflicts: int = 0

    def __bool__(self) -> bool:
        return self.decision


@dataclass(frozen=True)
class ForcingResult:
    holds: bool
    vacuous: bool
    counterexample: Optional[tuple[int, ...]]
    nodes: int = 0

    def __bool__(self) -> bool:
        return self.holds


@dataclass(frozen=True)
class MinOrderResult:
    n: int
    witness: Tournament


def iter_orderings_with_clique_at_most(
    d: Digraph,
    k: int,
    *,
    first_vertex: Optional[int] = None,
    before: Optional[tuple[int, int]] = None,
    deadline: Optional[Deadline] = None,
    stats: Optional[SearchStats] = None,
) -> Iterator[tuple[int, ...]]:
    """All orderings whose backedge graph has clique number <= k, lexicographically.

    `before=(a, b)` restricts the stream to orderings placing a before b.
    """
    if k < 1:
        raise ValueError("clique bound must be positive")
    n = d.n
    if first_vertex is not None and not 0 <= first_vertex < n:
        raise ValueError(f"first vertex {first_vertex} out of range")
    if n == 0:
        yield ()
        return
    rows = d.rows
    cols = d.cols
    full = (1 << n) - 1
    badj = [0] * n
    seq: list[int] = []
    blocked = 1 << before[1] if before is not None else 0
    node_count = 0

    def rec(placed: int) -> Iterator[tuple[int, ...]]:
        nonlocal node_count, blocked
        if placed == full:
            yield tuple(seq)
            return
        avail = full & ~placed & ~blocked
        while avail:
            low = avail & -avail
            v = low.bit_length() - 1
            avail ^= low
            nb = rows[v] & placed
            if k == 2:
                bad = False
                m = nb
                while m:
                    lb = m & -m
                    if badj[lb.bit_length() - 1] & nb:
                        bad = True
                        break
                    m ^= lb
                if bad:
                    continue
            elif k == 1:
                # only topological prefixes can complete: the vertex must
                # create no backedge now (out-neighbors unplaced) and never
                # (in-neighbors all placed)
                if nb or cols[v] & ~placed & full:
                    continue
            elif has_clique_in_mask(badj, nb, k) is not None:
                continue
            node_count += 1
            if deadline is not None and node_count & 0xFFF == 0:
                deadline.check()
            badj[v] = nb
            m = nb
            while m:
                lb = m & -m
                badj[lb.bit_length() - 1] |= low
                m ^= lb
            seq.append(v)
            unblock = before is not None and v == before[0]
            if unblock:
                blocked = 0
            yield from rec(placed | low)
            if unblock:
                blocked = 1 << before[1]
            seq.pop()
            m = nb
            while m:
                lb = m & -m
                badj[lb.bit_length() - 1] &= ~low
                m ^= lb
            badj[v] = 0

    try:
        if first_vertex is not None:
            v = first_vertex
            if not blocked >> v & 1:
                node_count += 1
                seq.append(v)
                if before is not None and v == before[0]:
                    blocked = 0
                yield from rec(1 << v)
                seq.pop()
        else:
            yield from rec(0)
    finally:
        if stats is not None:
            stats.nodes += node_count


def omega_decide(
    t: Digraph, k: int, *, deadline: Optional[Deadline] = None
) -> DecideResult:
    """Does some ordering keep the backedge clique number at most k?

    The witness, when one exists, is the lexicographically smallest such
    ordering (the depth-first search tries vertices in ascending order).
    """
    stats = SearchStats()
    witness = next(
        iter_orderings_with_clique_at_most(t, k, deadline=deadline, stats=stats), None
    )
    return DecideResult(witness is not None, witness, stats.nodes)


def omega(t: Digraph, *, deadline: Optional[Deadline] = None) -> OmegaResult:
    """Exact ordering clique number with canonical witness, by incremental
    decision calls."""
    if t.n == 0:
        raise ValueError("omega of the empty tournament is undefined")
    nodes = 0
    for k in itertools.count(1):
        res = omega_decide(t, k, deadline=deadline)
        nodes += res.nodes
        if res.decision:
            return OmegaResult(k, res.witness, nodes)
    raise AssertionError("unreachable")


def enumerate_omega_orderings(
    t: Digraph,
    first_vertex: Optional[int] = None,
    *,
    deadline: Optional[Deadline] = None,
    stats: Optional[SearchStats] = None,
) -> Iterator[tuple[int, ...]]:
    """All orderings achieving the exact minimum clique number, in lexicographic
    order, optionally restricted to those starting at `first_vertex`."""
    value = omega(t, deadline=deadline).value
    yield from iter_orderings_with_clique_at_most(
        t, value, first_vertex=first_vertex, deadline=deadline, stats=stats
    )


def _backedge_masks(rows: tuple[int, ...], perm: tuple[int, ...]) -> list[int]:
    adj = [0] * len(perm)
    placed = 0
    for v in perm:
        back = rows[v] & placed
        adj[v] = back
        m = back
        while m:
            lb = m & -m
            adj[lb.bit_length() - 1] |= 1 << v
            m ^= lb
        placed |= 1 << v
    return adj


def omega_by_enumeration(t: Digraph, *, deadline: Optional[Deadline] = None) -> int:
    """Independent oracle: scan every permutation and take the minimum backedge
    clique number.  Exact but factorial; for cross-validating the search."""
    n = t.n
    if n == 0:
        raise ValueError("omega of the empty tournament is undefined")
    full = (1 << n) - 1
    # every ordering of a non-acyclic digraph has a backward arc
    floor = 1 if directed_triangle(t) is None and is_acyclic(t) else 2
    best = n
    scanned = 0
    for perm in itertools.permutations(range(n)):
        scanned += 1
        if deadline is not None and scanned & 0x3FF == 0:
            deadline.check()
        adj = _backedge_masks(t.rows, perm)
        if best == n or has_clique_in_mask(adj, full, best) is None:
            # exact value for this ordering: largest size still carrying a clique
            val = 1
            for size in range(2, best + 1):
                if has_clique_in_mask(adj, full, size) is None:
                    break
                val = size
            if val < best:
                best = val
            if best <= floor:
                break
    return best


def chi_decide(
    d: Digraph, k: int, *, deadline: Optional[Deadline] = None
) -> ChiDecideResult:
    """Can the vertices be split into k classes, each inducing an acyclic
    subdigraph?

    Encodes class membership as booleans and refutes/extends with a
    conflict-driven search; directed-cycle constraints are seeded for all
    triangles of moderate-size tournaments and otherwise added lazily each
    time a candidate class turns out cyclic.
    """
    if k < 1:
        raise ValueError("class count must be positive")
    n = d.n
    if n == 0:
        return ChiDecideResult(True, ())
    if k == 1:
        ok = is_acyclic(d)
        return ChiDecideResult(ok, (tuple(range(n)),) if ok else None)
    if k >= n:
        return ChiDecideResult(True, tuple((v,) for v in range(n)))

    solver = Solver(n * k)

    def var(v: int, c: int) -> int:
        return v * k + c

    for v in range(n):
        solver.add_clause([lit(var(v, c), True) for c in range(k)])
    # classes are interchangeable: pin vertex 0 to class 0
    solver.add_clause([lit(var(0, 0), True)])
    for c in range(1, k):
        solver.add_clause([lit(var(0, c), False)])

    def add_cycle_cut(cycle: tuple[int, ...]) -> None:
        for c in range(k):
            solver.add_clause([lit(var(v, c), False) for v in cycle])

    if isinstance(d, Tournament) and n <= 256:
        # in a tournament every directed cycle contains a directed triangle,
        # so triangle cuts alone are complete
        rows, cols = d.rows, d.cols
        for u in range(n):
            high = ~((1 << (u + 1)) - 1)
            for v in _bits(rows[u] & high):
                for w in _bits(rows[v] & cols[u] & high):
                    add_cycle_cut((u, v, w))

    while True:
        model = solver.solve(deadline=deadline)
        if model is None:
            return ChiDecideResult(False, None, solver.conflicts)
        color = [min(c for c in range(k) if model[var(v, c)]) for v in range(n)]
        masks = [0] * k
        for v, c in enumerate(color):
            masks[c] |= 1 << v
        violated = None
        for mask in masks:
            cycle = _find_directed_cycle(d, mask)
            if cycle is not None:
                violated = cycle
                break
        if violated is None:
            classes = tuple(
                tuple(v for v in range(n) if color[v] == c)
                for c in range(k)
                if masks[c]
            )
            return ChiDecideResult(True, classes, solver.conflicts)
        solver.reset()
        add_cycle_cut(violated)


def _find_directed_cycle(d: Digraph, mask: int) -> Optional[tuple[int, ...]]:
    tri = directed_triangle(d, mask)
    if tri is not None:
        return tri
    state = {}  # 1 on stack, 2 done
    for start in _bits(mask):
        if start in state:
            continue
        stack = [(start, iter(list(_bits(d.rows[start] & mask))))]
        state[start] = 1
        path = [start]
        while stack:
            v, it = stack[-1]
            advanced = False
            for w in it:
                if state.get(w) == 1:
                    return tuple(path[path.index(w):])
                if w not in state:
                    state[w] = 1
                    path.append(w)
                    stack.append((w, iter(list(_bits(d.rows[w] & mask)))))
                    advanced = True
                    break
            if not advanced:
                state[v] = 2
                path.pop()
                stack.pop()
    return None


def chi(d: Digraph, *, deadline: Optional[Deadline] = None) -> ChiResult:
    """Exact acyclic partition number with a witness partition."""
    if d.n == 0:
        raise ValueError("chi of the empty digraph is undefined")
    for k in itertools.count(1):
        res = chi_decide(d, k, deadline=deadline)
        if res.decision:
            return ChiResult(k, res.classes, res.conflicts)
    raise AssertionError("unreachable")


def forcing_holds(
    d: Digraph, u: int, v: int, k: int, *, deadline: Optional[Deadline] = None
) -> ForcingResult:
    """Does every ordering with backedge clique number <= k place u before v?

    False comes with a counterexample ordering.  When no ordering achieves
    clique number <= k at all, the claim holds vacuously and the result is
    flagged as such.
    """
    if u == v:
        raise ValueError("u and v must differ")
    stats = SearchStats()
    counter = next(
        iter_orderings_with_clique_at_most(
            d, k, before=(v, u), deadline=deadline, stats=stats
        ),
        None,
    )
    if counter is not None:
        return ForcingResult(False, False, counter, stats.nodes)
    any_ordering = next(
        iter_orderings_with_clique_at_most(d, k, deadline=deadline, stats=stats), None
    )
    return ForcingResult(True, any_ordering is None, None, stats.nodes)


def min_order_with_omega(
    k: int,
    n_max: int,
    *,
    method: str = "branch-and-bound",
    deadline: Optional[Deadline] = None,
) -> Optional[MinOrderResult]:
    """Smallest n <= n_max carrying a tournament of ordering clique number
    exactly k, with the first such tournament in canonical generation order.

    `method` selects how each candidate's value is computed:
    "branch-and-bound" (the search solver) or "enumeration" (the plain
    factorial oracle); both must agree, which the test suite exercises.
    """
    if k < 1 or n_max < 1:
        raise ValueError("k and n_max must be positive")
    if method not in ("branch-and-bound", "enumeration"):
        raise ValueError(f"unknown method {method!r}")
    for n in range(1, n_max + 1):
        for t in canonical_tournaments(n):
            if deadline is not None:
                deadline.check()
            if method == "branch-and-bound":
                value = omega(t, deadline=deadline).value
            else:
                value = omega_by_enumeration(t, deadline=deadline)
            if value == k:
                return MinOrderResult(n, t)
    return None
