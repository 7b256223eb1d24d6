"""Compiler from 3-SAT formulas to tournaments, with landmark bookkeeping
and two-way witness translation.

The instance chains one variable block per variable, a separator copy of
the companion tournament, and one clause block per clause, all front-to-
back; then, for every literal occurrence, the four arcs between the
literal's variable-block marked pair and the clause-block marked pair are
flipped so that they point from the clause block into the variable block.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .constructions import DEFAULT_VERTEX_BUDGET, MaterializationRefused, SizingReport
from .core import Tournament, backedge_graph, check_ordering, clique_number, triangle_in_graph
from .gadgets import assemble_clause_gadget, assemble_var_gadget
from .solvers import omega

Literal = tuple[int, bool]  # (0-based variable index, polarity)


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self) -> None:
        for ci, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise ValueError(f"clause {ci + 1} has {len(clause)} literals, need 3")
            variables = [var for var, _ in clause]
            if len(set(variables)) != 3:
                raise ValueError(f"clause {ci + 1} repeats a variable")
            for var in variables:
                if not 0 <= var < self.variable_count:
                    raise ValueError(f"clause {ci + 1} references variable {var + 1}")

    def satisfies(self, assignment: Sequence[bool]) -> bool:
        if len(assignment) != self.variable_count:
            raise ValueError("assignment length mismatch")
        return all(
            any(assignment[var] == polarity for var, polarity in clause)
            for clause in self.clauses
        )


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF; every clause must have exactly three distinct
    variables.  Comment lines are ignored."""
    n_vars: Optional[int] = None
    n_clauses: Optional[int] = None
    clauses: list[tuple[Literal, Literal, Literal]] = []
    pending: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {lineno}: malformed problem line {line!r}")
            n_vars, n_clauses = int(parts[2]), int(parts[3])
            continue
        if n_vars is None:
            raise ValueError(f"line {lineno}: clause before problem line")
        for token in line.split():
            value = int(token)
            if value == 0:
                if len(pending) != 3:
                    raise ValueError(
                        f"line {lineno}: clause of width {len(pending)}, need 3"
                    )
                clauses.append(tuple((abs(v) - 1, v > 0) for v in pending))
                pending = []
            else:
                if abs(value) > n_vars:
                    raise ValueError(f"line {lineno}: variable {abs(value)} out of range")
                pending.append(value)
    if pending:
        raise ValueError("unterminated clause at end of input")
    if n_clauses is not None and len(clauses) != n_clauses:
        raise ValueError(
            f"header announced {n_clauses} clauses, found {len(clauses)}"
        )
    return CnfFormula(n_vars, tuple(clauses))


@dataclass(frozen=True)
class VarBlock:
    span: tuple[int, int]
    f_plus: tuple[int, int]
    f_minus: tuple[int, int]
    ordering_true: tuple[int, ...]  # certified ordering leaving f_plus forward
    ordering_false: tuple[int, ...]


@dataclass(frozen=True)
class ClauseBlock:
    span: tuple[int, int]
    landmarks: tuple[tuple[int, int], tuple[int, int], tuple[int, int]]
    # orderings[k] realizes: landmark k backward, the other two forward
    orderings: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class GadgetDescriptor:
    size: int
    omega_checked: bool  # exactly verified (small) vs trusted
    genuine: bool  # carries the subset-hitting property (never materialized)


@dataclass(frozen=True)
class ReductionInstance:
    tournament: Tournament
    formula: CnfFormula
    var_blocks: tuple[VarBlock, ...]
    separator_span: tuple[int, int]
    separator_ordering: tuple[int, ...]
    clause_blocks: tuple[ClauseBlock, ...]
    gadget: GadgetDescriptor

    def bundle_arcs(self) -> set[tuple[int, int]]:
        """The flipped arcs, as (clause-block vertex, variable-block vertex)."""
        arcs = set()
        for j, clause in enumerate(self.formula.clauses):
            for k, (var, polarity) in enumerate(clause):
                block = self.var_blocks[var]
                a, b = block.f_plus if polarity else block.f_minus
                c, d = self.clause_blocks[j].landmarks[k]
                arcs.update({(c, a), (c, b), (d, a), (d, b)})
        return arcs

    def to_dict(self) -> dict:
        return {
            "formula": {
                "variables": self.formula.variable_count,
                "clauses": [
                    [[var, polarity] for var, polarity in clause]
                    for clause in self.formula.clauses
                ],
            },
            "var_blocks": [
                {
                    "span": list(b.span),
                    "f_plus": list(b.f_plus),
                    "f_minus": list(b.f_minus),
                    "ordering_true": list(b.ordering_true),
                    "ordering_false": list(b.ordering_false),
                }
                for b in self.var_blocks
            ],
            "separator": {
                "span": list(self.separator_span),
                "ordering": list(self.separator_ordering),
            },
            "clause_blocks": [
                {
                    "span": list(b.span),
                    "landmarks": [list(pair) for pair in b.landmarks],
                    "orderings": [list(o) for o in b.orderings],
                }
                for b in self.clause_blocks
            ],
            "gadget": {
                "size": self.gadget.size,
                "omega_checked": self.gadget.omega_checked,
                "genuine": self.gadget.genuine,
            },
        }


def instance_from_dict(data: dict, tournament: Tournament) -> ReductionInstance:
    formula = CnfFormula(
        data["formula"]["variables"],
        tuple(
            tuple((var, bool(pol)) for var, pol in clause)
            for clause in data["formula"]["clauses"]
        ),
    )
    var_blocks = tuple(
        VarBlock(
            tuple(b["span"]),
            tuple(b["f_plus"]),
            tuple(b["f_minus"]),
            tuple(b["ordering_true"]),
            tuple(b["ordering_false"]),
        )
        for b in data["var_blocks"]
    )
    clause_blocks = tuple(
        ClauseBlock(
            tuple(b["span"]),
            tuple(tuple(pair) for pair in b["landmarks"]),
            tuple(tuple(o) for o in b["orderings"]),
        )
        for b in data["clause_blocks"]
    )
    return ReductionInstance(
        tournament,
        formula,
        var_blocks,
        tuple(data["separator"]["span"]),
        tuple(data["separator"]["ordering"]),
        clause_blocks,
        GadgetDescriptor(
            data["gadget"]["size"],
            data["gadget"]["omega_checked"],
            data["gadget"]["genuine"],
        ),
    )


def sizing(
    formula: CnfFormula,
    gadget_size: int,
    *,
    genuine_base_size: Optional[int] = None,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
) -> SizingReport:
    """Exact vertex totals: n*(10+w) + w + m*(9+w).  With
    ``genuine_base_size`` = t, the companion size w is replaced by the
    amplifier total t^2 * C(t(t-1)+1, t): never materializable at desk scale."""
    n, m = formula.variable_count, len(formula.clauses)
    params: list[tuple[str, int]] = [("variables", n), ("clauses", m)]
    if genuine_base_size is not None:
        t = genuine_base_size
        w = t * t * math.comb(t * (t - 1) + 1, t)
        params += [("genuine_base", t), ("gadget_size", w)]
    else:
        w = gadget_size
        params.append(("gadget_size", w))
    total = n * (10 + w) + w + m * (9 + w)
    return SizingReport(
        "reduction",
        tuple(params),
        total,
        total <= vertex_budget and genuine_base_size is None,
        vertex_budget,
    )


def build(
    formula: CnfFormula,
    w: Tournament,
    w_ordering: Optional[tuple[int, ...]] = None,
    *,
    vertex_budget: int = DEFAULT_VERTEX_BUDGET,
    verify_limit: int = 10,
) -> ReductionInstance:
    """Assemble the tournament for ``formula`` over companion ``w``."""
    report = sizing(formula, w.n, vertex_budget=vertex_budget)
    if not report.materializable:
        raise MaterializationRefused(report)
    if w_ordering is None:
        w_ordering = omega(w).witness
    else:
        w_ordering = check_ordering(w_ordering, w.n)
    if w.n <= verify_limit:
        value = omega(w).value
        if value != 3:
            raise ValueError(
                f"companion tournament has ordering clique number {value}, need 3"
            )
        omega_checked = True
    else:
        omega_checked = False

    var_gadget = assemble_var_gadget(w, w_ordering, verify_limit=verify_limit)
    clause_gadget = assemble_clause_gadget(w, w_ordering, verify_limit=verify_limit)
    n_vars, n_clauses = formula.variable_count, len(formula.clauses)
    size_a = var_gadget.tournament.n  # 10 + w.n
    size_b = clause_gadget.tournament.n  # 9 + w.n
    sep_start = n_vars * size_a
    clause_start = sep_start + w.n
    total = clause_start + n_clauses * size_b
    assert total == report.total_vertices

    rows = [0] * total

    def paste(t: Tournament, offset: int) -> None:
        later = ((1 << (total - offset - t.n)) - 1) << (offset + t.n)
        for u in range(t.n):
            rows[offset + u] = (t.rows[u] << offset) | later

    var_blocks = []
    for i in range(n_vars):
        offset = i * size_a
        paste(var_gadget.tournament, offset)
        fp = var_gadget.arc("uv")
        fm = var_gadget.arc("wx")
        var_blocks.append(
            VarBlock(
                (offset, offset + size_a),
                (fp[0] + offset, fp[1] + offset),
                (fm[0] + offset, fm[1] + offset),
                tuple(v + offset for v in var_gadget.certified("uv-forward").ordering),
                tuple(v + offset for v in var_gadget.certified("wx-forward").ordering),
            )
        )
    paste(w, sep_start)
    separator_ordering = tuple(v + sep_start for v in w_ordering)
    clause_blocks = []
    backward_names = ("uv-backward", "wx-backward", "yz-backward")
    for j in range(n_clauses):
        offset = clause_start + j * size_b
        paste(clause_gadget.tournament, offset)
        landmarks = tuple(
            (a + offset, b + offset)
            for a, b in (
                clause_gadget.arc("uv"),
                clause_gadget.arc("wx"),
                clause_gadget.arc("yz"),
            )
        )
        orderings = tuple(
            tuple(v + offset for v in clause_gadget.certified(name).ordering)
            for name in backward_names
        )
        clause_blocks.append(ClauseBlock((offset, offset + size_b), landmarks, orderings))

    bundle = set()
    for j, clause in enumerate(formula.clauses):
        for k, (var, polarity) in enumerate(clause):
            block = var_blocks[var]
            a, b = block.f_plus if polarity else block.f_minus
            c, d = clause_blocks[j].landmarks[k]
            bundle.update({(c, a), (c, b), (d, a), (d, b)})
    for c, a in bundle:
        rows[a] &= ~(1 << c)
        rows[c] |= 1 << a
    return ReductionInstance(
        Tournament(total, tuple(rows)),
        formula,
        tuple(var_blocks),
        (sep_start, sep_start + w.n),
        separator_ordering,
        tuple(clause_blocks),
        GadgetDescriptor(w.n, omega_checked, False),
    )


def ordering_from_assignment(
    instance: ReductionInstance, assignment: Sequence[bool]
) -> tuple[int, ...]:
    """Concatenate, per block, the certified ordering matching the assignment;
    clause blocks anchor on their least-index satisfied literal.  The
    assignment must satisfy the formula."""
    formula = instance.formula
    assignment = [bool(v) for v in assignment]
    if not formula.satisfies(assignment):
        raise ValueError("assignment does not satisfy the formula")
    parts: list[int] = []
    for var, block in enumerate(instance.var_blocks):
        parts.extend(block.ordering_true if assignment[var] else block.ordering_false)
    parts.extend(instance.separator_ordering)
    for j, clause in enumerate(formula.clauses):
        k = next(
            idx
            for idx, (var, polarity) in enumerate(clause)
            if assignment[var] == polarity
        )
        parts.extend(instance.clause_blocks[j].orderings[k])
    return tuple(parts)


def assignment_from_ordering(
    instance: ReductionInstance, ordering: Sequence[int]
) -> tuple[bool, ...]:
    """Read each variable off the direction of its first landmark pair.  No
    validity judgment is made; pair with verify_ordering."""
    ordering = check_ordering(ordering, instance.tournament.n)
    pos = {v: i for i, v in enumerate(ordering)}
    return tuple(
        pos[block.f_plus[0]] < pos[block.f_plus[1]] for block in instance.var_blocks
    )


@dataclass(frozen=True)
class OrderingReport:
    k4_free: bool
    has_triangle: bool
    max_clique_found: int

    def to_dict(self) -> dict:
        return {
            "k4_free": self.k4_free,
            "has_triangle": self.has_triangle,
            "max_clique_found": self.max_clique_found,
        }


def verify_ordering(
    instance: Union[ReductionInstance, Tournament], ordering: Sequence[int]
) -> OrderingReport:
    """Scan the backedge graph of the ordering for a 4-clique and a triangle."""
    t = instance.tournament if isinstance(instance, ReductionInstance) else instance
    graph = backedge_graph(t, ordering)
    value = clique_number(graph)
    return OrderingReport(value < 4, triangle_in_graph(graph) is not None, value)
