import random

import pytest

from backedge.constructions import c3, tt
from backedge.core import backedge_graph
from backedge.generation import labeled_count, labeled_tournament
from backedge.rulecheck import (
    check_cell,
    check_rules,
    excluded_from_family,
    validate_rule_witness,
)
from backedge.solvers import enumerate_omega_orderings, omega

from r5_rule_table import R5_RULE_TABLE


def to_zero_based(row):
    ordering1, x1, rule, named1 = row
    ordering = tuple(v - 1 for v in ordering1)
    named = {} if named1 is None else {k: v - 1 for k, v in named1.items()}
    return ordering, x1 - 1, rule, named


def test_published_cells_rule2_example(circulant5):
    cell = check_cell(circulant5, (0, 1, 2, 3, 4), 2)
    assert cell.witness.rule == 2
    assert cell.witness.named() == {"a": 0, "b": 1, "c": 4, "d": 3}


def test_rule1_exactly_when_pivot_first(circulant5):
    for ordering in enumerate_omega_orderings(circulant5, 0):
        for x in range(5):
            cell = check_cell(circulant5, ordering, x)
            assert (1 in cell.violated_rules) == (ordering[0] == x)


def test_published_table_revalidates(circulant5):
    assert len(R5_RULE_TABLE) == 45
    for row in R5_RULE_TABLE:
        ordering, x, rule, named = to_zero_based(row)
        assert validate_rule_witness(circulant5, ordering, x, rule, named), row
        cell = check_cell(circulant5, ordering, x)
        assert not cell.all_rules_hold
        assert rule in cell.violated_rules, (row, cell.violated_rules)


def test_check_rules_r5_excluded(circulant5):
    report = check_rules(circulant5, first_vertex=0)
    assert report.excluded
    assert len(report.cells) == 45
    assert {(cell.ordering, cell.pivot) for cell in report.cells} == {
        (tuple(v - 1 for v in row[0]), row[1] - 1) for row in R5_RULE_TABLE
    }


def test_quotient_and_full_run_agree(circulant5):
    fixed = check_rules(circulant5, first_vertex=0)
    full = check_rules(circulant5)
    assert fixed.excluded == full.excluded
    assert len(full.cells) == 45 * 5


def test_c3_not_excluded():
    report = check_rules(c3())
    assert not report.excluded
    # every pivot-last cell satisfies all four rules (the triangle is the
    # first family member, so some satisfying cell must exist)
    for cell in report.cells:
        if cell.ordering[-1] == cell.pivot:
            assert cell.all_rules_hold
    assert any(cell.all_rules_hold for cell in report.cells)
    assert not excluded_from_family(c3())


def test_non_strong_rejected():
    with pytest.raises(ValueError, match="strong"):
        check_rules(tt(2))


def test_check_cell_rejects_non_minimum_ordering(circulant5):
    with pytest.raises(ValueError, match="minimum"):
        check_cell(circulant5, (1, 0, 2, 3, 4), 2)


def test_returned_witnesses_revalidate(circulant5):
    report = check_rules(circulant5, first_vertex=0)
    for cell in report.cells:
        wit = cell.witness
        assert validate_rule_witness(
            circulant5, cell.ordering, cell.pivot, wit.rule, wit.named()
        )


def test_witnesses_revalidate_on_random_strong_tournaments():
    rng = random.Random(31)
    found = 0
    while found < 8:
        n = rng.randint(4, 6)
        t = labeled_tournament(n, rng.randrange(labeled_count(n)))
        from backedge.core import is_strong

        if not is_strong(t):
            continue
        found += 1
        report = check_rules(t)
        for cell in report.cells:
            if cell.witness is not None:
                assert validate_rule_witness(
                    t, cell.ordering, cell.pivot, cell.witness.rule,
                    cell.witness.named(),
                )


def test_path_predicate_matches_plain_union_find(circulant5):
    # independent connectivity oracle for the side-restricted backedge graph
    def connected_by_union_find(t, ordering, side, a, b):
        parent = {v: v for v in side}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        pos = {v: i for i, v in enumerate(ordering)}
        for i, u in enumerate(side):
            for v in side[i + 1:]:
                lo, hi = (u, v) if pos[u] < pos[v] else (v, u)
                if t.has_arc(hi, lo):
                    parent[find(u)] = find(v)
        return find(a) == find(b)

    t = circulant5
    for ordering in enumerate_omega_orderings(t, 0):
        pos = {v: i for i, v in enumerate(ordering)}
        for x in range(5):
            left = sorted(v for v in range(5) if pos[v] < pos[x])
            g = backedge_graph(t, ordering)
            for a in left:
                for b in left:
                    reach = set()
                    stack = [a]
                    while stack:
                        cur = stack.pop()
                        if cur in reach:
                            continue
                        reach.add(cur)
                        stack.extend(
                            w for w in left if g.has_edge(cur, w) and w not in reach
                        )
                    assert (b in reach) == connected_by_union_find(
                        t, ordering, left, a, b
                    )


def test_r5_exclusion_consistent_with_embedding_search(circulant5, d2):
    from backedge.core import contains_subtournament

    assert excluded_from_family(circulant5, first_vertex=0)
    assert contains_subtournament(d2.tournament, circulant5) is None


def _naive_violated_rules(t, ordering, x):
    """Direct quantifier sweep over all vertex tuples; independent oracle."""
    pos = {v: i for i, v in enumerate(ordering)}
    px = pos[x]
    n = t.n
    left = [v for v in range(n) if pos[v] < px]
    right = [v for v in range(n) if pos[v] >= px]

    def connected(side, a, b):
        seen = {a}
        frontier = [a]
        while frontier:
            cur = frontier.pop()
            for w in side:
                if w in seen:
                    continue
                lo, hi = (cur, w) if pos[cur] < pos[w] else (w, cur)
                if t.has_arc(hi, lo):
                    seen.add(w)
                    frontier.append(w)
        return b in seen

    violated = set()
    if not left:
        violated.add(1)
    for a in left:
        for b in left:
            for c in right:
                for d in right:
                    if (
                        t.has_arc(c, a)
                        and t.has_arc(d, a)
                        and t.has_arc(c, b)
                        and not t.has_arc(d, b)
                        and b != a
                    ):
                        violated.add(2)
    for a in left:
        for u in left:
            for w in left:
                for b in left:
                    for v in right:
                        if (
                            pos[a] <= pos[u] < pos[w] <= pos[b]
                            and t.has_arc(v, u)
                            and t.has_arc(v, w)
                            and connected(left, a, b)
                        ):
                            violated.add(3)
    for v in left:
        for a in right:
            for u in right:
                for w in right:
                    for b in right:
                        if (
                            pos[a] <= pos[u] < pos[w] <= pos[b]
                            and t.has_arc(u, v)
                            and t.has_arc(w, v)
                            and connected(right, a, b)
                        ):
                            violated.add(4)
    return violated


def test_check_cell_matches_naive_oracle(circulant5):
    for t in (circulant5, c3()):
        value = omega(t).value
        for ordering in enumerate_omega_orderings(t):
            for x in range(t.n):
                cell = check_cell(t, ordering, x, _omega_value=value)
                assert set(cell.violated_rules) == _naive_violated_rules(
                    t, ordering, x
                ), (ordering, x)


def test_check_cell_matches_naive_oracle_random_strong():
    rng = random.Random(47)
    from backedge.core import is_strong

    checked = 0
    while checked < 5:
        n = rng.randint(4, 6)
        t = labeled_tournament(n, rng.randrange(labeled_count(n)))
        if not is_strong(t):
            continue
        checked += 1
        value = omega(t).value
        for ordering in enumerate_omega_orderings(t):
            for x in range(t.n):
                cell = check_cell(t, ordering, x, _omega_value=value)
                assert set(cell.violated_rules) == _naive_violated_rules(
                    t, ordering, x
                )


def test_check_rules_on_value_three_tournament(surrogate):
    # rules also apply at minimum value 3; witnesses must still revalidate
    report = check_rules(surrogate)
    assert report.omega_value == 3
    assert report.cells
    for cell in report.cells:
        if cell.witness is not None:
            assert validate_rule_witness(
                surrogate, cell.ordering, cell.pivot, cell.witness.rule,
                cell.witness.named(),
            )
