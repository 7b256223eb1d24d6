import hashlib

import pytest

from backedge.core import (
    backedge_graph,
    clique_number,
    contains_subtournament,
    is_strong,
    triangle_in_graph,
)
from backedge.constructions import c3
from backedge.gadgets import (
    CLAUSE_BASE_MATRIX,
    R5_MATRIX,
    VAR_BASE_MATRIX,
    GadgetPropertyError,
    assemble_clause_gadget,
    assemble_var_gadget,
    clause_base,
    r5,
    var_base,
    verify_clause_base,
    verify_var_base,
)
from backedge.solvers import omega

# regression: exhaustive enumeration counts of minimum orderings
VAR_MIN_ORDERINGS = 39
CLAUSE_MIN_ORDERINGS = 33

MATRIX_SHA256 = {
    "var": "6937187fcf98354307c422b92576442a552d59fa19b9283a77af25d241bf6126",
    "clause": "14f5704b620925d45d154a55fef0785da10fc673eb1485c19b3226943182cab8",
    "r5": "f4740e3553504117d25acd8757dd8544219fe917d44c229a40b6b141c05bada9",
}


def _digest(matrix):
    return hashlib.sha256("\n".join(matrix).encode()).hexdigest()


def test_matrix_checksums():
    assert _digest(VAR_BASE_MATRIX) == MATRIX_SHA256["var"]
    assert _digest(CLAUSE_BASE_MATRIX) == MATRIX_SHA256["clause"]
    assert _digest(R5_MATRIX) == MATRIX_SHA256["r5"]


def test_var_matrix_rows():
    assert VAR_BASE_MATRIX[6] == "100000011"
    gadget = var_base()
    assert gadget.tournament.has_arc(6, 8)
    assert gadget.tournament.has_arc(7, 2)


def test_clause_matrix_rows():
    assert CLAUSE_BASE_MATRIX[7] == "11110000"
    gadget = clause_base()
    assert gadget.tournament.has_arc(4, 5)
    assert gadget.tournament.has_arc(1, 3)
    assert gadget.tournament.has_arc(7, 2)


def test_r5_matrix():
    t = r5()
    assert t.has_arc(3, 0) and t.has_arc(4, 0)
    for i in range(5):
        assert t.has_arc(i, (i + 1) % 5) and t.has_arc(i, (i + 2) % 5)
    assert is_strong(t)
    assert omega(t).value == 2


def test_var_certified_orderings_are_minimum():
    gadget = var_base()
    for cert in gadget.certified_orderings:
        g = backedge_graph(gadget.tournament, cert.ordering)
        assert triangle_in_graph(g) is None
        assert clique_number(g) == 2


def test_clause_certified_orderings_are_minimum():
    gadget = clause_base()
    assert gadget.certified("yz-backward").ordering == tuple(range(8))
    assert gadget.certified("wx-backward").ordering == (3, 6, 4, 7, 0, 1, 5, 2)
    assert gadget.certified("uv-backward").ordering == (0, 1, 3, 5, 6, 4, 7, 2)
    for cert in gadget.certified_orderings:
        g = backedge_graph(gadget.tournament, cert.ordering)
        assert triangle_in_graph(g) is None
        assert clique_number(g) == 2


def test_verify_var_base():
    report = verify_var_base()
    assert report.omega_value == 2
    assert report.minimum_orderings == VAR_MIN_ORDERINGS
    assert report.property_holds
    assert set(report.patterns) == {(True, False), (False, True)}


def test_verify_clause_base():
    report = verify_clause_base()
    assert report.omega_value == 2
    assert report.minimum_orderings == CLAUSE_MIN_ORDERINGS
    assert report.property_holds
    assert (True, True, True) not in report.patterns
    for i in range(3):
        for j in range(i + 1, 3):
            assert any(p[i] and p[j] for p in report.patterns)


def test_marked_gadget_validation_catches_wrong_direction():
    from backedge.gadgets import CertifiedOrdering, MarkedGadget

    with pytest.raises(ValueError):
        MarkedGadget(
            var_base().tournament,
            (("uv", (6, 8)),),
            (CertifiedOrdering("bad", tuple(range(9)), (("uv", False),)),),
        )
    with pytest.raises(ValueError):
        MarkedGadget(var_base().tournament, (("uv", (8, 6)),), ())


def test_assemble_var_gadget(surrogate):
    gadget = assemble_var_gadget(surrogate)
    assert gadget.tournament.n == 10 + surrogate.n
    assert contains_subtournament(gadget.tournament, surrogate) is not None
    for cert in gadget.certified_orderings:
        g = backedge_graph(gadget.tournament, cert.ordering)
        assert clique_number(g) == 3
        pos = {v: i for i, v in enumerate(cert.ordering)}
        for name, (a, b) in gadget.marked_arcs:
            assert cert.is_forward(name) == (pos[a] < pos[b])


def test_assemble_clause_gadget(surrogate):
    gadget = assemble_clause_gadget(surrogate)
    assert gadget.tournament.n == 9 + surrogate.n
    for cert in gadget.certified_orderings:
        g = backedge_graph(gadget.tournament, cert.ordering)
        assert clique_number(g) == 3


def test_every_surrogate_ordering_achieves_three(surrogate):
    # the 7-vertex minimum witness has no 4-vertex transitive subtournament,
    # so its backedge clique number is 3 under every ordering
    import itertools

    for perm in itertools.permutations(range(surrogate.n)):
        assert clique_number(backedge_graph(surrogate, perm)) == 3


def test_assemble_rejects_wrong_companion(surrogate):
    from backedge.constructions import arrow, tt

    with pytest.raises(ValueError):
        assemble_var_gadget(c3())
    # prepend a dominating vertex: the value stays 3, but ordering the new
    # 4-vertex transitive subtournament in reverse now costs 4
    extended = arrow(tt(1), surrogate)
    for u in range(surrogate.n):
        for v in range(surrogate.n):
            if u != v and surrogate.has_arc(u, v):
                rest = surrogate.rows[u] & surrogate.rows[v]
                if rest:
                    w = (rest & -rest).bit_length() - 1
                    triple = (u, v, w)
                    break
        else:
            continue
        break
    sink, mid, source = triple[2] + 1, triple[1] + 1, triple[0] + 1
    head = (sink, mid, source, 0)
    bad = head + tuple(v for v in range(extended.n) if v not in head)
    assert clique_number(backedge_graph(extended, bad)) >= 4
    with pytest.raises(ValueError, match="supplied companion ordering"):
        assemble_var_gadget(extended, bad)


def test_gadget_property_error_type():
    assert issubclass(GadgetPropertyError, AssertionError)
