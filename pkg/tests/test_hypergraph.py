import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nrdkit.catalog import C6_COND, EQ, ONE_IN_THREE, or_k
from nrdkit.hypergraph import (BudgetExceeded, Hypergraph, InstanceError,
                               NrdCertificate, NrdFailure, PartiteHypergraph,
                               as_conditional, nrd_exact, nrd_exact_exhaustive,
                               project_instance, projection_hypergraph,
                               projection_map, shrinking_report, to_r_partite,
                               verify_nrd)
from nrdkit.predicates import ConditionalPredicate, IndexFamily, Predicate


def path_instance(n):
    """EQ-instance: path v1-v2-...-vn (always non-redundant)."""
    vs = tuple(f"v{i}" for i in range(1, n + 1))
    edges = tuple((vs[i], vs[i + 1]) for i in range(n - 1))
    return Hypergraph(vs, edges)


def test_instance_validation():
    with pytest.raises(InstanceError):
        PartiteHypergraph((("a",), ("a",)), ())  # vertex in two parts
    with pytest.raises(InstanceError):
        PartiteHypergraph((("a",), ("b",)), (("a", "b"), ("a", "b")))  # dup edge
    with pytest.raises(InstanceError):
        PartiteHypergraph((("a",), ("b",)), (("b", "a"),))  # wrong part
    with pytest.raises(InstanceError):
        Hypergraph(("a",), (("a", "z"),))


def test_round_trip_dict():
    h = PartiteHypergraph((("a", "b"), ("c",)), (("a", "c"), ("b", "c")))
    assert PartiteHypergraph.from_dict(h.to_dict()) == h


def test_as_conditional_fills_ambient():
    pq = as_conditional(EQ)
    assert isinstance(pq, ConditionalPredicate)
    assert len(pq.ambient) == 4
    assert set(pq.outside()) == {(0, 1), (1, 0)}


def test_eq_path_non_redundant():
    h = path_instance(4)
    cert = verify_nrd(h, EQ)
    assert isinstance(cert, NrdCertificate) and cert.verified
    # every witness violates its own edge and satisfies the others
    again = verify_nrd(h, EQ, mode="check-given", certificate=cert)
    assert isinstance(again, NrdCertificate)


def test_eq_triangle_redundant():
    vs = ("a", "b", "c")
    h = Hypergraph(vs, (("a", "b"), ("b", "c"), ("a", "c")))
    res = verify_nrd(h, EQ)
    assert isinstance(res, NrdFailure) and not res


def test_check_given_rejects_corrupted_witness():
    h = path_instance(3)
    cert = verify_nrd(h, EQ)
    bad = NrdCertificate({e: dict(w) for e, w in cert.witnesses.items()})
    e0 = h.edges[0]
    bad.witnesses[e0][e0[0]] = bad.witnesses[e0][e0[1]]  # edge now satisfied
    res = verify_nrd(h, EQ, mode="check-given", certificate=bad)
    assert isinstance(res, NrdFailure)


def test_check_given_needs_full_cover():
    h = path_instance(3)
    cert = verify_nrd(h, EQ)
    del cert.witnesses[h.edges[0]]
    with pytest.raises(InstanceError):
        verify_nrd(h, EQ, mode="check-given", certificate=cert)


def test_conditional_witness_lands_outside_base():
    # single-edge instance for C6*|C6: the witness must hit (0,0)
    h = PartiteHypergraph((("x",), ("y",)), (("x", "y"),))
    cert = verify_nrd(h, C6_COND)
    assert isinstance(cert, NrdCertificate)
    w = cert.witnesses[("x", "y")]
    assert (w["x"], w["y"]) == (0, 0)


def test_budget_trips():
    pq = or_k(3)
    vs = tuple(f"v{i}" for i in range(6))
    edges = tuple((vs[i], vs[(i + 1) % 6], vs[(i + 2) % 6]) for i in range(6))
    with pytest.raises(BudgetExceeded):
        verify_nrd(Hypergraph(vs, edges), pq, max_assignments=1)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.data())
def test_find_agrees_with_exhaustive_check(n, data):
    # random small EQ instances: search result matches brute-force existence
    vs = tuple(f"v{i}" for i in range(n))
    cands = [(a, b) for a in vs for b in vs if a != b]
    m = data.draw(st.integers(1, min(5, len(cands))))
    edges = tuple(data.draw(st.permutations(cands))[:m])
    h = Hypergraph(vs, edges)
    got = verify_nrd(h, EQ)
    # oracle: try all assignments per excluded edge
    pq = as_conditional(EQ)
    base, outside = set(pq.base.tuples), set(pq.outside())
    expect = True
    for i, e in enumerate(edges):
        found = False
        for vals in product(range(2), repeat=n):
            a = dict(zip(vs, vals))
            if tuple(a[v] for v in e) not in outside:
                continue
            if all(tuple(a[v] for v in e2) in base
                   for k, e2 in enumerate(edges) if k != i):
                found = True
                break
        if not found:
            expect = False
            break
    assert isinstance(got, NrdCertificate) == expect


def test_nrd_exact_eq_is_n_minus_1():
    for n in range(2, 5):
        size, inst = nrd_exact(EQ, n)
        assert size == n - 1
        assert isinstance(verify_nrd(inst, EQ), NrdCertificate)


def test_nrd_exact_matches_exhaustive_oracle():
    assert nrd_exact(or_k(2), 3)[0] == nrd_exact_exhaustive(or_k(2), 3)
    assert nrd_exact(EQ, 3)[0] == nrd_exact_exhaustive(EQ, 3)


def test_nrd_exact_partite():
    size, inst = nrd_exact(EQ, 4, part_sizes=[2, 2])
    assert isinstance(inst, PartiteHypergraph)
    assert size == 3  # spanning tree of K_{2,2}
    assert isinstance(verify_nrd(inst, EQ), NrdCertificate)


def test_nrd_exact_budget():
    with pytest.raises(BudgetExceeded):
        nrd_exact(or_k(2), 4, max_checks=3)


def test_to_r_partite_retention():
    rng = random.Random(0)
    vs = tuple(f"v{i}" for i in range(30))
    edges = set()
    while len(edges) < 150:
        edges.add(tuple(rng.sample(vs, 3)))
    h = Hypergraph(vs, tuple(edges))
    inst, frac = to_r_partite(h, 3, seed=1)
    assert inst.arity == 3
    # expected retention 3!/3^3 = 2/9; retries keep the best coloring
    assert frac >= 0.5 * 6 / 27
    assert len(inst.edges) == round(frac * len(edges))
    # retained edges exist in some order in the source
    src = {frozenset(e) for e in edges}
    assert all(frozenset(e) in src for e in inst.edges)


def test_project_instance():
    h = PartiteHypergraph((("a", "b"), ("c",), ("d", "e")),
                          (("a", "c", "d"), ("b", "c", "d"), ("a", "c", "e")))
    p = project_instance(h, [1, 3])
    assert p.arity == 2
    assert set(p.edges) == {("a", "d"), ("b", "d"), ("a", "e")}
    p1 = project_instance(h, [2])
    assert p1.edges == (("c",),)  # deduplicated


def test_projection_hypergraph_counts():
    h = PartiteHypergraph((("a", "b"), ("c", "d")),
                          (("a", "c"), ("a", "d"), ("b", "c")))
    fam = IndexFamily(2, ((1,), (2,)))
    proj, mult = projection_hypergraph(h, fam)
    assert len(proj.edges) == 3
    assert all(c == 1 for c in mult.values())
    # merging family: both coordinates read part 1 only
    fam2 = IndexFamily(2, ((1,), (1,)))
    with pytest.warns(UserWarning):
        proj2, mult2 = projection_hypergraph(h, fam2)
    assert len(proj2.edges) == 2  # a- and b-edges merge
    assert max(mult2.values()) == 2


def test_projection_map_per_source_alignment():
    h = PartiteHypergraph((("a", "b"), ("c", "d")),
                          (("a", "c"), ("b", "d")))
    fam = IndexFamily(2, ((1, 2), (2,)))
    proj, per_source, mult = projection_map(h, fam)
    assert len(per_source) == len(h.edges)
    assert set(per_source) == set(proj.edges)


def test_empty_index_set_gives_shared_vertex():
    h = PartiteHypergraph((("a", "b"), ("c",)), (("a", "c"), ("b", "c")))
    fam = IndexFamily(2, ((), (1,)))
    proj, _, _ = projection_map(h, fam)
    assert len(proj.parts[0]) == 1  # single () vertex shared by all edges


def test_shrinking_report():
    h = PartiteHypergraph((("a", "b"), ("c", "d", "e")),
                          (("a", "c"), ("a", "d"), ("a", "e"),
                           ("b", "c"), ("b", "d"), ("b", "e")))
    rep = shrinking_report(h)
    assert rep.edge_count == 6
    assert rep.factors[(1,)] == (2, 3.0)
    assert rep.factors[(2,)] == (3, 2.0)
    assert rep.shrink_factor == 2.0
    d = rep.to_dict()
    assert d["shrink_factor"] == 2.0
