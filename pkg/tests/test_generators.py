import math
import random

import pytest

from nrdkit.catalog import C6_COND
from nrdkit.generators import (GeneratorError, ShrinkingInstance, adjacency,
                               build_R1S1_instance, build_R2S2_instance,
                               c6_certificate, gen_girth6, girth,
                               girth6_witness)
from nrdkit.hypergraph import (NrdCertificate, PartiteHypergraph,
                               shrinking_report, verify_nrd)


@pytest.mark.parametrize("q", [2, 3, 5])
def test_plane_parameters(q):
    g = gen_girth6(q)
    n1 = q * q + q + 1
    assert len(g.parts[0]) == n1 and len(g.parts[1]) == n1
    assert len(g.edges) == (q + 1) * n1
    # (q+1)-regular on both sides
    adj = adjacency(g)
    assert all(len(nb) == q + 1 for nb in adj.values())


@pytest.mark.parametrize("q", [2, 3])
def test_girth_is_six(q):
    assert girth(gen_girth6(q)) == 6


def test_girth_of_forest_and_small_cycle():
    tree = PartiteHypergraph((("a", "b"), ("c",)), (("a", "c"), ("b", "c")))
    assert girth(tree) == math.inf
    c4 = PartiteHypergraph((("a", "b"), ("c", "d")),
                           (("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")))
    assert girth(c4) == 4


def test_non_prime_rejected():
    for q in (0, 1, 4, 6, 9):
        with pytest.raises(GeneratorError):
            gen_girth6(q)


def test_girth6_witness_fano():
    g = gen_girth6(2)
    adj = adjacency(g)
    base = set(C6_COND.base.tuples)
    for e in g.edges:
        w = girth6_witness(g, e, adj=adj)
        assert (w[e[0]], w[e[1]]) == (0, 0)
        for e2 in g.edges:
            if e2 != e:
                assert (w[e2[0]], w[e2[1]]) in base


def test_girth6_witness_refuses_short_cycles():
    c4 = PartiteHypergraph((("a", "b"), ("c", "d")),
                           (("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")))
    with pytest.raises(Exception):
        girth6_witness(c4, ("a", "c"))


def test_c6_certificate_passes_independent_check():
    g = gen_girth6(2)
    cert = c6_certificate(g)
    res = verify_nrd(g, C6_COND, mode="check-given", certificate=cert)
    assert isinstance(res, NrdCertificate)


def test_witness_matches_search_on_fano():
    # search-based verification agrees with the constructive witnesses
    g = gen_girth6(2)
    res = verify_nrd(g, C6_COND, mode="find-witnesses")
    assert isinstance(res, NrdCertificate)


@pytest.mark.parametrize("q", [2, 3])
def test_r1s1_instance(q):
    inst = build_R1S1_instance(q)
    n1 = q * q + q + 1
    assert inst.n_edges == (q + 1) * n1 * n1
    assert inst.n_vertices == 3 * n1
    res = inst.verify(mode="check-given")
    assert isinstance(res, NrdCertificate)
    rep = shrinking_report(inst.hypergraph)
    assert rep.shrink_factor == pytest.approx(q + 1)


def test_r2s2_instance_q2():
    inst = build_R2S2_instance(2)
    assert inst.n_edges == 21 * 21
    assert inst.n_vertices == 4 * 7
    res = inst.verify(mode="check-given")
    assert isinstance(res, NrdCertificate)
    rep = shrinking_report(inst.hypergraph)
    assert rep.shrink_factor == pytest.approx(3)


def test_r1s1_third_part_override():
    inst = build_R1S1_instance(2, third_part_size=2)
    assert inst.n_edges == 21 * 2
    assert isinstance(inst.verify(mode="check-given"), NrdCertificate)
    with pytest.raises(GeneratorError):
        build_R1S1_instance(2, third_part_size=0)


def test_truncated_keeps_witnesses_valid():
    inst = build_R1S1_instance(2)
    sub = inst.truncated(40)
    assert sub.n_edges == 40
    assert isinstance(sub.verify(mode="check-given"), NrdCertificate)
    with pytest.raises(GeneratorError):
        inst.truncated(0)
    with pytest.raises(GeneratorError):
        inst.truncated(inst.n_edges + 1)


def test_r1s1_find_witnesses_agrees_q2():
    inst = build_R1S1_instance(2)
    assert isinstance(inst.verify(mode="find-witnesses"), NrdCertificate)


def test_witness_search_matches_girth_oracle_random_bipartite():
    # random bipartite graphs: C6*|C6 non-redundancy iff girth >= 6
    rng = random.Random(5)
    for _ in range(60):
        na, nb = rng.randint(2, 4), rng.randint(2, 4)
        a = tuple(f"a{i}" for i in range(na))
        b = tuple(f"b{i}" for i in range(nb))
        cands = [(x, y) for x in a for y in b]
        edges = tuple(rng.sample(cands, rng.randint(1, len(cands))))
        g = PartiteHypergraph((a, b), edges)
        got = isinstance(verify_nrd(g, C6_COND), NrdCertificate)
        assert got == (girth(g) >= 6)
