import pytest

from nrdkit.catalog import catalog, or_k
from nrdkit.predicates import ConditionalPredicate, IndexFamily, Predicate
from nrdkit.substructure import (SubstructureCertificate, SubstructureError,
                                 dependency_analysis, direct_search, encode,
                                 family_supports, find_substructure,
                                 search_families, verify_certificate)
from nrdkit.sat import solve
from nrdkit import tables


THREELIN = catalog("3LIN*")
OR3_COND = ConditionalPredicate(or_k(3), Predicate.full(2, 3))


def identity_cert(pq):
    fam = IndexFamily(pq.arity, tuple((j,) for j in range(1, pq.arity + 1)))
    sigma = {q: q for q in pq.ambient.tuples}
    return SubstructureCertificate(pq, pq, fam, sigma)


def test_identity_certificate_verifies():
    cert = identity_cert(THREELIN)
    ok, problems = verify_certificate(cert)
    assert ok and not problems
    deps = dependency_analysis(cert)
    # on the 3LIN ambient each coordinate is determined either by itself or
    # by the other two (the equation pins the third value)
    assert deps[0] == [(1,), (2, 3)]
    assert deps[1] == [(2,), (1, 3)]
    assert deps[2] == [(3,), (1, 2)]
    assert family_supports(deps, cert.family)


def test_verify_rejects_membership_break():
    cert = identity_cert(THREELIN)
    # send a base tuple to the excluded tuple
    cert.sigma[(0, 1, 2)] = (0, 0, 0)
    ok, problems = verify_certificate(cert)
    assert not ok
    assert any("membership" in p for p in problems)


def test_verify_rejects_dependency_break():
    src = OR3_COND
    tgt = OR3_COND
    fam = IndexFamily(3, ((1,), (1,), (2,)))
    # identity sigma reads all three coordinates, so this family must fail
    sigma = {q: q for q in src.ambient.tuples}
    cert = SubstructureCertificate(src, tgt, fam, sigma)
    ok, problems = verify_certificate(cert)
    assert not ok
    assert any("depends on more than" in p for p in problems)


def test_verify_rejects_partial_sigma():
    cert = identity_cert(THREELIN)
    del cert.sigma[(1, 1, 1)]
    ok, problems = verify_certificate(cert)
    assert not ok


def test_json_round_trip():
    cert = identity_cert(THREELIN)
    again = SubstructureCertificate.from_json(cert.to_json())
    assert again.sigma == cert.sigma
    assert again.family.sets == cert.family.sets
    assert verify_certificate(again)[0]


def test_encode_variable_count():
    # x vars: |Q1| * r2 * d2 = 8*3*3; y vars: |Q1| * |Q2| = 8*9
    fam = IndexFamily(3, ((1, 2), (1, 3), (2, 3)))
    f, x, y = encode(OR3_COND.__class__(or_k(3), Predicate.full(2, 3)),
                     THREELIN, fam)
    assert len(x) == 8 * 3 * 3
    assert len(y) == 8 * 9
    assert f.num_vars == 144


def test_encode_solve_decode_round_trip():
    fam = IndexFamily(3, ((1, 2), (1, 3), (2, 3)))
    cert = find_substructure(OR3_COND, THREELIN, fam)
    assert cert is not None
    ok, problems = verify_certificate(cert)
    assert ok, problems
    # declared family is adequate: each set contains a minimal determining set
    assert family_supports(dependency_analysis(cert), fam)


def test_direct_search_agrees_with_sat():
    src, tgt = OR3_COND, THREELIN
    for sets in [((1, 2), (1, 3), (2, 3)),
                 ((1,), (2,), (3,)),
                 ((1, 2, 3),) * 3,
                 ((1,), (1,), (1,))]:
        fam = IndexFamily(3, sets)
        d = direct_search(src, tgt, fam)
        s = find_substructure(src, tgt, fam)
        assert (d is None) == (s is None), sets
        if d is not None:
            assert verify_certificate(d)[0]


def test_no_map_for_too_small_family():
    # single-coordinate reads cannot separate OR3's 7+1 tuples into 3LIN*
    fam = IndexFamily(3, ((1,), (2,), (3,)))
    assert find_substructure(OR3_COND, THREELIN, fam) is None
    assert direct_search(OR3_COND, THREELIN, fam) is None


def test_empty_index_set_map():
    # target coordinate 1 is constant; its index set may be empty
    src = ConditionalPredicate(or_k(2), Predicate.full(2, 2))
    tgt_base = Predicate(2, 4, [(0, 0, 0, 0), (0, 0, 0, 1), (0, 1, 1, 0),
                                (1, 1, 1, 1)])
    tgt = ConditionalPredicate(tgt_base, Predicate.full(2, 4))
    fam = IndexFamily(2, ((), (1,), (1,), (2,)))
    sigma = {(0, 0): (0, 1, 1, 1), (0, 1): (0, 1, 1, 0),
             (1, 0): (0, 0, 0, 1), (1, 1): (0, 0, 0, 0)}
    cert = SubstructureCertificate(src, tgt, fam, sigma)
    ok, problems = verify_certificate(cert)
    assert ok, problems
    assert dependency_analysis(cert)[0] == [()]  # constant output coordinate
    # and the solver finds a map for this family on its own
    assert find_substructure(src, tgt, fam) is not None


def test_search_families_finds_pairwise_family():
    res = search_families(OR3_COND, THREELIN, max_results=1)
    assert res.certificates
    cert = res.certificates[0]
    assert {len(I) for I in cert.family.sets} == {2}
    assert verify_certificate(cert)[0]


def test_search_families_sizes_filter():
    res = search_families(OR3_COND, THREELIN, sizes=(1, 1, 1), max_results=1)
    assert not res.certificates
    assert res.exhausted


def test_search_families_budgets():
    res = search_families(OR3_COND, THREELIN, max_families=2, max_results=5)
    assert res.families_tried <= 2
    assert not res.exhausted


def test_shape_mismatch_rejected():
    with pytest.raises(SubstructureError):
        encode(OR3_COND, THREELIN, IndexFamily(3, ((1,), (2,))))


# --- bundled construction tables --------------------------------------


@pytest.mark.parametrize("name", tables.CERTIFICATE_NAMES)
def test_bundled_certificates_verify(name):
    cert = tables.certificate(name)
    ok, problems = verify_certificate(cert)
    assert ok, (name, problems)
    assert family_supports(dependency_analysis(cert), cert.family), name


def test_p2q2_published_family_fails():
    # the family stated alongside the printed table does not satisfy the
    # dependency condition; the bundled certificate uses the corrected one
    cert = tables.certificate("P2Q2-PRINTED")
    bad = SubstructureCertificate(cert.source, cert.target,
                                  tables.P2Q2_STATED_FAMILY, cert.sigma)
    ok, problems = verify_certificate(bad)
    assert not ok
    assert any("depends on more than" in p for p in problems)


def test_sym_rows():
    for i in tables.SYM_ROWS:
        ok, _ = tables.verify_sym_row(i)
        assert ok == (i != 6)  # row 6 is a known defect (not a bijection)
    fixes = tables.repair_sym_row(6)
    assert fixes == [(7, 7)]  # unique single-entry repair
