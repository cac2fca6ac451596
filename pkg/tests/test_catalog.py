import pytest

from nrdkit.catalog import (BOOLBCK, BOOLBCK_PLUS, C6, C6_COND, C6_STAR, CAT5,
                            CAT5_PLUS, EQ, ONE_IN_THREE, R1S1, R2S2,
                            THREELIN_STAR_R, THREELIN_STAR_S, CatalogError,
                            catalog, catalog_names, or_k)


def test_sizes():
    assert len(EQ) == 2
    assert len(ONE_IN_THREE) == 3
    assert len(C6) == 6 and len(C6_STAR) == 5
    assert len(BOOLBCK) == 5 and len(BOOLBCK_PLUS) == 6
    assert len(CAT5) == 5 and len(CAT5_PLUS) == 6
    assert len(THREELIN_STAR_R) == 8 and len(THREELIN_STAR_S) == 9


def test_c6_is_c6star_plus_00():
    assert set(C6.tuples) - set(C6_STAR.tuples) == {(0, 0)}
    assert C6_COND.outside() == ((0, 0),)


def test_threelin_star_is_punctured_3lin():
    full = {(x, y, z) for x in range(3) for y in range(3) for z in range(3)
            if (x + y + z) % 3 == 0}
    assert set(THREELIN_STAR_S.tuples) == full
    assert set(THREELIN_STAR_R.tuples) == full - {(0, 0, 0)}


def test_boolbck_rows_are_permutation_matrices():
    for t in BOOLBCK_PLUS.tuples:
        rows = [t[0:3], t[3:6], t[6:9]]
        assert all(sum(r) == 1 for r in rows)
        assert all(sum(t[c::3]) == 1 for c in range(3))
    assert (1, 0, 0, 0, 1, 0, 0, 0, 1) in BOOLBCK_PLUS
    assert (1, 0, 0, 0, 1, 0, 0, 0, 1) not in BOOLBCK


def test_or_k():
    assert len(or_k(3)) == 7
    assert (0, 0, 0) not in or_k(3)
    assert catalog("OR4") == or_k(4)


def test_box_products():
    # R1|S1: arity 3 over domain 3, excluded set is a single tuple
    assert R1S1.base.arity == 3
    assert R1S1.outside() == ((0, 0, 0),)
    assert len(R1S1.ambient) == 18 and len(R1S1.base) == 17
    # R2|S2: arity 4, 36 ambient tuples, one excluded
    assert R2S2.base.arity == 4
    assert R2S2.outside() == ((0, 0, 0, 0),)
    assert len(R2S2.ambient) == 36 and len(R2S2.base) == 35


def test_lookup_normalization_and_errors():
    assert catalog("c6 *") == C6_STAR
    assert catalog("1in3") == ONE_IN_THREE
    with pytest.raises(CatalogError):
        catalog("NOPE")
    assert "EQ" in catalog_names()
