from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from quiveriq.exact import PoleError
from quiveriq.iseries import i_am_gr, i_bm_gr
from quiveriq.oracle import (Half, Outcome, RationalFunction, check_identity_A1,
                             check_identity_A2, check_identity_A7, complement,
                             fuzz_identities, global_residue_sum_vanishes, i_am_d_direct,
                             i_bm_d_direct, relation_equal, relation_gap_one,
                             residue_check_d1, residue_terms, run_oracle_suite)
from quiveriq.quiver import AnQuiverSpec, ParamAssignment, sample_params

generic = st.fractions(-30, 30, max_denominator=60).filter(lambda x: x.denominator != 1)
GR12 = ParamAssignment((F(0), F(1, 2)))


def gr_params(N0, N1, N2, seed, cap=5):
    return sample_params(AnQuiverSpec((N1,), N2, N0), seed, cap)


def test_identity_examples():
    assert check_identity_A1(2, 2)
    assert check_identity_A2(F(1, 3), F(5, 7), 0, 0)
    assert check_identity_A7(F(2, 9), 3, 3)


@given(generic, st.integers(0, 9))
def test_A1(a, n):
    assert check_identity_A1(a, n)


@given(generic, generic, st.integers(0, 6), st.integers(0, 6))
def test_A2(x1, x2, d1, d2):
    assume((x1 - x2).denominator != 1)
    assert check_identity_A2(x1, x2, d1, d2)


@given(generic, st.integers(0, 6), st.integers(0, 6))
def test_A7(a, m, l):
    assert check_identity_A7(a, m, l)


def test_identity_poles_are_reported():
    with pytest.raises(PoleError):
        check_identity_A2(1, 1, 1, 0)
    with pytest.raises(PoleError):
        check_identity_A7(0, 1, 0)


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_fuzz_suite(seed):
    assert fuzz_identities(seed, 100) == {"A1": True, "A2": True, "A7": True}


def test_direct_examples():
    assert i_bm_d_direct(0, 1, 2, (1,), GR12, 0) == 1
    assert i_bm_d_direct(0, 1, 2, (1,), GR12, 1) == 2
    assert i_am_d_direct(0, 1, 2, (2,), GR12, 0) == 1


@pytest.mark.parametrize("N0,N1,N2", [(0, 1, 3), (1, 1, 2), (2, 1, 2), (0, 2, 4), (1, 2, 3)])
@pytest.mark.parametrize("seed", [1, 2])
def test_two_path(N0, N1, N2, seed):
    p = gr_params(N0, N1, N2, seed)
    for fp in combinations(range(1, N2 + 1), N1):
        bm = i_bm_gr(N0, N1, N2, fp, p, 5)
        am = i_am_gr(N0, N2 - N1, N2, complement(fp, N2), p, 5)
        for d in range(6):
            assert bm[(d,)] == i_bm_d_direct(N0, N1, N2, fp, p, d)
            assert am[(-d,)] == i_am_d_direct(N0, N2 - N1, N2, complement(fp, N2), p, d)


@pytest.mark.parametrize("seed", [1, 2])
def test_relations(seed):
    p = gr_params(1, 1, 2, seed)
    q = gr_params(2, 1, 2, seed)
    for fp in [(1,), (2,)]:
        assert all(relation_gap_one(1, 1, 2, fp, p, d) for d in range(5))
        assert all(relation_equal(2, 1, 2, fp, q, d) for d in range(5))
        assert not relation_gap_one(1, 1, 2, fp, p, 1, sign_flip=True)
        # shifting the binomial exponent by one breaks the relation from degree one on
        assert not relation_equal(2, 1, 2, fp, q, 1, alpha_shift=-1)
    with pytest.raises(ValueError):
        relation_gap_one(0, 1, 3, (1,), p, 1)
    with pytest.raises(ValueError):
        relation_equal(1, 1, 2, (1,), p, 1)


def test_residue_example():
    terms = {t.pole: (t.residue, t.half) for t in residue_terms(0, 1, 2, (1,), GR12)}
    assert terms == {F(0): (F(-2), Half.RIGHT), F(-1, 2): (F(2), Half.LEFT)}
    assert residue_check_d1(0, 1, 2, (1,), GR12) is Outcome.PASS


@pytest.mark.parametrize("N0,N1,N2", [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 4)])
def test_residue_check(N0, N1, N2):
    for seed in (1, 2):
        p = gr_params(N0, N1, N2, seed, 1)
        for fp in combinations(range(1, N2 + 1), N1):
            assert residue_check_d1(N0, N1, N2, fp, p) is Outcome.PASS


def test_residue_not_applicable():
    assert residue_check_d1(2, 1, 2, (1,), gr_params(2, 1, 2, 1)) is Outcome.NOT_APPLICABLE
    assert residue_check_d1(1, 1, 2, (1,), gr_params(1, 1, 2, 1)) is Outcome.NOT_APPLICABLE


@given(st.lists(generic, max_size=3), st.lists(generic, min_size=2, max_size=7, unique=True),
       generic)
def test_global_residue_sum(zeros, poles, scale):
    assume(len(poles) - len(zeros) >= 2)
    assert global_residue_sum_vanishes(RationalFunction(scale, tuple(zeros), tuple(poles)))


def test_residue_preconditions():
    with pytest.raises(PoleError):
        RationalFunction(F(1), (), (F(1, 2), F(1, 2)))
    with pytest.raises(ValueError):
        global_residue_sum_vanishes(RationalFunction(F(1), (F(1, 3),), (F(1, 2), F(2, 3))))


def test_suite_rows():
    rows = run_oracle_suite((1,), fuzz_count=20, two_path_cap=3, relation_cap=3)
    assert {r["outcome"] for r in rows} == {"pass", "not-applicable"}
    assert rows == run_oracle_suite((1,), fuzz_count=20, two_path_cap=3, relation_cap=3)
