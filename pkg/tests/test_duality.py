from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiveriq.duality import (DIVIDE, MULTIPLY, CaseTag, alpha_exponent, am_box,
                              build_variable_change, classify_case, resolve_equal_direction,
                              target_window, verify_pair, worker_count)
from quiveriq.exact import apply_variable_change, reliable_window
from quiveriq.iseries import i_am
from quiveriq.quiver import (AnQuiverSpec, FixedPointChain, ParamAssignment,
                             enumerate_fixed_points, iota, sample_params)

S = AnQuiverSpec


def test_classification():
    assert classify_case(S((1, 2), 3), 2).tag is CaseTag.GAP_AT_LEAST_2   # N1=1, N3=3
    c = classify_case(S((1,), 2, 1), 1)
    assert (c.tag, c.prefactor, c.prefactor_coeff) == (CaseTag.GAP_ONE, "exp", -1)
    c = classify_case(S((1,), 2, 2), 1)
    assert (c.tag, c.prefactor) == (CaseTag.EQUAL, "binom")
    c = classify_case(S((2, 2), 2), 2)
    assert (c.tag, c.prefactor, c.mspec.nk_prime) == (CaseTag.EQUAL, "none", 0)


def test_gap_two_monomial_map():
    vc = build_variable_change(CaseTag.GAP_AT_LEAST_2, S((1, 2, 3), 4), 2, 2)
    assert vc.units == ()
    assert vc.map_exponent((0, 1, 2)) == (0, 1, 2)     # (n_k, n_k+1) -> (n_k+1 - n_k, n_k+1)
    assert vc.map_exponent((0, 3, 1)) == (0, -2, 1)
    assert vc.map_exponent((5, 0, 0)) == (5, 0, 0)     # q'_i = q_i away from k


def test_equal_taut_unit_factor():
    case = classify_case(S((1, 2), 3, 2), 1)
    (u,) = case.change.units
    assert (u.var, u.coeff, u.weights) == (0, F(-1), (0, -1))


def test_equal_flag_units_by_direction():
    for d, w in ((DIVIDE, -1), (MULTIPLY, 1)):
        units = build_variable_change(CaseTag.EQUAL, S((1, 1, 1), 2), 2, 0, d).units
        assert {(u.var, u.weights) for u in units} == {(1, (0, 0, -1)), (1, (w, 0, 0))}


def test_alpha_exponent():
    spec = S((1, 2), 3, 2)
    case = classify_case(spec, 1)
    p = ParamAssignment((F(0), F(1, 2), F(7, 3)), (F(1, 7), F(2, 7)))
    mfp = iota(FixedPointChain(((1,), (1, 2)), 3), 1)
    assert alpha_exponent(case, mfp, p) == F(13, 14)
    # ordering inside C_2 does not matter
    mfp2 = iota(FixedPointChain(((2,), (1, 2)), 3), 1)
    assert alpha_exponent(case, mfp2, p) == F(13, 14)
    sym = S((2, 2), 3, 2)
    c0 = classify_case(sym, 1)
    assert c0.mspec.nk_prime == 0
    q = ParamAssignment((F(1, 5), F(2, 5), F(3, 5)), (F(1, 5), F(2, 5)))
    assert alpha_exponent(c0, iota(FixedPointChain(((1, 2), (1, 2)), 3), 1), q) == 0
    with pytest.raises(ValueError):
        alpha_exponent(classify_case(S((1, 2), 3), 1), mfp, p)


def test_window_covers_target_box():
    case = classify_case(S((1, 2), 3), 1)
    caps = (3, 2)
    assert sorted(target_window(case, caps)) == [(a, b) for a in range(4) for b in range(3)]
    box = am_box(case, caps)
    assert box.node_sum == (-3, 2)
    lo, hi = box.series_box(2)
    narrower = reliable_window((lo[0] + 1, lo[1]), hi, case.change, caps)
    # every target with beta_1 = 3 has (3, 0) as a vertex and needs n_1 = -3
    assert sorted(narrower) == [(a, b) for a in range(3) for b in range(3)]


def test_identity_window_is_box():
    from quiveriq.exact import VariableChange
    assert len(reliable_window((0,), (4,), VariableChange.identity(1), (4,))) == 5


def test_inverse_change_restores_am_series():
    spec = S((1, 2), 3)
    case = classify_case(spec, 1)
    caps = (3, 3)
    p = sample_params(spec, 2, 3)
    fp = enumerate_fixed_points(spec)[1]
    am = i_am(case.mspec, iota(fp, 1), p, am_box(case, caps))
    mapped = apply_variable_change(am, case.change, caps)
    inv = case.change.inverse()
    back = {inv.map_exponent(e): c for e, c in mapped.items()}
    window = {inv.map_exponent(b) for b in target_window(case, caps)}
    assert {e: c for e, c in am.items() if e in window} == back


def test_verify_examples():
    r = verify_pair(S((1,), 3), 1, (5,), 1)
    assert r.passed and r.case is CaseTag.GAP_AT_LEAST_2 and len(r.pairs) == 3
    r = verify_pair(S((1,), 2, 1), 1, (6,), 1)
    assert r.passed and r.case is CaseTag.GAP_ONE


@pytest.mark.parametrize("spec,k,caps", [
    (S((1,), 3), 1, (4,)), (S((1,), 2, 1), 1, (4,)), (S((1,), 2, 2), 1, (4,)),
    (S((1, 1), 1), 2, (2, 2)),
])
def test_negative_control_fails(spec, k, caps):
    r = verify_pair(spec, k, caps, 1, negative_control=True)
    assert not r.passed and r.mismatches


def test_equal_direction_resolution():
    assert resolve_equal_direction(S((1, 1), 1), 2, (3, 3), (1, 2)) == {DIVIDE: False, MULTIPLY: True}
    assert resolve_equal_direction(S((2, 2, 2), 3), 2, (2, 2, 1), (1,)) == {DIVIDE: False,
                                                                             MULTIPLY: True}


def test_point_flag_cannot_separate_directions():
    # F(2,2;2) is a point: both I-functions are identically 1 on the box
    res = resolve_equal_direction(S((2, 2), 2), 2, (3, 3), (1, 2))
    assert res == {DIVIDE: True, MULTIPLY: True}


CASES = [(S((1, 2), 3), 1, (2, 2)), (S((1, 2), 3), 2, (2, 2)), (S((2, 3), 3), 2, (2, 1)),
         (S((1, 2), 3, 1), 2, (2, 1)), (S((1, 2), 3, 2), 1, (2, 2)), (S((1, 1), 2), 1, (2, 2))]


@settings(max_examples=12)
@given(st.sampled_from(CASES), st.integers(0, 10**6))
def test_verdict_seed_independent(case, seed):
    spec, k, caps = case
    assert verify_pair(spec, k, caps, seed).passed


def test_all_fixed_points_agree():
    spec = S((1, 2), 4)
    r = verify_pair(spec, 2, (2, 2), 3)
    assert len(r.pairs) == 12 and all(p.passed for p in r.pairs)


def test_parallel_matches_serial(monkeypatch):
    monkeypatch.setenv("QUIVERIQ_THREADS", "2")
    assert worker_count() == 2
    spec = S((1, 2), 3)
    assert verify_pair(spec, 1, (2, 2), 4) == verify_pair(spec, 1, (2, 2), 4, workers=1)
    monkeypatch.setenv("QUIVERIQ_THREADS", "junk")
    assert worker_count() == 1


def test_cap_count_checked():
    with pytest.raises(ValueError):
        verify_pair(S((1, 2), 3), 1, (2,), 1)
