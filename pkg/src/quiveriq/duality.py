"""Case classification, variable changes and coefficient-level duality checks.

A check compares, at a fixed point ``Q`` and its image ``iota(Q)``,

    lhs = I_bm(q)    against    rhs = P(q) * I_am(q'(q))

on every monomial of the target box whose coefficient is provably complete.
``P`` is the prefactor of the case (nothing, an exponential or a binomial).
"""
from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .exact import (LaurentSeries, UnitFactor, VariableChange, WindowError, binom_series,
                    exp_series, reliable_window, apply_variable_change)
from .iseries import EffBox, i_am, i_bm
from .quiver import (AnQuiverSpec, FixedPointChain, MutatedQuiverSpec, ParamAssignment,
                     enumerate_fixed_points, iota, mutate, nf_na, node_values, sample_params)


class CaseTag(str, Enum):
    GAP_AT_LEAST_2 = "GapAtLeast2"
    GAP_ONE = "GapOne"
    EQUAL = "Equal"


class EmptyWindow(WindowError):
    """No target monomial is provably complete for the given boxes."""


# direction of the (1+q_k) factor on q'_{k-1} in the plain Equal case
DIVIDE = "divide"      # q'_{k-1} = q_{k-1} / (1+q_k)
MULTIPLY = "multiply"  # q'_{k-1} = q_{k-1} * (1+q_k)
DIRECTIONS = (DIVIDE, MULTIPLY)
# the only candidate that survives on Equal instances with nontrivial series
DEFAULT_DIRECTION = MULTIPLY


@dataclass(frozen=True)
class DualityCase:
    tag: CaseTag
    spec: AnQuiverSpec
    k: int
    mspec: MutatedQuiverSpec
    prefactor: str            # "none" | "exp" | "binom"
    prefactor_coeff: Fraction
    change: VariableChange
    direction: str | None = None

    @property
    def nvars(self) -> int:
        return self.spec.D - 1

    @property
    def taut_at_one(self) -> bool:
        return self.spec.taut_rank > 0 and self.k == 1


def classify_case(spec: AnQuiverSpec, k: int, direction: str = DEFAULT_DIRECTION) -> DualityCase:
    """Read the case off N_{k+1} - N_{k-1} (N_0 playing N_{k-1} at k = 1)."""
    mspec = mutate(spec, k)
    nf, na = nf_na(spec, k)
    gap = nf - na
    if gap < 0:
        raise ValueError(f"N_{k + 1} = {nf} < N_{k - 1} = {na}: no duality case applies")
    sign = Fraction(-1) ** mspec.nk_prime
    if gap >= 2:
        tag, pref, coeff = CaseTag.GAP_AT_LEAST_2, "none", Fraction(0)
    elif gap == 1:
        tag, pref, coeff = CaseTag.GAP_ONE, "exp", sign
    else:
        tag = CaseTag.EQUAL
        if spec.taut_rank > 0 and k == 1:
            pref, coeff = "binom", sign
        else:
            pref, coeff = "none", Fraction(0)
    if direction not in DIRECTIONS:
        raise ValueError(f"unknown direction {direction!r}")
    vc = build_variable_change(tag, spec, k, mspec.nk_prime, direction)
    used = direction if tag is CaseTag.EQUAL and pref == "none" and k >= 2 else None
    return DualityCase(tag, spec, k, mspec, pref, coeff, vc, used)


def build_variable_change(tag: CaseTag, spec: AnQuiverSpec, k: int, nk_prime: int,
                          direction: str = DEFAULT_DIRECTION) -> VariableChange:
    """Monomial map plus unit factors turning a q' series into a q series.

    Rows are target variables, columns source exponents (both 0-based):
    q'_k = 1/q_k and q'_{k+1} = q_{k+1} q_k, identity elsewhere.
    """
    n = spec.D - 1
    M = [[int(i == j) for j in range(n)] for i in range(n)]
    kk = k - 1
    M[kk][kk] = -1
    if k + 1 <= n:
        M[kk][kk + 1] = 1
    units = []
    if tag is CaseTag.EQUAL:
        taut1 = spec.taut_rank > 0 and k == 1
        c = Fraction(-1) ** nk_prime if taut1 else Fraction(1)
        if k + 1 <= n:
            w = [0] * n
            w[kk + 1] = -1
            units.append(UnitFactor(kk, c, tuple(w)))
        if not taut1 and k - 1 >= 1:
            w = [0] * n
            w[kk - 1] = -1 if direction == DIVIDE else 1
            units.append(UnitFactor(kk, c, tuple(w)))
    return VariableChange(tuple(map(tuple, M)), tuple(units))


def alpha_exponent(case: DualityCase, mfp, params: ParamAssignment) -> Fraction:
    """Sum of etas minus the restricted node-2 values plus N_1'."""
    if not (case.tag is CaseTag.EQUAL and case.taut_at_one):
        raise ValueError("alpha_exponent applies only to the Equal case at k = 1 with N0 > 0")
    x2 = node_values(mfp, params, case.spec, 2)
    return sum(params.etas, Fraction(0)) - sum(x2, Fraction(0)) + case.mspec.nk_prime


def am_box(case: DualityCase, caps) -> EffBox:
    """Smallest am enumeration box whose image covers the target box ``caps``."""
    k, n = case.k, case.nvars
    upper = caps[k] if k < n else 0   # cap of q_{k+1}, or 0 when k+1 is the frame
    return EffBox(tuple(caps), mutated=k, node_sum=(-caps[k - 1], upper), entry_hi=upper)


def target_window(case: DualityCase, caps) -> list:
    box = am_box(case, caps)
    lo, hi = box.series_box(case.nvars)
    window = reliable_window(lo, hi, case.change, caps)
    if not window:
        raise EmptyWindow(f"no reliable monomials for caps {caps}")
    return window


def prefactor_series(case: DualityCase, mfp, params, caps, negative_control=False) -> LaurentSeries:
    n, var = case.nvars, case.k - 1
    cap = caps[var]
    if case.prefactor == "exp":
        c = -case.prefactor_coeff if negative_control else case.prefactor_coeff
        return exp_series(c, var, cap, n)
    if case.prefactor == "binom":
        c = -case.prefactor_coeff if negative_control else case.prefactor_coeff
        return binom_series(alpha_exponent(case, mfp, params), c, var, cap, n)
    if negative_control:
        # no prefactor to flip: a spurious e^{-q_k} must break the identity
        return exp_series(-1, var, cap, n)
    return LaurentSeries.one(n)


@dataclass(frozen=True)
class Mismatch:
    monomial: tuple
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True)
class PairResult:
    fp: str
    image: str
    window_size: int
    mismatches: tuple

    @property
    def passed(self) -> bool:
        return self.window_size > 0 and not self.mismatches


@dataclass(frozen=True)
class VerificationReport:
    case: CaseTag
    spec: str
    k: int
    caps: tuple
    seed: int
    direction: str | None
    negative_control: bool
    pairs: tuple = field(default_factory=tuple)

    @property
    def mismatches(self) -> list:
        return [m for p in self.pairs for m in p.mismatches]

    @property
    def window_size(self) -> int:
        return min((p.window_size for p in self.pairs), default=0)

    @property
    def passed(self) -> bool:
        return bool(self.pairs) and all(p.passed for p in self.pairs)

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def compare_at(case: DualityCase, fp: FixedPointChain, params: ParamAssignment, caps,
               negative_control: bool = False) -> PairResult:
    caps = tuple(caps)
    mfp = iota(fp, case.k)
    window = target_window(case, caps)
    lhs = i_bm(case.spec, fp, params, EffBox(caps))
    am = i_am(case.mspec, mfp, params, am_box(case, caps))
    mismatches = []
    kept = {}
    for e, c in am.items():
        image = case.change.map_exponent(e)
        if any(v < 0 for v in image):
            # a complete am coefficient with a negative image cannot be matched
            mismatches.append(Mismatch(tuple(image), Fraction(0), c))
        else:
            kept[e] = c
    am = LaurentSeries(am.nvars, kept, am.lo, am.hi)
    mapped = apply_variable_change(am, case.change, caps, check_window=False)
    rhs = prefactor_series(case, mfp, params, caps, negative_control) * mapped
    for beta in window:
        a, b = lhs[beta], rhs[beta]
        if a != b:
            mismatches.append(Mismatch(beta, a, b))
    return PairResult(fp.label(), mfp.label(), len(window), tuple(mismatches))


def select_fixed_points(spec: AnQuiverSpec, seed: int, limit: int = 30, sample: int = 5) -> list:
    """Every fixed point when there are at most ``limit``, else a seeded sample."""
    fps = enumerate_fixed_points(spec)
    if len(fps) <= limit:
        return fps
    idx = sorted(random.Random(seed).sample(range(len(fps)), sample))
    return [fps[i] for i in idx]


def worker_count() -> int:
    raw = os.environ.get("QUIVERIQ_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _compare_job(args):
    return compare_at(*args)


def verify_pair(spec: AnQuiverSpec, k: int, caps, seed: int, fixed_points=None,
                direction: str = DEFAULT_DIRECTION, negative_control: bool = False,
                workers: int | None = None, params: ParamAssignment | None = None
                ) -> VerificationReport:
    """Check the duality at every selected fixed point; parallel over fixed points.

    Parameters are sampled from ``seed`` unless given explicitly.
    """
    case = classify_case(spec, k, direction)
    caps = tuple(int(c) for c in caps)
    if len(caps) != case.nvars:
        raise ValueError(f"need {case.nvars} caps, got {caps}")
    if params is None:
        params = sample_params(spec, seed, max(caps))
    fps = fixed_points if fixed_points is not None else select_fixed_points(spec, seed)
    jobs = [(case, fp, params, caps, negative_control) for fp in fps]
    workers = workers or worker_count()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=min(workers, len(jobs))) as pool:
            results = list(pool.map(_compare_job, jobs))
    else:
        results = [_compare_job(j) for j in jobs]
    return VerificationReport(case.tag, str(spec), k, caps, seed, case.direction,
                              negative_control, tuple(results))


def resolve_equal_direction(spec: AnQuiverSpec, k: int, caps, seeds) -> dict:
    """Verdict of each q'_{k-1} candidate in the plain Equal case."""
    out = {}
    for d in DIRECTIONS:
        out[d] = all(verify_pair(spec, k, caps, s, direction=d).passed for s in seeds)
    return out
