"""Fixed-point restricted equivariant I-functions of A_n quiver varieties.

Every geometry handled here lives on the chain of nodes ``0..D``: node 0 is
the tautological frame (values eta, possibly empty), node D the frame
(values lambda) and the others gauge nodes.  A summand of the I-function is a
product of three kinds of factor over pairs of nodes, each written with the
telescoped ratio ``R(x, k) = prod_{l<=0}(x+l) / prod_{l<=k}(x+l)``:

* ``weyl(i)``      prod_{I != J} 1/R(x_I - x_J, m_I - m_J)
* ``edge(a, b)``   prod_{I, J}   R(x^a_I - x^b_J, m^a_I - m^b_J)
* ``ci(a, b)``     prod_{I, J}   1/R(-x^a_I + x^b_J, -m^a_I + m^b_J)

Frames carry degree 0.  The geometries differ only in their factor lists,
see :func:`bm_factors` and :func:`am_factors`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from typing import Iterator, Sequence

from .exact import LaurentSeries, inv_ratio_prod, ratio_prod
from .quiver import (AnQuiverSpec, FixedPointChain, MutatedFixedPoint, MutatedQuiverSpec,
                     ParamAssignment, node_values)


@dataclass(frozen=True)
class EffBox:
    """Truncation of an effective-class sum.

    ``caps[i-1]`` bounds ``|m^(i)|`` for ordinary gauge nodes (entries >= 0).
    On a mutated node the entries are signed; there ``node_sum`` gives the
    allowed window for ``|n^(k)|`` and ``entry_hi`` the largest entry.
    """

    caps: tuple
    mutated: int | None = None
    node_sum: tuple = (0, 0)
    entry_hi: int = 0

    def entry_window(self, rank: int) -> tuple:
        lo = self.node_sum[0] - (rank - 1) * self.entry_hi if rank else 0
        return lo, self.entry_hi

    def series_box(self, nvars: int) -> tuple:
        lo = [0] * nvars
        hi = list(self.caps)
        if self.mutated is not None:
            lo[self.mutated - 1], hi[self.mutated - 1] = self.node_sum
        return tuple(lo), tuple(hi)


# effective classes ----------------------------------------------------------

def _vectors_with_sum_at_most(n: int, cap: int) -> Iterator[tuple]:
    if n == 0:
        yield ()
        return
    for first in range(cap + 1):
        for rest in _vectors_with_sum_at_most(n - 1, cap - first):
            yield (first,) + rest


def _dominates(a: Sequence[int], b: Sequence[int]) -> bool:
    """Is there an injection I -> J_I with a_I >= b_{J_I}?"""
    if len(a) > len(b):
        return False
    return all(x >= y for x, y in zip(sorted(a), sorted(b)))


def eff_flag_enumerate(spec: AnQuiverSpec, box: EffBox) -> Iterator[dict]:
    """Nonnegative degree vectors satisfying the flag matching condition.

    Yields dicts ``node -> tuple`` for nodes ``1..D-1``; nodes are generated
    from the frame downwards because each is matched against the one above.
    """
    D = spec.D
    if len(box.caps) != D - 1:
        raise ValueError("box does not match the number of gauge nodes")
    if any(c < 0 for c in box.caps):
        return

    def rec(i: int, above: tuple, acc: dict):
        if i == 0:
            yield dict(acc)
            return
        for v in _vectors_with_sum_at_most(spec.rank(i), box.caps[i - 1]):
            if _dominates(v, above):
                acc[i] = v
                yield from rec(i - 1, v, acc)
        acc.pop(i, None)

    yield from rec(D - 1, (0,) * spec.frame_rank, {})


def _signed_vectors(n: int, lo: int, hi: int, slo: int, shi: int) -> Iterator[tuple]:
    if n == 0:
        if slo <= 0 <= shi:
            yield ()
        return
    for v in product(range(lo, hi + 1), repeat=n):
        if slo <= sum(v) <= shi:
            yield v


def eff_dflag_enumerate(mspec: MutatedQuiverSpec, box: EffBox) -> Iterator[dict]:
    """Effective classes after mutation at ``k``; node ``k`` entries may be negative."""
    k, D = mspec.k, mspec.D
    if box.mutated != k:
        raise ValueError(f"box must declare the mutated node k={k}")
    if any(c < 0 for i, c in enumerate(box.caps, 1) if i != k) or box.node_sum[0] > box.node_sum[1]:
        return
    frame = (0,) * mspec.base.frame_rank
    lo, hi = box.entry_window(mspec.nk_prime)

    def node_vecs(i):
        if i == k:
            return _signed_vectors(mspec.nk_prime, lo, hi, *box.node_sum)
        return _vectors_with_sum_at_most(mspec.rank(i), box.caps[i - 1])

    order = list(range(D - 1, k, -1)) + [k] + list(range(k - 1, 0, -1))

    def partner(i):
        # node whose degrees bound node i from above
        return k + 1 if i in (k, k - 1) else i + 1

    def rec(pos: int, acc: dict):
        if pos == len(order):
            yield dict(acc)
            return
        i = order[pos]
        p = partner(i)
        above = frame if p == D else acc[p]
        for v in node_vecs(i):
            if i == k:
                # every node-k entry needs its own partner entry at least as large
                ok = _dominates([-x for x in v], [-x for x in above])
            else:
                ok = _dominates(v, above)
            if ok:
                acc[i] = v
                yield from rec(pos + 1, acc)
        acc.pop(i, None)

    yield from rec(0, {})


def is_flag_effective(spec: AnQuiverSpec, degs: dict) -> bool:
    """Literal flag effectivity check by searching all injections (slow; for oracles)."""
    D = spec.D
    for i in range(1, D):
        v = degs[i]
        above = degs.get(i + 1, (0,) * spec.frame_rank) if i + 1 < D else (0,) * spec.frame_rank
        if any(x < 0 for x in v):
            return False
        if not any(all(v[I] >= above[J] for I, J in enumerate(js))
                   for js in permutations(range(len(above)), len(v))):
            return False
    return True


# factor lists ---------------------------------------------------------------

def bm_factors(D: int, taut: bool) -> list:
    out = [("weyl", i) for i in range(1, D)]
    out += [("edge", i, i + 1) for i in range(1, D)]
    if taut:
        out.append(("edge", 0, 1))
    return out


def am_factors(D: int, k: int, taut: bool) -> list:
    """Factors after mutation at ``k``; with ``taut`` node 0 is the eta frame."""
    out = [("weyl", i) for i in range(1, D)]
    out += [("edge", i, i + 1) for i in range(1, D) if i not in (k - 1, k)]
    if k >= 2 or taut:
        out.append(("edge", k - 1, k + 1))
        out.append(("ci", k, k - 1))
    out.append(("edge", k + 1, k))
    if taut and k != 1:
        out.append(("edge", 0, 1))
    return out


def _factor_value(kind, a, b, vals, degs) -> Fraction:
    out = Fraction(1)
    if kind == "weyl":
        xs, ms = vals[a], degs[a]
        for I in range(len(xs)):
            for J in range(len(xs)):
                if I != J:
                    out *= inv_ratio_prod(xs[I] - xs[J], ms[I] - ms[J])
        return out
    xa, ma, xb, mb = vals[a], degs[a], vals[b], degs[b]
    for I in range(len(xa)):
        for J in range(len(xb)):
            if kind == "edge":
                f = ratio_prod(xa[I] - xb[J], ma[I] - mb[J])
            else:
                f = inv_ratio_prod(-xa[I] + xb[J], -ma[I] + mb[J])
            if f == 0:
                return f
            out *= f
    return out


def evaluate_term(factors: list, vals: dict, degs: dict) -> Fraction:
    """Product of all factors at one degree; edges first so structural zeros short-circuit."""
    ordered = sorted(factors, key=lambda f: f[0] != "edge")
    out = Fraction(1)
    for f in ordered:
        kind, a = f[0], f[1]
        b = f[2] if len(f) > 2 else None
        v = _factor_value(kind, a, b, vals, degs)
        if v == 0:
            return v
        out *= v
    return out


def restricted_values(spec: AnQuiverSpec, fp, params: ParamAssignment) -> dict:
    return {i: node_values(fp, params, spec, i) for i in range(0, spec.D + 1)}


def _frame_degrees(spec: AnQuiverSpec, degs: dict) -> dict:
    full = dict(degs)
    full[0] = (0,) * spec.taut_rank
    full[spec.D] = (0,) * spec.frame_rank
    return full


def sum_series(factors, vals, classes, nvars: int, lo, hi, spec: AnQuiverSpec) -> LaurentSeries:
    coeffs: dict = {}
    for degs in classes:
        c = evaluate_term(factors, vals, _frame_degrees(spec, degs))
        if c:
            e = tuple(sum(degs[i]) for i in range(1, nvars + 1))
            coeffs[e] = coeffs.get(e, 0) + c
    return LaurentSeries(nvars, coeffs, lo, hi)


# bm side ----------------------------------------------------------------------

def i_bm_flag(spec: AnQuiverSpec, fp: FixedPointChain, params: ParamAssignment,
              box: EffBox, classes=None) -> LaurentSeries:
    """I-function of the flag variety restricted to ``fp`` (the ``N0 = 0`` geometry)."""
    if spec.taut_rank:
        raise ValueError("i_bm_flag is the N0 = 0 geometry; use i_bm_tautf")
    return _bm(spec, fp, params, box, classes)


def i_bm_tautf(spec: AnQuiverSpec, fp: FixedPointChain, params: ParamAssignment,
               box: EffBox, classes=None) -> LaurentSeries:
    """Flag integrand times the tautological twist prod_{A,J} R(eta_A - x^(1)_J, -m^(1)_J)."""
    return _bm(spec, fp, params, box, classes)


def _bm(spec, fp, params, box, classes):
    n = spec.D - 1
    if classes is None:
        classes = eff_flag_enumerate(spec, box)
    factors = bm_factors(spec.D, spec.taut_rank > 0)
    lo, hi = box.series_box(n)
    return sum_series(factors, restricted_values(spec, fp, params), classes, n, lo, hi, spec)


# am side ----------------------------------------------------------------------

def _am(mspec: MutatedQuiverSpec, mfp: MutatedFixedPoint, params, box, classes):
    spec = mspec.base
    if mfp.k != mspec.k:
        raise ValueError("fixed point and mutation node disagree")
    n = spec.D - 1
    if classes is None:
        classes = eff_dflag_enumerate(mspec, box)
    factors = am_factors(spec.D, mspec.k, spec.taut_rank > 0)
    lo, hi = box.series_box(n)
    return sum_series(factors, restricted_values(spec, mfp, params), classes, n, lo, hi, spec)


def i_am_flag(mspec: MutatedQuiverSpec, mfp: MutatedFixedPoint, params: ParamAssignment,
              box: EffBox, classes=None) -> LaurentSeries:
    """I-function of the complete intersection dual to the flag variety.

    The series is exact on the box returned by ``box.series_box``: node ``k``
    exponents below the enumerated window are simply not computed.
    """
    if mspec.base.taut_rank:
        raise ValueError("i_am_flag is the N0 = 0 geometry")
    return _am(mspec, mfp, params, box, classes)


def i_am_tautf_k(mspec, mfp, params, box, classes=None) -> LaurentSeries:
    if mspec.k == 1:
        raise ValueError("mutation at node 1 is i_am_tautf_1")
    return _am(mspec, mfp, params, box, classes)


def i_am_tautf_1(mspec, mfp, params, box, classes=None) -> LaurentSeries:
    if mspec.k != 1:
        raise ValueError("i_am_tautf_1 needs k = 1")
    return _am(mspec, mfp, params, box, classes)


def i_am(mspec, mfp, params, box, classes=None) -> LaurentSeries:
    """Dispatch to the am evaluator matching the geometry."""
    return _am(mspec, mfp, params, box, classes)


def i_bm(spec, fp, params, box, classes=None) -> LaurentSeries:
    return _bm(spec, fp, params, box, classes)


# Grassmannian building block (explicit formulas, one variable) -------------------

def _gr_vectors(n: int, cap: int) -> Iterator[tuple]:
    return _vectors_with_sum_at_most(n, cap)


def i_bm_gr_term(lams: Sequence[Fraction], fvals: Sequence[Fraction],
                 etas: Sequence[Fraction], d: Sequence[int]) -> Fraction:
    n1 = len(fvals)
    out = Fraction(-1) ** ((n1 - 1) * sum(d))
    for I in range(n1):
        for J in range(I + 1, n1):
            a = fvals[I] - fvals[J]
            out *= (a + d[I] - d[J]) / a
    for I in range(n1):
        num = Fraction(1)
        for eta in etas:
            for l in range(d[I]):
                num *= -fvals[I] + eta - l
        den = Fraction(1)
        for lam in lams:
            for l in range(1, d[I] + 1):
                den *= fvals[I] - lam + l
        out *= num / den
    return out


def i_bm_gr(N0: int, N1: int, N2: int, fp: Sequence[int], params: ParamAssignment,
            cap: int) -> LaurentSeries:
    """Restricted I-function of N0 copies of S_1 over Gr(N1, N2) at subset ``fp``."""
    fp = tuple(sorted(fp))
    if len(fp) != N1 or len(params.lambdas) != N2 or len(params.etas) != N0:
        raise ValueError("ranks do not match the fixed point / parameters")
    fvals = [params.lam(f) for f in fp]
    coeffs: dict = {}
    for d in _gr_vectors(N1, cap):
        s = sum(d)
        coeffs[(s,)] = coeffs.get((s,), 0) + i_bm_gr_term(params.lambdas, fvals, params.etas, d)
    return LaurentSeries(1, coeffs, (0,), (cap,))


def i_am_gr_term(lams, fvals, etas, d) -> Fraction:
    """Summand at a nonpositive degree vector ``d``."""
    n1 = len(fvals)
    out = Fraction(-1) ** ((n1 - 1) * sum(d))
    for I in range(n1):
        for J in range(I + 1, n1):
            a = fvals[I] - fvals[J]
            out *= (a + d[I] - d[J]) / a
    for I in range(n1):
        num = Fraction(1)
        den = Fraction(1)
        for l in range(1, -d[I] + 1):
            for eta in etas:
                num *= -fvals[I] + eta + l
            for lam in lams:
                den *= -fvals[I] + lam + l
        out *= num / den
    return out


def i_am_gr(N0: int, N1prime: int, N2: int, fp_c: Sequence[int], params: ParamAssignment,
            cap: int) -> LaurentSeries:
    """Dual-side I-function at the complementary subset; exponents run over ``-cap..0``."""
    fp_c = tuple(sorted(fp_c))
    if len(fp_c) != N1prime or len(params.lambdas) != N2 or len(params.etas) != N0:
        raise ValueError("ranks do not match the fixed point / parameters")
    fvals = [params.lam(f) for f in fp_c]
    coeffs: dict = {}
    for n in _gr_vectors(N1prime, cap):
        d = tuple(-v for v in n)
        s = sum(d)
        coeffs[(s,)] = coeffs.get((s,), 0) + i_am_gr_term(params.lambdas, fvals, params.etas, d)
    return LaurentSeries(1, coeffs, (-cap,), (0,))
