"""A_n quivers, their mutation at one gauge node, and torus fixed points.

Nodes are numbered ``1..D-1`` (gauge) and ``D`` (frame).  An optional second
frame of rank ``N0`` feeds node 1; it is treated as node ``0`` throughout, so
"plain flag" simply means ``N0 == 0``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, prod
from typing import Iterator, Sequence


class QuiverError(ValueError):
    """Invalid ranks or node index."""


class NegativeRankError(QuiverError):
    """Mutation would produce a negative rank."""


@dataclass(frozen=True)
class AnQuiverSpec:
    gauge_ranks: tuple
    frame_rank: int
    taut_rank: int = 0

    def __post_init__(self):
        object.__setattr__(self, "gauge_ranks", tuple(int(r) for r in self.gauge_ranks))
        ranks = self.ranks
        if not self.gauge_ranks:
            raise QuiverError("need at least one gauge node")
        if any(r <= 0 for r in self.gauge_ranks):
            raise QuiverError(f"gauge ranks must be positive, got {self.gauge_ranks}")
        if self.taut_rank < 0:
            raise QuiverError("taut_rank must be >= 0")
        if any(a > b for a, b in zip(ranks[1:], ranks[2:])):
            raise QuiverError(f"ranks must satisfy N1 <= N2 <= ... <= ND, got {ranks[1:]}")
        if self.taut_rank > 0 and self.taut_rank > self.rank(2):
            raise QuiverError(f"tautological frame rank N0={self.taut_rank} exceeds N2={self.rank(2)}")

    @property
    def D(self) -> int:
        return len(self.gauge_ranks) + 1

    @property
    def ranks(self) -> tuple:
        """(N0, N1, ..., ND)."""
        return (self.taut_rank,) + self.gauge_ranks + (self.frame_rank,)

    def rank(self, i: int) -> int:
        return self.ranks[i]

    def __str__(self):
        inner = ",".join(map(str, self.gauge_ranks))
        tail = f"; N0={self.taut_rank}" if self.taut_rank else ""
        return f"A({inner};{self.frame_rank}{tail})"


def _check_node(spec: AnQuiverSpec, k: int):
    if not 1 <= k <= spec.D - 1:
        raise QuiverError(f"gauge node k={k} out of range 1..{spec.D - 1}")


def nf_na(spec: AnQuiverSpec, k: int) -> tuple:
    """Outgoing / incoming rank sums (N_f(k), N_a(k)) for the chain."""
    _check_node(spec, k)
    return spec.rank(k + 1), spec.rank(k - 1)


@dataclass(frozen=True)
class MutatedQuiverSpec:
    base: AnQuiverSpec
    k: int
    nk_prime: int

    @property
    def D(self) -> int:
        return self.base.D

    def rank(self, i: int) -> int:
        return self.nk_prime if i == self.k else self.base.rank(i)


def mutate(spec: AnQuiverSpec, k: int) -> MutatedQuiverSpec:
    nf, na = nf_na(spec, k)
    nk = max(nf, na) - spec.rank(k)
    if nk < 0:
        raise NegativeRankError(f"max(N_f, N_a) = {max(nf, na)} < N_{k} = {spec.rank(k)}")
    return MutatedQuiverSpec(spec, k, nk)


@dataclass(frozen=True)
class FixedPointChain:
    """Nested subsets C_1 <= ... <= C_{D-1} of [N_D], elements 1-based and sorted."""

    subsets: tuple
    frame_rank: int

    def __post_init__(self):
        object.__setattr__(self, "subsets", tuple(tuple(sorted(c)) for c in self.subsets))
        top = set(range(1, self.frame_rank + 1))
        for lower, upper in zip(self.subsets, self.subsets[1:] + (tuple(top),)):
            if not set(lower) <= set(upper):
                raise QuiverError(f"subsets are not nested: {self.subsets}")

    def node(self, i: int) -> tuple:
        if i == len(self.subsets) + 1:
            return tuple(range(1, self.frame_rank + 1))
        return self.subsets[i - 1]

    def label(self) -> str:
        return " < ".join("{" + ",".join(map(str, c)) + "}" for c in self.subsets)


@dataclass(frozen=True)
class MutatedFixedPoint:
    """Fixed point after mutation at ``k``: C_i for i != k, plus ``ck_prime``."""

    subsets: tuple
    k: int
    ck_prime: tuple
    frame_rank: int

    def __post_init__(self):
        object.__setattr__(self, "subsets", tuple(tuple(sorted(c)) for c in self.subsets))
        object.__setattr__(self, "ck_prime", tuple(sorted(self.ck_prime)))
        upper = set(self.node(self.k + 1))
        lower = set(self.node(self.k - 1)) if self.k > 1 else set()
        if not set(self.ck_prime) <= upper or set(self.ck_prime) & lower:
            raise QuiverError(f"C_k' = {self.ck_prime} must sit in C_(k+1) and avoid C_(k-1)")

    def node(self, i: int) -> tuple:
        if i == self.k:
            return self.ck_prime
        if i == len(self.subsets) + 1:
            return tuple(range(1, self.frame_rank + 1))
        return self.subsets[i - 1]

    def label(self) -> str:
        parts = []
        for i in range(1, len(self.subsets) + 1):
            c = self.node(i)
            mark = "'" if i == self.k else ""
            parts.append(f"{mark}{{" + ",".join(map(str, c)) + "}")
        return " | ".join(parts)


def _chains(ranks: Sequence[int], top: tuple) -> Iterator[tuple]:
    # ranks listed from the node just below ``top`` downwards
    if not ranks:
        yield ()
        return
    for sub in combinations(top, ranks[0]):
        for rest in _chains(ranks[1:], sub):
            yield rest + (sub,)


def enumerate_fixed_points(spec: AnQuiverSpec) -> list:
    top = tuple(range(1, spec.frame_rank + 1))
    chains = [FixedPointChain(c, spec.frame_rank) for c in _chains(spec.gauge_ranks[::-1], top)]
    chains.sort(key=lambda fp: fp.subsets)
    return chains


def fixed_point_count(spec: AnQuiverSpec) -> int:
    r = spec.gauge_ranks + (spec.frame_rank,)
    return prod(comb(r[i + 1], r[i]) for i in range(len(r) - 1))


def iota(fp: FixedPointChain, k: int) -> MutatedFixedPoint:
    """Keep C_i for i != k and replace C_k by C_{k+1} minus C_k."""
    if not 1 <= k <= len(fp.subsets):
        raise QuiverError(f"node k={k} out of range 1..{len(fp.subsets)}")
    comp = tuple(sorted(set(fp.node(k + 1)) - set(fp.node(k))))
    return MutatedFixedPoint(fp.subsets, k, comp, fp.frame_rank)


@dataclass(frozen=True)
class ParamAssignment:
    lambdas: tuple
    etas: tuple = ()
    seed: int | None = None
    denominator: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(Fraction(v) for v in self.lambdas))
        object.__setattr__(self, "etas", tuple(Fraction(v) for v in self.etas))

    def is_generic(self) -> bool:
        vals = list(self.lambdas) + list(self.etas)
        return all((a - b).denominator != 1 for a, b in combinations(vals, 2))

    def lam(self, f: int) -> Fraction:
        """lambda_f with 1-based ``f``."""
        return self.lambdas[f - 1]


def _next_prime(n: int) -> int:
    def is_prime(p):
        return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))
    while not is_prime(n):
        n += 1
    return n


def sample_params(spec: AnQuiverSpec, seed: int, max_cap: int = 8) -> ParamAssignment:
    """Seeded generic parameters sharing one prime denominator.

    Numerators are pairwise distinct modulo the prime, so no difference among
    the lambdas and etas is an integer.
    """
    count = spec.frame_rank + spec.taut_rank
    Q = _next_prime(max(4 * (count + max_cap) + 1, 11))
    rng = random.Random(seed)
    residues = rng.sample(range(1, Q), count)
    shifts = [rng.randint(-2, 2) for _ in range(count)]
    vals = [Fraction(r + Q * s, Q) for r, s in zip(residues, shifts)]
    return ParamAssignment(vals[: spec.frame_rank], vals[spec.frame_rank:], seed, Q)


def restrict_params(fp, params: ParamAssignment) -> dict:
    """Chern-root values: ``(node, slot) -> lambda`` with 1-based node and slot."""
    out = {}
    for i in range(1, len(fp.subsets) + 1):
        for slot, f in enumerate(fp.node(i), start=1):
            out[(i, slot)] = params.lam(f)
    return out


def node_values(fp, params: ParamAssignment, spec, i: int) -> tuple:
    """Restricted values of node ``i``; node 0 is the eta frame, node D the lambda frame."""
    if i == 0:
        return params.etas
    if i == spec.D:
        return params.lambdas
    return tuple(params.lam(f) for f in fp.node(i))
