"""Exact scalar primitives and truncated multivariate Laurent series.

All scalars are :class:`fractions.Fraction`.  A :class:`LaurentSeries` stores a
sparse map from exponent tuples to nonzero coefficients together with a box
``lo <= e <= hi``:

* ``lo`` is a support floor -- no coefficient lies below it in any variable;
* ``hi`` is the completeness ceiling -- every coefficient with ``e <= hi`` is
  known exactly, absent entries inside the box are exactly zero.

Arithmetic keeps these semantics, so a coefficient read inside the box is
never a truncation artefact.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence

Rat = Fraction
MultiIndex = tuple  # tuple[int, ...]

# stands in for "no bound" on a box side; large enough never to be enumerated
UNBOUNDED = 10**15


class PoleError(ZeroDivisionError):
    """A denominator factor vanished: the parameters are not generic."""


class WindowError(ValueError):
    """Requested output box reaches outside the provably complete window."""


def as_rat(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected on purpose: every value in this package is exact.
    """
    if isinstance(value, float):
        raise TypeError(f"refusing inexact float {value!r}; pass 'p/q' instead")
    return Fraction(value)


def pochhammer(a, n: int) -> Fraction:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    if n < 0:
        raise ValueError(f"pochhammer needs n >= 0, got {n}")
    a = Fraction(a)
    out = Fraction(1)
    for i in range(n):
        out *= a + i
    return out


@lru_cache(maxsize=1 << 16)
def ratio_prod(x: Fraction, k: int) -> Fraction:
    """Telescoped prod_{l<=0}(x+l) / prod_{l<=k}(x+l).

    For ``k >= 0`` this is ``1 / prod_{l=1..k}(x+l)``; for ``k < 0`` it is the
    polynomial ``prod_{l=k+1..0}(x+l)``.  A vanishing numerator factor gives an
    exact 0 (checked before any division); a vanishing denominator factor
    raises :class:`PoleError`.
    """
    x = Fraction(x)
    if k < 0:
        out = Fraction(1)
        for l in range(k + 1, 1):
            out *= x + l
        return out
    den = Fraction(1)
    for l in range(1, k + 1):
        f = x + l
        if f == 0:
            raise PoleError(f"ratio_prod({x}, {k}): factor x+{l} vanishes")
        den *= f
    return 1 / den


@lru_cache(maxsize=1 << 16)
def inv_ratio_prod(x: Fraction, k: int) -> Fraction:
    """Telescoped prod_{l<=k}(x+l) / prod_{l<=0}(x+l), the reciprocal form.

    Numerator zeros (``k > 0`` and ``x+l == 0`` for some ``1 <= l <= k``) give
    exact 0; denominator zeros raise :class:`PoleError`.
    """
    x = Fraction(x)
    if k >= 0:
        out = Fraction(1)
        for l in range(1, k + 1):
            out *= x + l
        return out
    den = Fraction(1)
    for l in range(k + 1, 1):
        f = x + l
        if f == 0:
            raise PoleError(f"inv_ratio_prod({x}, {k}): factor x{l:+d} vanishes")
        den *= f
    return 1 / den


def falling_binomial(alpha, m: int) -> Fraction:
    """Generalised binomial coefficient prod_{l<m}(alpha-l) / m!."""
    alpha = Fraction(alpha)
    out = Fraction(1)
    for l in range(m):
        out = out * (alpha - l) / (l + 1)
    return out


def _vmin(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(min(x, y) for x, y in zip(a, b))


def _vadd(a: Sequence[int], b: Sequence[int]) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _le(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class LaurentSeries:
    """Truncated Laurent series in ``nvars`` variables with exact coefficients."""

    nvars: int
    coeffs: Mapping[tuple, Fraction] = field(default_factory=dict)
    lo: tuple = ()
    hi: tuple = ()

    def __post_init__(self):
        lo = tuple(self.lo) if self.lo else (0,) * self.nvars
        hi = tuple(self.hi) if self.hi else (UNBOUNDED,) * self.nvars
        if len(lo) != self.nvars or len(hi) != self.nvars:
            raise ValueError("box dimension does not match nvars")
        clean = {}
        for e, c in self.coeffs.items():
            e = tuple(int(v) for v in e)
            if len(e) != self.nvars:
                raise ValueError(f"exponent {e} has wrong length for {self.nvars} variables")
            c = Fraction(c)
            if c == 0:
                continue
            if not _le(lo, e):
                raise ValueError(f"exponent {e} lies below the support floor {lo}")
            if _le(e, hi):
                clean[e] = c
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, nvars: int) -> "LaurentSeries":
        return cls(nvars, {}, (UNBOUNDED,) * nvars, (UNBOUNDED,) * nvars)

    @classmethod
    def one(cls, nvars: int) -> "LaurentSeries":
        return cls.monomial(nvars, (0,) * nvars)

    @classmethod
    def monomial(cls, nvars: int, exps, coeff=1) -> "LaurentSeries":
        exps = tuple(exps)
        return cls(nvars, {exps: Fraction(coeff)}, exps, (UNBOUNDED,) * nvars)

    @classmethod
    def polynomial(cls, nvars: int, terms: Mapping) -> "LaurentSeries":
        """Exact (untruncated) finite sum; support floor is the minimal exponent."""
        if not terms:
            return cls.zero(nvars)
        lo = tuple(min(e[i] for e in terms) for i in range(nvars))
        return cls(nvars, dict(terms), lo, (UNBOUNDED,) * nvars)

    # access ---------------------------------------------------------------
    def __getitem__(self, e) -> Fraction:
        e = tuple(e)
        if not _le(e, self.hi):
            raise WindowError(f"coefficient {e} lies beyond the completeness box {self.hi}")
        return self.coeffs.get(e, Fraction(0))

    def __iter__(self) -> Iterator[tuple]:
        return iter(self.coeffs)

    def items(self):
        return self.coeffs.items()

    def __len__(self) -> int:
        return len(self.coeffs)

    def truncate(self, hi) -> "LaurentSeries":
        """Shrink the completeness ceiling to ``hi`` (never grows it)."""
        return LaurentSeries(self.nvars, self.coeffs, self.lo, _vmin(self.hi, hi))

    def equals_on(self, other: "LaurentSeries", window: Iterable[tuple]) -> bool:
        return all(self[e] == other[e] for e in window)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.nvars, self.coeffs, self.hi) == (other.nvars, other.coeffs, other.hi)

    def __hash__(self):
        return hash((self.nvars, tuple(self.coeffs.items()), self.hi))

    # arithmetic -------------------------------------------------------------
    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_add(self, other)

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.nvars, {e: -c for e, c in self.coeffs.items()}, self.lo, self.hi)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return series_add(self, -other)

    def __mul__(self, other) -> "LaurentSeries":
        if isinstance(other, LaurentSeries):
            return series_mul(self, other)
        c = Fraction(other)
        return LaurentSeries(self.nvars, {e: c * v for e, v in self.coeffs.items()}, self.lo, self.hi)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        body = " + ".join(f"({c})*{format_monomial(e)}" for e, c in list(self.coeffs.items())[:8])
        more = " + ..." if len(self.coeffs) > 8 else ""
        return f"LaurentSeries[{self.nvars}]({body or '0'}{more}; hi={self.hi})"


def _check_compatible(a: LaurentSeries, b: LaurentSeries):
    if a.nvars != b.nvars:
        raise ValueError(f"variable counts differ: {a.nvars} vs {b.nvars}")


def series_add(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    _check_compatible(a, b)
    out = dict(a.coeffs)
    for e, c in b.coeffs.items():
        out[e] = out.get(e, 0) + c
    return LaurentSeries(a.nvars, out, _vmin(a.lo, b.lo), _vmin(a.hi, b.hi))


def series_mul(a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    """Product; an output index is kept only if all decompositions were known."""
    _check_compatible(a, b)
    lo = _vadd(a.lo, b.lo)
    hi = _vmin(_vadd(a.hi, b.lo), _vadd(b.hi, a.lo))
    out: dict = {}
    for ea, ca in a.coeffs.items():
        for eb, cb in b.coeffs.items():
            e = _vadd(ea, eb)
            if _le(e, hi):
                out[e] = out.get(e, 0) + ca * cb
    return LaurentSeries(a.nvars, out, lo, hi)


def _univariate(nvars: int, var: int, coeffs: Sequence[Fraction], cap: int) -> LaurentSeries:
    if not 0 <= var < nvars:
        raise ValueError(f"variable index {var} out of range for {nvars} variables")
    terms = {}
    for m, c in enumerate(coeffs):
        e = [0] * nvars
        e[var] = m
        terms[tuple(e)] = c
    hi = [UNBOUNDED] * nvars
    hi[var] = cap
    return LaurentSeries(nvars, terms, (0,) * nvars, tuple(hi))


def exp_series(c, var: int, cap: int, nvars: int = 1) -> LaurentSeries:
    """sum_{m<=cap} (c q_var)^m / m!  (``var`` is 0-based)."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    c = Fraction(c)
    coeffs, term = [], Fraction(1)
    for m in range(cap + 1):
        coeffs.append(term)
        term = term * c / (m + 1)
    return _univariate(nvars, var, coeffs, cap)


def binom_series(alpha, c, var: int, cap: int, nvars: int = 1) -> LaurentSeries:
    """(1 + c q_var)^alpha expanded to order ``cap`` with falling-factorial coefficients."""
    if cap < 0:
        raise ValueError("cap must be >= 0")
    alpha, c = Fraction(alpha), Fraction(c)
    coeffs = [falling_binomial(alpha, m) * c**m for m in range(cap + 1)]
    return _univariate(nvars, var, coeffs, cap)


# variable changes ---------------------------------------------------------

def _det_and_inverse(M: Sequence[Sequence[int]]):
    """Exact Gauss-Jordan inverse over Q; returns (det, inverse rows)."""
    n = len(M)
    A = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M)]
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return Fraction(0), None
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        p = A[col][col]
        det *= p
        A[col] = [v / p for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return det, [row[n:] for row in A]


@dataclass(frozen=True)
class UnitFactor:
    """Multiplicative factor (1 + coeff*q_var)^<weights, n> for source exponent n."""

    var: int
    coeff: Fraction
    weights: tuple


@dataclass(frozen=True)
class VariableChange:
    """Substitution turning a series in q' into a series in q.

    A source monomial (q')^n becomes ``q^(M n) * prod_u (1 + c_u q_{var_u})^<w_u, n>``.
    ``matrix`` is given row-major: target exponent i = sum_j M[i][j] n_j.
    """

    matrix: tuple
    units: tuple = ()

    def __post_init__(self):
        M = tuple(tuple(int(v) for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", M)
        object.__setattr__(self, "units", tuple(self.units))
        n = len(M)
        if any(len(row) != n for row in M):
            raise ValueError("variable-change matrix must be square")
        det, _ = _det_and_inverse(M)
        if det == 0:
            raise ValueError("variable-change matrix is singular")
        for u in self.units:
            if len(u.weights) != n or not 0 <= u.var < n:
                raise ValueError(f"bad unit factor {u}")

    @property
    def nvars(self) -> int:
        return len(self.matrix)

    @classmethod
    def identity(cls, n: int) -> "VariableChange":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    def map_exponent(self, n: Sequence[int]) -> tuple:
        return tuple(sum(m * v for m, v in zip(row, n)) for row in self.matrix)

    def inverse_matrix(self) -> list:
        return _det_and_inverse(self.matrix)[1]

    def preimage(self, beta: Sequence[int]) -> tuple:
        """Exact rational source exponent mapping onto ``beta`` (no units)."""
        inv = self.inverse_matrix()
        return tuple(sum(r * b for r, b in zip(row, beta)) for row in inv)

    def inverse(self) -> "VariableChange":
        """Inverse monomial map; only defined without unit factors."""
        if self.units:
            raise ValueError("cannot invert a variable change with unit factors")
        inv = self.inverse_matrix()
        if any(v.denominator != 1 for row in inv for v in row):
            raise ValueError("monomial map is not unimodular; inverse is not integral")
        return VariableChange(tuple(tuple(int(v) for v in row) for row in inv))


def box_points(lo: Sequence[int], hi: Sequence[int]) -> Iterator[tuple]:
    return product(*(range(a, b + 1) for a, b in zip(lo, hi)))


def reliable_window(src_lo: Sequence[int], src_hi: Sequence[int], vc: VariableChange,
                    cap_hi: Sequence[int]) -> list:
    """Target monomials (inside ``0..cap_hi``) whose coefficient is provably complete.

    Assumes the true source support maps under ``vc.matrix`` into the
    nonnegative orthant (every I-function below has nonnegative target
    degrees), and that unit/prefactor expansions only raise exponents.  A
    target ``beta`` is then fed only by sources whose image lies in
    ``[0, beta]``; it is reliable when that whole preimage sits inside the
    source box.  The preimage of a box is the hull of its vertex preimages.
    """
    inv = vc.inverse_matrix()
    n = vc.nvars
    out = []
    for beta in box_points((0,) * n, cap_hi):
        ok = True
        for vertex in product(*((0, b) for b in beta)):
            pre = [sum(r * v for r, v in zip(row, vertex)) for row in inv]
            if not all(lo <= p <= hi for lo, p, hi in zip(src_lo, pre, src_hi)):
                ok = False
                break
        if ok:
            out.append(tuple(beta))
    return out


def apply_variable_change(s: LaurentSeries, vc: VariableChange, cap_hi: Sequence[int],
                          check_window: bool = True) -> LaurentSeries:
    """Substitute ``vc`` into ``s`` and expand up to ``cap_hi`` in the new variables.

    Raises :class:`WindowError` when ``cap_hi`` asks for monomials whose
    preimage under ``vc`` is not covered by the completeness box of ``s``.
    """
    if s.nvars != vc.nvars:
        raise ValueError("series and variable change disagree on the number of variables")
    cap_hi = tuple(cap_hi)
    if check_window:
        window = set(reliable_window(s.lo, s.hi, vc, cap_hi))
        missing = [b for b in box_points((0,) * s.nvars, cap_hi) if b not in window]
        if missing:
            raise WindowError(f"{len(missing)} target monomials (e.g. {missing[0]}) are not "
                              f"covered by the source box lo={s.lo} hi={s.hi}")
    n = s.nvars
    out: dict = {}
    unit_cache: dict = {}
    for src, c in s.coeffs.items():
        base = vc.map_exponent(src)
        if not _le(base, cap_hi):
            continue
        if any(b < 0 for b in base):
            raise WindowError(f"source monomial {src} maps to negative exponent {base}")
        term = {base: c}
        for u in vc.units:
            power = sum(w * v for w, v in zip(u.weights, src))
            if power == 0:
                continue
            room = cap_hi[u.var]
            key = (u.var, u.coeff, power, room)
            if key not in unit_cache:
                unit_cache[key] = binom_series(power, u.coeff, u.var, room, n).coeffs
            factor = unit_cache[key]
            nxt: dict = {}
            for e1, c1 in term.items():
                for e2, c2 in factor.items():
                    e = _vadd(e1, e2)
                    if _le(e, cap_hi):
                        nxt[e] = nxt.get(e, 0) + c1 * c2
            term = nxt
        for e, v in term.items():
            out[e] = out.get(e, 0) + v
    return LaurentSeries(n, out, (0,) * n, cap_hi)


def format_monomial(e: Sequence[int]) -> str:
    """Render an exponent tuple as ``q1^a1*q2^a2`` (all variables, stable order)."""
    if not e:
        return "1"
    return "*".join(f"q{i + 1}^{v}" for i, v in enumerate(e))
