"""Tau-function series, Schur expansion oracle, free energy, and checkers.

TSeries is a truncated exact-rational polynomial in T_1, T_2, ... graded by
weight deg T_i = i.  The coupling convention is the bare one: T_n multiplies
the boson mode alpha_n in the generating exponent, with no 1/n rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .fock import FockVector, VACUUM, boson_moves, vev
from .grassmannian import AffineCoords, bogoliubov_state, frobenius_state, plucker_minor
from .partitions import check_partition, frobenius_coords, partitions_up_to
from .scalars import rat

# A monomial is a tuple of (variable index, exponent) pairs, sorted by index.
Monomial = tuple


def mono_weight(mono: Monomial) -> int:
    return sum(i * k for i, k in mono)


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    exps = dict(m1)
    for i, k in m2:
        exps[i] = exps.get(i, 0) + k
    return tuple(sorted(exps.items()))


class TSeries:
    """Weight-truncated polynomial in T_1, T_2, ... over exact rationals."""

    __slots__ = ("coeffs", "weight_cut")

    def __init__(self, coeffs=None, weight_cut: int = 0):
        if weight_cut < 0:
            raise ValueError("weight cut must be >= 0")
        clean = {}
        for mono, val in (coeffs or {}).items():
            val = rat(val) if isinstance(val, (int, str)) else val
            if not val:
                continue
            mono = tuple(sorted((int(i), int(k)) for i, k in mono if k))
            if any(i <= 0 or k < 0 for i, k in mono):
                raise ValueError(f"bad monomial {mono}")
            if mono_weight(mono) > weight_cut:
                raise ValueError(f"monomial {mono} exceeds weight cut {weight_cut}")
            clean[mono] = clean.get(mono, 0) + val
        object.__setattr__(self, "coeffs", {m: v for m, v in clean.items() if v})
        object.__setattr__(self, "weight_cut", weight_cut)

    def __setattr__(self, name, value):
        raise AttributeError("TSeries values are immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def const(cls, value, weight_cut: int) -> "TSeries":
        value = rat(value) if isinstance(value, (int, str)) else value
        return cls({(): value} if value else {}, weight_cut)

    @classmethod
    def zero(cls, weight_cut: int) -> "TSeries":
        return cls({}, weight_cut)

    @classmethod
    def variable(cls, i: int, weight_cut: int) -> "TSeries":
        if i <= 0:
            raise ValueError("variable index must be >= 1")
        if i > weight_cut:
            return cls.zero(weight_cut)
        return cls({((i, 1),): Fraction(1)}, weight_cut)

    # -- ring operations ----------------------------------------------------

    def _merge_cut(self, other: "TSeries") -> int:
        return min(self.weight_cut, other.weight_cut)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TSeries.const(other, self.weight_cut)
        cut = self._merge_cut(other)
        out = {m: v for m, v in self.coeffs.items() if mono_weight(m) <= cut}
        for m, v in other.coeffs.items():
            if mono_weight(m) <= cut:
                out[m] = out.get(m, 0) + v
        return TSeries(out, cut)

    __radd__ = __add__

    def __neg__(self):
        return TSeries({m: -v for m, v in self.coeffs.items()}, self.weight_cut)

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TSeries.const(other, self.weight_cut)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        cut = self._merge_cut(other)
        out: dict = {}
        for m1, v1 in self.coeffs.items():
            w1 = mono_weight(m1)
            if w1 > cut:
                continue
            for m2, v2 in other.coeffs.items():
                if w1 + mono_weight(m2) > cut:
                    continue
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + v1 * v2
        return TSeries(out, cut)

    __rmul__ = __mul__

    def scale(self, scalar) -> "TSeries":
        scalar = rat(scalar) if isinstance(scalar, (int, str)) else scalar
        return TSeries({m: v * scalar for m, v in self.coeffs.items()}, self.weight_cut)

    def truncate(self, cut: int) -> "TSeries":
        return TSeries({m: v for m, v in self.coeffs.items() if mono_weight(m) <= cut}, cut)

    # -- calculus -----------------------------------------------------------

    def diff(self, i: int) -> "TSeries":
        """Partial derivative in T_i; the trustworthy cut drops by i."""
        if i <= 0:
            raise ValueError("variable index must be >= 1")
        out: dict = {}
        for mono, val in self.coeffs.items():
            exps = dict(mono)
            k = exps.get(i, 0)
            if not k:
                continue
            exps[i] = k - 1
            m = tuple(sorted((a, b) for a, b in exps.items() if b))
            out[m] = out.get(m, 0) + val * k
        return TSeries(out, max(self.weight_cut - i, 0))

    def log(self) -> "TSeries":
        """log within the cut; requires constant term 1."""
        if self.constant_term() != 1:
            raise ValueError("log requires constant term 1")
        u = self - 1
        total = TSeries.zero(self.weight_cut)
        power = TSeries.const(1, self.weight_cut)
        for k in range(1, self.weight_cut + 1):
            power = power * u
            if not power.coeffs:
                break
            total = total + power.scale(Fraction((-1) ** (k + 1), k))
        return total

    def exp(self) -> "TSeries":
        """exp within the cut; requires constant term 0."""
        if self.constant_term() != 0:
            raise ValueError("exp requires constant term 0")
        total = TSeries.const(1, self.weight_cut)
        power = TSeries.const(1, self.weight_cut)
        for k in range(1, self.weight_cut + 1):
            power = power * self
            if not power.coeffs:
                break
            total = total + power.scale(Fraction(1, math.factorial(k)))
        return total

    # -- queries ------------------------------------------------------------

    def constant_term(self) -> Fraction:
        return self.coeffs.get((), Fraction(0))

    def coefficient(self, mono) -> Fraction:
        mono = tuple(sorted((int(i), int(k)) for i, k in mono if k))
        return self.coeffs.get(mono, Fraction(0))

    def restrict_to_odd(self) -> "TSeries":
        """Set every even-index variable to zero."""
        out = {m: v for m, v in self.coeffs.items()
               if all(i % 2 == 1 for i, _ in m)}
        return TSeries(out, self.weight_cut)

    def sorted_monomials(self):
        """Graded-lexicographic order: by weight, then by exponent dominance."""
        def key(mono):
            w = mono_weight(mono)
            top = max((i for i, _ in mono), default=0)
            vec = [0] * top
            for i, k in mono:
                vec[i - 1] = k
            return (w, [-e for e in vec])
        return sorted(self.coeffs, key=key)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = TSeries.const(other, self.weight_cut)
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"TSeries({self.format_text()!r}, cut={self.weight_cut})"

    def format_text(self) -> str:
        if not self.coeffs:
            return "0"
        pieces = []
        for mono in self.sorted_monomials():
            val = self.coeffs[mono]
            factors = "*".join(
                f"T{i}" + (f"^{k}" if k > 1 else "") for i, k in mono)
            if not factors:
                body = str(abs(val))
            elif abs(val) == 1:
                body = factors
            else:
                body = f"{abs(val)}*{factors}"
            if not pieces:
                pieces.append(body if val > 0 else f"-{body}")
            else:
                pieces.append(("+ " if val > 0 else "- ") + body)
        return " ".join(pieces)


# ---------------------------------------------------------------------------
# Schur polynomials (boson-fermion oracle)


@lru_cache(maxsize=None)
def _complete_homogeneous(k: int, cut: int) -> TSeries:
    """h_k in the T variables: sum over exponent multisets of weight k."""
    if k == 0:
        return TSeries.const(1, cut)
    out: dict = {}

    def rec(remaining, max_part, exps):
        if remaining == 0:
            denom = 1
            for _, mult in exps:
                denom *= math.factorial(mult)
            mono = tuple(sorted(exps))
            out[mono] = out.get(mono, 0) + Fraction(1, denom)
            return
        for part in range(min(remaining, max_part), 0, -1):
            mult = 0
            rest = remaining
            while rest >= part:
                mult += 1
                rest -= part
                rec(rest, part - 1, exps + [(part, mult)])

    rec(k, k, [])
    return TSeries(out, cut)


def schur_poly(lam, weight_cut: int) -> TSeries:
    """Schur function s_lam in the T variables (power sums p_n = n*T_n),
    via the Jacobi-Trudi determinant of complete homogeneous pieces."""
    lam = check_partition(lam)
    if sum(lam) > weight_cut:
        raise ValueError("partition weight exceeds the series cut")
    l = len(lam)
    if l == 0:
        return TSeries.const(1, weight_cut)
    rows = [[_complete_homogeneous(lam[i] - i + j, weight_cut)
             if lam[i] - i + j >= 0 else TSeries.zero(weight_cut)
             for j in range(l)] for i in range(l)]
    return _series_det(rows)


def _series_det(rows) -> TSeries:
    l = len(rows)
    if l == 1:
        return rows[0][0]
    total = TSeries.zero(rows[0][0].weight_cut)
    for j in range(l):
        entry = rows[0][j]
        if not entry.coeffs:
            continue
        minor = [[row[k] for k in range(l) if k != j] for row in rows[1:]]
        term = entry * _series_det(minor)
        total = total + (term if j % 2 == 0 else -term)
    return total


# ---------------------------------------------------------------------------
# pairing <vac| exp(sum T_n alpha_n) |v>


def boson_exp_pairing(v: FockVector, weight_cut: int) -> TSeries:
    """<vac| exp(sum_{n>=1} T_n alpha_n) |v> as a TSeries.

    Each alpha_n lowers energy by n while T_n carries weight n, so only the
    charge-0 part of v with energy <= weight_cut contributes and the
    expansion terminates.
    """
    out = TSeries.zero(weight_cut)
    current: dict = {}
    for state, coeff in v.items():
        if state.charge == 0 and state.energy <= weight_cut:
            current[state] = TSeries.const(coeff, weight_cut)
    if VACUUM in current:
        out = out + current[VACUUM]
    order = 0
    while current:
        order += 1
        nxt: dict = {}
        for state, series in current.items():
            for n in range(1, state.energy + 1):
                for sign, new_state in _cached_boson_moves(state, n):
                    term = series * TSeries.variable(n, weight_cut)
                    if sign != 1:
                        term = term.scale(sign)
                    if new_state in nxt:
                        nxt[new_state] = nxt[new_state] + term
                    else:
                        nxt[new_state] = term
        inv = Fraction(1, order)
        current = {st: ser.scale(inv) for st, ser in nxt.items() if ser.coeffs}
        if VACUUM in current:
            out = out + current[VACUUM]
    return out


@lru_cache(maxsize=None)
def _cached_boson_moves(state, n):
    return tuple(boson_moves(state, n))


# ---------------------------------------------------------------------------
# tau function and free energy


def tau_series(A: AffineCoords, weight_cut: int) -> TSeries:
    """tau_U(T) = <vac| exp(sum T_n alpha_n) e^X |vac>, truncated exactly."""
    if weight_cut < 0:
        raise ValueError("weight cut must be >= 0")
    return boson_exp_pairing(bogoliubov_state(A, weight_cut), weight_cut)


def tau_series_schur(A: AffineCoords, weight_cut: int) -> TSeries:
    """Independent route: sum of signed minors times Schur polynomials."""
    total = TSeries.zero(weight_cut)
    for lam in partitions_up_to(weight_cut):
        ms, ns = frobenius_coords(lam)
        coeff = plucker_minor(A, ms, ns)
        if not coeff:
            continue
        sign, _state = frobenius_state(ms, ns)
        total = total + schur_poly(lam, weight_cut).scale(coeff * sign)
    return total


def free_energy(tau: TSeries) -> TSeries:
    """F = log tau; requires unit constant term."""
    if tau.constant_term() != 1:
        raise ValueError("free energy needs a tau series with constant term 1")
    return tau.log()


# ---------------------------------------------------------------------------
# puncture-equation checker


@dataclass(frozen=True)
class PunctureData:
    """Coxeter number plus the two exponent sets entering the constraint.

    The second set is taken as explicit input: the constraint's quadratic
    term runs over it independently of the derivative set.
    """

    h: int
    e_plus: frozenset
    e_plus0: frozenset

    def __init__(self, h, e_plus, e_plus0):
        if h <= 0:
            raise ValueError("the Coxeter number must be positive")
        e_plus = frozenset(int(i) for i in e_plus)
        e_plus0 = frozenset(int(i) for i in e_plus0)
        if any(i <= 0 for i in e_plus):
            raise ValueError("derivative exponents must be positive")
        if any(i < 0 for i in e_plus0):
            raise ValueError("quadratic exponents must be >= 0")
        object.__setattr__(self, "h", int(h))
        object.__setattr__(self, "e_plus", e_plus)
        object.__setattr__(self, "e_plus0", e_plus0)


def check_puncture(tau: TSeries, data: PunctureData) -> TSeries:
    """Residual of the first-order puncture constraint applied to tau.

    Returns (sum_{i in E+} ((i+h)/h * t_{i+h} - delta_{i,1}) d/dt_i
             + 1/(2h) * sum_{i,j in E+0, i+j=h} i j t_i t_j) tau,
    truncated to the weight range on which it is exact.  The series
    variables are read as the constraint's own t variables.
    """
    h = data.h
    if data.e_plus and max(data.e_plus) > tau.weight_cut:
        raise ValueError("derivative index exceeds the series weight cut")
    # t_{i+h} d/dt_i and the quadratic term raise weight by h and stay exact;
    # only the -d/dt_1 term needs tau one weight deeper than the result.
    drop = 1 if 1 in data.e_plus else 0
    cut = max(tau.weight_cut - drop, 0)
    out = TSeries.zero(cut)
    for i in sorted(data.e_plus):
        d = tau.diff(i)
        shifted: dict = {}
        for mono, val in d.coeffs.items():
            if mono_weight(mono) + i + h > cut:
                continue
            m = _mono_mul(mono, ((i + h, 1),))
            shifted[m] = shifted.get(m, 0) + val * Fraction(i + h, h)
        out = out + TSeries(shifted, cut)
        if i == 1:
            out = out - d.truncate(cut)
    quad: dict = {}
    for i in sorted(data.e_plus0):
        for j in sorted(data.e_plus0):
            if i + j == h and i > 0 and j > 0 and h <= cut:
                m = _mono_mul(((i, 1),), ((j, 1),))
                quad[m] = quad.get(m, 0) + Fraction(i * j, 2 * h)
    out = out + TSeries(quad, cut) * tau.truncate(cut)
    return out


def check_bprime_square(tau_b: TSeries, tau_bp: TSeries) -> bool:
    """True iff tau_bp(T_odd)^2 equals tau_b with even variables set to zero,
    compared on the common weight range."""
    square = tau_bp * tau_bp
    restricted = tau_b.restrict_to_odd()
    cut = min(square.weight_cut, restricted.weight_cut)
    return square.truncate(cut).coeffs == restricted.truncate(cut).coeffs
