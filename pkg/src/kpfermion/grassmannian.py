"""Big-cell points of the Sato Grassmannian via affine coordinates.

A point U in the big cell has a normalized basis f_n = z^{n+1/2} +
sum_m a[n, m] z^{-m-1/2}, n >= 0, and |U> = f_0 ^ f_1 ^ ... .  The
coefficient matrix doubles as the two-variable kernel A(xi, eta) whose
(p, q) cell (coefficient of xi^{-p-1} eta^{-q-1}) is a[p, q]: the row index
couples to the first variable.  That orientation is the one that makes the
coefficient formula agree with the fermionic evaluation (see two_point_cell).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .fock import (BasisState, FockVector, VACUUM, apply_fermion, normalize_wedge,
                   psi_star_twice_from_int, psi_twice_from_int, vev)
from .scalars import rat


class AffineCoords:
    """Finite-support matrix a[n, m] of big-cell affine coordinates."""

    __slots__ = ("entries", "_key")

    def __init__(self, entries=None):
        clean = {}
        for (n, m), val in (entries or {}).items():
            if n < 0 or m < 0:
                raise ValueError(f"affine coordinate indices must be >= 0: ({n}, {m})")
            val = rat(val) if isinstance(val, (int, str)) else val
            if val:
                clean[(int(n), int(m))] = val
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "_key", tuple(sorted(clean.items())))

    def __setattr__(self, name, value):
        raise AttributeError("AffineCoords values are immutable")

    def lookup(self, n: int, m: int) -> Fraction:
        return self.entries.get((n, m), Fraction(0))

    def support_box(self):
        """(max row + 1, max col + 1) of the support, (0, 0) when empty."""
        if not self.entries:
            return (0, 0)
        return (max(n for n, _ in self.entries) + 1,
                max(m for _, m in self.entries) + 1)

    def key(self):
        return self._key

    def __eq__(self, other):
        return isinstance(other, AffineCoords) and self.entries == other.entries

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"AffineCoords({dict(sorted(self.entries.items()))})"


def signed_minor(A: AffineCoords, ms, ns) -> Fraction:
    """(-1)^(sum ns) times det a[ns_i, ms_j]; input order need not be sorted."""
    ms = list(ms)
    ns = list(ns)
    if len(ms) != len(ns):
        raise ValueError("row and column selections must have equal length")
    sign = (-1) ** sum(ns)
    return sign * _det([[A.lookup(n, m) for m in ms] for n in ns])


def _det(rows) -> Fraction:
    l = len(rows)
    if l == 0:
        return Fraction(1)
    if l == 1:
        return rows[0][0]
    total = Fraction(0)
    for j in range(l):
        if not rows[0][j]:
            continue
        minor = [[row[k] for k in range(l) if k != j] for row in rows[1:]]
        total += (-1) ** j * rows[0][j] * _det(minor)
    return total


def _check_strictly_decreasing(seq, what):
    seq = list(seq)
    if any(seq[k] <= seq[k + 1] for k in range(len(seq) - 1)):
        raise ValueError(f"{what} must be strictly decreasing: {seq}")
    if any(x < 0 for x in seq):
        raise ValueError(f"{what} must be non-negative: {seq}")
    return seq


def plucker_minor(A: AffineCoords, ms, ns) -> Fraction:
    """Signed minor selecting rows ns and columns ms (both strictly decreasing)."""
    ms = _check_strictly_decreasing(ms, "column indices")
    ns = _check_strictly_decreasing(ns, "row indices")
    if len(ms) != len(ns):
        raise ValueError("row and column selections must have equal length")
    return signed_minor(A, ms, ns)


def frobenius_state(ms, ns):
    """(sign, state): the charge-0 wedge filling slots -m-1/2 and vacating n+1/2.

    The sign relates the natural wedge order (filled negative slots first,
    then the punctured tail) to the canonical increasing order; the explicit
    sort is delegated to normalize_wedge.
    """
    ms = _check_strictly_decreasing(ms, "ms")
    ns = _check_strictly_decreasing(ns, "ns")
    if len(ms) != len(ns):
        raise ValueError("Frobenius data must pair rows with columns")
    depth = (max(ns) + 1) if ns else 0
    factors = [-2 * m - 1 for m in ms]
    factors.extend(2 * k + 1 for k in range(depth) if k not in set(ns))
    tail = 2 * depth + 1
    vec = normalize_wedge(factors, tail, 1)
    ((state, coeff),) = list(vec.items())
    if coeff not in (1, -1):
        raise RuntimeError("wedge normalization returned a non-unit sign")
    return int(coeff), state


# bogoliubov_state is pure; memoize it so that oracle paths that re-derive
# cells from the same U do not re-expand the exponential.
_BOG_CACHE: dict = {}
_BOG_CACHE_MAX = 64


def bogoliubov_state(A: AffineCoords, energy_cut: int) -> FockVector:
    """Expansion of e^X |vac> with X = sum a[n,m] psi_{-m-1/2} psi*_{-n-1/2},
    exact on every basis state of energy <= energy_cut."""
    if energy_cut < 0:
        raise ValueError("energy cut must be >= 0")
    cache_key = (A.key(), energy_cut)
    hit = _BOG_CACHE.get(cache_key)
    if hit is not None:
        return hit

    terms = [(n, m, val) for (n, m), val in A.entries.items()]
    result = FockVector.basis(VACUUM)
    current = result
    order = 0
    while not current.is_zero():
        order += 1
        acc: dict = {}
        for state, coeff in current.items():
            for n, m, val in terms:
                if state.energy + m + n + 1 > energy_cut:
                    continue
                res = apply_fermion("psi_star", psi_star_twice_from_int(-n - 1),
                                    FockVector.basis(state, coeff * val))
                res = apply_fermion("psi", psi_twice_from_int(m), res)
                for st, c in res.items():
                    acc[st] = acc.get(st, 0) + c
        current = FockVector(acc).scale(Fraction(1, order))
        result = result + current

    if len(_BOG_CACHE) >= _BOG_CACHE_MAX:
        _BOG_CACHE.clear()
    _BOG_CACHE[cache_key] = result
    return result


@dataclass(frozen=True)
class Kernel:
    """Two-point kernel of a big-cell point: optional polar part plus A(xi, eta)."""

    coords: AffineCoords
    polar_part: bool = True

    def cell(self, p: int, q: int) -> Fraction:
        """Coefficient of xi^p eta^q (any integer exponents)."""
        val = Fraction(0)
        if self.polar_part and q >= 0 and p == -q - 1:
            val += 1
        if p <= -1 and q <= -1:
            val += self.coords.lookup(-p - 1, -q - 1)
        return val


def two_point_cell(A: AffineCoords, p: int, q: int, use_state: bool = False) -> Fraction:
    """Coefficient of xi^{-p-1} eta^{-q-1} in <psi(xi) psi*(eta)>_U, p, q >= 0.

    The formula path reads the affine coordinate directly; the state path
    evaluates <vac| psi_{p+1/2} psi*_{q+1/2} e^X |vac> in the wedge space.
    """
    if p < 0 or q < 0:
        raise ValueError("cell indices must be >= 0")
    if not use_state:
        return Kernel(A).cell(-p - 1, -q - 1)
    state_vec = bogoliubov_state(A, p + q + 1)
    # psi*(eta) mode with exponent -q-1 is psi*_{q+1/2}; it removes slot -q-1/2
    w = apply_fermion("psi_star", 2 * q + 1, state_vec)
    w = apply_fermion("psi", 2 * p + 1, w)
    return vev(w)
