"""Connected n-point functions: closed cyclic-sum formula and its oracle.

The generating series of the n-th derivatives of the free energy at T = 0
equals (-1)^(n-1) times the sum over the (n-1)! cyclic orders of the
variables of the product of deformed kernels over consecutive pairs.  Only
cells with every exponent j_i >= 1 are computed; on those the polar parts
contribute through finitely many terms and no regularization is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial

from .grassmannian import AffineCoords
from .tau import free_energy, tau_series

MAX_POINTS = 6  # cycle enumeration cost grows factorially


@dataclass(frozen=True)
class NPointTable:
    """Cells (j_1, ..., j_n) -> d^n F / dT_{j_1}..dT_{j_n} at T = 0."""

    n: int
    weight_cut: int
    cells: dict = field(default_factory=dict)

    def cell(self, orders) -> Fraction:
        return self.cells.get(tuple(orders), Fraction(0))

    def sorted_cells(self):
        return sorted(self.cells, key=lambda js: (sum(js), js))

    def __eq__(self, other):
        if not isinstance(other, NPointTable):
            return NotImplemented
        return self.n == other.n and self.cells == other.cells


def _check_n(n: int):
    if n < 2:
        raise ValueError("n-point tables need n >= 2")
    if n > MAX_POINTS:
        raise ValueError(f"unsupported n: {n} (limit {MAX_POINTS})")


def kernel_hat_cell(A: AffineCoords, i: int, j: int, p: int, q: int) -> Fraction:
    """Coefficient of xi_i^p xi_j^q in the deformed kernel for slots (i, j).

    The coordinate part contributes a[-p-1, -q-1] in every case; off the
    diagonal the expansion of 1/(xi_i - xi_j) in the domain where the
    smaller-labelled variable dominates adds +-1 on the anti-diagonal
    p + q = -1 (positive exponent on the larger label, sign -1 when i > j).
    """
    val = Fraction(0)
    if p <= -1 and q <= -1:
        val += A.lookup(-p - 1, -q - 1)
    if i != j and p + q == -1:
        if i < j and p <= -1:
            val += 1
        elif i > j and p >= 0:
            val -= 1
    return val


def _polar_term_with_first(i, j, e_first):
    """Polar term of the (i, j) kernel with given first exponent, or None."""
    if i == j:
        return None
    if i < j and e_first <= -1:
        return (-e_first - 1, Fraction(1))
    if i > j and e_first >= 0:
        return (-e_first - 1, Fraction(-1))
    return None


def _terms_with_first(A, i, j, e_first):
    """(second exponent, value) options of the (i, j) kernel at fixed first slot."""
    opts = []
    row = -e_first - 1
    if row >= 0:
        for (n, m), val in A.entries.items():
            if n == row:
                opts.append((-m - 1, val))
    polar = _polar_term_with_first(i, j, e_first)
    if polar is not None:
        opts.append(polar)
    return opts


def _cycle_cell(A: AffineCoords, order, need) -> Fraction:
    """Product of kernels along one cyclic order, at the target cell `need`."""
    n = len(order)
    first_var = order[0]
    total = Fraction(0)

    def walk(t, carry, first0, prod):
        # factor t couples variables order[t] -> order[(t+1) % n]
        nonlocal total
        if t == n - 1:
            e_first = need[order[t]] - carry
            e_second = need[first_var] - first0
            a, b = order[t], first_var
            val = Fraction(0)
            if e_first <= -1 and e_second <= -1:
                val += A.lookup(-e_first - 1, -e_second - 1)
            polar = _polar_term_with_first(a, b, e_first)
            if polar is not None and polar[0] == e_second:
                val += polar[1]
            if val:
                total += prod * val
            return
        e_first = need[order[t]] - carry
        for e_second, val in _terms_with_first(A, order[t], order[t + 1], e_first):
            walk(t + 1, e_second, first0, prod * val)

    # first factor: both slots free, but its polar exponent is bounded because
    # every later contribution to the first variable is <= -1
    a, b = order[0], order[1]
    start_terms = [((-n1 - 1, -m1 - 1), val) for (n1, m1), val in A.entries.items()]
    k = 0
    while -k - 1 >= need[first_var] + 1:
        start_terms.append(((-k - 1, k), Fraction(1)))
        k += 1
    for (e1, e2), val in start_terms:
        if e2 is None:
            continue
        walk(1, e2, e1, val)
    return total


def npoint_formula(A: AffineCoords, n: int, weight_cut: int) -> NPointTable:
    """Cyclic-sum evaluation, cell by finite convolution."""
    _check_n(n)
    sign = Fraction((-1) ** (n - 1))
    cells: dict = {}
    for js in _cells(n, weight_cut):
        need = {v: -js[v - 1] - 1 for v in range(1, n + 1)}
        val = Fraction(0)
        for rest in permutations(range(2, n + 1)):
            val += _cycle_cell(A, (1,) + rest, need)
        val *= sign
        if val:
            cells[js] = val
    return NPointTable(n, weight_cut, cells)


def npoint_oracle(A: AffineCoords, n: int, weight_cut: int) -> NPointTable:
    """Differentiate the log of the tau series n times at T = 0."""
    _check_n(n)
    F = free_energy(tau_series(A, weight_cut))
    cells: dict = {}
    for js in _cells(n, weight_cut):
        counts: dict = {}
        for j in js:
            counts[j] = counts.get(j, 0) + 1
        mono = tuple(sorted(counts.items()))
        coeff = F.coefficient(mono)
        if coeff:
            for k in counts.values():
                coeff *= factorial(k)
            cells[js] = coeff
    return NPointTable(n, weight_cut, cells)


def _cells(n: int, weight_cut: int):
    """All ordered index tuples with each j_i >= 1 and sum <= weight_cut."""
    def rec(prefix, remaining, slots):
        if slots == 0:
            yield tuple(prefix)
            return
        for j in range(1, remaining - slots + 2):
            yield from rec(prefix + [j], remaining - j, slots - 1)

    if weight_cut >= n:
        yield from rec([], weight_cut, n)
