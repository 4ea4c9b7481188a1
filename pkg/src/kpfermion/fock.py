"""Semi-infinite wedge space over exact rationals.

Basis vectors are wedges z^{a_1} ^ z^{a_2} ^ ... over admissible half-integer
sequences a_1 < a_2 < ... (co-finite against the tail 1/2, 3/2, ...).  A
basis state is stored as a charge plus a partition; the occupied slots are
a_k = k - 1/2 - charge - lam_k.

Half-integer slot labels are passed around as odd integers equal to twice
their value ("two_r").  Quadratic elements carry integer matrix labels i
which attach to slots through

    psi_i   <->  slot two_r = -2*i - 1       (creation side)
    psi*_i  <->  removes slot two_r = -2*i - 1

so the charge-0 vacuum occupies exactly the slots with matrix label i <= -1.
The normal-ordering contraction is <psi_i psi*_j> = delta_ij * [i <= -1],
which is forced by the vacuum annihilation rules.
"""

from __future__ import annotations

import threading
from bisect import bisect_left, insort
from dataclasses import dataclass
from fractions import Fraction

from .partitions import check_partition
from .scalars import INV_SQRT2, I_UNIT, collapse, parity_sign, rat

# ---------------------------------------------------------------------------
# index translations between integer matrix labels and twice-half-integer slots


def psi_twice_from_int(i: int) -> int:
    """Slot label (twice the half-integer) created by psi_i."""
    return -2 * i - 1


def int_from_psi_twice(two_r: int) -> int:
    if two_r % 2 == 0:
        raise ValueError(f"slot label must be odd (twice a half-integer): {two_r}")
    return (-two_r - 1) // 2


def psi_star_twice_from_int(i: int) -> int:
    """Mode label (twice the half-integer) of psi*_i; it removes slot -2i-1."""
    return 2 * i + 1


def int_from_psi_star_twice(two_s: int) -> int:
    if two_s % 2 == 0:
        raise ValueError(f"slot label must be odd (twice a half-integer): {two_s}")
    return (two_s - 1) // 2


# ---------------------------------------------------------------------------
# basis states


@dataclass(frozen=True)
class BasisState:
    """One wedge monomial: a charge and a partition."""

    charge: int
    partition: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "partition", check_partition(self.partition))

    @property
    def energy(self) -> int:
        return sum(self.partition)

    def occupied_prefix(self):
        """Twice-values of the first len(partition) occupied slots."""
        c = self.charge
        return [2 * k - 1 - 2 * c - 2 * self.partition[k - 1]
                for k in range(1, len(self.partition) + 1)]

    def tail_start(self) -> int:
        """Twice-value of the first slot after which occupancy equals the tail."""
        return 2 * len(self.partition) + 1 - 2 * self.charge

    def is_occupied(self, two_r: int) -> bool:
        if two_r >= self.tail_start():
            return True
        return two_r in self.occupied_prefix()


VACUUM = BasisState(0, ())


def _prefix_and_tail(state: BasisState, through: int | None = None):
    """Explicit occupied prefix plus tail start, extended through `through`."""
    prefix = state.occupied_prefix()
    tail = state.tail_start()
    if through is not None:
        while tail <= through:
            prefix.append(tail)
            tail += 2
    return prefix, tail


def _rebuild(prefix, tail) -> BasisState:
    """Recover the canonical BasisState from an explicit prefix + tail start."""
    d = len(prefix)
    charge2 = 2 * d + 1 - tail
    if charge2 % 2:
        raise ValueError("inconsistent prefix/tail data")
    charge = charge2 // 2
    lam = []
    for k, two_a in enumerate(prefix, start=1):
        two_lam = 2 * k - 1 - 2 * charge - two_a
        if two_lam % 2:
            raise ValueError("slot labels must be twice half-integers")
        lam.append(two_lam // 2)
    while lam and lam[-1] == 0:
        lam.pop()
    return BasisState(charge, tuple(lam))


# ---------------------------------------------------------------------------
# vectors


class FockVector:
    """Finite exact-rational combination of basis states.

    Coefficients are Fractions, extended to QISqrt2 by the neutral-fermion
    operations; values that fall back into Q are collapsed on construction.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        for state, coeff in (terms or {}).items():
            coeff = collapse(coeff)
            if coeff:
                clean[state] = coeff
        self._terms = clean

    @classmethod
    def zero(cls) -> "FockVector":
        return cls()

    @classmethod
    def basis(cls, state: BasisState, coeff=1) -> "FockVector":
        c = coeff if not isinstance(coeff, (int, str)) else rat(coeff)
        return cls({state: c})

    def items(self):
        return self._terms.items()

    def coefficient(self, state: BasisState):
        return self._terms.get(state, Fraction(0))

    def support(self):
        return set(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self._terms)
        for state, coeff in other._terms.items():
            out[state] = out.get(state, 0) + coeff
        return FockVector(out)

    def __sub__(self, other: "FockVector") -> "FockVector":
        out = dict(self._terms)
        for state, coeff in other._terms.items():
            out[state] = out.get(state, 0) - coeff
        return FockVector(out)

    def scale(self, scalar) -> "FockVector":
        if isinstance(scalar, (int, str)):
            scalar = rat(scalar)
        return FockVector({s: c * scalar for s, c in self._terms.items()})

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __repr__(self):
        if not self._terms:
            return "FockVector(0)"
        bits = []
        for state in sorted(self._terms, key=lambda s: (s.energy, s.charge, s.partition)):
            bits.append(f"({self._terms[state]})*|c={state.charge},{list(state.partition)}>")
        return " + ".join(bits)


def _accumulate(acc: dict, state: BasisState, coeff):
    acc[state] = acc.get(state, 0) + coeff


# ---------------------------------------------------------------------------
# fermion modes


def _create(state: BasisState, two_r: int):
    """z^r ^ |state>; None if the slot is occupied."""
    prefix, tail = _prefix_and_tail(state)
    if two_r >= tail:
        return None
    pos = bisect_left(prefix, two_r)
    if pos < len(prefix) and prefix[pos] == two_r:
        return None
    prefix.insert(pos, two_r)
    return (-1) ** pos, _rebuild(prefix, tail)


def _annihilate(state: BasisState, two_s: int):
    """Remove slot -s (paired mode label s); None if that slot is empty."""
    target = -two_s
    prefix, tail = _prefix_and_tail(state, through=target)
    pos = bisect_left(prefix, target)
    if pos >= len(prefix) or prefix[pos] != target:
        return None
    prefix.pop(pos)
    # deletion at 1-based position k carries sign (-1)^(k+1)
    return (-1) ** pos, _rebuild(prefix, tail)


def apply_fermion(kind: str, two_r: int, v: FockVector) -> FockVector:
    """Apply psi_r (kind='psi') or psi*_r (kind='psi_star'), r = two_r / 2."""
    if two_r % 2 == 0:
        raise ValueError(f"fermion labels are twice half-integers, got {two_r}")
    if kind not in ("psi", "psi_star"):
        raise ValueError(f"unknown fermion kind {kind!r}")
    acc: dict = {}
    action = _create if kind == "psi" else _annihilate
    for state, coeff in v.items():
        res = action(state, two_r)
        if res is not None:
            sign, new_state = res
            _accumulate(acc, new_state, coeff * sign)
    return FockVector(acc)


def normalize_wedge(factors, tail_start: int, coeff=1) -> FockVector:
    """Canonical form of an explicit wedge prefix followed by a vacuum tail.

    `factors` lists the twice-values of the leading exponents in wedge order;
    the tail z^{t} ^ z^{t+1} ^ ... starts at twice-value `tail_start`.  The
    result is +-coeff times the sorted basis state, or zero on a repeated
    factor.  Factors at or above the tail start are rejected: that wedge
    cannot be brought to the prefix+tail shape.
    """
    factors = list(factors)
    if tail_start % 2 == 0 or any(f % 2 == 0 for f in factors):
        raise ValueError("wedge exponents are twice half-integers (odd ints)")
    if any(f >= tail_start for f in factors):
        raise ValueError("explicit factor overlaps the vacuum tail")
    if len(set(factors)) != len(factors):
        return FockVector.zero()
    # parity of the sort permutation via insertion counting
    sign = 1
    sorted_prefix: list = []
    for f in factors:
        pos = bisect_left(sorted_prefix, f)
        sign *= (-1) ** (len(sorted_prefix) - pos)
        insort(sorted_prefix, f)
    state = _rebuild(sorted_prefix, tail_start)
    return FockVector.basis(state, rat(coeff) * sign)


def vev(v: FockVector):
    """Coefficient of the charge-0 vacuum."""
    return v.coefficient(VACUUM)


def charge_of(state: BasisState) -> int:
    return state.charge


def l_vacuum(l: int) -> BasisState:
    """Charge-l vacuum |l>, the highest weight vector of its charge sector."""
    return BasisState(l, ())


# ---------------------------------------------------------------------------
# bosonic modes

# Test-only corruption hook used by the selftest mutation check; +1 in
# normal operation.
_BOSON_SIGN = 1
_BOSON_LOCK = threading.Lock()


class temporary_boson_sign:
    """Context manager flipping the boson-mode sign (selftest mutation hook)."""

    def __init__(self, sign: int):
        self.sign = sign

    def __enter__(self):
        _BOSON_LOCK.acquire()
        global _BOSON_SIGN
        self._saved = _BOSON_SIGN
        _BOSON_SIGN = self.sign
        return self

    def __exit__(self, *exc):
        global _BOSON_SIGN
        _BOSON_SIGN = self._saved
        _BOSON_LOCK.release()
        return False


def boson_moves(state: BasisState, n: int):
    """All (sign, new_state) pairs in alpha_n |state>, n != 0.

    alpha_n shifts one occupied slot r to r + n; only finitely many slots
    have an unoccupied target.
    """
    if n == 0:
        raise ValueError("use charge_of for the zero mode")
    prefix, tail = _prefix_and_tail(state)
    candidates = list(prefix)
    if n < 0:
        # tail slots can move down into the deviation window
        candidates.extend(tail + 2 * j for j in range(-n))
    out = []
    for two_u in candidates:
        res = _annihilate(state, -two_u)
        if res is None:
            continue
        s1, mid = res
        res2 = _create(mid, two_u + 2 * n)
        if res2 is None:
            continue
        s2, final = res2
        out.append((_BOSON_SIGN * s1 * s2, final))
    return out


def apply_boson(n: int, v: FockVector) -> FockVector:
    """Apply the boson mode alpha_n (n != 0) linearly."""
    acc: dict = {}
    for state, coeff in v.items():
        for sign, new_state in boson_moves(state, n):
            _accumulate(acc, new_state, coeff * sign)
    return FockVector(acc)


# ---------------------------------------------------------------------------
# quadratic elements


def _canonical_pair_block(entries, label: str) -> dict:
    """Canonicalize an antisymmetric two-psi (or two-psi*) block to j < k."""
    out: dict = {}
    for (j, k), val in entries.items():
        val = val if not isinstance(val, (int, str)) else rat(val)
        if not val:
            continue
        if j == k:
            continue  # psi_j psi_j = 0
        if j < k:
            out[(j, k)] = out.get((j, k), 0) + val
        else:
            out[(k, j)] = out.get((k, j), 0) - val
    return {key: v for key, v in out.items() if v}


class QuadElement:
    """Quadratic fermion element: sparse blocks plus a central scalar.

    The `a` block holds coefficients of :psi_i psi*_j:, the optional `b`/`c`
    blocks (extended elements) hold psi_j psi_k and psi*_j psi*_k pairs.
    Standard elements are banded, |i-j| <= band; extended elements are
    anti-banded, |i+j| <= band, and cannot be periodic.  Periodic elements
    store one period of rows, a[(i, j)] for 0 <= i < period.
    """

    __slots__ = ("a", "b", "c", "central", "period", "band", "extended")

    def __init__(self, a=None, b=None, c=None, central=0, period=None,
                 band=None, extended=None):
        a = dict(a or {})
        b = dict(b or {})
        c = dict(c or {})
        if extended is None:
            extended = bool(b) or bool(c)
        if (b or c) and not extended:
            raise ValueError("pair blocks require an extended element")
        if extended and period is not None:
            raise ValueError("extended elements cannot be periodic")
        if period is not None and period <= 0:
            raise ValueError("period must be a positive integer")

        a_clean: dict = {}
        for (i, j), val in a.items():
            val = val if not isinstance(val, (int, str)) else rat(val)
            if not val:
                continue
            if period is not None:
                # fold the row into [0, period); check consistency on collisions
                r = i % period
                key = (r, j - (i - r))
            else:
                key = (i, j)
            if key in a_clean and a_clean[key] != val:
                raise ValueError(f"inconsistent periodic entries at {key}")
            a_clean[key] = val

        object.__setattr__(self, "a", a_clean)
        object.__setattr__(self, "b", _canonical_pair_block(b, "b"))
        object.__setattr__(self, "c", _canonical_pair_block(c, "c"))
        object.__setattr__(self, "central",
                           central if not isinstance(central, (int, str)) else rat(central))
        object.__setattr__(self, "period", period)
        object.__setattr__(self, "extended", extended)

        spans = []
        for (i, j) in a_clean:
            spans.append(abs(i + j) if extended else abs(i - j))
        for block in (self.b, self.c):
            for (j, k) in block:
                spans.append(abs(j + k))
        auto_band = max(spans, default=0)
        if band is None:
            band = auto_band
        elif not extended and band < auto_band:
            # standard elements must respect the declared bandwidth; for
            # extended elements the declared value is the anti-band bound
            # that the D'-membership predicate tests against
            raise ValueError(f"declared band {band} below entry span {auto_band}")
        object.__setattr__(self, "band", band)

    def __setattr__(self, name, value):
        raise AttributeError("QuadElement values are immutable")

    def a_lookup(self, i: int, j: int):
        if self.period is None:
            return self.a.get((i, j), Fraction(0))
        r = i % self.period
        return self.a.get((r, j - (i - r)), Fraction(0))

    def is_zero(self) -> bool:
        return not self.a and not self.b and not self.c and not self.central

    def with_central(self, central) -> "QuadElement":
        return QuadElement(self.a, self.b, self.c, central, self.period,
                           self.band, self.extended)

    def __add__(self, other: "QuadElement") -> "QuadElement":
        if self.period != other.period:
            raise ValueError("cannot add elements of different periods")
        a = dict(self.a)
        for key, val in other.a.items():
            a[key] = a.get(key, 0) + val
        b = dict(self.b)
        for key, val in other.b.items():
            b[key] = b.get(key, 0) + val
        c = dict(self.c)
        for key, val in other.c.items():
            c[key] = c.get(key, 0) + val
        return QuadElement(a, b, c, self.central + other.central, self.period,
                           extended=self.extended or other.extended)

    def scale(self, scalar) -> "QuadElement":
        if isinstance(scalar, (int, str)):
            scalar = rat(scalar)
        return QuadElement({k: v * scalar for k, v in self.a.items()},
                           {k: v * scalar for k, v in self.b.items()},
                           {k: v * scalar for k, v in self.c.items()},
                           self.central * scalar, self.period,
                           extended=self.extended)

    def __repr__(self):
        return (f"QuadElement(a={len(self.a)} entries, b={len(self.b)}, "
                f"c={len(self.c)}, central={self.central}, period={self.period})")


def occupation_number(state: BasisState, i: int) -> int:
    """Eigenvalue of the raw product psi_i psi*_i (slot occupancy)."""
    return 1 if state.is_occupied(psi_twice_from_int(i)) else 0


def _vacuum_occupation(two_r: int) -> int:
    return 1 if two_r > 0 else 0


def _quad_on_state(X: QuadElement, state: BasisState, acc: dict, coeff):
    prefix, tail = _prefix_and_tail(state)
    lowest = prefix[0] if prefix else tail

    if X.period is None:
        for (i, j), val in X.a.items():
            if i == j:
                # :psi_i psi*_i: acts diagonally by occupancy minus vacuum fill
                two_r = psi_twice_from_int(i)
                eig = (1 if state.is_occupied(two_r) else 0) - _vacuum_occupation(two_r)
                if eig:
                    _accumulate(acc, state, coeff * val * eig)
            else:
                res = _annihilate(state, psi_star_twice_from_int(j))
                if res is None:
                    continue
                s1, mid = res
                res2 = _create(mid, psi_twice_from_int(i))
                if res2 is None:
                    continue
                s2, final = res2
                _accumulate(acc, final, coeff * val * s1 * s2)
    else:
        p = X.period
        for (i, j), val in X.a.items():
            if i == j:
                # occupancy deviates from the vacuum only inside a finite window
                total = 0
                start = min(lowest, 1)
                stop = max(tail, 1)
                residue = psi_twice_from_int(i) % (2 * p)
                for two_r in range(start, stop, 2):
                    if two_r % (2 * p) != residue:
                        continue
                    total += (1 if state.is_occupied(two_r) else 0) - _vacuum_occupation(two_r)
                if total:
                    _accumulate(acc, state, coeff * val * total)
            else:
                # periodic copies move a particle by the fixed slot offset 2(j-i)
                delta = 2 * (j - i)
                sources = list(prefix)
                if delta < 0:
                    sources.extend(tail + 2 * t for t in range((-delta) // 2))
                for two_u in sources:
                    if (int_from_psi_star_twice(-two_u) - j) % p:
                        continue
                    res = _annihilate(state, -two_u)
                    if res is None:
                        continue
                    s1, mid = res
                    res2 = _create(mid, two_u + delta)
                    if res2 is None:
                        continue
                    s2, final = res2
                    _accumulate(acc, final, coeff * val * s1 * s2)

    for (j, k), val in X.b.items():
        # psi_j psi_k: rightmost factor first
        res = _create(state, psi_twice_from_int(k))
        if res is None:
            continue
        s1, mid = res
        res2 = _create(mid, psi_twice_from_int(j))
        if res2 is None:
            continue
        s2, final = res2
        _accumulate(acc, final, coeff * val * s1 * s2)

    for (j, k), val in X.c.items():
        res = _annihilate(state, psi_star_twice_from_int(k))
        if res is None:
            continue
        s1, mid = res
        res2 = _annihilate(mid, psi_star_twice_from_int(j))
        if res2 is None:
            continue
        s2, final = res2
        _accumulate(acc, final, coeff * val * s1 * s2)

    if X.central:
        _accumulate(acc, state, coeff * X.central)


def apply_quad(X: QuadElement, v: FockVector) -> FockVector:
    """Apply a quadratic element; finite support even for periodic X."""
    acc: dict = {}
    for state, coeff in v.items():
        _quad_on_state(X, state, acc, coeff)
    return FockVector(acc)


# ---------------------------------------------------------------------------
# Chevalley generators


def chevalley_apply(gen: str, i: int, v: FockVector) -> FockVector:
    """Apply e_i = psi_{i-1} psi*_i, f_i = psi_i psi*_{i-1}, or the raw
    number-operator difference h_i = psi_{i-1}psi*_{i-1} - psi_i psi*_i."""
    if gen == "e":
        w = apply_fermion("psi_star", psi_star_twice_from_int(i), v)
        return apply_fermion("psi", psi_twice_from_int(i - 1), w)
    if gen == "f":
        w = apply_fermion("psi_star", psi_star_twice_from_int(i - 1), v)
        return apply_fermion("psi", psi_twice_from_int(i), w)
    if gen == "h":
        acc: dict = {}
        for state, coeff in v.items():
            eig = occupation_number(state, i - 1) - occupation_number(state, i)
            if eig:
                _accumulate(acc, state, coeff * eig)
        return FockVector(acc)
    raise ValueError(f"unknown Chevalley generator {gen!r}")


# ---------------------------------------------------------------------------
# neutral fermions


def apply_neutral(m: int, hatted: bool, v: FockVector) -> FockVector:
    """Apply phi_m = (psi_m + (-1)^m psi*_{-m})/sqrt2, or its hatted partner
    i*(psi_m - (-1)^m psi*_{-m})/sqrt2."""
    sgn = parity_sign(m)
    part1 = apply_fermion("psi", psi_twice_from_int(m), v)
    part2 = apply_fermion("psi_star", psi_star_twice_from_int(-m), v)
    if hatted:
        c1 = I_UNIT * INV_SQRT2
        c2 = (-sgn) * I_UNIT * INV_SQRT2
    else:
        c1 = INV_SQRT2
        c2 = sgn * INV_SQRT2
    return part1.scale(c1) + part2.scale(c2)
