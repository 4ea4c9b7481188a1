"""DJKM involutions, fixed-point membership, neutral fermions, reduction
conditions, and classification into affine subalgebra families.

Membership predicates compare coefficient matrices (a-blocks) only: the
involutions are defined on quadratic generators and do not pin down central
terms, and for periodic elements the central transport is a divergent sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .fock import (FockVector, QuadElement, VACUUM, apply_neutral, vev)
from .loopalg import BandMatrix, ainf_bracket
from .scalars import QISqrt2, I_UNIT, INV_SQRT2, collapse, parity_sign, rat

# ---------------------------------------------------------------------------
# involution rules


@dataclass(frozen=True)
class InvolutionRule:
    """kind in {'sigma_l', 'two_component_sigma', 'kappa'}; l used by sigma_l."""

    kind: str
    l: int = 0

    def __post_init__(self):
        if self.kind not in ("sigma_l", "two_component_sigma", "kappa"):
            raise ValueError(f"unknown involution kind {self.kind!r}")


def sigma_rule(l: int) -> InvolutionRule:
    """psi_n -> (-1)^(l-n) psi*_{l-n} and dually; B is the l=0 fixed set,
    C the l=1 fixed set."""
    return InvolutionRule("sigma_l", l)


TWO_COMPONENT_SIGMA = InvolutionRule("two_component_sigma")
KAPPA = InvolutionRule("kappa")


def _two_component_target(m: int) -> int:
    # psi^{(1)}_n = psi_{2n}, psi^{(2)}_n = psi_{2n+1}; the rule
    # psi^{(j)}_n -> (-1)^n psi^{(j)*}_{-n} lands on these global labels
    return -m if m % 2 == 0 else 2 - m


def _two_component_sign(m: int) -> int:
    return parity_sign(m // 2) if m % 2 == 0 else parity_sign((m - 1) // 2)


def involution_image(X: QuadElement, rule: InvolutionRule) -> QuadElement:
    """Image of a pure-a-block element under a charged involution.

    Monomial rule (re-normal-ordered): the image of :psi_i psi*_j: has
    a-coefficient -s(i)s(j) at (t(j), t(i)) where t and s are the rule's
    index map and sign; the diagonal re-ordering constants are folded into
    the central term for finite-support elements and dropped for periodic
    ones (fixed-point comparisons exclude the center).
    """
    if X.b or X.c or X.extended:
        raise ValueError("charged involutions act on pure a-block elements")
    if rule.kind == "sigma_l":
        l = rule.l
        target = lambda m: l - m
        sign = lambda m: parity_sign(l - m)
        period = X.period
    elif rule.kind == "two_component_sigma":
        target = _two_component_target
        sign = _two_component_sign
        # the rule distinguishes parities, so an odd period must be doubled
        period = X.period
        if period is not None and period % 2:
            period *= 2
    else:
        raise ValueError("kappa acts on neutral quadratic elements")

    X = _with_period(X, period)
    out: dict = {}
    central = X.central
    for (i, j), val in X.a.items():
        # sigma(psi_i psi*_j) = s(i)s(j) psi*_{t(i)} psi_{t(j)}; re-ordering
        # gives -psi_{t(j)} psi*_{t(i)} plus a delta term on the diagonal
        key = (target(j), target(i))
        out[key] = out.get(key, 0) - sign(i) * sign(j) * val
        if i == j and period is None:
            ti = target(i)
            central += val * ((1 if ti >= 0 else 0) - (1 if i <= -1 else 0))
    return QuadElement(out, central=central if period is None else X.central,
                       period=period)


def _with_period(X: QuadElement, period) -> QuadElement:
    if period == X.period:
        return X
    if X.period is None or period is None or period % X.period:
        raise ValueError("can only coarsen to a multiple of the stored period")
    a = {}
    for (i, j), val in X.a.items():
        for t in range(period // X.period):
            a[(i + t * X.period, j + t * X.period)] = val
    return QuadElement(a, central=X.central, period=period)


def _a_blocks_equal(X: QuadElement, Y: QuadElement) -> bool:
    if X.period is None and Y.period is None:
        return X.a == Y.a
    if (X.period is None) != (Y.period is None):
        return not X.a and not Y.a
    q = math.lcm(X.period, Y.period)
    band = max(X.band, Y.band)
    for i in range(q):
        for j in range(i - band, i + band + 1):
            if X.a_lookup(i, j) != Y.a_lookup(i, j):
                return False
    return True


def is_fixed(X: QuadElement, rule: InvolutionRule) -> bool:
    """True iff the a-block is invariant under the rule (center excluded)."""
    return _a_blocks_equal(X, involution_image(X, rule))


def symmetrize(X: QuadElement, rule: InvolutionRule) -> QuadElement:
    """X plus its involution image: always a fixed point."""
    img = involution_image(X, rule)
    return _with_period(X, img.period) + img


def is_d_prime(X: QuadElement) -> bool:
    """Anti-band membership: every stored entry satisfies |i + j| <= band."""
    if X.period is not None:
        raise ValueError("the anti-band condition is a finite-support notion")
    for block in (X.a, X.b, X.c):
        for (i, j) in block:
            if abs(i + j) > X.band:
                return False
    return True


# ---------------------------------------------------------------------------
# neutral quadratic elements


class NeutralQuadElement:
    """Combination of :phi_i phi_j: monomials (hatted variants allowed)
    plus a central scalar; entries keyed (i, j, hat_i, hat_j)."""

    __slots__ = ("entries", "central")

    def __init__(self, entries=None, central=0):
        clean = {}
        for key, val in (entries or {}).items():
            i, j, hi, hj = key
            val = rat(val) if isinstance(val, (int, str)) else val
            if val:
                clean[(int(i), int(j), bool(hi), bool(hj))] = val
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "central",
                           rat(central) if isinstance(central, (int, str)) else central)

    def __setattr__(self, name, value):
        raise AttributeError("NeutralQuadElement values are immutable")

    def band(self) -> int:
        return max((abs(i + j) for (i, j, _, _) in self.entries), default=0)

    def __add__(self, other: "NeutralQuadElement") -> "NeutralQuadElement":
        out = dict(self.entries)
        for key, val in other.entries.items():
            out[key] = out.get(key, 0) + val
        return NeutralQuadElement(out, self.central + other.central)

    def scale(self, scalar) -> "NeutralQuadElement":
        scalar = rat(scalar) if isinstance(scalar, (int, str)) else scalar
        return NeutralQuadElement({k: v * scalar for k, v in self.entries.items()},
                                  self.central * scalar)

    def __eq__(self, other):
        if not isinstance(other, NeutralQuadElement):
            return NotImplemented
        return self.entries == other.entries and self.central == other.central

    def __repr__(self):
        return f"NeutralQuadElement({len(self.entries)} entries, central={self.central})"


def kappa(X: NeutralQuadElement) -> NeutralQuadElement:
    """phi -> phi-hat, phi-hat -> -phi, extended to quadratics."""
    out: dict = {}
    for (i, j, hi, hj), val in X.entries.items():
        sign = (-1 if hi else 1) * (-1 if hj else 1)
        key = (i, j, not hi, not hj)
        out[key] = out.get(key, 0) + sign * val
    return NeutralQuadElement(out, X.central)


def _neutral_factor_terms(m: int, hatted: bool):
    """Charged expansion of phi_m or phi-hat_m: [(kind, index, scalar), ...]."""
    sgn = parity_sign(m)
    if hatted:
        return (("psi", m, I_UNIT * INV_SQRT2),
                ("star", -m, (-sgn) * I_UNIT * INV_SQRT2))
    return (("psi", m, INV_SQRT2), ("star", -m, sgn * INV_SQRT2))


def _neutral_monomial_contraction(i, j, hi, hj):
    """Vacuum expectation of the raw product, computed in the wedge space."""
    v = apply_neutral(j, hj, FockVector.basis(VACUUM))
    v = apply_neutral(i, hi, v)
    return vev(v)


def neutral_to_charged(X: NeutralQuadElement) -> QuadElement:
    """Expand each normal-ordered neutral monomial in charged fermions.

    The output carries a-, b- and c-blocks; scalars stay in Q for pure or
    kappa-symmetrized combinations and collapse back to Fraction whenever
    the imaginary parts cancel.
    """
    a: dict = {}
    b: dict = {}
    c: dict = {}
    central = X.central

    def add(block, key, val):
        block[key] = block.get(key, 0) + val

    for (i, j, hi, hj), coeff in X.entries.items():
        reorder = 0
        for kind1, idx1, c1 in _neutral_factor_terms(i, hi):
            for kind2, idx2, c2 in _neutral_factor_terms(j, hj):
                val = coeff * c1 * c2
                if kind1 == "psi" and kind2 == "star":
                    add(a, (idx1, idx2), val)
                    if idx1 == idx2 and idx1 <= -1:
                        reorder = reorder + val
                elif kind1 == "star" and kind2 == "psi":
                    # psi*_p psi_q = delta_pq - psi_q psi*_p
                    add(a, (idx2, idx1), -val)
                    if idx1 == idx2 and idx1 >= 0:
                        reorder = reorder + val
                elif kind1 == "psi" and kind2 == "psi":
                    add(b, (idx1, idx2), val)
                else:
                    add(c, (idx1, idx2), val)
        # normal ordering subtracts the vacuum contraction of the raw product
        central = central + reorder - coeff * _neutral_monomial_contraction(i, j, hi, hj)

    a = {k: collapse(v) for k, v in a.items() if v}
    b = {k: collapse(v) for k, v in b.items() if v}
    c = {k: collapse(v) for k, v in c.items() if v}
    return QuadElement(a, b, c, collapse(central),
                       extended=True if (b or c) else None)


def b_prime_to_b(X: NeutralQuadElement) -> QuadElement:
    """The neutral-to-charged map X -> X + kappa(X).

    The image must be a pure a-block, sigma_0-fixed element with rational
    coefficients; a violation indicates an implementation fault, not bad
    input, and raises RuntimeError.
    """
    img = neutral_to_charged(X + kappa(X))
    if img.b or img.c:
        raise RuntimeError("pair blocks survived the kappa symmetrization")
    if any(isinstance(v, QISqrt2) for v in img.a.values()) or isinstance(
            img.central, QISqrt2):
        raise RuntimeError("non-rational scalars survived the symmetrization")
    result = QuadElement(img.a, central=img.central)
    if not is_fixed(result, sigma_rule(0)):
        raise RuntimeError("image is not a sigma_0 fixed point")
    return result


# ---------------------------------------------------------------------------
# reduction conditions


class NonPeriodicError(ValueError):
    """A reduction condition was asked of a finite-support non-zero element."""


def _require_periodic_a_block(X: QuadElement):
    if X.b or X.c or X.extended:
        raise ValueError("reduction conditions apply to pure a-block elements")
    if X.a and X.period is None:
        raise NonPeriodicError(
            "finite-support non-zero elements cannot satisfy the periodicity "
            "condition; supply a periodic element")


def is_reduced(X: QuadElement, l: int) -> bool:
    """Shift-invariance a[i+l, j+l] = a[i, j] plus the vanishing of every
    shifted diagonal trace sum_{i=0}^{l-1} a[i, i+jl]."""
    if l <= 0:
        raise ValueError("the reduction level must be a positive integer")
    _require_periodic_a_block(X)
    if not X.a:
        return True
    p = X.period
    band = X.band
    for g in range(math.lcm(p, l)):
        for h in range(g - band, g + band + 1):
            if X.a_lookup(g + l, h + l) != X.a_lookup(g, h):
                return False
    for j in range(-(band // l) - 1, band // l + 2):
        if sum(X.a_lookup(i, i + j * l) for i in range(l)):
            return False
    return True


def is_bireduced(X: QuadElement, l1: int, l2: int) -> bool:
    """Two-component reduction: per-component shift invariance
    a^(mu,nu)[i+l_mu, j+l_nu] = a^(mu,nu)[i, j] and the joint diagonal trace
    condition, with the trace read over the diagonal components nu = mu (the
    reading that restricts to the one-component condition)."""
    if l1 <= 0 or l2 <= 0:
        raise ValueError("reduction levels must be positive integers")
    _require_periodic_a_block(X)
    if not X.a:
        return True
    p = X.period
    if p % 2:
        p *= 2  # parity classes need an even period
    band = X.band
    ls = {1: l1, 2: l2}
    for mu in (1, 2):
        for nu in (1, 2):
            s_r, s_c = 2 * ls[mu], 2 * ls[nu]
            slack = band + abs(s_r - s_c) + 2
            for g in range(mu - 1, p, 2):
                for h in range(g - slack, g + slack + 1):
                    if (h - (nu - 1)) % 2:
                        continue
                    if X.a_lookup(g + s_r, h + s_c) != X.a_lookup(g, h):
                        return False
    max_l = max(l1, l2)
    jbound = band // (2 * min(l1, l2)) + 2
    for j in range(-jbound, jbound + 1):
        total = Fraction(0)
        for mu in (1, 2):
            lm = ls[mu]
            for i in range(lm):
                g = 2 * i + (mu - 1)
                total += X.a_lookup(g, g + 2 * j * lm)
        if total:
            return False
    return True


# ---------------------------------------------------------------------------
# classification


def _label_a(X: QuadElement, k: int) -> bool:
    """Membership in the level-k untwisted family: (k+1)-reduced."""
    return is_reduced(X, k + 1)


def classify(X: QuadElement, l: int) -> set:
    """Labels, for the given rank parameter l, of the affine families X
    belongs to.  The two-parameter families are granted when the bireduction
    predicate holds for some splitting s in its stated range; families whose
    range is empty at this l are not emitted."""
    if l <= 0:
        raise ValueError("the rank parameter must be a positive integer")
    _require_periodic_a_block(X)
    labels = set()
    in_b = is_fixed(X, sigma_rule(0))
    in_c = is_fixed(X, sigma_rule(1))

    if _label_a(X, l):
        labels.add(f"A_{l}^(1)")

    d2_direct = is_reduced(X, 2 * (l + 1)) and in_b
    d2_via_a = _label_a(X, 2 * l + 1) and in_b
    d2_c_direct = is_reduced(X, 2 * (l + 1)) and in_c
    d2_c_via_a = _label_a(X, 2 * l + 1) and in_c
    if d2_direct != d2_via_a or d2_c_direct != d2_c_via_a:
        raise RuntimeError("reduction-level bookkeeping is inconsistent")
    if d2_direct:
        labels.add(f"D_{l + 1}^(2)")

    if is_reduced(X, 2 * l) and in_c:
        labels.add(f"C_{l}^(1)")

    in_d = is_fixed(X, TWO_COMPONENT_SIGMA)
    if l >= 2 and in_d and any(is_bireduced(X, 2 * l - 2 * s, 2 * s)
                               for s in range(1, l)):
        labels.add(f"D_{l}^(1)")
    if in_d and any(is_bireduced(X, 2 * l - 2 * s - 1, 2 * s + 1)
                    for s in range(l)):
        labels.add(f"A_{2 * l - 1}^(2)")
    return labels


def all_labels(l: int) -> set:
    """Labels the zero element receives at rank parameter l."""
    base = {f"A_{l}^(1)", f"D_{l + 1}^(2)", f"C_{l}^(1)", f"A_{2 * l - 1}^(2)"}
    if l >= 2:
        base.add(f"D_{l}^(1)")
    return base


# ---------------------------------------------------------------------------
# conversions to the matrix layer


def band_matrix_from_quad(X: QuadElement) -> BandMatrix:
    if X.b or X.c or X.extended:
        raise ValueError("only pure a-block elements map to the matrix layer")
    return BandMatrix(X.a, period=X.period, central=X.central)


def quad_from_band_matrix(M: BandMatrix) -> QuadElement:
    return QuadElement(M.entries, central=M.central, period=M.period)


def bracket_a_blocks(X: QuadElement, Y: QuadElement, cut: int = 0) -> QuadElement:
    """A-block commutator with the pair-counting cocycle on the center."""
    return quad_from_band_matrix(
        ainf_bracket(band_matrix_from_quad(X), band_matrix_from_quad(Y), cut))
