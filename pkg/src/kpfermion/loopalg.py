"""Banded infinite matrices, the pair-counting 2-cocycle, loop-algebra
embeddings, the residue cocycle, affinized embeddings, and order-2 diagram
automorphism projections.

The cocycle window is parametrized by an integer cut c: alpha_c counts pairs
crossing the boundary between c and c+1, and alpha_c - alpha_{c-1} is the
coboundary X -> [X, Y]_{cc}.  The default cut 0 is the one reproduced by the
residue formula on loop matrices; the wedge-space action, whose Dirac sea
fills matrix labels i <= -1, has its commutator anomaly at cut -1.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .scalars import rat

# ---------------------------------------------------------------------------
# banded matrices


class BandMatrix:
    """Sparse Z x Z matrix, banded, finite-support or periodic, with a
    central scalar.  Periodic matrices store one period of rows."""

    __slots__ = ("entries", "period", "band", "central")

    def __init__(self, entries=None, period=None, central=0, band=None):
        if period is not None and period <= 0:
            raise ValueError("period must be a positive integer")
        clean: dict = {}
        for (i, j), val in (entries or {}).items():
            val = rat(val) if isinstance(val, (int, str)) else val
            if not val:
                continue
            if period is not None:
                r = i % period
                key = (r, j - (i - r))
            else:
                key = (i, j)
            if key in clean and clean[key] != val:
                raise ValueError(f"inconsistent periodic entries at {key}")
            clean[key] = val
        object.__setattr__(self, "entries", clean)
        object.__setattr__(self, "period", period)
        auto = max((abs(i - j) for (i, j) in clean), default=0)
        if band is None:
            band = auto
        elif band < auto:
            raise ValueError(f"declared band {band} below entry span {auto}")
        object.__setattr__(self, "band", band)
        object.__setattr__(self, "central",
                           rat(central) if isinstance(central, (int, str)) else central)

    def __setattr__(self, name, value):
        raise AttributeError("BandMatrix values are immutable")

    def lookup(self, i: int, j: int) -> Fraction:
        if self.period is None:
            return self.entries.get((i, j), Fraction(0))
        r = i % self.period
        return self.entries.get((r, j - (i - r)), Fraction(0))

    def is_zero(self) -> bool:
        return not self.entries and not self.central

    def with_central(self, central) -> "BandMatrix":
        return BandMatrix(self.entries, self.period, central, self.band)

    def scale(self, scalar) -> "BandMatrix":
        scalar = rat(scalar) if isinstance(scalar, (int, str)) else scalar
        return BandMatrix({k: v * scalar for k, v in self.entries.items()},
                          self.period, self.central * scalar, self.band)

    def __add__(self, other: "BandMatrix") -> "BandMatrix":
        if self.period != other.period:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ValueError("cannot add matrices of different periods")
        out = dict(self.entries)
        for key, val in other.entries.items():
            out[key] = out.get(key, 0) + val
        return BandMatrix(out, self.period, self.central + other.central)

    def __sub__(self, other: "BandMatrix") -> "BandMatrix":
        return self + other.scale(-1)

    def __eq__(self, other):
        if not isinstance(other, BandMatrix):
            return NotImplemented
        if self.central != other.central:
            return False
        return matrix_parts_equal(self, other)

    def __repr__(self):
        return (f"BandMatrix({len(self.entries)} entries, period={self.period}, "
                f"band={self.band}, central={self.central})")


def unit_matrix(i: int, j: int, value=1) -> BandMatrix:
    """The elementary matrix with a single (i, j) entry."""
    return BandMatrix({(i, j): value})


def matrix_parts_equal(X: BandMatrix, Y: BandMatrix) -> bool:
    """Entry-level equality of the matrix parts, period-agnostic."""
    if X.period is None and Y.period is None:
        return X.entries == Y.entries
    if (X.period is None) != (Y.period is None):
        # a periodic matrix equals a finite one only if both are zero
        return not X.entries and not Y.entries
    q = math.lcm(X.period, Y.period)
    band = max(X.band, Y.band)
    for i in range(q):
        for j in range(i - band, i + band + 1):
            if X.lookup(i, j) != Y.lookup(i, j):
                return False
    return True


def matmul(X: BandMatrix, Y: BandMatrix) -> BandMatrix:
    """Matrix product; banded times banded stays banded, periods combine."""
    out: dict = {}
    if X.period is None:
        for (i, k), xv in X.entries.items():
            for j in range(k - Y.band, k + Y.band + 1):
                yv = Y.lookup(k, j)
                if yv:
                    out[(i, j)] = out.get((i, j), 0) + xv * yv
        return BandMatrix(out, None)
    if Y.period is None:
        for (k, j), yv in Y.entries.items():
            for i in range(k - X.band, k + X.band + 1):
                xv = X.lookup(i, k)
                if xv:
                    out[(i, j)] = out.get((i, j), 0) + xv * yv
        return BandMatrix(out, None)
    q = math.lcm(X.period, Y.period)
    for i in range(q):
        for k in range(i - X.band, i + X.band + 1):
            xv = X.lookup(i, k)
            if not xv:
                continue
            for j in range(k - Y.band, k + Y.band + 1):
                yv = Y.lookup(k, j)
                if yv:
                    out[(i, j)] = out.get((i, j), 0) + xv * yv
    return BandMatrix(out, q)


def cocycle_pairs(X: BandMatrix, Y: BandMatrix, cut: int = 0) -> Fraction:
    """alpha(X, Y) = sum_{i <= cut, j >= cut+1} (X_ij Y_ji - Y_ij X_ji).

    Banded-ness makes the contributing strip finite.  The default cut 0 is
    the convention matched by the residue formula (see residue_cocycle); the
    Fock-representation anomaly is the cut -1 variant.
    """
    band = max(X.band, Y.band)
    total = Fraction(0)
    for i in range(cut - band + 1, cut + 1):
        for j in range(cut + 1, i + band + 1):
            total += X.lookup(i, j) * Y.lookup(j, i) - Y.lookup(i, j) * X.lookup(j, i)
    return total


def ainf_bracket(X: BandMatrix, Y: BandMatrix, cut: int = 0) -> BandMatrix:
    """[X, Y] = XY - YX plus the cocycle on the central part."""
    matrix = matmul(X, Y) - matmul(Y, X)
    return matrix.with_central(cocycle_pairs(X, Y, cut))


# ---------------------------------------------------------------------------
# loop algebra gl_n[t, t^-1]


def _coerce_matrix(n: int, rows):
    rows = [list(r) for r in rows]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"expected an {n}x{n} matrix")
    return tuple(tuple(rat(v) if isinstance(v, (int, str)) else v for v in r)
                 for r in rows)


def _mat_add(a, b):
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def _mat_scale(a, s):
    return tuple(tuple(x * s for x in r) for r in a)


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def _mat_trace(a) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), Fraction(0))


def _zero_mat(n):
    return tuple((Fraction(0),) * n for _ in range(n))


class LoopElement:
    """Finite Laurent polynomial sum_k t^k a_k with n x n rational matrices."""

    __slots__ = ("size", "terms")

    def __init__(self, size: int, terms=None):
        if size < 1:
            raise ValueError("matrix size must be >= 1")
        clean = {}
        for k, mat in (terms or {}).items():
            mat = _coerce_matrix(size, mat)
            if any(any(v for v in row) for row in mat):
                clean[int(k)] = mat
        object.__setattr__(self, "size", size)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LoopElement values are immutable")

    @classmethod
    def basis(cls, size: int, i: int, j: int, k: int, value=1) -> "LoopElement":
        """t^k e_ij with 1-based matrix indices."""
        if not (1 <= i <= size and 1 <= j <= size):
            raise ValueError("matrix indices are 1-based and bounded by size")
        rows = [[0] * size for _ in range(size)]
        rows[i - 1][j - 1] = value
        return cls(size, {k: rows})

    def coefficient(self, k: int):
        return self.terms.get(k, _zero_mat(self.size))

    def __add__(self, other: "LoopElement") -> "LoopElement":
        if self.size != other.size:
            raise ValueError("size mismatch")
        out = dict(self.terms)
        for k, mat in other.terms.items():
            out[k] = _mat_add(out[k], mat) if k in out else mat
        return LoopElement(self.size, out)

    def scale(self, scalar) -> "LoopElement":
        scalar = rat(scalar) if isinstance(scalar, (int, str)) else scalar
        return LoopElement(self.size, {k: _mat_scale(m, scalar)
                                       for k, m in self.terms.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def mul(self, other: "LoopElement") -> "LoopElement":
        if self.size != other.size:
            raise ValueError("size mismatch")
        out: dict = {}
        for k1, m1 in self.terms.items():
            for k2, m2 in other.terms.items():
                prod = _mat_mul(m1, m2)
                k = k1 + k2
                out[k] = _mat_add(out[k], prod) if k in out else prod
        return LoopElement(self.size, out)

    def commutator(self, other: "LoopElement") -> "LoopElement":
        return self.mul(other) - other.mul(self)

    def derivative(self) -> "LoopElement":
        return LoopElement(self.size, {k - 1: _mat_scale(m, k)
                                       for k, m in self.terms.items() if k})

    def __eq__(self, other):
        if not isinstance(other, LoopElement):
            return NotImplemented
        return self.size == other.size and self.terms == other.terms

    def __repr__(self):
        return f"LoopElement(n={self.size}, degrees={sorted(self.terms)})"


def loop_embed(a: LoopElement) -> BandMatrix:
    """Shift-block embedding of gl_n[t, t^-1] into banded matrices:
    t^k e_ij goes to the n-periodic matrix with entries at
    (n(l-k)+i, nl+j) for all l."""
    n = a.size
    entries: dict = {}
    for k, mat in a.terms.items():
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                val = mat[i - 1][j - 1]
                if not val:
                    continue
                # representative row in [0, n): l' = 0 unless i = n
                if i < n:
                    key = (i, n * k + j)
                else:
                    key = (0, n * (k - 1) + j)
                entries[key] = entries.get(key, 0) + val
    deg = max((abs(k) for k in a.terms), default=0)
    return BandMatrix(entries, period=n, band=n * deg + n)


def residue_cocycle(a: LoopElement, b: LoopElement) -> Fraction:
    """res tr(a'(t) b(t)) = sum_k k tr(a_k b_{-k}).

    The trace is applied even though block-level bookkeeping might suggest
    otherwise; the pair-counting computation on the embedded matrices forces
    it, derivative factor included.
    """
    if a.size != b.size:
        raise ValueError("size mismatch")
    total = Fraction(0)
    for k, mat in a.terms.items():
        if k == 0:
            continue
        other = b.terms.get(-k)
        if other is not None:
            total += k * _mat_trace(_mat_mul(mat, other))
    return total


# ---------------------------------------------------------------------------
# affinized embeddings


def _solve_rational(columns, target):
    """Solve sum_k x_k columns[k] = target exactly; None if inconsistent."""
    m = len(target)
    d = len(columns)
    aug = [[columns[k][r] for k in range(d)] + [target[r]] for r in range(m)]
    pivots = []
    row = 0
    for col in range(d):
        pivot = next((r for r in range(row, m) if aug[r][col]), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = Fraction(1) / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [v - factor * w for v, w in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    # consistency: zero rows must have zero rhs
    for r in range(row, m):
        if aug[r][d]:
            return None
    x = [Fraction(0)] * d
    for r, col in enumerate(pivots):
        x[col] = aug[r][d]
    return x


class EmbeddingData:
    """Images of a basis of a finite-dimensional Lie algebra inside gl_n.

    Construction verifies exact closure: every pairwise commutator of the
    images must lie back in their span.
    """

    __slots__ = ("size", "images")

    def __init__(self, images):
        images = [_coerce_matrix(len(images[0]), m) for m in images]
        n = len(images[0])
        if any(len(m) != n for m in images):
            raise ValueError("all basis images must share one matrix size")
        flat = [[m[i][j] for i in range(n) for j in range(n)] for m in images]
        for x in images:
            for y in images:
                comm = _mat_add(_mat_mul(x, y), _mat_scale(_mat_mul(y, x), -1))
                target = [comm[i][j] for i in range(n) for j in range(n)]
                if _solve_rational(flat, target) is None:
                    raise ValueError("basis images do not close under commutator")
        object.__setattr__(self, "size", n)
        object.__setattr__(self, "images", tuple(images))

    def __setattr__(self, name, value):
        raise AttributeError("EmbeddingData values are immutable")

    @property
    def domain_dim(self) -> int:
        return len(self.images)

    def push(self, loop_coeffs) -> LoopElement:
        """Map {degree k: coefficient vector over the abstract basis} through
        the embedding, yielding a gl_n loop element."""
        terms = {}
        for k, coeffs in loop_coeffs.items():
            coeffs = list(coeffs)
            if len(coeffs) != self.domain_dim:
                raise ValueError("coefficient vector length mismatch")
            acc = _zero_mat(self.size)
            for c, img in zip(coeffs, self.images):
                c = rat(c) if isinstance(c, (int, str)) else c
                if c:
                    acc = _mat_add(acc, _mat_scale(img, c))
            terms[k] = acc
        return LoopElement(self.size, terms)


def affinized_cocycle(E: EmbeddingData, Xt: dict, Yt: dict) -> Fraction:
    """Central-extension cocycle pulled back through the embedding."""
    return residue_cocycle(E.push(Xt), E.push(Yt))


# ---------------------------------------------------------------------------
# order-2 diagram automorphisms


class MatrixAutomorphism:
    """Order-2 automorphism of gl_n given by signed-permutation conjugation,
    optionally composed with X -> -X^T (the outer class)."""

    __slots__ = ("perm", "signs", "neg_transpose", "size")

    def __init__(self, perm, signs=None, neg_transpose=False):
        perm = tuple(int(p) for p in perm)
        n = len(perm)
        if sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of 0..n-1")
        signs = tuple(rat(s) for s in (signs or (1,) * n))
        if len(signs) != n or any(s * s != 1 for s in signs):
            raise ValueError("signs must be +-1, one per basis vector")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)
        object.__setattr__(self, "neg_transpose", bool(neg_transpose))
        object.__setattr__(self, "size", n)
        probe = _coerce_matrix(n, _distinct_probe(n))
        if self.apply(self.apply(probe)) != probe:
            raise ValueError("automorphism data does not square to the identity")

    def __setattr__(self, name, value):
        raise AttributeError("MatrixAutomorphism values are immutable")

    def apply(self, mat):
        n = self.size
        if self.neg_transpose:
            mat = tuple(tuple(-mat[j][i] for j in range(n)) for i in range(n))
        out = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                v = mat[i][j]
                if v:
                    out[self.perm[i]][self.perm[j]] = self.signs[i] * self.signs[j] * v
        return tuple(tuple(r) for r in out)


def _distinct_probe(n):
    # full-support probe with pairwise-distinct entries; detects any failure
    # of the supplied data to square to the identity
    return [[Fraction(i * (n + 1) + j + 1) for j in range(n)] for i in range(n)]


def diagram_fixed_part(a: LoopElement, auto: MatrixAutomorphism, k: int = 2,
                       twisted: bool = False) -> LoopElement:
    """Projection (a + sigma(a))/2 onto the fixed subalgebra; the twisted
    variant weights the degree-m part by (-1)^m before averaging.

    Only order k = 2 is supported: higher orders need roots of unity outside
    the rational scalar ring.
    """
    if k != 2:
        raise ValueError("only order-2 diagram automorphisms are supported")
    if auto.size != a.size:
        raise ValueError("automorphism size mismatch")
    terms = {}
    for m, mat in a.terms.items():
        image = auto.apply(mat)
        if twisted and m % 2:
            image = _mat_scale(image, -1)
        terms[m] = _mat_scale(_mat_add(mat, image), Fraction(1, 2))
    return LoopElement(a.size, terms)
