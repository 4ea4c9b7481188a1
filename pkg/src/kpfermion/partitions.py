"""Integer partition helpers: validation, conjugation, Frobenius coordinates."""

from __future__ import annotations


def check_partition(parts) -> tuple:
    """Validate and return a partition as a tuple (positive, weakly decreasing)."""
    t = tuple(int(p) for p in parts)
    if any(p <= 0 for p in t):
        raise ValueError(f"partition parts must be positive: {t}")
    if any(t[k] < t[k + 1] for k in range(len(t) - 1)):
        raise ValueError(f"partition must be weakly decreasing: {t}")
    return t


def conjugate(parts) -> tuple:
    parts = tuple(parts)
    if not parts:
        return ()
    cols = [0] * parts[0]
    for p in parts:
        for j in range(p):
            cols[j] += 1
    return tuple(cols)


def frobenius_coords(parts):
    """Return (ms, ns): arm and leg lengths along the main diagonal.

    ms[k] = lam_k - (k+1), ns[k] = lam'_k - (k+1), both strictly decreasing.
    """
    parts = tuple(parts)
    conj = conjugate(parts)
    d = 0
    while d < len(parts) and parts[d] >= d + 1:
        d += 1
    ms = tuple(parts[k] - (k + 1) for k in range(d))
    ns = tuple(conj[k] - (k + 1) for k in range(d))
    return ms, ns


def from_frobenius(ms, ns) -> tuple:
    """Rebuild the partition with diagonal arm lengths ms and leg lengths ns."""
    ms = tuple(ms)
    ns = tuple(ns)
    if len(ms) != len(ns):
        raise ValueError("Frobenius coordinate lists must have equal length")
    if any(ms[k] <= ms[k + 1] for k in range(len(ms) - 1)) or any(
        ns[k] <= ns[k + 1] for k in range(len(ns) - 1)
    ):
        raise ValueError("Frobenius coordinates must be strictly decreasing")
    if any(m < 0 for m in ms) or any(n < 0 for n in ns):
        raise ValueError("Frobenius coordinates must be non-negative")
    d = len(ms)
    rows = [ms[k] + k + 1 for k in range(d)]
    height = ns[0] + 1 if d else 0
    for i in range(d + 1, height + 1):
        rows.append(sum(1 for k in range(d) if ns[k] + k + 1 >= i))
    return check_partition([r for r in rows if r > 0])


def partitions_of(n: int):
    """Yield all partitions of n as weakly decreasing tuples."""
    if n == 0:
        yield ()
        return

    def rec(remaining, maximum):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, maximum), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    yield from rec(n, n)


def partitions_up_to(n: int) -> list:
    """All partitions of size 0..n, smallest sizes first."""
    out = []
    for k in range(n + 1):
        out.extend(partitions_of(k))
    return out
