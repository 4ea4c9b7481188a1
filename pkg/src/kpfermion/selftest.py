"""Built-in invariant suites at reduced sizes, for the selftest command.

Each suite returns (checks_run, failure_messages).  Sizes are chosen so the
whole battery runs in seconds while still exercising every sign convention;
the acceptance test suite covers the full windows.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .fock import (BasisState, FockVector, QuadElement, VACUUM, apply_boson,
                   apply_fermion, apply_neutral, apply_quad, chevalley_apply,
                   l_vacuum)
from .grassmannian import AffineCoords, bogoliubov_state, frobenius_state, \
    plucker_minor, two_point_cell
from .loopalg import BandMatrix, LoopElement, ainf_bracket, cocycle_pairs, \
    loop_embed, residue_cocycle
from .npoint import npoint_formula, npoint_oracle
from .partitions import frobenius_coords, partitions_up_to
from .subalgebras import (NeutralQuadElement, TWO_COMPONENT_SIGMA,
                          b_prime_to_b, bracket_a_blocks, classify, is_fixed,
                          is_reduced, quad_from_band_matrix, sigma_rule,
                          symmetrize)
from .tau import (PunctureData, TSeries, boson_exp_pairing, check_puncture,
                  free_energy, schur_poly, tau_series, tau_series_schur)


def _rand_fraction(rng, top=5):
    return Fraction(rng.randint(-top, top), rng.randint(1, top))


def _rand_coords(rng, size=3, top=5):
    entries = {}
    for n in range(size):
        for m in range(size):
            if rng.random() < 0.6:
                entries[(n, m)] = _rand_fraction(rng, top)
    return AffineCoords(entries)


def _basis_states(max_energy, charges=(-1, 0, 1)):
    out = []
    for charge in charges:
        for lam in partitions_up_to(max_energy):
            out.append(BasisState(charge, lam))
    return out


def _suite_car():
    checks, failures = 0, []
    states = _basis_states(4)
    labels = range(-5, 7, 2)  # twice-values of r in [-5/2, 5/2]
    for tr in labels:
        for ts in labels:
            for state in states:
                v = FockVector.basis(state)
                mixed = (apply_fermion("psi", tr, apply_fermion("psi_star", ts, v))
                         + apply_fermion("psi_star", ts, apply_fermion("psi", tr, v)))
                want = v if tr + ts == 0 else FockVector.zero()
                checks += 1
                if mixed != want:
                    failures.append(f"CAR mixed failed at 2r={tr}, 2s={ts}")
                same = (apply_fermion("psi", tr, apply_fermion("psi", ts, v))
                        + apply_fermion("psi", ts, apply_fermion("psi", tr, v)))
                checks += 1
                if not same.is_zero():
                    failures.append(f"CAR psi-psi failed at 2r={tr}, 2s={ts}")
    return checks, failures


def _suite_heisenberg():
    checks, failures = 0, []
    for m in range(-3, 4):
        for n in range(-3, 4):
            if m == 0 or n == 0:
                continue
            for state in _basis_states(4, charges=(0, 1)):
                v = FockVector.basis(state)
                lhs = apply_boson(m, apply_boson(n, v)) - apply_boson(n, apply_boson(m, v))
                rhs = v.scale(m) if m == -n else FockVector.zero()
                checks += 1
                if lhs != rhs:
                    failures.append(f"Heisenberg failed at m={m}, n={n}, {state}")
    return checks, failures


def _suite_boson_schur():
    checks, failures = 0, []
    for lam in partitions_up_to(5):
        lhs = boson_exp_pairing(FockVector.basis(BasisState(0, lam)), 5)
        checks += 1
        if lhs != schur_poly(lam, 5):
            failures.append(f"Schur pinning failed at {lam}")
    return checks, failures


def _suite_plucker():
    checks, failures = 0, []
    rng = random.Random(20)
    for _ in range(6):
        A = _rand_coords(rng)
        U = bogoliubov_state(A, 6)
        for lam in partitions_up_to(6):
            ms, ns = frobenius_coords(lam)
            sign, state = frobenius_state(ms, ns)
            checks += 1
            if U.coefficient(state) != sign * plucker_minor(A, ms, ns):
                failures.append(f"minor mismatch at {lam}")
    return checks, failures


def _suite_two_point():
    checks, failures = 0, []
    rng = random.Random(21)
    for _ in range(4):
        A = _rand_coords(rng)
        for p in range(4):
            for q in range(4):
                checks += 1
                if two_point_cell(A, p, q) != two_point_cell(A, p, q, use_state=True):
                    failures.append(f"two-point mismatch at ({p}, {q})")
    return checks, failures


def _suite_npoint():
    checks, failures = 0, []
    rng = random.Random(22)
    for n, cut in ((2, 6), (3, 6)):
        for _ in range(3):
            A = _rand_coords(rng, size=2)
            checks += 1
            if npoint_formula(A, n, cut) != npoint_oracle(A, n, cut):
                failures.append(f"n-point mismatch at n={n}")
    return checks, failures


def _suite_rep_cocycle():
    checks, failures = 0, []
    rng = random.Random(23)
    states = _basis_states(3)
    for _ in range(6):
        def rand_banded():
            entries = {}
            for i in range(-3, 4):
                for j in range(max(i - 2, -3), min(i + 2, 3) + 1):
                    if rng.random() < 0.4:
                        entries[(i, j)] = Fraction(rng.randint(-3, 3))
            return BandMatrix(entries)
        X, Y = rand_banded(), rand_banded()
        Z = quad_from_band_matrix(ainf_bracket(X, Y, cut=-1))
        qx, qy = quad_from_band_matrix(X), quad_from_band_matrix(Y)
        for state in states:
            v = FockVector.basis(state)
            lhs = apply_quad(qx, apply_quad(qy, v)) - apply_quad(qy, apply_quad(qx, v))
            checks += 1
            if lhs != apply_quad(Z, v):
                failures.append(f"rep property failed at {state}")
    return checks, failures


def _suite_loop_cocycle():
    checks, failures = 0, []
    rng = random.Random(24)
    for _ in range(25):
        n = rng.randint(1, 3)

        def rand_loop():
            terms = {}
            for k in range(-2, 3):
                if rng.random() < 0.5:
                    terms[k] = [[Fraction(rng.randint(-3, 3)) for _ in range(n)]
                                for _ in range(n)]
            return LoopElement(n, terms)
        a, b = rand_loop(), rand_loop()
        checks += 1
        if cocycle_pairs(loop_embed(a), loop_embed(b)) != residue_cocycle(a, b):
            failures.append("pair count != residue")
    return checks, failures


def _suite_highest_weight():
    checks, failures = 0, []
    for l in range(-3, 4):
        v = FockVector.basis(l_vacuum(l))
        for i in range(-3, 4):
            checks += 2
            if not chevalley_apply("e", i, v).is_zero():
                failures.append(f"e_{i}|{l}> != 0")
            want = v if i == l else FockVector.zero()
            if chevalley_apply("h", i, v) != want:
                failures.append(f"h_{i}|{l}> wrong")
    return checks, failures


def _suite_neutral():
    checks, failures = 0, []
    states = _basis_states(3, charges=(0,))
    for m in range(-2, 3):
        for n in range(-2, 3):
            for state in states:
                v = FockVector.basis(state)
                anti = (apply_neutral(m, False, apply_neutral(n, False, v))
                        + apply_neutral(n, False, apply_neutral(m, False, v)))
                want = v.scale(-1 if m % 2 else 1) if m == -n else FockVector.zero()
                checks += 1
                if anti != want:
                    failures.append(f"neutral CAR failed at ({m}, {n})")
    rng = random.Random(25)
    for _ in range(8):
        entries = {}
        for _ in range(3):
            i, j = rng.randint(-2, 2), rng.randint(-2, 2)
            entries[(i, j, False, False)] = _rand_fraction(rng, 3)
        checks += 1
        try:
            b_prime_to_b(NeutralQuadElement(entries))
        except RuntimeError as exc:
            failures.append(f"b'->b failed: {exc}")
    return checks, failures


def _suite_classify():
    checks, failures = 0, []
    rng = random.Random(26)
    for _ in range(30):
        p = rng.choice([2, 4, 6])
        entries = {}
        for i in range(p):
            for j in range(i - 2, i + 3):
                if rng.random() < 0.5:
                    entries[(i, j)] = Fraction(rng.randint(-2, 2))
        X = QuadElement(entries, period=p)
        variants = [X, symmetrize(X, sigma_rule(0)), symmetrize(X, sigma_rule(1))]
        for Y in variants:
            for l in (1, 2):
                red = is_reduced(Y, 2 * (l + 1))
                checks += 2
                if (red and is_fixed(Y, sigma_rule(0))) != (
                        is_reduced(Y, (2 * l + 1) + 1) and is_fixed(Y, sigma_rule(0))):
                    failures.append("B-route identity failed")
                if (red and is_fixed(Y, sigma_rule(1))) != (
                        is_reduced(Y, (2 * l + 1) + 1) and is_fixed(Y, sigma_rule(1))):
                    failures.append("C-route identity failed")
                classify(Y, l)
    for rule in (sigma_rule(0), sigma_rule(1), TWO_COMPONENT_SIGMA):
        for _ in range(5):
            p = 2
            e1 = {(i, j): Fraction(rng.randint(-2, 2))
                  for i in range(p) for j in range(i - 2, i + 3)}
            e2 = {(i, j + 1): v for (i, j), v in e1.items()}
            Xs = symmetrize(QuadElement(e1, period=p), rule)
            Ys = symmetrize(QuadElement(e2, period=p), rule)
            checks += 1
            if not is_fixed(bracket_a_blocks(Xs, Ys), rule):
                failures.append(f"bracket closure failed for {rule.kind}")
    return checks, failures


def _suite_tau_paths():
    checks, failures = 0, []
    rng = random.Random(27)
    for _ in range(4):
        A = _rand_coords(rng, size=2)
        checks += 1
        if tau_series(A, 6) != tau_series_schur(A, 6):
            failures.append("tau paths disagree")
        tau = tau_series(A, 6)
        checks += 1
        if free_energy(tau).exp() != tau:
            failures.append("log/exp roundtrip failed")
    return checks, failures


def _suite_puncture():
    checks, failures = 0, []
    res = check_puncture(TSeries.const(1, 4), PunctureData(2, {1, 3}, {1, 3}))
    checks += 1
    if res != TSeries({((1, 2),): Fraction(1, 4)}, res.weight_cut):
        failures.append("constant-series residual wrong")
    res = check_puncture(TSeries.variable(1, 3), PunctureData(10, {1}, set()))
    checks += 1
    if res != TSeries.const(-1, res.weight_cut):
        failures.append("delta-term residual wrong")
    rng = random.Random(28)
    data = PunctureData(3, {1, 2}, {1, 2})
    for _ in range(5):
        t1 = TSeries({((1, 1),): _rand_fraction(rng), ((2, 1),): _rand_fraction(rng)}, 5)
        t2 = TSeries({(): 1, ((3, 1),): _rand_fraction(rng)}, 5)
        a, b = rng.randint(-3, 3), rng.randint(-3, 3)
        lhs = check_puncture(t1.scale(a) + t2.scale(b), data)
        rhs = check_puncture(t1, data).scale(a) + check_puncture(t2, data).scale(b)
        checks += 1
        if lhs != rhs:
            failures.append("puncture operator is not linear")
    return checks, failures


SUITES = (
    ("car-relations", _suite_car),
    ("heisenberg", _suite_heisenberg),
    ("boson-schur", _suite_boson_schur),
    ("plucker-bogoliubov", _suite_plucker),
    ("two-point-kernel", _suite_two_point),
    ("npoint-formula-vs-oracle", _suite_npoint),
    ("rep-with-cocycle", _suite_rep_cocycle),
    ("loop-cocycle-residue", _suite_loop_cocycle),
    ("highest-weight", _suite_highest_weight),
    ("neutral-fermions", _suite_neutral),
    ("reduction-classify", _suite_classify),
    ("tau-dual-paths", _suite_tau_paths),
    ("puncture", _suite_puncture),
)


def run_selftest():
    """Run every suite; returns (all_ok, report_lines)."""
    lines = []
    all_ok = True
    total = 0
    for name, suite in SUITES:
        checks, failures = suite()
        total += checks
        if failures:
            all_ok = False
            lines.append(f"{name}: {checks} checks, FAIL ({len(failures)})")
            lines.extend(f"  - {msg}" for msg in failures[:5])
        else:
            lines.append(f"{name}: {checks} checks, ok")
    lines.append(f"selftest: {'PASS' if all_ok else 'FAIL'} "
                 f"({len(SUITES)} suites, {total} checks)")
    return all_ok, lines
