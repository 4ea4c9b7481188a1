"""Shared helpers for the test suite: seeded random data generators."""

import random
from fractions import Fraction

import pytest

from kpfermion import AffineCoords, BandMatrix, LoopElement
from kpfermion.fock import BasisState, QuadElement
from kpfermion.partitions import partitions_up_to


def rand_fraction(rng, top=9):
    return Fraction(rng.randint(-top, top), rng.randint(1, top))


def rand_coords(rng, size=3, top=9, density=0.7):
    entries = {}
    for n in range(size):
        for m in range(size):
            if rng.random() < density:
                entries[(n, m)] = rand_fraction(rng, top)
    return AffineCoords(entries)


def rand_banded_matrix(rng, window=4, band=3, top=3, density=0.4):
    entries = {}
    for i in range(-window, window + 1):
        for j in range(max(i - band, -window), min(i + band, window) + 1):
            if rng.random() < density:
                entries[(i, j)] = Fraction(rng.randint(-top, top))
    return BandMatrix(entries)


def rand_periodic_quad(rng, period, band=2, top=3, density=0.5):
    entries = {}
    for i in range(period):
        for j in range(i - band, i + band + 1):
            if rng.random() < density:
                entries[(i, j)] = Fraction(rng.randint(-top, top))
    return QuadElement(entries, period=period)


def rand_loop(rng, size, max_deg=3, top=4, density=0.4):
    terms = {}
    for k in range(-max_deg, max_deg + 1):
        if rng.random() < density:
            terms[k] = [[Fraction(rng.randint(-top, top)) for _ in range(size)]
                        for _ in range(size)]
    return LoopElement(size, terms)


def basis_states(max_energy, charges=(-1, 0, 1)):
    return [BasisState(c, lam) for c in charges
            for lam in partitions_up_to(max_energy)]


@pytest.fixture
def rng():
    return random.Random(20240816)
