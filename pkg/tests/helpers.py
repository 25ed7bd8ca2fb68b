"""Shared strategies and independent oracles for the test suite."""

import itertools
import random
from fractions import Fraction

from hypothesis import strategies as st

from derivlab.corealg import Polynomial, ring_of
from derivlab.derivcalc import Derivation
from derivlab.opalg import LinearOperator

R3 = ring_of(["x", "y", "z"])

coeffs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))
nonzero_coeffs = coeffs.filter(bool)


def monomials(nvars, max_exp=3):
    return st.lists(st.integers(0, max_exp), min_size=nvars, max_size=nvars).map(
        lambda es: tuple((i, e) for i, e in enumerate(es) if e))


def polys(ring, max_exp=3, max_terms=4, variables=None):
    """Polynomials in ``ring`` (optionally only in the listed variable indices)."""
    n = ring.nvars

    def restrict(m):
        if variables is None:
            return m
        return tuple((i, e) for i, e in m if i in variables)

    return st.dictionaries(monomials(n, max_exp).map(restrict), coeffs, max_size=max_terms).map(
        lambda d: Polynomial(ring, d))


@st.composite
def triangular_derivations(draw, ring=R3, max_exp=2):
    """Derivation with ``D(x_i)`` a polynomial in ``x_0..x_{i-1}``."""
    images = {}
    for i in range(ring.nvars):
        images[i] = draw(polys(ring, max_exp, 3, variables=set(range(i))))
    return Derivation(ring, images)


def rand_poly(rng: random.Random, ring, max_deg=3, terms=3, variables=None):
    variables = list(range(ring.nvars)) if variables is None else list(variables)
    out = {}
    for _ in range(terms):
        mono = {}
        budget = rng.randint(0, max_deg)
        for _ in range(budget):
            if variables:
                v = rng.choice(variables)
                mono[v] = mono.get(v, 0) + 1
        out[tuple(sorted(mono.items()))] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
    return Polynomial(ring, out)


def rand_triangular(rng: random.Random, ring=R3, max_deg=2):
    return Derivation(ring, {i: rand_poly(rng, ring, max_deg, 2, range(i)) for i in range(ring.nvars)})


def brute_degree(actors, act, x, is_zero, bound):
    """Degree by exhaustive enumeration of all words, no pruning or deduplication.

    Returns ``None`` if some word of length ``bound`` survives.
    """
    if is_zero(x):
        return float("-inf")
    best = 0
    for n in range(1, bound + 1):
        alive = False
        for word in itertools.product(range(len(actors)), repeat=n):
            v = x
            for i in word:
                v = act(actors[i], v)
                if is_zero(v):
                    break
            if not is_zero(v):
                alive = True
                break
        if not alive:
            return best
        best = n
    return None


def rand_strict_upper(rng: random.Random, dim, density=0.6, lo=-2, hi=2):
    entries = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            if rng.random() < density:
                c = rng.randint(lo, hi)
                if c:
                    entries[(i, j)] = Fraction(c)
    return LinearOperator(dim, entries)


def rand_matrix(rng: random.Random, dim, density=0.5, lo=-2, hi=2):
    entries = {}
    for i in range(dim):
        for j in range(dim):
            if rng.random() < density:
                c = rng.randint(lo, hi)
                if c:
                    entries[(i, j)] = Fraction(c)
    return LinearOperator(dim, entries)
