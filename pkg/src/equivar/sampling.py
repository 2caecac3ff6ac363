"""Seeded random symbols, vector fields and forms for property checks."""

import random
from fractions import Fraction

from .symbols import FormField, OpSymbol, PolyVectorField
from .tensor import Poly, increasing_tuples, monomials_upto


def rng_for(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def random_coeff(rng, lo=-3, hi=3, den=(1, 1, 2, 3)):
    while True:
        c = Fraction(rng.randint(lo, hi), rng.choice(den))
        if c:
            return c


def random_poly(rng, m, degree, terms=3):
    monos = monomials_upto(m, degree)
    c = {}
    for _ in range(terms):
        c[rng.choice(monos)] = random_coeff(rng)
    return Poly(m, c)


def random_symbol(rng, m, k, p, x_degree=2, terms=4, exact_order=False):
    """Random symbol of order <= k (exactly k with ``exact_order``)."""
    rng = rng_for(rng)
    alphas = monomials_upto(m, k)
    top = [a for a in alphas if sum(a) == k]
    Is = increasing_tuples(m, p)
    while True:
        c = {}
        for n in range(terms):
            alpha = rng.choice(top if exact_order and n == 0 else alphas)
            c[(alpha, rng.choice(Is))] = random_poly(rng, m, x_degree, rng.randint(1, 3))
        D = OpSymbol(m, k, p, c)
        if D and (not exact_order or D.order() == k):
            return D


def random_field(rng, m, degree, terms=3):
    rng = rng_for(rng)
    while True:
        comps = [Poly.const(m, 0) for _ in range(m)]
        for _ in range(terms):
            i = rng.randrange(m)
            comps[i] = comps[i] + random_poly(rng, m, degree, 1)
        X = PolyVectorField(m, comps)
        if X:
            return X


def random_form(rng, m, p, degree=2, terms=3):
    rng = rng_for(rng)
    Is = increasing_tuples(m, p)
    return FormField(m, p, {rng.choice(Is): random_poly(rng, m, degree, 2) for _ in range(terms)})


def random_zero_order(rng, m, p, x_degree=1, terms=2):
    """Random p-vector field, stored as a zero-order symbol."""
    return random_symbol(rng, m, 0, p, x_degree, terms)
