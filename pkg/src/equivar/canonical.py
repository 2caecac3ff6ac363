"""Explicitly known equivariant operators.

``identity``, ``i_zero`` (``D -> D(1) id``), the dual ``d*`` of the de Rham
differential, and the homotopy operator ``K`` restricted to first-order
operators on p-forms and to second-order operators on functions, both built
from a global decomposition of the argument.
"""

from dataclasses import dataclass
from fractions import Fraction

from .symbols import (
    DegreeError,
    OpSymbol,
    PolyVectorField,
    apply,
    de_rham,
    dual_d,
    extract_symbol,
    interior_field,
    lie_form,
)
from .tensor import Poly, zero


def identity(D):
    return D


def i_zero(D):
    """Multiplication by the function ``D(1)``."""
    if D.p != 0:
        raise ValueError("I0 is only defined on operators acting on functions")
    z = zero(D.m)
    return OpSymbol._raw(D.m, D.k, 0, {key: f for key, f in D.items() if key[0] == z})


def _zero_order(m, p, comps):
    return OpSymbol(m, 0, p, {(zero(m), I): f for I, f in comps.items()})


@dataclass(frozen=True)
class DecompositionD1p:
    """``D' = sum <Lambda_i, L_{X_i} .> + <Omega, .>``.

    Each ``Lambda_i`` and ``Omega`` is a p-vector field with polynomial
    coefficients, stored as a zero-order OpSymbol (``w -> <Lambda, w>``).
    """

    m: int
    p: int
    pairs: tuple = ()
    remainder: OpSymbol = None

    def reconstruct(self):
        m, p = self.m, self.p
        rem = self.remainder if self.remainder is not None else OpSymbol.zero(m, 0, p)

        def op(w):
            total = apply(rem, w)
            for lam, X in self.pairs:
                total = total + apply(lam, lie_form(X, w))
            return total

        return extract_symbol(op, m, p, 1)


@dataclass(frozen=True)
class DecompositionD20:
    """``D'' = sum Lambda L_X o L_Y + sum Omega L_Z + Theta`` on functions."""

    m: int
    triples: tuple = ()
    pairs: tuple = ()
    remainder: Poly = None

    def reconstruct(self):
        m = self.m
        theta = self.remainder if self.remainder is not None else Poly.const(m, 0)

        def op(w):
            f = w.component(())
            total = theta * f
            for lam, X, Y in self.triples:
                total = total + lam * X(Y(f))
            for om, Z in self.pairs:
                total = total + om * Z(f)
            return total

        return extract_symbol(op, m, 0, 2)


def decompose_D1p(D):
    """Canonical decomposition with the constant fields ``d_i``."""
    if D.order() > 1:
        raise DegreeError("decompose_D1p expects an operator of order <= 1")
    m, p = D.m, D.p
    lam = {i: {} for i in range(m)}
    rem = {}
    for (alpha, I), f in D.items():
        if sum(alpha) == 0:
            rem[I] = f
        else:
            lam[alpha.index(1)][I] = f
    pairs = tuple(
        (_zero_order(m, p, comps), PolyVectorField.monomial(m, zero(m), i))
        for i, comps in lam.items()
        if comps
    )
    return DecompositionD1p(m, p, pairs, _zero_order(m, p, rem))


def decompose_D20(D):
    """Canonical decomposition ``sum A^ij d_i d_j + sum B^i d_i + C`` with
    ``A`` symmetric."""
    if D.p != 0:
        raise ValueError("decompose_D20 expects an operator on functions")
    if D.order() > 2:
        raise DegreeError("decompose_D20 expects an operator of order <= 2")
    m = D.m
    triples, pairs = [], []
    theta = Poly.const(m, 0)
    for (alpha, _), f in sorted(D.items()):
        n = sum(alpha)
        if n == 0:
            theta = f
        elif n == 1:
            pairs.append((f, PolyVectorField.monomial(m, zero(m), alpha.index(1))))
        else:
            idx = [i for i, a in enumerate(alpha) for _ in range(a)]
            i, j = idx
            if i == j:
                triples.append((f, _coord(m, i), _coord(m, i)))
            else:
                half = f * Fraction(1, 2)
                triples.append((half, _coord(m, i), _coord(m, j)))
                triples.append((half, _coord(m, j), _coord(m, i)))
    return DecompositionD20(m, tuple(triples), tuple(pairs), theta)


def _coord(m, i):
    return PolyVectorField.monomial(m, zero(m), i)


def K_from_decomposition(dec):
    """``(1/(1+p)) sum <Lambda, i_X .>`` acting on (p+1)-forms."""
    m, p = dec.m, dec.p
    if p + 1 > m:
        raise ValueError(f"K on first-order operators needs p + 1 <= m (p={p}, m={m})")
    scale = Fraction(1, 1 + p)

    def op(w):
        total = Poly.const(m, 0)
        for lam, X in dec.pairs:
            total = total + apply(lam, interior_field(X, w))
        return total * scale

    return extract_symbol(op, m, p + 1, 0)


def K_D1p(D):
    if D.p + 1 > D.m:
        raise ValueError(f"K on first-order operators needs p + 1 <= m (p={D.p}, m={D.m})")
    return K_from_decomposition(decompose_D1p(D))


def K20_from_decomposition(dec):
    """``1/2 sum Lambda (i_X L_Y + L_X i_Y) + sum Omega i_Z`` on 1-forms."""
    m = dec.m
    half = Fraction(1, 2)

    def op(w):
        total = Poly.const(m, 0)
        for lam, X, Y in dec.triples:
            a = interior_field(X, lie_form(Y, w)).component(())
            b = X(interior_field(Y, w).component(()))
            total = total + lam * (a + b) * half
        for om, Z in dec.pairs:
            total = total + om * interior_field(Z, w).component(())
        return total

    return extract_symbol(op, m, 1, 1)


def K_D20(D):
    if D.m < 1:
        raise ValueError("K on second-order operators needs m >= 1")
    return K20_from_decomposition(decompose_D20(D))


def dstar_K(D):
    return dual_d(K_D1p(D))


def dstar_K_closed_form(dec):
    """``(1/(1+p)) sum <Lambda, i_X d .>`` straight from a decomposition."""
    m, p = dec.m, dec.p
    if p + 1 > m:
        raise ValueError(f"d*K needs p + 1 <= m (p={p}, m={m})")
    scale = Fraction(1, 1 + p)

    def op(w):
        dw = de_rham(w)
        total = Poly.const(m, 0)
        for lam, X in dec.pairs:
            total = total + apply(lam, interior_field(X, dw))
        return total * scale

    return extract_symbol(op, m, p, 1)


def null_pair_decomposition(D, lam, X):
    """Another decomposition of ``D``: the canonical one of
    ``D - <lam, L_X .>`` followed by the extra pair ``(lam, X)``."""
    extra = DecompositionD1p(D.m, D.p, ((lam, X),), None).reconstruct()
    base = decompose_D1p(D - extra)
    return DecompositionD1p(D.m, D.p, base.pairs + ((lam, X),), base.remainder)


def null_triple_decomposition(D, lam, X, Y):
    """Another decomposition of a second-order ``D`` on functions: the
    canonical one of ``D - lam L_X L_Y`` plus the extra triple."""
    extra = DecompositionD20(D.m, ((lam, X, Y),), (), None).reconstruct()
    base = decompose_D20(D - extra)
    return DecompositionD20(D.m, base.triples + ((lam, X, Y),), base.pairs, base.remainder)


OPERATORS = {
    "id": identity,
    "i0": i_zero,
    "dstar": dual_d,
    "K1p": K_D1p,
    "K20": K_D20,
    "dstarK": dstar_K,
}


def operator_shape(name, m, p, k):
    """Source and target ``(p, k)`` of a named operator, validated against m."""
    if name not in OPERATORS:
        raise KeyError(name)
    if p < 0 or p > m:
        raise ValueError(f"p={p} out of range for m={m}")
    if name == "id":
        return (p, k), (p, k)
    if name == "i0":
        if p != 0:
            raise ValueError("i0 acts on operators on functions (p = 0)")
        return (0, k), (0, k)
    if name == "dstar":
        if p == 0:
            raise ValueError("dstar needs p >= 1")
        return (p, k), (p - 1, k + 1)
    if name == "K1p":
        if p + 1 > m:
            raise ValueError(f"K1p needs p + 1 <= m (p={p}, m={m})")
        return (p, 1), (p + 1, 0)
    if name == "K20":
        if p != 0:
            raise ValueError("K20 acts on operators on functions (p = 0)")
        return (0, 2), (1, 1)
    if p + 1 > m:
        raise ValueError(f"dstarK needs p + 1 <= m (p={p}, m={m})")
    return (p, 1), (p, 1)


__all__ = [
    "DecompositionD1p",
    "DecompositionD20",
    "OPERATORS",
    "K20_from_decomposition",
    "K_D1p",
    "K_D20",
    "K_from_decomposition",
    "decompose_D1p",
    "decompose_D20",
    "dstar_K",
    "dstar_K_closed_form",
    "i_zero",
    "identity",
    "null_pair_decomposition",
    "null_triple_decomposition",
    "operator_shape",
]
