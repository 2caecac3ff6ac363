from fractions import Fraction
from itertools import permutations

import pytest
import sympy
from hypothesis import given, strategies as st

from equivar.symbols import (
    DegreeError,
    FormField,
    OpSymbol,
    PolyVectorField,
    TensorFieldSymbol,
    apply,
    bracket,
    de_rham,
    dual_d,
    extract_symbol,
    interior_field,
    lie_form,
    lie_op,
    lie_symbolic,
    lie_tensor,
    principal_symbol,
)
from equivar.tensor import Poly, sort_sign

from .strategies import fields, forms, symbols


def P(m, terms):
    return Poly(m, terms)


def x(m, i):
    return Poly.var(m, i)


def unit(m, i):
    return tuple(1 if j == i else 0 for j in range(m))


Z = lambda m: (0,) * m  # noqa: E731


# ---------------------------------------------------------------- sympy oracle

def _sym(poly, xs):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.prod([v ** k for v, k in zip(xs, e)])
                for e, c in poly.items()), sympy.Integer(0))


def _comp(w, I):
    """Antisymmetric full component of a FormField, as a sympy expression."""
    sign, key = sort_sign(I)
    if not sign:
        return sympy.Integer(0)
    return sign * _sym(w.component(key), XS[:w.m])


XS = sympy.symbols("x0:5")


def oracle_apply(D, w):
    xs = XS[:D.m]
    total = sympy.Integer(0)
    for (alpha, I), f in D.items():
        g = _comp(w, I)
        for i, a in enumerate(alpha):
            if a:
                g = sympy.diff(g, xs[i], a)
        total += _sym(f, xs) * g
    return sympy.expand(total)


def oracle_lie_form_component(X, w, I):
    """``(L_X w)_I = X^j d_j w_I + sum_b d_{I_b} X^j w_{I with slot b -> j}``."""
    xs = XS[:w.m]
    Xs = [_sym(c, xs) for c in X.comps]
    out = sum((Xs[j] * sympy.diff(_comp(w, I), xs[j]) for j in range(w.m)), sympy.Integer(0))
    for b, ib in enumerate(I):
        for j in range(w.m):
            J = I[:b] + (j,) + I[b + 1:]
            out += sympy.diff(Xs[j], xs[ib]) * _comp(w, J)
    return sympy.expand(out)


def as_sympy(poly, m):
    return sympy.expand(_sym(poly, XS[:m]))


# ---------------------------------------------------------------- apply

def test_apply_examples():
    m = 2
    D = OpSymbol.monomial(m, 1, Z(m), unit(m, 0), ())
    f = FormField(m, 0, {(): P(m, {(2, 0): 1})})
    assert apply(D, f) == P(m, {(1, 0): 2})
    D = OpSymbol.monomial(m, 0, Z(m), Z(m), (0,))
    w = FormField(m, 1, {(0,): x(m, 1)})
    assert apply(D, w) == x(m, 1)
    D = OpSymbol.monomial(m, 1, Z(m), unit(m, 0), (1,))
    w = FormField(m, 1, {(1,): x(m, 0)})
    assert apply(D, w) == Poly.const(m, 1)


def test_apply_shape_mismatch():
    with pytest.raises(ValueError):
        apply(OpSymbol.zero(2, 1, 1), FormField(2, 0, {(): 1}))


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: st.tuples(
    symbols(m, 2, p), forms(m, p, 3)))))
def test_apply_against_sympy(data):
    D, w = data
    assert as_sympy(apply(D, w), D.m) == oracle_apply(D, w)


# ---------------------------------------------------------------- forms

def test_lie_form_examples():
    m = 2
    d1 = PolyVectorField.monomial(m, Z(m), 0)
    w = FormField(m, 1, {(1,): x(m, 0)})
    assert lie_form(d1, w) == FormField(m, 1, {(1,): 1})
    X = PolyVectorField.monomial(m, unit(m, 0), 0)
    assert lie_form(X, FormField(m, 1, {(0,): 1})) == FormField(m, 1, {(0,): 1})
    assert not lie_form(d1, FormField(m, 1, {(1,): 1}))


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: st.tuples(
    fields(m, 2), forms(m, p, 2)))))
def test_lie_form_against_coordinate_formula(data):
    X, w = data
    L = lie_form(X, w)
    from equivar.tensor import increasing_tuples
    for I in increasing_tuples(w.m, w.p):
        assert as_sympy(L.component(I), w.m) == oracle_lie_form_component(X, w, I)


def test_de_rham_examples():
    m = 2
    f = FormField(m, 0, {(): x(m, 0)})
    assert de_rham(f) == FormField(m, 1, {(0,): 1})
    w = FormField(m, 1, {(0,): x(m, 1)})
    assert de_rham(w) == FormField(m, 2, {(0, 1): -1})
    top = FormField(m, 2, {(0, 1): x(m, 0)})
    assert not de_rham(top)


@given(st.integers(1, 4).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: forms(m, p, 3))))
def test_d_squared_is_zero(w):
    assert not de_rham(de_rham(w))


@given(st.integers(1, 3).flatmap(lambda m: st.integers(1, m).flatmap(lambda p: st.tuples(fields(m), forms(m, p)))))
def test_interior_field_matches_tensor_interior(data):
    X, w = data
    # i_X is C-linear in X: compare with the sum over components
    total = None
    for i in range(X.m):
        Xi = PolyVectorField(X.m, {i: X.comps[i]})
        part = interior_field(Xi, w)
        total = part if total is None else total + part
    assert total == interior_field(X, w)


def test_interior_field_of_function_rejected():
    with pytest.raises(ValueError):
        interior_field(PolyVectorField.monomial(2, (0, 0), 0), FormField(2, 0, {(): 1}))


# ---------------------------------------------------------------- Lie derivative of operators

def test_lie_examples_both_routes():
    m = 2
    d1 = PolyVectorField.monomial(m, Z(m), 0)
    x1d1 = PolyVectorField.monomial(m, unit(m, 0), 0)
    for lie in (lie_op, lie_symbolic):
        D = OpSymbol(m, 2, 1, {(unit(m, 1), (0,)): 3, ((1, 1), (1,)): -2})
        assert not lie(d1, D)
        D = OpSymbol.monomial(m, 1, Z(m), unit(m, 0), ())
        assert lie(x1d1, D) == OpSymbol.monomial(m, 1, Z(m), unit(m, 0), (), -1)
        D = OpSymbol.monomial(m, 0, Z(m), Z(m), (0,))
        assert not lie(d1, D)


def test_lie_linear_field_is_gl_action():
    """For X = x^a d_b the result on a constant symbol is the natural action
    of the elementary matrix: here xi_0 xi_1 under x^0 d_1."""
    m = 2
    X = PolyVectorField.monomial(m, unit(m, 0), 1)
    D = OpSymbol.monomial(m, 2, Z(m), (1, 1), ())
    assert lie_symbolic(X, D) == lie_op(X, D)
    assert lie_symbolic(X, D) == OpSymbol.monomial(m, 2, Z(m), (0, 2), (), -1)


def test_lie_top_form_substitution_term():
    m = 2
    X = PolyVectorField.monomial(m, (2, 0), 0)
    D = OpSymbol.monomial(m, 0, Z(m), Z(m), (0, 1))
    assert not lie_symbolic(PolyVectorField.monomial(m, (2, 0), 1), D)
    assert lie_symbolic(X, D) == lie_op(X, D)
    # minus the divergence: -2 x^0 <e_01, .>
    assert lie_symbolic(X, D) == OpSymbol.monomial(m, 0, (1, 0), Z(m), (0, 1), -2)


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: st.tuples(
    fields(m, 2), symbols(m, 2, p), forms(m, p, 3)))))
def test_leibniz_compatibility(data):
    X, D, w = data
    lhs = apply(lie_symbolic(X, D), w)
    rhs = X(apply(D, w)) - apply(D, lie_form(X, w))
    assert lhs == rhs


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: st.tuples(
    fields(m, 3), symbols(m, 3, p)))))
def test_lie_routes_agree(data):
    X, D = data
    assert lie_op(X, D) == lie_symbolic(X, D)


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: st.tuples(
    fields(m, 2), fields(m, 2), symbols(m, 1, p)))))
def test_action_property(data):
    X, Y, D = data
    assert lie_symbolic(bracket(X, Y), D) == lie_symbolic(X, lie_symbolic(Y, D)) - lie_symbolic(Y, lie_symbolic(X, D))


# ---------------------------------------------------------------- extraction

def test_extract_symbol_rejects_hidden_order():
    m = 1

    def second(w):
        return w.component(()).diff(0, 2)

    with pytest.raises(DegreeError):
        extract_symbol(second, m, 0, 1)
    assert extract_symbol(second, m, 0, 1, truncate=True) == OpSymbol.zero(m, 1, 0)
    assert extract_symbol(second, m, 0, 2) == OpSymbol.monomial(m, 2, (0,), (2,), ())


def test_symbol_order_enforced():
    with pytest.raises(DegreeError):
        OpSymbol(2, 1, 0, {((1, 1), ()): 1})
    with pytest.raises(DegreeError):
        OpSymbol.monomial(2, 2, (0, 0), (2, 0), ()).with_order(1)


def test_symbol_canonical_sign():
    a = OpSymbol(3, 0, 2, {((0, 0, 0), (1, 0)): 1})
    b = OpSymbol(3, 0, 2, {((0, 0, 0), (0, 1)): -1})
    assert a == b
    assert not OpSymbol(3, 0, 2, {((0, 0, 0), (1, 1)): 1})


# ---------------------------------------------------------------- principal symbol

def test_principal_symbol_examples():
    m = 2
    D = OpSymbol(m, 1, 0, {(unit(m, 0), ()): 1, (Z(m), ()): 1})
    assert principal_symbol(D) == OpSymbol(m, 1, 0, {(unit(m, 0), ()): 1})
    D = OpSymbol(m, 2, 0, {((2, 0), ()): 1, (unit(m, 1), ()): 1})
    assert principal_symbol(D) == OpSymbol(m, 2, 0, {((2, 0), ()): 1})
    with pytest.raises(ValueError):
        principal_symbol(OpSymbol.zero(m, 1, 0))


def test_tensor_symbol_homogeneity_enforced():
    with pytest.raises(ValueError):
        TensorFieldSymbol(2, 1, 0, {((1, 0), ()): 1, ((0, 0), ()): 1})


def test_lie_tensor_examples():
    m = 2
    d1 = PolyVectorField.monomial(m, Z(m), 0)
    sigma = TensorFieldSymbol(m, 1, 0, {(unit(m, 0), ()): 1})
    assert not lie_tensor(d1, sigma)
    x1d1 = PolyVectorField.monomial(m, unit(m, 0), 0)
    assert lie_tensor(x1d1, sigma) == TensorFieldSymbol(m, 1, 0, {(unit(m, 0), ()): -1})


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: st.tuples(
    fields(m, 3), symbols(m, 2, p)))))
def test_principal_symbol_equivariance(data):
    X, D = data
    top = D.order()
    L = lie_op(X, D)
    if not D or L.order() != top:
        return
    assert principal_symbol(L) == lie_tensor(X, principal_symbol(D))


# ---------------------------------------------------------------- d*

def test_dual_d_examples():
    m = 2
    D = OpSymbol.monomial(m, 0, Z(m), Z(m), (0,))
    assert dual_d(D) == OpSymbol.monomial(m, 1, Z(m), unit(m, 0), ())
    assert not dual_d(OpSymbol.zero(m, 0, 1))
    D = OpSymbol.monomial(m, 0, Z(m), Z(m), (0, 1))
    expected = OpSymbol(m, 1, 1, {(unit(m, 0), (1,)): 1, (unit(m, 1), (0,)): -1})
    assert dual_d(D) == expected
    with pytest.raises(ValueError):
        dual_d(OpSymbol.zero(m, 0, 0))


@given(st.integers(1, 3).flatmap(lambda m: st.integers(1, m).flatmap(lambda p: st.tuples(
    symbols(m, 1, p), forms(m, p - 1, 3)))))
def test_dual_d_is_precomposition(data):
    D, a = data
    assert apply(dual_d(D), a) == apply(D, de_rham(a))


@given(st.integers(2, 3).flatmap(lambda m: st.integers(2, m).flatmap(lambda p: symbols(m, 1, p))))
def test_dual_d_squared_is_zero(D):
    assert not dual_d(dual_d(D))


@given(st.integers(1, 3).flatmap(lambda m: st.integers(1, m).flatmap(lambda p: st.tuples(
    fields(m, 2), symbols(m, 1, p)))))
def test_dual_d_commutes_with_lie(data):
    X, D = data
    assert lie_op(X, dual_d(D)) == dual_d(lie_op(X, D))


# ---------------------------------------------------------------- serialization

def test_symbol_json_shape():
    D = OpSymbol(2, 1, 1, {((1, 0), (1,)): Poly(2, {(0, 1): Fraction(-3, 2)})})
    obj = D.to_json()
    assert obj == {"m": 2, "k": 1, "p": 1,
                   "terms": [{"mu": [0, 1], "alpha": [1, 0], "I": [1], "coeff": "-3/2"}]}
    assert OpSymbol.from_json(obj) == D


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: symbols(m, 2, p))))
def test_symbol_json_roundtrip(D):
    assert OpSymbol.from_json(D.to_json()) == D


@given(st.integers(1, 3).flatmap(lambda m: st.integers(0, m).flatmap(lambda p: forms(m, p))))
def test_form_json_roundtrip(w):
    assert FormField.from_json(w.to_json()) == w


def test_form_sign_canonicalization():
    assert FormField(3, 2, {(2, 0): 1}) == FormField(3, 2, {(0, 2): -1})
    for perm in permutations((0, 1, 2)):
        sign, _ = sort_sign(perm)
        assert FormField(3, 3, {perm: 1}) == FormField(3, 3, {(0, 1, 2): sign})
