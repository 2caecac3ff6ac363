# Symbols of differential operators on forms, and how vector fields act on them.
#
# An operator on p-forms is stored as its full symbol: a polynomial in xi with
# x-dependent coefficients, paired with a p-vector <e_I, .>.  The Lie
# derivative of an operator can be computed in two unrelated ways; both are
# printed here.

from equivar import OpSymbol, PolyVectorField, FormField, apply, de_rham, dual_d, lie_op, lie_symbolic
from equivar.tensor import Poly

m = 3

# D(w) = x0 * d_1 w_2  on 1-forms
D = OpSymbol(m, 1, 1, {((0, 1, 0), (2,)): Poly.var(m, 0)})
print("D               =", D)

w = FormField(m, 1, {(2,): Poly(m, {(1, 2, 0): 1})})   # x0 x1^2 dx2
print("D(x0 x1^2 dx2)  =", apply(D, w))

# a quadratic field, X = x1^2 d_0
X = PolyVectorField.monomial(m, (0, 2, 0), 0)
print()
print("L_X D (operator route) =", lie_op(X, D))
print("L_X D (symbol formula) =", lie_symbolic(X, D))
print("routes agree:", lie_op(X, D) == lie_symbolic(X, D))

# the dual of d is precomposition with d: (d*D)(a) = D(da)
a = FormField(m, 0, {(): Poly(m, {(1, 1, 1): 1})})
print()
print("d*D             =", dual_d(D))
print("(d*D)(x0x1x2)   =", apply(dual_d(D), a), " vs D(d(x0x1x2)) =", apply(D, de_rham(a)))
