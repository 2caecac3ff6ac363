"""Polynomial-coefficient differential operators from p-forms to functions.

An operator ``D`` of order ``<= k`` on p-forms over R^m is stored through its
symbol

    D(x; xi; w) = sum  c_{mu,alpha,I} x^mu xi^alpha <e_I, w>

where ``xi^alpha`` stands for the derivative ``d^alpha`` acting on the
argument.  Internally the symbol is a map ``(alpha, I) -> Poly`` in ``x``.

Two independent implementations of the Lie derivative are provided:
``lie_op`` works on the operator level (commutator with the Lie derivative of
forms, then re-extraction of the symbol from polynomial test forms) and
``lie_symbolic`` evaluates the three-term symbol formula directly.
"""

from fractions import Fraction
from functools import lru_cache

from .tensor import (
    AltTensor,
    Poly,
    alt_substitute,
    basis_vector,
    falling,
    increasing_tuples,
    mbinom,
    mfactorial,
    monomials_upto,
    sort_sign,
    sub_indices,
    zero,
)


class DegreeError(ValueError):
    """An operation would exceed a declared order bound."""


def _accumulate(target, key, val):
    if not val:
        return
    cur = target.get(key)
    if cur is None:
        target[key] = val
        return
    cur = cur + val
    if cur:
        target[key] = cur
    else:
        del target[key]


def _fmt(c):
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def _parse(s):
    return Fraction(s)


# ---------------------------------------------------------------- fields

PolyFunction = Poly


def poly_monomial(mu, c=1):
    return Poly.monomial(tuple(mu), c)


def dmulti(f, alpha):
    """``d^alpha f`` for a polynomial function."""
    out = {}
    for e, v in f.items():
        fct = falling(e, alpha)
        if fct:
            e2 = tuple(x - y for x, y in zip(e, alpha))
            out[e2] = out.get(e2, 0) + v * fct
    return Poly._raw(f.n, {e: v for e, v in out.items() if v})


class FormField:
    """Differential p-form with polynomial coefficients, ``{I: Poly}``."""

    __slots__ = ("m", "p", "_c")

    def __init__(self, m, p, components=None):
        self.m = m
        self.p = p
        c = {}
        for I, f in (components or {}).items():
            I = tuple(I)
            if len(I) != p or any(i < 0 or i >= m for i in I):
                raise ValueError(f"bad form index {I} for m={m}, p={p}")
            sign, key = sort_sign(I)
            if not sign:
                continue
            if not isinstance(f, Poly):
                f = Poly.const(m, f)
            _accumulate(c, key, f if sign > 0 else -f)
        self._c = c

    @classmethod
    def _raw(cls, m, p, c):
        obj = cls.__new__(cls)
        obj.m, obj.p, obj._c = m, p, c
        return obj

    @classmethod
    def monomial(cls, m, mu, I, c=1):
        return cls(m, len(I), {tuple(I): Poly.monomial(tuple(mu), c)})

    def component(self, I):
        sign, key = sort_sign(I)
        if not sign or key not in self._c:
            return Poly.const(self.m, 0)
        return self._c[key] if sign > 0 else -self._c[key]

    def items(self):
        return self._c.items()

    def terms(self):
        for I, f in sorted(self._c.items()):
            for mu, c in sorted(f.items()):
                yield mu, I, c

    def __bool__(self):
        return bool(self._c)

    def __add__(self, other):
        if (other.m, other.p) != (self.m, self.p):
            raise ValueError("adding forms of different shape")
        c = dict(self._c)
        for I, f in other._c.items():
            _accumulate(c, I, f)
        return FormField._raw(self.m, self.p, c)

    def __neg__(self):
        return FormField._raw(self.m, self.p, {I: -f for I, f in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        """Multiplication by a scalar or a polynomial function."""
        c = {}
        for I, f in self._c.items():
            _accumulate(c, I, f * s)
        return FormField._raw(self.m, self.p, c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, FormField):
            return NotImplemented
        return (self.m, self.p, self._c) == (other.m, other.p, other._c)

    def __repr__(self):
        return f"FormField(m={self.m}, p={self.p}, {dict(sorted(self._c.items()))})"

    def to_json(self):
        return {
            "m": self.m,
            "p": self.p,
            "terms": [
                {"mu": list(mu), "I": list(I), "coeff": _fmt(c)}
                for mu, I, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, obj):
        m, p = obj["m"], obj["p"]
        comps = {}
        for t in obj["terms"]:
            I = tuple(t["I"])
            comps[I] = comps.get(I, Poly.const(m, 0)) + Poly.monomial(tuple(t["mu"]), _parse(t["coeff"]))
        return cls(m, p, comps)


class PolyVectorField:
    """Vector field ``sum_i X^i d_i`` with polynomial components."""

    __slots__ = ("m", "comps")

    def __init__(self, m, comps=None):
        self.m = m
        if comps is None:
            comps = {}
        if not isinstance(comps, dict):
            comps = dict(enumerate(comps))
        out = []
        for i in range(m):
            f = comps.get(i, 0)
            if not isinstance(f, Poly):
                f = Poly.const(m, f)
            out.append(f)
        extra = set(comps) - set(range(m))
        if extra:
            raise ValueError(f"component index out of range: {sorted(extra)}")
        self.comps = tuple(out)

    @classmethod
    def monomial(cls, m, mu, i, c=1):
        """``c x^mu d_i``."""
        return cls(m, {i: Poly.monomial(tuple(mu), c)})

    def degree(self):
        return max((f.degree() for f in self.comps), default=-1)

    def __call__(self, f):
        """Derivative of a polynomial function along the field."""
        out = Poly._raw(self.m, {})
        for i, Xi in enumerate(self.comps):
            if Xi:
                out = out + Xi * f.diff(i)
        return out

    def __add__(self, other):
        return PolyVectorField(self.m, [a + b for a, b in zip(self.comps, other.comps)])

    def __neg__(self):
        return PolyVectorField(self.m, [-a for a in self.comps])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        return PolyVectorField(self.m, [a * s for a in self.comps])

    __rmul__ = __mul__

    def __bool__(self):
        return any(self.comps)

    def __eq__(self, other):
        if not isinstance(other, PolyVectorField):
            return NotImplemented
        return self.m == other.m and self.comps == other.comps

    def __hash__(self):
        return hash((self.m, self.comps))

    def __repr__(self):
        return f"PolyVectorField(m={self.m}, {list(self.comps)})"


def bracket(X, Y):
    """Lie bracket ``[X, Y]``."""
    return PolyVectorField(X.m, [X(Y.comps[i]) - Y(X.comps[i]) for i in range(X.m)])


# ---------------------------------------------------------------- symbols

class OpSymbol:
    """Symbol of a differential operator of order ``<= k`` on p-forms."""

    __slots__ = ("m", "k", "p", "_c")

    def __init__(self, m, k, p, coeffs=None):
        self.m, self.k, self.p = m, k, p
        c = {}
        for (alpha, I), f in (coeffs or {}).items():
            alpha, I = tuple(alpha), tuple(I)
            if len(alpha) != m or len(I) != p or any(i < 0 or i >= m for i in I):
                raise ValueError(f"bad symbol key {(alpha, I)} for m={m}, p={p}")
            sign, key = sort_sign(I)
            if not sign:
                continue
            if not isinstance(f, Poly):
                f = Poly.const(m, f)
            if f and sum(alpha) > k:
                raise DegreeError(f"xi-degree {sum(alpha)} exceeds order bound {k}")
            _accumulate(c, (alpha, key), f if sign > 0 else -f)
        self._c = c

    @classmethod
    def _raw(cls, m, k, p, c):
        obj = cls.__new__(cls)
        obj.m, obj.k, obj.p, obj._c = m, k, p, c
        return obj

    @classmethod
    def monomial(cls, m, k, mu, alpha, I, c=1):
        """``c x^mu xi^alpha <e_I, .>``."""
        return cls(m, k, len(I), {(tuple(alpha), tuple(I)): Poly.monomial(tuple(mu), c)})

    @classmethod
    def zero(cls, m, k, p):
        return cls._raw(m, k, p, {})

    def items(self):
        return self._c.items()

    def coeff(self, alpha, I):
        sign, key = sort_sign(I)
        f = self._c.get((tuple(alpha), key)) if sign else None
        if f is None:
            return Poly.const(self.m, 0)
        return f if sign > 0 else -f

    def terms(self):
        """Yield ``(mu, alpha, I, c)`` in canonical order."""
        for (alpha, I), f in sorted(self._c.items(), key=lambda kv: (sum(kv[0][0]), kv[0][0], kv[0][1])):
            for mu, c in sorted(f.items(), key=lambda kv: (sum(kv[0]), kv[0])):
                yield mu, alpha, I, c

    def order(self):
        """Actual order (largest xi-degree present), -1 for the zero symbol."""
        return max((sum(a) for a, _ in self._c), default=-1)

    def x_degree(self):
        return max((f.degree() for f in self._c.values()), default=-1)

    def with_order(self, k):
        if self.order() > k:
            raise DegreeError(f"symbol of order {self.order()} does not fit order bound {k}")
        return OpSymbol._raw(self.m, k, self.p, dict(self._c))

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return sum(len(f) for f in self._c.values())

    def _compatible(self, other):
        if (other.m, other.p) != (self.m, self.p):
            raise ValueError("symbols of different shape")

    def __add__(self, other):
        self._compatible(other)
        c = dict(self._c)
        for key, f in other._c.items():
            _accumulate(c, key, f)
        return OpSymbol._raw(self.m, max(self.k, other.k), self.p, c)

    def __neg__(self):
        return OpSymbol._raw(self.m, self.k, self.p, {key: -f for key, f in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        """Scalar or left multiplication by a polynomial function."""
        c = {}
        for key, f in self._c.items():
            _accumulate(c, key, f * s)
        return OpSymbol._raw(self.m, self.k, self.p, c)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, OpSymbol):
            return NotImplemented
        return (self.m, self.p, self._c) == (other.m, other.p, other._c)

    def __hash__(self):
        return hash((self.m, self.p, frozenset((key, hash(f)) for key, f in self._c.items())))

    def __repr__(self):
        body = " + ".join(
            f"{c}*x^{list(mu)}*xi^{list(alpha)}<e{list(I)}>" for mu, alpha, I, c in self.terms()
        )
        return f"{type(self).__name__}(m={self.m}, k={self.k}, p={self.p}, {body or '0'})"

    def to_json(self):
        return {
            "m": self.m,
            "k": self.k,
            "p": self.p,
            "terms": [
                {"mu": list(mu), "alpha": list(alpha), "I": list(I), "coeff": _fmt(c)}
                for mu, alpha, I, c in self.terms()
            ],
        }

    @classmethod
    def from_json(cls, obj):
        m = obj["m"]
        coeffs = {}
        for t in obj["terms"]:
            key = (tuple(t["alpha"]), tuple(t["I"]))
            mono = Poly.monomial(tuple(t["mu"]), _parse(t["coeff"]))
            coeffs[key] = coeffs.get(key, Poly.const(m, 0)) + mono
        return cls(m, obj["k"], obj["p"], coeffs)


class TensorFieldSymbol(OpSymbol):
    """Symbol homogeneous of a single xi-degree (a contravariant tensor field
    in the symmetric power times the p-th exterior power)."""

    __slots__ = ()

    def __init__(self, m, k, p, coeffs=None):
        super().__init__(m, k, p, coeffs)
        degrees = {sum(a) for a, _ in self._c}
        if len(degrees) > 1 or (degrees and degrees != {k}):
            raise ValueError(f"tensor field symbol must be homogeneous of degree {k}")


# ---------------------------------------------------------------- action on forms

def apply(D, w):
    """Evaluate the operator on a form field."""
    if D.m != w.m or D.p != w.p:
        raise ValueError(f"operator on {D.p}-forms applied to a {w.p}-form (m={D.m}/{w.m})")
    out = Poly._raw(D.m, {})
    for (alpha, I), f in D._c.items():
        wI = w._c.get(I)
        if wI is not None:
            out = out + f * dmulti(wI, alpha)
    return out


def interior_field(X, w):
    """``i_X w`` for a polynomial vector field and form field."""
    if w.p == 0:
        raise ValueError("interior product of a function")
    c = {}
    for I, f in w._c.items():
        for b, i in enumerate(I):
            Xi = X.comps[i]
            if Xi:
                key = I[:b] + I[b + 1:]
                val = Xi * f
                _accumulate(c, key, val if b % 2 == 0 else -val)
    return FormField._raw(w.m, w.p - 1, c)


def de_rham(w):
    """Exterior derivative; ``d(d w) = 0``."""
    c = {}
    if w.p >= w.m:
        return FormField._raw(w.m, w.p + 1, {})
    for I, f in w._c.items():
        for j in range(w.m):
            sign, key = sort_sign((j,) + I)
            if sign:
                df = f.diff(j)
                if df:
                    _accumulate(c, key, df if sign > 0 else -df)
    return FormField._raw(w.m, w.p + 1, c)


def lie_form(X, w):
    """Lie derivative of a form, via Cartan: ``i_X dw + d i_X w``."""
    out = FormField._raw(w.m, w.p, {})
    if w.p < w.m:
        out = out + interior_field(X, de_rham(w))
    if w.p > 0:
        out = out + de_rham(interior_field(X, w))
    return out


# ---------------------------------------------------------------- symbol extraction

def extract_symbol(op, m, p, order, probe=None, truncate=False):
    """Recover the symbol of a polynomial-coefficient operator on p-forms.

    ``op`` maps a FormField to a Poly.  It is applied to the test forms
    ``x^nu dx^J`` with ``|nu| <= probe`` (default ``order + 1``); the values
    determine the coefficients of ``xi^nu`` by a triangular recursion.  A
    non-zero coefficient above ``order`` raises ``DegreeError`` unless
    ``truncate`` is set.  The probe must dominate the true order of ``op``.
    """
    if probe is None:
        probe = order + 1
    nus = monomials_upto(m, probe)
    coeffs = {}
    for J in increasing_tuples(m, p):
        found = {}
        for nu in nus:
            val = op(FormField._raw(m, p, {J: Poly._raw(m, {nu: Fraction(1)})}))
            for alpha in sub_indices(nu):
                if alpha == nu or alpha not in found:
                    continue
                rest = tuple(a - b for a, b in zip(nu, alpha))
                val = val - found[alpha] * Poly._raw(m, {rest: Fraction(falling(nu, alpha))})
            if val:
                val = val * Fraction(1, mfactorial(nu))
                found[nu] = val
                if sum(nu) > order and not truncate:
                    raise DegreeError(
                        f"operator has a xi^{list(nu)} term beyond order bound {order}"
                    )
        for alpha, f in found.items():
            if sum(alpha) <= order:
                coeffs[(alpha, J)] = f
    return OpSymbol._raw(m, order, p, coeffs)


def lie_op(X, D, probe=None):
    """``L_X D = L_X o D - D o L_X`` computed on the operator level."""
    def composite(w):
        return X(apply(D, w)) - apply(D, lie_form(X, w))

    return extract_symbol(composite, D.m, D.p, D.k, probe=probe)


@lru_cache(maxsize=None)
def _substitution(m, j, t, I):
    """``e_j ^ i_{eps^t} e_I`` as a tuple of (J, sign)."""
    res = alt_substitute(basis_vector(m, j), basis_vector(m, t), AltTensor.basis(m, I))
    return tuple((J, int(c)) for J, c in res.items())


def lie_symbolic(X, D):
    """Lie derivative from the symbol formula

        <X,eta> D(xi; w) - <X,xi> tau_zeta D(xi; w) - D(xi + zeta; zeta ^ i_X w)

    with ``eta`` differentiating the coefficients of D and ``zeta`` those of X.
    """
    m = D.m
    out = {}
    derivs = {}

    def dX(j, beta):
        key = (j, beta)
        if key not in derivs:
            derivs[key] = dmulti(X.comps[j], beta)
        return derivs[key]

    for (alpha, I), c in D._c.items():
        _accumulate(out, (alpha, I), X(c))
        betas = list(sub_indices(alpha))
        for j in range(m):
            if not X.comps[j]:
                continue
            for beta in betas:
                b = mbinom(alpha, beta)
                rest = tuple(a - s for a, s in zip(alpha, beta))
                if any(beta):
                    g = dX(j, beta)
                    if g:
                        key = (tuple(r + (1 if i == j else 0) for i, r in enumerate(rest)), I)
                        _accumulate(out, key, -(g * c) * b)
                for t in I:
                    g = dX(j, tuple(s + (1 if i == t else 0) for i, s in enumerate(beta)))
                    if not g:
                        continue
                    gc = g * c
                    for J, sign in _substitution(m, j, t, I):
                        _accumulate(out, (rest, J), gc * (-sign * b))
    return OpSymbol._raw(m, D.k, D.p, out)


# ---------------------------------------------------------------- principal symbol

def principal_symbol(D):
    """Top-degree homogeneous part of a non-zero symbol."""
    top = D.order()
    if top < 0:
        raise ValueError("the zero operator has no principal symbol")
    return TensorFieldSymbol(D.m, top, D.p, {key: f for key, f in D._c.items() if sum(key[0]) == top})


def lie_tensor(X, sigma):
    """Natural Lie derivative of a contravariant tensor field given as a
    homogeneous symbol: ``<X,eta> s - <X,xi>(zeta d_xi) s - s(xi; zeta ^ i_X w)``."""
    m = sigma.m
    out = {}
    first = {(j, a): X.comps[j].diff(a) for j in range(m) for a in range(m)}
    for (alpha, I), c in sigma._c.items():
        _accumulate(out, (alpha, I), X(c))
        for j in range(m):
            for a in range(m):
                g = first[(j, a)]
                if not g:
                    continue
                gc = g * c
                if alpha[a]:
                    key = tuple(x - (1 if i == a else 0) + (1 if i == j else 0) for i, x in enumerate(alpha))
                    _accumulate(out, (key, I), gc * (-alpha[a]))
                if a in I:
                    for J, sign in _substitution(m, j, a, I):
                        _accumulate(out, (alpha, J), gc * (-sign))
    return TensorFieldSymbol(m, sigma.k, sigma.p, out)


# ---------------------------------------------------------------- d and its dual

def dual_d(D):
    """``(d* D)(a) = D(da)`` on (p-1)-forms; raises the order by one."""
    if D.p == 0:
        raise ValueError("d* is defined on operators acting on forms of positive degree")
    out = {}
    for (alpha, I), c in D._c.items():
        for b, i in enumerate(I):
            key = (tuple(a + (1 if t == i else 0) for t, a in enumerate(alpha)), I[:b] + I[b + 1:])
            _accumulate(out, key, c if b % 2 == 0 else -c)
    return OpSymbol._raw(D.m, D.k + 1, D.p - 1, out)


def function_symbol(f, m, k=0):
    """Multiplication by the polynomial ``f`` as an operator on functions."""
    return OpSymbol._raw(m, k, 0, {(zero(m), ()): f} if f else {})


__all__ = [
    "DegreeError",
    "PolyFunction",
    "FormField",
    "PolyVectorField",
    "OpSymbol",
    "TensorFieldSymbol",
    "apply",
    "bracket",
    "de_rham",
    "dmulti",
    "dual_d",
    "extract_symbol",
    "function_symbol",
    "interior_field",
    "lie_form",
    "lie_op",
    "lie_symbolic",
    "lie_tensor",
    "poly_monomial",
    "principal_symbol",
]
