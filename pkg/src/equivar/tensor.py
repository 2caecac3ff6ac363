"""Exact multilinear algebra over the rationals.

Multi-indices are plain tuples of non-negative ints.  Antisymmetric tensors
are stored sparsely, keyed by strictly increasing index tuples (0-based), with
zero coefficients pruned after every operation.  The same storage is used for
contravariant p-vectors and for p-covectors; the pairing is normalised by
``<e_I, eps^I> = 1`` and contraction always acts on the first slot, so that

    <X ^ L, w> == <L, i_X w>

holds exactly.
"""

from fractions import Fraction
from itertools import combinations, permutations, product
from math import comb, factorial

MultiIndex = tuple


# ---------------------------------------------------------------- multi-indices

def degree(a):
    return sum(a)


def unit(m, i):
    return tuple(1 if j == i else 0 for j in range(m))


def zero(m):
    return (0,) * m


def madd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def msub(a, b):
    """``a - b``, or ``None`` when some component would go negative."""
    out = tuple(x - y for x, y in zip(a, b))
    if min(out, default=0) < 0:
        return None
    return out


def mleq(a, b):
    return all(x <= y for x, y in zip(a, b))


def mfactorial(a):
    out = 1
    for x in a:
        out *= factorial(x)
    return out


def falling(a, b):
    """Coefficient of ``x^(a-b)`` in ``d^b x^a`` (zero unless b <= a)."""
    out = 1
    for x, y in zip(a, b):
        if y > x:
            return 0
        for t in range(y):
            out *= x - t
    return out


def mbinom(a, b):
    out = 1
    for x, y in zip(a, b):
        out *= comb(x, y)
    return out


def monomials(m, d):
    """All multi-indices of length ``m`` and total degree exactly ``d``, in
    lexicographically decreasing order (x0^d first)."""
    if m == 0:
        if d == 0:
            yield ()
        return
    for first in range(d, -1, -1):
        for rest in monomials(m - 1, d - first):
            yield (first,) + rest


def monomials_upto(m, d):
    """Multi-indices with ``|a| <= d``, graded by degree."""
    out = []
    for e in range(d + 1):
        out.extend(monomials(m, e))
    return out


def sub_indices(a):
    """All ``b <= a`` componentwise."""
    return product(*(range(x + 1) for x in a))


def increasing_tuples(m, p):
    return list(combinations(range(m), p))


def sort_sign(idx):
    """Sort a tuple of indices; return ``(sign, sorted)`` or ``(0, None)`` on
    a repeated index."""
    idx = list(idx)
    sign = 1
    # insertion sort; tuples here are tiny
    for i in range(1, len(idx)):
        j = i
        while j > 0 and idx[j - 1] > idx[j]:
            idx[j - 1], idx[j] = idx[j], idx[j - 1]
            sign = -sign
            j -= 1
    for i in range(1, len(idx)):
        if idx[i - 1] == idx[i]:
            return 0, None
    return sign, tuple(idx)


# ---------------------------------------------------------------- vectors

def basis_vector(m, i):
    """Canonical basis vector ``e_i`` (or covector ``eps^i``) as a tuple."""
    return tuple(Fraction(1 if j == i else 0) for j in range(m))


def as_vector(v):
    return tuple(Fraction(x) for x in v)


def evaluate(v, w):
    """``<v, w>`` for a vector and a covector given as sequences."""
    return sum((Fraction(a) * b for a, b in zip(v, w)), Fraction(0))


# ---------------------------------------------------------------- alternating

class AltTensor:
    """Element of the p-th exterior power of R^m (or of its dual).

    Keys may be passed in any order; they are sorted with the corresponding
    sign on construction.  Instances are immutable.
    """

    __slots__ = ("m", "p", "_c")

    def __init__(self, m, p, coeffs=None):
        self.m = m
        self.p = p
        c = {}
        for key, val in (coeffs or {}).items():
            key = tuple(key)
            if len(key) != p:
                raise ValueError(f"index tuple {key} has length != {p}")
            if any(i < 0 or i >= m for i in key):
                raise ValueError(f"index tuple {key} out of range for m={m}")
            sign, skey = sort_sign(key)
            if not sign:
                continue
            val = Fraction(val)
            c[skey] = c.get(skey, 0) + sign * val
        self._c = {k: v for k, v in c.items() if v}

    @classmethod
    def basis(cls, m, idx):
        return cls(m, len(idx), {tuple(idx): 1})

    @classmethod
    def from_vector(cls, v):
        v = as_vector(v)
        return cls(len(v), 1, {(i,): x for i, x in enumerate(v) if x})

    @classmethod
    def scalar(cls, m, c):
        return cls(m, 0, {(): c})

    def items(self):
        return self._c.items()

    def keys(self):
        return self._c.keys()

    def __getitem__(self, idx):
        sign, key = sort_sign(idx)
        if not sign:
            return Fraction(0)
        return sign * self._c.get(key, Fraction(0))

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def _check(self, other):
        if not isinstance(other, AltTensor):
            return NotImplemented
        if other.m != self.m or other.p != self.p:
            raise ValueError("shape mismatch between alternating tensors")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return AltTensor(self.m, self.p, c)

    def __neg__(self):
        return AltTensor(self.m, self.p, {k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, s):
        if isinstance(s, AltTensor):
            return NotImplemented
        s = Fraction(s)
        return AltTensor(self.m, self.p, {k: s * v for k, v in self._c.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, AltTensor):
            return NotImplemented
        return (self.m, self.p, self._c) == (other.m, other.p, other._c)

    def __hash__(self):
        return hash((self.m, self.p, frozenset(self._c.items())))

    def __repr__(self):
        if not self._c:
            return f"AltTensor(m={self.m}, p={self.p}, 0)"
        body = " + ".join(f"{v}*e{list(k)}" for k, v in sorted(self._c.items()))
        return f"AltTensor(m={self.m}, p={self.p}, {body})"


def wedge(a, b):
    if a.m != b.m:
        raise ValueError("wedge of tensors over different dimensions")
    if a.p + b.p > a.m:
        return AltTensor(a.m, a.p + b.p)
    out = {}
    for I, x in a.items():
        for J, y in b.items():
            sign, K = sort_sign(I + J)
            if sign:
                out[K] = out.get(K, 0) + sign * x * y
    return AltTensor(a.m, a.p + b.p, out)


def interior(v, t):
    """Contraction of ``t`` with the degree-one element ``v`` in slot one:
    ``i_v(e_{i1}^...^e_{ip}) = sum_b (-1)^(b-1) v_{ib} (...omit b...)``."""
    if t.p == 0:
        raise ValueError("interior product of a degree-0 tensor")
    v = as_vector(v)
    if len(v) != t.m:
        raise ValueError("dimension mismatch in interior product")
    out = {}
    for I, c in t.items():
        for b, i in enumerate(I):
            if v[i]:
                key = I[:b] + I[b + 1:]
                val = v[i] * c
                out[key] = out.get(key, 0) + (val if b % 2 == 0 else -val)
    return AltTensor(t.m, t.p - 1, out)


def pair(lam, om):
    """Full contraction ``<Lambda, omega>``."""
    if lam.m != om.m or lam.p != om.p:
        raise ValueError("pairing of tensors of different degree")
    small, big = (lam, om) if len(lam) <= len(om) else (om, lam)
    return sum((c * big._c.get(I, 0) for I, c in small.items()), Fraction(0))


def alt_substitute(X, zeta, lam):
    """``X ^ i_zeta(Lambda)``: each factor of a decomposable Lambda is in turn
    replaced by X, weighted by its evaluation on zeta."""
    if lam.p == 0:
        return AltTensor(lam.m, 0)
    return wedge(AltTensor.from_vector(X), interior(zeta, lam))


# ---------------------------------------------------------------- polynomials

class Poly:
    """Sparse polynomial in ``n`` variables with rational coefficients."""

    __slots__ = ("n", "_c")

    def __init__(self, n, coeffs=None):
        self.n = n
        c = {}
        for e, v in (coeffs or {}).items():
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent {e} has length != {n}")
            if v:
                c[e] = c.get(e, 0) + Fraction(v)
        self._c = {e: v for e, v in c.items() if v}

    @classmethod
    def _raw(cls, n, c):
        obj = cls.__new__(cls)
        obj.n = n
        obj._c = c
        return obj

    @classmethod
    def var(cls, n, i):
        return cls._raw(n, {unit(n, i): Fraction(1)})

    @classmethod
    def const(cls, n, c):
        c = Fraction(c)
        return cls._raw(n, {zero(n): c} if c else {})

    @classmethod
    def monomial(cls, exps, c=1):
        return cls(len(exps), {tuple(exps): c})

    def items(self):
        return self._c.items()

    def coeff(self, e):
        return self._c.get(tuple(e), Fraction(0))

    def __len__(self):
        return len(self._c)

    def __bool__(self):
        return bool(self._c)

    def degree(self):
        if not self._c:
            return -1
        return max(sum(e) for e in self._c)

    def homogeneous_part(self, d):
        return Poly._raw(self.n, {e: v for e, v in self._c.items() if sum(e) == d})

    def _lift(self, other):
        if isinstance(other, Poly):
            if other.n != self.n:
                raise ValueError("polynomials in different numbers of variables")
            return other
        return Poly.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        c = dict(self._c)
        for e, v in other._c.items():
            w = c.get(e, 0) + v
            if w:
                c[e] = w
            else:
                c.pop(e, None)
        return Poly._raw(self.n, c)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.n, {e: -v for e, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            s = Fraction(other)
            if not s:
                return Poly._raw(self.n, {})
            return Poly._raw(self.n, {e: s * v for e, v in self._c.items()})
        other = self._lift(other)
        c = {}
        for e1, v1 in self._c.items():
            for e2, v2 in other._c.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                c[e] = c.get(e, 0) + v1 * v2
        return Poly._raw(self.n, {e: v for e, v in c.items() if v})

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Poly.const(self.n, 1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.n == other.n and self._c == other._c
        if not self._c:
            return other == 0
        return self._c == {zero(self.n): Fraction(other)}

    def __hash__(self):
        return hash((self.n, frozenset(self._c.items())))

    def diff(self, i, times=1):
        c = {}
        for e, v in self._c.items():
            if e[i] < times:
                continue
            f = v
            for t in range(times):
                f *= e[i] - t
            e2 = e[:i] + (e[i] - times,) + e[i + 1:]
            c[e2] = c.get(e2, 0) + f
        return Poly._raw(self.n, {e: v for e, v in c.items() if v})

    def substitute(self, values):
        """Evaluate with every variable replaced by a Poly (or scalar) from
        ``values``; the result lives in the ring of the first Poly found."""
        values = list(values)
        if len(values) != self.n:
            raise ValueError("wrong number of substitution values")
        ring = next((v.n for v in values if isinstance(v, Poly)), None)
        if ring is None:
            total = Fraction(0)
            for e, c in self._c.items():
                t = c
                for x, k in zip(values, e):
                    t *= Fraction(x) ** k
                total += t
            return total
        lifted = [v if isinstance(v, Poly) else Poly.const(ring, v) for v in values]
        powers = {}

        def power(i, k):
            key = (i, k)
            if key not in powers:
                powers[key] = Poly.const(ring, 1) if k == 0 else power(i, k - 1) * lifted[i]
            return powers[key]

        out = Poly._raw(ring, {})
        for e, c in self._c.items():
            t = Poly.const(ring, c)
            for i, k in enumerate(e):
                if k:
                    t = t * power(i, k)
            out = out + t
        return out

    def __repr__(self):
        if not self._c:
            return "Poly(0)"
        parts = []
        for e, v in sorted(self._c.items(), reverse=True):
            mono = "*".join(f"z{i}^{k}" if k > 1 else f"z{i}" for i, k in enumerate(e) if k)
            parts.append(f"{v}*{mono}" if mono else f"{v}")
        return "Poly(" + " + ".join(parts) + ")"


def directional_derivative(zeta, P, times=1):
    """``(zeta . d/dxi)^times P`` for a covector ``zeta`` of length ``P.n``."""
    zeta = as_vector(zeta)
    if len(zeta) != P.n:
        raise ValueError("direction and polynomial live in different dimensions")
    out = P
    for _ in range(times):
        acc = Poly._raw(P.n, {})
        for i, z in enumerate(zeta):
            if z:
                acc = acc + out.diff(i) * z
        out = acc
    return out


def determinant(rows):
    """Leibniz expansion of a square matrix whose entries support + and *."""
    n = len(rows)
    if n == 0:
        return 1
    total = None
    for perm in _permutations_with_sign(n):
        sign, sigma = perm
        term = sign
        for i, j in enumerate(sigma):
            term = rows[i][j] * term
        total = term if total is None else total + term
    return total


def _permutations_with_sign(n):
    for sigma in permutations(range(n)):
        sign, _ = sort_sign(sigma)
        yield sign, sigma
