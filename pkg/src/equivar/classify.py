"""Brute-force classification of equivariant maps between operator modules.

A candidate map ``T`` sends the symbol of ``D`` (order ``<= k`` on p-forms)
to a symbol of order ``<= l`` on q-forms.  It is local with polynomial
coefficients: the coefficient of ``xi^gamma <e_J, .>`` in ``T(D)`` is

    sum  t_{nu,beta,(alpha,I),(gamma,J)} x^nu d^beta D_{alpha,I}.

Equivariance ``L_X o T = T o L_X`` is linear in the coordinates ``t``; the
constraint system collects the coefficients of the residual over monomial
vector fields and monomial test symbols and its kernel is the space of
equivariant maps.

Two exact reductions keep the system small.  The diagonal fields
``x^i d_i`` act on every coordinate by a scalar (a weight), so only
weight-zero coordinates can survive; they are the only columns kept when
``weight_filter`` is set.  For maps with at most linear coefficients the
residual is only needed at the origin: the constant fields force constant
coefficients there, and a translation-invariant map with a vanishing residual
at 0 for a translation-stable family of fields and test symbols has a
vanishing residual everywhere.
"""

from dataclasses import dataclass, field
from fractions import Fraction
import json

from .linalg import RowReducer, SparseMatrix, canonical_basis
from .symbols import OpSymbol, PolyVectorField, lie_op, lie_symbolic
from .tensor import (
    Poly,
    falling,
    increasing_tuples,
    mfactorial,
    monomials_upto,
    zero,
)


def _fmt(c):
    c = Fraction(c)
    return f"{c.numerator}/{c.denominator}"


def symbol_basis(m, k, p):
    """Monomial basis ``xi^alpha e_I`` of the fibre, graded by ``|alpha|``."""
    return [(alpha, I) for alpha in monomials_upto(m, k) for I in increasing_tuples(m, p)]


def check_shape(m, p, q, k, l):
    for name, v in (("m", m), ("p", p), ("q", q), ("k", k), ("l", l)):
        if not isinstance(v, int) or v < 0:
            raise ValueError(f"{name} must be a non-negative integer, got {v!r}")
    if m < 1:
        raise ValueError("m must be at least 1")
    if p > m or q > m:
        raise ValueError(f"form degrees p={p}, q={q} exceed the dimension m={m}")


def is_borderline(m, p, q):
    return m < min(p + 2, q + 3) or m < max(p, q)


class CandidateOperator:
    """Exact coefficient table of a local map between symbol spaces."""

    __slots__ = ("m", "p", "q", "k", "l", "R", "coeffs", "_by_in")

    def __init__(self, m, p, q, k, l, R, coeffs=None):
        self.m, self.p, self.q, self.k, self.l, self.R = m, p, q, k, l, R
        c = {}
        for key, v in (coeffs or {}).items():
            v = Fraction(v)
            if not v:
                continue
            nu, beta, (alpha, I), (gamma, J) = key
            if sum(beta) > R or sum(alpha) > k or sum(gamma) > l:
                raise ValueError(f"coordinate {key} outside the bounds (k={k}, l={l}, R={R})")
            if len(I) != p or len(J) != q:
                raise ValueError(f"coordinate {key} has wrong form degrees")
            c[key] = c.get(key, 0) + v
        self.coeffs = {key: v for key, v in c.items() if v}
        by_in = {}
        for (nu, beta, inb, outb), t in self.coeffs.items():
            by_in.setdefault(inb, []).append((nu, beta, outb, t))
        self._by_in = by_in

    @property
    def x_degree(self):
        return max((sum(key[0]) for key in self.coeffs), default=-1)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if not isinstance(other, CandidateOperator):
            return NotImplemented
        return (self.m, self.p, self.q, self.k, self.l, self.coeffs) == (
            other.m, other.p, other.q, other.k, other.l, other.coeffs)

    def __repr__(self):
        return (f"CandidateOperator(m={self.m}, p={self.p}, q={self.q}, k={self.k}, "
                f"l={self.l}, R={self.R}, {len(self.coeffs)} terms)")

    def to_json(self):
        terms = []
        for (nu, beta, (alpha, I), (gamma, J)), v in sorted(self.coeffs.items(), key=lambda kv: column_order(kv[0])):
            terms.append({
                "nu": list(nu), "beta": list(beta), "alpha": list(alpha), "I": list(I),
                "gamma": list(gamma), "J": list(J), "coeff": _fmt(v),
            })
        return {"m": self.m, "p": self.p, "q": self.q, "k": self.k, "l": self.l,
                "R": self.R, "terms": terms}

    @classmethod
    def from_json(cls, obj):
        coeffs = {}
        for t in obj["terms"]:
            key = (tuple(t["nu"]), tuple(t["beta"]), (tuple(t["alpha"]), tuple(t["I"])),
                   (tuple(t["gamma"]), tuple(t["J"])))
            coeffs[key] = Fraction(t["coeff"])
        return cls(obj["m"], obj["p"], obj["q"], obj["k"], obj["l"], obj["R"], coeffs)


def column_order(key):
    nu, beta, (alpha, I), (gamma, J) = key
    return (sum(nu), tuple(-x for x in nu), sum(beta), tuple(-x for x in beta),
            sum(alpha), tuple(-x for x in alpha), I, sum(gamma), tuple(-x for x in gamma), J)


def _weight_beta(nu, alpha, I, gamma, J):
    beta = list(alpha)
    for i in I:
        beta[i] += 1
    for i in J:
        beta[i] -= 1
    beta = [b - g + n for b, g, n in zip(beta, gamma, nu)]
    if min(beta) < 0:
        return None
    return tuple(beta)


def candidate_keys(m, p, q, k, l, R, x_deg=0, weight_filter=False):
    """Coordinates of the candidate space in canonical column order."""
    check_shape(m, p, q, k, l)
    ins = symbol_basis(m, k, p)
    outs = symbol_basis(m, l, q)
    nus = monomials_upto(m, x_deg)
    keys = []
    if weight_filter:
        for nu in nus:
            for alpha, I in ins:
                for gamma, J in outs:
                    beta = _weight_beta(nu, alpha, I, gamma, J)
                    if beta is not None and sum(beta) <= R:
                        keys.append((nu, beta, (alpha, I), (gamma, J)))
    else:
        betas = monomials_upto(m, R)
        for nu in nus:
            for beta in betas:
                for inb in ins:
                    for outb in outs:
                        keys.append((nu, beta, inb, outb))
    keys.sort(key=column_order)
    return keys


def candidate_space(m, p, q, k, l, R, x_deg=0, weight_filter=False):
    """Basis of the candidate space, one CandidateOperator per coordinate."""
    return [CandidateOperator(m, p, q, k, l, R, {key: 1})
            for key in candidate_keys(m, p, q, k, l, R, x_deg, weight_filter)]


def apply_candidate(T, D):
    if D.m != T.m or D.p != T.p:
        raise ValueError(f"candidate on {T.p}-form operators applied to a {D.p}-form operator")
    if D.order() > T.k:
        raise ValueError(f"operator of order {D.order()} outside the source order {T.k}")
    m = T.m
    acc = {}
    for (alpha, I), f in D.items():
        entries = T._by_in.get((alpha, I))
        if not entries:
            continue
        for mu, c in f.items():
            for nu, beta, outb, t in entries:
                fct = falling(mu, beta)
                if fct:
                    lam = tuple(a - b + n for a, b, n in zip(mu, beta, nu))
                    slot = acc.setdefault(outb, {})
                    slot[lam] = slot.get(lam, 0) + t * c * fct
    coeffs = {outb: Poly(m, d) for outb, d in acc.items()}
    return OpSymbol(m, T.l, T.q, coeffs)


def equivariance_residual(T, X, D, lie=lie_op):
    """``L_X(T(D)) - T(L_X D)``; identically zero for equivariant ``T``."""
    return lie(X, apply_candidate(T, D)) - apply_candidate(T, lie(X, D))


# ---------------------------------------------------------------- constraint rows

def monomial_fields(m, g, exact=False):
    """``(mu, i)`` for every monomial field ``x^mu d_i`` of degree <= g."""
    mus = monomials_upto(m, g)
    if exact:
        mus = [mu for mu in mus if sum(mu) == g]
    return [(mu, i) for mu in mus for i in range(m)]


class _Columns:
    def __init__(self, m, p, q, k, l, keys):
        self.m, self.p, self.q, self.k, self.l = m, p, q, k, l
        self.keys = keys
        self.index = {key: j for j, key in enumerate(keys)}
        self.by_in = {}
        self.by_in_beta = {}
        z = zero(m)
        for j, (nu, beta, inb, outb) in enumerate(keys):
            self.by_in.setdefault(inb, []).append((j, nu, beta, outb))
            if nu == z:
                self.by_in_beta.setdefault((inb, beta), []).append((j, outb))

    def restrict(self, cols):
        return _Columns(self.m, self.p, self.q, self.k, self.l, [self.keys[j] for j in sorted(cols)])


def _add(rows, rkey, col, val):
    if not val:
        return
    r = rows.setdefault(rkey, {})
    v = r.get(col, 0) + val
    if v:
        r[col] = v
    else:
        del r[col]


def residual_rows(cols, X, D, origin=False, cache=None):
    """Coefficients of ``L_X(T D) - T(L_X D)`` as linear forms in the
    candidate coordinates.  Keys are ``(x-monomial, gamma, J)``; with
    ``origin`` only the value at ``x = 0`` is produced."""
    m, l, q = cols.m, cols.l, cols.q
    z = zero(m)
    rows = {}
    if cache is None:
        cache = {}
    for (alpha, I), f in D.items():
        entries = cols.by_in.get((alpha, I))
        if not entries:
            continue
        for mu, c in f.items():
            for j, nu, beta, (gamma, J) in entries:
                fct = falling(mu, beta)
                if not fct:
                    continue
                lam = tuple(a - b + n for a, b, n in zip(mu, beta, nu))
                if origin and sum(lam) > 1:
                    continue
                ckey = (lam, gamma, J)
                L = cache.get(ckey)
                if L is None:
                    mono = OpSymbol._raw(m, l, q, {(gamma, J): Poly._raw(m, {lam: Fraction(1)})})
                    L = []
                    for (g2, J2), h in lie_symbolic(X, mono).items():
                        for mu2, c2 in h.items():
                            if origin and mu2 != z:
                                continue
                            L.append(((mu2, g2, J2), c2))
                    cache[ckey] = L
                s = c * fct
                for rkey, c2 in L:
                    _add(rows, rkey, j, s * c2)
    LXD = lie_symbolic(X, D)
    for (alpha, I), f in LXD.items():
        for mu, c in f.items():
            if origin:
                entries = cols.by_in_beta.get(((alpha, I), mu))
                if not entries:
                    continue
                s = c * mfactorial(mu)
                for j, (gamma, J) in entries:
                    _add(rows, (z, gamma, J), j, -s)
            else:
                for j, nu, beta, (gamma, J) in cols.by_in.get((alpha, I), ()):
                    fct = falling(mu, beta)
                    if fct:
                        lam = tuple(a - b + n for a, b, n in zip(mu, beta, nu))
                        _add(rows, (lam, gamma, J), j, -c * fct)
    return {k: r for k, r in rows.items() if r}


def test_symbols(m, k, p, x_degree):
    """Monomial test symbols ``x^nu xi^alpha e_I`` with ``|nu| <= x_degree``."""
    return [(nu, alpha, I) for nu in monomials_upto(m, x_degree) for alpha, I in symbol_basis(m, k, p)]


def _test_symbol(m, k, nu, alpha, I):
    return OpSymbol._raw(m, k, len(I), {(alpha, I): Poly._raw(m, {nu: Fraction(1)})})


def constraint_system(columns, generators, tests, origin=False, shape=None):
    """Stack the residual coefficients over all (generator, test) pairs.

    ``columns`` is a list of candidate keys, ``generators`` a list of
    PolyVectorField and ``tests`` a list of OpSymbol.  ``shape`` is
    ``(m, p, q, k, l)``.  Rows come out in deterministic order.
    """
    m, p, q, k, l = shape
    cols = _Columns(m, p, q, k, l, list(columns))
    mat = SparseMatrix(len(cols.keys))
    for X in generators:
        cache = {}
        for D in tests:
            rows = residual_rows(cols, X, D, origin=origin, cache=cache)
            for rkey in sorted(rows):
                mat.rows.append(rows[rkey])
    return mat


def _pairs(m, p, q, k, l, gens, d_test):
    """Test symbols that can give a non-zero residual at the origin for each
    monomial generator, given weight-zero columns."""
    ins = symbol_basis(m, k, p)
    outs = symbol_basis(m, l, q)
    out_weights = set()
    for gamma, J in outs:
        w = list(gamma)
        for j in J:
            w[j] += 1
        out_weights.add(tuple(w))
    for mu, i in gens:
        seen = set()
        for alpha, I in ins:
            base = list(alpha)
            for t in I:
                base[t] += 1
            base[i] += 1
            base = [b - x for b, x in zip(base, mu)]
            for w in out_weights:
                nu = tuple(b - x for b, x in zip(base, w))
                if min(nu) < 0 or sum(nu) > d_test:
                    continue
                seen.add((nu, alpha, I))
        yield (mu, i), sorted(seen, key=lambda t: (sum(t[0]), t[0], sum(t[1]), t[1], t[2]))


def _iter_rows(cols, gens, d_test, origin):
    m, p, q, k, l = cols.m, cols.p, cols.q, cols.k, cols.l
    if origin:
        pairs = _pairs(m, p, q, k, l, gens, d_test)
    else:
        tests = test_symbols(m, k, p, d_test)
        pairs = ((gen, tests) for gen in gens)
    for (mu, i), tests in pairs:
        X = PolyVectorField.monomial(m, mu, i)
        cache = {}
        for nu, alpha, I in tests:
            D = _test_symbol(m, k, nu, alpha, I)
            rows = residual_rows(cols, X, D, origin=origin, cache=cache)
            for rkey in sorted(rows):
                yield rows[rkey]


def _solve(cols, gens, d_test, origin):
    red = RowReducer(len(cols.keys))
    nrows = 0
    seen = set()
    for row in _iter_rows(cols, gens, d_test, origin):
        nrows += 1
        lead = min(row)
        inv = 1 / Fraction(row[lead])
        sig = frozenset((j, v * inv) for j, v in row.items())
        if sig in seen:
            continue
        seen.add(sig)
        red.add(row)
        if red.full:
            break
    return red, nrows


def violations(cols, vectors, gens, d_test, origin):
    """Indices of ``vectors`` (dicts over ``cols``) with a non-zero residual
    for some generator."""
    support = set()
    for v in vectors:
        support.update(v)
    if not support:
        return []
    sub = cols.restrict(support)
    remap = {cols.index[key]: j for j, key in enumerate(sub.keys)}
    local = [{remap[j]: x for j, x in v.items()} for v in vectors]
    bad = set()
    for row in _iter_rows(sub, gens, d_test, origin):
        for n, v in enumerate(local):
            if n in bad:
                continue
            if sum((x * row.get(j, 0) for j, x in v.items()), Fraction(0)):
                bad.add(n)
        if len(bad) == len(vectors):
            break
    return sorted(bad)


# ---------------------------------------------------------------- results

@dataclass
class ClassificationResult:
    m: int
    p: int
    q: int
    k: int
    l: int
    dimension: int
    basis: list
    path: str
    stabilized: bool
    borderline: bool
    meta: dict = field(default_factory=dict)

    def vectors(self):
        """Basis as coordinate dicts keyed by candidate key."""
        return [dict(T.coeffs) for T in self.basis]

    def to_json(self):
        return {
            "m": self.m, "p": self.p, "q": self.q, "k": self.k, "l": self.l,
            "dimension": self.dimension,
            "basis": [T.to_json() for T in self.basis],
            "path": self.path,
            "stabilized": self.stabilized,
            "borderline": self.borderline,
            "meta": self.meta,
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))


def default_R(k, l):
    return k + l + 2


def _setup(m, p, q, k, l, R, x_deg):
    check_shape(m, p, q, k, l)
    if R is None:
        R = default_R(k, l)
    keys = candidate_keys(m, p, q, k, l, R, x_deg, weight_filter=True)
    return R, _Columns(m, p, q, k, l, keys)


def kernel_basis(m, p, q, k, l, R=None, x_deg=0, g=2):
    """Kernel of the constraint system: ``(columns, basis vectors, stats)``."""
    R, cols = _setup(m, p, q, k, l, R, x_deg)
    origin = x_deg <= 1
    d_test = max(g + 1, R + 1)
    gens = monomial_fields(m, g)
    red, nrows = _solve(cols, gens, d_test, origin)
    basis = red.kernel()
    stats = {"R": R, "x_deg": x_deg, "g": g, "columns": len(cols.keys), "rows": nrows,
             "rank": red.rank, "test_degree": d_test, "origin_rows": origin}
    return cols, basis, stats


def to_candidates(cols, basis, R):
    out = []
    for v in basis:
        coeffs = {cols.keys[j]: x for j, x in v.items()}
        out.append(CandidateOperator(cols.m, cols.p, cols.q, cols.k, cols.l, R, coeffs))
    return out


def classify_direct(m, p, q, k, l, R=None, x_deg=0, g=2, verify=True):
    """Dimension and canonical basis of the equivariant maps, by solving the
    constraint system over the candidate space.

    Each basis element is re-checked against the monomial fields of degree
    ``g + 1``; if one fails, the system is re-solved with ``g + 1`` and both
    dimensions are reported with ``stabilized = False``.
    """
    cols, basis, stats = kernel_basis(m, p, q, k, l, R, x_deg, g)
    R = stats["R"]
    stabilized = True
    if verify and basis:
        bad = violations(cols, basis, monomial_fields(m, g + 1, exact=True),
                         stats["test_degree"] + 1, stats["origin_rows"])
        if bad:
            stabilized = False
            _, basis2, stats2 = kernel_basis(m, p, q, k, l, R, x_deg, g + 1)
            stats["dimension_g_plus_1"] = len(basis2)
    return ClassificationResult(
        m, p, q, k, l, len(basis), to_candidates(cols, basis, R), "direct",
        stabilized, is_borderline(m, p, q), stats,
    )


def encode_operator(fn, m, p, q, k, l, R=None):
    """Coordinates of a constant-coefficient local map given as a function
    on symbols, read off from its values on ``x^beta/beta! xi^alpha e_I``."""
    check_shape(m, p, q, k, l)
    if R is None:
        R = default_R(k, l)
    z = zero(m)
    coeffs = {}
    for beta in monomials_upto(m, R):
        scale = Fraction(1, mfactorial(beta))
        for alpha, I in symbol_basis(m, k, p):
            D = OpSymbol._raw(m, k, p, {(alpha, I): Poly._raw(m, {beta: scale})})
            out = fn(D)
            if out.p != q or out.order() > l:
                raise ValueError("operator does not map into the requested target")
            for (gamma, J), f in out.items():
                c = f.coeff(z)
                if c:
                    coeffs[(z, beta, (alpha, I), (gamma, J))] = c
    return CandidateOperator(m, p, q, k, l, R, coeffs)


def candidate_vector(T, cols):
    """Coordinates of a CandidateOperator over a column set (KeyError if a
    coordinate is not a column)."""
    return {cols.index[key]: v for key, v in T.coeffs.items()}


__all__ = [
    "CandidateOperator",
    "ClassificationResult",
    "apply_candidate",
    "candidate_keys",
    "candidate_space",
    "candidate_vector",
    "canonical_basis",
    "check_shape",
    "classify_direct",
    "constraint_system",
    "encode_operator",
    "equivariance_residual",
    "is_borderline",
    "kernel_basis",
    "monomial_fields",
    "residual_rows",
    "symbol_basis",
    "test_symbols",
    "violations",
]
