"""Classification through invariant polynomials.

Feed ``Y^r (x) X_1 ^ ... ^ X_p`` (the symbol ``<Y,xi>^r <Lambda, .>``) and
``omega = nu^1 ^ ... ^ nu^q`` to a constant-coefficient map ``T``.  The value
``T_r`` is a gl(m)-invariant polynomial, hence a polynomial in the pairings

    alpha_i = <X_i, xi>,  beta_i = <X_i, eta>,  delta_i^j = <X_i, nu^j>

(index 0 standing for ``Y``), of degree r in Y, multilinear and alternating
in the X's and in the nu's.  Only eight shapes of terms are possible; each
is a power product ``beta_0^s alpha_0^(r-s)`` (one factor fewer when Y meets
a nu) times a determinant.  The infinitesimal equivariance condition then
reduces to a handful of linear differential identities between ``T_r`` and
``T_(r-1)``.  Solving them gives a candidate span which is converted back to
coordinates and re-checked against the full residual equations.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .classify import (
    ClassificationResult,
    _Columns,
    _iter_rows,
    candidate_keys,
    check_shape,
    default_R,
    is_borderline,
    kernel_basis,
    monomial_fields,
    to_candidates,
)
from .linalg import RowReducer, SparseMatrix, canonical_basis, kernel, same_span
from .tensor import Poly, determinant, increasing_tuples, mfactorial


FAMILIES = (
    # name, Y meets a nu, xi meets an X, eta meets an X, q - p
    ("pair", False, False, False, 0),
    ("pair_i_xi", False, True, False, -1),
    ("pair_i_eta", False, False, True, -1),
    ("pair_i_xi_i_eta", False, True, True, -2),
    ("wedge_y", True, False, False, 1),
    ("wedge_y_i_xi", True, True, False, 0),
    ("wedge_y_i_eta", True, False, True, 0),
    ("wedge_y_i_xi_i_eta", True, True, True, -1),
)


class Variables:
    """Indexing of ``alpha_i, beta_i, delta_i^j`` (i = 0..p, j = 0..q-1)."""

    def __init__(self, p, q):
        self.p, self.q = p, q
        self.n = 2 * (p + 1) + (p + 1) * q

    def alpha(self, i):
        return i

    def beta(self, i):
        return self.p + 1 + i

    def delta(self, i, j):
        return 2 * (self.p + 1) + i * self.q + j

    def poly(self, idx):
        return Poly.var(self.n, idx)

    def names(self):
        out = [f"alpha{i}" for i in range(self.p + 1)] + [f"beta{i}" for i in range(self.p + 1)]
        out += [f"delta{i}_{j}" for i in range(self.p + 1) for j in range(self.q)]
        return out


def _pairing_det(V, with_y, xi, eta):
    """Determinant giving ``<Y ^ i_xi i_eta Lambda, omega>`` and its
    relatives: rows run over Y (if present) and the X's, columns over the
    inserted covectors and then the nu's."""
    p, q = V.p, V.q
    rows_idx = list(range(0 if with_y else 1, p + 1))
    rows = []
    for i in rows_idx:
        row = []
        if eta:
            row.append(V.poly(V.beta(i)) if i else Poly.const(V.n, 0))
        if xi:
            row.append(V.poly(V.alpha(i)) if i else Poly.const(V.n, 0))
        row += [V.poly(V.delta(i, j)) for j in range(q)]
        rows.append(row)
    if len(rows) != (len(rows[0]) if rows else 0):
        raise ValueError("non-square pairing matrix")
    if not rows:
        return Poly.const(V.n, 1)
    return determinant(rows)


@dataclass(frozen=True)
class AnsatzTerm:
    family: str
    r: int
    s: int
    poly: Poly
    xi_degree: int


@dataclass(frozen=True)
class InvariantAnsatz:
    """All possible invariant terms of ``T_r`` for given form degrees."""

    p: int
    q: int
    r: int
    variables: Variables
    terms: tuple

    def __len__(self):
        return len(self.terms)


def ansatz_terms(p, q, r):
    """Invariant terms for ``T_r``; empty when ``q`` is negative or further
    than the admissible shapes from ``p``."""
    if p < 0 or r < 0:
        raise ValueError("p and r must be non-negative")
    if q < 0:
        return InvariantAnsatz(p, q, r, None, ())
    V = Variables(p, q)
    u, v = V.poly(V.alpha(0)), V.poly(V.beta(0))
    out = []
    for name, with_y, xi, eta, shift in FAMILIES:
        if q - p != shift:
            continue
        need = int(xi) + int(eta)
        if p < need:
            continue
        if with_y and r < 1:
            continue
        det = _pairing_det(V, with_y, xi, eta)
        if not det:
            continue
        top = r - 1 if with_y else r
        for s in range(top + 1):
            out.append(AnsatzTerm(name, r, s, v ** s * u ** (top - s) * det, top - s + int(xi)))
    return InvariantAnsatz(p, q, r, V, tuple(out))


# ---------------------------------------------------------------- constraints

def _constraints(V):
    """Linear identities as ``(name, current, previous)``: each side is a list
    of ``(coefficient, variables to differentiate by)``; ``previous`` is
    scaled by ``-r``."""
    p, q = V.p, V.q
    a0, b0 = V.alpha(0), V.beta(0)
    out = [("no_beta0", [(1, (b0,))], [])]
    for i in range(1, p + 1):
        out.append((f"no_beta{i}", [(1, (V.beta(i),))], []))
    out.append(("alpha0_alpha0", [(1, (a0, a0))], [(1, (a0,))]))
    for i in range(1, p + 1):
        out.append((f"alpha0_alpha{i}", [(1, (a0, V.alpha(i)))], [(1, (V.alpha(i),))]))
    for j in range(q):
        out.append((f"alpha0_delta0_{j}", [(2, (a0, V.delta(0, j)))], [(1, (V.delta(0, j),))]))
    for i in range(1, p + 1):
        for j in range(q):
            out.append((f"mixed_{i}_{j}",
                        [(1, (V.alpha(i), V.delta(0, j))), (1, (a0, V.delta(i, j)))],
                        [(1, (V.delta(i, j),))]))
    return out


def _diff(P, idx):
    for i in idx:
        P = P.diff(i)
    return P


def constraint_rows(unknowns, V, k):
    """Rows of the linear system on the ansatz coefficients; ``unknowns`` is a
    list of AnsatzTerm for r = 0..k."""
    by_r = {}
    for n, t in enumerate(unknowns):
        by_r.setdefault(t.r, []).append(n)
    rows = []
    for r in range(k + 1):
        for name, cur, prev in _constraints(V):
            acc = {}
            for n in by_r.get(r, ()):
                for c, idx in cur:
                    for mono, x in _diff(unknowns[n].poly, idx).items():
                        slot = acc.setdefault(mono, {})
                        slot[n] = slot.get(n, 0) + c * x
            if r > 0:
                for n in by_r.get(r - 1, ()):
                    for c, idx in prev:
                        for mono, x in _diff(unknowns[n].poly, idx).items():
                            slot = acc.setdefault(mono, {})
                            slot[n] = slot.get(n, 0) - r * c * x
            for mono in sorted(acc):
                row = {n: x for n, x in acc[mono].items() if x}
                if row:
                    rows.append(row)
    return rows


# ---------------------------------------------------------------- coordinates

def _substitution(V, m, I, J):
    """Values of the pairing variables for ``X_i = e_{I_i}``, ``nu^j = eps^{J_j}``
    and free ``Y = y``, as polynomials in ``(y, xi, eta)``."""
    n = 3 * m

    def y(a):
        return Poly.var(n, a)

    def xi(a):
        return Poly.var(n, m + a)

    def eta(a):
        return Poly.var(n, 2 * m + a)

    vals = [None] * V.n
    vals[V.alpha(0)] = sum((y(a) * xi(a) for a in range(m)), Poly.const(n, 0))
    vals[V.beta(0)] = sum((y(a) * eta(a) for a in range(m)), Poly.const(n, 0))
    for i in range(1, V.p + 1):
        vals[V.alpha(i)] = xi(I[i - 1])
        vals[V.beta(i)] = eta(I[i - 1])
    for j in range(V.q):
        vals[V.delta(0, j)] = y(J[j])
        for i in range(1, V.p + 1):
            vals[V.delta(i, j)] = Poly.const(n, 1 if I[i - 1] == J[j] else 0)
    return vals


def term_coordinates(term, V, m, cache=None):
    """Candidate coordinates ``{(nu, beta, (alpha, I), (gamma, J)): t}`` of a
    single invariant term."""
    zero = (0,) * m
    out = {}
    scale_r = factorial(term.r)
    for I in increasing_tuples(m, V.p):
        for J in increasing_tuples(m, V.q):
            key = (I, J)
            vals = cache.get(key) if cache is not None else None
            if vals is None:
                vals = _substitution(V, m, I, J)
                if cache is not None:
                    cache[key] = vals
            P = term.poly.substitute(vals)
            if not isinstance(P, Poly):
                continue
            for e, c in P.items():
                a, gamma, beta = e[:m], e[m:2 * m], e[2 * m:]
                t = c * Fraction(mfactorial(a), scale_r)
                ck = (zero, tuple(beta), (tuple(a), I), (tuple(gamma), J))
                out[ck] = out.get(ck, 0) + t
    return {key: v for key, v in out.items() if v}


def ansatz_system(m, p, q, k, l):
    """Unknown terms (for r = 0..k, target order <= l) and the constraint rows."""
    unknowns = []
    V = Variables(p, q)
    for r in range(k + 1):
        for t in ansatz_terms(p, q, r).terms:
            if t.xi_degree <= l:
                unknowns.append(t)
    return V, unknowns, constraint_rows(unknowns, V, k)


def classify_ansatz(m, p, q, k, l, R=None, g=2):
    """Dimension and canonical basis from the invariant ansatz.

    The kernel of the reduced identities is mapped to candidate coordinates
    and intersected with the kernel of the full residual system; any part
    that fails the residual check is reported in ``meta["rejected"]``.
    """
    return solve_ansatz(m, p, q, k, l, R, g)[0]


def solve_ansatz(m, p, q, k, l, R=None, g=2):
    """``(result, raw)`` where ``raw`` is the canonical span of the ansatz
    solutions before the residual check, over the direct column set."""
    check_shape(m, p, q, k, l)
    if R is None:
        R = default_R(k, l)
    keys = candidate_keys(m, p, q, k, l, R, 0, weight_filter=True)
    cols = _Columns(m, p, q, k, l, keys)
    V, unknowns, rows = ansatz_system(m, p, q, k, l)
    _, sol = kernel(SparseMatrix(len(unknowns), rows)) if unknowns else (0, [])

    cache = {}
    coords = [term_coordinates(t, V, m, cache) for t in unknowns]
    raw = []
    for v in sol:
        vec = {}
        for n, c in v.items():
            for key, x in coords[n].items():
                j = cols.index.get(key)
                if j is None:
                    raise ValueError(f"ansatz coordinate {key} is outside the candidate space")
                vec[j] = vec.get(j, 0) + c * x
        vec = {j: x for j, x in vec.items() if x}
        if vec:
            raw.append(vec)
    raw = canonical_basis(raw, len(keys))

    verified, rejected = _verify(cols, raw, g, R)
    basis = canonical_basis(verified, len(keys))
    meta = {"R": R, "g": g, "unknowns": len(unknowns), "identities": len(rows),
            "raw_dimension": len(raw), "rejected": rejected}
    return ClassificationResult(
        m, p, q, k, l, len(basis), to_candidates(cols, basis, R), "ansatz",
        not rejected, is_borderline(m, p, q), meta,
    ), raw


def _verify(cols, vectors, g, R):
    """Part of span(vectors) annihilated by the residual rows."""
    if not vectors:
        return [], 0
    support = sorted({j for v in vectors for j in v})
    sub = cols.restrict(support)
    remap = {j: n for n, j in enumerate(support)}
    local = [{remap[j]: x for j, x in v.items()} for v in vectors]
    red = RowReducer(len(vectors))
    d_test = max(g + 1, R + 1)
    for row in _iter_rows(sub, monomial_fields(cols.m, g), d_test, True):
        img = {}
        for n, v in enumerate(local):
            s = sum((x * row.get(j, 0) for j, x in v.items()), Fraction(0))
            if s:
                img[n] = s
        if img:
            red.add(img)
            if red.full:
                break
    out = []
    for w in red.kernel():
        vec = {}
        for n, c in w.items():
            for j, x in vectors[n].items():
                vec[j] = vec.get(j, 0) + c * x
        out.append({j: x for j, x in vec.items() if x})
    return out, len(vectors) - len(out)


def cross_validate(m, p, q, k, l, R=None, g=2):
    """Solve a cell both ways and compare dimensions and spans.

    Returns a dict with both results; ``agree`` is True when the direct
    kernel, the raw ansatz span and the verified ansatz span coincide.
    """
    cols, direct, stats = kernel_basis(m, p, q, k, l, R, 0, g)
    res, raw = solve_ansatz(m, p, q, k, l, stats["R"], g)
    n = len(cols.keys)
    ans = [{cols.index[key]: x for key, x in T.coeffs.items()} for T in res.basis]
    return {
        "cell": (m, p, q, k, l),
        "direct_dimension": len(direct),
        "ansatz_dimension": res.dimension,
        "raw_dimension": len(raw),
        "same_span": same_span(direct, ans, n),
        "raw_same_span": same_span(direct, raw, n),
        "agree": len(direct) == res.dimension == len(raw)
        and same_span(direct, ans, n) and same_span(direct, raw, n),
    }


__all__ = [
    "AnsatzTerm",
    "FAMILIES",
    "InvariantAnsatz",
    "Variables",
    "ansatz_system",
    "ansatz_terms",
    "classify_ansatz",
    "constraint_rows",
    "cross_validate",
    "solve_ansatz",
    "term_coordinates",
]
