"""Seeded randomized checks of the algebraic identities the classification
relies on.  Every check is exact; each returns a ``CheckReport``."""

from dataclasses import dataclass, field

from .canonical import (
    K20_from_decomposition,
    K_D1p,
    K_D20,
    K_from_decomposition,
    OPERATORS,
    decompose_D1p,
    dstar_K,
    dstar_K_closed_form,
    null_pair_decomposition,
    null_triple_decomposition,
    operator_shape,
)
from .classify import monomial_fields
from .sampling import random_field, random_poly, random_symbol, random_zero_order, rng_for
from .symbols import (
    PolyVectorField,
    bracket,
    dual_d,
    lie_op,
    lie_symbolic,
    lie_tensor,
    principal_symbol,
)


@dataclass
class CheckReport:
    name: str
    total: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return self.total - len(self.failures)

    @property
    def ok(self):
        return self.total > 0 and not self.failures

    def record(self, good, detail):
        self.total += 1
        if not good:
            self.failures.append(detail)

    def line(self):
        status = "PASS" if self.ok else "FAIL"
        return f"{status} {self.name}: {self.passed}/{self.total}"


def _same(a, b):
    return a.p == b.p and a.m == b.m and dict(a.items()) == dict(b.items())


def check_lie_routes(n=100, seed=0):
    """Operator-level and symbol-formula Lie derivatives coincide."""
    rng = rng_for(seed)
    rep = CheckReport("lie_op == lie_symbolic")
    for t in range(n):
        m = rng.randint(1, 4)
        p = rng.randint(0, min(3, m))
        k = rng.randint(0, 3)
        X = random_field(rng, m, rng.randint(0, 3))
        D = random_symbol(rng, m, k, p, x_degree=2)
        rep.record(_same(lie_op(X, D), lie_symbolic(X, D)), (t, m, p, k))
    return rep


def check_jacobi(n=50, seed=1):
    """``L_[X,Y] = [L_X, L_Y]`` on symbols."""
    rng = rng_for(seed)
    rep = CheckReport("L_[X,Y] == [L_X, L_Y]")
    for t in range(n):
        m = rng.randint(1, 3)
        p = rng.randint(0, min(2, m))
        k = rng.randint(0, 2)
        X = random_field(rng, m, rng.randint(0, 2))
        Y = random_field(rng, m, rng.randint(0, 2))
        D = random_symbol(rng, m, k, p, x_degree=2)
        lie = lie_op if t % 5 == 0 else lie_symbolic
        lhs = lie(bracket(X, Y), D)
        rhs = lie(X, lie(Y, D)) - lie(Y, lie(X, D))
        rep.record(_same(lhs, rhs), (t, m, p, k))
    return rep


def check_principal(n=50, seed=2):
    """Principal symbols transform as tensor fields when the order is kept."""
    rng = rng_for(seed)
    rep = CheckReport("sigma(L_X D) == L_X sigma(D)")
    tries = 0
    while rep.total < n and tries < 20 * n:
        tries += 1
        m = rng.randint(1, 4)
        p = rng.randint(0, min(3, m))
        k = rng.randint(1, 3)
        X = random_field(rng, m, rng.randint(1, 3))
        D = random_symbol(rng, m, k, p, x_degree=2, exact_order=True)
        L = lie_symbolic(X, D)
        if L.order() != k:
            continue
        rep.record(_same(principal_symbol(L), lie_tensor(X, principal_symbol(D))), (tries, m, p, k))
    return rep


def _source(name, rng, m):
    """Random ``(p, k)`` admissible as a source of the named operator."""
    if name == "id":
        p, k = rng.randint(0, m), rng.randint(0, 2)
    elif name == "i0":
        p, k = 0, rng.randint(0, 2)
    elif name == "dstar":
        p, k = rng.randint(1, m), rng.randint(0, 2)
    elif name in ("K1p", "dstarK"):
        p, k = rng.randint(0, m - 1), 1
    else:
        p, k = 0, 2
    operator_shape(name, m, p, k)
    return p, k


def check_operator(name, m=3, n=50, field_degree=3, seed=3, lie=lie_symbolic, source=None):
    """Zero residual ``L_X(T D) - T(L_X D)`` for every monomial field of
    degree <= field_degree and ``n`` random D (of source shape ``(p, k)``,
    random when not given)."""
    rng = rng_for(seed)
    T = OPERATORS[name]
    fields = [PolyVectorField.monomial(m, mu, i) for mu, i in monomial_fields(m, field_degree)]
    rep = CheckReport(f"{name} equivariant (m={m}, fields of degree <= {field_degree})")
    for t in range(n):
        p, k = source if source is not None else _source(name, rng, m)
        D = random_symbol(rng, m, k, p, x_degree=2, terms=3)
        TD = T(D)
        good = True
        for X in fields:
            if not _same(lie(X, TD), T(lie(X, D))):
                good = False
                break
        rep.record(good, (t, p, k))
    return rep


def check_K_independence(n=50, seed=4):
    """K computed from two different decompositions of the same operator."""
    rng = rng_for(seed)
    rep = CheckReport("K independent of the decomposition")
    for t in range(n):
        if t % 5 == 4:
            m = rng.randint(1, 3)
            D = random_symbol(rng, m, 2, 0, x_degree=2)
            lam = random_poly(rng, m, 1, 2)
            X, Y = random_field(rng, m, 1, 2), random_field(rng, m, 1, 2)
            dec = null_triple_decomposition(D, lam, X, Y)
            good = _same(dec.reconstruct(), D) and _same(K20_from_decomposition(dec), K_D20(D))
        else:
            m = rng.randint(1, 4)
            p = rng.randint(0, m - 1)
            D = random_symbol(rng, m, 1, p, x_degree=2)
            lam = random_zero_order(rng, m, p)
            X = random_field(rng, m, 2, 2)
            dec = null_pair_decomposition(D, lam, X)
            good = _same(dec.reconstruct(), D) and _same(K_from_decomposition(dec), K_D1p(D))
        rep.record(good, (t, m))
    return rep


def check_dstarK_routes(n=50, seed=5):
    """``d* o K`` against the closed form built from a decomposition."""
    rng = rng_for(seed)
    rep = CheckReport("d*K == closed form")
    for t in range(n):
        m = rng.randint(1, 4)
        p = rng.randint(0, m - 1)
        D = random_symbol(rng, m, 1, p, x_degree=2)
        if t % 2:
            dec = null_pair_decomposition(D, random_zero_order(rng, m, p), random_field(rng, m, 2, 2))
        else:
            dec = decompose_D1p(D)
        rep.record(_same(dual_d(K_D1p(D)), dstar_K_closed_form(dec)) and _same(dstar_K(D), dual_d(K_D1p(D))), (t, m, p))
    return rep


def run_all(seed=0, n=50):
    reps = [
        check_lie_routes(max(n, 100), seed),
        check_jacobi(n, seed + 1),
        check_principal(n, seed + 2),
    ]
    for j, name in enumerate(sorted(OPERATORS)):
        reps.append(check_operator(name, n=n, seed=seed + 10 + j))
    reps.append(check_K_independence(n, seed + 4))
    reps.append(check_dstarK_routes(n, seed + 5))
    return reps


__all__ = [
    "CheckReport",
    "check_K_independence",
    "check_dstarK_routes",
    "check_jacobi",
    "check_lie_routes",
    "check_operator",
    "check_principal",
    "run_all",
]
