# Equivariant maps between first-order operators on 1-forms in dimension 3.
#
# The direct solver builds every constant-coefficient local map between the
# two symbol spaces, imposes L_X T = T L_X for all polynomial fields of
# degree <= 2, and reads off the kernel.  The ansatz solver starts from the
# invariant polynomials instead.  Both should find the identity and d*K.

from equivar import classify_direct, cross_validate, encode_operator
from equivar.canonical import dstar_K, identity

cell = (3, 1, 1, 1, 1)
res = classify_direct(*cell)
print(f"cell (m,p,q,k,l) = {cell}: dimension {res.dimension}, stabilized {res.stabilized}")
print("solver stats:", {k: res.meta[k] for k in ("columns", "rows", "rank")})

for n, T in enumerate(res.basis):
    print(f"\nbasis vector {n}: {len(T.coeffs)} coordinates")
    for key, c in sorted(T.coeffs.items())[:4]:
        print("   ", key, c)

# are the known operators inside the computed span?
from equivar.classify import _Columns, candidate_vector, column_order
from equivar.linalg import in_span

R = res.meta["R"]
known = {"id": encode_operator(identity, *cell, R=R), "d*K": encode_operator(dstar_K, *cell, R=R)}
keys = sorted({key for T in res.basis + list(known.values()) for key in T.coeffs}, key=column_order)
cols = _Columns(*cell, keys)
span = [candidate_vector(T, cols) for T in res.basis]
for name, T in known.items():
    print(f"{name:4s} in span:", in_span(candidate_vector(T, cols), span, len(keys)))

print("\ncross-validation:", cross_validate(*cell))
