"""Known dimensions of the spaces of equivariant maps, cell grids and
stabilization runs.

A cell is ``(m, p, q, k, l)``.  With the natural pairing of orders

    q = p - 2, p - 1  ->  l = k + 1
    q = p             ->  l = k
    q = p + 1         ->  l = k - 1

the dimensions are known in closed form for non-borderline cells:

* q = p - 2: always 0;
* q = p - 1: 1, spanned by the dual differential;
* q = p: 1 (the identity), except p = 0, k > 0 and p > 0, k = 1, which
  are 2-dimensional (identity with I0, resp. identity with d*K);
* q = p + 1: 0, except k = 1 and (p, k) = (0, 2), which are spanned by K.
"""

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor

from .classify import classify_direct, is_borderline


def natural_l(p, q, k):
    """Target order paired with the source order ``k``; None if the pairing
    is negative or ``q`` is not an admissible target degree."""
    shift = q - p
    if shift in (-2, -1):
        return k + 1
    if shift == 0:
        return k
    if shift == 1:
        return k - 1 if k >= 1 else None
    return None


def expected_dimension(m, p, q, k, l):
    """Closed-form dimension for paired, non-borderline cells, else None."""
    if q < 0 or natural_l(p, q, k) != l or is_borderline(m, p, q):
        return None
    shift = q - p
    if shift == -2:
        return 0
    if shift == -1:
        return 1
    if shift == 0:
        if p == 0:
            return 1 if k == 0 else 2
        return 2 if k == 1 else 1
    return 1 if k == 1 or (p, k) == (0, 2) else 0


def expected_basis(m, p, q, k, l):
    """Names of canonical operators spanning the space (paired cells)."""
    dim = expected_dimension(m, p, q, k, l)
    if not dim:
        return [] if dim == 0 else None
    shift = q - p
    if shift == -1:
        return ["dstar"]
    if shift == 1:
        return ["K1p"] if k == 1 else ["K20"]
    if dim == 1:
        return ["id"]
    return ["id", "i0"] if p == 0 else ["id", "dstarK"]


# (m, p, q, k, l) for every cell of the reference table
REFERENCE_CELLS = [
    (4, 2, 0, 0, 1), (4, 2, 0, 1, 2), (4, 2, 0, 2, 3),
    (3, 0, 1, 1, 0), (3, 1, 2, 1, 0), (3, 0, 1, 2, 1),
    (3, 1, 2, 2, 1), (3, 0, 1, 3, 2), (3, 1, 2, 3, 2),
    (3, 1, 0, 0, 1), (3, 1, 0, 1, 2), (3, 1, 0, 2, 3), (4, 2, 1, 1, 2),
    (3, 0, 0, 0, 0), (3, 0, 0, 1, 1), (3, 0, 0, 2, 2), (3, 1, 1, 1, 1),
    (3, 1, 1, 0, 0), (3, 1, 1, 2, 2), (4, 2, 2, 1, 1),
]


def grid(ms, ps, q_offsets, ks, l_rule="natural"):
    """Cells of a parameter grid; the target order is either the natural
    pairing (``"natural"``) or a fixed integer.  Cells with an impossible
    shape are skipped."""
    out = []
    for m in ms:
        for p in ps:
            for dq in q_offsets:
                q = p + dq
                if q < 0 or q > m or p > m:
                    continue
                for k in ks:
                    l = natural_l(p, q, k) if l_rule == "natural" else int(l_rule)
                    if l is None or l < 0:
                        continue
                    out.append((m, p, q, k, l))
    return sorted(set(out))


def stabilization(m, p, q, k, l, R=None, g=2):
    """Dimensions under the default bounds and under R+1, g+1, x_deg = 1."""
    base = classify_direct(m, p, q, k, l, R=R, g=g, verify=False)
    R0 = base.meta["R"]
    dims = {
        "base": base.dimension,
        "R+1": classify_direct(m, p, q, k, l, R=R0 + 1, g=g, verify=False).dimension,
        "g+1": classify_direct(m, p, q, k, l, R=R0, g=g + 1, verify=False).dimension,
        "x_deg=1": classify_direct(m, p, q, k, l, R=R0, x_deg=1, g=g, verify=False).dimension,
    }
    return {"cell": [m, p, q, k, l], "dimensions": dims, "stable": len(set(dims.values())) == 1}


def _solve_cell(args):
    cell, path, R, x_deg, g = args
    m, p, q, k, l = cell
    results = []
    if path in ("direct", "both"):
        results.append(classify_direct(m, p, q, k, l, R=R, x_deg=x_deg, g=g))
    if path in ("ansatz", "both"):
        from .ansatz import classify_ansatz
        results.append(classify_ansatz(m, p, q, k, l, R=R, g=g))
    return results


def worker_count():
    try:
        n = int(os.environ.get("EQUIVAR_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def solve_cells(cells, path="direct", R=None, x_deg=0, g=2, workers=None):
    """Results per cell (a list with one entry per solver path), in cell
    order regardless of how many worker processes run."""
    workers = worker_count() if workers is None else workers
    jobs = [(tuple(c), path, R, x_deg, g) for c in cells]
    if workers <= 1 or len(jobs) <= 1:
        return [_solve_cell(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_solve_cell, jobs))


def table_rows(cells, path="direct", R=None, x_deg=0, g=2, workers=None):
    rows = []
    for cell, results in zip(cells, solve_cells(cells, path, R, x_deg, g, workers)):
        m, p, q, k, l = cell
        exp = expected_dimension(*cell)
        dims = {r.path: r.dimension for r in results}
        border = is_borderline(m, p, q)
        if border:
            status = "borderline"
        elif exp is None:
            status = "unpaired"
        elif all(d == exp for d in dims.values()) and len(set(dims.values())) == 1:
            status = "match"
        else:
            status = "MISMATCH"
        rows.append({
            "m": m, "p": p, "q": q, "k": k, "l": l,
            "direct": dims.get("direct"), "ansatz": dims.get("ansatz"),
            "expected": exp, "status": status,
            "stabilized": all(r.stabilized for r in results),
        })
    return rows


COLUMNS = ["m", "p", "q", "k", "l", "direct", "ansatz", "expected", "status", "stabilized"]


def _cell_text(v):
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def render(rows, fmt="markdown"):
    if fmt == "json":
        return json.dumps(rows, sort_keys=True, indent=1) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=COLUMNS, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: _cell_text(r[c]) for c in COLUMNS})
        return buf.getvalue()
    if fmt != "markdown":
        raise ValueError(f"unknown format {fmt!r}")
    lines = ["| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
    for r in rows:
        lines.append("| " + " | ".join(_cell_text(r[c]) for c in COLUMNS) + " |")
    return "\n".join(lines) + "\n"


__all__ = [
    "REFERENCE_CELLS",
    "expected_basis",
    "expected_dimension",
    "grid",
    "natural_l",
    "render",
    "solve_cells",
    "stabilization",
    "table_rows",
    "worker_count",
]
