"""Exact sparse Gaussian elimination over the rationals.

Rows and vectors are ``{column: Fraction}`` dicts.  ``RowReducer`` keeps its
pivot rows in reduced row echelon form while rows stream in, so the kernel
can be read off at any time; kernel bases are returned in the unique reduced
echelon form of the kernel itself (leading coordinate 1), which makes them
independent of the order in which rows arrived.
"""

from fractions import Fraction


class SparseMatrix:
    """Row list over a fixed number of columns."""

    __slots__ = ("ncols", "rows")

    def __init__(self, ncols, rows=None):
        self.ncols = ncols
        self.rows = []
        for r in rows or []:
            self.append(r)

    @classmethod
    def from_dense(cls, dense, ncols=None):
        if ncols is None:
            ncols = len(dense[0]) if dense else 0
        return cls(ncols, [{j: x for j, x in enumerate(row) if x} for row in dense])

    def append(self, row):
        row = {j: Fraction(v) for j, v in row.items() if v}
        if any(j < 0 or j >= self.ncols for j in row):
            raise IndexError("row entry outside the column range")
        self.rows.append(row)

    @property
    def nrows(self):
        return len(self.rows)

    def to_dense(self):
        out = []
        for r in self.rows:
            line = [Fraction(0)] * self.ncols
            for j, v in r.items():
                line[j] = v
            out.append(line)
        return out

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={sum(map(len, self.rows))})"


class RowReducer:
    def __init__(self, ncols):
        self.ncols = ncols
        self.pivots = {}
        # non-pivot column -> pivot columns whose row has an entry there
        self._occ = {}

    @property
    def rank(self):
        return len(self.pivots)

    @property
    def full(self):
        return len(self.pivots) == self.ncols

    def reduce(self, row):
        """Remainder of ``row`` modulo the current row space."""
        row = {j: v for j, v in row.items() if v}
        for c in [c for c in row if c in self.pivots]:
            v = row.pop(c)
            for cc, pv in self.pivots[c].items():
                if cc == c:
                    continue
                nv = row.get(cc, 0) - v * pv
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
        return row

    def add(self, row):
        """Insert a row; return True when the rank grew."""
        row = self.reduce(row)
        if not row:
            return False
        piv = min(row)
        inv = 1 / Fraction(row[piv])
        row = {c: v * inv for c, v in row.items()}
        occ = self._occ
        for pc in occ.pop(piv, ()):
            prow = self.pivots[pc]
            f = prow.pop(piv)
            for cc, v in row.items():
                if cc == piv:
                    continue
                nv = prow.get(cc, 0) - f * v
                if nv:
                    if cc not in prow:
                        occ.setdefault(cc, set()).add(pc)
                    prow[cc] = nv
                elif cc in prow:
                    del prow[cc]
                    occ[cc].discard(pc)
        self.pivots[piv] = row
        for cc in row:
            if cc != piv:
                occ.setdefault(cc, set()).add(piv)
        return True

    def kernel(self):
        vecs = []
        for f in range(self.ncols):
            if f in self.pivots:
                continue
            v = {f: Fraction(1)}
            for pc in self._occ.get(f, ()):
                v[pc] = -self.pivots[pc][f]
            vecs.append(v)
        return canonical_basis(vecs, self.ncols)

    def rref(self):
        return [dict(sorted(self.pivots[c].items())) for c in sorted(self.pivots)]


def canonical_basis(vectors, ncols=None):
    """Reduced echelon basis of the span of ``vectors`` (rows sorted by
    leading column, each leading coordinate equal to 1)."""
    if ncols is None:
        ncols = 1 + max((max(v) for v in vectors if v), default=-1)
    red = RowReducer(ncols)
    for v in vectors:
        red.add(v)
    return red.rref()


def kernel(matrix):
    """``(dimension, basis)`` of the right kernel of a SparseMatrix (or a
    dense list of rows)."""
    if not isinstance(matrix, SparseMatrix):
        matrix = SparseMatrix.from_dense(matrix)
    red = RowReducer(matrix.ncols)
    for r in matrix.rows:
        red.add(r)
        if red.full:
            break
    basis = red.kernel()
    return len(basis), basis


def rank(vectors, ncols=None):
    return len(canonical_basis(vectors, ncols))


def same_span(a, b, ncols=None):
    """Mutual membership test by ranks."""
    ra, rb = rank(a, ncols), rank(b, ncols)
    return ra == rb == rank(list(a) + list(b), ncols)


def in_span(v, vectors, ncols=None):
    return rank(list(vectors) + [v], ncols) == rank(vectors, ncols)


def dense(v, ncols):
    out = [Fraction(0)] * ncols
    for j, x in v.items():
        out[j] = x
    return out
