"""Exact linear algebra over prime fields F_p.

Dense routines are numpy int64 matrices reduced in place; the sparse solver
keeps pivot rows as {column: coefficient} dicts for systems too large to
densify (tens of thousands of unknowns, short rows).
"""

import numpy as np


def _inv(a, p):
    return pow(int(a) % p, p - 2, p)


def rref_dense(a, p):
    """Reduced row echelon form; returns (reduced nonzero rows, pivot columns)."""
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if len(nz) == 0:
            continue
        if nz[0] != 0:
            a[[r, r + nz[0]]] = a[[r + nz[0], r]]
        a[r] = a[r] * _inv(a[r, c], p) % p
        hit = np.nonzero(a[:, c])[0]
        hit = hit[hit != r]
        if len(hit):
            a[hit] = (a[hit] - np.outer(a[hit, c], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank_dense(a, p):
    return len(rref_dense(a, p)[1])


def nullspace_dense(a, p):
    """Basis of the right nullspace, one vector per free column (canonical)."""
    a = np.asarray(a, dtype=np.int64)
    red, pivots = rref_dense(a, p)
    cols = a.shape[1]
    pivot_set = set(pivots)
    basis = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = np.zeros(cols, dtype=np.int64)
        v[free] = 1
        for i, c in enumerate(pivots):
            v[c] = (-red[i, free]) % p
        basis.append(v)
    return basis


def solve_dense(a, b, p):
    """One solution x of A x = b, or None."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    red, pivots = rref_dense(np.hstack([a, b]), p)
    cols = a.shape[1]
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for i, c in enumerate(pivots):
        x[c] = red[i, cols]
    return x


class SparseSolver:
    """Incremental row reduction over F_p with dict rows.

    Rows are reduced against existing pivots on insertion (echelon, not
    reduced); full back-substitution happens once, on demand.
    """

    def __init__(self, p):
        self.p = p
        self.pivots = {}  # pivot column -> row dict (row[pivot] == 1)
        self._reduced = True

    @property
    def rank(self):
        return len(self.pivots)

    def reduce_row(self, row):
        """Reduce a {col: coef} row against the current pivots (copy)."""
        p = self.p
        row = {c: v % p for c, v in row.items() if v % p}
        while row:
            c = min(row)
            piv = self.pivots.get(c)
            if piv is None:
                return row
            mult = row[c]
            for pc, pv in piv.items():
                acc = (row.get(pc, 0) - mult * pv) % p
                if acc:
                    row[pc] = acc
                elif pc in row:
                    del row[pc]
        return row

    def add_row(self, row):
        """Insert one equation; returns True if it increased the rank."""
        row = self.reduce_row(row)
        if not row:
            return False
        c = min(row)
        inv = _inv(row[c], self.p)
        self.pivots[c] = {k: v * inv % self.p for k, v in row.items()}
        self._reduced = False
        return True

    def _back_substitute(self):
        if self._reduced:
            return
        p = self.p
        for c in sorted(self.pivots, reverse=True):
            src = self.pivots[c]
            for c2, row in self.pivots.items():
                if c2 >= c or c not in row:
                    continue
                mult = row[c]
                for k, v in src.items():
                    acc = (row.get(k, 0) - mult * v) % p
                    if acc:
                        row[k] = acc
                    elif k in row:
                        del row[k]
        self._reduced = True

    def nullspace_basis(self, ncols):
        """Dense basis vectors of the solution space on ncols unknowns."""
        self._back_substitute()
        basis = []
        for free in range(ncols):
            if free in self.pivots:
                continue
            v = np.zeros(ncols, dtype=np.int64)
            v[free] = 1
            for c, row in self.pivots.items():
                coef = row.get(free)
                if coef:
                    v[c] = (-coef) % self.p
            basis.append(v)
        return basis
