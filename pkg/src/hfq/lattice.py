"""Exact integer Smith normal form with unimodular transforms.

Matrices are plain lists of rows of Python ints, so entries never
overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    bt = [[b[k][j] for k in range(inner)] for j in range(cols)]
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: list[int]) -> list[int]:
    nz = [(j, x) for j, x in enumerate(v) if x]
    return [sum(row[j] * x for j, x in nz) for row in a]


@dataclass(frozen=True)
class SmithForm:
    """``U @ M @ V == D`` with ``D`` diagonal, ``d_1 | d_2 | ... | d_r``.

    ``diagonal`` holds the r = rank nonzero invariant factors (positive).
    ``U`` is rows x rows and ``V`` is cols x cols, both unimodular.
    """

    rows: int
    cols: int
    diagonal: tuple[int, ...]
    U: Matrix
    V: Matrix

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def diagonal_matrix(self) -> Matrix:
        D = [[0] * self.cols for _ in range(self.rows)]
        for k, d in enumerate(self.diagonal):
            D[k][k] = d
        return D

    def kernel_basis(self) -> list[list[int]]:
        """Z-basis of {a : M a = 0}: the trailing columns of V."""
        return [[self.V[i][k] for i in range(self.cols)] for k in range(self.rank, self.cols)]

    def solve(self, rhs: list[int], scale: int = 1) -> list[int] | None:
        """Some integer ``a`` with ``M a = scale * rhs``, or None."""
        ub = matvec(self.U, rhs)
        if any(ub[k] for k in range(self.rank, self.rows)):
            return None
        c = [0] * self.cols
        for k, d in enumerate(self.diagonal):
            num = scale * ub[k]
            if num % d:
                return None
            c[k] = num // d
        return matvec(self.V, c)

    def order(self, rhs: list[int]) -> int | None:
        """Least n >= 1 with ``n * rhs`` in the column lattice; None if no such n."""
        return self.order_transformed(matvec(self.U, rhs))

    def order_transformed(self, ub: list[int]) -> int | None:
        """``order`` for a right-hand side already multiplied by U."""
        if any(ub[k] for k in range(self.rank, self.rows)):
            return None
        n = 1
        for k in self.torsion_indices:
            d = self.diagonal[k]
            need = d // gcd(d, ub[k])
            n = n * need // gcd(n, need)
        return n

    @property
    def torsion_indices(self) -> tuple[int, ...]:
        """Positions of the invariant factors greater than one."""
        return tuple(k for k, d in enumerate(self.diagonal) if d > 1)

    def coset_key(self, vec: list[int]) -> tuple[int, ...]:
        """Complete invariant of ``vec`` modulo the column lattice."""
        ub = matvec(self.U, vec)
        return tuple(ub[k] % d for k, d in enumerate(self.diagonal)) + tuple(ub[self.rank:])


def smith_normal_form(M: Matrix, rows: int | None = None, cols: int | None = None) -> SmithForm:
    """Smith normal form of an integer matrix, keeping both transforms.

    ``rows``/``cols`` give the shape when ``M`` has no rows or no columns.
    """
    m = len(M) if rows is None else rows
    n = (len(M[0]) if M else 0) if cols is None else cols
    A = [list(row) for row in M]
    U = identity(m)
    V = identity(n)
    diagonal: list[int] = []

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, f):
        # row dst += f * row src
        if f:
            rs, rd = A[src], A[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] += f * rs[k]
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += f * us[k]

    def add_col(dst, src, f):
        if f:
            for row in A:
                if row[src]:
                    row[dst] += f * row[src]
            for row in V:
                if row[src]:
                    row[dst] += f * row[src]

    for t in range(min(m, n)):
        # pivot: smallest nonzero absolute value in the trailing block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    if A[t][j]:
                        dirty = True
            if dirty:
                # move the smallest remainder in row/column t onto the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
                _, i, j = min(cand)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            # enforce divisibility of the remaining block by the pivot
            bad = None
            for i in range(t + 1, m):
                if any(x % piv for x in A[i][t + 1:]):
                    bad = i
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
        diagonal.append(A[t][t])
    return SmithForm(m, n, tuple(diagonal), U, V)
