"""Dense linear algebra over Gaussian rationals, with a numpy twin for floats.

Matrices are lists of rows.  The exact routines never round; the float
routines take an explicit absolute tolerance for rank decisions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .scalars import EXACT, ONE, ZERO, GaussianRational, conj

Vector = List
Matrix = List[List]


@dataclass
class SolveResult:
    """Outcome of ``A x = b``: a solution, or a left-null certificate ``y``.

    The certificate satisfies ``y A = 0`` and ``y b != 0``.
    """

    solution: Optional[Vector]
    certificate: Optional[Vector]

    @property
    def ok(self) -> bool:
        return self.solution is not None


def _is_zero(x) -> bool:
    return not x


def rref(rows: Matrix, ncols: int, pivot_limit: Optional[int] = None):
    """Reduced row echelon form; returns (rows, pivot columns).

    Only the first ``pivot_limit`` columns are eligible as pivots, which lets
    callers carry augmented blocks along.
    """
    limit = ncols if pivot_limit is None else pivot_limit
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    nrows = len(mat)
    for c in range(limit):
        if r >= nrows:
            break
        pr = None
        for i in range(r, nrows):
            if mat[i][c]:
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        row = mat[r]
        inv = row[c].inverse()
        row = [x * inv if x else x for x in row]
        mat[r] = row
        nz = [j for j in range(ncols) if row[j]]
        for i in range(nrows):
            if i != r:
                f = mat[i][c]
                if f:
                    other = mat[i]
                    for j in nz:
                        other[j] = other[j] - f * row[j]
        pivots.append(c)
        r += 1
    return mat, pivots


def rank(rows: Matrix, ncols: int) -> int:
    if not rows or not ncols:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Matrix, ncols: int) -> List[Vector]:
    """Basis of {x : A x = 0}, one vector per free column, in column order."""
    if not rows:
        return [[ONE if j == i else ZERO for j in range(ncols)] for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, pc in enumerate(pivots):
            x = red[i][f]
            if x:
                v[pc] = -x
        basis.append(v)
    return basis


def transpose(rows: Matrix, nrows: int, ncols: int) -> Matrix:
    return [[rows[i][j] for i in range(nrows)] for j in range(ncols)]


def solve(rows: Matrix, ncols: int, rhs: Vector) -> SolveResult:
    """Solve ``A x = b`` exactly, or certify infeasibility."""
    m = len(rows)
    if m == 0:
        return SolveResult([ZERO] * ncols, None)
    aug = []
    for i in range(m):
        aug.append(list(rows[i]) + [rhs[i]] + [ONE if j == i else ZERO for j in range(m)])
    width = ncols + 1 + m
    red, pivots = rref(aug, width, pivot_limit=ncols)
    for i in range(len(pivots), m):
        if red[i][ncols]:
            return SolveResult(None, red[i][ncols + 1:])
    x = [ZERO] * ncols
    for i, pc in enumerate(pivots):
        x[pc] = red[i][ncols]
    return SolveResult(x, None)


def matvec(rows: Matrix, x: Vector) -> Vector:
    out = []
    for row in rows:
        s = ZERO
        for a, b in zip(row, x):
            if a and b:
                s = s + a * b
        out.append(s)
    return out


def weighted_inner(x: Vector, y: Vector, weights: Optional[Sequence] = None):
    s = ZERO
    for i, (a, b) in enumerate(zip(x, y)):
        if a and b:
            t = a * conj(b)
            s = s + (t * weights[i] if weights is not None else t)
    return s


def least_norm(particular: Vector, kernel: List[Vector], weights: Optional[Sequence] = None) -> Vector:
    """Shift a particular solution by the kernel to minimise the weighted norm."""
    if not kernel:
        return particular
    k = len(kernel)
    gram = [[weighted_inner(kernel[j], kernel[i], weights) for j in range(k)] for i in range(k)]
    rhs = [weighted_inner(particular, kernel[i], weights) for i in range(k)]
    coeffs = solve(gram, k, rhs).solution
    out = list(particular)
    for c, v in zip(coeffs, kernel):
        if c:
            for i, a in enumerate(v):
                if a:
                    out[i] = out[i] - c * a
    return out


def solve_least_norm(rows: Matrix, ncols: int, rhs: Vector, weights: Optional[Sequence] = None) -> SolveResult:
    res = solve(rows, ncols, rhs)
    if not res.ok:
        return res
    return SolveResult(least_norm(res.solution, nullspace(rows, ncols), weights), None)


def orthogonalize(vectors: List[Vector], weights: Optional[Sequence] = None) -> List[Vector]:
    """Gram–Schmidt without normalisation; drops dependent vectors."""
    out: List[Vector] = []
    norms = []
    for v in vectors:
        w = list(v)
        for u, nu in zip(out, norms):
            c = weighted_inner(w, u, weights) / nu
            if c:
                w = [a - c * b for a, b in zip(w, u)]
        nw = weighted_inner(w, w, weights)
        if nw:
            out.append(w)
            norms.append(nw)
    return out


def independent_columns(vectors: List[Vector], dim: int) -> List[int]:
    """Indices of a maximal independent prefix-greedy subset of ``vectors``."""
    if not vectors:
        return []
    rows = transpose(vectors, len(vectors), dim)
    return rref(rows, len(vectors))[1]


def complement_basis(span: List[Vector], candidates: List[Vector], dim: int) -> List[int]:
    """Greedy choice of candidates independent modulo ``span``."""
    allv = list(span) + list(candidates)
    cols = independent_columns(allv, dim)
    base = len(span)
    return [c - base for c in cols if c >= base]


def is_zero_vector(v: Vector) -> bool:
    return not any(v)


# ---------------------------------------------------------------- float twin


def to_numpy(rows: Matrix, nrows: int, ncols: int) -> np.ndarray:
    a = np.zeros((nrows, ncols), dtype=complex)
    for i in range(nrows):
        for j in range(ncols):
            if rows[i][j]:
                a[i, j] = complex(rows[i][j])
    return a


def float_rank(a: np.ndarray, tol: float) -> int:
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > tol))


def float_nullspace(a: np.ndarray, tol: float) -> np.ndarray:
    """Orthonormal (Euclidean) basis of the kernel, columns of the result."""
    ncols = a.shape[1]
    if a.shape[0] == 0:
        return np.eye(ncols, dtype=complex)
    _, s, vh = np.linalg.svd(a)
    r = int(np.sum(s > tol))
    return vh[r:].conj().T


def float_solve_least_norm(a: np.ndarray, b: np.ndarray, weights: Optional[np.ndarray] = None):
    """Weighted least-norm least-squares solution and its residual norm."""
    if weights is None:
        x, *_ = np.linalg.lstsq(a, b, rcond=None)
    else:
        scale = 1.0 / np.sqrt(weights)
        y, *_ = np.linalg.lstsq(a * scale[None, :], b, rcond=None)
        x = y * scale
    return x, float(np.linalg.norm(a @ x - b))


def ring_is_exact(ring: str) -> bool:
    return ring == EXACT


__all__ = [
    "SolveResult",
    "complement_basis",
    "float_nullspace",
    "float_rank",
    "float_solve_least_norm",
    "independent_columns",
    "least_norm",
    "matvec",
    "nullspace",
    "orthogonalize",
    "rank",
    "rref",
    "solve",
    "solve_least_norm",
    "to_numpy",
    "transpose",
    "weighted_inner",
    "GaussianRational",
]
