"""Dense symmetric matrices, cone tests, and an exact simplex-minimization oracle.

The copositivity oracle minimizes x^T Q x over the probability simplex by
enumerating supports: on each face the minimizer in the relative interior
satisfies the stationarity system Q_S x_S = mu * 1, sum(x_S) = 1.  Values at
all supports (vertices included as singletons) cover every candidate, so the
global minimum is exact up to linear-solve roundoff.  Q is copositive iff the
minimum is nonnegative (within the acceptance tolerance).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ResourceLimitError

EQ_TOL = 1e-12           # exact-equality comparisons
PSD_TOL = 1e-9           # cone acceptance threshold (min eigenvalue / simplex min)
DISPLAY_DIGITS = 6       # significant digits in human-readable reports
DEFAULT_DIM_CAP = 4096   # construction cap for kron/odot results
COPOSITIVE_DIM_CAP = 12  # support enumeration budget (2^n - 1 supports)

_GRID_STEPS = 64         # dense-grid fallback resolution for degenerate faces
_GRID_MAX_SUPPORT = 4    # grid fallback is combinatorial; larger faces use lstsq
_REFINE_STEP = 1e-10     # local refinement terminates at this step size


@dataclass(frozen=True, eq=False)
class Witness:
    """A vector certifying a cone violation; value = vector^T M vector."""

    vector: np.ndarray
    value: float


@dataclass(frozen=True, eq=False)
class SimplexPoint:
    """A point of the probability simplex (nonnegative, sums to one)."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        object.__setattr__(self, "x", x)
        if x.ndim != 1 or x.size < 1:
            raise ValueError("simplex point must be a nonempty vector")
        if np.any(x < 0):
            raise ValueError("simplex point has negative coordinates")
        if abs(math.fsum(x.tolist()) - 1.0) > EQ_TOL:
            raise ValueError("simplex point coordinates do not sum to 1")


class SymMatrix:
    """Real symmetric matrix with exactly mirrored storage."""

    __slots__ = ("a",)

    def __init__(self, data):
        a = np.array(data, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        if a.shape[0] < 1:
            raise ValueError("matrix must have at least one row")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix entries must be finite")
        scale = max(1.0, float(np.max(np.abs(a))))
        if np.max(np.abs(a - a.T)) > 1e-9 * scale:
            raise ValueError("matrix is not symmetric")
        a = (a + a.T) / 2.0  # entrywise exact mirror
        a.setflags(write=False)
        object.__setattr__(self, "a", a)

    @property
    def n(self):
        return self.a.shape[0]

    def __getitem__(self, idx):
        return self.a[idx]

    def to_array(self):
        return np.array(self.a)

    def __add__(self, other):
        return SymMatrix(self.a + other.a)

    def __sub__(self, other):
        return SymMatrix(self.a - other.a)

    def __mul__(self, scalar):
        return SymMatrix(self.a * float(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, SymMatrix)
            and self.n == other.n
            and bool(np.array_equal(self.a, other.a))
        )

    def __hash__(self):
        return hash((self.n, self.a.tobytes()))

    def __repr__(self):
        return f"SymMatrix(n={self.n})"


def all_ones(n):
    """The n x n all-ones matrix."""
    return SymMatrix(np.ones((n, n)))


def identity(n):
    return SymMatrix(np.eye(n))


def zeros(n):
    return SymMatrix(np.zeros((n, n)))


def lambda2():
    """The 2x2 matrix [[1, -1], [-1, 1]]."""
    return SymMatrix([[1.0, -1.0], [-1.0, 1.0]])


def kron(q, r, *, max_dim=DEFAULT_DIM_CAP):
    """Kronecker product with row-major flat index i * dim(R) + j."""
    n = q.n * r.n
    if n > max_dim:
        raise ResourceLimitError(f"kron result dimension {n} exceeds cap {max_dim}")
    return SymMatrix(np.kron(q.a, r.a))


def odot(q, r, *, max_dim=DEFAULT_DIM_CAP):
    """The product Q (.) R = (Q+J) x (R+J) - J, computed via its expansion
    Q x R + Q x J + J x R so that the 1x1 zero matrix is exactly neutral."""
    n = q.n * r.n
    if n > max_dim:
        raise ResourceLimitError(f"odot result dimension {n} exceeds cap {max_dim}")
    jq = np.ones((q.n, q.n))
    jr = np.ones((r.n, r.n))
    return SymMatrix(np.kron(q.a, r.a) + np.kron(q.a, jr) + np.kron(jq, r.a))


def quad_form(m, x):
    """x^T M x with compensated summation over all n^2 terms."""
    x = np.asarray(x, dtype=float)
    if x.shape != (m.n,):
        raise ValueError(f"vector length {x.shape} does not match matrix dimension {m.n}")
    terms = (x[:, None] * m.a * x[None, :]).ravel()
    return math.fsum(terms.tolist())


def is_psd(m, tol=PSD_TOL):
    """(True, None) if min eigenvalue >= -tol, else (False, eigenvector Witness)."""
    vals, vecs = np.linalg.eigh(m.a)
    if vals[0] >= -tol:
        return True, None
    v = np.array(vecs[:, 0])
    return False, Witness(vector=v, value=quad_form(m, v))


def _refine_on_face(a, x):
    """Pattern search transferring mass between coordinates; keeps the simplex
    constraint exact.  Step halves from 1/_GRID_STEPS down to _REFINE_STEP."""
    s = len(x)
    cur = float(x @ a @ x)
    delta = 1.0 / _GRID_STEPS
    while delta > _REFINE_STEP:
        improved = False
        for i in range(s):
            if x[i] < delta:
                continue
            for j in range(s):
                if i == j:
                    continue
                y = x.copy()
                y[i] -= delta
                y[j] += delta
                val = float(y @ a @ y)
                if val < cur:
                    x, cur = y, val
                    improved = True
        if not improved:
            delta /= 2.0
    return x, cur


_FACE_GRIDS = {}  # (dimension, steps) -> array of simplex points, built once


def _face_grid_points(s, total):
    key = (s, total)
    if key not in _FACE_GRIDS:
        combos = np.array(
            list(itertools.combinations(range(total + s - 1), s - 1)),
            dtype=np.int64,
        ).reshape(-1, s - 1)
        bounds = np.hstack([
            np.full((len(combos), 1), -1, dtype=np.int64),
            combos,
            np.full((len(combos), 1), total + s - 1, dtype=np.int64),
        ])
        _FACE_GRIDS[key] = (np.diff(bounds, axis=1) - 1).astype(float) / total
    return _FACE_GRIDS[key]


def _face_grid_min(a):
    """Dense grid (step 1/_GRID_STEPS) plus refinement on a full-dimensional face."""
    pts = _face_grid_points(a.shape[0], _GRID_STEPS)
    vals = np.einsum("ij,jk,ik->i", pts, a, pts)
    best = int(np.argmin(vals))
    x, val = _refine_on_face(a, pts[best].copy())
    return val, x


def min_quadratic_on_simplex(q, *, max_dim=COPOSITIVE_DIM_CAP):
    """Exact minimum of x^T Q x over the probability simplex.

    Enumerates all 2^n - 1 supports.  Each support contributes its interior
    stationary point when the bordered system is nonsingular; degenerate
    supports fall back to a dense grid (small faces) or a least-squares
    stationary solve (all stationary points on a face share one value).
    Returns (value, SimplexPoint); ties broken by lexicographically smallest
    support.
    """
    n = q.n
    if n > max_dim:
        raise ResourceLimitError(
            f"support enumeration capped at dimension {max_dim}, got {n}"
        )
    a = q.to_array()
    best_val = math.inf
    best_x = None
    best_support = None

    def consider(val, idx, x_face):
        nonlocal best_val, best_x, best_support
        support = tuple(idx)
        if val < best_val or (val == best_val and support < best_support):
            best_val = val
            best_support = support
            full = np.zeros(n)
            full[list(idx)] = x_face
            best_x = full

    for mask in range(1, 1 << n):
        idx = [i for i in range(n) if (mask >> i) & 1]
        s = len(idx)
        if s == 1:
            consider(float(a[idx[0], idx[0]]), idx, np.array([1.0]))
            continue
        sub = a[np.ix_(idx, idx)]
        k = np.zeros((s + 1, s + 1))
        k[:s, :s] = sub
        k[:s, s] = -1.0
        k[s, :s] = 1.0
        rhs = np.zeros(s + 1)
        rhs[s] = 1.0
        scale = max(1.0, float(np.max(np.abs(sub))))
        sol = None
        try:
            cand = np.linalg.solve(k, rhs)
            if np.max(np.abs(k @ cand - rhs)) <= 1e-8 * scale:
                sol = cand
        except np.linalg.LinAlgError:
            sol = None
        if sol is not None:
            x = sol[:s]
            if np.all(x > 0):
                val = math.fsum((x[:, None] * sub * x[None, :]).ravel().tolist())
                consider(val, idx, x)
            continue
        # degenerate stationarity system: the stationary set is affine and the
        # form is constant on it, so any interior least-squares solution
        # carries the face's stationary value
        cand, *_ = np.linalg.lstsq(k, rhs, rcond=None)
        if np.max(np.abs(k @ cand - rhs)) <= 1e-8 * scale and np.all(cand[:s] > 0):
            x = cand[:s]
            val = math.fsum((x[:, None] * sub * x[None, :]).ravel().tolist())
            consider(val, idx, x)
        elif s <= _GRID_MAX_SUPPORT:
            val, x = _face_grid_min(sub)
            consider(val, idx, x)
        # otherwise: no interior stationary point on this face; its boundary
        # is covered by smaller supports
    x = np.maximum(best_x, 0.0)
    x = x / math.fsum(x.tolist())
    return best_val, SimplexPoint(x=x)


def is_copositive_oracle(q, *, max_dim=COPOSITIVE_DIM_CAP, tol=PSD_TOL):
    """(True, None) if min_{simplex} x^T Q x >= -tol, else (False, Witness)."""
    value, point = min_quadratic_on_simplex(q, max_dim=max_dim)
    if value >= -tol:
        return True, None
    return False, Witness(vector=point.x, value=value)


def lemma1_transform(q, pairs):
    """Replace the listed off-diagonal entries of a constant-diagonal matrix
    with the diagonal value; preserves copositivity."""
    d = np.diag(q.a)
    mu = float(d[0])
    if np.max(np.abs(d - mu)) > EQ_TOL * max(1.0, abs(mu)):
        raise ValueError("matrix diagonal is not constant")
    out = q.to_array()
    for s, t in pairs:
        if s == t:
            raise ValueError(f"pair ({s}, {t}) is not off-diagonal")
        if not (0 <= s < q.n and 0 <= t < q.n):
            raise ValueError(f"pair ({s}, {t}) out of range")
        out[s, t] = mu
        out[t, s] = mu
    return SymMatrix(out)


# ---------------------------------------------------------------------------
# text serialization: first line is n, then n rows of 17-significant-digit
# entries. %.17g round-trips doubles exactly.

def write_matrix_text(m):
    lines = [str(m.n)]
    for row in m.a:
        lines.append(" ".join(f"{v:.17g}" for v in row))
    return "\n".join(lines) + "\n"


def read_matrix_text(text):
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    n = int(lines[0])
    if len(lines) != n + 1:
        raise ValueError(f"expected {n} rows, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        row = [float(tok) for tok in ln.split()]
        if len(row) != n:
            raise ValueError(f"row has {len(row)} entries, expected {n}")
        rows.append(row)
    return SymMatrix(rows)
