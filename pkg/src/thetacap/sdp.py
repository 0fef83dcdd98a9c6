"""Self-contained primal-dual interior-point solver for block conic programs.

Problems are stated in primal standard form

    minimize    <C, X>
    subject to  <A_i, X> = b_i          (i = 1..m)
                X in K,

where X is a tuple of blocks and K a product of positive-semidefinite matrix
cones and nonnegative orthants.  The solver is an infeasible-start Mehrotra
predictor-corrector method with Nesterov-Todd scaling.  Symmetric blocks are
vectorized with sqrt(2)-scaled off-diagonals so Euclidean inner products of
vectors equal trace inner products of matrices; each iteration solves one
dense Schur-complement system by Cholesky factorization (shared between the
predictor and the corrector).  Everything is deterministic: no randomness,
no iteration-order dependence beyond the input ordering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .errors import SolverFailureError

DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 200
_FRACTION_TO_BOUNDARY = 0.98
_STALL_LIMIT = 20
_TRACE = None  # diagnostic hook: called as _TRACE(it, relgap, pinf, dinf)
_TRACE2 = None  # diagnostic hook: called as _TRACE2(it, sigma, apa, ada, ap, ad)
_PREPROCESS_DENSE_LIMIT = 50_000_000  # skip rank preprocessing above m*D entries
_CHUNK_ENTRIES = 2_000_000            # Schur assembly chunk budget (floats)

VALID_STATUSES = (
    "optimal",
    "primal-infeasible",
    "dual-infeasible",
    "iteration-limit",
    "numerical-failure",
)


@dataclass(frozen=True)
class Block:
    """One cone block: kind is "psd" (matrix) or "nonneg" (vector)."""

    kind: str
    size: int

    def __post_init__(self):
        if self.kind not in ("psd", "nonneg"):
            raise ValueError(f"unknown block kind {self.kind!r}")
        if not isinstance(self.size, int) or self.size < 1:
            raise ValueError(f"block size must be a positive integer, got {self.size!r}")


@dataclass
class Solution:
    status: str
    objective_value: float
    primal: list | None
    dual: np.ndarray | None
    gap: float
    residuals: tuple
    iterations: int


@dataclass
class FeasibilityResult:
    feasible: bool
    point: list | None
    certificate: dict | None
    slack: float


class _Compiled:
    __slots__ = ("blocks", "offsets", "lengths", "D", "psd_meta", "A", "A_blocks", "b", "c")


class ConicProblem:
    """Immutable problem data; constraints are lists of sparse entry triplets.

    A triplet (block, i, j, coeff) contributes coeff * X_ij to the functional
    (the symmetric entry counted once).  For nonneg blocks i must equal j and
    indexes the vector position.
    """

    def __init__(self, blocks, objective=(), constraints=(), name=""):
        self.blocks = tuple(blocks)
        for blk in self.blocks:
            if not isinstance(blk, Block):
                raise ValueError("blocks must be Block instances")
        self.objective = tuple(tuple(t) for t in objective)
        self.constraints = tuple(
            (tuple(tuple(t) for t in trips), float(rhs)) for trips, rhs in constraints
        )
        self.name = name
        for trips, _ in self.constraints:
            self._check_triplets(trips)
        self._check_triplets(self.objective)
        self._compiled = None

    def _check_triplets(self, trips):
        for b, i, j, coeff in trips:
            if not (0 <= b < len(self.blocks)):
                raise ValueError(f"triplet references unknown block {b}")
            blk = self.blocks[b]
            if not (0 <= i < blk.size and 0 <= j < blk.size):
                raise ValueError(f"triplet index ({i},{j}) out of range for block {b}")
            if blk.kind == "nonneg" and i != j:
                raise ValueError("nonneg block triplets must have i == j")
            if not math.isfinite(coeff):
                raise ValueError("triplet coefficient must be finite")

    # -- compilation to vectorized form ------------------------------------

    def compiled(self):
        if self._compiled is None:
            self._compiled = self._compile()
        return self._compiled

    def _compile(self):
        comp = _Compiled()
        comp.blocks = self.blocks
        offsets, lengths, psd_meta = [], [], []
        pos = 0
        for blk in self.blocks:
            offsets.append(pos)
            if blk.kind == "psd":
                d = blk.size
                iu = np.triu_indices(d)
                wsv = np.where(iu[0] == iu[1], 1.0, math.sqrt(2.0))
                pos_map = {}
                for idx, (ii, jj) in enumerate(zip(iu[0], iu[1])):
                    pos_map[(int(ii), int(jj))] = idx
                psd_meta.append((d, iu, wsv, pos_map))
                lengths.append(d * (d + 1) // 2)
            else:
                psd_meta.append(None)
                lengths.append(blk.size)
            pos += lengths[-1]
        comp.offsets, comp.lengths, comp.psd_meta = offsets, lengths, psd_meta
        comp.D = pos

        def add_triplets(rows, cols, vals, row_idx, trips):
            for b, i, j, coeff in trips:
                meta = psd_meta[b]
                if meta is None:
                    rows.append(row_idx)
                    cols.append(offsets[b] + i)
                    vals.append(coeff)
                else:
                    _, _, _, pos_map = meta
                    ii, jj = (i, j) if i <= j else (j, i)
                    rows.append(row_idx)
                    cols.append(offsets[b] + pos_map[(ii, jj)])
                    vals.append(coeff if ii == jj else coeff / math.sqrt(2.0))

        m = len(self.constraints)
        rows, cols, vals = [], [], []
        bvec = np.zeros(m)
        for r, (trips, rhs) in enumerate(self.constraints):
            add_triplets(rows, cols, vals, r, trips)
            bvec[r] = rhs
        comp.A = sp.csr_matrix(
            (vals, (rows, cols)), shape=(m, comp.D), dtype=float
        )
        comp.b = bvec
        crows, ccols, cvals = [], [], []
        add_triplets(crows, ccols, cvals, 0, self.objective)
        cdense = np.zeros(comp.D)
        for ccol, cval in zip(ccols, cvals):
            cdense[ccol] += cval
        comp.c = cdense
        comp.A_blocks = [
            comp.A[:, offsets[bi]:offsets[bi] + lengths[bi]].tocsr()
            for bi in range(len(self.blocks))
        ]
        return comp

    # -- text serialization ------------------------------------------------

    def dump(self):
        lines = ["conic-problem", f"blocks {len(self.blocks)}"]
        for blk in self.blocks:
            lines.append(f"{blk.kind} {blk.size}")
        lines.append(f"objective {len(self.objective)}")
        for b, i, j, coeff in self.objective:
            lines.append(f"{b} {i} {j} {coeff:.17g}")
        lines.append(f"constraints {len(self.constraints)}")
        for trips, rhs in self.constraints:
            lines.append(f"constraint {rhs:.17g} {len(trips)}")
            for b, i, j, coeff in trips:
                lines.append(f"{b} {i} {j} {coeff:.17g}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def load(text):
        toks = [ln.split() for ln in text.splitlines() if ln.strip()]
        if not toks or toks[0] != ["conic-problem"]:
            raise ValueError("not a conic-problem dump")
        k = 1
        if toks[k][0] != "blocks":
            raise ValueError("missing blocks section")
        nblocks = int(toks[k][1])
        k += 1
        blocks = []
        for _ in range(nblocks):
            kind, size = toks[k][0], int(toks[k][1])
            blocks.append(Block(kind, size))
            k += 1
        if toks[k][0] != "objective":
            raise ValueError("missing objective section")
        nnz = int(toks[k][1])
        k += 1
        objective = []
        for _ in range(nnz):
            b, i, j, coeff = toks[k]
            objective.append((int(b), int(i), int(j), float(coeff)))
            k += 1
        if toks[k][0] != "constraints":
            raise ValueError("missing constraints section")
        mcons = int(toks[k][1])
        k += 1
        constraints = []
        for _ in range(mcons):
            if toks[k][0] != "constraint":
                raise ValueError("malformed constraint header")
            rhs, nnz = float(toks[k][1]), int(toks[k][2])
            k += 1
            trips = []
            for _ in range(nnz):
                b, i, j, coeff = toks[k]
                trips.append((int(b), int(i), int(j), float(coeff)))
                k += 1
            constraints.append((trips, rhs))
        return ConicProblem(blocks, objective, constraints)


# ---------------------------------------------------------------------------
# vectorization helpers

def _mat_from_svec(v, meta):
    d, iu, wsv, _ = meta
    vals = v / wsv
    m = np.zeros((d, d))
    m[iu] = vals
    m[iu[1], iu[0]] = vals
    return m


def _svec_from_mat(m, meta):
    _, iu, wsv, _ = meta
    return m[iu] * wsv


# ---------------------------------------------------------------------------
# preprocessing: drop linearly dependent constraint rows, detect inconsistency

def _preprocess(comp):
    m, D = comp.A.shape
    if m == 0:
        return np.arange(0), None
    if m * D > _PREPROCESS_DENSE_LIMIT:
        return np.arange(m), None
    Ad = comp.A.toarray()
    _, R, piv = sla.qr(Ad.T, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0 or diag[0] == 0.0:
        rank = 0
    else:
        rank = int(np.sum(diag > max(m, D) * np.finfo(float).eps * diag[0]))
    keep = np.sort(piv[:rank])
    if rank < m:
        x0, *_ = np.linalg.lstsq(Ad, comp.b, rcond=None)
        resid = comp.b - Ad @ x0
        if np.max(np.abs(resid), initial=0.0) > 1e-8 * (1.0 + np.max(np.abs(comp.b))):
            y = resid / np.linalg.norm(resid)
            if comp.b @ y < 0:
                y = -y
            return keep, y  # Farkas ray for the equality system
    return keep, None


# ---------------------------------------------------------------------------
# Nesterov-Todd scaling

def _chol_repaired(m):
    """Cholesky with an escalating ridge for matrices that rounding has
    pushed marginally outside the cone."""
    try:
        return np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        pass
    scale = max(float(np.trace(m)) / m.shape[0], 1.0)
    for eps in (1e-14, 1e-12, 1e-10):
        try:
            return np.linalg.cholesky(m + eps * scale * np.eye(m.shape[0]))
        except np.linalg.LinAlgError:
            continue
    raise np.linalg.LinAlgError("matrix is not repairably positive definite")


def _nt_scaling(xm, zm):
    """W with W Z W = X, plus Z^{-1}, for symmetric positive definite X, Z."""
    lz = _chol_repaired(zm)
    s = lz.T @ xm @ lz
    vals, vecs = np.linalg.eigh((s + s.T) / 2.0)
    vals = np.clip(vals, 1e-300, None)
    shalf = (vecs * np.sqrt(vals)) @ vecs.T
    tmp = sla.solve_triangular(lz, shalf, trans="T", lower=True)      # Lz^{-T} S^{1/2}
    w = sla.solve_triangular(lz, tmp.T, trans="T", lower=True).T      # ... Lz^{-1}
    w = (w + w.T) / 2.0
    zinv = sla.cho_solve((lz, True), np.eye(zm.shape[0]))
    zinv = (zinv + zinv.T) / 2.0
    return w, zinv


def _max_step_psd(mat, dmat):
    """Largest a with mat + a * dmat PSD (mat positive definite)."""
    lm = _chol_repaired(mat)
    y = sla.solve_triangular(lm, dmat, lower=True)
    y = sla.solve_triangular(lm, y.T, lower=True).T
    lam = np.linalg.eigvalsh((y + y.T) / 2.0)[0]
    if lam >= -1e-300:
        return math.inf
    return -1.0 / lam


def _max_step_nonneg(x, dx):
    neg = dx < 0
    if not np.any(neg):
        return math.inf
    return float(np.min(-x[neg] / dx[neg]))


# ---------------------------------------------------------------------------
# solver

class _State:
    __slots__ = ("comp", "A", "b", "keep", "m", "x", "y", "z", "scal", "M")


def _block_views(state, vec):
    comp = state.comp
    out = []
    for bi in range(len(comp.blocks)):
        sl = vec[comp.offsets[bi]:comp.offsets[bi] + comp.lengths[bi]]
        meta = comp.psd_meta[bi]
        out.append(sl if meta is None else _mat_from_svec(sl, meta))
    return out


def _apply_w(state, vec):
    """The scaling map v -> svec(W smat(v) W) per psd block, w^2 * v on nonneg."""
    comp = state.comp
    out = np.empty_like(vec)
    for bi in range(len(comp.blocks)):
        o, ln = comp.offsets[bi], comp.lengths[bi]
        meta = comp.psd_meta[bi]
        if meta is None:
            out[o:o + ln] = state.scal[bi] * vec[o:o + ln]
        else:
            w = state.scal[bi][0]
            mat = _mat_from_svec(vec[o:o + ln], meta)
            out[o:o + ln] = _svec_from_mat(w @ mat @ w, meta)
    return out


def _assemble_schur(state):
    comp = state.comp
    m = state.m
    M = np.zeros((m, m))
    for bi in range(len(comp.blocks)):
        Ab = comp.A_blocks[bi][state.keep]
        if Ab.nnz == 0:
            continue
        meta = comp.psd_meta[bi]
        if meta is None:
            w2 = state.scal[bi]
            M += (Ab.multiply(w2[None, :]) @ Ab.T).toarray()
        else:
            d, iu, wsv, _ = meta
            w = state.scal[bi][0]
            chunk = max(1, _CHUNK_ENTRIES // (d * d))
            for r0 in range(0, m, chunk):
                r1 = min(m, r0 + chunk)
                dense = Ab[r0:r1].toarray()
                vals = dense / wsv
                T = np.zeros((r1 - r0, d, d))
                T[:, iu[0], iu[1]] = vals
                T[:, iu[1], iu[0]] = vals
                K = np.matmul(np.matmul(w, T), w)
                Ks = K[:, iu[0], iu[1]] * wsv
                M[:, r0:r1] += Ab @ Ks.T
    return (M + M.T) / 2.0


def _factor(M):
    if M.shape[0] == 0:
        return "empty"
    scale = max(1.0, float(np.trace(M)) / M.shape[0])
    for jitter in (0.0, 1e-13, 1e-11, 1e-9):
        try:
            return sla.cho_factor(M + (jitter * scale) * np.eye(M.shape[0]), lower=True)
        except (np.linalg.LinAlgError, ValueError):
            continue
    return None


def _newton(state, cho, Rp, Rd, Rc):
    try:
        if state.m == 0:
            dy = np.zeros(0)
        else:
            rhs = Rp - state.A @ Rc + state.A @ _apply_w(state, Rd)
            if not np.all(np.isfinite(rhs)):
                return None, None, None
            dy = sla.cho_solve(cho, rhs)
            # one round of iterative refinement keeps the direction accurate
            # when the Schur complement is badly conditioned
            resid = rhs - state.M @ dy
            dy = dy + sla.cho_solve(cho, resid)
        dz = Rd - state.A.T @ dy
        dx = Rc - _apply_w(state, dz)
    except (np.linalg.LinAlgError, ValueError):
        return None, None, None
    if not (np.all(np.isfinite(dx)) and np.all(np.isfinite(dz))):
        return None, None, None
    return dx, dy, dz


def _max_steps(state, dx, dz):
    """Maximum primal/dual steps keeping all blocks in their cones, or
    (-1, -1) when the current iterate has numerically left the interior."""
    comp = state.comp
    ap = ad = math.inf
    xs = _block_views(state, state.x)
    zs = _block_views(state, state.z)
    dxs = _block_views(state, dx)
    dzs = _block_views(state, dz)
    try:
        for bi in range(len(comp.blocks)):
            if comp.psd_meta[bi] is None:
                ap = min(ap, _max_step_nonneg(xs[bi], dxs[bi]))
                ad = min(ad, _max_step_nonneg(zs[bi], dzs[bi]))
            else:
                ap = min(ap, _max_step_psd(xs[bi], dxs[bi]))
                ad = min(ad, _max_step_psd(zs[bi], dzs[bi]))
    except np.linalg.LinAlgError:
        return -1.0, -1.0
    return ap, ad


def solve(problem, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER):
    """Solve the conic program; never raises on numerical trouble, the
    outcome is reported in ``Solution.status``."""
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        return _solve_inner(problem, tol, max_iter)


def _solve_inner(problem, tol, max_iter):
    comp = problem.compiled()
    m_orig = comp.A.shape[0]
    keep, farkas = _preprocess(comp)
    if farkas is not None:
        y_full = np.zeros(m_orig)
        y_full[:] = farkas
        return Solution(
            status="primal-infeasible",
            objective_value=math.nan,
            primal=None,
            dual=y_full,
            gap=math.inf,
            residuals=(math.inf, math.inf),
            iterations=0,
        )

    state = _State()
    state.comp = comp
    state.keep = keep
    state.A = comp.A[keep]
    state.b = comp.b[keep]
    state.m = len(keep)

    nu = sum(blk.size for blk in comp.blocks)
    dims = [blk.size for blk in comp.blocks]
    eta = max(
        10.0,
        math.sqrt(max(dims)),
        float(np.max(np.abs(state.b), initial=0.0)),
        float(np.max(np.abs(comp.c), initial=0.0)),
    )
    x = np.zeros(comp.D)
    for bi in range(len(comp.blocks)):
        o, ln = comp.offsets[bi], comp.lengths[bi]
        meta = comp.psd_meta[bi]
        if meta is None:
            x[o:o + ln] = eta
        else:
            x[o:o + ln] = _svec_from_mat(eta * np.eye(meta[0]), meta)
    z = x.copy()
    y = np.zeros(state.m)
    state.x, state.y, state.z = x, y, z

    bnorm = 1.0 + float(np.max(np.abs(state.b), initial=0.0))
    cnorm = 1.0 + float(np.max(np.abs(comp.c), initial=0.0))
    status = "iteration-limit"
    collapse = 0
    iters = 0
    best = None
    best_merit = math.inf
    stall_ref = math.inf
    stall = 0

    for it in range(max_iter):
        iters = it
        Rp = state.b - state.A @ x
        Rd = comp.c - state.A.T @ y - z
        pobj = float(comp.c @ x)
        dobj = float(state.b @ y)
        gap = float(x @ z)
        relgap = gap / (1.0 + abs(pobj) + abs(dobj))
        pinf = float(np.max(np.abs(Rp), initial=0.0)) / bnorm
        dinf = float(np.max(np.abs(Rd), initial=0.0)) / cnorm
        if not (math.isfinite(gap) and math.isfinite(pinf) and math.isfinite(dinf)):
            status = "numerical-failure"
            break
        merit = max(abs(relgap), pinf, dinf)
        if _TRACE is not None:
            _TRACE(it, relgap, pinf, dinf)
        if merit < best_merit:
            best_merit = merit
            best = (x.copy(), y.copy(), z.copy())
        if merit < 0.5 * stall_ref:
            stall_ref = merit
            stall = 0
        else:
            stall += 1
        if relgap <= tol and pinf <= tol and dinf <= tol:
            status = "optimal"
            break
        if stall >= _STALL_LIMIT and best_merit <= 100.0 * tol:
            # close to tolerance and no halving of the merit for a while:
            # rounding has taken over, polishing further is pointless
            break
        if pobj < -1e12 * (bnorm + cnorm) and pinf <= tol:
            status = "dual-infeasible"
            break
        if dobj > 1e12 * (bnorm + cnorm) and dinf <= tol:
            # an unbounded dual objective along feasible dual iterates means
            # the primal has no feasible point
            status = "primal-infeasible"
            break

        # scalings
        scal = []
        numerical_trouble = False
        for bi in range(len(comp.blocks)):
            o, ln = comp.offsets[bi], comp.lengths[bi]
            meta = comp.psd_meta[bi]
            if meta is None:
                scal.append(x[o:o + ln] / z[o:o + ln])
            else:
                xm = _mat_from_svec(x[o:o + ln], meta)
                zm = _mat_from_svec(z[o:o + ln], meta)
                try:
                    scal.append(_nt_scaling(xm, zm))
                except np.linalg.LinAlgError:
                    numerical_trouble = True
                    break
        if numerical_trouble:
            status = "numerical-failure"
            break
        state.scal = scal

        M = _assemble_schur(state)
        state.M = M
        cho = _factor(M)
        if cho is None:
            status = "numerical-failure"
            break
        if cho == "empty":
            cho = None

        mu = gap / nu

        # predictor (affine scaling direction)
        Rc_aff = -x
        dxa, dya, dza = _newton(state, cho, Rp, Rd, Rc_aff)
        if dxa is None:
            status = "numerical-failure"
            break
        apa, ada = _max_steps(state, dxa, dza)
        if apa < 0:
            status = "numerical-failure"
            break
        apa, ada = min(1.0, apa), min(1.0, ada)
        mu_aff = float((x + apa * dxa) @ (z + ada * dza)) / nu
        sigma = min(1.0, max(1e-8, (max(mu_aff, 0.0) / mu) ** 3))

        def corrector_attempt(sigma_try):
            # second-order term only when genuinely predicting; a blocked
            # predictor (sigma near one) makes it point the wrong way
            soc = 1.0 if sigma_try < 0.9 else 0.0
            Rc = np.empty_like(x)
            for bi in range(len(comp.blocks)):
                o, ln = comp.offsets[bi], comp.lengths[bi]
                meta = comp.psd_meta[bi]
                if meta is None:
                    zs = z[o:o + ln]
                    Rc[o:o + ln] = (sigma_try * mu / zs - x[o:o + ln]
                                    - soc * dxa[o:o + ln] * dza[o:o + ln] / zs)
                else:
                    _, zinv = scal[bi]
                    xm = _mat_from_svec(x[o:o + ln], meta)
                    dxm = _mat_from_svec(dxa[o:o + ln], meta)
                    dzm = _mat_from_svec(dza[o:o + ln], meta)
                    t = soc * (dxm @ dzm @ zinv)
                    Rc[o:o + ln] = _svec_from_mat(
                        sigma_try * mu * zinv - xm - (t + t.T) / 2.0, meta
                    )
            d = _newton(state, cho, Rp, Rd, Rc)
            if d[0] is None:
                return None
            ap_t, ad_t = _max_steps(state, d[0], d[2])
            if ap_t < 0:
                return None
            return d, min(1.0, _FRACTION_TO_BOUNDARY * ap_t), \
                min(1.0, _FRACTION_TO_BOUNDARY * ad_t)

        # Mehrotra's sigma is too optimistic when the corrector gets blocked
        # much earlier than the affine direction; retrying with a larger
        # sigma reuses the factorization and restores useful step sizes
        attempt = corrector_attempt(sigma)
        for sigma_retry in (0.5, 0.99):
            if attempt is not None and min(attempt[1], attempt[2]) >= 0.05:
                break
            if sigma >= sigma_retry:
                continue
            alt = corrector_attempt(sigma_retry)
            if alt is not None and (
                attempt is None
                or min(alt[1], alt[2]) > min(attempt[1], attempt[2])
            ):
                attempt = alt
        if attempt is None:
            status = "numerical-failure"
            break
        (dx, dy, dz), ap, ad = attempt
        if _TRACE2 is not None:
            _TRACE2(it, sigma, apa, ada, ap, ad)
        if ap < 1e-10 and ad < 1e-10:
            collapse += 1
            if collapse >= 2:
                status = "numerical-failure"
                break
        else:
            collapse = 0
        x += ap * dx
        y += ad * dy
        z += ad * dz
        if gap / nu < 1e-17:
            break

    if status != "optimal" and best is not None:
        # the last iterate may be worse than an earlier one; report the best
        x, y, z = best
    primal = None
    if status in ("optimal", "iteration-limit", "numerical-failure"):
        # on numerical failure the breakdown happened while computing the
        # next step, so the current iterate is still a valid interior point
        primal = _block_views(state, x)
        primal = [np.array(p) for p in primal]
    y_full = np.zeros(m_orig)
    if state.m:
        y_full[state.keep] = y
    Rp = state.b - state.A @ x
    Rd = comp.c - state.A.T @ y - z
    pobj = float(comp.c @ x)
    dobj = float(state.b @ y)
    gap = float(x @ z)
    return Solution(
        status=status,
        objective_value=pobj,
        primal=primal,
        dual=y_full,
        gap=gap / (1.0 + abs(pobj) + abs(dobj)),
        residuals=(
            float(np.max(np.abs(Rp), initial=0.0)) / bnorm,
            float(np.max(np.abs(Rd), initial=0.0)) / cnorm,
        ),
        iterations=iters,
    )


# ---------------------------------------------------------------------------
# feasibility via phase-1 slack embedding

def _interior_inner(blocks, trips):
    """<A, E> where E is identity on psd blocks and all-ones on nonneg blocks."""
    total = 0.0
    for b, i, j, coeff in trips:
        if blocks[b].kind == "nonneg" or i == j:
            total += coeff
    return total


def check_feasibility(problem, feas_tol=1e-7, solver_tol=1e-9, max_iter=DEFAULT_MAX_ITER):
    """Decide whether the constraint system of ``problem`` admits a point in
    the cone product.

    Minimizes a scalar t >= 0 with the cone constraint shifted by t times the
    canonical interior element E; the system is feasible iff the optimum is
    (numerically) zero.  An infeasible verdict carries a Farkas-type dual ray
    y: sum_i y_i A_i is negative semidefinite against every block cone while
    b^T y > 0.
    """
    tb = len(problem.blocks)
    blocks = list(problem.blocks) + [Block("nonneg", 1)]
    constraints = []
    for trips, rhs in problem.constraints:
        shift = _interior_inner(problem.blocks, trips)
        new_trips = list(trips)
        if shift != 0.0:
            new_trips.append((tb, 0, 0, -shift))
        constraints.append((new_trips, rhs))
    phase1 = ConicProblem(blocks, [(tb, 0, 0, 1.0)], constraints)
    sol = solve(phase1, tol=solver_tol, max_iter=max_iter)
    if sol.status == "primal-infeasible":
        y = sol.dual
        return FeasibilityResult(
            feasible=False,
            point=None,
            certificate={"y": y, "violation": float(problem.compiled().b @ y)},
            slack=math.inf,
        )
    if sol.status != "optimal":
        raise SolverFailureError(
            f"phase-1 feasibility solve ended with status {sol.status}",
            status=sol.status,
            dump=phase1.dump(),
        )
    tstar = float(sol.primal[tb][0])
    if tstar <= feas_tol:
        point = []
        for bi, blk in enumerate(problem.blocks):
            if blk.kind == "psd":
                point.append(sol.primal[bi] - tstar * np.eye(blk.size))
            else:
                point.append(sol.primal[bi] - tstar)
        return FeasibilityResult(feasible=True, point=point, certificate=None, slack=tstar)
    y = sol.dual
    violation = float(problem.compiled().b @ y)
    return FeasibilityResult(
        feasible=False,
        point=None,
        certificate={"y": y, "violation": violation},
        slack=tstar,
    )
