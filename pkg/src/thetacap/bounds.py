"""Conic upper bounds on the independence number.

All bounds minimize the common diagonal value lambda of a matrix Y subject to
Y_ij = 0 for distinct non-adjacent vertices and the cone constraint
Y - J in A_n, for varying choices of the cone A_n:

* ``lovasz_theta``      A_n = PSD cone,
* ``schrijver_theta``   A_n = PSD + entrywise-nonnegative,
* ``theta_r``           A_n = matrices Q whose quartic form
                        p_Q(x) = sum_ij Q_ij x_i^2 x_j^2, multiplied by
                        (sum_i x_i^2)^r, is a sum of squares.

For the pure-PSD and PSD+nonneg variants lambda is eliminated: the diagonal
entries of Y - J are constrained equal and the objective is their average
(plus one).  The sum-of-squares variant keeps lambda and the free adjacent
entries of Y as differences of nonnegative scalar pairs, since they only
enter through the Gram coefficient-matching equations.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ResourceLimitError, SolverFailureError
from .sdp import Block, ConicProblem, check_feasibility, solve
from .symmat import SymMatrix, min_quadratic_on_simplex

GRAM_DIM_CAP = 120     # largest supported Gram matrix side
PARRILO_DIM_CAP = 64   # largest matrix for the PSD + nonneg decomposition
_ACCEPT_RESIDUAL = 1e-7  # accept an iteration-limited solve below this gap


@dataclass(frozen=True)
class MonomialBasis:
    """Monomials of one total degree in graded-lexicographic order.

    Exponent tuples are listed with earlier variables dominating, e.g. for
    two variables and degree 2: (2,0), (1,1), (0,2).
    """

    nvars: int
    degree: int
    monomials: tuple

    @staticmethod
    def build(nvars, degree):
        if nvars < 1 or degree < 0:
            raise ValueError("need nvars >= 1 and degree >= 0")
        mons = []
        for combo in itertools.combinations_with_replacement(range(nvars), degree):
            expo = [0] * nvars
            for v in combo:
                expo[v] += 1
            mons.append(tuple(expo))
        return MonomialBasis(nvars=nvars, degree=degree, monomials=tuple(mons))

    def __len__(self):
        return len(self.monomials)


@dataclass
class MembershipResult:
    """Outcome of a cone-membership test with its certificate."""

    member: bool
    gram: SymMatrix | None = None
    basis: MonomialBasis | None = None
    psd_part: SymMatrix | None = None
    nonneg_part: SymMatrix | None = None
    certificate: dict | None = None
    detail: str = ""


@dataclass
class BoundResult:
    graph_id: str
    bound_name: str
    value: float
    solver_status: str
    lam: float
    certificate_y: SymMatrix
    extra: dict = field(default_factory=dict)

    def as_dict(self, certificate_path=None):
        return {
            "graph": self.graph_id,
            "bound": self.bound_name,
            "value": self.value,
            "status": self.solver_status,
            "lambda": self.lam,
            "certificate_path": certificate_path,
        }

    def to_json(self, certificate_path=None):
        return json.dumps(self.as_dict(certificate_path))


def _solve_checked(prob, tol, max_iter=200):
    sol = solve(prob, tol=tol, max_iter=max_iter)
    if sol.status == "optimal":
        return sol
    if (
        sol.status in ("iteration-limit", "numerical-failure")
        and sol.primal is not None
        and sol.gap <= _ACCEPT_RESIDUAL
        and max(sol.residuals) <= _ACCEPT_RESIDUAL
    ):
        return sol
    raise SolverFailureError(
        f"conic solve failed with status {sol.status} "
        f"(gap {sol.gap:.3g}, residuals {sol.residuals[0]:.3g}/{sol.residuals[1]:.3g})",
        status=sol.status,
        dump=prob.dump(),
    )


def _maybe_dump(prob, dump_path):
    if dump_path:
        with open(dump_path, "w") as fh:
            fh.write(prob.dump())


def _nonadjacent_pairs(g):
    return [
        (i, j)
        for i in range(g.n)
        for j in range(i + 1, g.n)
        if not g.has_edge(i, j)
    ]


def _default_graph_id(g):
    return f"graph(n={g.n},m={g.m})"


# ---------------------------------------------------------------------------
# theta and theta'

def _lovasz_problem(g):
    n = g.n
    rows = []
    for i in range(1, n):
        rows.append(([(0, 0, 0, 1.0), (0, i, i, -1.0)], 0.0))
    for i, j in _nonadjacent_pairs(g):
        rows.append(([(0, i, j, 1.0)], -1.0))
    objective = [(0, i, i, 1.0 / n) for i in range(n)]
    return ConicProblem([Block("psd", n)], objective, rows)


def lovasz_theta(g, *, graph_id=None, tol=1e-9, dump_path=None):
    """Minimum common diagonal of Y with Y - J PSD and zeros off the edges."""
    prob = _lovasz_problem(g)
    _maybe_dump(prob, dump_path)
    sol = _solve_checked(prob, tol)
    value = sol.objective_value + 1.0
    y_mat = SymMatrix(sol.primal[0] + np.ones((g.n, g.n)))
    return BoundResult(
        graph_id=graph_id or _default_graph_id(g),
        bound_name="theta",
        value=value,
        solver_status=sol.status,
        lam=value,
        certificate_y=y_mat,
    )


def _pair_index(n):
    pos = {}
    for i in range(n):
        for j in range(i, n):
            pos[(i, j)] = len(pos)
    return pos


def _schrijver_problem(g):
    n = g.n
    pos = _pair_index(n)
    rows = []
    for i in range(1, n):
        rows.append((
            [
                (0, 0, 0, 1.0), (1, pos[(0, 0)], pos[(0, 0)], 1.0),
                (0, i, i, -1.0), (1, pos[(i, i)], pos[(i, i)], -1.0),
            ],
            0.0,
        ))
    for i, j in _nonadjacent_pairs(g):
        rows.append(([(0, i, j, 1.0), (1, pos[(i, j)], pos[(i, j)], 1.0)], -1.0))
    objective = [(0, i, i, 1.0 / n) for i in range(n)]
    objective += [(1, pos[(i, i)], pos[(i, i)], 1.0 / n) for i in range(n)]
    blocks = [Block("psd", n), Block("nonneg", len(pos))]
    return ConicProblem(blocks, objective, rows), pos


def schrijver_theta(g, *, graph_id=None, tol=1e-9, dump_path=None):
    """Like lovasz_theta but with Y - J split into PSD plus nonnegative."""
    n = g.n
    prob, pos = _schrijver_problem(g)
    _maybe_dump(prob, dump_path)
    sol = _solve_checked(prob, tol)
    value = sol.objective_value + 1.0
    p_mat = sol.primal[0]
    n_vec = sol.primal[1]
    n_mat = np.zeros((n, n))
    for (i, j), k in pos.items():
        n_mat[i, j] = n_vec[k]
        n_mat[j, i] = n_vec[k]
    y_mat = SymMatrix(p_mat + n_mat + np.ones((n, n)))
    return BoundResult(
        graph_id=graph_id or _default_graph_id(g),
        bound_name="theta_prime",
        value=value,
        solver_status=sol.status,
        lam=value,
        certificate_y=y_mat,
        extra={"psd_part": SymMatrix(p_mat), "nonneg_part": SymMatrix(n_mat)},
    )


# ---------------------------------------------------------------------------
# sum-of-squares cone machinery
#
# Membership of Q: (sum_k x_k^2)^r * p_Q(x) with p_Q = sum_ij Q_ij x_i^2 x_j^2
# must equal m(x)^T G m(x) for a PSD Gram matrix G over the monomials m of
# degree r+2.  Both sides are homogeneous of degree 2r+4; matching
# coefficients monomial by monomial gives the linear constraints.  All
# structural coefficients are assembled in exact integer arithmetic.

def _multinomial(total, expo):
    num = math.factorial(total)
    for e in expo:
        num //= math.factorial(e)
    return num


def _sos_targets(n, r):
    """alpha -> {(i, j): integer coefficient of Q_ij}, i <= j."""
    targets = {}
    for gamma in MonomialBasis.build(n, r).monomials:
        mult = _multinomial(r, gamma)
        base = [2 * e for e in gamma]
        for i in range(n):
            for j in range(i, n):
                alpha = list(base)
                alpha[i] += 2
                alpha[j] += 2
                key = tuple(alpha)
                co = mult * (1 if i == j else 2)
                bucket = targets.setdefault(key, {})
                bucket[(i, j)] = bucket.get((i, j), 0) + co
    return targets


def _gram_pairs(basis):
    """alpha -> list of (p, q, multiplicity) Gram positions with p <= q."""
    pairs = {}
    mons = basis.monomials
    for p in range(len(mons)):
        for q in range(p, len(mons)):
            alpha = tuple(a + b for a, b in zip(mons[p], mons[q]))
            pairs.setdefault(alpha, []).append((p, q, 1 if p == q else 2))
    return pairs


def sos_cone_membership(q, r, *, feas_tol=1e-7, max_gram_dim=GRAM_DIM_CAP):
    """Test membership in the order-r sum-of-squares cone; returns the Gram
    certificate on success and a separating dual ray otherwise."""
    if not isinstance(r, int) or r < 0:
        raise ValueError(f"sos order must be a nonnegative integer, got {r!r}")
    n = q.n
    basis = MonomialBasis.build(n, r + 2)
    if len(basis) > max_gram_dim:
        raise ResourceLimitError(
            f"Gram dimension {len(basis)} exceeds cap {max_gram_dim}"
        )
    pairs = _gram_pairs(basis)
    targets = _sos_targets(n, r)
    if not set(targets) <= set(pairs):
        raise RuntimeError("internal error: target monomial without Gram support")
    constraints = []
    for alpha in sorted(pairs, reverse=True):
        trips = [(0, p, qq, float(mult)) for p, qq, mult in pairs[alpha]]
        rhs = 0.0
        for (i, j), co in sorted(targets.get(alpha, {}).items()):
            rhs += co * q[i, j]
        constraints.append((trips, rhs))
    prob = ConicProblem([Block("psd", len(basis))], [], constraints)
    res = check_feasibility(prob, feas_tol=feas_tol)
    if res.feasible:
        gram = SymMatrix(res.point[0])
        dev = _max_coefficient_deviation(gram, q, r, pairs, targets)
        return MembershipResult(
            member=True,
            gram=gram,
            basis=basis,
            detail=f"Gram certificate reproduces coefficients to {dev:.3g}",
        )
    return MembershipResult(
        member=False,
        certificate=res.certificate,
        detail=f"no Gram matrix exists (phase-1 slack {res.slack:.3g})",
    )


def _max_coefficient_deviation(gram, q, r, pairs, targets):
    dev = 0.0
    for alpha, plist in pairs.items():
        got = sum(mult * gram[p, qq] for p, qq, mult in plist)
        want = sum(co * q[i, j] for (i, j), co in targets.get(alpha, {}).items())
        dev = max(dev, abs(got - want))
    return dev


def parrilo_membership(q, *, feas_tol=1e-7, max_dim=PARRILO_DIM_CAP):
    """Decompose Q as PSD plus entrywise nonnegative, or certify impossibility."""
    n = q.n
    if n > max_dim:
        raise ResourceLimitError(f"dimension {n} exceeds cap {max_dim}")
    pos = _pair_index(n)
    constraints = []
    for (i, j), k in pos.items():
        constraints.append(([(0, i, j, 1.0), (1, k, k, 1.0)], float(q[i, j])))
    prob = ConicProblem([Block("psd", n), Block("nonneg", len(pos))], [], constraints)
    res = check_feasibility(prob, feas_tol=feas_tol)
    if res.feasible:
        p_mat = res.point[0]
        n_mat = np.zeros((n, n))
        for (i, j), k in pos.items():
            n_mat[i, j] = res.point[1][k]
            n_mat[j, i] = res.point[1][k]
        return MembershipResult(
            member=True,
            psd_part=SymMatrix(p_mat),
            nonneg_part=SymMatrix(n_mat),
            detail=f"decomposition with phase-1 slack {res.slack:.3g}",
        )
    return MembershipResult(
        member=False,
        certificate=res.certificate,
        detail=f"no PSD + nonnegative split (phase-1 slack {res.slack:.3g})",
    )


# ---------------------------------------------------------------------------
# theta_r

def _theta_r_problem(g, r, max_gram_dim=GRAM_DIM_CAP):
    if r not in (0, 1):
        raise ValueError(f"supported sos orders are 0 and 1, got {r!r}")
    n = g.n
    if r == 1 and n > 7:
        raise ResourceLimitError(f"order-1 bound capped at 7 vertices, got {n}")
    basis = MonomialBasis.build(n, r + 2)
    if len(basis) > max_gram_dim:
        raise ResourceLimitError(
            f"Gram dimension {len(basis)} exceeds cap {max_gram_dim}"
        )
    adj = [(i, j) for i in range(n) for j in range(i + 1, n) if g.has_edge(i, j)]
    eidx = {pair: e for e, pair in enumerate(adj)}
    # nonneg layout: lambda as positions 0/1, adjacent entry e as 2+2e / 3+2e
    free_len = 2 + 2 * len(adj)
    pairs = _gram_pairs(basis)
    targets = _sos_targets(n, r)
    constraints = []
    for alpha in sorted(pairs, reverse=True):
        trips = [(0, p, qq, float(mult)) for p, qq, mult in pairs[alpha]]
        rhs = 0.0
        for (i, j), co in sorted(targets.get(alpha, {}).items()):
            if i == j:
                # Q_ii = lambda - 1
                trips.append((1, 0, 0, -float(co)))
                trips.append((1, 1, 1, float(co)))
                rhs -= co
            elif (i, j) in eidx:
                e = eidx[(i, j)]
                trips.append((1, 2 + 2 * e, 2 + 2 * e, -float(co)))
                trips.append((1, 3 + 2 * e, 3 + 2 * e, float(co)))
            else:
                # Q_ij = -1 off the edges
                rhs -= co
        constraints.append((trips, rhs))
    blocks = [Block("psd", len(basis)), Block("nonneg", free_len)]
    objective = [(1, 0, 0, 1.0), (1, 1, 1, -1.0)]
    return ConicProblem(blocks, objective, constraints), eidx, basis


def theta_r(g, r, *, graph_id=None, tol=1e-9, dump_path=None, max_gram_dim=GRAM_DIM_CAP):
    """Bound with the order-r sum-of-squares cone in place of the PSD cone.

    Supported orders are 0 (equivalent to schrijver_theta by the PSD+nonneg
    characterization of the quartic-SOS cone) and 1 (capped at 7 vertices).
    """
    n = g.n
    prob, eidx, basis = _theta_r_problem(g, r, max_gram_dim)
    _maybe_dump(prob, dump_path)
    sol = _solve_checked(prob, tol)
    lam = sol.objective_value
    free = sol.primal[1]
    y_mat = np.zeros((n, n))
    np.fill_diagonal(y_mat, lam)
    for (i, j), e in eidx.items():
        v = free[2 + 2 * e] - free[3 + 2 * e]
        y_mat[i, j] = v + 1.0
        y_mat[j, i] = v + 1.0
    return BoundResult(
        graph_id=graph_id or _default_graph_id(g),
        bound_name=f"theta_r({r})",
        value=lam,
        solver_status=sol.status,
        lam=lam,
        certificate_y=SymMatrix(y_mat),
        extra={"gram": SymMatrix(sol.primal[0]), "basis": basis},
    )


# ---------------------------------------------------------------------------

def motzkin_straus_value(g, *, max_dim=12):
    """Independence number as 1 / min_{simplex} x^T (I + A) x."""
    q = SymMatrix(np.eye(g.n) + g.adjacency_matrix())
    value, _ = min_quadratic_on_simplex(q, max_dim=max_dim)
    return 1.0 / value
