"""Closure of matrix-cone families under the shifted Kronecker product.

The product in question is  Q (.) R = (Q + J) (x) (R + J) - J  where J is the
all-ones matrix of the appropriate size.  A family of cones (one per
dimension) has the *product property* when membership of both factors forces
membership of the product.  ``check_product_pair`` tests one pair directly;
``construct_counterexample`` mechanically builds a product that escapes every
cone contained in the copositive cone, starting from any cone member that is
not positive semidefinite.

The construction doubles twice.  With L = [[1,-1],[-1,1]] and a witness v of
Q's indefiniteness, B = L (.) (k1 Q) satisfies w^T B w < 0 for w = (v, -v)
once k1 clears a rational threshold.  Splitting w = x - y into its positive
and negative parts, C = (k2 L) (.) B then satisfies u^T C u < 0 for the
*nonnegative* vector u = (x, y), again for k2 past a threshold.  Since u is
nonnegative, C is not copositive, so one of the two product steps must have
left the cone.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .bounds import MembershipResult, parrilo_membership, sos_cone_membership
from .errors import NoCounterexampleError, ResourceLimitError, SolverFailureError
from .symmat import (
    COPOSITIVE_DIM_CAP,
    SymMatrix,
    is_copositive_oracle,
    is_psd,
    lambda2,
    odot,
    quad_form,
)

CONES = ("psd", "parrilo", "sos0", "sos1", "oracle")


def cone_membership(q, cone, *, feas_tol=1e-7):
    """Dispatch a membership test by cone name.

    ``psd`` uses an eigenvalue check, ``parrilo`` the PSD + nonnegative
    decomposition, ``sos0``/``sos1`` the Gram-matrix feasibility problem, and
    ``oracle`` the exact quadratic minimization over the simplex.
    """
    if cone not in CONES:
        raise ValueError(f"unknown cone {cone!r}; choose from {', '.join(CONES)}")
    if cone == "psd":
        ok, wit = is_psd(q)
        if ok:
            return MembershipResult(member=True, detail="eigenvalues nonnegative")
        return MembershipResult(
            member=False,
            certificate={"vector": list(wit.vector), "value": wit.value},
            detail=f"eigenvector with value {wit.value:.6g}",
        )
    if cone == "parrilo":
        return parrilo_membership(q, feas_tol=feas_tol)
    if cone == "sos0":
        return sos_cone_membership(q, 0, feas_tol=feas_tol)
    if cone == "sos1":
        return sos_cone_membership(q, 1, feas_tol=feas_tol)
    ok, wit = is_copositive_oracle(q)
    if ok:
        return MembershipResult(member=True, detail="simplex minimum nonnegative")
    return MembershipResult(
        member=False,
        certificate={"vector": list(wit.vector), "value": wit.value},
        detail=f"nonnegative vector with value {wit.value:.6g}",
    )


def check_product_pair(q, r, cone, *, feas_tol=1e-7, max_dim=4096):
    """Membership of the product of two certified cone members.

    Both factors are membership-checked first; a non-member input is an
    error (the test says nothing about the cone family if a factor is
    outside it).  The verdict is ``holds`` when the product stays in the
    cone and ``violated`` when it escapes.
    """
    left = cone_membership(q, cone, feas_tol=feas_tol)
    right = cone_membership(r, cone, feas_tol=feas_tol)
    bad = [name for name, res in (("left", left), ("right", right))
           if not res.member]
    if bad:
        raise ValueError(
            f"{' and '.join(bad)} input not a member of cone {cone!r}; "
            "the product property is only defined over members"
        )
    prod = odot(q, r, max_dim=max_dim)
    pmem = cone_membership(prod, cone, feas_tol=feas_tol)
    return {
        "cone": cone,
        "left_member": True,
        "right_member": True,
        "product_dim": prod.n,
        "product_member": pmem.member,
        "verdict": "holds" if pmem.member else "violated",
    }


def _bilinear(m, x, y):
    n = m.n
    terms = [x[i] * m[i, j] * y[j] for i in range(n) for j in range(n)]
    return math.fsum(terms)


@dataclass
class CounterexampleReport:
    """Record of one run of the doubling construction."""

    cone: str
    seed: SymMatrix
    v: np.ndarray
    k1: float
    k1_threshold: float
    B: SymMatrix
    w: np.ndarray
    wBw: float
    k2: float
    k2_threshold: float
    C: SymMatrix
    u: np.ndarray
    u_value: float
    violating_pair: tuple
    memberships: dict

    def as_dict(self):
        return {
            "seed": self.seed.to_array().tolist(),
            "v": self.v.tolist(),
            "k1": self.k1,
            "k1_threshold": self.k1_threshold,
            "B": self.B.to_array().tolist(),
            "w": self.w.tolist(),
            "wBw": self.wBw,
            "k2": self.k2,
            "k2_threshold": self.k2_threshold,
            "C_dim": self.C.n,
            "u": self.u.tolist(),
            "u_value": self.u_value,
            "violating_pair": list(self.violating_pair),
            "memberships": dict(self.memberships),
        }

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2)


def choose_k1(q, v):
    """Smallest-plus-one scale so that (v, -v) certifies indefiniteness of
    the first doubled product; returns (k1, threshold)."""
    vqv = quad_form(q, v)
    if not vqv < -1e-10:
        raise NoCounterexampleError(
            f"direction has value {vqv:.6g}; need a strictly negative "
            "witness v^T Q v < -1e-10"
        )
    vjv = math.fsum(v) ** 2
    threshold = max(-vjv / vqv, 0.0)
    return threshold + 1.0, threshold


def build_b(q, v, k1):
    """B = L (.) (k1 Q) for L = [[1,-1],[-1,1]], together with the doubled
    direction w = (v, -v).

    Verifies before returning that sum(w) vanishes and that
    w^T B w = 4 k1 v^T Q v + 4 (sum v)^2 is negative, so the pair (B, w)
    really certifies indefiniteness of the first product.
    """
    b = odot(lambda2(), q * k1)
    w = np.concatenate([np.asarray(v, dtype=float), -np.asarray(v, dtype=float)])
    if math.fsum(w) != 0.0:
        raise NoCounterexampleError("doubled direction (v, -v) must sum to zero")
    wbw = quad_form(b, w)
    closed = 4.0 * k1 * quad_form(q, np.asarray(v, dtype=float)) + 4.0 * math.fsum(v) ** 2
    if abs(wbw - closed) > 1e-8 * (1.0 + abs(closed)):
        raise NoCounterexampleError(
            f"doubling identity failed: w^T B w = {wbw:.6g} vs {closed:.6g}"
        )
    if not wbw < 0.0:
        raise NoCounterexampleError(
            f"scale {k1:.6g} is below the doubling threshold: w^T B w = {wbw:.6g} >= 0"
        )
    return b, w


def choose_k2(b, w):
    """Scale for the second doubling; returns (k2, threshold, s, t) where
    s = x^T B x + y^T B y and t = x^T B y for the split w = x - y."""
    x = np.maximum(w, 0.0)
    y = np.maximum(-w, 0.0)
    s = quad_form(b, x) + quad_form(b, y)
    t = _bilinear(b, x, y)
    if not 2.0 * t - s > 0.0:
        raise NoCounterexampleError(
            f"split of w gives 2t - s = {2.0 * t - s:.6g} <= 0; "
            "the second doubling cannot go negative"
        )
    threshold = max((s + 2.0 * t) / (2.0 * t - s), 0.0)
    return threshold + 1.0, threshold, s, t


def build_c(b, k2, w):
    """C = (k2 L) (.) B plus the nonnegative direction u = (w+, w-).

    Verifies before returning that u >= 0, that u^T C u matches the closed
    form (k2+1)s - 2(k2-1)t for the split of w, and that it is negative --
    which refutes copositivity of C.  When C is small enough the exact
    simplex oracle double-checks the refutation.
    """
    c = odot(lambda2() * k2, b)
    x = np.maximum(w, 0.0)
    y = np.maximum(-w, 0.0)
    u = np.concatenate([x, y])
    u_value = quad_form(c, u)
    s = quad_form(b, x) + quad_form(b, y)
    t = _bilinear(b, x, y)
    closed = (k2 + 1.0) * s - 2.0 * (k2 - 1.0) * t
    if abs(u_value - closed) > 1e-8 * (1.0 + abs(closed)):
        raise NoCounterexampleError(
            f"doubling identity failed: u^T C u = {u_value:.6g} vs {closed:.6g}"
        )
    if not u_value < 0.0:
        raise NoCounterexampleError(
            f"scale {k2:.6g} is below the doubling threshold: u^T C u = {u_value:.6g} >= 0"
        )
    if c.n <= COPOSITIVE_DIM_CAP:
        ok_c, _ = is_copositive_oracle(c)
        if ok_c:  # cannot happen if u_value < 0; guards the oracle itself
            raise NoCounterexampleError("oracle found C copositive despite u^T C u < 0")
    return c, u, u_value


def construct_counterexample(seed, cone="parrilo", *, feas_tol=1e-7):
    """Build a product of cone members that the copositivity oracle rejects.

    The seed must belong to the chosen cone but must not be positive
    semidefinite.  Raises NoCounterexampleError when the seed cannot start
    the pipeline (a PSD seed gives no indefiniteness witness; every product
    of PSD matrices under (.) stays PSD).
    """
    q = seed if isinstance(seed, SymMatrix) else SymMatrix(np.asarray(seed, dtype=float))
    psd_ok, wit = is_psd(q)
    if psd_ok:
        raise NoCounterexampleError(
            "seed is positive semidefinite; the construction needs a cone "
            "member with a direction of negative curvature"
        )
    seed_mem = cone_membership(q, cone, feas_tol=feas_tol)
    if not seed_mem.member:
        raise NoCounterexampleError(
            f"seed is not a member of cone {cone!r}: {seed_mem.detail}"
        )

    # normalize the witness so its largest-magnitude entry is exactly +1
    v = np.asarray(wit.vector, dtype=float)
    v = v / v[int(np.argmax(np.abs(v)))]

    k1, k1_threshold = choose_k1(q, v)
    b, w = build_b(q, v, k1)
    wbw = quad_form(b, w)

    k2, k2_threshold, _s, _t = choose_k2(b, w)
    c, u, u_value = build_c(b, k2, w)

    memberships = {"seed": True, "lambda2": True}
    try:
        b_member = cone_membership(b, cone, feas_tol=feas_tol).member
    except (ResourceLimitError, SolverFailureError):
        # The violation u^T C u < 0 stands on its own; only the attribution
        # of which product step left the cone goes unverified.
        b_member = None
    memberships["B"] = b_member
    if c.n <= COPOSITIVE_DIM_CAP:
        memberships["C_oracle_copositive"] = False  # verified inside build_c
    else:
        memberships["C_oracle_copositive"] = None

    if b_member is None:
        violating_pair = ("unverified", "unverified")
    elif b_member:
        violating_pair = ("k2*lambda2", "B")
    else:
        violating_pair = ("lambda2", "k1*seed")

    return CounterexampleReport(
        cone=cone,
        seed=q,
        v=v,
        k1=k1,
        k1_threshold=k1_threshold,
        B=b,
        w=w,
        wBw=wbw,
        k2=k2,
        k2_threshold=k2_threshold,
        C=c,
        u=u,
        u_value=u_value,
        violating_pair=violating_pair,
        memberships=memberships,
    )
