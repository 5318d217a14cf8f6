"""
Existence test for a bounded ``K`` making ``D + K* A K`` positive (semi)definite.

With ``lambda_1 >= ... >= lambda_n`` the eigenvalues of ``A`` (``k`` of them
positive) and ``mu_1 <= ... <= mu_m`` those of ``D`` (``r`` nonpositive, ``p``
zero), a ``K`` with ``||K|| < kappa`` and ``D + K* A K > 0`` exists iff

    r <= k   and   kappa**2 * lambda_i + mu_i > 0   for i < r - p,

and a ``K`` with ``||K|| <= kappa`` and ``D + K* A K >= 0`` exists iff

    r - p <= k   and   kappa**2 * lambda_i + mu_i >= 0   for i < r - p.

Indices in this module are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (NONDECREASING, NONINCREASING, HermitianEigenSystem, InertiaCounts,
                   as_matrix, eigendecompose_hermitian, hermitian_part, inertia,
                   spectral_norm)
from .errors import BadKappa, DimensionMismatch

DEFINITE = "definite"
SEMIDEFINITE = "semidefinite"
MODES = (DEFINITE, SEMIDEFINITE)


@dataclass(frozen=True)
class FeasibilityVerdict:
    mode: str
    feasible: bool
    kappa: float
    violated_indices: list
    rank_condition_ok: bool
    k: int
    r: int
    p: int
    zero_tol: float
    # kappa**2 * lambda_i + mu_i for i < r - p; small positive margins mean a
    # nearly singular Schur complement for every admissible K
    margins: list = field(default_factory=list)

    @property
    def reason(self) -> str:
        if self.feasible:
            return "feasible"
        if not self.rank_condition_ok:
            if self.mode == DEFINITE:
                return f"rank obstruction r>k (r={self.r}, k={self.k})"
            return f"rank obstruction r-p>k (r-p={self.r - self.p}, k={self.k})"
        idx = ", ".join(str(i + 1) for i in self.violated_indices)
        return f"kappa^2*lambda_i + mu_i condition fails at i = {idx}"

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "feasible": self.feasible,
            "kappa": self.kappa,
            "k": self.k,
            "r": self.r,
            "p": self.p,
            "rank_condition_ok": self.rank_condition_ok,
            "violated_indices": [i + 1 for i in self.violated_indices],
            "margins": list(self.margins),
            "zero_tol": self.zero_tol,
            "reason": self.reason,
        }


def _check_mode(mode):
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")


def default_zero_tol(eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem) -> float:
    normA = float(np.max(np.abs(eigsA.values))) if eigsA.dim else 0.0
    normD = float(np.max(np.abs(eigsD.values))) if eigsD.dim else 0.0
    return 1e-9 * max(1.0, normA + normD)


def inertia_pair(eigsA, eigsD, zero_tol):
    """Return ``(k, r, p)`` together with the two inertia records."""
    inA = inertia(eigsA, zero_tol)
    inD = inertia(eigsD, zero_tol)
    return inA.positive, inD.nonpositive, inD.zero, inA, inD


def check_feasible(eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem, kappa: float,
                   mode: str = DEFINITE, zero_tol: float | None = None) -> FeasibilityVerdict:
    """
    Decide whether some ``K`` within the norm budget ``kappa`` exists.

    Strict inequalities are realized as ``> zero_tol`` and non-strict ones as
    ``>= -zero_tol``.
    """
    _check_mode(mode)
    if not kappa > 0 or not np.isfinite(kappa):
        raise BadKappa(f"kappa must be a positive finite number, got {kappa!r}")
    if eigsA.order != NONINCREASING or eigsD.order != NONDECREASING:
        raise ValueError("A eigenvalues must be nonincreasing and D eigenvalues nondecreasing")
    if zero_tol is None:
        zero_tol = default_zero_tol(eigsA, eigsD)
    k, r, p, _, _ = inertia_pair(eigsA, eigsD, zero_tol)
    q = r - p
    if mode == DEFINITE:
        rank_ok = r <= k
    else:
        rank_ok = q <= k
    lam, mu = eigsA.values, eigsD.values
    kk = float(kappa) ** 2
    margins = []
    violated = []
    for i in range(min(q, len(lam))):
        g = kk * lam[i] + mu[i]
        margins.append(float(g))
        ok = g > zero_tol if mode == DEFINITE else g >= -zero_tol
        if not ok:
            violated.append(i)
    # indices beyond n have no lambda; the rank condition already fails there
    feasible = rank_ok and not violated
    return FeasibilityVerdict(mode, feasible, float(kappa), violated, rank_ok,
                              k, r, p, float(zero_tol), margins)


def check_feasible_matrices(A, D, kappa: float, mode: str = DEFINITE,
                            zero_tol: float | None = None) -> FeasibilityVerdict:
    eigsA = eigendecompose_hermitian(A, NONINCREASING)
    eigsD = eigendecompose_hermitian(D, NONDECREASING)
    return check_feasible(eigsA, eigsD, kappa, mode, zero_tol)


def minimal_kappa(eigsA, eigsD, mode: str = DEFINITE, zero_tol: float | None = None,
                  hi: float = 1.0, rtol: float = 1e-10, max_iter: int = 200):
    """
    Bisection for the smallest feasible budget, built from ``check_feasible``.

    Returns ``None`` when the rank condition fails (no budget helps).
    """
    v = check_feasible(eigsA, eigsD, hi, mode, zero_tol)
    if not v.rank_condition_ok:
        return None
    for _ in range(max_iter):
        if v.feasible:
            break
        hi *= 2.0
        v = check_feasible(eigsA, eigsD, hi, mode, zero_tol)
    else:
        return None
    lo = 0.0
    for _ in range(max_iter):
        if hi - lo <= rtol * hi:
            break
        mid = 0.5 * (lo + hi)
        if mid > 0 and check_feasible(eigsA, eigsD, mid, mode, zero_tol).feasible:
            hi = mid
        else:
            lo = mid
    return hi


def _orth_kernel(H, tol):
    """Orthonormal basis of the numerical kernel of a Hermitian PSD-ish matrix."""
    sys = eigendecompose_hermitian(hermitian_part(H), NONDECREASING)
    return sys.vectors[:, np.abs(sys.values) <= tol]


def _intersect(N1, N2, tol):
    m = N1.shape[0]
    if N1.shape[1] == 0 or N2.shape[1] == 0:
        return np.zeros((m, 0), dtype=complex)
    I = np.eye(m)
    P = np.vstack([I - N1 @ N1.conj().T, I - N2 @ N2.conj().T])
    _, s, Vh = np.linalg.svd(P)
    s_full = np.zeros(m)
    s_full[:len(s)] = s
    return Vh.conj().T[:, s_full <= tol]


def infeasibility_witness(A, D, K, mode: str = DEFINITE, zero_tol: float | None = None):
    """
    Unit vector ``v`` with ``<(D + K* A K) v, v> <= 0`` (``< 0`` in semidefinite
    mode), taken from ``ker(K* (A + |A|) K)`` intersected with the span of the
    eigenvectors of ``D`` for nonpositive (resp. negative) eigenvalues.

    When ``r > k`` (resp. ``r - p > k``) the intersection is nontrivial for every
    ``K``. Otherwise it may still be nontrivial for the particular ``K`` given,
    and a witness is returned then as well. Returns ``None`` when the
    intersection is trivial. Among intersection vectors the one minimizing the
    Rayleigh quotient of ``D + K* A K`` is returned.
    """
    _check_mode(mode)
    A, D, K = as_matrix(A), as_matrix(D), as_matrix(K)
    n, m = A.shape[0], D.shape[0]
    if A.shape != (n, n) or D.shape != (m, m) or K.shape != (n, m):
        raise DimensionMismatch(f"inconsistent shapes A{A.shape} D{D.shape} K{K.shape}")
    eigsA = eigendecompose_hermitian(A, NONINCREASING)
    eigsD = eigendecompose_hermitian(D, NONDECREASING)
    if zero_tol is None:
        zero_tol = default_zero_tol(eigsA, eigsD)
    lam_plus = np.clip(eigsA.values, 0.0, None)
    # A + |A| = U diag(2 max(lambda, 0)) U*
    A_abs_sum = (eigsA.vectors * (2.0 * lam_plus)) @ eigsA.vectors.conj().T
    H1 = K.conj().T @ A_abs_sum @ K
    scale = max(1.0, spectral_norm(H1))
    N1 = _orth_kernel(H1, zero_tol * scale)
    if mode == DEFINITE:
        cols = eigsD.values <= zero_tol
    else:
        cols = eigsD.values < -zero_tol
    N2 = eigsD.vectors[:, cols]
    Z = _intersect(N1, N2, np.sqrt(zero_tol))
    if Z.shape[1] == 0:
        return None
    # orthonormalize before the Rayleigh-quotient minimization
    Z, _ = np.linalg.qr(Z)
    H = hermitian_part(D + K.conj().T @ A @ K)
    small = hermitian_part(Z.conj().T @ H @ Z)
    w, Y = np.linalg.eigh(small)
    v = Z @ Y[:, 0]
    return v / np.linalg.norm(v)


def quadratic_form(A, D, K, v) -> float:
    H = as_matrix(D) + as_matrix(K).conj().T @ as_matrix(A) @ as_matrix(K)
    v = np.asarray(v, dtype=complex)
    return float(np.real(np.vdot(v, H @ v)))


__all__ = [
    "DEFINITE", "SEMIDEFINITE", "MODES", "FeasibilityVerdict", "InertiaCounts",
    "check_feasible", "check_feasible_matrices", "infeasibility_witness",
    "minimal_kappa", "quadratic_form", "inertia_pair", "default_zero_tol",
]
