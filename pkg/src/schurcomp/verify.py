"""
Independent numerical oracles.

Nothing here imports the closed-form spectral code: the spectrum of ``S`` is
obtained from the general nonsymmetric LAPACK solver (Hessenberg reduction
followed by shifted QR), Jordan structure from singular-value nullities, and
the classical identities (Aitken factorization, Schur determinant formula,
Weyl inequalities, singular-value products) by direct evaluation.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CardinalityMismatch, DimensionMismatch, NoConvergence, NotSquare, SingularA

MAX_DIM = 200
NULLITY_TOL = 1e-8


def _sigma_min(M) -> float:
    return float(np.linalg.svd(M, compute_uv=False)[-1])


def numeric_spectrum(M, residual_tol: float = 1e-8) -> np.ndarray:
    """
    Eigenvalues of a general square matrix.

    Every returned ``eta`` satisfies ``sigma_min(M - eta I) <= residual_tol * (1 + ||M||)``;
    otherwise ``NoConvergence`` is raised.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise NotSquare(f"matrix of shape {M.shape} is not square")
    n = M.shape[0]
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds {MAX_DIM}")
    if n == 0:
        return np.zeros(0, dtype=complex)
    try:
        w = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from None
    bound = residual_tol * (1.0 + np.linalg.norm(M, 2))
    I = np.eye(n)
    for eta in w:
        res = _sigma_min(M - eta * I)
        if res > bound:
            raise NoConvergence(f"eigenvalue {eta} has residual {res:.3e} > {bound:.3e}")
    return w


@dataclass(frozen=True)
class SpectrumComparison:
    pairs: list  # (predicted, numeric, distance)
    max_distance: float
    matched: bool
    tolerance: float


def compare_spectra(predicted, numeric, tol: float) -> SpectrumComparison:
    """
    Greedy nearest-neighbour bijection between two eigenvalue multisets.

    ``predicted`` may be an array or any object with a ``values`` attribute.
    The globally closest remaining pair is matched first.
    """
    p = np.asarray(getattr(predicted, "values", predicted), dtype=complex).ravel()
    q = np.asarray(numeric, dtype=complex).ravel()
    if len(p) != len(q):
        raise CardinalityMismatch(f"{len(p)} predicted vs {len(q)} numeric eigenvalues")
    if len(p) == 0:
        return SpectrumComparison([], 0.0, True, tol)
    dist = np.abs(p[:, None] - q[None, :])
    free_p = np.ones(len(p), dtype=bool)
    free_q = np.ones(len(q), dtype=bool)
    pairs = []
    order = np.argsort(dist, axis=None, kind="stable")
    for flat in order:
        i, j = divmod(int(flat), len(q))
        if free_p[i] and free_q[j]:
            free_p[i] = free_q[j] = False
            pairs.append((complex(p[i]), complex(q[j]), float(dist[i, j])))
            if len(pairs) == len(p):
                break
    worst = max(d for _, _, d in pairs)
    return SpectrumComparison(pairs, worst, worst <= tol, tol)


def nullity(M, rel_tol: float = NULLITY_TOL, scale: float | None = None) -> int:
    """
    Number of singular values below ``rel_tol * scale``.

    ``scale`` defaults to ``sigma_max(M)``; pass an external scale when ``M``
    may be pure rounding noise (e.g. the square of a nilpotent matrix).
    """
    M = np.asarray(M, dtype=complex)
    s = np.linalg.svd(M, compute_uv=False)
    if scale is None:
        scale = s[0] if s.size else 0.0
    if scale == 0.0:
        return M.shape[1]
    return int(np.sum(s <= rel_tol * scale)) + (M.shape[1] - len(s))


def jordan_rank_probe(S, eta, rel_tol: float = NULLITY_TOL):
    """
    ``(nullity(S - eta I), nullity((S - eta I)^2))``; a 2-chain shows up as ``d2 = d1 + 1``.

    Both thresholds are relative to ``max(1, ||S||)`` (squared for the second
    power) so that an exactly nilpotent part is not measured against its own noise.
    """
    S = np.asarray(S, dtype=complex)
    N = S - eta * np.eye(S.shape[0])
    scale = max(1.0, float(np.linalg.norm(S, 2)), abs(eta))
    return nullity(N, rel_tol, scale), nullity(N @ N, rel_tol, scale * scale)


def eigenbasis_rank(S, rel_tol: float = NULLITY_TOL):
    """Numeric rank and condition number of the eigenvector matrix from ``eig``."""
    _, X = np.linalg.eig(np.asarray(S, dtype=complex))
    s = np.linalg.svd(X, compute_uv=False)
    rank = int(np.sum(s > rel_tol * s[0]))
    cond = float(s[0] / s[-1]) if s[-1] > 0 else float("inf")
    return rank, cond


# --- classical identities -------------------------------------------------

def _check_blocks(A, B, C, D):
    A, B, C, D = (np.asarray(X, dtype=complex) for X in (A, B, C, D))
    n, m = A.shape[0], D.shape[0]
    if A.shape != (n, n) or D.shape != (m, m) or B.shape != (n, m) or C.shape != (m, n):
        raise DimensionMismatch("inconsistent block shapes")
    return A, B, C, D


def _inv(A):
    if np.linalg.cond(A) > 1e12:
        raise SingularA("A is numerically singular")
    return np.linalg.inv(A)


def aitken_residual(A, B, C, D) -> float:
    """Relative residual of ``S = [[I,0],[CA^-1,I]] diag(A, S/A) [[I,A^-1 B],[0,I]]``."""
    A, B, C, D = _check_blocks(A, B, C, D)
    n, m = A.shape[0], D.shape[0]
    Ainv = _inv(A)
    In, Im = np.eye(n), np.eye(m)
    Z = np.zeros((n, m))
    L = np.block([[In, Z], [C @ Ainv, Im]])
    M = np.block([[A, Z], [Z.T, D - C @ Ainv @ B]])
    R = np.block([[In, Ainv @ B], [Z.T, Im]])
    S = np.block([[A, B], [C, D]])
    return float(np.linalg.norm(L @ M @ R - S) / max(1.0, np.linalg.norm(S)))


def determinant_residual(A, B, C, D) -> float:
    """``|det S - det A det(S/A)| / |det S|``."""
    A, B, C, D = _check_blocks(A, B, C, D)
    Ainv = _inv(A)
    S = np.block([[A, B], [C, D]])
    dS = np.linalg.det(S)
    rhs = np.linalg.det(A) * np.linalg.det(D - C @ Ainv @ B)
    return float(abs(dS - rhs) / max(abs(dS), np.finfo(float).tiny))


def _desc(H):
    return np.linalg.eigvalsh(0.5 * (H + H.conj().T))[::-1]


def weyl_violation(H1, H2) -> float:
    """
    Largest violation over all index pairs of

        lambda_j(H1 + H2) <= lambda_i(H1) + lambda_{j-i+1}(H2)     (i <= j)
        lambda_j(H1 + H2) >= lambda_i(H1) + lambda_{j-i+n}(H2)     (i >= j)

    with eigenvalues in nonincreasing order; nonpositive means all hold.
    """
    a, b, c = _desc(H1), _desc(H2), _desc(np.asarray(H1) + np.asarray(H2))
    n = len(a)
    worst = -np.inf
    for j in range(1, n + 1):
        for i in range(1, n + 1):
            if i <= j:
                worst = max(worst, c[j - 1] - (a[i - 1] + b[j - i]))
            if i >= j:
                worst = max(worst, (a[i - 1] + b[j - i + n - 1]) - c[j - 1])
    return float(worst)


def _rank(M, rel_tol=1e-10):
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0])) if s.size and s[0] > 0 else 0, s


def singular_product_violation(X, Y) -> float:
    """
    Largest violation of ``sigma_{i+j-1}(X Y*) <= sigma_i(X) sigma_j(Y)`` over
    ``i <= rank X``, ``j <= rank Y``, ``i + j - 1 <= rank(X Y*)``.
    """
    X, Y = np.asarray(X, dtype=complex), np.asarray(Y, dtype=complex)
    if X.shape != Y.shape:
        raise DimensionMismatch("X and Y must have the same shape")
    rx, sx = _rank(X)
    ry, sy = _rank(Y)
    rp, sp = _rank(X @ Y.conj().T)
    worst = -np.inf
    for i in range(1, rx + 1):
        for j in range(1, ry + 1):
            if i + j - 1 <= rp:
                worst = max(worst, sp[i + j - 2] - sx[i - 1] * sy[j - 1])
    return float(worst) if np.isfinite(worst) else 0.0


def congruence_violation(A, K) -> float:
    """
    Largest violation of ``lambda_j(K* A K) <= ||K||^2 lambda_j(A)`` for
    ``j <= min(k, m, rank(K* A K))``, where ``k`` counts positive eigenvalues of ``A``.
    """
    A, K = np.asarray(A, dtype=complex), np.asarray(K, dtype=complex)
    la = _desc(A)
    KAK = K.conj().T @ A @ K
    lk = _desc(KAK)
    k = int(np.sum(la > 1e-12 * max(1.0, np.max(np.abs(la)))))
    rk, _ = _rank(KAK)
    nK = float(np.linalg.norm(K, 2)) if K.size else 0.0
    worst = -np.inf
    for j in range(1, min(k, K.shape[1], rk) + 1):
        worst = max(worst, lk[j - 1] - nK * nK * la[j - 1])
    return float(worst) if np.isfinite(worst) else 0.0


@dataclass
class IdentityReport:
    residuals: dict = field(default_factory=dict)
    passed: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.passed.values())

    def to_dict(self) -> dict:
        return {"ok": self.ok,
                "checks": {k: {"passed": self.passed[k], "residual": self.residuals[k]}
                           for k in self.residuals}}


def check_identities(A, B, C, D, K=None, tol: float = 1e-10, det_tol: float = 1e-8,
                     slack: float = 1e-9) -> IdentityReport:
    """
    Evaluate the identity suite on one set of blocks.

    Aitken factorization and the determinant formula use ``[[A, B], [C, D]]``.
    When ``A`` and ``D`` are Hermitian and ``K`` is given, the eigenvalue
    inequalities are checked on the objects they are applied to: Weyl on
    ``(D, K* A K)``, the singular-value product on ``(K* A, K*)`` and the
    congruence bound on ``(A, K)``.
    """
    rep = IdentityReport()
    res = aitken_residual(A, B, C, D)
    rep.residuals["aitken"], rep.passed["aitken"] = res, res <= tol
    res = determinant_residual(A, B, C, D)
    rep.residuals["determinant"], rep.passed["determinant"] = res, res <= det_tol
    if K is not None:
        A, D, K = (np.asarray(X, dtype=complex) for X in (A, D, K))
        if not (np.allclose(A, A.conj().T) and np.allclose(D, D.conj().T)):
            raise ValueError("eigenvalue inequalities need Hermitian A and D")
        KAK = K.conj().T @ A @ K
        checks = {
            "weyl": weyl_violation(D, 0.5 * (KAK + KAK.conj().T)),
            "singular_product": singular_product_violation(K.conj().T @ A, K.conj().T),
            "congruence": congruence_violation(A, K),
        }
        for name, v in checks.items():
            rep.residuals[name], rep.passed[name] = v, v <= slack
    return rep
