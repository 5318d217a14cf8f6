"""
J-frame matrices on ``C^(n+m)`` with the indefinite inner product
``[x, y] = <J x, y>``, ``J = diag(I_n, -I_m)``.

A J-frame matrix is ``S = [[A, -A K], [K* A, D]]`` with ``A > 0``,
``||K|| < 1`` and ``D + K* A K > 0``. It is the J-frame operator
``S f = sum_i sigma_i [f, f_i] f_i`` of a family whose positive members span
``M+ = {(f, K* f)}`` and whose negative members span ``M- = {0} x C^m``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .completion import CompletionCertificate, eigensystems_from_certificate
from .core import (HermitianEigenSystem, as_matrix, hermitian_part, is_hermitian, psd_sqrt,
                   singular_values, spectral_norm, split_blocks)
from .errors import (ANotPositiveDefinite, BlockInconsistent, ContractionSingular,
                     DimensionMismatch, NotJFrame)
from .feasibility import DEFINITE, check_feasible, default_zero_tol

CONTRACTION_GUARD = 1e-10


@dataclass(frozen=True)
class IndefiniteGram:
    n_plus: int
    n_minus: int

    @property
    def J(self) -> np.ndarray:
        return np.diag(np.concatenate([np.ones(self.n_plus), -np.ones(self.n_minus)]))

    def inner(self, x, y) -> complex:
        """``sum_i x_i conj(y_i) - sum_j x_{n+j} conj(y_{n+j})``."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        n = self.n_plus
        return complex(np.vdot(y[:n], x[:n]) - np.vdot(y[n:], x[n:]))

    def signature(self, x, tol: float = 0.0) -> int:
        q = self.inner(x, x).real
        return 1 if q > tol else (-1 if q < -tol else 0)


@dataclass
class JFrameReport:
    is_jframe_matrix: bool
    witness_failures: list = field(default_factory=list)
    K: np.ndarray | None = None
    alpha_plus: float | None = None
    beta_plus: float | None = None
    alpha_minus: float | None = None
    beta_minus: float | None = None
    explicit: dict | None = None
    apriori: dict | None = None

    def to_dict(self) -> dict:
        out = {"is_jframe_matrix": self.is_jframe_matrix,
               "witness_failures": list(self.witness_failures)}
        if self.alpha_plus is not None:
            out["bounds"] = {"alpha_plus": self.alpha_plus, "beta_plus": self.beta_plus,
                             "alpha_minus": self.alpha_minus, "beta_minus": self.beta_minus}
        if self.explicit is not None:
            out["explicit"] = dict(self.explicit)
        if self.apriori is not None:
            out["apriori"] = dict(self.apriori)
        return out


@dataclass(frozen=True)
class JFrameFamily:
    vectors: np.ndarray      # columns are the frame vectors
    signatures: np.ndarray   # +1 / -1 per column
    n: int
    m: int

    def __len__(self) -> int:
        return self.vectors.shape[1]

    def operator(self) -> np.ndarray:
        """Matrix of ``f -> sum_i sigma_i [f, f_i] f_i``, i.e. ``F diag(sigma) F* J``."""
        F = self.vectors
        J = IndefiniteGram(self.n, self.m).J
        return (F * self.signatures) @ F.conj().T @ J

    def reconstruct(self, f, S_inv) -> np.ndarray:
        """``sum_i sigma_i [f, S^-1 f_i] f_i``; equals ``f`` for a J-frame with operator S."""
        gram = IndefiniteGram(self.n, self.m)
        f = np.asarray(f, dtype=complex)
        G = S_inv @ self.vectors
        out = np.zeros_like(f)
        for i in range(len(self)):
            out += self.signatures[i] * gram.inner(f, G[:, i]) * self.vectors[:, i]
        return out

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m,
                "vectors": [{"vector": [[float(z.real), float(z.imag)] for z in self.vectors[:, i]],
                             "signature": int(self.signatures[i])}
                            for i in range(len(self))]}


def _min_eig(H) -> float:
    return float(np.linalg.eigvalsh(hermitian_part(H))[0]) if H.size else float("inf")


def is_jframe_matrix(S, n: int, m: int, tol: float = 1e-9) -> JFrameReport:
    """
    Check the three J-frame matrix conditions on the blocks of ``S``.

    ``K`` is recovered from the top-right block as ``-A^-1 B``; the
    bottom-left block must then equal ``K* A``.

    Raises
    ------
    BlockInconsistent
        If ``A`` is invertible but the bottom-left block is not ``K* A``.
    """
    S = as_matrix(S)
    if S.shape != (n + m, n + m):
        raise DimensionMismatch(f"S has shape {S.shape}, expected {(n + m, n + m)}")
    A, B, C, D = split_blocks(S, n)
    scale = max(1.0, spectral_norm(S))
    failures = []
    if not is_hermitian(A, tol):
        failures.append("A is not Hermitian")
    elif _min_eig(A) <= tol * scale:
        failures.append("A is not positive definite")
    try:
        cond = np.linalg.cond(A) if n else 1.0
        if not np.isfinite(cond) or cond > 1e12:
            raise np.linalg.LinAlgError
        K = -np.linalg.solve(A, B) if n else np.zeros((0, m), dtype=complex)
    except np.linalg.LinAlgError:
        failures.append("A is singular; K cannot be recovered")
        return JFrameReport(False, failures)
    if np.linalg.norm(C - K.conj().T @ A) > tol * scale:
        raise BlockInconsistent("bottom-left block differs from K* A")
    if not is_hermitian(D, tol):
        failures.append("D is not Hermitian")
    if not spectral_norm(K) < 1.0:
        failures.append(f"K is not strictly contractive (||K|| = {spectral_norm(K):.6g})")
    schur = D + K.conj().T @ A @ K
    if m and _min_eig(schur) <= tol * scale:
        failures.append("D + K* A K is not positive definite")
    return JFrameReport(not failures, failures, K)


def jframe_existence(eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem,
                     zero_tol: float | None = None):
    """
    Whether a strict contraction ``K`` turns ``(A, D)`` into a J-frame matrix.

    Returns ``(exists, violated)`` with 0-based indices ``i < r - p`` where
    ``lambda_i + mu_i <= 0``. Indices with ``mu_i = 0`` satisfy the condition
    automatically, so this agrees with checking ``i < r``.
    """
    if zero_tol is None:
        zero_tol = default_zero_tol(eigsA, eigsD)
    if eigsA.dim and not eigsA.values[-1] > zero_tol:
        raise ANotPositiveDefinite(f"lambda_n = {eigsA.values[-1]!r} is not positive")
    v = check_feasible(eigsA, eigsD, 1.0, DEFINITE, zero_tol)
    return v.feasible, list(v.violated_indices)


def split_S(cert: CompletionCertificate):
    """``S = S+ + S-`` with ``S+ = [[A, -AK], [K*A, -K*AK]]`` and ``S- = diag(0, D + K*AK)``."""
    n, m = cert.n, cert.m
    A, K = cert.A, cert.K
    KAK = K.conj().T @ A @ K
    S_plus = np.block([[A, -A @ K], [K.conj().T @ A, -KAK]])
    S_minus = np.zeros((n + m, n + m), dtype=complex)
    S_minus[n:, n:] = cert.D + KAK
    return S_plus, S_minus


def _defect_root(K, inverse=False):
    n = K.shape[0]
    s1 = spectral_norm(K)
    if inverse and 1.0 - s1 * s1 < CONTRACTION_GUARD:
        raise ContractionSingular(f"1 - ||K||^2 = {1.0 - s1 * s1:.3e} is below "
                                  f"{CONTRACTION_GUARD:.0e}")
    return psd_sqrt(np.eye(n) - K @ K.conj().T, inverse=inverse)


def positive_frame_operator(cert: CompletionCertificate) -> np.ndarray:
    """``C = (I - K K*)^(1/2) A (I - K K*)^(1/2)``."""
    R = _defect_root(cert.K)
    return hermitian_part(R @ cert.A @ R)


def _require_jframe(cert, tol):
    rep = is_jframe_matrix(cert.S, cert.n, cert.m, tol)
    if not rep.is_jframe_matrix:
        raise NotJFrame("; ".join(rep.witness_failures))
    return rep


def explicit_bounds(cert: CompletionCertificate, eigsA, eigsD) -> dict:
    """Frame bounds read off from ``lambda``, ``mu`` and the schedule."""
    lam, mu = eigsA.values, eigsD.values
    eps = np.asarray(cert.schedule.epsilons, dtype=float)
    r = min(len(eps), len(lam), len(mu))
    plus = [(1 - eps[i]) * lam[i] for i in range(r)] + list(lam[r:])
    minus = [eps[i] * lam[i] + mu[i] for i in range(r)] + list(mu[r:])
    return {"alpha_plus": float(min(plus)), "beta_plus": float(max(plus)),
            "alpha_minus": float(min(minus)), "beta_minus": float(max(minus))}


def apriori_bounds(cert: CompletionCertificate, eigsA, eigsD) -> dict:
    """
    Bounds on the frame bounds that use only ``lambda``, ``mu`` and the singular
    values of ``K``.

    ``sigma_min`` is the n-th singular value of ``K`` (zero when
    ``rank K < n``); ``sigma_min_positive`` is the smallest nonzero one. The
    two coincide when ``K`` has full row rank, and only the former gives a
    valid upper bound on ``beta_plus`` otherwise.
    """
    lam, mu = eigsA.values, eigsD.values
    n = len(lam)
    prof = singular_values(cert.K)
    s1 = prof.norm
    full = np.zeros(n)
    full[:min(n, prof.rank)] = prof.values[:n]
    s_min = float(full[-1]) if n else 0.0
    s_l = float(prof.values[-1]) if prof.rank else 0.0
    r = min(len(cert.schedule.epsilons), n, len(mu))
    sums = [lam[i] + mu[i] for i in range(r)]
    minus_terms = sums + ([mu[r]] if r < len(mu) else [])
    out = {
        "sigma_1": s1,
        "sigma_min": s_min,
        "sigma_min_positive": s_l,
        "beta_minus_upper": s1 * s1 * lam[0] + mu[-1] if n and len(mu) else None,
        "alpha_plus_lower": (1 - s1 * s1) * lam[-1] if n else None,
        "beta_plus_upper": (1 - s_min * s_min) * lam[0] if n else None,
        "beta_plus_upper_positive_sigma": (1 - s_l * s_l) * lam[0] if n else None,
        "alpha_plus_estimate": float(min(sums + [lam[-1]])) if n else None,
        "alpha_minus_estimate": min(minus_terms) if minus_terms else None,
    }
    return {k: (None if v is None else float(v)) for k, v in out.items()}


def apriori_checks(report: JFrameReport, slack: float = 1e-9) -> dict:
    """Evaluate every a-priori inequality in ``report.apriori``."""
    ap = report.apriori
    ok = {
        "0 < alpha_minus <= beta_minus": 0 < report.alpha_minus <= report.beta_minus + slack,
        "beta_minus <= sigma_1^2 lambda_1 + mu_m": report.beta_minus <= ap["beta_minus_upper"] + slack,
        "(1 - sigma_1^2) lambda_n <= alpha_plus": ap["alpha_plus_lower"] <= report.alpha_plus + slack,
        "alpha_plus <= beta_plus": report.alpha_plus <= report.beta_plus + slack,
        "beta_plus <= (1 - sigma_n^2) lambda_1": report.beta_plus <= ap["beta_plus_upper"] + slack,
        "alpha_plus <= min(lambda_i + mu_i, lambda_n)": report.alpha_plus <= ap["alpha_plus_estimate"] + slack,
    }
    if ap["alpha_minus_estimate"] is not None:
        ok["alpha_minus <= min(lambda_i + mu_i, mu_{r+1})"] = (
            report.alpha_minus <= ap["alpha_minus_estimate"] + slack)
    return ok


def frame_bounds(cert: CompletionCertificate, eigsA=None, eigsD=None,
                 tol: float = 1e-9) -> JFrameReport:
    """
    Exact frame bounds of the positive and negative parts.

    ``alpha-``/``beta-`` are the extreme eigenvalues of ``D + K* A K`` and
    ``alpha+``/``beta+`` those of ``C = (I - KK*)^(1/2) A (I - KK*)^(1/2)``.
    The explicit min/max lists and the a-priori estimates are attached.
    """
    rep = _require_jframe(cert, tol)
    if eigsA is None or eigsD is None:
        eigsA, eigsD = eigensystems_from_certificate(cert)
    C = positive_frame_operator(cert)
    wc = np.linalg.eigvalsh(C)
    ws = np.linalg.eigvalsh(hermitian_part(cert.schur))
    rep.alpha_plus, rep.beta_plus = float(wc[0]), float(wc[-1])
    rep.alpha_minus, rep.beta_minus = float(ws[0]), float(ws[-1])
    rep.explicit = explicit_bounds(cert, eigsA, eigsD)
    rep.apriori = apriori_bounds(cert, eigsA, eigsD)
    return rep


def synthesize_jframe(cert: CompletionCertificate, tol: float = 1e-9) -> JFrameFamily:
    """
    A J-frame with ``n + m`` vectors whose J-frame operator is ``cert.S``.

    Negative members are ``(0, c_j)`` with ``c_j`` the columns of
    ``(D + K*AK)^(1/2)``; positive members are ``(u_i, K* u_i)`` with ``u_i``
    the columns of ``(I - KK*)^(-1/2) C^(1/2)``.
    """
    _require_jframe(cert, tol)
    n, m = cert.n, cert.m
    K = cert.K
    C = positive_frame_operator(cert)
    Uc = _defect_root(K, inverse=True) @ psd_sqrt(C)
    plus = np.vstack([Uc, K.conj().T @ Uc])
    Rm = psd_sqrt(hermitian_part(cert.schur))
    minus = np.vstack([np.zeros((n, m), dtype=complex), Rm])
    vectors = np.hstack([plus, minus])
    signatures = np.concatenate([np.ones(n, dtype=int), -np.ones(m, dtype=int)])
    return JFrameFamily(vectors, signatures, n, m)


def maximality(family: JFrameFamily, tol: float = 1e-9) -> dict:
    """Dimensions of the signature spans and definiteness of ``[.,.]`` on them."""
    J = IndefiniteGram(family.n, family.m).J
    out = {}
    for name, sgn in (("plus", 1), ("minus", -1)):
        F = family.vectors[:, family.signatures == sgn]
        if F.shape[1] == 0:
            out[name] = {"dim": 0, "definite": True}
            continue
        Q, s, _ = np.linalg.svd(F, full_matrices=False)
        dim = int(np.sum(s > tol * s[0]))
        Q = Q[:, :dim]
        G = sgn * hermitian_part(Q.conj().T @ J @ Q)
        out[name] = {"dim": dim, "definite": bool(_min_eig(G) > tol)}
    return out
