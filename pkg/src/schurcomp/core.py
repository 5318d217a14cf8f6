"""
Dense complex-matrix primitives shared by every other module.

Ordering conventions are strict and used everywhere downstream:

  - eigenvalues of the top-left block ``A`` are kept nonincreasing,
  - eigenvalues of the bottom-right block ``D`` are kept nondecreasing.

Repeated eigenvalues are returned in the order produced by LAPACK; any
orthonormal basis of a repeated eigenspace is acceptable since all
identities built on top are basis independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotSquare

NONINCREASING = "nonincreasing"
NONDECREASING = "nondecreasing"

HERMITIAN_TOL = 1e-10


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a finite 2-D complex array (a copy)."""
    M = np.array(M, dtype=complex, copy=True)
    if M.ndim == 1:
        M = M.reshape(1, -1) if M.size else M.reshape(0, 0)
    if M.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def spectral_norm(M) -> float:
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermitian_part(M) -> np.ndarray:
    M = np.asarray(M)
    return 0.5 * (M + M.conj().T)


def is_hermitian(M, tol: float = HERMITIAN_TOL) -> bool:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        return False
    if M.size == 0:
        return True
    return np.linalg.norm(M - M.conj().T, 2) <= tol * max(1.0, spectral_norm(M))


@dataclass(frozen=True)
class HermitianEigenSystem:
    """Sorted eigenvalues and a unitary eigenvector matrix (column ``i`` pairs with ``values[i]``)."""

    values: np.ndarray
    vectors: np.ndarray
    order: str = NONINCREASING

    @property
    def dim(self) -> int:
        return len(self.values)

    def reconstruct(self) -> np.ndarray:
        Q = self.vectors
        return (Q * self.values) @ Q.conj().T


@dataclass(frozen=True)
class InertiaCounts:
    positive: int
    zero: int
    negative: int
    zero_tol: float

    @property
    def dim(self) -> int:
        return self.positive + self.zero + self.negative

    @property
    def nonpositive(self) -> int:
        return self.zero + self.negative


@dataclass(frozen=True)
class SingularProfile:
    """Nonincreasing strictly positive singular values above a rank threshold."""

    values: np.ndarray
    rank_tol: float

    @property
    def rank(self) -> int:
        return len(self.values)

    @property
    def norm(self) -> float:
        return float(self.values[0]) if self.rank else 0.0


def eigendecompose_hermitian(M, order: str = NONINCREASING,
                             hermitian_tol: float = HERMITIAN_TOL) -> HermitianEigenSystem:
    """
    Eigendecomposition ``M = Q diag(values) Q*`` of a Hermitian matrix.

    Parameters
    ----------
    M : array_like, shape (n, n)
        Hermitian up to ``hermitian_tol * max(1, ||M||)``. The matrix is
        symmetrized before the solver is called.
    order : {"nonincreasing", "nondecreasing"}
        Ordering of the returned eigenvalues.

    Raises
    ------
    NotSquare, NotHermitian
    """
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise NotSquare(f"matrix of shape {M.shape} is not square")
    if order not in (NONINCREASING, NONDECREASING):
        raise ValueError(f"unknown order {order!r}")
    n = M.shape[0]
    if n == 0:
        return HermitianEigenSystem(np.zeros(0), np.zeros((0, 0), dtype=complex), order)
    scale = max(1.0, spectral_norm(M))
    asym = np.linalg.norm(M - M.conj().T, 2)
    if asym > hermitian_tol * scale:
        raise NotHermitian(f"||M - M*|| = {asym:.3e} exceeds {hermitian_tol:.1e} * {scale:.3e}")
    w, Q = np.linalg.eigh(hermitian_part(M))
    # eigh is ascending; a reversal keeps tie order stable
    if order == NONINCREASING:
        w, Q = w[::-1], Q[:, ::-1]
    return HermitianEigenSystem(np.ascontiguousarray(w), np.ascontiguousarray(Q), order)


def default_zero_tol(values) -> float:
    values = np.asarray(values, dtype=float)
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return 1e-9 * max(1.0, scale)


def inertia(sys: HermitianEigenSystem, zero_tol: float | None = None) -> InertiaCounts:
    """Count eigenvalues by sign; anything in ``[-zero_tol, zero_tol]`` counts as zero."""
    if zero_tol is None:
        zero_tol = default_zero_tol(sys.values)
    if zero_tol < 0:
        raise ValueError("zero_tol must be nonnegative")
    v = np.asarray(sys.values)
    pos = int(np.sum(v > zero_tol))
    neg = int(np.sum(v < -zero_tol))
    return InertiaCounts(pos, len(v) - pos - neg, neg, float(zero_tol))


def singular_values(M, rank_tol: float | None = None) -> SingularProfile:
    """
    Singular values of ``M`` that exceed ``rank_tol``.

    The default threshold is ``1e-12 * sigma_1``, so the zero matrix yields an
    empty profile.
    """
    M = np.asarray(M, dtype=complex)
    if M.size == 0:
        return SingularProfile(np.zeros(0), 0.0 if rank_tol is None else rank_tol)
    s = np.linalg.svd(M, compute_uv=False)
    if rank_tol is None:
        rank_tol = 1e-12 * float(s[0])
    s = s[(s > rank_tol) & (s > 0)]
    return SingularProfile(s, float(rank_tol))


def pinv(A, pinv_tol: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse; singular values at or below ``pinv_tol`` are dropped."""
    A = np.asarray(A, dtype=complex)
    if A.size == 0:
        return np.zeros(A.shape[::-1], dtype=complex)
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    if pinv_tol is None:
        pinv_tol = 1e-12 * float(s[0])
    keep = s > pinv_tol
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (Vh.conj().T * s_inv) @ U.conj().T


def schur_complement(blocks, pinv_tol: float | None = None) -> np.ndarray:
    """
    Generalized Schur complement ``D - C A^+ B`` of the leading block.

    Parameters
    ----------
    blocks : tuple (A, B, C, D)
        ``A`` is n x n, ``B`` n x m, ``C`` m x n, ``D`` m x m.
    pinv_tol : float, optional
        Absolute threshold for the pseudo-inverse of ``A``; defaults to
        ``1e-12 * sigma_1(A)``.
    """
    A, B, C, D = (as_matrix(X) for X in blocks)
    n = A.shape[0]
    m = D.shape[0]
    if (A.shape != (n, n) or D.shape != (m, m) or B.shape != (n, m)
            or C.shape != (m, n)):
        raise DimensionMismatch(
            f"inconsistent blocks A{A.shape} B{B.shape} C{C.shape} D{D.shape}")
    return D - C @ pinv(A, pinv_tol) @ B


def assemble_blocks(A, B, C, D) -> np.ndarray:
    return np.block([[as_matrix(A), as_matrix(B)], [as_matrix(C), as_matrix(D)]])


def split_blocks(S, n: int):
    """Return the four blocks of ``S`` with the leading block of size ``n``."""
    S = np.asarray(S)
    return S[:n, :n], S[:n, n:], S[n:, :n], S[n:, n:]


def psd_sqrt(M, inverse: bool = False, clamp_tol: float | None = None) -> np.ndarray:
    """
    Principal square root (or inverse square root) of a Hermitian PSD matrix.

    Eigenvalues within ``clamp_tol`` below zero are clamped to zero; anything
    more negative raises ``ValueError``.
    """
    sys = eigendecompose_hermitian(M, NONDECREASING)
    w = sys.values
    if clamp_tol is None:
        clamp_tol = default_zero_tol(w)
    if w.size and w[0] < -clamp_tol:
        raise ValueError(f"matrix is not positive semidefinite (min eigenvalue {w[0]:.3e})")
    w = np.clip(w, 0.0, None)
    if inverse:
        if w.size and w[0] <= clamp_tol:
            raise ValueError("matrix is singular; no inverse square root")
        r = 1.0 / np.sqrt(w)
    else:
        r = np.sqrt(w)
    Q = sys.vectors
    return (Q * r) @ Q.conj().T


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    return Q * (d / np.abs(d))


def random_hermitian(eigenvalues, rng: np.random.Generator) -> np.ndarray:
    """Hermitian matrix with the prescribed spectrum and a random eigenbasis."""
    eigenvalues = np.asarray(eigenvalues, dtype=float)
    Q = random_unitary(len(eigenvalues), rng)
    M = (Q * eigenvalues) @ Q.conj().T
    return hermitian_part(M)
