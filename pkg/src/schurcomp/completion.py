"""
Explicit completion ``K = U E V*`` and its certificate.

``U`` and ``V`` diagonalize ``A = U diag(lambda) U*`` (nonincreasing) and
``D = V diag(mu) V*`` (nondecreasing). ``E`` is ``n x m`` with
``sqrt(eps_i)`` on its leading diagonal, so that

    V* (D + K* A K) V = diag(eps_1 lambda_1 + mu_1, ..., eps_r lambda_r + mu_r,
                             mu_{r+1}, ..., mu_m).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import (NONDECREASING, NONINCREASING, HermitianEigenSystem, as_matrix,
                   eigendecompose_hermitian, hermitian_part, is_hermitian, spectral_norm)
from .errors import DimensionMismatch, InfeasibleInput, ScheduleInvalid
from .feasibility import (DEFINITE, MODES, SEMIDEFINITE, FeasibilityVerdict, check_feasible,
                          default_zero_tol, inertia_pair)
from .matrix_io import matrix_from_dict, matrix_to_dict

# below this width an epsilon interval is treated as empty
GAP_TOL = 1e-8


def collision_threshold(lam: float, mu: float) -> float:
    """``(lambda - mu)**2 / (4 lambda**2)``: the eps at which the pair eta+/- collides."""
    return (lam - mu) ** 2 / (4.0 * lam * lam)


@dataclass(frozen=True)
class EpsilonSchedule:
    epsilons: np.ndarray
    kappa: float
    mode: str
    r: int
    p: int
    zero_tol: float

    @property
    def scope(self) -> int:
        """Number of leading indices with ``mu_i < 0`` (``r - p``)."""
        return self.r - self.p

    def validate(self, eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem) -> None:
        """Raise ``ScheduleInvalid`` unless every schedule invariant holds."""
        eps = np.asarray(self.epsilons, dtype=float)
        kk = self.kappa ** 2
        lam, mu = eigsA.values, eigsD.values
        q = self.scope
        if len(eps) != self.r:
            raise ScheduleInvalid(f"schedule has {len(eps)} entries, expected r = {self.r}")
        if not np.all(np.isfinite(eps)):
            raise ScheduleInvalid("non-finite epsilon")
        n = len(lam)
        for i in range(len(eps)):
            e = eps[i]
            if i < q:
                if i >= n:
                    raise ScheduleInvalid(f"index {i + 1} exceeds the size of A")
                g = e * lam[i] + mu[i]
                if self.mode == DEFINITE:
                    ok = 0 < e < kk and g > 0
                else:
                    ok = 0 < e <= kk and g >= -self.zero_tol
                if not ok:
                    raise ScheduleInvalid(
                        f"eps_{i + 1} = {e!r} violates the {self.mode} constraints "
                        f"(kappa^2 = {kk!r}, eps*lambda+mu = {g!r})")
            elif self.mode == DEFINITE:
                if not 0 <= e < kk:
                    raise ScheduleInvalid(f"eps_{i + 1} = {e!r} not in [0, kappa^2)")
                if e > 0 and i >= min(n, len(mu)):
                    raise ScheduleInvalid(f"index {i + 1} exceeds min(n, m)")
            elif e != 0.0:
                raise ScheduleInvalid(f"eps_{i + 1} must be 0 in semidefinite mode")

    def to_dict(self) -> dict:
        return {
            "epsilons": [float(e) for e in self.epsilons],
            "kappa": self.kappa,
            "mode": self.mode,
            "r": self.r,
            "p": self.p,
            "zero_tol": self.zero_tol,
        }

    @classmethod
    def from_dict(cls, doc) -> "EpsilonSchedule":
        return cls(np.asarray(doc["epsilons"], dtype=float), float(doc["kappa"]), doc["mode"],
                   int(doc["r"]), int(doc["p"]), float(doc["zero_tol"]))


def _pick_epsilon(lam, mu, kk, mode):
    lo = -mu / lam
    a = collision_threshold(lam, mu)
    gap = GAP_TOL * max(1.0, kk)
    top = min(a, kk)
    if top - lo > gap:
        return 0.5 * (lo + top)          # real, distinct pair
    if kk - a > gap:
        return 0.5 * (a + kk)            # lambda + mu = 0: only the complex range is open
    if mode == DEFINITE or kk > lo:
        return 0.5 * (lo + kk)
    return kk


def default_epsilons(eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem, kappa: float,
                     mode: str = DEFINITE, zero_tol: float | None = None,
                     free_epsilon: float | None = None,
                     verdict: FeasibilityVerdict | None = None) -> EpsilonSchedule:
    """
    Midpoint schedule that keeps every eta pair real and simple when possible.

    For ``i < r - p`` the midpoint of ``(-mu_i/lambda_i, min(alpha_i, kappa**2))``
    is used; if that interval is empty (``lambda_i + mu_i = 0``) the midpoint of
    ``(alpha_i, kappa**2)`` is used instead. For ``r - p <= j < r`` (``mu_j = 0``)
    definite mode uses ``free_epsilon`` if given, else half of
    ``min(alpha_j, kappa**2)``; semidefinite mode uses 0.

    Raises
    ------
    InfeasibleInput
        If the feasibility conditions fail for ``(kappa, mode)``.
    """
    if verdict is None:
        verdict = check_feasible(eigsA, eigsD, kappa, mode, zero_tol)
    if not verdict.feasible:
        raise InfeasibleInput(verdict.reason)
    lam, mu = eigsA.values, eigsD.values
    kk = float(kappa) ** 2
    r, p = verdict.r, verdict.p
    q = r - p
    eps = np.zeros(r)
    for i in range(q):
        eps[i] = _pick_epsilon(lam[i], mu[i], kk, mode)
    if mode == DEFINITE:
        for j in range(q, r):
            if free_epsilon is not None:
                eps[j] = free_epsilon
            else:
                eps[j] = 0.5 * min(collision_threshold(lam[j], 0.0), kk)
    sched = EpsilonSchedule(eps, float(kappa), mode, r, p, verdict.zero_tol)
    sched.validate(eigsA, eigsD)
    return sched


def with_overrides(schedule: EpsilonSchedule, overrides, eigsA, eigsD) -> EpsilonSchedule:
    """Replace the leading epsilons with ``overrides`` and revalidate."""
    overrides = [float(e) for e in overrides]
    if len(overrides) > schedule.r:
        raise ScheduleInvalid(f"{len(overrides)} overrides given but r = {schedule.r}")
    eps = np.array(schedule.epsilons, dtype=float)
    eps[:len(overrides)] = overrides
    sched = EpsilonSchedule(eps, schedule.kappa, schedule.mode, schedule.r, schedule.p,
                            schedule.zero_tol)
    sched.validate(eigsA, eigsD)
    return sched


@dataclass(frozen=True)
class CompletionCertificate:
    E: np.ndarray
    K: np.ndarray
    S: np.ndarray
    schur: np.ndarray
    schedule: EpsilonSchedule
    checks: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.E.shape[0]

    @property
    def m(self) -> int:
        return self.E.shape[1]

    @property
    def A(self) -> np.ndarray:
        return self.S[:self.n, :self.n]

    @property
    def D(self) -> np.ndarray:
        return self.S[self.n:, self.n:]

    @property
    def norm_K(self) -> float:
        return spectral_norm(self.K)

    @property
    def schur_min_eig(self) -> float:
        if self.m == 0:
            return float("inf")
        return float(np.linalg.eigvalsh(hermitian_part(self.schur))[0])

    @property
    def certified(self) -> bool:
        return all(self.checks.values()) if self.checks else False

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "m": self.m,
            "schedule": self.schedule.to_dict(),
            "norm_K": self.norm_K,
            "schur_min_eig": self.schur_min_eig,
            "checks": dict(self.checks),
            "E": matrix_to_dict(self.E),
            "K": matrix_to_dict(self.K),
            "S": matrix_to_dict(self.S),
            "schur": matrix_to_dict(self.schur),
        }

    @classmethod
    def from_dict(cls, doc) -> "CompletionCertificate":
        return cls(matrix_from_dict(doc["E"]), matrix_from_dict(doc["K"]),
                   matrix_from_dict(doc["S"]), matrix_from_dict(doc["schur"]),
                   EpsilonSchedule.from_dict(doc["schedule"]), dict(doc.get("checks", {})))


def certificate_checks(A, K, S, schur, schedule, tol: float = 1e-9) -> dict:
    """Evaluate the certificate invariants; values are plain booleans."""
    n = A.shape[0]
    scale = max(1.0, spectral_norm(S))
    normK = spectral_norm(K)
    kappa = schedule.kappa
    if schedule.mode == DEFINITE:
        norm_ok = normK < kappa
    else:
        norm_ok = normK <= kappa * (1 + tol)
    m = schur.shape[0]
    herm = is_hermitian(schur, tol)
    if m:
        lo = float(np.linalg.eigvalsh(hermitian_part(schur))[0])
    else:
        lo = float("inf")
    if schedule.mode == DEFINITE:
        pos = lo > 0
    else:
        pos = lo >= -tol * scale
    blocks = (np.linalg.norm(S[:n, n:] + A @ K) <= tol * scale
              and np.linalg.norm(S[n:, :n] - K.conj().T @ A) <= tol * scale)
    return {
        "norm_within_budget": bool(norm_ok),
        "schur_hermitian": bool(herm),
        "schur_positive": bool(pos),
        "block_structure": bool(blocks),
    }


def build_K(eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem,
            schedule: EpsilonSchedule, A=None, D=None,
            validate: bool = True) -> CompletionCertificate:
    """
    Assemble ``E``, ``K = U E V*``, ``S`` and ``D + K* A K``.

    ``A`` and ``D`` default to the matrices reconstructed from the eigensystems;
    pass the originals to keep ``S``'s diagonal blocks bit-identical to them.
    ``validate=False`` skips the schedule checks so that parameters outside the
    admissible range (e.g. for root-locus studies) can be assembled; the
    certificate checks then report what fails.
    """
    if eigsA.order != NONINCREASING or eigsD.order != NONDECREASING:
        raise ValueError("A eigenvalues must be nonincreasing and D eigenvalues nondecreasing")
    if validate:
        schedule.validate(eigsA, eigsD)
    elif np.any(np.asarray(schedule.epsilons) < 0):
        raise ScheduleInvalid("epsilons must be nonnegative")
    n, m = eigsA.dim, eigsD.dim
    A = eigsA.reconstruct() if A is None else as_matrix(A)
    D = eigsD.reconstruct() if D is None else as_matrix(D)
    if A.shape != (n, n) or D.shape != (m, m):
        raise DimensionMismatch("A and D must match their eigensystems")
    E = np.zeros((n, m), dtype=complex)
    for i, e in enumerate(schedule.epsilons):
        if i < min(n, m):
            E[i, i] = np.sqrt(e)
    U, V = eigsA.vectors, eigsD.vectors
    K = U @ E @ V.conj().T
    AK = A @ K
    S = np.block([[A, -AK], [K.conj().T @ A, D]])
    schur = D + K.conj().T @ AK
    checks = certificate_checks(A, K, S, schur, schedule)
    return CompletionCertificate(E, K, S, schur, schedule, checks)


def complete(A, D, kappa: float = 1.0, mode: str = DEFINITE, epsilons=None,
             zero_tol: float | None = None, free_epsilon: float | None = None):
    """
    Full pipeline from ``(A, D)`` to a certificate.

    Returns ``(certificate, eigsA, eigsD, verdict)``. ``epsilons`` overrides
    the leading entries of the default schedule.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}")
    A, D = as_matrix(A), as_matrix(D)
    eigsA = eigendecompose_hermitian(A, NONINCREASING)
    eigsD = eigendecompose_hermitian(D, NONDECREASING)
    if zero_tol is None:
        zero_tol = default_zero_tol(eigsA, eigsD)
    verdict = check_feasible(eigsA, eigsD, kappa, mode, zero_tol)
    sched = default_epsilons(eigsA, eigsD, kappa, mode, zero_tol, free_epsilon, verdict)
    if epsilons is not None:
        sched = with_overrides(sched, epsilons, eigsA, eigsD)
    cert = build_K(eigsA, eigsD, sched, A, D)
    return cert, eigsA, eigsD, verdict


def schur_diagonal(eigsA, eigsD, schedule) -> np.ndarray:
    """Predicted diagonal of ``V* (D + K* A K) V``."""
    d = np.array(eigsD.values, dtype=float)
    for i, e in enumerate(schedule.epsilons):
        if i < min(eigsA.dim, eigsD.dim):
            d[i] = e * eigsA.values[i] + eigsD.values[i]
    return d


def eigensystems_from_certificate(cert: CompletionCertificate):
    """Recompute the eigensystems of the diagonal blocks stored in ``cert.S``."""
    return (eigendecompose_hermitian(cert.A, NONINCREASING),
            eigendecompose_hermitian(cert.D, NONDECREASING))


__all__ = [
    "DEFINITE", "SEMIDEFINITE", "EpsilonSchedule", "CompletionCertificate",
    "collision_threshold", "default_epsilons", "with_overrides", "build_K", "complete",
    "schur_diagonal", "certificate_checks", "eigensystems_from_certificate",
]
