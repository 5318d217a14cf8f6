"""
Closed-form spectrum of ``S = [[A, -A K], [K* A, D]]`` for ``K = U E V*``.

In the basis ``W = diag(U, V)`` the matrix decouples into the inherited
eigenvalues of ``A`` and ``D`` plus one 2 x 2 block per coupled index ``i``::

    [[lambda_i,               -lambda_i sqrt(eps_i)],
     [lambda_i sqrt(eps_i),    mu_i               ]]

whose eigenvalues are ``eta_i+/- = (lambda_i + mu_i)/2 +/- lambda_i sqrt(alpha_i - eps_i)``
with ``alpha_i = (lambda_i - mu_i)**2 / (4 lambda_i**2)``.

Case labels for a coupled index:

  a  0 < eps < -mu/lambda          lambda > eta+ > 0 > eta- > mu
  b  -mu/lambda <= eps < alpha     real pair inside [min(l+m, 0), max(l+m, 0)]
  c  alpha < eps                   nonreal conjugate pair
  d  eps = alpha                   double eigenvalue with a Jordan chain of length 2
  e  eps = 0, mu = 0               eta+ = lambda, eta- = 0
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .completion import CompletionCertificate, collision_threshold
from .core import HermitianEigenSystem, spectral_norm
from .errors import (CertificateMismatch, GridOutOfRange, JordanDegenerate,
                     NonpositiveLambda, NotDegenerate)
from .feasibility import DEFINITE, SEMIDEFINITE

DEGENERACY_TOL = 1e-10

INHERITED_A = "inherited_A"
INHERITED_D = "inherited_D"
ETA_PLUS = "eta_plus"
ETA_MINUS = "eta_minus"


@dataclass(frozen=True)
class AlphaProfile:
    alphas: np.ndarray
    lower: np.ndarray  # -mu_i / lambda_i

    def lemma_bounds_hold(self, kappa: float, count: int, strict_upper: bool = False,
                          tol: float = 1e-12) -> bool:
        """``0 < -mu_i/lambda_i <= alpha_i <= ((kappa^2 + 1)/2)^2`` for ``i < count``."""
        cap = ((kappa ** 2 + 1) / 2) ** 2
        for i in range(count):
            lo, a = self.lower[i], self.alphas[i]
            if not (lo > 0 and lo <= a + tol * max(1.0, a)):
                return False
            if strict_upper and not a < cap:
                return False
            if not a <= cap * (1 + tol):
                return False
        return True


@dataclass(frozen=True)
class PredictedEigen:
    value: complex
    origin: str
    case_label: str
    index: int | None = None

    def to_dict(self) -> dict:
        return {
            "value": [float(np.real(self.value)), float(np.imag(self.value))],
            "origin": self.origin,
            "case": self.case_label,
            "index": None if self.index is None else self.index + 1,
        }


@dataclass(frozen=True)
class SpectrumPrediction:
    eigens: list
    diagonalizable: bool
    jordan_chains: list = field(default_factory=list)  # (eta, v1, v2)
    warnings: list = field(default_factory=list)

    @property
    def values(self) -> np.ndarray:
        return np.array([e.value for e in self.eigens], dtype=complex)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [e.to_dict() for e in self.eigens],
            "diagonalizable": self.diagonalizable,
            "jordan_eigenvalues": [[float(np.real(c[0])), float(np.imag(c[0]))]
                                   for c in self.jordan_chains],
            "warnings": list(self.warnings),
        }


def compute_alphas(eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem,
                   scope: int) -> AlphaProfile:
    lam, mu = eigsA.values, eigsD.values
    if scope > min(len(lam), len(mu)):
        raise ValueError(f"scope {scope} exceeds min(n, m)")
    alphas = np.zeros(scope)
    lower = np.zeros(scope)
    for i in range(scope):
        if not lam[i] > 0:
            raise NonpositiveLambda(f"lambda_{i + 1} = {lam[i]!r} is not positive")
        alphas[i] = collision_threshold(lam[i], mu[i])
        lower[i] = -mu[i] / lam[i]
    return AlphaProfile(alphas, lower)


def classify(lam: float, mu: float, eps: float, zero_tol: float = 1e-9,
             deg_tol: float = DEGENERACY_TOL) -> str:
    """Case label for one coupled index (see module docstring)."""
    if eps == 0:
        return "e" if abs(mu) <= zero_tol else "inherited"
    a = collision_threshold(lam, mu)
    if abs(eps - a) <= deg_tol * max(1.0, a):
        return "d"
    if eps > a:
        return "c"
    if eps < -mu / lam:
        return "a"
    return "b"


def eta_pair(lam: float, mu: float, eps: float, deg_tol: float = DEGENERACY_TOL):
    """
    ``(eta+, eta-)`` for one coupled index.

    For ``eps > alpha`` the square root is ``+i sqrt(eps - alpha)`` so ``eta+``
    lies in the upper half plane. Real pairs use the cancellation-free
    quadratic formula with product ``lambda (mu + eps lambda)``.
    """
    a = collision_threshold(lam, mu)
    half = 0.5 * (lam + mu)
    disc = a - eps
    if abs(disc) <= deg_tol * max(1.0, a):
        return complex(half), complex(half)
    if disc < 0:
        d = lam * np.sqrt(-disc)
        return complex(half, d), complex(half, -d)
    d = lam * np.sqrt(disc)
    prod = lam * (mu + eps * lam)
    if half >= 0:
        hi = half + d
        lo = prod / hi if hi != 0 else half - d
        return complex(hi), complex(lo)
    lo = half - d
    hi = prod / lo if lo != 0 else half + d
    return complex(hi), complex(lo)


def _scope(schedule) -> int:
    return schedule.r if schedule.mode == DEFINITE else schedule.r - schedule.p


def _check_certificate(cert, eigsA, eigsD, tol=1e-8):
    n, m = eigsA.dim, eigsD.dim
    if cert.E.shape != (n, m):
        raise CertificateMismatch(f"certificate is {cert.E.shape}, eigensystems are {(n, m)}")
    K = eigsA.vectors @ cert.E @ eigsD.vectors.conj().T
    if np.linalg.norm(K - cert.K) > tol * max(1.0, spectral_norm(cert.K)):
        raise CertificateMismatch("K is not U E V* for the given eigensystems")
    sched = cert.schedule
    for i, e in enumerate(sched.epsilons):
        if i < min(n, m) and abs(cert.E[i, i] - np.sqrt(e)) > tol:
            raise CertificateMismatch(f"E[{i}, {i}] does not match sqrt(eps_{i + 1})")


def predict_spectrum(cert: CompletionCertificate, eigsA: HermitianEigenSystem,
                     eigsD: HermitianEigenSystem, deg_tol: float = DEGENERACY_TOL,
                     with_chains: bool = True) -> SpectrumPrediction:
    """
    Predicted eigenvalue multiset of ``cert.S`` (size ``n + m``).

    The coupled range is ``i < r`` in definite mode and ``i < r - p`` in
    semidefinite mode; everything else is inherited from ``A`` or ``D``.
    """
    _check_certificate(cert, eigsA, eigsD)
    sched = cert.schedule
    lam, mu = eigsA.values, eigsD.values
    scope = _scope(sched)
    eigens = []
    chains = []
    warnings = []
    diagonalizable = True
    for i in range(scope):
        eps = float(sched.epsilons[i])
        label = classify(lam[i], mu[i], eps, sched.zero_tol, deg_tol)
        hi, lo = eta_pair(lam[i], mu[i], eps, deg_tol)
        if label == "d":
            diagonalizable = False
            if eps != collision_threshold(lam[i], mu[i]):
                warnings.append(f"eps_{i + 1} is within tolerance of alpha_{i + 1}; "
                                "treated as a Jordan block")
            if with_chains:
                v1, v2 = jordan_chain(cert, eigsA, eigsD, i, deg_tol)
                chains.append((hi, v1, v2))
        eigens.append(PredictedEigen(hi, ETA_PLUS, label, i))
        eigens.append(PredictedEigen(lo, ETA_MINUS, label, i))
    for i in range(scope, len(lam)):
        eigens.append(PredictedEigen(complex(lam[i]), INHERITED_A, "inherited", i))
    for j in range(scope, len(mu)):
        eigens.append(PredictedEigen(complex(mu[j]), INHERITED_D, "inherited", j))
    return SpectrumPrediction(eigens, diagonalizable, chains, warnings)


def _lift(eigsA, eigsD, i, top, bottom):
    """``W (top e_i, bottom e_i)`` with ``W = diag(U, V)``."""
    return np.concatenate([top * eigsA.vectors[:, i], bottom * eigsD.vectors[:, i]])


def eigenvectors(cert: CompletionCertificate, eigsA, eigsD, i: int,
                 deg_tol: float = DEGENERACY_TOL):
    """Unit eigenvectors ``(v+, v-)`` of ``S`` for ``eta_i+`` and ``eta_i-``."""
    sched = cert.schedule
    if not 0 <= i < _scope(sched):
        raise IndexError(f"index {i} is not a coupled index")
    lam, mu = float(eigsA.values[i]), float(eigsD.values[i])
    eps = float(sched.epsilons[i])
    if classify(lam, mu, eps, sched.zero_tol, deg_tol) == "d":
        raise JordanDegenerate(f"eps_{i + 1} equals alpha_{i + 1}; use jordan_chain")
    if eps == 0:
        return _lift(eigsA, eigsD, i, 1.0, 0.0), _lift(eigsA, eigsD, i, 0.0, 1.0)
    g = lam * np.sqrt(eps)
    out = []
    for eta in eta_pair(lam, mu, eps, deg_tol):
        x = g / (eta - mu)
        v = _lift(eigsA, eigsD, i, 1.0, x)
        out.append(v / np.linalg.norm(v))
    return tuple(out)


def inherited_eigenvector(cert: CompletionCertificate, eigsA, eigsD, j: int):
    """``W e_j`` for an uncoupled position ``j`` in ``0..n+m-1``."""
    n, m = eigsA.dim, eigsD.dim
    scope = _scope(cert.schedule)
    if not 0 <= j < n + m:
        raise IndexError(j)
    if j < scope or n <= j < n + scope:
        raise ValueError(f"position {j} belongs to a coupled 2x2 block")
    e = np.zeros(n + m, dtype=complex)
    e[j] = 1.0
    return np.concatenate([eigsA.vectors @ e[:n], eigsD.vectors @ e[n:]])


def eigenvector_basis(cert, eigsA, eigsD) -> np.ndarray:
    """Columns are eigenvectors of ``S``; raises if some index is degenerate."""
    n, m = eigsA.dim, eigsD.dim
    scope = _scope(cert.schedule)
    cols = []
    for i in range(scope):
        cols.extend(eigenvectors(cert, eigsA, eigsD, i))
    for j in list(range(scope, n)) + list(range(n + scope, n + m)):
        cols.append(inherited_eigenvector(cert, eigsA, eigsD, j))
    return np.column_stack(cols) if cols else np.zeros((0, 0), dtype=complex)


def jordan_chain(cert: CompletionCertificate, eigsA, eigsD, i: int,
                 deg_tol: float = DEGENERACY_TOL):
    """
    ``(v1, v2)`` with ``(S - eta I) v1 = v2`` and ``(S - eta I) v2 = 0`` where
    ``eta = (lambda_i + mu_i)/2``, for an index with ``eps_i = alpha_i``.
    """
    sched = cert.schedule
    if not 0 <= i < _scope(sched):
        raise IndexError(f"index {i} is not a coupled index")
    lam, mu = float(eigsA.values[i]), float(eigsD.values[i])
    eps = float(sched.epsilons[i])
    if classify(lam, mu, eps, sched.zero_tol, deg_tol) != "d":
        raise NotDegenerate(f"eps_{i + 1} = {eps!r} differs from alpha_{i + 1} = "
                            f"{collision_threshold(lam, mu)!r}")
    v1 = _lift(eigsA, eigsD, i, 1.0 + 2.0 / (lam - mu), 1.0)
    v2 = _lift(eigsA, eigsD, i, 1.0, 1.0)
    return v1, v2


@dataclass(frozen=True)
class LocusPoint:
    eps: float
    eta_plus: complex
    eta_minus: complex
    label: str


@dataclass(frozen=True)
class RootLocus:
    lam: float
    mu: float
    kappa: float
    mode: str
    points: list
    lower_boundary: float  # -mu / lambda
    alpha: float
    kappa_sq: float
    complex_reachable: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# lambda={self.lam!r} mu={self.mu!r} kappa={self.kappa!r} mode={self.mode}\n")
        buf.write(f"# boundary a|b: -mu/lambda={self.lower_boundary!r}\n")
        buf.write(f"# boundary b|c: alpha={self.alpha!r}\n")
        buf.write(f"# upper limit: kappa^2={self.kappa_sq!r}\n")
        buf.write(f"# complex_reachable={str(self.complex_reachable).lower()}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["eps", "re_eta_plus", "im_eta_plus", "re_eta_minus", "im_eta_minus", "label"])
        for p in self.points:
            w.writerow([repr(float(p.eps)), repr(float(p.eta_plus.real)),
                        repr(float(p.eta_plus.imag)), repr(float(p.eta_minus.real)),
                        repr(float(p.eta_minus.imag)), p.label])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "lambda": self.lam,
            "mu": self.mu,
            "kappa": self.kappa,
            "mode": self.mode,
            "markers": {"lower_boundary": self.lower_boundary, "alpha": self.alpha,
                        "kappa_sq": self.kappa_sq},
            "complex_reachable": self.complex_reachable,
            "points": [{"eps": p.eps,
                        "eta_plus": [p.eta_plus.real, p.eta_plus.imag],
                        "eta_minus": [p.eta_minus.real, p.eta_minus.imag],
                        "label": p.label} for p in self.points],
        }


def root_locus_scalar(lam: float, mu: float, grid, kappa: float = 1.0,
                      mode: str = DEFINITE, zero_tol: float = 1e-9) -> RootLocus:
    """
    Trajectory of ``eta+/-(eps)`` for a single ``(lambda, mu)`` pair.

    Valid grids lie in ``[0, kappa^2)`` (definite) or ``[0, kappa^2]``
    (semidefinite). Case c is reachable only when ``alpha < kappa^2``; for
    ``kappa != 1`` and ``kappa^2 < alpha`` every admissible eps gives a real pair.
    """
    if not lam > 0:
        raise NonpositiveLambda(f"lambda = {lam!r} is not positive")
    if mode not in (DEFINITE, SEMIDEFINITE):
        raise ValueError(f"unknown mode {mode!r}")
    kk = float(kappa) ** 2
    grid = sorted(float(e) for e in grid)
    for e in grid:
        bad = e < 0 or (e >= kk if mode == DEFINITE else e > kk) or not np.isfinite(e)
        if bad:
            raise GridOutOfRange(f"eps = {e!r} is outside the admissible range for "
                                 f"{mode} mode with kappa^2 = {kk!r}")
    pts = []
    for e in grid:
        hi, lo = eta_pair(lam, mu, e)
        pts.append(LocusPoint(e, hi, lo, classify(lam, mu, e, zero_tol)))
    a = collision_threshold(lam, mu)
    return RootLocus(float(lam), float(mu), float(kappa), mode, pts, -mu / lam, a, kk, a < kk)


def root_locus(eigsA: HermitianEigenSystem, eigsD: HermitianEigenSystem, i: int, grid,
               kappa: float = 1.0, mode: str = DEFINITE, zero_tol: float = 1e-9) -> RootLocus:
    """Root locus for index ``i`` (0-based) of a pair of eigensystems."""
    if not 0 <= i < min(eigsA.dim, eigsD.dim):
        raise IndexError(f"index {i} out of range")
    return root_locus_scalar(float(eigsA.values[i]), float(eigsD.values[i]), grid, kappa,
                             mode, zero_tol)


def parse_grid(spec: str):
    """``"start:stop:step"`` (stop exclusive, like ``numpy.arange``) or ``"e1,e2,..."``."""
    spec = spec.strip()
    if ":" in spec:
        parts = [float(x) for x in spec.split(":")]
        if len(parts) != 3 or parts[2] <= 0:
            raise ValueError(f"bad grid {spec!r}; expected start:stop:step with step > 0")
        start, stop, step = parts
        count = int(np.ceil((stop - start) / step - 1e-9))
        return [round(start + k * step, 12) for k in range(max(count, 0))]
    return [float(x) for x in spec.split(",") if x.strip()]
