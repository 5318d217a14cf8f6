"""Positive (semi)definite Schur-complement completion for non-Hermitian block matrices."""

from .completion import (CompletionCertificate, EpsilonSchedule, build_K, collision_threshold,
                         complete, default_epsilons)
from .core import (HermitianEigenSystem, InertiaCounts, SingularProfile,
                   eigendecompose_hermitian, inertia, schur_complement, singular_values)
from .feasibility import DEFINITE, SEMIDEFINITE, FeasibilityVerdict, check_feasible
from .spectral import SpectrumPrediction, predict_spectrum, root_locus

__version__ = "0.1.0"

__all__ = [
    "CompletionCertificate", "EpsilonSchedule", "FeasibilityVerdict", "HermitianEigenSystem",
    "InertiaCounts", "SingularProfile", "SpectrumPrediction", "DEFINITE", "SEMIDEFINITE",
    "build_K", "check_feasible", "collision_threshold", "complete", "default_epsilons",
    "eigendecompose_hermitian", "inertia", "predict_spectrum", "root_locus",
    "schur_complement", "singular_values",
]
