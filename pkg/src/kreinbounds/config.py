"""Numerical tolerances shared across modules."""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances used when a function is not given explicit ones.

    Attributes
    ----------
    same_point
        Two real numbers ``x, y`` are the same point when
        ``|x - y| <= same_point * (1 + max(|x|, |y|))``.
    hermitian
        Relative defect ``||M - M*|| / max(1, ||M||)`` tolerated for a
        block that must be Hermitian.
    real_part
        An eigenvalue is real when ``|Im z| <= real_part * (1 + |z|)``.
    slack
        A bound holds when ``rhs - lhs >= -slack``.
    ill_conditioned
        Smallest admissible relative eigenvalue separation in Sylvester
        solves.
    graph_condition
        Largest admissible condition number of the top block of an
        invariant-subspace basis.
    contraction_margin
        A solution is contractive when ``||K|| < 1 - contraction_margin``.
    sqrt_floor
        Eigenvalue floor used by Hermitian square roots.
    riccati_residual
        A computed ``K`` is accepted when its Riccati residual is at most
        ``riccati_residual * (1 + ||L||) * (1 + ||K||)^2``.
    eigen_cluster
        Eigenvalues of ``L`` closer than ``eigen_cluster * (1 + max |z|)``
        are treated as one cluster when sorting by Krein type. Defective
        eigenvalues split by about the square root of machine epsilon,
        hence the loose default.
    """

    same_point: float = 1e-12
    hermitian: float = 1e-10
    real_part: float = 1e-9
    slack: float = 1e-8
    ill_conditioned: float = 1e-12
    graph_condition: float = 1e8
    contraction_margin: float = 1e-12
    sqrt_floor: float = 1e-14
    riccati_residual: float = 1e-9
    eigen_cluster: float = 1e-6

    def replace(self, **changes) -> "ToleranceConfig":
        return dataclasses.replace(self, **changes)


DEFAULT_TOLERANCES = ToleranceConfig()
