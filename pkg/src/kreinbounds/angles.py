"""Operator angles between reducing subspaces and their trigonometric norms."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import BlockInstance, Subspace, coordinate_subspace, graph_subspace
from .errors import DimensionMismatch
from .riccati import RiccatiSolution


def operator_angle(sub_unperturbed: Subspace, sub_perturbed: Subspace) -> np.ndarray:
    """Principal angles ``arcsin(sqrt(eig(I - X* P' X)))``, sorted ascending.

    ``X`` is the basis of the unperturbed subspace and ``P'`` the
    orthogonal projector onto the perturbed one. The output has one entry
    per unperturbed basis vector, so directions missing from a smaller
    perturbed subspace show up as angles of ``pi/2``.

    Notes
    -----
    The square roots of ``eig(I - X* P' X)`` are the singular values of
    ``(I - P') X``. Small angles are taken from those sines and large ones
    from the cosines ``svd(Q* X)``, which keeps both ends accurate.
    """
    if sub_unperturbed.ambient != sub_perturbed.ambient:
        raise DimensionMismatch("subspaces live in different ambient spaces")
    x = sub_unperturbed.basis
    q = sub_perturbed.basis
    p = x.shape[1]
    if p == 0:
        return np.zeros(0)
    proj = q.conj().T @ x
    sines = np.sort(np.linalg.svd(x - q @ proj, compute_uv=False))
    cos = np.zeros(p)
    cs = np.linalg.svd(proj, compute_uv=False) if q.shape[1] else np.zeros(0)
    cos[:min(p, cs.size)] = cs[:p]
    cos = np.sort(cos)[::-1]
    theta = np.where(sines < math.sqrt(0.5),
                     np.arcsin(np.clip(sines, 0.0, 1.0)),
                     np.arccos(np.clip(cos, 0.0, 1.0)))
    return np.sort(np.clip(theta, 0.0, math.pi / 2))


def angle_from_angular_operator(k) -> np.ndarray:
    """``arctan`` of the singular values of ``K`` (padded with zeros), sorted.

    For ``K`` of shape ``(m, n)`` the result has ``n`` entries, one per
    direction of the domain.
    """
    k = np.atleast_2d(np.asarray(k, dtype=complex))
    sv = np.linalg.svd(k, compute_uv=False)
    full = np.zeros(k.shape[1])
    full[:sv.size] = sv[:k.shape[1]]
    return np.sort(np.arctan(full))


def angle_norms(angles):
    """``(||tan Theta||, ||sin 2 Theta||, ||tan 2 Theta||)`` for an angle vector.

    ``||tan 2 Theta||`` is infinite once the largest angle reaches ``pi/4``.
    """
    th = np.asarray(angles, dtype=float).ravel()
    if th.size == 0:
        return 0.0, 0.0, 0.0
    top = float(th.max())
    norm_tan = math.tan(top) if top < math.pi / 2 else math.inf
    norm_sin2 = float(np.sin(2 * th).max())
    norm_tan2 = math.tan(2 * top) if top < math.pi / 4 else math.inf
    return norm_tan, norm_sin2, norm_tan2


@dataclass(frozen=True, eq=False)
class AngleReport:
    theta0: np.ndarray
    theta1: np.ndarray
    norm_tan: float
    norm_sin2: float
    norm_tan2: float

    def to_dict(self) -> dict:
        return {
            "theta0": [float(v) for v in self.theta0],
            "theta1": [float(v) for v in self.theta1],
            "norm_tan": self.norm_tan,
            "norm_sin2": self.norm_sin2,
            "norm_tan2": self.norm_tan2,
        }


def angle_report(inst: BlockInstance, sol: RiccatiSolution) -> AngleReport:
    """Angles between ``H_i`` and the perturbed subspaces ``G(K)``, ``G(K*)``.

    Both angle vectors are computed from the projectors; the norms are
    taken from ``theta0``.
    """
    sig = inst.sig
    theta0 = operator_angle(coordinate_subspace(sig, 0), graph_subspace(sol.k, sig, over=0))
    theta1 = operator_angle(coordinate_subspace(sig, 1),
                            graph_subspace(sol.k.conj().T, sig, over=1))
    return AngleReport(theta0, theta1, *angle_norms(theta0))


__all__ = [
    "AngleReport", "angle_from_angular_operator", "angle_norms", "angle_report",
    "operator_angle",
]
