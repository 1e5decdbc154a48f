"""Sylvester equation ``X A0 - A1 X = Y`` with Hermitian coefficients."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .core import GENERIC, Disposition, classify_disposition, hermitian_defect
from .errors import (
    DimensionMismatch,
    IllConditioned,
    NonpositiveSeparation,
    NotHermitian,
    SetsIntersect,
    SpectraOverlap,
)


@dataclass(frozen=True, eq=False)
class SylvesterResult:
    x: np.ndarray
    residual: float
    d: float
    applicable_constant: float
    disposition: Disposition
    norm_x: float
    norm_y: float

    @property
    def bound(self) -> float:
        return self.applicable_constant * self.norm_y / self.d


def sylvester_bound_rhs(norm_y: float, d: float,
                        disposition: Union[Disposition, str]) -> float:
    """Norm bound on ``X``: ``(pi/2)||Y||/d`` in general, ``||Y||/d`` with a gap."""
    if not d > 0:
        raise NonpositiveSeparation(f"separation must be positive, got {d}")
    kind = disposition.kind if isinstance(disposition, Disposition) else disposition
    const = math.pi / 2 if kind == GENERIC else 1.0
    return const * norm_y / d


def solve_sylvester(a0, a1, y, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> SylvesterResult:
    """Solve ``X A0 - A1 X = Y`` through eigendecompositions of ``A0`` and ``A1``.

    In the eigenbases the equation decouples entrywise:
    ``Xt[i, j] = Yt[i, j] / (lam0[j] - lam1[i])``.

    Raises
    ------
    SpectraOverlap
        If the computed spectra of ``a0`` and ``a1`` share a point exactly.
    IllConditioned
        If the smallest separation is below ``tol.ill_conditioned`` relative
        to the coefficient norms.
    """
    a0 = np.atleast_2d(np.asarray(a0, dtype=complex))
    a1 = np.atleast_2d(np.asarray(a1, dtype=complex))
    y = np.atleast_2d(np.asarray(y, dtype=complex))
    n0, n1 = a0.shape[0], a1.shape[0]
    if y.shape != (n1, n0):
        raise DimensionMismatch(f"y must be {n1}x{n0}, got {y.shape}")
    for name, m in (("a0", a0), ("a1", a1)):
        if hermitian_defect(m) > tol.hermitian:
            raise NotHermitian(f"{name} must be Hermitian")

    lam0, u0 = np.linalg.eigh(0.5 * (a0 + a0.conj().T))
    lam1, u1 = np.linalg.eigh(0.5 * (a1 + a1.conj().T))
    try:
        # exact coincidence only; near-coincidence is reported as IllConditioned
        disp = classify_disposition(lam0, lam1, tol.replace(same_point=0.0))
    except SetsIntersect as exc:
        raise SpectraOverlap(str(exc)) from exc
    scale = max(1.0, np.abs(lam0).max(), np.abs(lam1).max())
    if disp.d < tol.ill_conditioned * scale:
        raise IllConditioned(f"spectral separation {disp.d:.3e} too small")

    yt = u1.conj().T @ y @ u0
    xt = yt / (lam0[None, :] - lam1[:, None])
    x = u1 @ xt @ u0.conj().T
    residual = float(np.linalg.norm(x @ a0 - a1 @ x - y))
    const = math.pi / 2 if disp.kind == GENERIC else 1.0
    return SylvesterResult(
        x=x,
        residual=residual,
        d=disp.d,
        applicable_constant=const,
        disposition=disp,
        norm_x=float(np.linalg.norm(x, 2)),
        norm_y=float(np.linalg.norm(y, 2)),
    )
