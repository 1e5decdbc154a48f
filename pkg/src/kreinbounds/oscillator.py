"""Harmonic oscillator with an imaginary odd potential ``i*beta*b(x)``.

The unperturbed Hamiltonian has eigenvalues ``n + 1/2`` with Hermite
function eigenvectors. Truncated to ``M`` modes and sorted by parity
(even modes span ``H0``, odd modes ``H1``), the perturbation is
off-diagonal and the model is a ``j_self_adjoint`` block instance with
``d = 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.special import comb, roots_hermite

from . import _kernels
from .angles import angle_report
from .bounds import tan_half_arcsin
from .core import BlockInstance, build_instance
from .enclosures import enclosure_radius
from .errors import KreinBoundsError, ProfileNotOdd, QuadratureUnconverged
from .riccati import solve_riccati_contractive

PROFILES = {"sin": np.sin}


def multiplicity(n: int, dim_n: int) -> int:
    """Multiplicity ``binom(N + n - 1, n)`` of the level ``n + N/2`` in ``N`` dimensions."""
    if n < 0 or dim_n < 1:
        raise ValueError("need n >= 0 and dim_n >= 1")
    return int(comb(dim_n + n - 1, n, exact=True))


def hermite_functions(nodes, m_max: int) -> np.ndarray:
    """Normalized Hermite functions ``psi_0 .. psi_{m_max-1}`` at ``nodes``.

    Returns shape ``(len(nodes), m_max)``; column ``n`` is ``psi_n``.
    """
    return _kernels.hermite_psi(nodes, m_max)


def quadrature_basis(m: int, n_nodes: int):
    """Nodes ``x_k`` and ``Phi[k, j] = psi_j(x_k) sqrt(W_k)``.

    With these, ``sum_k Phi[k, i] f(x_k) Phi[k, j]`` approximates
    ``int psi_i f psi_j dx``.
    """
    x, _ = roots_hermite(n_nodes)
    return x, _kernels.hermite_weighted(x, m, n_nodes)


def _profile_fn(profile) -> Callable:
    if callable(profile):
        return profile
    try:
        return PROFILES[profile]
    except KeyError:
        raise ValueError(f"unknown profile {profile!r}") from None


def coupling_matrix(m: int, profile: Union[str, Callable] = "sin",
                    n_nodes: Optional[int] = None) -> np.ndarray:
    """Real symmetric ``G[i, j] = int psi_i(x) b(x) psi_j(x) dx`` (single rule).

    Raises
    ------
    ProfileNotOdd
        If ``b(x) + b(-x)`` exceeds ``1e-10`` at some node.
    """
    fn = _profile_fn(profile)
    n_nodes = n_nodes or 4 * m + 50
    x, phi = quadrature_basis(m, n_nodes)
    bx = np.asarray(fn(x), dtype=float)
    if np.abs(bx + np.asarray(fn(-x), dtype=float)).max() > 1e-10:
        raise ProfileNotOdd("profile is not odd")
    if np.abs(bx).max() > 1.0 + 1e-12:
        raise ValueError("profile must be bounded by 1 in absolute value")
    g = phi.T @ (bx[:, None] * phi)
    return 0.5 * (g + g.T)


@dataclass(frozen=True, eq=False)
class OscillatorModel:
    """Truncated model; ``coupling`` is ``G`` in the natural mode order."""

    truncation_m: int
    beta: float
    profile: str
    quad_nodes: int
    coupling: np.ndarray
    instance: BlockInstance
    norm_v_trunc: float

    @property
    def even_modes(self) -> np.ndarray:
        return np.arange(0, self.truncation_m, 2)

    @property
    def odd_modes(self) -> np.ndarray:
        return np.arange(1, self.truncation_m, 2)


def build_oscillator(truncation_m: int, beta: float, profile: Union[str, Callable] = "sin",
                     quad_nodes: Optional[int] = None,
                     convergence_tol: float = 1e-9) -> OscillatorModel:
    """Assemble the parity-sorted block instance.

    ``B = i beta G[even, odd]`` and ``C = -B*``. Quadrature accuracy is
    certified by repeating the computation with twice the nodes.

    Raises
    ------
    ProfileNotOdd
        If the profile is not odd on the nodes.
    QuadratureUnconverged
        If doubling the node count moves an entry by more than
        ``convergence_tol``.
    """
    m = int(truncation_m)
    if m < 2:
        raise ValueError("need at least two modes")
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    q = int(quad_nodes or 4 * m + 50)
    g = coupling_matrix(m, profile, q)
    g2 = coupling_matrix(m, profile, 2 * q)
    change = np.abs(g - g2).max()
    if change > convergence_tol:
        raise QuadratureUnconverged(f"entries moved by {change:.2e} when doubling nodes")
    ev, od = np.arange(0, m, 2), np.arange(1, m, 2)
    a0 = np.diag(ev + 0.5)
    a1 = np.diag(od + 0.5)
    b = 1j * beta * g[np.ix_(ev, od)]
    inst = build_instance(a0, a1, b)
    name = profile if isinstance(profile, str) else getattr(profile, "__name__", "custom")
    return OscillatorModel(m, float(beta), name, q, g, inst, inst.norm_v)


@dataclass(frozen=True)
class OscillatorReport:
    """Checks on the interior levels ``n <= M/2``.

    ``regime`` says which checks are asserted: ``"angle"`` for
    ``beta < 1/pi`` (all checks), ``"reality"`` for ``1/pi <= beta < 1/2``
    (reality and enclosure), ``"observation"`` otherwise (nothing asserted).
    """

    eigs: list
    max_imag: float
    real_ok: bool
    enclosure_ok: bool
    r_v_used: float
    max_displacement: float
    norm_tan: Optional[float]
    angle_bound_rhs: Optional[float]
    angle_ok: Optional[bool]
    regime: str
    passed: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def _regime(beta):
    if beta < 1 / math.pi:
        return "angle"
    if beta < 0.5:
        return "reality"
    return "observation"


def interior_eigenvalues(model: OscillatorModel, eigs=None) -> np.ndarray:
    """Eigenvalues of ``L`` nearest to the levels ``n + 1/2`` with ``n <= M/2``."""
    if eigs is None:
        eigs = np.linalg.eigvals(model.instance.matrix)
    eigs = np.sort_complex(eigs)
    level = np.rint(eigs.real - 0.5)
    return eigs[level <= model.truncation_m // 2]


def oscillator_report(model: OscillatorModel, real_tol: float = 1e-9,
                      enclosure_tol: float = 1e-9, slack: float = 1e-8) -> OscillatorReport:
    """Reality, enclosure and angle checks for a truncated model."""
    inst = model.instance
    nv = model.norm_v_trunc
    eigs = np.sort_complex(np.linalg.eigvals(inst.matrix))
    interior = interior_eigenvalues(model, eigs)
    max_imag = float(np.abs(eigs.imag).max())
    real_ok = max_imag <= real_tol

    levels = np.rint(interior.real - 0.5) + 0.5
    displacement = float(np.abs(interior - levels).max())
    counts = np.unique(levels, return_counts=True)[1]
    if nv < 0.5:
        r_v = enclosure_radius(nv, nv, 1.0)
        enclosure_ok = bool(displacement <= r_v + enclosure_tol and np.all(counts == 1))
    else:
        r_v, enclosure_ok = math.nan, False

    norm_tan = rhs = angle_ok = None
    if nv < 0.5:
        rhs = math.pi / 2 * tan_half_arcsin(2 * nv)
        try:
            sol = solve_riccati_contractive(inst)
            norm_tan = angle_report(inst, sol).norm_tan
            angle_ok = norm_tan <= rhs + slack
        except KreinBoundsError:
            angle_ok = False

    regime = _regime(model.beta)
    if regime == "angle":
        passed = real_ok and enclosure_ok and bool(angle_ok)
    elif regime == "reality":
        passed = real_ok and enclosure_ok
    else:
        passed = True
    return OscillatorReport(
        eigs=[[float(z.real), float(z.imag)] for z in eigs],
        max_imag=max_imag,
        real_ok=real_ok,
        enclosure_ok=enclosure_ok,
        r_v_used=r_v,
        max_displacement=displacement,
        norm_tan=norm_tan,
        angle_bound_rhs=rhs,
        angle_ok=angle_ok,
        regime=regime,
        passed=passed,
    )


__all__ = [
    "OscillatorModel", "OscillatorReport", "build_oscillator", "coupling_matrix",
    "hermite_functions", "interior_eigenvalues", "multiplicity", "oscillator_report",
    "quadrature_basis",
]
