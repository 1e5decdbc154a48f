"""Contractive solutions of ``K A0 - A1 K + K B K = -B*`` and block diagonalization.

The solution ``K`` (``n1 x n0``) is read off the L-invariant, uniformly
positive subspace ``G(K) = {(x, Kx)}``. With ``K`` in hand,

``T = [[I, K*], [K, I]] @ diag((I - K*K)^(-1/2), (I - KK*)^(-1/2))``

brings ``L`` to the block-diagonal form ``diag(Lambda0, Lambda1)`` whose
blocks are Hermitian.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg as sla

from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .core import (
    J_SELF_ADJOINT,
    BlockInstance,
    Subspace,
    definiteness_margin,
    set_distance,
)
from .errors import (
    HypothesesNotMet,
    NoDefiniteInvariantSubspace,
    NonRealSpectrum,
    NotAGraph,
    NotContractive,
)

AUTO = "auto"
ENCLOSURE = "enclosure"
KREIN_SIGN = "krein_sign"
EXHAUSTIVE = "exhaustive"
METHODS = (AUTO, ENCLOSURE, KREIN_SIGN, EXHAUSTIVE)
EXHAUSTIVE_MAX_DIM = 12


@dataclass(frozen=True, eq=False)
class RiccatiSolution:
    """Contractive angular operator and the diagonalization it induces.

    ``sigma0_prime`` and ``sigma1_prime`` are the sorted spectra of
    ``lambda0`` and ``lambda1``, i.e. the two parts of the spectrum of ``L``.
    """

    k: np.ndarray
    norm_k: float
    residual: float
    z0: np.ndarray
    z1: np.ndarray
    t: np.ndarray
    lambda0: np.ndarray
    lambda1: np.ndarray
    sigma0_prime: np.ndarray
    sigma1_prime: np.ndarray
    method: str

    @property
    def lam(self) -> np.ndarray:
        """``diag(Lambda0, Lambda1)``."""
        return sla.block_diag(self.lambda0, self.lambda1)

    def diagonalization_defect(self, inst: BlockInstance) -> float:
        """``||L - T Lambda T^-1||_F``."""
        recon = self.t @ self.lam @ np.linalg.inv(self.t)
        return float(np.linalg.norm(inst.matrix - recon))


# -- residuals --------------------------------------------------------------

def riccati_residual(k, inst: BlockInstance) -> float:
    """Frobenius norm of ``K A0 - A1 K + K B K + B*``."""
    k = np.atleast_2d(np.asarray(k, dtype=complex))
    r = k @ inst.a0 - inst.a1 @ k + k @ inst.b @ k + inst.b.conj().T
    return float(np.linalg.norm(r))


def dual_solution(k) -> np.ndarray:
    """``K' = K*``, which solves ``K' A1 - A0 K' - K' B* K' = B``."""
    return np.atleast_2d(np.asarray(k, dtype=complex)).conj().T


def dual_residual(k_dual, inst: BlockInstance) -> float:
    """Frobenius norm of ``K' A1 - A0 K' - K' B* K' - B``."""
    kd = np.atleast_2d(np.asarray(k_dual, dtype=complex))
    bs = inst.b.conj().T
    r = kd @ inst.a1 - inst.a0 @ kd - kd @ bs @ kd - inst.b
    return float(np.linalg.norm(r))


def transformed_riccati_residual(sol: RiccatiSolution, inst: BlockInstance) -> float:
    """Frobenius norm of ``K Lambda0 - Lambda1 K + (I-KK*)^(1/2) B* (I-K*K)^(1/2)``."""
    k = sol.k
    s0 = psd_sqrt(np.eye(inst.n0) - k.conj().T @ k)
    s1 = psd_sqrt(np.eye(inst.n1) - k @ k.conj().T)
    r = k @ sol.lambda0 - sol.lambda1 @ k + s1 @ inst.b.conj().T @ s0
    return float(np.linalg.norm(r))


# -- matrix functions -------------------------------------------------------

def psd_sqrt(h, floor: float = DEFAULT_TOLERANCES.sqrt_floor, inverse: bool = False):
    """Hermitian square root (or its inverse) of a positive semidefinite matrix."""
    w, u = np.linalg.eigh(0.5 * (h + h.conj().T))
    w = np.maximum(w, floor)
    s = np.sqrt(w)
    if inverse:
        s = 1.0 / s
    return (u * s) @ u.conj().T


def sqrt_one_minus(m) -> np.ndarray:
    """Principal ``(I - m)^(1/2)`` for a general square matrix."""
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    return sla.sqrtm(np.eye(m.shape[0]) - m)


def commutation_defect(m, n, phi: Optional[Callable] = None) -> float:
    """Spectral norm of ``M phi(NM) - phi(MN) M``.

    ``phi`` maps a square matrix to a matrix; the default is
    ``z -> (1 - z)^(1/2)``.
    """
    phi = phi or sqrt_one_minus
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    n = np.atleast_2d(np.asarray(n, dtype=complex))
    return float(np.linalg.norm(m @ phi(n @ m) - phi(m @ n) @ m, 2))


# -- invariant subspace selection ------------------------------------------

def _check_real(eigs, tol: ToleranceConfig):
    bad = np.abs(eigs.imag) > tol.real_part * (1.0 + np.abs(eigs))
    if np.any(bad):
        worst = eigs[bad][np.argmax(np.abs(eigs[bad].imag))]
        raise NonRealSpectrum(f"L has a non-real eigenvalue {worst:.6g}")


def _schur_subspace(lmat, select: Callable[[complex], bool]):
    t, z, sdim = sla.schur(lmat, output="complex", sort=select)
    return z[:, :sdim]


def _nearest_partition(targets0, targets1) -> Callable[[complex], bool]:
    t0 = np.asarray(targets0, dtype=float)
    t1 = np.asarray(targets1, dtype=float)

    def select(lam):
        return np.abs(t0 - lam).min() < np.abs(t1 - lam).min()

    return select


def _clusters(values, atol):
    """Group sorted real values into runs with gaps larger than ``atol``."""
    order = np.sort(values)
    groups = [[order[0]]]
    for v in order[1:]:
        if v - groups[-1][-1] <= atol:
            groups[-1].append(v)
        else:
            groups.append([v])
    return [(g[0], g[-1]) for g in groups]


def _krein_sign_subspace(inst: BlockInstance, eigs, tol: ToleranceConfig):
    """Uniformly positive invariant subspace assembled cluster by cluster.

    Each cluster of (numerically) equal eigenvalues contributes the
    positive eigenvectors of the Krein Gram matrix on its spectral
    subspace; a singular Gram matrix signals a neutral vector.
    """
    lmat = inst.matrix
    scale = 1.0 + np.abs(eigs).max()
    atol = tol.eigen_cluster * scale
    sig_diag = inst.sig.diagonal
    pieces = []
    for lo, hi in _clusters(eigs.real, atol):
        mid_lo, mid_hi = lo - atol / 2, hi + atol / 2
        e = _schur_subspace(lmat, lambda z, a=mid_lo, b=mid_hi: a <= z.real <= b)
        gram = e.conj().T @ (sig_diag[:, None] * e)
        w, u = np.linalg.eigh(0.5 * (gram + gram.conj().T))
        if np.any(np.abs(w) <= 1e-10):
            raise NoDefiniteInvariantSubspace(
                f"neutral vector in the spectral subspace near {lo:.6g}")
        pieces.append(e @ u[:, w > 0])
    basis = np.hstack(pieces) if pieces else np.zeros((inst.sig.dim, 0))
    if basis.shape[1] != inst.n0:
        raise NoDefiniteInvariantSubspace(
            f"positive part has dimension {basis.shape[1]}, expected {inst.n0}")
    return basis


def _exhaustive_subspace(inst: BlockInstance, tol: ToleranceConfig):
    """Try every choice of ``n0`` eigenvectors; keep a uniformly positive span."""
    n = inst.sig.dim
    if n > EXHAUSTIVE_MAX_DIM:
        raise NoDefiniteInvariantSubspace(
            f"exhaustive grouping limited to dimension {EXHAUSTIVE_MAX_DIM}")
    lmat = inst.matrix
    _, vecs = np.linalg.eig(lmat)
    best, best_margin = None, 0.0
    for idx in itertools.combinations(range(n), inst.n0):
        cols = vecs[:, idx]
        sv = np.linalg.svd(cols, compute_uv=False)
        if sv[-1] < 1e-8 * sv[0]:
            continue
        q, _ = np.linalg.qr(cols)
        margin = definiteness_margin(Subspace(q, ortho_tol=1e-10), inst.sig)
        if margin > best_margin:
            best, best_margin = q, margin
    if best is None:
        raise NoDefiniteInvariantSubspace("no choice of eigenvectors spans a positive subspace")
    return best


def _enclosure_selector(inst: BlockInstance, eigs):
    """Nearest-component selector, if it splits the spectrum as ``n0 + n1``."""
    s0, s1 = inst.sigma0(), inst.sigma1()
    d = set_distance(s0, s1)
    if not (d > 0 and inst.norm_v < d / 2):
        return None
    select = _nearest_partition(s0, s1)
    if sum(bool(select(z.real)) for z in eigs) != inst.n0:
        return None
    return select


# -- main solver ------------------------------------------------------------

def _from_basis(inst: BlockInstance, basis, method: str, tol: ToleranceConfig):
    n0 = inst.n0
    q, _ = np.linalg.qr(basis)
    x0, x1 = q[:n0], q[n0:]
    if np.linalg.cond(x0) >= tol.graph_condition:
        raise NotAGraph("invariant subspace is not a graph over H0")
    k = np.linalg.solve(x0.T, x1.T).T
    sol = _assemble(inst, k, method, tol)
    limit = tol.riccati_residual * (1.0 + np.linalg.norm(inst.matrix, 2)) * (1.0 + sol.norm_k) ** 2
    if sol.residual > limit:
        raise NoDefiniteInvariantSubspace(
            f"selected subspace is not invariant (Riccati residual {sol.residual:.3e})")
    return sol


def _assemble(inst: BlockInstance, k, method: str, tol: ToleranceConfig) -> RiccatiSolution:
    n0, n1 = inst.n0, inst.n1
    norm_k = float(np.linalg.norm(k, 2))
    if norm_k >= 1.0 - tol.contraction_margin:
        raise NotContractive(f"||K|| = {norm_k:.6g} is not a strict contraction")
    kh = k.conj().T
    z0 = inst.a0 + inst.b @ k
    z1 = inst.a1 - inst.b.conj().T @ kh
    g0 = np.eye(n0) - kh @ k
    g1 = np.eye(n1) - k @ kh
    s0, s0i = psd_sqrt(g0, tol.sqrt_floor), psd_sqrt(g0, tol.sqrt_floor, inverse=True)
    s1, s1i = psd_sqrt(g1, tol.sqrt_floor), psd_sqrt(g1, tol.sqrt_floor, inverse=True)
    t = np.block([[np.eye(n0), kh], [k, np.eye(n1)]]) @ sla.block_diag(s0i, s1i)
    lam0 = s0 @ z0 @ s0i
    lam1 = s1 @ z1 @ s1i
    return RiccatiSolution(
        k=k,
        norm_k=norm_k,
        residual=riccati_residual(k, inst),
        z0=z0,
        z1=z1,
        t=t,
        lambda0=lam0,
        lambda1=lam1,
        sigma0_prime=np.linalg.eigvalsh(0.5 * (lam0 + lam0.conj().T)),
        sigma1_prime=np.linalg.eigvalsh(0.5 * (lam1 + lam1.conj().T)),
        method=method,
    )


def solve_riccati_contractive(inst: BlockInstance, method: str = AUTO,
                              partition: Optional[Sequence] = None,
                              tol: ToleranceConfig = DEFAULT_TOLERANCES) -> RiccatiSolution:
    """Uniformly contractive solution ``K`` via the invariant-subspace route.

    Parameters
    ----------
    inst
        A ``j_self_adjoint`` instance.
    method
        ``"enclosure"`` groups eigenvalues of ``L`` by the nearest
        unperturbed component (needs ``||V|| < d/2``); ``"krein_sign"``
        keeps the positive-type part of every spectral subspace;
        ``"exhaustive"`` tries all eigenvector subsets (small sizes only);
        ``"auto"`` tries the enclosure grouping first, then Krein signs.
    partition
        Optional pair ``(sigma0', sigma1')``; eigenvalues are then grouped
        by the nearest of these two sets.

    Raises
    ------
    NonRealSpectrum, NoDefiniteInvariantSubspace, NotAGraph, NotContractive
    """
    if inst.mode != J_SELF_ADJOINT:
        raise HypothesesNotMet("the Riccati route needs a j_self_adjoint instance")
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}")
    eigs = np.linalg.eigvals(inst.matrix)
    _check_real(eigs, tol)

    if partition is not None:
        select = _nearest_partition(*partition)
        basis = _schur_subspace(inst.matrix, lambda z: select(z.real))
        return _from_basis(inst, basis, "partition", tol)

    if method in (AUTO, ENCLOSURE):
        select = _enclosure_selector(inst, eigs)
        if select is not None:
            basis = _schur_subspace(inst.matrix, lambda z: select(z.real))
            return _from_basis(inst, basis, ENCLOSURE, tol)
        if method == ENCLOSURE:
            raise NoDefiniteInvariantSubspace("enclosure grouping is not applicable")
    if method == EXHAUSTIVE:
        return _from_basis(inst, _exhaustive_subspace(inst, tol), EXHAUSTIVE, tol)
    return _from_basis(inst, _krein_sign_subspace(inst, eigs, tol), KREIN_SIGN, tol)


def solve_riccati_newton(inst: BlockInstance, k0=None, max_iter: int = 100,
                         rtol: float = 1e-13,
                         tol: ToleranceConfig = DEFAULT_TOLERANCES) -> RiccatiSolution:
    """Damped Newton iteration on the Riccati equation, started at ``K = 0``.

    Each step solves ``H Z0 - (A1 - K B) H = -F(K)`` and halves the step
    until the residual decreases. Intended for cross-validation.
    """
    n0, n1 = inst.n0, inst.n1
    k = np.zeros((n1, n0), dtype=complex) if k0 is None else np.array(k0, dtype=complex)
    bs = inst.b.conj().T

    def f(kk):
        return kk @ inst.a0 - inst.a1 @ kk + kk @ inst.b @ kk + bs

    scale = 1.0 + np.linalg.norm(inst.matrix)
    res = f(k)
    for _ in range(max_iter):
        r0 = np.linalg.norm(res)
        if r0 <= rtol * scale:
            break
        h = sla.solve_sylvester(-(inst.a1 - k @ inst.b), inst.a0 + inst.b @ k, -res)
        step = 1.0
        while step > 1e-4:
            cand = k + step * h
            rc = f(cand)
            if np.linalg.norm(rc) < r0:
                k, res = cand, rc
                break
            step /= 2
        else:
            break
    return _assemble(inst, k, "newton", tol)


__all__ = [
    "RiccatiSolution", "commutation_defect", "dual_residual", "dual_solution",
    "psd_sqrt", "riccati_residual", "solve_riccati_contractive",
    "solve_riccati_newton", "sqrt_one_minus", "transformed_riccati_residual",
]
