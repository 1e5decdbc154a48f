"""Spectral enclosures for off-diagonal perturbations.

Contents: the enclosure radius ``r_V``, the Schur complement and its
Neumann-series resolvent test, the spectrum-free strip between two
blocks, and sampling of the numerical range and the quadratic numerical
range.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .bounds import fmt17
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .core import J_SELF_ADJOINT, BlockInstance
from .errors import (
    HypothesesNotMet,
    LambdaInSpectrumA1,
    LambdaInUnperturbedSpectrum,
    TooLargePerturbation,
)

QNR_CHUNK = 4096


# -- enclosure radius -------------------------------------------------------

def _geometric_mean(norm_b, norm_c, d):
    v = math.sqrt(float(norm_b) * float(norm_c))
    if not v < d / 2:
        raise TooLargePerturbation(f"sqrt(||B|| ||C||) = {v:.6g} is not below d/2 = {d / 2:.6g}")
    return v


def enclosure_radius(norm_b: float, norm_c: float, d: float) -> float:
    """``r_V = v tan(arcsin(2v/d) / 2)`` with ``v = sqrt(||B|| ||C||)``.

    Raises
    ------
    TooLargePerturbation
        Unless ``v < d/2``.
    """
    v = _geometric_mean(norm_b, norm_c, d)
    return v * math.tan(0.5 * math.asin(2 * v / d))


def enclosure_radius_algebraic(norm_b: float, norm_c: float, d: float) -> float:
    """The same radius as the smaller root ``d/2 - sqrt(d^2/4 - v^2)``.

    Computed as ``v^2 / (d/2 + sqrt(d^2/4 - v^2))`` to avoid cancellation.
    """
    v = _geometric_mean(norm_b, norm_c, d)
    return v * v / (d / 2 + math.sqrt(d * d / 4 - v * v))


# -- enclosure verification -------------------------------------------------

@dataclass(frozen=True, eq=False)
class EnclosureReport:
    """Eigenvalues of ``L`` against the ``r_V``-neighbourhoods of ``sigma_i``.

    ``groups[k]`` is the component (0 or 1) nearest to ``eigs[k]``;
    ``displacements[k]`` its distance to that component and
    ``margins[k] = r_v - displacements[k]``. ``inclusion_ok`` is the full
    conclusion: every eigenvalue real and within ``r_v`` of its component,
    with component sizes ``n0`` and ``n1``.
    """

    eigs: np.ndarray
    r_v: float
    groups: np.ndarray
    displacements: np.ndarray
    margins: np.ndarray
    all_real: bool
    within: bool
    inclusion_ok: bool
    hypotheses_met: bool

    def to_dict(self) -> dict:
        return {
            "eigs": [[float(z.real), float(z.imag)] for z in self.eigs],
            "r_v": self.r_v,
            "groups": [int(g) for g in self.groups],
            "margins": [float(m) for m in self.margins],
            "all_real": self.all_real,
            "within": self.within,
            "inclusion_ok": self.inclusion_ok,
            "hypotheses_met": self.hypotheses_met,
        }


def _block_spectrum(m):
    if np.allclose(m, m.conj().T, atol=DEFAULT_TOLERANCES.hermitian * max(1.0, np.abs(m).max())):
        return np.linalg.eigvalsh(0.5 * (m + m.conj().T)).astype(complex)
    return np.linalg.eigvals(m)


def verify_enclosure(inst: BlockInstance, strict: bool = True,
                     tol: ToleranceConfig = DEFAULT_TOLERANCES,
                     inclusion_tol: float = 1e-9) -> EnclosureReport:
    """Check that each eigenvalue of ``L`` is real and lies within ``r_V``
    of the unperturbed component it is nearest to.

    The hypotheses are Hermitian ``A0``, ``A1`` with disjoint spectra and
    ``sqrt(||B|| ||C||) < d/2``. With ``strict=False`` the report is still
    produced when they fail (``r_v`` is then ``nan``).

    Raises
    ------
    HypothesesNotMet
        In strict mode, when the hypotheses fail.
    """
    s0, s1 = _block_spectrum(inst.a0), _block_spectrum(inst.a1)
    d = float(np.abs(s0[:, None] - s1[None, :]).min())
    v = math.sqrt(inst.norm_b * inst.norm_c)
    met = inst.is_hermitian_diagonal and d > 0 and v < d / 2
    if not met and strict:
        raise HypothesesNotMet(
            f"need Hermitian diagonal blocks, d > 0 and sqrt(||B|| ||C||) < d/2 "
            f"(d = {d:.6g}, v = {v:.6g})")
    r_v = enclosure_radius(inst.norm_b, inst.norm_c, d) if met else math.nan

    eigs = np.linalg.eigvals(inst.matrix)
    eigs = eigs[np.lexsort((eigs.imag, eigs.real))]
    dist0 = np.abs(eigs[:, None] - s0[None, :]).min(axis=1)
    dist1 = np.abs(eigs[:, None] - s1[None, :]).min(axis=1)
    groups = (dist1 < dist0).astype(int)
    disp = np.where(groups == 0, dist0, dist1)
    margins = r_v - disp
    scale = 1.0 + np.abs(eigs).max()
    all_real = bool(np.all(np.abs(eigs.imag) <= tol.real_part * (1.0 + np.abs(eigs))))
    within = bool(met and np.all(margins >= -inclusion_tol * scale))
    sizes_ok = int(np.sum(groups == 0)) == inst.n0
    return EnclosureReport(
        eigs=eigs,
        r_v=r_v,
        groups=groups,
        displacements=disp,
        margins=margins,
        all_real=all_real,
        within=within,
        inclusion_ok=all_real and within and sizes_ok,
        hypotheses_met=met,
    )


# -- Schur complement and Neumann test --------------------------------------

def _near_spectrum(m, lam, tol):
    shifted = m - lam * np.eye(m.shape[0])
    smin = np.linalg.svd(shifted, compute_uv=False)[-1]
    return smin <= tol * (1.0 + np.linalg.norm(m, 2) + abs(lam))


def schur_complement(inst: BlockInstance, lam: complex,
                     tol: float = 1e-12) -> np.ndarray:
    """``S0(lam) = A0 - lam - B (A1 - lam)^-1 C``.

    Raises
    ------
    LambdaInSpectrumA1
        If ``A1 - lam`` is (numerically) singular.
    """
    if _near_spectrum(inst.a1, lam, tol):
        raise LambdaInSpectrumA1(f"{lam} is an eigenvalue of A1")
    r1 = np.linalg.solve(inst.a1 - lam * np.eye(inst.n1), inst.c)
    return inst.a0 - lam * np.eye(inst.n0) - inst.b @ r1


def neumann_norm(inst: BlockInstance, lam: complex, tol: float = 1e-12) -> float:
    """``||B (A1 - lam)^-1 C (A0 - lam)^-1||``."""
    if _near_spectrum(inst.a0, lam, tol) or _near_spectrum(inst.a1, lam, tol):
        raise LambdaInUnperturbedSpectrum(f"{lam} is an eigenvalue of A0 or A1")
    r0 = np.linalg.inv(inst.a0 - lam * np.eye(inst.n0))
    r1c = np.linalg.solve(inst.a1 - lam * np.eye(inst.n1), inst.c)
    return float(np.linalg.norm(inst.b @ r1c @ r0, 2))


def neumann_excludes(inst: BlockInstance, lam: complex, tol: float = 1e-12) -> bool:
    """True when the Neumann criterion certifies ``lam`` in the resolvent set of ``L``.

    Raises
    ------
    LambdaInUnperturbedSpectrum
        If ``lam`` is an eigenvalue of ``A0`` or ``A1``.
    """
    return neumann_norm(inst, lam, tol) < 1.0


# -- strip resolvent check -------------------------------------------------

def _hermitian_part_extremes(m):
    w = np.linalg.eigvalsh(0.5 * (m + m.conj().T))
    return float(w[0]), float(w[-1])


def strip_resolvent_check(inst: BlockInstance, a: float, b: float, grid_n: int = 24,
                          sv_floor: float = 1e-12, eig_tol: float = 1e-9) -> bool:
    """Certify that ``{a + r_V < Re z < b - r_V}`` contains no spectrum of ``L``.

    Two checks: no eigenvalue of ``L`` has real part inside the strip, and
    ``L - z`` has smallest singular value above ``sv_floor`` on a
    ``grid_n x grid_n`` grid over the strip with ``|Im z| <= 2 ||L||``.

    The numerical ranges of the blocks must lie on opposite sides of
    ``(a, b)``: ``max Re W(A0) <= a`` and ``b <= min Re W(A1)`` or the
    mirror image. Extreme real parts of a numerical range are the extreme
    eigenvalues of the Hermitian part.

    Raises
    ------
    HypothesesNotMet
        If the numerical ranges are not separated by ``(a, b)`` or
        ``sqrt(||B|| ||C||) >= (b - a)/2``.
    """
    if not a < b:
        raise HypothesesNotMet("need a < b")
    lo0, hi0 = _hermitian_part_extremes(inst.a0)
    lo1, hi1 = _hermitian_part_extremes(inst.a1)
    if not ((hi0 <= a and b <= lo1) or (hi1 <= a and b <= lo0)):
        raise HypothesesNotMet("numerical ranges of the blocks are not separated by (a, b)")
    try:
        r_v = enclosure_radius(inst.norm_b, inst.norm_c, b - a)
    except TooLargePerturbation as exc:
        raise HypothesesNotMet(str(exc)) from exc

    lmat = inst.matrix
    left, right = a + r_v, b - r_v
    eigs = np.linalg.eigvals(lmat)
    slack = eig_tol * (1.0 + np.abs(eigs).max())
    if np.any((eigs.real > left + slack) & (eigs.real < right - slack)):
        return False
    width = right - left
    res = left + width * (np.arange(grid_n) + 0.5) / grid_n
    bound = 2.0 * np.linalg.norm(lmat, 2)
    ims = np.linspace(-bound, bound, grid_n)
    eye = np.eye(lmat.shape[0])
    for x in res:
        for y in ims:
            smin = np.linalg.svd(lmat - complex(x, y) * eye, compute_uv=False)[-1]
            if smin <= sv_floor:
                return False
    return True


# -- numerical range and quadratic numerical range --------------------------

def random_unit_vectors(rng: np.random.Generator, count: int, dim: int) -> np.ndarray:
    """Rows are uniform on the complex unit sphere (normalized Gaussians)."""
    z = rng.standard_normal((count, dim)) + 1j * rng.standard_normal((count, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def _chunked(n_samples: int, seed: int, chunk_size: int):
    n_chunks = max(1, -(-n_samples // chunk_size))
    seqs = np.random.SeedSequence(seed).spawn(n_chunks)
    for i, ss in enumerate(seqs):
        count = min(chunk_size, n_samples - i * chunk_size)
        if count > 0:
            yield np.random.default_rng(ss), count


@dataclass(frozen=True, eq=False)
class QnrSample:
    """Eigenvalues of ``n_samples`` random 2x2 compressions (two per sample)."""

    points: np.ndarray
    n_samples: int
    seed: int


def sample_qnr(inst: BlockInstance, n_samples: int, seed: int,
               chunk_size: int = QNR_CHUNK) -> QnrSample:
    """Sample the quadratic numerical range of ``L``.

    For unit ``x`` in ``H0`` and ``y`` in ``H1`` the compression is
    ``[[x*A0x, x*By], [y*Cx, y*A1y]]``. Chunks draw from independent
    child seeds, so the output depends only on ``(n_samples, seed,
    chunk_size)``.
    """
    if n_samples < 1:
        raise ValueError("n_samples must be positive")
    parts = []
    for rng, count in _chunked(n_samples, seed, chunk_size):
        xs = random_unit_vectors(rng, count, inst.n0)
        ys = random_unit_vectors(rng, count, inst.n1)
        parts.append(_kernels.qnr_eigs(inst.a0, inst.a1, inst.b, inst.c, xs, ys))
    return QnrSample(np.concatenate(parts), n_samples, seed)


def numerical_range_sample(matrix, n_samples: int, seed: int,
                           chunk_size: int = QNR_CHUNK) -> np.ndarray:
    """Rayleigh quotients ``x* T x`` of random unit vectors."""
    t = np.atleast_2d(np.asarray(matrix, dtype=complex))
    parts = [_kernels.rayleigh_quotients(t, random_unit_vectors(rng, count, t.shape[0]))
             for rng, count in _chunked(n_samples, seed, chunk_size)]
    return np.concatenate(parts)


def numerical_range_support(matrix, thetas) -> np.ndarray:
    """Support function ``max Re(e^{-i theta} W(T))`` for each direction.

    It equals the largest eigenvalue of the Hermitian part of
    ``e^{-i theta} T``.
    """
    t = np.atleast_2d(np.asarray(matrix, dtype=complex))
    out = []
    for th in np.atleast_1d(thetas):
        r = np.exp(-1j * th) * t
        out.append(np.linalg.eigvalsh(0.5 * (r + r.conj().T))[-1])
    return np.array(out)


def points_within_numerical_range(matrix, points, n_directions: int = 64,
                                  tol: float = 1e-9) -> bool:
    """Whether every point satisfies all support-function inequalities of ``W(T)``."""
    thetas = 2 * np.pi * np.arange(n_directions) / n_directions
    h = numerical_range_support(matrix, thetas)
    proj = (np.exp(-1j * thetas)[:, None] * np.asarray(points)[None, :]).real
    scale = 1.0 + np.abs(h).max()
    return bool(np.all(proj <= h[:, None] + tol * scale))


def qnr_halfplane_check(inst: BlockInstance, samples: Optional[QnrSample] = None,
                        tol: float = 1e-9) -> bool:
    """Real parts of the spectrum of ``L`` and of the QNR samples lie in
    ``[min spec(A), max spec(A)]``, which holds for ``C = -B*`` whatever
    the size of ``B``.

    Raises
    ------
    HypothesesNotMet
        For instances not in ``j_self_adjoint`` mode.
    """
    if inst.mode != J_SELF_ADJOINT:
        raise HypothesesNotMet("the half-plane property needs C = -B*")
    spec_a = np.concatenate([inst.sigma0(), inst.sigma1()])
    lo, hi = spec_a.min(), spec_a.max()
    slack = tol * (1.0 + np.abs(spec_a).max())
    pts = np.linalg.eigvals(inst.matrix)
    if samples is not None:
        pts = np.concatenate([pts, samples.points])
    re = pts.real
    return bool(np.all((re >= lo - slack) & (re <= hi + slack)))


def point_cloud_csv(qnr=None, nr=None, spectrum=None) -> str:
    """CSV with columns ``re, im, source`` (``qnr``, ``nr`` or ``spectrum``)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("re", "im", "source"))
    for source, pts in (("qnr", qnr), ("nr", nr), ("spectrum", spectrum)):
        if pts is None:
            continue
        for z in np.asarray(pts, dtype=complex):
            w.writerow((fmt17(z.real), fmt17(z.imag), source))
    return buf.getvalue()


__all__ = [
    "EnclosureReport", "QnrSample", "enclosure_radius", "enclosure_radius_algebraic",
    "neumann_excludes", "neumann_norm", "numerical_range_sample",
    "numerical_range_support", "point_cloud_csv", "points_within_numerical_range",
    "qnr_halfplane_check", "random_unit_vectors", "sample_qnr", "schur_complement",
    "strip_resolvent_check", "verify_enclosure",
]
