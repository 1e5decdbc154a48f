"""Ready-made instances: three small sharp cases and a random ensemble.

The sharp cases attain equality in one bound each:

* :func:`two_level_gap_instance` -- ``||K|| = ||B|| / dist(spec Z0, spec A1)``;
* :func:`centered_gap_instance` -- ``||K|| = ||B|| / sqrt(delta_hat^2 + ||B||^2)``;
* :func:`scalar_instance` -- ``||tan 2 Theta|| = 2 ||B|| / delta_hat``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .angles import angle_report
from .bounds import check_bounds
from .core import GAP, GENERIC, SUBORDINATED, BlockInstance, build_instance, classify_disposition
from .riccati import solve_riccati_contractive

DISPOSITIONS = (SUBORDINATED, GAP, GENERIC)


def two_level_gap_instance(d: float = 4.0, b: float = 1.0) -> BlockInstance:
    """``A0 = diag(-d, d)``, ``A1 = 0``, ``B = (0, b)^T``; needs ``b < d/2``."""
    return build_instance(np.diag([-d, d]), [[0.0]], [[0.0], [b]])


def centered_gap_instance(d: float = 2.0, b: float = 1.0) -> BlockInstance:
    """``A0 = 0``, ``A1 = diag(-d, d)``, ``B = (b/sqrt 2)(1, 1)``."""
    return build_instance([[0.0]], np.diag([-d, d]), [[b / math.sqrt(2), b / math.sqrt(2)]])


def scalar_instance(d: float = 2.0, b: float = 0.6) -> BlockInstance:
    """``A0 = -d/2``, ``A1 = d/2``, ``B = b``; needs ``b < d/2``."""
    return build_instance([[-d / 2]], [[d / 2]], [[b]])


@dataclass(frozen=True)
class SharpCheck:
    name: str
    lhs: float
    rhs: float
    tol: float

    @property
    def ok(self) -> bool:
        return abs(self.lhs - self.rhs) <= self.tol


def sharp_checks(tol: float = 1e-10) -> list:
    """Evaluate the equality each sharp instance attains."""
    out = []
    inst = two_level_gap_instance()
    sol = solve_riccati_contractive(inst)
    rep = check_bounds(inst, sol, angle_report(inst, sol))
    out.append(SharpCheck("two_level_gap: ||K|| = ||B||/delta(Z0,A1)",
                          sol.norm_k, inst.norm_b / rep.delta1, tol))
    out.append(SharpCheck("two_level_gap: ||K|| = 2 - sqrt(3)", sol.norm_k, 2 - math.sqrt(3), tol))

    inst = centered_gap_instance()
    sol = solve_riccati_contractive(inst)
    rep = check_bounds(inst, sol, angle_report(inst, sol))
    nb = inst.norm_b
    out.append(SharpCheck("centered_gap: ||K|| = ||B||/sqrt(delta_hat^2 + ||B||^2)",
                          sol.norm_k, nb / math.hypot(rep.delta_hat, nb), tol))
    out.append(SharpCheck("centered_gap: delta_hat = sqrt(3)", rep.delta_hat, math.sqrt(3), tol))

    inst = scalar_instance()
    sol = solve_riccati_contractive(inst)
    ang = angle_report(inst, sol)
    rep = check_bounds(inst, sol, ang)
    out.append(SharpCheck("scalar: ||tan 2 Theta|| = 2||B||/delta_hat",
                          ang.norm_tan2, 2 * inst.norm_b / rep.delta_hat, tol))
    out.append(SharpCheck("scalar: ||K|| = 1/3", sol.norm_k, 1 / 3, tol))
    return out


# -- random ensemble --------------------------------------------------------

def haar_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a complex Gaussian."""
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * ph


def _subordinated_spectra(rng, n0, n1, d):
    s0 = -rng.uniform(0, 2 * d, n0)
    s1 = d + rng.uniform(0, 2 * d, n1)
    s0[0], s1[0] = 0.0, d
    return s0, s1


def _gap_spectra(rng, n_outer, n_inner, d):
    """Inner set inside a gap of the outer set, which has points on both sides."""
    inner = d + rng.uniform(0, 2 * d, n_inner)
    inner[0] = d
    n_left = rng.integers(1, n_outer)
    left = -rng.uniform(0, 2 * d, n_left)
    left[0] = 0.0
    right = inner.max() + d + rng.uniform(0, 2 * d, n_outer - n_left)
    return np.concatenate([left, right]), inner


def _generic_spectra(rng, n0, n1, d):
    labels = [0, 1, 0, 1] + [0] * (n0 - 2) + [1] * (n1 - 2)
    tail = labels[4:]
    rng.shuffle(tail)
    labels = labels[:4] + tail
    pos = [0.0]
    for prev, cur in zip(labels, labels[1:]):
        step = d + rng.uniform(0, d) if prev != cur else rng.uniform(0.1 * d, d)
        pos.append(pos[-1] + step)
    pos = np.array(pos)
    # pin the first cross-label gap to exactly d
    pos[1:] -= pos[1] - pos[0] - d
    labels = np.array(labels)
    return pos[labels == 0], pos[labels == 1]


def random_spectra(rng, n0, n1, d, disposition):
    """Eigenvalue lists with ``dist = d`` exactly and the requested disposition."""
    if disposition == SUBORDINATED:
        s0, s1 = _subordinated_spectra(rng, n0, n1, d)
    elif disposition == GAP:
        if n0 >= 2:
            s0, s1 = _gap_spectra(rng, n0, n1, d)
        elif n1 >= 2:
            s1, s0 = _gap_spectra(rng, n1, n0, d)
        else:
            raise ValueError("a gap disposition needs a component of dimension >= 2")
    elif disposition == GENERIC:
        if n0 < 2 or n1 < 2:
            raise ValueError("a generic disposition needs both dimensions >= 2")
        s0, s1 = _generic_spectra(rng, n0, n1, d)
    else:
        raise ValueError(f"unknown disposition {disposition!r}")
    return s0, s1


def random_instance(rng: np.random.Generator, n0: int, n1: int, d: float,
                    norm_v: float, disposition: str) -> BlockInstance:
    """Random ``j_self_adjoint`` instance with prescribed ``d``, ``||V||`` and disposition.

    Spectra are placed directly, conjugated by Haar unitaries, and ``B``
    is a complex Gaussian rescaled to spectral norm ``norm_v``.
    """
    s0, s1 = random_spectra(rng, n0, n1, d, disposition)
    u0, u1 = haar_unitary(rng, n0), haar_unitary(rng, n1)
    a0 = (u0 * s0) @ u0.conj().T
    a1 = (u1 * s1) @ u1.conj().T
    b = rng.standard_normal((n0, n1)) + 1j * rng.standard_normal((n0, n1))
    b *= norm_v / np.linalg.norm(b, 2)
    inst = build_instance(0.5 * (a0 + a0.conj().T), 0.5 * (a1 + a1.conj().T), b)
    got = classify_disposition(s0, s1).kind
    if got != disposition:
        raise RuntimeError(f"generated {got} spectra instead of {disposition}")
    return inst


__all__ = [
    "DISPOSITIONS", "SharpCheck", "centered_gap_instance", "haar_unitary",
    "random_instance", "random_spectra", "scalar_instance", "sharp_checks",
    "two_level_gap_instance",
]
