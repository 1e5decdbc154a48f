"""Block instances, the Krein inner product, graph subspaces and dispositions.

Conventions
-----------
The Hilbert space is ``C^(n0 + n1)`` split as ``H0 (+) H1``, with the first
``n0`` coordinates spanning ``H0``. The involution is
``J = diag(I_n0, -I_n1)``.

The Hilbert inner product ``(x, y) = sum(x_k * conj(y_k))`` is linear in the
first argument and conjugate-linear in the second; the Krein inner product
is ``[x, y] = (Jx, y)`` with the same convention.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
import scipy.linalg as sla

from . import _kernels
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .errors import (
    DimensionMismatch,
    KreinBoundsError,
    NotHermitian,
    NotUniformlyDefinite,
    SetsIntersect,
)

J_SELF_ADJOINT = "j_self_adjoint"
GENERAL = "general"
MODES = (J_SELF_ADJOINT, GENERAL)


def _as_matrix(a, name):
    m = np.atleast_2d(np.asarray(a, dtype=complex))
    if m.ndim != 2:
        raise DimensionMismatch(f"{name} must be a matrix, got shape {m.shape}")
    return m


def hermitian_defect(m) -> float:
    """Relative distance of ``m`` from the Hermitian matrices."""
    m = np.asarray(m)
    return float(np.linalg.norm(m - m.conj().T) / max(1.0, np.linalg.norm(m)))


@dataclass(frozen=True)
class KreinSignature:
    """The involution ``J = diag(I_n0, -I_n1)``."""

    n0: int
    n1: int

    @property
    def dim(self) -> int:
        return self.n0 + self.n1

    @property
    def diagonal(self) -> np.ndarray:
        return np.concatenate([np.ones(self.n0), -np.ones(self.n1)])

    @property
    def matrix(self) -> np.ndarray:
        return np.diag(self.diagonal)

    def projector(self, sign: int) -> np.ndarray:
        """Spectral projection of ``J`` for the eigenvalue ``sign`` (+1 or -1)."""
        mask = self.diagonal == sign
        return np.diag(mask.astype(float))


@dataclass(frozen=True, eq=False)
class BlockInstance:
    """The block matrix ``L = [[A0, B], [C, A1]]``.

    In ``j_self_adjoint`` mode ``C`` is always ``-B*``.
    Build instances with :func:`build_instance`, which validates them.
    """

    a0: np.ndarray
    a1: np.ndarray
    b: np.ndarray
    c: np.ndarray
    mode: str = J_SELF_ADJOINT

    @property
    def n0(self) -> int:
        return self.a0.shape[0]

    @property
    def n1(self) -> int:
        return self.a1.shape[0]

    @property
    def sig(self) -> KreinSignature:
        return KreinSignature(self.n0, self.n1)

    @property
    def matrix(self) -> np.ndarray:
        """Dense ``L``."""
        return np.block([[self.a0, self.b], [self.c, self.a1]])

    @property
    def diagonal_part(self) -> np.ndarray:
        z01 = np.zeros((self.n0, self.n1), dtype=complex)
        return np.block([[self.a0, z01], [z01.T, self.a1]])

    @property
    def perturbation(self) -> np.ndarray:
        """Dense off-diagonal part ``V``."""
        return np.block([[np.zeros_like(self.a0), self.b],
                         [self.c, np.zeros_like(self.a1)]])

    @property
    def norm_b(self) -> float:
        return float(np.linalg.norm(self.b, 2))

    @property
    def norm_c(self) -> float:
        return float(np.linalg.norm(self.c, 2))

    @property
    def norm_v(self) -> float:
        """Spectral norm of ``V``; equals ``max(||B||, ||C||)``."""
        return max(self.norm_b, self.norm_c)

    @property
    def is_hermitian_diagonal(self) -> bool:
        tol = DEFAULT_TOLERANCES.hermitian
        return hermitian_defect(self.a0) <= tol and hermitian_defect(self.a1) <= tol

    def sigma0(self) -> np.ndarray:
        """Sorted spectrum of ``A0`` (real; requires Hermitian ``A0``)."""
        return np.linalg.eigvalsh(_hermitize(self.a0))

    def sigma1(self) -> np.ndarray:
        return np.linalg.eigvalsh(_hermitize(self.a1))

    def to_dict(self) -> dict:
        out = {
            "n0": self.n0,
            "n1": self.n1,
            "a0": _encode_matrix(self.a0),
            "a1": _encode_matrix(self.a1),
            "b": _encode_matrix(self.b),
            "mode": self.mode,
        }
        if self.mode == GENERAL:
            out["c"] = _encode_matrix(self.c)
        return out


def _hermitize(m):
    return 0.5 * (m + m.conj().T)


def build_instance(a0, a1, b, c=None, mode: str = J_SELF_ADJOINT,
                   tol: ToleranceConfig = DEFAULT_TOLERANCES) -> BlockInstance:
    """Validate the blocks and assemble a :class:`BlockInstance`.

    Parameters
    ----------
    a0, a1
        Square diagonal blocks, ``n0 x n0`` and ``n1 x n1``.
    b
        Upper-right block, ``n0 x n1``.
    c
        Lower-left block, ``n1 x n0``. Must be omitted in
        ``j_self_adjoint`` mode, where ``c = -b*``.
    mode
        ``"j_self_adjoint"`` or ``"general"``.

    Raises
    ------
    DimensionMismatch
        If block shapes are inconsistent.
    NotHermitian
        If, in ``j_self_adjoint`` mode, ``a0`` or ``a1`` is not Hermitian.
    """
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    a0 = _as_matrix(a0, "a0")
    a1 = _as_matrix(a1, "a1")
    b = _as_matrix(b, "b")
    n0, n1 = a0.shape[0], a1.shape[0]
    if a0.shape != (n0, n0) or a1.shape != (n1, n1) or n0 < 1 or n1 < 1:
        raise DimensionMismatch(f"diagonal blocks must be square, got {a0.shape}, {a1.shape}")
    if b.shape != (n0, n1):
        raise DimensionMismatch(f"b must be {n0}x{n1}, got {b.shape}")
    if mode == J_SELF_ADJOINT:
        if c is not None:
            raise ValueError("c is determined by b in j_self_adjoint mode")
        for name, m in (("a0", a0), ("a1", a1)):
            if hermitian_defect(m) > tol.hermitian:
                raise NotHermitian(f"{name} is not Hermitian")
        c = -b.conj().T
    else:
        if c is None:
            raise ValueError("general mode requires c")
        c = _as_matrix(c, "c")
        if c.shape != (n1, n0):
            raise DimensionMismatch(f"c must be {n1}x{n0}, got {c.shape}")
    for m in (a0, a1, b, c):
        m.setflags(write=False)
    return BlockInstance(a0=a0, a1=a1, b=b, c=c, mode=mode)


# -- JSON -------------------------------------------------------------------

def _encode_matrix(m) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(m)]


def _decode_matrix(rows, name) -> np.ndarray:
    try:
        arr = np.asarray(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch(f"{name}: ragged or non-numeric entries") from exc
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DimensionMismatch(f"{name}: expected rows of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def instance_from_dict(data: dict) -> BlockInstance:
    """Inverse of :meth:`BlockInstance.to_dict`."""
    try:
        mode = data.get("mode", J_SELF_ADJOINT)
        a0 = _decode_matrix(data["a0"], "a0")
        a1 = _decode_matrix(data["a1"], "a1")
        b = _decode_matrix(data["b"], "b")
        c = _decode_matrix(data["c"], "c") if data.get("c") is not None else None
        n0, n1 = int(data["n0"]), int(data["n1"])
    except KeyError as exc:
        raise DimensionMismatch(f"missing field {exc.args[0]!r}") from exc
    if a0.shape[0] != n0 or a1.shape[0] != n1:
        raise DimensionMismatch("n0/n1 disagree with block shapes")
    return build_instance(a0, a1, b, c, mode=mode)


def load_instance(path) -> BlockInstance:
    with open(path) as fh:
        return instance_from_dict(json.load(fh))


def dump_instance(inst: BlockInstance, path) -> None:
    with open(path, "w") as fh:
        json.dump(inst.to_dict(), fh, indent=1)


# -- Krein geometry ---------------------------------------------------------

def krein_inner(x, y, sig: KreinSignature) -> complex:
    """``[x, y] = (Jx, y)``, linear in ``x`` and conjugate-linear in ``y``."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    if x.size != sig.dim or y.size != sig.dim:
        raise DimensionMismatch(f"vectors must have length {sig.dim}")
    return complex(np.sum(sig.diagonal * x * y.conj()))


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace given by an orthonormal basis (columns of ``basis``)."""

    basis: np.ndarray
    ortho_tol: float = field(default=1e-12, repr=False)

    def __post_init__(self):
        q = np.asarray(self.basis, dtype=complex)
        if q.ndim == 1:
            q = q[:, None]
        object.__setattr__(self, "basis", q)
        defect = np.abs(q.conj().T @ q - np.eye(q.shape[1])).max() if q.shape[1] else 0.0
        if defect > self.ortho_tol:
            raise ValueError(f"basis is not orthonormal (defect {defect:.2e})")

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        return self.basis @ self.basis.conj().T

    @classmethod
    def from_columns(cls, cols) -> "Subspace":
        """Orthonormalize arbitrary full-rank columns (pivoted QR)."""
        cols = np.asarray(cols, dtype=complex)
        if cols.ndim == 1:
            cols = cols[:, None]
        q, _, _ = sla.qr(cols, mode="economic", pivoting=True)
        return cls(q)


def coordinate_subspace(sig: KreinSignature, component: int) -> Subspace:
    """``H0`` (component 0) or ``H1`` (component 1) as a :class:`Subspace`."""
    eye = np.eye(sig.dim)
    cols = eye[:, :sig.n0] if component == 0 else eye[:, sig.n0:]
    return Subspace(cols)


def krein_gram(sub: Subspace, sig: KreinSignature) -> np.ndarray:
    """Hermitian matrix ``X* J X`` of the orthonormal basis ``X``."""
    if sub.ambient != sig.dim:
        raise DimensionMismatch("subspace and signature disagree on dimension")
    x = sub.basis
    g = x.conj().T @ (sig.diagonal[:, None] * x)
    return _hermitize(g)


def definiteness_margin(sub: Subspace, sig: KreinSignature) -> float:
    """Smallest eigenvalue ``gamma`` of ``X* J X``.

    ``gamma > 0`` certifies ``[x, x] >= gamma ||x||^2`` on the subspace.
    For negativity, check the largest eigenvalue of :func:`krein_gram`.
    """
    return float(np.linalg.eigvalsh(krein_gram(sub, sig))[0])


def graph_subspace(k, sig: KreinSignature, over: Optional[int] = None) -> Subspace:
    """Orthonormal basis of the graph ``{(x, Kx)}``.

    ``k`` is ``n1 x n0`` for a graph over ``H0`` or ``n0 x n1`` for a graph
    over ``H1``. ``over`` selects the component when ``n0 == n1``; it
    defaults to 0 in that case.
    """
    k = np.atleast_2d(np.asarray(k, dtype=complex))
    if over is None:
        if k.shape == (sig.n1, sig.n0):
            over = 0
        elif k.shape == (sig.n0, sig.n1):
            over = 1
        else:
            raise DimensionMismatch(f"k has shape {k.shape}, incompatible with {sig}")
    expected = (sig.n1, sig.n0) if over == 0 else (sig.n0, sig.n1)
    if k.shape != expected:
        raise DimensionMismatch(f"graph over H{over} needs k of shape {expected}")
    eye = np.eye(k.shape[1])
    cols = np.vstack([eye, k]) if over == 0 else np.vstack([k, eye])
    return Subspace.from_columns(cols)


def angular_operator(sub: Subspace, sig: KreinSignature, over: int = 0,
                     max_condition: float = 1e8) -> np.ndarray:
    """Recover ``K`` with ``sub = G(K)`` over ``H_over``."""
    x = sub.basis
    top, rest = (x[:sig.n0], x[sig.n0:]) if over == 0 else (x[sig.n0:], x[:sig.n0])
    if top.shape[0] != sub.dim:
        raise DimensionMismatch("subspace dimension differs from the component dimension")
    if np.linalg.cond(top) >= max_condition:
        raise KreinBoundsError("subspace is not a graph over the requested component")
    return np.linalg.solve(top.T, rest.T).T


def j_orthogonal_complement(sub: Subspace, sig: KreinSignature,
                            check_tol: float = 1e-10) -> Subspace:
    """``G(K)^[perp] = G(K*)`` for a uniformly positive graph ``G(K)``.

    Raises
    ------
    NotUniformlyDefinite
        If the definiteness margin of ``sub`` is not positive.
    """
    if definiteness_margin(sub, sig) <= 0:
        raise NotUniformlyDefinite("subspace is not uniformly positive")
    k = angular_operator(sub, sig, over=0)
    comp = graph_subspace(k.conj().T, sig, over=1)
    resid = krein_cross_gram(sub, comp, sig)
    if np.abs(resid).max(initial=0.0) > check_tol:
        raise KreinBoundsError("complement failed the Krein orthogonality check")
    return comp


def krein_cross_gram(s1: Subspace, s2: Subspace, sig: KreinSignature) -> np.ndarray:
    """Matrix of ``[x_i, y_j]`` over the two bases (zero iff J-orthogonal)."""
    return s2.basis.conj().T @ (sig.diagonal[:, None] * s1.basis)


# -- dispositions -----------------------------------------------------------

GENERIC = "generic"
GAP = "gap"
SUBORDINATED = "subordinated"


@dataclass(frozen=True)
class Disposition:
    """Mutual position of two disjoint finite real sets.

    ``gap0`` means ``conv(set0)`` misses ``set1`` (set0 lies in a gap of
    set1); ``gap1`` is the mirror statement. Both hold exactly when the
    sets are subordinated.
    """

    kind: str
    d: float
    gap0: bool
    gap1: bool

    @property
    def which_inner(self) -> Optional[int]:
        """Index ``i`` with ``set_i`` inside a gap of the other set, if unique."""
        if self.gap0 and not self.gap1:
            return 0
        if self.gap1 and not self.gap0:
            return 1
        return None

    @property
    def has_gap(self) -> bool:
        return self.gap0 or self.gap1


def _sorted_real(values, name) -> np.ndarray:
    arr = np.sort(np.asarray(values, dtype=float).ravel())
    if arr.size == 0:
        raise ValueError(f"{name} is empty")
    return arr


def set_distance(set0, set1) -> float:
    """Minimum pairwise distance between two finite real sets."""
    return _kernels.min_cross_distance(_sorted_real(set0, "set0"), _sorted_real(set1, "set1"))


def classify_disposition(set0: Sequence[float], set1: Sequence[float],
                         tol: ToleranceConfig = DEFAULT_TOLERANCES) -> Disposition:
    """Classify two finite real sets as generic, gap or subordinated.

    Raises
    ------
    SetsIntersect
        If the sets share a point within ``tol.same_point``.
    """
    s0 = _sorted_real(set0, "set0")
    s1 = _sorted_real(set1, "set1")
    d = _kernels.min_cross_distance(s0, s1)
    scale = 1.0 + max(abs(s0[0]), abs(s0[-1]), abs(s1[0]), abs(s1[-1]))
    if d <= tol.same_point * scale:
        raise SetsIntersect(f"sets intersect (distance {d:.3e})")
    gap0 = not np.any((s1 >= s0[0]) & (s1 <= s0[-1]))
    gap1 = not np.any((s0 >= s1[0]) & (s0 <= s1[-1]))
    if gap0 and gap1:
        kind = SUBORDINATED
    elif gap0 or gap1:
        kind = GAP
    else:
        kind = GENERIC
    return Disposition(kind=kind, d=d, gap0=gap0, gap1=gap1)


def enumerate_separating_gaps(set0, set1,
                              tol: ToleranceConfig = DEFAULT_TOLERANCES) -> list:
    """Open intervals between neighbouring points of the union whose
    endpoints lie in different sets, sorted left to right."""
    classify_disposition(set0, set1, tol)
    labelled = sorted([(float(x), 0) for x in np.unique(set0)]
                      + [(float(x), 1) for x in np.unique(set1)])
    return [(a, b) for (a, la), (b, lb) in zip(labelled, labelled[1:]) if la != lb]


def graph_margin_formula(norm_k: float) -> float:
    """Lower bound ``(1 - ||K||^2) / (1 + ||K||^2)`` for ``[x,x]/||x||^2`` on ``G(K)``."""
    return (1.0 - norm_k ** 2) / (1.0 + norm_k ** 2)


def is_close_sets(a, b, atol: float) -> bool:
    a, b = np.sort(np.asarray(a, float)), np.sort(np.asarray(b, float))
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


__all__ = [
    "BlockInstance", "Disposition", "KreinSignature", "Subspace",
    "build_instance", "classify_disposition", "coordinate_subspace",
    "definiteness_margin", "enumerate_separating_gaps", "graph_subspace",
    "j_orthogonal_complement", "krein_inner", "krein_gram", "load_instance",
    "dump_instance", "instance_from_dict", "set_distance", "angular_operator",
    "krein_cross_gram", "graph_margin_formula", "hermitian_defect",
    "GENERIC", "GAP", "SUBORDINATED", "J_SELF_ADJOINT", "GENERAL",
]
