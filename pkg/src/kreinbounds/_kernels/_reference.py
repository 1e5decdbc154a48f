"""Pure numpy implementations of the inner-loop kernels.

These are the fallback used when the compiled extension is missing, and
the reference the compiled versions are tested against.
"""
import numpy as np

_PI_M14 = np.pi ** -0.25


def qnr_eigs(a0, a1, b, c, xs, ys):
    """Eigenvalues of the 2x2 compressions for a batch of unit vectors.

    Row ``s`` of ``xs`` (``ys``) is a unit vector in the first (second)
    component. Returns a complex array of length ``2 * len(xs)`` holding
    the two eigenvalues of each compression, in sample order.
    """
    xc = xs.conj()
    yc = ys.conj()
    alpha = np.einsum("si,ij,sj->s", xc, a0, xs)
    delta = np.einsum("si,ij,sj->s", yc, a1, ys)
    beta = np.einsum("si,ij,sj->s", xc, b, ys)
    gamma = np.einsum("si,ij,sj->s", yc, c, xs)
    half_tr = 0.5 * (alpha + delta)
    root = np.sqrt(0.25 * (alpha - delta) ** 2 + beta * gamma)
    out = np.empty(2 * len(xs), dtype=complex)
    out[0::2] = half_tr + root
    out[1::2] = half_tr - root
    return out


def rayleigh_quotients(t, xs):
    """``x* T x`` for each row ``x`` of ``xs``."""
    return np.einsum("si,ij,sj->s", xs.conj(), t, xs)


def hermite_psi(nodes, m):
    """Normalized Hermite functions ``psi_0 .. psi_{m-1}`` at ``nodes``.

    Returns an array of shape ``(len(nodes), m)``.
    """
    x = np.asarray(nodes, dtype=float)
    out = np.empty((x.size, m))
    out[:, 0] = _PI_M14 * np.exp(-0.5 * x * x)
    if m > 1:
        out[:, 1] = np.sqrt(2.0) * x * out[:, 0]
    for n in range(1, m - 1):
        out[:, n + 1] = (np.sqrt(2.0 / (n + 1)) * x * out[:, n]
                         - np.sqrt(n / (n + 1.0)) * out[:, n - 1])
    return out


_BIG = 1e100


def hermite_weighted(nodes, m, n_total):
    """``psi_j(x_k) * sqrt(W_k)`` for ``j < m`` at the ``n_total`` Gauss-Hermite nodes.

    ``W_k = 1 / (n_total * psi_{n_total-1}(x_k)^2)`` is the quadrature weight
    for plain ``dx`` integration. The recurrence runs without the Gaussian
    factor, which cancels in the ratio, and is rescaled whenever it grows
    past ``1e100`` so that far-out nodes neither underflow nor overflow.
    """
    x = np.asarray(nodes, dtype=float)
    out = np.empty((x.size, m))
    scale_at = np.empty((x.size, m))
    cnt = np.zeros(x.size)
    p0 = np.full(x.size, _PI_M14)
    p1 = np.sqrt(2.0) * x * p0
    out[:, 0] = p0
    scale_at[:, 0] = 0.0
    if m > 1:
        out[:, 1] = p1
        scale_at[:, 1] = 0.0
    for n in range(1, n_total - 1):
        p2 = np.sqrt(2.0 / (n + 1)) * x * p1 - np.sqrt(n / (n + 1.0)) * p0
        p0, p1 = p1, p2
        big = np.abs(p1) > _BIG
        if big.any():
            p0[big] /= _BIG
            p1[big] /= _BIG
            cnt[big] += 1
        if n + 1 < m:
            out[:, n + 1] = p1
            scale_at[:, n + 1] = cnt
    last = p1 if n_total > 1 else p0
    factor = np.power(_BIG, scale_at - cnt[:, None])
    return out * factor / (np.sqrt(n_total) * np.abs(last))[:, None]


def min_cross_distance(s0, s1):
    """Smallest ``|a - b|`` over ``a`` in ``s0``, ``b`` in ``s1``.

    Both inputs must be sorted ascending and nonempty.
    """
    s0 = np.asarray(s0, dtype=float)
    s1 = np.asarray(s1, dtype=float)
    idx = np.searchsorted(s1, s0)
    right = np.abs(s1[np.minimum(idx, s1.size - 1)] - s0)
    left = np.abs(s0 - s1[np.maximum(idx - 1, 0)])
    return float(min(right.min(), left.min()))
