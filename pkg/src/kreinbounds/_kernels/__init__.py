"""Inner-loop kernels with a compiled and a pure-numpy implementation.

The compiled extension ``_fast`` is used when it was built; otherwise
(or when ``KREINBOUNDS_PURE_PYTHON`` is set to a non-empty value other
than ``0``) the numpy versions from ``_reference`` are used. ``BACKEND``
names the active implementation.

The wrappers below normalize dtypes and memory layout so both backends
see identical inputs.
"""
import os

import numpy as np

from . import _reference

_force_pure = os.environ.get("KREINBOUNDS_PURE_PYTHON", "") not in ("", "0")

try:
    if _force_pure:
        raise ImportError
    from . import _fast
except ImportError:
    _fast = None

BACKEND = "cython" if _fast is not None else "numpy"
_impl = _fast if _fast is not None else _reference


def available_backends():
    """Names and modules of every importable backend."""
    out = {"numpy": _reference}
    if _fast is not None:
        out["cython"] = _fast
    return out


def _c(a):
    return np.ascontiguousarray(a, dtype=complex)


def _f(a):
    return np.ascontiguousarray(a, dtype=float)


def qnr_eigs(a0, a1, b, c, xs, ys, impl=None):
    impl = impl or _impl
    xs, ys = _c(np.atleast_2d(xs)), _c(np.atleast_2d(ys))
    return impl.qnr_eigs(_c(a0), _c(a1), _c(b), _c(c), xs, ys)


def rayleigh_quotients(t, xs, impl=None):
    impl = impl or _impl
    return impl.rayleigh_quotients(_c(t), _c(np.atleast_2d(xs)))


def hermite_psi(nodes, m, impl=None):
    if m < 1:
        raise ValueError("need at least one Hermite function")
    impl = impl or _impl
    return impl.hermite_psi(_f(np.atleast_1d(nodes)), int(m))


def hermite_weighted(nodes, m, n_total, impl=None):
    """Hermite functions times square-root quadrature weights (see ``_reference``)."""
    if m < 1 or n_total < m:
        raise ValueError("need 1 <= m <= n_total")
    impl = impl or _impl
    return impl.hermite_weighted(_f(np.atleast_1d(nodes)), int(m), int(n_total))


def min_cross_distance(s0, s1, impl=None):
    """Minimum pairwise distance between two sorted, nonempty real arrays."""
    impl = impl or _impl
    return float(impl.min_cross_distance(_f(s0), _f(s1)))
