"""Riccati equations, subspace angles and spectral enclosures for
J-self-adjoint block matrices ``L = [[A0, B], [-B*, A1]]``.

The main entry points are :func:`build_instance`,
:func:`solve_riccati_contractive`, :func:`angle_report`,
:func:`check_bounds` and :func:`verify_enclosure`. ``BACKEND`` names the
kernel implementation in use (``"cython"`` or ``"numpy"``).
"""
__version__ = "0.1.0"

from ._kernels import BACKEND
from .angles import (
    AngleReport,
    angle_from_angular_operator,
    angle_norms,
    angle_report,
    operator_angle,
)
from .bounds import (
    BoundReport,
    apriori_deltahat_lower,
    bound_catalogue,
    check_bounds,
    tsuff_check,
)
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .core import (
    BlockInstance,
    Disposition,
    KreinSignature,
    Subspace,
    build_instance,
    classify_disposition,
    definiteness_margin,
    enumerate_separating_gaps,
    graph_subspace,
    j_orthogonal_complement,
    krein_inner,
    load_instance,
)
from .enclosures import (
    EnclosureReport,
    QnrSample,
    enclosure_radius,
    enclosure_radius_algebraic,
    neumann_excludes,
    numerical_range_sample,
    qnr_halfplane_check,
    sample_qnr,
    schur_complement,
    strip_resolvent_check,
    verify_enclosure,
)
from .errors import KreinBoundsError
from .oscillator import (
    OscillatorModel,
    build_oscillator,
    hermite_functions,
    multiplicity,
    oscillator_report,
)
from .riccati import (
    RiccatiSolution,
    dual_solution,
    riccati_residual,
    solve_riccati_contractive,
    transformed_riccati_residual,
)
from .sylvester import SylvesterResult, solve_sylvester, sylvester_bound_rhs

