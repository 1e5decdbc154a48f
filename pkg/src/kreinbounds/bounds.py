"""Right-hand sides of the angle and contraction bounds, and their checking.

Every bound has an identifier, a left-hand side (which trigonometric norm
of the angle it controls), a formula and an applicability condition.
A bound whose hypotheses fail, or whose formula leaves its domain
(``arcsin`` of an argument above 1 and the like), is reported as
inapplicable instead of being evaluated on clipped arguments.

Identifiers
-----------
``B-1.1``, ``B-1.1'``
    A priori bounds with a gap between ``sigma0`` and ``sigma1``.
``B-1.2a[i]``, ``B-1.2b[i]``
    Semi a posteriori bounds in ``delta_i = dist(sigma_i, sigma'_{1-i})``.
``B-1.3a``, ``B-1.3b``, ``B-1.3c``
    A posteriori bounds in ``delta_hat = dist(sigma'_0, sigma'_1)``.
``B-3.1a``, ``B-3.1b``, ``B-3.4``, ``B-3.6``, ``B-3.7``
    Bounds on ``||K||`` in terms of ``||B||`` and the spectra of
    ``Z0 = A0 + BK``, ``A1`` and ``Z1 = A1 - B*K*``.
``B-6.4a``, ``B-6.4b``, ``B-6.6``, ``B-6.7a``, ``B-6.7b``
    A priori bounds in ``d`` and ``||V||`` alone.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from .angles import AngleReport
from .config import DEFAULT_TOLERANCES, ToleranceConfig
from .core import (
    BlockInstance,
    Disposition,
    classify_disposition,
    enumerate_separating_gaps,
)
from .errors import SetsIntersect, TooLargePerturbation
from .riccati import RiccatiSolution

TAN = "tan"
SIN2 = "sin2"
TAN2 = "tan2"
NORM_K = "norm_k"

BOUND_IDS = (
    "B-1.1", "B-1.1'", "B-1.2a[0]", "B-1.2b[0]", "B-1.2a[1]", "B-1.2b[1]",
    "B-1.3a", "B-1.3b", "B-1.3c",
    "B-3.1a", "B-3.1b", "B-3.4", "B-3.6", "B-3.7",
    "B-6.4a", "B-6.4b", "B-6.6", "B-6.7a", "B-6.7b",
)

CSV_COLUMNS = ("bound_id", "applicable", "lhs", "rhs", "slack")


def fmt17(x: float) -> str:
    """Round-trip float formatting at 17 significant digits."""
    return format(float(x), ".17g")


# -- formulas ---------------------------------------------------------------

def tanh_half_artanh(x: float) -> float:
    """``tanh(artanh(x) / 2)`` for ``0 <= x < 1``."""
    return math.tanh(0.5 * math.atanh(x))


def tan_half_arcsin(x: float) -> float:
    """``tan(arcsin(x) / 2)`` for ``0 <= x <= 1``."""
    return math.tan(0.5 * math.asin(x))


def tan_half_arctan(x: float) -> float:
    """``tan(arctan(x) / 2)`` for ``x >= 0``."""
    return math.tan(0.5 * math.atan(x))


@dataclass(frozen=True)
class CatalogueEntry:
    bound_id: str
    subject: str
    applicable: bool
    rhs: float
    disposition_used: str


def _ratio(num, den):
    return num / den if den > 0 else math.nan


def _kind(disp: Optional[Disposition]) -> str:
    return disp.kind if disp is not None else "none"


def bound_catalogue(norm_v: float, d: float, delta0: float, delta1: float,
                    delta_hat: float, dispositions: Dict[str, Optional[Disposition]],
                    norm_b: Optional[float] = None) -> List[CatalogueEntry]:
    """Evaluate every bound's right-hand side with its applicability.

    Parameters
    ----------
    norm_v
        ``||V||``.
    d, delta0, delta1, delta_hat
        ``dist(sigma0, sigma1)``, ``dist(sigma0, sigma'_1)``,
        ``dist(sigma1, sigma'_0)`` and ``dist(sigma'_0, sigma'_1)``.
    dispositions
        Mapping with keys ``"sigma"`` for ``(sigma0, sigma1)``, ``"delta0"``
        for ``(sigma0, sigma'_1)``, ``"delta1"`` for ``(sigma1, sigma'_0)``
        and ``"prime"`` for ``(sigma'_0, sigma'_1)``. A value of ``None``
        means the two sets are not disjoint.
    norm_b
        ``||B||``; defaults to ``norm_v`` (they coincide when ``C = -B*``).
    """
    v = float(norm_v)
    nb = v if norm_b is None else float(norm_b)
    ds = dispositions.get("sigma")
    dp = dispositions.get("prime")
    out: List[CatalogueEntry] = []

    def add(bid, subject, ok, fn, disp):
        rhs = fn() if ok else math.nan
        out.append(CatalogueEntry(bid, subject, bool(ok), rhs, _kind(disp)))

    x = _ratio(2 * v, d)
    small = d > 0 and x < 1
    sigma_gap = ds is not None and ds.has_gap
    add("B-1.1", TAN, small and sigma_gap, lambda: tanh_half_artanh(x), ds)
    add("B-1.1'", SIN2, small and sigma_gap, lambda: x, ds)

    for i, delta in ((0, delta0), (1, delta1)):
        di = dispositions.get(f"delta{i}")
        add(f"B-1.2a[{i}]", TAN, delta > 0, lambda delta=delta: math.pi / 2 * v / delta, di)
        add(f"B-1.2b[{i}]", TAN, delta > 0 and di is not None and di.has_gap,
            lambda delta=delta: v / delta, di)

    add("B-1.3a", TAN, delta_hat > 0, lambda: math.pi / 2 * v / delta_hat, dp)
    add("B-1.3b", TAN, delta_hat > 0 and dp is not None and dp.has_gap,
        lambda: v / math.hypot(delta_hat, v), dp)
    add("B-1.3c", TAN2, delta_hat > 0 and dp is not None and dp.kind == "subordinated",
        lambda: 2 * v / delta_hat, dp)

    # Z0 is similar to Lambda0, so spec(Z0) = sigma'_0 and spec(Z1) = sigma'_1.
    dz = dispositions.get("delta1")
    add("B-3.1a", NORM_K, delta1 > 0, lambda: math.pi / 2 * nb / delta1, dz)
    add("B-3.1b", NORM_K, delta1 > 0 and dz is not None and dz.has_gap,
        lambda: nb / delta1, dz)
    add("B-3.4", NORM_K, delta_hat > 0, lambda: math.pi / 2 * nb / delta_hat, dp)
    add("B-3.6", NORM_K, delta_hat > 0 and dp is not None and dp.gap0,
        lambda: nb / math.hypot(delta_hat, nb), dp)
    add("B-3.7", NORM_K, delta_hat > 0 and dp is not None and dp.kind == "subordinated",
        lambda: tan_half_arctan(2 * nb / delta_hat), dp)

    add("B-6.4a", TAN, small, lambda: math.pi / 2 * tan_half_arcsin(x), ds)
    add("B-6.4b", TAN, small and sigma_gap, lambda: tan_half_arcsin(x), ds)
    y = _ratio(math.pi * v, d)
    add("B-6.6", TAN, d > 0 and y < 1, lambda: tanh_half_artanh(y), ds)
    add("B-6.7a", TAN, small and dp is not None and dp.has_gap,
        lambda: v / math.sqrt(d * d - 3 * v * v), dp)
    add("B-6.7b", TAN, small, lambda: math.pi / 2 * v / math.sqrt(d * d - 4 * v * v), ds)
    return out


# -- report -----------------------------------------------------------------

@dataclass(frozen=True)
class BoundRecord:
    bound_id: str
    applicable: bool
    lhs: float
    rhs: float
    slack: float
    disposition_used: str


@dataclass(frozen=True)
class BoundReport:
    records: List[BoundRecord]
    d: float
    delta0: float
    delta1: float
    delta_hat: float
    norm_v: float
    slack_tol: float = field(default=DEFAULT_TOLERANCES.slack)

    def __getitem__(self, bound_id: str) -> BoundRecord:
        for rec in self.records:
            if rec.bound_id == bound_id:
                return rec
        raise KeyError(bound_id)

    @property
    def applicable(self) -> List[BoundRecord]:
        return [r for r in self.records if r.applicable]

    @property
    def min_slack(self) -> float:
        return min((r.slack for r in self.applicable), default=math.inf)

    def violations(self, tol: Optional[float] = None) -> List[BoundRecord]:
        tol = self.slack_tol if tol is None else tol
        return [r for r in self.applicable if not r.slack >= -tol]

    @property
    def passed(self) -> bool:
        return not self.violations()

    def to_dict(self) -> dict:
        """Plain-data form; non-finite floats become ``None`` (strict JSON)."""
        out = asdict(self)
        out.pop("slack_tol")
        return _finite_or_none(out)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=1)

    def csv_rows(self) -> List[List[str]]:
        return [[r.bound_id, str(r.applicable).lower(), fmt17(r.lhs), fmt17(r.rhs),
                 fmt17(r.slack)] for r in self.records]

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(CSV_COLUMNS)
        w.writerows(self.csv_rows())
        return buf.getvalue()


def _finite_or_none(obj):
    if isinstance(obj, dict):
        return {k: _finite_or_none(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_finite_or_none(v) for v in obj]
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def _safe_classify(s0, s1, tol) -> Optional[Disposition]:
    try:
        return classify_disposition(s0, s1, tol)
    except SetsIntersect:
        return None


def check_bounds(inst: BlockInstance, sol: RiccatiSolution, angles: AngleReport,
                 tol: ToleranceConfig = DEFAULT_TOLERANCES) -> BoundReport:
    """Evaluate all bounds for a solved instance.

    The spectral sets are ``sigma_i = spec(A_i)`` and
    ``sigma'_i = spec(Lambda_i)``. Pairs of sets that touch make the
    bounds relying on them inapplicable.
    """
    s0, s1 = inst.sigma0(), inst.sigma1()
    p0, p1 = sol.sigma0_prime, sol.sigma1_prime
    disps = {
        "sigma": _safe_classify(s0, s1, tol),
        "delta0": _safe_classify(s0, p1, tol),
        "delta1": _safe_classify(s1, p0, tol),
        "prime": _safe_classify(p0, p1, tol),
    }

    def dist(key):
        return disps[key].d if disps[key] is not None else 0.0

    d, delta0, delta1, delta_hat = (dist(k) for k in ("sigma", "delta0", "delta1", "prime"))
    lhs_of = {TAN: angles.norm_tan, SIN2: angles.norm_sin2, TAN2: angles.norm_tan2,
              NORM_K: sol.norm_k}
    records = []
    for e in bound_catalogue(inst.norm_v, d, delta0, delta1, delta_hat, disps,
                             norm_b=inst.norm_b):
        lhs = lhs_of[e.subject]
        slack = e.rhs - lhs if e.applicable else math.nan
        records.append(BoundRecord(e.bound_id, e.applicable, lhs, e.rhs, slack,
                                   e.disposition_used))
    return BoundReport(records, d, delta0, delta1, delta_hat, inst.norm_v, tol.slack)


# -- a priori helpers -------------------------------------------------------

@dataclass(frozen=True)
class TsuffResult:
    cond_i: bool
    cond_ii: bool
    gap_sum: float
    gaps: list


def tsuff_check(inst: BlockInstance, tol: ToleranceConfig = DEFAULT_TOLERANCES) -> TsuffResult:
    """Sufficient conditions for a contractive solution.

    ``cond_i`` is ``||V|| < d/pi``. ``cond_ii`` is ``||V|| < d/2`` together
    with finiteness of ``sum 1/(b_n - a_n)`` over the gaps separating the
    two spectra; in finite dimensions the sum is always finite.

    Raises
    ------
    SetsIntersect
        If ``spec(A0)`` and ``spec(A1)`` meet.
    """
    s0, s1 = inst.sigma0(), inst.sigma1()
    disp = classify_disposition(s0, s1, tol)
    gaps = enumerate_separating_gaps(s0, s1, tol)
    gap_sum = float(sum(1.0 / (b - a) for a, b in gaps))
    v = inst.norm_v
    return TsuffResult(
        cond_i=v < disp.d / math.pi,
        cond_ii=v < disp.d / 2 and math.isfinite(gap_sum),
        gap_sum=gap_sum,
        gaps=gaps,
    )


def apriori_deltahat_lower(norm_v: float, d: float) -> float:
    """Lower bound ``sqrt(d^2 - 4 ||V||^2)`` on ``dist(sigma'_0, sigma'_1)``.

    Raises
    ------
    TooLargePerturbation
        If ``||V|| > d/2``.
    """
    if norm_v > d / 2:
        raise TooLargePerturbation(f"||V|| = {norm_v} exceeds d/2 = {d / 2}")
    return math.sqrt(max(d * d - 4 * norm_v * norm_v, 0.0))


__all__ = [
    "BOUND_IDS", "BoundRecord", "BoundReport", "CatalogueEntry", "TsuffResult",
    "apriori_deltahat_lower", "bound_catalogue", "check_bounds", "fmt17",
    "tan_half_arcsin", "tan_half_arctan", "tanh_half_artanh", "tsuff_check",
]
