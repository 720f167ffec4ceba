"""
The validation battery: group order and cofactor, twist security,
anomalous traces, small CM discriminants and small embedding degrees.
"""

import logging
from typing import Optional

from pydantic import BaseModel, ConfigDict

from selmergen.arithmetic.integers import factorize, is_prime
from selmergen.curves.counting import OrderData
from selmergen.curves.reconcile import CurveParams
from selmergen.helpers.errors import IncompleteFactorization, WorkBoundExceeded
from selmergen.helpers.helper_functions import HexInt
from selmergen.main import FACTOR_WORK_BOUND
from selmergen.models.policy import Policy

logger = logging.getLogger(__name__)

CHECK_NAMES = ("order", "twist", "anomalous", "cm", "embedding")


class CheckResult(BaseModel):
    """Outcome of one filter with a human-readable reason."""
    passed: bool
    reason: str

    model_config = ConfigDict(extra="forbid", frozen=True)


class ValidationReport(BaseModel):
    """
    Aggregated outcome of all five filters.

    Attributes
    ----------
    order_check, twist_check, anomalous_check, cm_check, embedding_check :
        CheckResult
        The individual filters.
    order_data : OrderData
        The orders the filters were applied to.
    cm_fundamental_disc : int or None
        Fundamental discriminant D0 of ``t^2 - 4p``; None if the filter
        is disabled or the factorization was inconclusive.
    embedding_k_found : int or None
        Smallest k <= k_max with ``p^k = 1 (mod r)``, if any.
    passed : bool
        True iff all five filters passed.

    """
    order_check: CheckResult
    twist_check: CheckResult
    anomalous_check: CheckResult
    cm_check: CheckResult
    embedding_check: CheckResult
    order_data: OrderData
    cm_fundamental_disc: Optional[HexInt] = None
    embedding_k_found: Optional[HexInt] = None

    model_config = ConfigDict(extra="forbid", frozen=True)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks().values())

    def checks(self) -> dict[str, CheckResult]:
        return {name: getattr(self, f"{name}_check") for name in CHECK_NAMES}

    def failed(self) -> list[str]:
        return [name for name, check in self.checks().items()
                if not check.passed]


def _prime_of(od: OrderData) -> int:
    # n + n_twist = 2p + 2
    return (od.n + od.n_twist - 2) // 2


def _large_prime_rule(p: int, r: int, h: int, profile: str,
                      allowed: Optional[tuple[int, ...]],
                      min_bits: Optional[int], label: str) -> CheckResult:
    if not is_prime(r):
        return CheckResult(passed=False, reason=f"{label} has no prime factor")
    if profile == "demo":
        if r * r <= p:
            return CheckResult(passed=False,
                               reason=f"{label} prime {r} <= sqrt(p)")
        return CheckResult(passed=True,
                           reason=f"{label} = {h} * {r}, {r} > sqrt(p)")

    if allowed is not None and h not in allowed:
        return CheckResult(passed=False,
                           reason=f"{label} cofactor {h} not in {list(allowed)}")
    if min_bits is not None and r.bit_length() < min_bits:
        return CheckResult(
            passed=False,
            reason=f"{label} prime has {r.bit_length()} < {min_bits} bits")
    return CheckResult(passed=True, reason=f"{label} = {h} * {r}")


def check_order(od: OrderData, policy: Policy) -> CheckResult:
    """
    Cofactor and prime-size rule for ``#E = h r``.

    strict: ``h`` in ``allowed_cofactors``, ``r`` prime of at least
    ``min_r_bits`` bits. demo: ``r`` prime and ``r > sqrt(p)``.

    Raises
    ------
    IncompleteFactorization
        If the factorization of the order is not complete.

    """
    if not od.factors.cofactor_complete:
        raise IncompleteFactorization("curve order is not fully factored")
    return _large_prime_rule(_prime_of(od), od.r, od.h, policy.profile,
                             policy.allowed_cofactors, policy.min_r_bits,
                             "#E")


def check_twist(od: OrderData, policy: Policy) -> CheckResult:
    """The rule of :func:`check_order` applied to the quadratic twist."""
    if not od.twist_factors.cofactor_complete:
        raise IncompleteFactorization("twist order is not fully factored")
    return _large_prime_rule(_prime_of(od), od.r_twist, od.h_twist, policy.profile,
                             policy.twist_allowed_cofactors,
                             policy.twist_min_r_bits, "#E'")


def check_anomalous(t: int, policy: Policy) -> CheckResult:
    """Fail iff the trace of Frobenius is one of ``exclude_traces``."""
    if t in policy.exclude_traces:
        return CheckResult(passed=False, reason=f"excluded trace t = {t}")
    return CheckResult(passed=True, reason=f"trace t = {t}")


def fundamental_discriminant(D: int,
                            work_bound: int = FACTOR_WORK_BOUND) -> int:
    """
    Fundamental discriminant D0 of a negative discriminant, ``D = f^2 D0``.

    Raises
    ------
    WorkBoundExceeded
        If ``|D|`` cannot be factored within ``work_bound`` rho steps.

    """
    squarefree = 1
    for prime, exponent in factorize(abs(D), work_bound).factors:
        if exponent % 2:
            squarefree *= prime
    d0 = -squarefree
    return d0 if d0 % 4 == 1 else 4 * d0


def check_cm(t: int, p: int, policy: Policy,
             work_bound: int = FACTOR_WORK_BOUND
             ) -> tuple[CheckResult, Optional[int]]:
    """
    Exclude complex multiplication by a small discriminant.

    ``D = t^2 - 4p`` is written as ``f^2 D0`` with D0 fundamental; the
    check fails iff ``|D0| <= cm_disc_bound``.

    Returns
    -------
    tuple
        The check result and D0 (None when disabled or inconclusive).

    """
    if policy.cm_disc_bound == 0:
        return CheckResult(passed=True, reason="CM filter disabled"), None
    D = t * t - 4 * p
    if D >= 0:
        raise ValueError(f"trace {t} violates the Hasse bound for p = {p}")
    try:
        d0 = fundamental_discriminant(D, work_bound)
    except WorkBoundExceeded:
        logger.warning("CM discriminant %d could not be factored", D)
        return CheckResult(passed=False,
                           reason="inconclusive: t^2 - 4p not factored"), None
    if abs(d0) <= policy.cm_disc_bound:
        return CheckResult(passed=False,
                           reason=f"small CM discriminant D0 = {d0}"), d0
    return CheckResult(passed=True, reason=f"CM discriminant D0 = {d0}"), d0


def check_embedding(r: int, p: int,
                    policy: Policy) -> tuple[CheckResult, Optional[int]]:
    """
    Scan embedding degrees ``k = 1..k_max`` for ``p^k = 1 (mod r)``.

    Returns
    -------
    tuple
        The check result and the smallest such k, or None.

    """
    if not is_prime(r) or p % r == 0:
        return CheckResult(passed=False,
                           reason=f"embedding degree undefined for r = {r}"), None
    x = 1
    base = p % r
    for k in range(1, policy.k_max + 1):
        x = x * base % r
        if x == 1:
            return CheckResult(passed=False,
                               reason=f"embedding degree k = {k}"), k
    return CheckResult(passed=True,
                       reason=f"no embedding degree k <= {policy.k_max}"), None


def _guarded(check, *args) -> CheckResult:
    try:
        return check(*args)
    except IncompleteFactorization as e:
        return CheckResult(passed=False, reason=f"inconclusive: {e}")


def validate_all(curve: CurveParams, od: OrderData,
                 policy: Policy,
                 work_bound: int = FACTOR_WORK_BOUND) -> ValidationReport:
    """
    Run all five filters without short-circuiting.

    Parameters
    ----------
    curve : CurveParams
        A non-singular curve.
    od : OrderData
        Its order data.
    policy : Policy
        The acceptance policy.
    work_bound : int, optional
        Rho steps allowed when factoring t^2 - 4p for the CM check.

    Raises
    ------
    ValueError
        If the curve is singular (a caller bug).

    Returns
    -------
    ValidationReport
        The full report; ``passed`` tells whether the curve is accepted.

    """
    if not curve.is_nonsingular:
        raise ValueError("validate_all requires a non-singular curve")
    p = curve.p
    cm_check, d0 = check_cm(od.trace, p, policy, work_bound)
    embedding_check, k = check_embedding(od.r, p, policy)
    report = ValidationReport(
        order_check=_guarded(check_order, od, policy),
        twist_check=_guarded(check_twist, od, policy),
        anomalous_check=check_anomalous(od.trace, policy),
        cm_check=cm_check,
        embedding_check=embedding_check,
        order_data=od,
        cm_fundamental_disc=d0,
        embedding_k_found=k,
    )
    logger.debug("validation of c4=%d c6=%d: %s", curve.c4.value,
                 curve.c6.value, report.failed() or "passed")
    return report
