"""
Independent verification of a transcript.

Verification has two halves. Identity checks re-test the arithmetic
relations between recorded fields without re-running anything. The
re-derivation replays the whole pipeline from (p, ds, sigma) with the
recorded settings and compares every recorded section in stage order.
"""

import logging
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from selmergen.arithmetic.integers import is_prime
from selmergen.curves.counting import PointCounter
from selmergen.curves.reconcile import CurveParams
from selmergen.curves.validate import ValidationReport, validate_all
from selmergen.generation.pipeline import generate
from selmergen.helpers.errors import CountingUnavailable, SelmerGenError
from selmergen.models.policy import Policy
from selmergen.models.transcript import Transcript, compute_digest

logger = logging.getLogger(__name__)

# sections compared after re-derivation, in pipeline order
STAGES = ("quartic", "cubic", "reconciliation", "order_data", "validation",
          "trial_index", "stream_cursors", "trial_rejections", "warnings")


class Divergence(BaseModel):
    """First recorded field that differs from its re-derived value."""
    stage: str
    field: str
    recorded: Any = None
    derived: Any = None

    model_config = ConfigDict(extra="forbid", frozen=True)

    def __str__(self) -> str:
        return (f"{self.stage}: {self.field} recorded {self.recorded!r}, "
                f"re-derived {self.derived!r}")


class VerifyReport(BaseModel):
    """
    Outcome of :func:`verify`.

    Attributes
    ----------
    identity_failures : tuple of str
        Names of violated internal identities.
    divergence : Divergence or None
        First disagreement found by re-derivation.
    partial : bool
        True when re-derivation could not run (point counting unavailable).
    override_report : ValidationReport or None
        The recorded curve validated under the override policy.

    """
    identity_failures: tuple[str, ...] = ()
    divergence: Optional[Divergence] = None
    partial: bool = False
    override_report: Optional[ValidationReport] = None

    model_config = ConfigDict(extra="forbid", frozen=True)

    @property
    def agreement(self) -> bool:
        """True iff nothing failed; a partial report may still agree."""
        override_ok = self.override_report is None or self.override_report.passed
        return (not self.identity_failures and self.divergence is None
                and override_ok)

    @property
    def passed(self) -> bool:
        return self.agreement and not self.partial


def identity_failures(tr: Transcript) -> list[str]:
    """
    Check the arithmetic identities a transcript must satisfy.

    Returns
    -------
    list of str
        Names of the failed identities; empty if all hold.

    """
    failures = []
    if tr.digest != compute_digest(tr):
        failures.append("digest")
    p = tr.p
    if p < 5 or not is_prime(p):
        failures.append("p prime")
        return failures

    rec = tr.reconciliation
    c4, c6 = rec.c4, rec.c6
    if rec.delta != -16 * (4 * c4**3 + 27 * c6**2) % p:
        failures.append("delta = -16 (4 c4^3 + 27 c6^2)")
    if rec.A != -27 * c4 % p or rec.B != -54 * c6 % p:
        failures.append("A = -27 c4, B = -54 c6")
    if rec.delta == 0 or (c4**3 - c6**2) % p == 0:
        failures.append("non-singular curve")
    elif rec.j * rec.delta % p != c4**3 % p:
        failures.append("j = c4^3 / delta")
    if (rec.c4 != (2 * tr.quartic.c4 + 3 * rec.c4_mix) % p
            or rec.c6 != (2 * tr.quartic.c6 + 3 * rec.c6_mix) % p):
        failures.append("c = 2 c^(2) + 3 c~")
    if (tr.quartic.c4 != 16 * tr.quartic.I % p
            or tr.quartic.c6 != 32 * tr.quartic.J % p):
        failures.append("quartic normalization")

    od = tr.order_data
    if od.n + od.n_twist != 2 * p + 2:
        failures.append("N + N' = 2p + 2")
    if od.trace != p + 1 - od.n:
        failures.append("t = p + 1 - N")
    if od.trace**2 > 4 * p:
        failures.append("Hasse bound")
    for label, factors, n, r, h in (("N", od.factors, od.n, od.r, od.h),
                                    ("N'", od.twist_factors, od.n_twist,
                                     od.r_twist, od.h_twist)):
        if factors.value != n or not all(map(is_prime, factors.primes)):
            failures.append(f"factorization of {label}")
        if h * r != n:
            failures.append(f"h r = {label}")
    if tr.validation.order_data != od:
        failures.append("validation order data")
    if not tr.validation.passed:
        failures.append("validation passed")
    return failures


def _first_difference(recorded: Any, derived: Any, path: str
                      ) -> Optional[tuple[str, Any, Any]]:
    if isinstance(recorded, dict) and isinstance(derived, dict):
        for key in sorted(set(recorded) | set(derived)):
            found = _first_difference(recorded.get(key), derived.get(key),
                                      f"{path}.{key}")
            if found:
                return found
        return None
    if (isinstance(recorded, list) and isinstance(derived, list)
            and len(recorded) == len(derived)):
        for i, (a, b) in enumerate(zip(recorded, derived)):
            found = _first_difference(a, b, f"{path}[{i}]")
            if found:
                return found
        return None
    if recorded != derived:
        return path, recorded, derived
    return None


def compare(recorded: Transcript, derived: Transcript) -> Optional[Divergence]:
    """First differing field of two transcripts, in stage order."""
    a = recorded.model_dump(mode="json")
    b = derived.model_dump(mode="json")
    for stage in STAGES:
        found = _first_difference(a[stage], b[stage], stage)
        if found:
            field, x, y = found
            return Divergence(stage=stage, field=field, recorded=x, derived=y)
    return None


def verify(tr: Transcript, policy_override: Optional[Policy] = None,
           counter: Optional[PointCounter] = None) -> VerifyReport:
    """
    Verify a transcript by identity checks and full re-derivation.

    Parameters
    ----------
    tr : Transcript
        The transcript to audit.
    policy_override : Policy, optional
        Additionally validate the recorded curve under this policy. The
        replay always uses the recorded policy.
    counter : callable, optional
        External point counter for primes beyond the counting bound.

    Returns
    -------
    VerifyReport
        Identity failures, the first divergence, and whether the report
        is partial. Never raises for a malformed or tampered transcript.

    """
    failures = identity_failures(tr)
    for name in failures:
        logger.warning("identity check failed: %s", name)

    try:
        config = tr.generation_config()
    except ValidationError as e:
        return VerifyReport(
            identity_failures=failures,
            divergence=Divergence(stage="inputs", field="config",
                                  recorded=str(e.errors()[0]["msg"])))

    try:
        derived = generate(config, counter, trial_limit=min(
            tr.policy.max_trials, tr.trial_index + 1))
    except CountingUnavailable as e:
        logger.warning("re-derivation skipped: %s", e)
        return VerifyReport(identity_failures=failures, partial=True)
    except (SelmerGenError, ValueError) as e:
        return VerifyReport(
            identity_failures=failures,
            divergence=Divergence(stage="trial_index", field="trial_index",
                                  recorded=str(tr.trial_index),
                                  derived=type(e).__name__))

    divergence = compare(tr, derived)
    if divergence is not None:
        logger.warning("divergence at %s", divergence)

    override_report = None
    if policy_override is not None:
        curve = CurveParams.from_invariants(config.seed_context.modulus,
                                            tr.reconciliation.c4,
                                            tr.reconciliation.c6)
        try:
            override_report = validate_all(curve, tr.order_data,
                                           policy_override,
                                           config.settings.factor_work_bound)
        except ValueError as e:
            failures.append(f"override validation: {e}")
    return VerifyReport(identity_failures=failures, divergence=divergence,
                        override_report=override_report)
