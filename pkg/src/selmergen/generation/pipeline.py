"""
The retry-until-success generation loop and the standalone validator.
"""

import logging
from typing import Optional

from selmergen.arithmetic.field import PrimeModulus
from selmergen.arithmetic.hash_stream import (LABEL_F2, LABEL_F3, LABEL_U,
                                              LabeledStream)
from selmergen.curves.counting import (OrderData, PointCounter,
                                       check_order_consistency, count_points)
from selmergen.curves.reconcile import CurveParams, SingularRetry, reconcile
from selmergen.curves.validate import (CHECK_NAMES, ValidationReport,
                                       validate_all)
from selmergen.descent.cubic import accept_cubic
from selmergen.descent.quartic import accept_quartic
from selmergen.helpers.errors import MaxTrialsExceeded, SingularInput
from selmergen.main import COUNTING_BOUND, FACTOR_WORK_BOUND
from selmergen.models.config import GenerationConfig
from selmergen.models.policy import Policy
from selmergen.models.transcript import (CubicRecord, QuarticRecord,
                                         ReconciliationRecord, StreamCursors,
                                         Transcript)

logger = logging.getLogger(__name__)

TRIAL_REJECTION_CAUSES = ("singular",) + CHECK_NAMES

WARNING_NOT_3_MOD_4 = "p != 3 (mod 4)"


def generate(config: GenerationConfig,
             counter: Optional[PointCounter] = None,
             trial_limit: Optional[int] = None) -> Transcript:
    """
    Run trials until a curve passes every validation filter.

    Each trial accepts a quartic and a cubic, reconciles their invariants,
    instantiates the curve, counts points and validates. A singular blend
    or a failed filter starts the next trial; the streams continue where
    the failed trial left them.

    Parameters
    ----------
    config : GenerationConfig
        Public inputs, policy and settings.
    counter : callable, optional
        External point counter for primes beyond the counting bound.
    trial_limit : int, optional
        Stop after this many trials instead of ``config.max_trials``; used
        for replays. The default is None.

    Raises
    ------
    MaxTrialsExceeded
        If no trial within the budget was accepted.
    StageBudgetExceeded
        If a sampling stage rejected its whole draw budget.
    CountingUnavailable
        If p exceeds the counting bound and no counter is given.

    Returns
    -------
    Transcript
        The canonical record of the accepted trial, digest included.

    """
    ctx = config.seed_context
    settings = config.settings
    warnings = []
    if not ctx.modulus.admissible:
        logger.warning("p = %d is not 3 mod 4", ctx.p)
        warnings.append(WARNING_NOT_3_MOD_4)

    u_stream = LabeledStream(ctx, LABEL_U)
    f2_stream = LabeledStream(ctx, LABEL_F2)
    f3_stream = LabeledStream(ctx, LABEL_F3)
    statistics = dict.fromkeys(TRIAL_REJECTION_CAUSES, 0)
    limit = config.max_trials if trial_limit is None else trial_limit

    for trial in range(limit):
        quartic = accept_quartic(f2_stream, u_stream, settings)
        cubic = accept_cubic(f3_stream, u_stream, settings)
        outcome = reconcile(ctx, quartic.invariants.c4_2,
                            cubic.invariants.c4_3, quartic.invariants.c6_2,
                            cubic.invariants.c6_3)
        if isinstance(outcome, SingularRetry):
            statistics["singular"] += 1
            logger.info("trial %d: singular blend", trial)
            continue

        curve = outcome.curve
        od = count_points(curve, counter, settings.counting_bound,
                          settings.factor_work_bound)
        check_order_consistency(curve, od, u_stream,
                                settings.order_check_points)
        report = validate_all(curve, od, config.policy,
                              settings.factor_work_bound)
        if not report.passed:
            for name in report.failed():
                statistics[name] += 1
            logger.info("trial %d: rejected by %s", trial,
                        ", ".join(report.failed()))
            continue

        logger.info("trial %d: accepted c4=%d c6=%d N=%d", trial,
                    curve.c4.value, curve.c6.value, od.n)
        transcript = Transcript(
            p=ctx.p, ds=ctx.ds, sigma=ctx.sigma.hex(), trial_index=trial,
            stream_cursors=StreamCursors(U=u_stream.cursor,
                                         F2=f2_stream.cursor,
                                         F3=f3_stream.cursor),
            quartic=QuarticRecord.from_acceptance(quartic),
            cubic=CubicRecord.from_acceptance(cubic),
            reconciliation=ReconciliationRecord.from_reconciliation(outcome),
            order_data=od, validation=report, policy=config.policy,
            config=settings, trial_rejections=statistics,
            warnings=tuple(warnings))
        return transcript.with_digest()

    raise MaxTrialsExceeded(limit, statistics)


def validate_external(p: int, c4: int, c6: int,
                      policy: Optional[Policy] = None,
                      counter: Optional[PointCounter] = None,
                      counting_bound: int = COUNTING_BOUND,
                      work_bound: int = FACTOR_WORK_BOUND
                      ) -> tuple[CurveParams, OrderData, ValidationReport]:
    """
    Count and validate a curve given by its invariants, bypassing
    generation.

    Parameters
    ----------
    p : int
        A prime >= 5.
    c4, c6 : int
        Invariants; the curve is ``y^2 = x^3 - 27 c4 x - 54 c6``.
    policy : Policy, optional
        Defaults to :meth:`Policy.for_modulus`.
    counter : callable, optional
        External point counter.
    counting_bound, work_bound : int, optional
        Counting and factorization limits.

    Raises
    ------
    SingularInput
        If ``delta = 0`` or the Weierstrass model is singular.

    Returns
    -------
    tuple
        ``(curve, order_data, report)``.

    """
    modulus = PrimeModulus(p=p)
    curve = CurveParams.from_invariants(modulus, c4, c6)
    if not curve.is_nonsingular:
        raise SingularInput(
            f"(c4, c6) = ({c4}, {c6}) defines a singular curve over F_{p}")
    if policy is None:
        policy = Policy.for_modulus(modulus)
    od = count_points(curve, counter, counting_bound, work_bound)
    return curve, od, validate_all(curve, od, policy, work_bound)
