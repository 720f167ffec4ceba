"""
Group orders of the curve and of its quadratic twist.

The built-in counter sums Legendre symbols over all of F_p, vectorized
with numpy in blocks; it is meant for desk-scale primes. Beyond
``counting_bound`` an external counter must be supplied, either any
callable ``(p, A, B) -> N`` or a :class:`SubprocessCounter`.
"""

import logging
import math
import subprocess
from typing import Callable, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict

from selmergen.arithmetic.field import smallest_nonresidue
from selmergen.arithmetic.hash_stream import LabeledStream
from selmergen.arithmetic.integers import Factorization, factorize
from selmergen.curves.group import random_point, scalar_mul
from selmergen.curves.reconcile import CurveParams
from selmergen.helpers.errors import (CountingInconsistent,
                                      CountingUnavailable, WorkBoundExceeded)
from selmergen.helpers.helper_functions import HexInt
from selmergen.main import COUNTING_BOUND, FACTOR_WORK_BOUND

logger = logging.getLogger(__name__)

PointCounter = Callable[[int, int, int], int]

_BLOCK = 1 << 20


class OrderData(BaseModel):
    """
    Group orders and their decompositions.

    Attributes
    ----------
    n : int
        ``#E(F_p)``.
    trace : int
        ``p + 1 - n``.
    n_twist : int
        ``2p + 2 - n``, the order of the quadratic twist.
    factors, twist_factors : Factorization
        Factorizations of n and n_twist.
    r, h : int
        Largest prime factor of n and the cofactor ``n / r``.
    r_twist, h_twist : int
        The same for the twist.
    twist_nonresidue : int
        Smallest quadratic non-residue g; the twist model is
        ``y^2 = x^3 + A g^2 x + B g^3``.

    Notes
    -----
    * With an incomplete factorization r is the largest prime found, or 0.

    """
    n: HexInt
    trace: HexInt
    n_twist: HexInt
    factors: Factorization
    twist_factors: Factorization
    r: HexInt
    h: HexInt
    r_twist: HexInt
    h_twist: HexInt
    twist_nonresidue: HexInt

    model_config = ConfigDict(extra="forbid", frozen=True)

    @property
    def complete(self) -> bool:
        return (self.factors.cofactor_complete
                and self.twist_factors.cofactor_complete)


class SubprocessCounter:
    """
    External point counter speaking the line protocol: decimal p, A and B
    on three stdin lines, decimal N on stdout.

    Parameters
    ----------
    command : sequence of str
        The command line to run, e.g. ``["gp", "-q", "sea.gp"]``.
    timeout : float, optional
        Seconds to wait for the counter. The default is 3600.

    """

    def __init__(self, command: Sequence[str], timeout: float = 3600.0):
        self.command = list(command)
        self.timeout = timeout

    def __call__(self, p: int, A: int, B: int) -> int:
        try:
            completed = subprocess.run(
                self.command, input=f"{p}\n{A}\n{B}\n", capture_output=True,
                text=True, timeout=self.timeout, check=True)
        except subprocess.CalledProcessError as exc:
            raise CountingUnavailable(
                f"point counter {self.command!r} exited with status "
                f"{exc.returncode}: {(exc.stderr or '').strip()}") from exc
        except subprocess.TimeoutExpired as exc:
            raise CountingUnavailable(
                f"point counter {self.command!r} timed out after "
                f"{self.timeout} s") from exc
        except OSError as exc:
            raise CountingUnavailable(
                f"point counter {self.command!r} could not be started: "
                f"{exc}") from exc
        try:
            return int(completed.stdout.strip())
        except ValueError as exc:
            raise CountingInconsistent(
                f"point counter {self.command!r} printed "
                f"{completed.stdout.strip()!r} instead of a group order: "
                f"{completed.stderr.strip()}") from exc

    def __repr__(self) -> str:
        return f"SubprocessCounter({self.command!r})"


def naive_count(p: int, A: int, B: int) -> int:
    """
    ``p + 1 + sum over x of legendre(x^3 + A x + B)``.

    A table of squares mod p is built once, then the right-hand side is
    evaluated on blocks of abscissae; intermediate products stay below
    2^63 for p < 2^31.
    """
    if p >= 1 << 31:
        raise ValueError("the built-in counter handles p < 2^31 only")
    is_square = np.zeros(p, dtype=bool)
    for start in range(0, p, _BLOCK):
        x = np.arange(start, min(start + _BLOCK, p), dtype=np.int64)
        is_square[x * x % p] = True

    total = 0
    for start in range(0, p, _BLOCK):
        x = np.arange(start, min(start + _BLOCK, p), dtype=np.int64)
        rhs = (x * x % p * x % p + A * x % p + B) % p
        chi = np.where(rhs == 0, 0, np.where(is_square[rhs], 1, -1))
        total += int(chi.sum())
    return p + 1 + total


def _factor(n: int, work_bound: int) -> Factorization:
    try:
        return factorize(n, work_bound)
    except WorkBoundExceeded as e:
        logger.warning("factorization of %d incomplete", n)
        return e.partial


def _decompose(factors: Factorization) -> tuple[int, int]:
    r = factors.largest_prime() or 0
    if r == 0:
        return 0, 0
    return r, factors.value // r


def count_points(curve: CurveParams, counter: Optional[PointCounter] = None,
                 counting_bound: int = COUNTING_BOUND,
                 work_bound: int = FACTOR_WORK_BOUND) -> OrderData:
    """
    Count points and fill in the order data of curve and twist.

    Parameters
    ----------
    curve : CurveParams
        A non-singular curve.
    counter : callable, optional
        External counter ``(p, A, B) -> N``, used when p exceeds
        ``counting_bound``. The default is None.
    counting_bound : int, optional
        Largest p for the built-in counter. The default is 2^26.
    work_bound : int, optional
        Factorization work bound. The default is 2^20.

    Raises
    ------
    CountingUnavailable
        If p exceeds the bound and no counter is given.
    CountingInconsistent
        If the returned order violates the Hasse bound.

    Returns
    -------
    OrderData
        Orders, trace and factorizations.

    """
    p = curve.p
    A, B = curve.A.value, curve.B.value
    if p <= counting_bound:
        n = naive_count(p, A, B)
    elif counter is not None:
        logger.info("using external point counter %r", counter)
        n = int(counter(p, A, B))
    else:
        raise CountingUnavailable(
            f"p has {p.bit_length()} bits, beyond the built-in counting "
            f"bound; register an external counter")

    trace = p + 1 - n
    if trace * trace > 4 * p:
        raise CountingInconsistent(
            f"order {n} violates the Hasse bound for p = {p}")

    n_twist = 2 * p + 2 - n
    factors = _factor(n, work_bound)
    twist_factors = _factor(n_twist, work_bound)
    r, h = _decompose(factors)
    r_twist, h_twist = _decompose(twist_factors)
    return OrderData(n=n, trace=trace, n_twist=n_twist, factors=factors,
                     twist_factors=twist_factors, r=r, h=h, r_twist=r_twist,
                     h_twist=h_twist, twist_nonresidue=smallest_nonresidue(p))


def check_order_consistency(curve: CurveParams, od: OrderData,
                            u_stream: LabeledStream, points: int) -> None:
    """
    Verify that ``n P = O`` on the curve and ``n_twist P' = O`` on the twist
    model for ``points`` points drawn from the "U" stream each.

    Raises
    ------
    CountingInconsistent
        If some point is not annihilated.

    """
    twist = curve.twist(od.twist_nonresidue)
    for model, order, name in ((curve, od.n, "curve"),
                               (twist, od.n_twist, "twist")):
        for _ in range(points):
            P = random_point(model, u_stream)
            if not scalar_mul(order, P, model).is_infinity:
                raise CountingInconsistent(
                    f"a point of the {name} is not annihilated by {order}")


def hasse_interval(p: int) -> tuple[int, int]:
    """Smallest and largest possible group order over F_p."""
    width = math.isqrt(4 * p)
    return p + 1 - width, p + 1 + width
