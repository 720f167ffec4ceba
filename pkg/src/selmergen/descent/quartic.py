"""
The 2-descent artifact: binary quartics

    f(x, z) = a x^4 + b x^3 z + c x^2 z^2 + d x z^3 + e z^4

sampled from the "F2" stream, filtered for degeneracy and local
solubility, and mapped to Weierstrass-normalized invariants
``(c4_2, c6_2) = (16 I, 32 J)``.
"""

import logging
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from pydantic import BaseModel, ConfigDict

from selmergen.arithmetic.field import Fe, fe_sqrt, legendre, legendre_int
from selmergen.arithmetic.hash_stream import LABEL_F2, LabeledStream
from selmergen.helpers.errors import StageBudgetExceeded
from selmergen.helpers.helper_functions import HexInt
from selmergen.main import DEFAULT_ELL_SET
from selmergen.models.config import GenerationSettings

logger = logging.getLogger(__name__)

QUARTIC_REJECTION_CAUSES = ("zero", "square", "singular", "insoluble")


class BinaryQuartic(BaseModel):
    """
    Binary quartic form over F_p.

    Attributes
    ----------
    a, b, c, d, e : Fe
        Coefficients of x^4, x^3 z, x^2 z^2, x z^3 and z^4.

    """
    a: Fe
    b: Fe
    c: Fe
    d: Fe
    e: Fe

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)

    @classmethod
    def from_coefficients(cls, coefficients: Sequence[Fe]) -> "BinaryQuartic":
        a, b, c, d, e = coefficients
        return cls(a=a, b=b, c=c, d=d, e=e)

    @property
    def coefficients(self) -> tuple[Fe, Fe, Fe, Fe, Fe]:
        return (self.a, self.b, self.c, self.d, self.e)

    @property
    def p(self) -> int:
        return self.a.p

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def evaluate(self, x: int, z: int) -> Fe:
        total = 0
        for i, coefficient in enumerate(self.coefficients):
            total += coefficient.value * pow(x, 4 - i) * pow(z, i)
        return self.a._new(total)


class QuarticInvariants(BaseModel):
    """
    Classical SL2 invariants of a binary quartic and their normalization.

    Attributes
    ----------
    I : Fe
        Degree-2 invariant ``12ae - 3bd + c^2``.
    J : Fe
        Degree-3 invariant ``72ace + 9bcd - 27ad^2 - 27b^2e - 2c^3``.
    c4_2 : Fe
        ``2^4 I``.
    c6_2 : Fe
        ``2^5 J``.

    """
    I: Fe
    J: Fe
    c4_2: Fe
    c6_2: Fe

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)


class QuarticAcceptance(BaseModel):
    """Outcome of the quartic stage of one trial."""
    form: BinaryQuartic
    invariants: QuarticInvariants
    rejections: dict[str, HexInt]
    first_cursor: int

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)


def sample_quartic(stream: LabeledStream) -> BinaryQuartic:
    """
    Draw the five coefficients a, b, c, d, e from the "F2" stream.

    Parameters
    ----------
    stream : LabeledStream
        Stream with label ``b"F2"``; its cursor advances by exactly 5.

    Raises
    ------
    ValueError
        If the stream carries another label.

    Returns
    -------
    BinaryQuartic
        The sampled form.

    """
    if stream.label != LABEL_F2:
        raise ValueError(f"quartics are sampled from F2, not {stream.label!r}")
    return BinaryQuartic.from_coefficients(stream.take(5))


def quartic_invariants(f: BinaryQuartic) -> QuarticInvariants:
    """
    Compute I, J and the normalized pair (c4_2, c6_2).

    For ``f = x^3 z + A x z^3 + B z^4`` this gives ``(-48A, -864B)``, the
    (c4, c6) of ``y^2 = x^3 + A x + B``.

    Parameters
    ----------
    f : BinaryQuartic
        Any quartic.

    Returns
    -------
    QuarticInvariants
        The invariants reduced mod p.

    """
    a, b, c, d, e = f.coefficients
    I = 12 * a * e - 3 * b * d + c * c
    J = (72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * b * b * e
         - 2 * c * c * c)
    return QuarticInvariants(I=I, J=J, c4_2=16 * I, c6_2=32 * J)


def is_perfect_square(f: BinaryQuartic) -> bool:
    """
    Decide whether ``f = q^2`` for a binary quadratic form q over F_p.

    With ``q = alpha x^2 + beta x z + gamma z^2`` the coefficients of q are
    solved for from the top down and the remaining ones are checked.

    Parameters
    ----------
    f : BinaryQuartic
        A quartic that is not identically zero.

    Returns
    -------
    bool
        True iff f is the square of a quadratic form.

    """
    a, b, c, d, e = f.coefficients
    if a:
        if legendre(a) != 1:
            return False
        alpha = fe_sqrt(a)
        beta = b / (2 * alpha)
        gamma = (c - beta * beta) / (2 * alpha)
        return 2 * beta * gamma == d and gamma * gamma == e

    # q = beta x z + gamma z^2
    if b:
        return False
    if c:
        if legendre(c) != 1:
            return False
        beta = fe_sqrt(c)
        gamma = d / (2 * beta)
        return gamma * gamma == e
    return not d and legendre(e) >= 0


def is_singular_quartic(inv: QuarticInvariants) -> bool:
    """
    True iff the quartic has a repeated root over the algebraic closure,
    i.e. ``4 I^3 - J^2 = 0`` (valid for p > 3).
    """
    return not (4 * inv.I ** 3 - inv.J ** 2)


@lru_cache(maxsize=None)
def _squares(ell: int) -> frozenset[int]:
    return frozenset(t * t % ell for t in range(ell))


def quartic_soluble_mod_ell(coefficients: Sequence[int], ell: int) -> bool:
    """
    Exhaustive scan of P^1(F_ell) for a point where f(x, z) is a square
    (zero included).

    Parameters
    ----------
    coefficients : sequence of int
        Integer lifts of (a, b, c, d, e); they are reduced mod ell.
    ell : int
        A small prime.

    Returns
    -------
    bool
        True iff such a point exists.

    """
    squares = _squares(ell)
    a, b, c, d, e = (k % ell for k in coefficients)
    if a in squares:  # the point (1 : 0)
        return True
    for x in range(ell):
        value = (((a * x + b) * x + c) * x + d) * x + e
        if value % ell in squares:
            return True
    return False


def _fp_abscissae(p: int, search_bound: int, u_stream: LabeledStream,
                  full_scan: bool) -> Iterable[int]:
    if full_scan:
        yield from range(1, p)
        return
    for _ in range(min(search_bound, p)):
        yield u_stream.next().value


def quartic_locally_soluble(f: BinaryQuartic,
                            ell_set: Sequence[int] = DEFAULT_ELL_SET,
                            search_bound: int = 256,
                            u_stream: Optional[LabeledStream] = None,
                            full_scan: bool = False) -> bool:
    """
    Local-solubility proxy for ``y^2 = f(x, 1)``.

    The F_ell conditions are checked first since they consume no stream
    elements. Over F_p the point at infinity (``a`` a square or zero) and
    ``x = 0`` are tried before any abscissa is drawn from the "U" stream;
    drawing stops at the first success.

    Parameters
    ----------
    f : BinaryQuartic
        The quartic.
    ell_set : sequence of int, optional
        Small primes; the default is (2, 3, 5, 7, 11).
    search_bound : int, optional
        Maximal number of abscissae drawn. The default is 256.
    u_stream : LabeledStream, optional
        The "U" stream. Only optional when ``full_scan`` is set.
    full_scan : bool, optional
        Test every x in F_p instead of drawing. The default is False.

    Returns
    -------
    bool
        True iff f passes the F_p search and every F_ell scan.

    """
    lifted = [k.value for k in f.coefficients]
    for ell in ell_set:
        if not quartic_soluble_mod_ell(lifted, ell):
            return False

    p = f.p
    if legendre(f.a) >= 0 or legendre(f.e) >= 0:
        return True
    if u_stream is None and not full_scan:
        raise ValueError("a U stream is required for the bounded search")
    for x in _fp_abscissae(p, search_bound, u_stream, full_scan):
        value = f.evaluate(x, 1).value
        if legendre_int(value, p) >= 0:
            return True
    return False


def accept_quartic(stream: LabeledStream, u_stream: LabeledStream,
                   settings: GenerationSettings) -> QuarticAcceptance:
    """
    Sample quartics until one survives every rejection rule.

    A draw is rejected when it is zero or a perfect square, when it is
    singular, or when the local-solubility proxy fails. Rejections are
    counted per cause.

    Parameters
    ----------
    stream : LabeledStream
        The "F2" stream.
    u_stream : LabeledStream
        The "U" stream used by the solubility search.
    settings : GenerationSettings
        Supplies ell_set, quartic_search_bound, fp_full_scan and
        stage_budget.

    Raises
    ------
    StageBudgetExceeded
        If ``stage_budget`` draws were all rejected.

    Returns
    -------
    QuarticAcceptance
        The accepted form, its invariants and the rejection counts.

    """
    rejections = dict.fromkeys(QUARTIC_REJECTION_CAUSES, 0)
    first_cursor = stream.cursor
    for _ in range(settings.stage_budget):
        f = sample_quartic(stream)
        invariants = None
        if f.is_zero():
            cause = "zero"
        elif is_perfect_square(f):
            cause = "square"
        else:
            invariants = quartic_invariants(f)
            if is_singular_quartic(invariants):
                cause = "singular"
            elif not quartic_locally_soluble(
                    f, settings.ell_set, settings.quartic_search_bound,
                    u_stream, settings.fp_full_scan):
                cause = "insoluble"
            else:
                return QuarticAcceptance(form=f, invariants=invariants,
                                         rejections=rejections,
                                         first_cursor=first_cursor)
        rejections[cause] += 1
        logger.debug("quartic at F2 cursor %d rejected: %s",
                     stream.cursor - 5, cause)

    raise StageBudgetExceeded("quartic", settings.stage_budget, rejections)
