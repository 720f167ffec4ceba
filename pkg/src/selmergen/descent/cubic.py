"""
The 3-descent artifact: ternary cubics

    F(x, y, z) = sum over i+j+k=3 of b_ijk x^i y^j z^k

sampled from the "F3" stream, filtered for singularity and local
solubility, and mapped to Weierstrass-normalized invariants
``(c4_3, c6_3)``.

Invariants
----------
The degree-4 and degree-6 invariants are evaluated as full contractions
of the coefficient tensor with the Levi-Civita symbol, following the
symbolic expressions

.. code-block:: text

    S ~ (abc)(abd)(acd)(bcd)
    T ~ (abc)(abd)(ace)(bcf)(def)^2

where each letter is a copy of the cubic and each bracket a determinant.
The tensor used is ``g[i][j][k] = e0! e1! e2! * b_e`` (six times the
symmetric coefficient tensor) so that the contraction stays integral.
SL3 invariance holds by construction.

The raw contractions are divided down to the classical invariants

.. code-block:: text

    S = raw4 / 31104,    T = -raw6 / 279936

so that the Fermat cubic ``x^3 + y^3 + z^3`` has ``(S, T) = (0, 1)`` and
the cubic is singular iff ``64 S^3 - T^2 = 0``. The constants

.. code-block:: text

    c4_3 = 1296 S,    c6_3 = 5832 T

are fixed so that ``y^2 z - x^3 - A x z^2 - B z^3`` maps to
``(-48A, -864B)``. Then ``c4_3^3 - c6_3^2 = 2^6 3^12 (64 S^3 - T^2)``.
"""

import logging
from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Iterable, Literal, Optional, Sequence

from pydantic import BaseModel, ConfigDict, field_validator

from selmergen.arithmetic.field import Fe
from selmergen.arithmetic.hash_stream import (LABEL_C3_C4, LABEL_C3_C6,
                                              LABEL_F3, LabeledStream,
                                              SeedContext, hash_to_field)
from selmergen.descent.polynomials import has_root
from selmergen.helpers.errors import StageBudgetExceeded
from selmergen.helpers.helper_functions import HexInt
from selmergen.main import DEFAULT_ELL_SET
from selmergen.models.config import GenerationSettings

logger = logging.getLogger(__name__)

# descending lexicographic order of the exponent triples (i, j, k)
MONOMIALS = ((3, 0, 0), (2, 1, 0), (2, 0, 1), (1, 2, 0), (1, 1, 1),
             (1, 0, 2), (0, 3, 0), (0, 2, 1), (0, 1, 2), (0, 0, 3))

S_NORMALIZATION = Fraction(1, 31104)
T_NORMALIZATION = Fraction(-1, 279936)
LAMBDA_4 = 1296
LAMBDA_6 = 5832

CUBIC_REJECTION_CAUSES = ("zero", "singular", "insoluble")

InvariantMode = Literal["classical", "hash_placeholder"]


def _sign(perm: tuple[int, int, int]) -> int:
    inversions = sum(1 for i in range(3) for j in range(i + 1, 3)
                     if perm[i] > perm[j])
    return -1 if inversions % 2 else 1


_PERMS = tuple((_sign(perm), perm) for perm in permutations(range(3)))


class TernaryCubic(BaseModel):
    """
    Ternary cubic form over F_p.

    Attributes
    ----------
    coeffs : tuple of Fe
        The ten coefficients in the order of :data:`MONOMIALS`.

    """
    coeffs: tuple[Fe, ...]

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)

    @field_validator("coeffs")
    @classmethod
    def check_length(cls, v: tuple[Fe, ...]) -> tuple[Fe, ...]:
        if len(v) != 10:
            raise ValueError(f"a ternary cubic has 10 coefficients, got {len(v)}")
        return v

    @property
    def p(self) -> int:
        return self.coeffs[0].p

    @property
    def lifted(self) -> list[int]:
        """Canonical integer representatives in [0, p)."""
        return [k.value for k in self.coeffs]

    def coefficient(self, exponents: tuple[int, int, int]) -> Fe:
        return self.coeffs[MONOMIALS.index(exponents)]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def evaluate(self, x: int, y: int, z: int) -> Fe:
        return self.coeffs[0]._new(evaluate_cubic(self.lifted, x, y, z))


def evaluate_cubic(coefficients: Sequence[int], x: int, y: int, z: int) -> int:
    """Value of the cubic with integer coefficients at (x, y, z), unreduced."""
    return sum(k * x**i * y**j * z**l
               for k, (i, j, l) in zip(coefficients, MONOMIALS))


class CubicInvariants(BaseModel):
    """
    Invariants of a ternary cubic and their normalization.

    Attributes
    ----------
    S : Fe
        Classical degree-4 invariant (see module notes).
    T : Fe
        Classical degree-6 invariant (see module notes).
    c4_3 : Fe
        ``1296 S`` in classical mode, a hash value in placeholder mode.
    c6_3 : Fe
        ``5832 T`` in classical mode, a hash value in placeholder mode.

    """
    S: Fe
    T: Fe
    c4_3: Fe
    c6_3: Fe

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)


class CubicAcceptance(BaseModel):
    """Outcome of the cubic stage of one trial."""
    form: TernaryCubic
    invariants: CubicInvariants
    rejections: dict[str, HexInt]
    first_cursor: int

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)


def sample_cubic(stream: LabeledStream) -> TernaryCubic:
    """
    Draw ten coefficients from the "F3" stream in :data:`MONOMIALS` order.

    Parameters
    ----------
    stream : LabeledStream
        Stream with label ``b"F3"``; its cursor advances by exactly 10.

    Raises
    ------
    ValueError
        If the stream carries another label.

    Returns
    -------
    TernaryCubic
        The sampled form.

    """
    if stream.label != LABEL_F3:
        raise ValueError(f"cubics are sampled from F3, not {stream.label!r}")
    return TernaryCubic(coeffs=tuple(stream.take(10)))


def coefficient_tensor(coefficients: Sequence[int]) -> list[list[list[int]]]:
    """
    Integral symmetric tensor ``g`` with ``F = (1/6) sum g_ijk v_i v_j v_k``.

    Parameters
    ----------
    coefficients : sequence of int
        The ten coefficients in :data:`MONOMIALS` order.

    Returns
    -------
    list
        A 3x3x3 nested list.

    """
    g = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for k, exponents in zip(coefficients, MONOMIALS):
        weight = 1
        for e in exponents:
            weight *= factorial(e)
        indices = [v for v, e in enumerate(exponents) for _ in range(e)]
        for i, j, l in set(permutations(indices)):
            g[i][j][l] = weight * k
    return g


def _reduce(value: int, modulus: Optional[int]) -> int:
    return value % modulus if modulus else value


def degree4_contraction(g: list, modulus: Optional[int] = None) -> int:
    """(abc)(abd)(acd)(bcd) evaluated on the tensor g."""
    total = 0
    for s1, (a1, b1, c1) in _PERMS:
        for s2, (a2, b2, d1) in _PERMS:
            for s3, (a3, c2, d2) in _PERMS:
                ga = g[a1][a2][a3]
                if not ga:
                    continue
                s123 = s1 * s2 * s3 * ga
                for s4, (b3, c3, d3) in _PERMS:
                    total += (s123 * s4 * g[b1][b2][b3] * g[c1][c2][c3]
                              * g[d1][d2][d3])
        total = _reduce(total, modulus)
    return _reduce(total, modulus)


def degree6_contraction(g: list, modulus: Optional[int] = None) -> int:
    """(abc)(abd)(ace)(bcf)(def)^2 evaluated on the tensor g."""
    # contract the squared bracket (def)^2 first
    m = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    for d in range(3):
        for e in range(3):
            for f in range(3):
                acc = 0
                for s5, (d2, e2, f2) in _PERMS:
                    for s6, (d3, e3, f3) in _PERMS:
                        acc += (s5 * s6 * g[d][d2][d3] * g[e][e2][e3]
                                * g[f][f2][f3])
                m[d][e][f] = _reduce(acc, modulus)

    total = 0
    for s1, (a1, b1, c1) in _PERMS:
        for s2, (a2, b2, d1) in _PERMS:
            for s3, (a3, c2, e1) in _PERMS:
                ga = g[a1][a2][a3]
                if not ga:
                    continue
                s123 = s1 * s2 * s3 * ga
                for s4, (b3, c3, f1) in _PERMS:
                    total += (s123 * s4 * g[b1][b2][b3] * g[c1][c2][c3]
                              * m[d1][e1][f1])
        total = _reduce(total, modulus)
    return _reduce(total, modulus)


def _scaled(value: Fe, constant: Fraction) -> Fe:
    return value * constant.numerator / constant.denominator


def cubic_invariants(F: TernaryCubic, mode: InvariantMode = "classical",
                     context: Optional[SeedContext] = None) -> CubicInvariants:
    """
    Compute S, T and the normalized pair (c4_3, c6_3).

    Parameters
    ----------
    F : TernaryCubic
        Any cubic.
    mode : {"classical", "hash_placeholder"}, optional
        ``classical`` scales S and T to ``c4_3 = 1296 S``, ``c6_3 = 5832 T``.
        ``hash_placeholder`` replaces c4_3, c6_3 by hashes of the
        coefficients under the labels "C3_c4" and "C3_c6"; S and T are
        still reported. The default is "classical".
    context : SeedContext, optional
        Required by the placeholder mode.

    Returns
    -------
    CubicInvariants
        The invariants reduced mod p.

    """
    p = F.p
    g = coefficient_tensor(F.lifted)
    raw4 = F.coeffs[0]._new(degree4_contraction(g, p))
    raw6 = F.coeffs[0]._new(degree6_contraction(g, p))
    S, T = _scaled(raw4, S_NORMALIZATION), _scaled(raw6, T_NORMALIZATION)

    if mode == "classical":
        c4_3, c6_3 = S * LAMBDA_4, T * LAMBDA_6
    elif mode == "hash_placeholder":
        if context is None:
            raise ValueError("the placeholder mode needs the seed context")
        payload = b"".join(k.to_bytes() for k in F.coeffs)
        c4_3 = hash_to_field(context, LABEL_C3_C4, payload)
        c6_3 = hash_to_field(context, LABEL_C3_C6, payload)
    else:
        raise ValueError(f"unknown cubic invariant mode {mode!r}")
    return CubicInvariants(S=S, T=T, c4_3=c4_3, c6_3=c6_3)


def is_singular_cubic(inv: CubicInvariants) -> bool:
    """True iff ``c4_3^3 - c6_3^2 = 0`` (valid for p > 3)."""
    return not (inv.c4_3 ** 3 - inv.c6_3 ** 2)


def cubic_points_mod_ell(ell: int) -> list[tuple[int, int, int]]:
    """All points of P^2(F_ell) in normalized form."""
    return ([(x, y, 1) for x in range(ell) for y in range(ell)]
            + [(x, 1, 0) for x in range(ell)] + [(1, 0, 0)])


@lru_cache(maxsize=None)
def _points(ell: int) -> tuple[tuple[int, int, int], ...]:
    return tuple(cubic_points_mod_ell(ell))


def cubic_soluble_mod_ell(coefficients: Sequence[int], ell: int) -> bool:
    """
    Exhaustive scan of P^2(F_ell) for a zero of the reduced cubic.

    Parameters
    ----------
    coefficients : sequence of int
        Integer lifts of the ten coefficients; reduced mod ell.
    ell : int
        A small prime.

    Returns
    -------
    bool
        True iff the cubic has a nontrivial zero mod ell.

    """
    reduced = [k % ell for k in coefficients]
    return any(evaluate_cubic(reduced, x, y, z) % ell == 0
               for x, y, z in _points(ell))


def _section(coefficients: Sequence[int], x: int, p: int) -> list[int]:
    """g_x(y) = F(x, y, 1) as coefficients, lowest degree first."""
    b300, b210, b201, b120, b111, b102, b030, b021, b012, b003 = coefficients
    return [
        (b003 + x * (b102 + x * (b201 + x * b300))) % p,
        (b012 + x * (b111 + x * b210)) % p,
        (b021 + x * b120) % p,
        b030 % p,
    ]


def _abscissae(p: int, search_bound: int, u_stream: Optional[LabeledStream],
               full_scan: bool) -> Iterable[int]:
    if full_scan:
        yield from range(p)
        return
    if u_stream is None:
        raise ValueError("a U stream is required for the bounded search")
    for _ in range(min(search_bound, p)):
        yield u_stream.next().value


def cubic_locally_soluble(F: TernaryCubic,
                          ell_set: Sequence[int] = DEFAULT_ELL_SET,
                          search_bound: int = 64,
                          u_stream: Optional[LabeledStream] = None,
                          full_scan: bool = False) -> bool:
    """
    Local-solubility proxy for the plane cubic ``F = 0``.

    Every F_ell is scanned exhaustively. Over F_p the point (1:0:0) and
    the line z = 0 are tested first, then lines x = const with abscissae
    drawn from the "U" stream; each line is decided exactly by a
    root-existence test of the univariate cubic ``F(x, y, 1)``.

    Parameters
    ----------
    F : TernaryCubic
        The cubic.
    ell_set : sequence of int, optional
        Small primes; the default is (2, 3, 5, 7, 11).
    search_bound : int, optional
        Maximal number of abscissae drawn. The default is 64.
    u_stream : LabeledStream, optional
        The "U" stream; only optional with ``full_scan``.
    full_scan : bool, optional
        Test every x in F_p instead of drawing. The default is False.

    Returns
    -------
    bool
        True iff a zero was found over F_p and over every F_ell.

    """
    lifted = F.lifted
    for ell in ell_set:
        if not cubic_soluble_mod_ell(lifted, ell):
            return False

    p = F.p
    b300, b210, b120, b030 = (lifted[MONOMIALS.index(e)] for e in
                              ((3, 0, 0), (2, 1, 0), (1, 2, 0), (0, 3, 0)))
    if b300 == 0:
        return True
    if has_root([b030, b120, b210, b300], p):
        return True
    for x in _abscissae(p, search_bound, u_stream, full_scan):
        if has_root(_section(lifted, x, p), p):
            return True
    return False


def accept_cubic(stream: LabeledStream, u_stream: LabeledStream,
                 settings: GenerationSettings) -> CubicAcceptance:
    """
    Sample cubics until one is non-zero, non-singular and passes the
    local-solubility proxy.

    Parameters
    ----------
    stream : LabeledStream
        The "F3" stream.
    u_stream : LabeledStream
        The "U" stream used by the solubility search.
    settings : GenerationSettings
        Supplies ell_set, cubic_search_bound, fp_full_scan,
        cubic_invariants and stage_budget.

    Raises
    ------
    StageBudgetExceeded
        If ``stage_budget`` draws were all rejected.

    Returns
    -------
    CubicAcceptance
        The accepted form, its invariants and the rejection counts.

    """
    rejections = dict.fromkeys(CUBIC_REJECTION_CAUSES, 0)
    first_cursor = stream.cursor
    for _ in range(settings.stage_budget):
        F = sample_cubic(stream)
        if F.is_zero():
            cause = "zero"
        else:
            invariants = cubic_invariants(F, settings.cubic_invariants,
                                          stream.context)
            if is_singular_cubic(invariants):
                cause = "singular"
            elif not cubic_locally_soluble(
                    F, settings.ell_set, settings.cubic_search_bound,
                    u_stream, settings.fp_full_scan):
                cause = "insoluble"
            else:
                return CubicAcceptance(form=F, invariants=invariants,
                                       rejections=rejections,
                                       first_cursor=first_cursor)
        rejections[cause] += 1
        logger.debug("cubic at F3 cursor %d rejected: %s",
                     stream.cursor - 10, cause)

    raise StageBudgetExceeded("cubic", settings.stage_budget, rejections)
