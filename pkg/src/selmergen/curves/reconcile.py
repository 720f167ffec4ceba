"""
Reconciliation of the quartic-side and cubic-side invariants into the
final (c4, c6), and the curve model built from them.
"""

from typing import Union

from pydantic import BaseModel, ConfigDict

from selmergen.arithmetic.field import Fe, PrimeModulus
from selmergen.arithmetic.hash_stream import (LABEL_REC_C4, LABEL_REC_C6,
                                              SeedContext, rec_mix)

# weights of the linear blend c = 2 c^(2) + 3 c~
BLEND_SELF = 2
BLEND_MIX = 3


class CurveParams(BaseModel):
    """
    The curve ``y^2 = x^3 + A x + B`` with ``A = -27 c4``, ``B = -54 c6``.

    Attributes
    ----------
    modulus : PrimeModulus
        The prime field.
    c4, c6 : Fe
        Normalized invariants.
    A, B : Fe
        Short-Weierstrass coefficients.
    delta : Fe
        ``-16 (4 c4^3 + 27 c6^2)``, the discriminant in the convention the
        generator records.

    Notes
    -----
    * The model itself is non-singular iff ``4A^3 + 27B^2 != 0``, which
      is ``c4^3 != c6^2``; see :attr:`is_nonsingular`.

    """
    modulus: PrimeModulus
    c4: Fe
    c6: Fe
    A: Fe
    B: Fe
    delta: Fe

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)

    @classmethod
    def from_invariants(cls, modulus: PrimeModulus, c4: Union[Fe, int],
                        c6: Union[Fe, int]) -> "CurveParams":
        c4 = modulus.element(int(c4))
        c6 = modulus.element(int(c6))
        return cls(modulus=modulus, c4=c4, c6=c6, A=-27 * c4, B=-54 * c6,
                   delta=discriminant(c4, c6))

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def weierstrass_discriminant(self) -> Fe:
        """``-16 (4A^3 + 27B^2)`` of the instantiated model."""
        return -16 * (4 * self.A ** 3 + 27 * self.B ** 2)

    @property
    def is_nonsingular(self) -> bool:
        return bool(self.delta) and bool(self.weierstrass_discriminant)

    @property
    def j_invariant(self) -> Fe:
        """``c4^3 / delta``."""
        return self.c4 ** 3 / self.delta

    def twist(self, g: int) -> "CurveParams":
        """The model ``y^2 = x^3 + A g^2 x + B g^3`` for a non-residue g."""
        return CurveParams.from_invariants(self.modulus, self.c4 * g**2,
                                           self.c6 * g**3)

    def rhs(self, x: int) -> int:
        """``x^3 + A x + B`` mod p."""
        p = self.p
        return (x * x % p * x + self.A.value * x + self.B.value) % p


class SingularRetry(BaseModel):
    """The blend produced a singular curve; the whole trial restarts."""
    c4_mix: Fe
    c6_mix: Fe

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)


class Reconciliation(BaseModel):
    """A non-singular blend together with its hash-mix values."""
    c4_mix: Fe
    c6_mix: Fe
    curve: CurveParams

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)


def discriminant(c4: Fe, c6: Fe) -> Fe:
    return -16 * (4 * c4 ** 3 + 27 * c6 ** 2)


def reconcile(ctx: SeedContext, c4_2: Fe, c4_3: Fe, c6_2: Fe,
              c6_3: Fe) -> Union[Reconciliation, SingularRetry]:
    """
    Hash-mix and blend the two invariant pairs into (c4, c6).

    Parameters
    ----------
    ctx : SeedContext
        Public inputs.
    c4_2, c6_2 : Fe
        Quartic-side invariants.
    c4_3, c6_3 : Fe
        Cubic-side invariants.

    Returns
    -------
    Reconciliation or SingularRetry
        :class:`SingularRetry` when ``delta = 0`` or the Weierstrass model
        is singular; otherwise the curve with the mix values.

    """
    c4_mix = rec_mix(ctx, LABEL_REC_C4, c4_2, c4_3)
    c6_mix = rec_mix(ctx, LABEL_REC_C6, c6_2, c6_3)
    return blend(ctx.modulus, c4_2, c6_2, c4_mix, c6_mix)


def blend(modulus: PrimeModulus, c4_2: Fe, c6_2: Fe, c4_mix: Fe,
          c6_mix: Fe) -> Union[Reconciliation, SingularRetry]:
    """The linear blend ``c = 2 c^(2) + 3 c~`` with the singularity guard."""
    c4 = BLEND_SELF * c4_2 + BLEND_MIX * c4_mix
    c6 = BLEND_SELF * c6_2 + BLEND_MIX * c6_mix
    curve = CurveParams.from_invariants(modulus, c4, c6)
    if not curve.is_nonsingular:
        return SingularRetry(c4_mix=c4_mix, c6_mix=c6_mix)
    return Reconciliation(c4_mix=c4_mix, c6_mix=c6_mix, curve=curve)
