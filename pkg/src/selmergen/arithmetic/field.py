"""
Exact arithmetic in prime fields F_p.

:class:`PrimeModulus` describes the field, :class:`Fe` is an element of it.
Elements are immutable and always stored as canonical residues in
``[0, p)``; combining elements of different fields raises
:class:`~selmergen.helpers.errors.ModulusMismatch`.
"""

from typing import Optional, Union

from pydantic import BaseModel, ConfigDict, field_validator

from selmergen.arithmetic.integers import is_prime
from selmergen.helpers.errors import FieldDivisionByZero, ModulusMismatch


class PrimeModulus(BaseModel):
    """
    The characteristic of a prime field.

    Attributes
    ----------
    p : int
        An odd prime, ``p >= 5``.

    Notes
    -----
    * ``bit_len``, ``byte_width`` and ``admissible`` are derived from ``p``.
    * The default admissibility policy asks for ``p = 3 (mod 4)``; other
      primes are accepted, and callers record a warning.

    """
    p: int

    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_validator("p")
    @classmethod
    def check_prime(cls, v: int) -> int:
        if v < 5 or not is_prime(v):
            raise ValueError(f"{v} is not a prime >= 5")
        return v

    @property
    def bit_len(self) -> int:
        return self.p.bit_length()

    @property
    def byte_width(self) -> int:
        return (self.bit_len + 7) // 8

    @property
    def admissible(self) -> bool:
        """True iff p = 3 (mod 4)."""
        return self.p % 4 == 3

    def element(self, value: int) -> "Fe":
        """Reduce an integer into this field."""
        return Fe(value, self)

    def zero(self) -> "Fe":
        return Fe(0, self)

    def one(self) -> "Fe":
        return Fe(1, self)


Operand = Union["Fe", int]


class Fe:
    """
    Element of F_p.

    Integers may be mixed into the arithmetic and are reduced into the
    field of the other operand.

    Parameters
    ----------
    value : int
        Any integer; it is reduced mod p.
    modulus : PrimeModulus
        The field the element lives in.

    Example
    -------
    >>> F = PrimeModulus(p=7)
    >>> F.element(6) + 1
    Fe(0 mod 7)
    >>> (F.element(2) * F.element(2).inverse()).value
    1

    """
    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: PrimeModulus):
        object.__setattr__(self, "value", int(value) % modulus.p)
        object.__setattr__(self, "modulus", modulus)

    def __setattr__(self, key, value):
        raise AttributeError("field elements are immutable")

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other: Operand) -> int:
        if isinstance(other, Fe):
            if other.modulus.p != self.modulus.p:
                raise ModulusMismatch(
                    f"cannot combine elements mod {self.modulus.p} and "
                    f"mod {other.modulus.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _new(self, value: int) -> "Fe":
        return Fe(value, self.modulus)

    def __add__(self, other: Operand) -> "Fe":
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(self.value + v)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "Fe":
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(self.value - v)

    def __rsub__(self, other: Operand) -> "Fe":
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(v - self.value)

    def __mul__(self, other: Operand) -> "Fe":
        v = self._coerce(other)
        return NotImplemented if v is NotImplemented else self._new(self.value * v)

    __rmul__ = __mul__

    def __neg__(self) -> "Fe":
        return self._new(-self.value)

    def inverse(self) -> "Fe":
        if self.value == 0:
            raise FieldDivisionByZero(f"0 has no inverse mod {self.p}")
        return self._new(pow(self.value, -1, self.p))

    def __truediv__(self, other: Operand) -> "Fe":
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self * self._new(v).inverse()

    def __rtruediv__(self, other: Operand) -> "Fe":
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self._new(v) * self.inverse()

    def __pow__(self, exponent: int) -> "Fe":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return self._new(pow(self.value, exponent, self.p))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Fe):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __int__(self) -> int:
        return self.value

    def __bool__(self) -> bool:
        return self.value != 0

    def __repr__(self) -> str:
        return f"Fe({self.value} mod {self.p})"

    def to_bytes(self) -> bytes:
        """Fixed-width big-endian encoding using the modulus byte width."""
        return self.value.to_bytes(self.modulus.byte_width, "big")


# %%
"""
Functional interface of the field operations.
"""


def add(a: Fe, b: Fe) -> Fe:
    return a + b


def sub(a: Fe, b: Fe) -> Fe:
    return a - b


def mul(a: Fe, b: Fe) -> Fe:
    return a * b


def neg(a: Fe) -> Fe:
    return -a


def inv(a: Fe) -> Fe:
    return a.inverse()


def fe_pow(a: Fe, exponent: int) -> Fe:
    return a**exponent


def legendre(a: Fe) -> int:
    """
    Legendre symbol of a field element, computed by Euler's criterion.

    Parameters
    ----------
    a : Fe
        Any element of F_p.

    Returns
    -------
    int
        0 if ``a == 0``, 1 if ``a`` is a nonzero square, -1 otherwise.

    """
    return legendre_int(a.value, a.p)


def legendre_int(a: int, p: int) -> int:
    """Legendre symbol (a/p) for a plain integer and an odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def fe_sqrt(a: Fe) -> Optional[Fe]:
    """
    Square root in F_p.

    The exponent (p+1)/4 gives the root directly when p = 3 (mod 4);
    other primes go through Tonelli-Shanks.

    Parameters
    ----------
    a : Fe
        Any element of F_p.

    Returns
    -------
    Fe or None
        Some ``r`` with ``r * r == a``, or None if ``a`` is a non-residue.

    """
    p = a.p
    if a.value == 0:
        return a
    if legendre(a) != 1:
        return None
    if p % 4 == 3:
        return a._new(pow(a.value, (p + 1) // 4, p))
    return a._new(_tonelli_shanks(a.value, p))


def _tonelli_shanks(n: int, p: int) -> int:
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)

    m = s
    c = pow(z, q, p)
    t = pow(n, q, p)
    r = pow(n, (q + 1) // 2, p)
    while t != 1:
        # least i with t^(2^i) = 1
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


def smallest_nonresidue(p: int) -> int:
    """Smallest integer g >= 2 with (g/p) = -1, found by scanning 2, 3, ..."""
    g = 2
    while legendre_int(g, p) != -1:
        g += 1
    return g
