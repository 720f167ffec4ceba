"""
Counter-mode hashing of labeled field-element streams.

Every derived element is SHA-256 over a byte string that starts with a
label, followed by the domain separator and the seed. The byte layouts are
normative and are part of the transcript schema:

.. code-block:: text

    derive:   H(label || ds || sigma || enc64(i))             mod p
    rec_mix:  H(label || ds || sigma || encFe(x) || encFe(y)) mod p

``enc64`` is the 8-byte big-endian counter and ``encFe`` the big-endian
residue padded to the byte width of p. The 256-bit digest is read
big-endian and reduced mod p.
"""

import hashlib

from pydantic import BaseModel, ConfigDict, field_validator

from selmergen.arithmetic.field import Fe, PrimeModulus

LABEL_U = b"U"
LABEL_F2 = b"F2"
LABEL_F3 = b"F3"
LABEL_REC_C4 = b"REC_c4"
LABEL_REC_C6 = b"REC_c6"
LABEL_C3_C4 = b"C3_c4"
LABEL_C3_C6 = b"C3_c6"

STREAM_LABELS = (LABEL_U, LABEL_F2, LABEL_F3)
REC_LABELS = (LABEL_REC_C4, LABEL_REC_C6)


class SeedContext(BaseModel):
    """
    The public input triple (p, DS, sigma) every derived value depends on.

    Attributes
    ----------
    modulus : PrimeModulus
        The prime field.
    ds : str
        Non-empty domain separator; hashed as its UTF-8 bytes.
    sigma : bytes
        Seed of exactly 32 bytes.

    """
    modulus: PrimeModulus
    ds: str
    sigma: bytes

    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_validator("ds")
    @classmethod
    def check_ds(cls, v: str) -> str:
        if not v:
            raise ValueError("domain separator must not be empty")
        return v

    @field_validator("sigma")
    @classmethod
    def check_sigma(cls, v: bytes) -> bytes:
        if len(v) != 32:
            raise ValueError(f"sigma must be 32 bytes, got {len(v)}")
        return v

    @property
    def p(self) -> int:
        return self.modulus.p

    @property
    def prefix(self) -> bytes:
        """ds || sigma, the part shared by every hash input."""
        return self.ds.encode("utf-8") + self.sigma


def hash_to_field(context: SeedContext, label: bytes, payload: bytes) -> Fe:
    """SHA-256 of ``label || ds || sigma || payload`` reduced mod p."""
    digest = hashlib.sha256(label + context.prefix + payload).digest()
    return context.modulus.element(int.from_bytes(digest, "big"))


def derive(context: SeedContext, label: bytes, i: int) -> Fe:
    """
    Element ``i`` of the stream ``label``.

    Parameters
    ----------
    context : SeedContext
        Public inputs.
    label : bytes
        Stream label, e.g. ``b"F2"``.
    i : int
        Counter, ``0 <= i < 2^64``.

    Returns
    -------
    Fe
        The derived field element.

    """
    if i < 0:
        raise ValueError(f"stream counter must be non-negative, got {i}")
    return hash_to_field(context, label, i.to_bytes(8, "big"))


def rec_mix(context: SeedContext, label: bytes, x: Fe, y: Fe) -> Fe:
    """
    Reconciliation hash-mix of two field elements.

    Parameters
    ----------
    context : SeedContext
        Public inputs.
    label : bytes
        ``b"REC_c4"`` or ``b"REC_c6"``.
    x, y : Fe
        The quartic-side and cubic-side invariants, in this order.

    Returns
    -------
    Fe
        ``H(label || ds || sigma || encFe(x) || encFe(y)) mod p``.

    """
    if label not in REC_LABELS:
        raise ValueError(f"{label!r} is not a reconciliation label")
    return hash_to_field(context, label, x.to_bytes() + y.to_bytes())


class LabeledStream:
    """
    A cursor over one labeled stream.

    The cursor only moves forward; a generation job owns its streams and
    never rewinds them, so rejected draws and later trials occupy disjoint
    counter ranges.

    Parameters
    ----------
    context : SeedContext
        Public inputs.
    label : bytes
        One of ``b"U"``, ``b"F2"``, ``b"F3"``.
    cursor : int, optional
        Index of the next element. The default is 0.

    """

    def __init__(self, context: SeedContext, label: bytes, cursor: int = 0):
        if label not in STREAM_LABELS:
            raise ValueError(f"unknown stream label {label!r}")
        if cursor < 0:
            raise ValueError("cursor must be non-negative")
        self.context = context
        self.label = label
        self.cursor = cursor

    def next(self) -> Fe:
        """Return the element at the cursor and advance the cursor by one."""
        value = derive(self.context, self.label, self.cursor)
        self.cursor += 1
        return value

    __next__ = next

    def __iter__(self):
        return self

    def take(self, n: int) -> list[Fe]:
        return [self.next() for _ in range(n)]

    def __repr__(self) -> str:
        return (f"LabeledStream({self.label.decode()!r}, "
                f"cursor={self.cursor})")
