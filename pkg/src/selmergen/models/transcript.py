"""
The canonical transcript of a generation run.

A transcript holds the public inputs, the accepted descent forms with
their invariants and rejection counts, the reconciliation, the order data,
the validation report and every knob the run used. On the wire it is
RFC 8785 JSON with all integers as canonical lowercase hex strings.
"""

import hashlib
import json
from typing import Literal, Optional

from pydantic import (BaseModel, ConfigDict, Field, ValidationError,
                      field_validator)

from selmergen import SCHEMA_VERSION
from selmergen.arithmetic.field import PrimeModulus
from selmergen.arithmetic.hash_stream import SeedContext
from selmergen.curves.counting import OrderData
from selmergen.curves.reconcile import Reconciliation
from selmergen.curves.validate import ValidationReport
from selmergen.descent.cubic import CubicAcceptance
from selmergen.descent.quartic import QuarticAcceptance
from selmergen.helpers.errors import ParseError
from selmergen.helpers.helper_functions import (HexInt, canonical_json,
                                                check_sigma_hex,
                                                load_json_strict)
from selmergen.models.config import GenerationConfig, GenerationSettings
from selmergen.models.policy import Policy

_RECORD = ConfigDict(extra="forbid", frozen=True)


class StreamCursors(BaseModel):
    """Final cursor of each labeled stream after the accepted trial."""
    U: HexInt = Field(ge=0)
    F2: HexInt = Field(ge=0)
    F3: HexInt = Field(ge=0)

    model_config = _RECORD


class QuarticRecord(BaseModel):
    """
    The accepted binary quartic of the final trial.

    Attributes
    ----------
    coefficients : tuple of int
        ``(a, b, c, d, e)``.
    I, J : int
        Its invariants.
    c4, c6 : int
        The normalized pair ``(16 I, 32 J)``.
    rejections : dict[str, int]
        Rejected draws of the final trial, per cause.
    first_cursor : int
        "F2" cursor at the start of the final trial's quartic stage.

    """
    coefficients: tuple[HexInt, HexInt, HexInt, HexInt, HexInt]
    I: HexInt
    J: HexInt
    c4: HexInt
    c6: HexInt
    rejections: dict[str, HexInt]
    first_cursor: HexInt

    model_config = _RECORD

    @classmethod
    def from_acceptance(cls, acc: QuarticAcceptance) -> "QuarticRecord":
        inv = acc.invariants
        return cls(coefficients=tuple(k.value for k in acc.form.coefficients),
                   I=inv.I.value, J=inv.J.value, c4=inv.c4_2.value,
                   c6=inv.c6_2.value, rejections=acc.rejections,
                   first_cursor=acc.first_cursor)


class CubicRecord(BaseModel):
    """
    The accepted ternary cubic of the final trial.

    ``coefficients`` follow the monomial order
    x^3, x^2y, x^2z, xy^2, xyz, xz^2, y^3, y^2z, yz^2, z^3.
    """
    coefficients: tuple[HexInt, ...] = Field(min_length=10, max_length=10)
    S: HexInt
    T: HexInt
    c4: HexInt
    c6: HexInt
    rejections: dict[str, HexInt]
    first_cursor: HexInt

    model_config = _RECORD

    @classmethod
    def from_acceptance(cls, acc: CubicAcceptance) -> "CubicRecord":
        inv = acc.invariants
        return cls(coefficients=tuple(acc.form.lifted), S=inv.S.value,
                   T=inv.T.value, c4=inv.c4_3.value, c6=inv.c6_3.value,
                   rejections=acc.rejections, first_cursor=acc.first_cursor)


class ReconciliationRecord(BaseModel):
    """Hash-mix values, the blended invariants and the curve they define."""
    c4_mix: HexInt
    c6_mix: HexInt
    c4: HexInt
    c6: HexInt
    delta: HexInt
    A: HexInt
    B: HexInt
    j: HexInt

    model_config = _RECORD

    @classmethod
    def from_reconciliation(cls, rec: Reconciliation) -> "ReconciliationRecord":
        curve = rec.curve
        return cls(c4_mix=rec.c4_mix.value, c6_mix=rec.c6_mix.value,
                   c4=curve.c4.value, c6=curve.c6.value,
                   delta=curve.delta.value, A=curve.A.value, B=curve.B.value,
                   j=curve.j_invariant.value)


class Transcript(BaseModel):
    """
    Complete record of an accepted generation run.

    Attributes
    ----------
    schema_version : str
        Always ``"selmergen/1"``.
    p : int
        The field characteristic.
    ds : str
        Domain separator.
    sigma : str
        The 32-byte seed as 64 lowercase hex characters.
    trial_index : int
        Zero-based index of the accepted trial.
    stream_cursors : StreamCursors
        Final cursors of the "U", "F2" and "F3" streams.
    quartic, cubic : QuarticRecord, CubicRecord
        The accepted descent forms.
    reconciliation : ReconciliationRecord
        Blend and curve data.
    order_data : OrderData
        Orders and factorizations of the curve and its twist.
    validation : ValidationReport
        The passed validation battery.
    policy : Policy
        Policy the run was validated against.
    config : GenerationSettings
        Sampling, search and counting knobs.
    trial_rejections : dict[str, int]
        Rejected trials per cause (``singular`` and the failed filters).
    warnings : tuple of str
        Non-fatal remarks, e.g. ``p != 3 (mod 4)``.
    digest : str
        SHA-256 (hex) of the canonical serialization of all other fields.

    """
    schema_version: Literal["selmergen/1"] = SCHEMA_VERSION
    p: HexInt
    ds: str = Field(min_length=1)
    sigma: str
    trial_index: HexInt = Field(ge=0)
    stream_cursors: StreamCursors
    quartic: QuarticRecord
    cubic: CubicRecord
    reconciliation: ReconciliationRecord
    order_data: OrderData
    validation: ValidationReport
    policy: Policy
    config: GenerationSettings
    trial_rejections: dict[str, HexInt]
    warnings: tuple[str, ...] = ()
    digest: str = ""

    model_config = _RECORD

    @field_validator("sigma")
    @classmethod
    def check_sigma(cls, v: str) -> str:
        return check_sigma_hex(v)

    def seed_context(self) -> SeedContext:
        """
        Rebuild the public inputs.

        Raises
        ------
        pydantic.ValidationError
            If the recorded p is not a prime >= 5.

        """
        return SeedContext(modulus=PrimeModulus(p=self.p), ds=self.ds,
                           sigma=bytes.fromhex(self.sigma))

    def generation_config(self, policy: Optional[Policy] = None
                          ) -> GenerationConfig:
        return GenerationConfig(seed_context=self.seed_context(),
                                policy=policy or self.policy,
                                settings=self.config)

    def with_digest(self) -> "Transcript":
        return self.model_copy(update={"digest": compute_digest(self)})


def _wire_dict(tr: Transcript, exclude: Optional[set] = None) -> dict:
    return tr.model_dump(mode="json", exclude=exclude)


def compute_digest(tr: Transcript) -> str:
    """SHA-256 of the canonical serialization without the digest field."""
    payload = canonical_json(_wire_dict(tr, exclude={"digest"}))
    return hashlib.sha256(payload).hexdigest()


def serialize(tr: Transcript) -> bytes:
    """
    Canonical bytes of a transcript.

    Keys are sorted, there is no insignificant whitespace, and every
    integer is a canonical hex string; equal transcripts give equal bytes.
    """
    return canonical_json(_wire_dict(tr))


def _offset_of(data: bytes, loc: tuple) -> Optional[int]:
    # position of the innermost named key of the error location
    for part in reversed(loc):
        if isinstance(part, str):
            position = data.find(json.dumps(part).encode("utf-8") + b":")
            if position >= 0:
                return position
    return None


def parse(data: bytes) -> Transcript:
    """
    Strictly parse transcript bytes.

    Parameters
    ----------
    data : bytes
        UTF-8 encoded JSON.

    Raises
    ------
    ParseError
        On malformed JSON, duplicate keys, unknown or missing fields,
        integers that are not canonical hex strings, a wrong schema
        version or a sigma of the wrong length. ``offset`` points at the
        offending byte or key where it can be determined.

    Returns
    -------
    Transcript
        The parsed transcript. Its digest is not checked here; see
        :func:`selmergen.generation.verify.verify`.

    """
    obj = load_json_strict(data)
    if not isinstance(obj, dict):
        raise ParseError("transcript must be a JSON object", 0)
    try:
        return Transcript.model_validate_json(data, strict=True,
                                              context={"wire": True})
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"]) or "<root>"
        raise ParseError(f"{where}: {first['msg']}",
                         _offset_of(data, first["loc"])) from e
