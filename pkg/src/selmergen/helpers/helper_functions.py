import json
import re
from typing import Annotated, Any

import jcs
from pydantic import BeforeValidator, PlainSerializer, ValidationInfo

from selmergen.helpers.errors import ParseError

_HEX_INT = re.compile(r"-?(?:0|[1-9a-f][0-9a-f]*)\Z")
_SIGMA = re.compile(r"[0-9a-f]{64}\Z")


def to_hex(value: int) -> str:
    """
    Encode an integer canonically: lowercase hexadecimal, no leading zeros,
    ``"0"`` for zero and a leading ``-`` for negative values.

    Parameters
    ----------
    value : int
        Any integer.

    Returns
    -------
    str
        The canonical hexadecimal string.

    """
    return format(value, "x")


def from_hex(text: str) -> int:
    """
    Decode a canonical hexadecimal integer.

    Parameters
    ----------
    text : str
        A string produced by :func:`to_hex`.

    Raises
    ------
    ValueError
        If the string is not in canonical form (upper case digits, leading
        zeros, ``0x`` prefix, ``-0`` ...).

    Returns
    -------
    int
        The decoded integer.

    """
    if not _HEX_INT.match(text) or text == "-0":
        raise ValueError(f"non-canonical hexadecimal integer {text!r}")
    return int(text, 16)


def _hex_int(value: Any, info: ValidationInfo) -> Any:
    if isinstance(value, str):
        return from_hex(value)
    if info.context and info.context.get("wire"):
        raise ValueError("integers must be encoded as hexadecimal strings")
    return value


# integer field that travels as a canonical hex string in JSON mode
HexInt = Annotated[
    int,
    BeforeValidator(_hex_int),
    PlainSerializer(to_hex, return_type=str, when_used="json"),
]


def check_sigma_hex(text: str) -> str:
    """Validate a seed given as exactly 64 lowercase hex characters."""
    if not _SIGMA.match(text):
        raise ValueError(
            f"sigma must be exactly 64 lowercase hex characters, got "
            f"{len(text)} characters")
    return text


def canonical_json(obj: Any) -> bytes:
    """
    Encode JSON-compatible data canonically (RFC 8785): keys sorted, no
    insignificant whitespace, UTF-8.

    Parameters
    ----------
    obj : Any
        A structure of dicts, lists, strings, booleans and None. Integers
        should already be hex-encoded by the caller.

    Returns
    -------
    bytes
        The canonical byte string.

    """
    return jcs.canonicalize(obj)


def load_json_strict(data: bytes) -> Any:
    """
    Parse JSON bytes, rejecting duplicate object keys.

    Parameters
    ----------
    data : bytes
        UTF-8 encoded JSON.

    Raises
    ------
    ParseError
        On invalid UTF-8, malformed JSON or duplicate keys. The byte offset
        of the problem is attached where it can be determined.

    Returns
    -------
    Any
        The decoded structure.

    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as e:
        raise ParseError(f"invalid UTF-8: {e.reason}", e.start) from e

    def no_duplicates(pairs: list[tuple[str, Any]]) -> dict:
        seen: dict[str, Any] = {}
        for key, value in pairs:
            if key in seen:
                # points at the last occurrence of the key
                needle = json.dumps(key).encode("utf-8")
                raise ParseError(f"duplicate key {key!r}", data.rfind(needle))
            seen[key] = value
        return seen

    try:
        return json.loads(text, object_pairs_hook=no_duplicates)
    except json.JSONDecodeError as e:
        offset = len(text[:e.pos].encode("utf-8"))
        raise ParseError(f"malformed JSON: {e.msg}", offset) from e
