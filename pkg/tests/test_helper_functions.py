import pytest
from pydantic import BaseModel

from selmergen.helpers.errors import ParseError
from selmergen.helpers.helper_functions import (HexInt, canonical_json,
                                                check_sigma_hex, from_hex,
                                                load_json_strict, to_hex)


class Record(BaseModel):
    value: HexInt


@pytest.mark.parametrize("value, text", [(0, "0"), (255, "ff"), (-26, "-1a"),
                                         (2**64, "10000000000000000")])
def test_hex_codec(value, text):
    assert to_hex(value) == text
    assert from_hex(text) == value


@pytest.mark.parametrize("text", ["", "00", "0ff", "FF", "0x1", "-0", "+1",
                                  " 1", "1 ", "g"])
def test_from_hex_rejects_non_canonical(text):
    with pytest.raises(ValueError):
        from_hex(text)


def test_hex_int_field():
    assert Record(value=26).model_dump(mode="json") == {"value": "1a"}
    assert Record(value=26).model_dump() == {"value": 26}
    assert Record.model_validate({"value": "1a"}).value == 26
    assert Record.model_validate({"value": 26}).value == 26
    with pytest.raises(ValueError):
        Record.model_validate({"value": 26}, context={"wire": True})


def test_check_sigma_hex():
    assert check_sigma_hex("ab" * 32) == "ab" * 32
    for bad in ("ab" * 31 + "a", "AB" * 32, "ab" * 33):
        with pytest.raises(ValueError):
            check_sigma_hex(bad)


def test_canonical_json_sorts_keys():
    assert canonical_json({"b": "1", "a": ["x", None, True]}) == \
        b'{"a":["x",null,true],"b":"1"}'


def test_load_json_strict():
    assert load_json_strict(b'{"a": "1"}') == {"a": "1"}


def test_load_json_strict_duplicate_key():
    data = b'{"a": "1", "b": {"a": "2", "a": "3"}}'
    with pytest.raises(ParseError) as info:
        load_json_strict(data)
    assert info.value.offset == data.rindex(b'"a"')


def test_load_json_strict_malformed():
    with pytest.raises(ParseError) as info:
        load_json_strict(b'{"a": ')
    assert info.value.offset == 6
    with pytest.raises(ParseError) as info:
        load_json_strict(b'{"a": "\xff"}')
    assert info.value.offset == 7
