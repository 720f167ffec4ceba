import hashlib
import json

import pytest

from selmergen.helpers.errors import ParseError
from selmergen.helpers.helper_functions import canonical_json, to_hex
from selmergen.models.transcript import compute_digest, parse, serialize


def _wire(transcript):
    return json.loads(serialize(transcript))


def _reencode(obj):
    return canonical_json(obj)


def _int_leaves(obj):
    if isinstance(obj, dict):
        for value in obj.values():
            yield from _int_leaves(value)
    elif isinstance(obj, list):
        for value in obj:
            yield from _int_leaves(value)
    elif type(obj) is int:
        yield obj


def test_serialize_is_deterministic(demo_transcript):
    data = serialize(demo_transcript)
    assert serialize(demo_transcript) == data
    assert serialize(parse(data)) == data
    assert parse(data) == demo_transcript


def test_serialize_is_canonical(demo_transcript):
    data = serialize(demo_transcript)
    obj = json.loads(data)
    assert data == canonical_json(obj)
    assert list(obj) == sorted(obj)
    assert list(obj["reconciliation"]) == sorted(obj["reconciliation"])


def test_integers_travel_as_hex(demo_transcript):
    obj = _wire(demo_transcript)
    assert list(_int_leaves(obj)) == []
    assert obj["p"] == "186a3"
    assert obj["reconciliation"]["c4"] == to_hex(
        demo_transcript.reconciliation.c4)
    assert obj["schema_version"] == "selmergen/1"


def test_digest(demo_transcript):
    assert demo_transcript.digest == compute_digest(demo_transcript)
    obj = _wire(demo_transcript)
    del obj["digest"]
    expected = hashlib.sha256(canonical_json(obj)).hexdigest()
    assert demo_transcript.digest == expected


def test_digest_covers_every_section(demo_transcript):
    changed = demo_transcript.model_copy(update={"trial_index": 10**5})
    assert compute_digest(changed) != demo_transcript.digest
    changed = demo_transcript.model_copy(update={"ds": "other"})
    assert compute_digest(changed) != demo_transcript.digest


def test_parse_rejects_extra_field(demo_transcript):
    obj = _wire(demo_transcript)
    obj["zzz"] = "1"
    data = _reencode(obj)
    with pytest.raises(ParseError) as e:
        parse(data)
    assert e.value.offset == data.find(b'"zzz"')


def test_parse_rejects_nested_extra_field(demo_transcript):
    obj = _wire(demo_transcript)
    obj["policy"]["zzz"] = "1"
    with pytest.raises(ParseError):
        parse(_reencode(obj))


def test_parse_rejects_missing_field(demo_transcript):
    obj = _wire(demo_transcript)
    del obj["order_data"]
    with pytest.raises(ParseError):
        parse(_reencode(obj))


@pytest.mark.parametrize("sigma", ["0" * 63, "0" * 65, "A" * 64, "g" * 64])
def test_parse_rejects_sigma(demo_transcript, sigma):
    obj = _wire(demo_transcript)
    obj["sigma"] = sigma
    with pytest.raises(ParseError):
        parse(_reencode(obj))


def test_parse_rejects_json_number(demo_transcript):
    obj = _wire(demo_transcript)
    obj["trial_index"] = demo_transcript.trial_index
    data = _reencode(obj)
    with pytest.raises(ParseError) as e:
        parse(data)
    assert e.value.offset == data.find(b'"trial_index":')


@pytest.mark.parametrize("text", ["0x186a3", "186A3", "0186a3", "-0", ""])
def test_parse_rejects_noncanonical_hex(demo_transcript, text):
    obj = _wire(demo_transcript)
    obj["p"] = text
    with pytest.raises(ParseError):
        parse(_reencode(obj))


def test_parse_rejects_duplicate_key(demo_transcript):
    data = serialize(demo_transcript)
    tampered = data[:-1] + b',"p":"186a3"}'
    with pytest.raises(ParseError) as e:
        parse(tampered)
    assert e.value.offset == tampered.rindex(b'"p"')


def test_parse_rejects_schema_version(demo_transcript):
    obj = _wire(demo_transcript)
    obj["schema_version"] = "selmergen/2"
    with pytest.raises(ParseError):
        parse(_reencode(obj))


@pytest.mark.parametrize("data", [b"", b"[]", b"{", b"\xff\xfe"])
def test_parse_rejects_garbage(data):
    with pytest.raises(ParseError):
        parse(data)


def test_parse_rejects_truncation(demo_transcript):
    data = serialize(demo_transcript)
    for cut in (1, len(data) // 2, len(data) - 1):
        with pytest.raises(ParseError):
            parse(data[:cut])


def test_parse_tolerates_whitespace(demo_transcript):
    pretty = json.dumps(_wire(demo_transcript), indent=2).encode()
    assert parse(pretty) == demo_transcript


def test_seed_context_roundtrip(demo_transcript, demo_config):
    assert demo_transcript.seed_context() == demo_config.seed_context
    assert demo_transcript.generation_config() == demo_config
