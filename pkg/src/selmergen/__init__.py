"""Deterministic elliptic-curve parameter generation from descent artifacts."""

SCHEMA_VERSION = "selmergen/1"
