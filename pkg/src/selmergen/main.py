import json
from importlib.resources import files

from selmergen import SCHEMA_VERSION


# packaged defaults; nothing outside the package is consulted
with (files("selmergen.user") / "defaults.json").open("r") as f:
    DEFAULTS = json.load(f)

# generation defaults
DEFAULT_DS: str = DEFAULTS["ds"]
DEFAULT_ELL_SET: tuple[int, ...] = tuple(DEFAULTS["ell_set"])
STAGE_BUDGET: int = DEFAULTS["stage_budget"]

# counting and factorization limits
COUNTING_BOUND: int = 1 << DEFAULTS["counting_bound_bits"]
FACTOR_WORK_BOUND: int = DEFAULTS["factor_work_bound"]

# primes of at least this many bits default to the strict policy
STRICT_MIN_BITS: int = DEFAULTS["strict_min_bits"]

# the seed adopted for the demonstration run at p = 100003
DEMO_PRIME = 100003
DEMO_SIGMA_HEX = "0123456789abcdef" * 4

__all__ = [
    "SCHEMA_VERSION", "DEFAULTS", "DEFAULT_DS", "DEFAULT_ELL_SET",
    "STAGE_BUDGET", "COUNTING_BOUND", "FACTOR_WORK_BOUND", "STRICT_MIN_BITS",
    "DEMO_PRIME", "DEMO_SIGMA_HEX",
]
