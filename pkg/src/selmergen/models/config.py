from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from selmergen.arithmetic.hash_stream import SeedContext
from selmergen.arithmetic.integers import is_prime
from selmergen.helpers.helper_functions import HexInt
from selmergen.main import (COUNTING_BOUND, DEFAULT_ELL_SET, DEFAULTS,
                            FACTOR_WORK_BOUND, STAGE_BUDGET)
from selmergen.models.policy import Policy

FULL_SCAN_LIMIT = 1 << 20


class GenerationSettings(BaseModel):
    """
    Tunable knobs of the generation pipeline, recorded verbatim in every
    transcript. Defaults come from the packaged ``user/defaults.json``.

    Attributes
    ----------
    ell_set : tuple of int
        Small primes for the F_ell solubility proxy. Default (2, 3, 5, 7, 11).
    quartic_search_bound : int
        Abscissae drawn from the "U" stream when searching F_p points of
        ``y^2 = f(x, 1)``. Default 256.
    cubic_search_bound : int
        Abscissae drawn from the "U" stream when searching F_p zeros of the
        ternary cubic. Default 64.
    fp_full_scan : bool
        Scan all of F_p instead of drawing abscissae; only for p < 2^20.
    cubic_invariants : {"classical", "hash_placeholder"}
        How (c4, c6) of the cubic are computed. Default "classical".
    stage_budget : int
        Maximal number of draws per sampling stage and trial. Default 10^4.
    counting_bound : int
        Largest p handled by the built-in point counter. Default 2^26.
    factor_work_bound : int
        Pollard rho iterations per composite. Default 2^20.
    order_check_points : int
        Points checked against the computed orders. Default 2.

    """
    ell_set: tuple[HexInt, ...] = DEFAULT_ELL_SET
    quartic_search_bound: HexInt = Field(DEFAULTS["quartic_search_bound"], ge=1)
    cubic_search_bound: HexInt = Field(DEFAULTS["cubic_search_bound"], ge=1)
    fp_full_scan: bool = DEFAULTS["fp_full_scan"]
    cubic_invariants: Literal["classical", "hash_placeholder"] = \
        DEFAULTS["cubic_invariants"]
    stage_budget: HexInt = Field(STAGE_BUDGET, ge=1)
    counting_bound: HexInt = Field(COUNTING_BOUND, ge=5)
    factor_work_bound: HexInt = Field(FACTOR_WORK_BOUND, ge=1)
    order_check_points: HexInt = Field(DEFAULTS["order_check_points"], ge=0)

    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_validator("ell_set")
    @classmethod
    def check_ell_set(cls, v: tuple[int, ...]) -> tuple[int, ...]:
        for ell in v:
            if not is_prime(ell):
                raise ValueError(f"ell_set entry {ell} is not prime")
        if len(set(v)) != len(v):
            raise ValueError("ell_set contains duplicates")
        return tuple(v)


class GenerationConfig(BaseModel):
    """
    Complete input of one generation job.

    Attributes
    ----------
    seed_context : SeedContext
        The public inputs (p, DS, sigma).
    policy : Policy
        Validation policy; its ``max_trials`` bounds the loop.
    settings : GenerationSettings
        Sampling, search and counting knobs.

    """
    seed_context: SeedContext
    policy: Policy
    settings: GenerationSettings = GenerationSettings()

    model_config = ConfigDict(extra="forbid", frozen=True)

    @model_validator(mode="after")
    def check_full_scan(self):
        if self.settings.fp_full_scan and self.seed_context.p >= FULL_SCAN_LIMIT:
            raise ValueError("fp_full_scan is only allowed for p < 2^20")
        return self

    @property
    def max_trials(self) -> int:
        return self.policy.max_trials
