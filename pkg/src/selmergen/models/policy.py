from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from selmergen.arithmetic.field import PrimeModulus
from selmergen.helpers.helper_functions import HexInt
from selmergen.main import STRICT_MIN_BITS


class Policy(BaseModel):
    """
    Acceptance policy of the validation battery.

    Two profiles exist. ``strict`` follows the cryptographic filter: tiny
    cofactors and a prime of nearly full size. ``demo`` accepts any
    cofactor as long as the largest prime factor exceeds sqrt(p), which is
    what toy-sized fields allow.

    Attributes
    ----------
    profile : {"strict", "demo"}
        The profile name.
    allowed_cofactors : tuple of int or None
        Admissible cofactors h of the curve order; None admits any.
    min_r_bits : int or None
        Minimal bit length of the prime r; None disables the check.
    twist_allowed_cofactors : tuple of int or None
        As ``allowed_cofactors``, for the quadratic twist.
    twist_min_r_bits : int or None
        As ``min_r_bits``, for the quadratic twist.
    k_max : int
        Embedding degrees 1..k_max are scanned. Default 20.
    cm_disc_bound : int
        Curves whose CM fundamental discriminant satisfies
        ``|D0| <= cm_disc_bound`` are rejected; 0 disables the filter.
    exclude_traces : tuple of int
        Rejected traces of Frobenius. Default (-1, 1).
    max_trials : int
        Trial budget of the generation loop. Default 10^4.

    Notes
    -----
    * Additional fields are forbidden (``extra='forbid'``).
    * Instances are immutable; tuples are kept sorted so that equal
      policies serialize identically.

    """
    profile: Literal["strict", "demo"]
    allowed_cofactors: Optional[tuple[HexInt, ...]] = None
    min_r_bits: Optional[HexInt] = None
    twist_allowed_cofactors: Optional[tuple[HexInt, ...]] = None
    twist_min_r_bits: Optional[HexInt] = None
    k_max: HexInt = Field(20, ge=1)
    cm_disc_bound: HexInt = Field(100, ge=0)
    exclude_traces: tuple[HexInt, ...] = (-1, 1)
    max_trials: HexInt = Field(10**4, ge=1)

    model_config = ConfigDict(extra="forbid", frozen=True)

    @field_validator("allowed_cofactors", "twist_allowed_cofactors",
                     "exclude_traces")
    @classmethod
    def sort_sets(cls, v):
        return None if v is None else tuple(sorted(set(v)))

    @model_validator(mode="after")
    def check_cofactors(self):
        for name in ("allowed_cofactors", "twist_allowed_cofactors"):
            values = getattr(self, name)
            if values is not None and any(h < 1 for h in values):
                raise ValueError(f"{name} must contain positive integers")
        return self

    @classmethod
    def strict(cls, modulus: PrimeModulus, **overrides) -> "Policy":
        """Strict profile: h, h' in {1, 2, 4} and r, r' of bit_len(p) - 3 bits."""
        min_bits = max(1, modulus.bit_len - 3)
        fields = dict(profile="strict",
                      allowed_cofactors=(1, 2, 4),
                      min_r_bits=min_bits,
                      twist_allowed_cofactors=(1, 2, 4),
                      twist_min_r_bits=min_bits)
        fields.update(overrides)
        return cls(**fields)

    @classmethod
    def demo(cls, **overrides) -> "Policy":
        """Demo profile: any cofactor, r and r' larger than sqrt(p)."""
        return cls(profile="demo", **overrides)

    @classmethod
    def for_modulus(cls, modulus: PrimeModulus,
                    profile: Optional[str] = None) -> "Policy":
        """
        Policy used when none is given explicitly.

        Parameters
        ----------
        modulus : PrimeModulus
            The prime field.
        profile : {"strict", "demo"} or None, optional
            Forces a profile. The default None picks demo below 224 bits
            and strict from 224 bits on.

        Returns
        -------
        Policy
            The policy with default knobs.

        """
        if profile is None:
            profile = "strict" if modulus.bit_len >= STRICT_MIN_BITS else "demo"
        if profile == "strict":
            return cls.strict(modulus)
        if profile == "demo":
            return cls.demo()
        raise ValueError(f"unknown policy profile {profile!r}")
