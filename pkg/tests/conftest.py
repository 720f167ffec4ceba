import pytest
from hypothesis import HealthCheck, settings

from selmergen.arithmetic.field import PrimeModulus
from selmergen.arithmetic.hash_stream import SeedContext
from selmergen.generation.pipeline import generate
from selmergen.main import DEFAULT_DS, DEMO_PRIME, DEMO_SIGMA_HEX
from selmergen.models.config import GenerationConfig
from selmergen.models.policy import Policy

settings.register_profile(
    "selmergen", derandomize=True, deadline=None, print_blob=True,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much])
settings.load_profile("selmergen")

# the curve of the demonstration run
DEMO_C4 = 82765
DEMO_C6 = 79541


@pytest.fixture(scope="session")
def modulus():
    return PrimeModulus(p=DEMO_PRIME)


@pytest.fixture(scope="session")
def small_modulus():
    return PrimeModulus(p=101)


@pytest.fixture(scope="session")
def context(modulus):
    return SeedContext(modulus=modulus, ds=DEFAULT_DS,
                       sigma=bytes.fromhex(DEMO_SIGMA_HEX))


@pytest.fixture(scope="session")
def demo_config(context):
    return GenerationConfig(seed_context=context, policy=Policy.demo())


@pytest.fixture(scope="session")
def demo_transcript(demo_config):
    return generate(demo_config)
