import pytest
import sympy
from hypothesis import given, strategies as st

from selmergen.arithmetic.integers import Factorization, factorize, is_prime
from selmergen.helpers.errors import WorkBoundExceeded


@given(st.integers(0, 10**7))
def test_is_prime_matches_sympy(n):
    assert is_prime(n) == sympy.isprime(n)


@pytest.mark.parametrize("n", [
    2**61 - 1, 2**89 - 1, 2**127 - 1,
    (2**61 - 1) * (2**31 - 1),
    3215031751,  # strong pseudoprime to bases 2, 3, 5, 7
    2**255 - 19,
])
def test_is_prime_large(n):
    assert is_prime(n) == sympy.isprime(n)


@given(st.integers(1, 10**12))
def test_factorize_matches_sympy(n):
    f = factorize(n)
    assert f.cofactor_complete
    assert f.value == n
    assert f.as_dict() == sympy.factorint(n)


def test_factorize_examples():
    f = factorize(99711)
    assert f.factors == ((3, 4), (1231, 1))
    assert f.largest_prime() == 1231
    assert factorize(100297).factors == ((100297, 1),)
    assert factorize(1) == Factorization()
    assert factorize(1).largest_prime() is None


def test_factorize_rho_beyond_trial_division():
    n = 1000003 * 1000033
    assert factorize(n).factors == ((1000003, 1), (1000033, 1))


def test_factorize_work_bound():
    n = 1000003 * 1000033
    with pytest.raises(WorkBoundExceeded) as info:
        factorize(3 * n, work_bound=1)
    partial = info.value.partial
    assert not partial.cofactor_complete
    assert partial.remaining == n
    assert partial.factors == ((3, 1),)
    assert partial.value == 3 * n


def test_factorize_rejects_non_positive():
    with pytest.raises(ValueError):
        factorize(0)
