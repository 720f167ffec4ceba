import itertools

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from selmergen.arithmetic.field import PrimeModulus
from selmergen.arithmetic.hash_stream import LABEL_F2, LABEL_U, LabeledStream
from selmergen.descent.quartic import (BinaryQuartic, accept_quartic,
                                       is_perfect_square, is_singular_quartic,
                                       quartic_invariants,
                                       quartic_locally_soluble,
                                       quartic_soluble_mod_ell, sample_quartic)
from selmergen.models.config import GenerationSettings

P = 100003
F = PrimeModulus(p=P)
residues = st.integers(0, P - 1)


def quartic(*coefficients, modulus=F):
    return BinaryQuartic.from_coefficients(
        [modulus.element(k) for k in coefficients])


def _mul(u, v, p):
    out = [0] * (len(u) + len(v) - 1)
    for i, a in enumerate(u):
        for j, b in enumerate(v):
            out[i + j] = (out[i + j] + a * b) % p
    return out


def substitute(coefficients, alpha, beta, gamma, delta, p):
    """Coefficients of f(alpha x + beta z, gamma x + delta z)."""
    result = [0] * 5
    for i, k in enumerate(coefficients):
        term = [k]
        for _ in range(4 - i):
            term = _mul(term, [alpha, beta], p)
        for _ in range(i):
            term = _mul(term, [gamma, delta], p)
        result = [(r + t) % p for r, t in zip(result, term)]
    return result


@settings(max_examples=200)
@given(st.lists(residues, min_size=5, max_size=5),
       residues.filter(bool), residues, residues)
def test_sl2_invariance(coefficients, alpha, beta, gamma):
    delta = (1 + beta * gamma) * pow(alpha, -1, P) % P
    assert (alpha * delta - beta * gamma) % P == 1
    before = quartic_invariants(quartic(*coefficients))
    after = quartic_invariants(
        quartic(*substitute(coefficients, alpha, beta, gamma, delta, P)))
    assert (after.I, after.J) == (before.I, before.J)


@settings(max_examples=50)
@given(residues, residues)
def test_weierstrass_calibration(A, B):
    inv = quartic_invariants(quartic(0, 1, 0, A, B))
    assert inv.c4_2 == -48 * A
    assert inv.c6_2 == -864 * B


def test_invariant_examples():
    # x^4 - z^4 has simple roots
    inv = quartic_invariants(quartic(1, 0, 0, 0, -1))
    assert inv.I == -12 and inv.J == 0
    assert not is_singular_quartic(inv)
    # x^2 z^2 has double roots
    assert is_singular_quartic(quartic_invariants(quartic(0, 0, 1, 0, 0)))


def repeated_root(coefficients, p):
    """Repeated root of a x^4 + b x^3 z + ... + e z^4 over the closure."""
    a, b = coefficients[0] % p, coefficients[1] % p
    if not a and not b:
        # double root at infinity
        return True
    x = sympy.symbols("x")
    g = sympy.Poly(coefficients, x, modulus=p)
    return g.gcd(g.diff(x)).degree() > 0


small_quartics = st.sampled_from([5, 7, 11, 13, 17, 19, 23, 29, 31]).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.integers(0, p - 1),
                                             min_size=5, max_size=5)))


@settings(max_examples=100)
@given(small_quartics)
def test_singularity_matches_repeated_root(case):
    p, coefficients = case
    inv = quartic_invariants(quartic(*coefficients,
                                     modulus=PrimeModulus(p=p)))
    assert is_singular_quartic(inv) == repeated_root(coefficients, p)


def test_perfect_square_matches_enumeration():
    small = PrimeModulus(p=7)
    squares = set()
    for alpha, beta, gamma in itertools.product(range(7), repeat=3):
        square = [alpha * alpha, 2 * alpha * beta,
                  beta * beta + 2 * alpha * gamma, 2 * beta * gamma,
                  gamma * gamma]
        squares.add(tuple(k % 7 for k in square))
    for coefficients in itertools.product(range(7), repeat=5):
        if not any(coefficients):
            continue
        f = quartic(*coefficients, modulus=small)
        assert is_perfect_square(f) == (coefficients in squares)


def brute_soluble(coefficients, ell):
    a, b, c, d, e = coefficients
    points = [(x, 1) for x in range(ell)] + [(1, 0)]
    return any((a * x**4 + b * x**3 * z + c * x**2 * z**2 + d * x * z**3
                + e * z**4 - y * y) % ell == 0
               for x, z in points for y in range(ell))


@settings(max_examples=500)
@given(st.sampled_from([3, 5, 7, 11]),
       st.lists(st.integers(0, 10**6), min_size=5, max_size=5))
def test_soluble_mod_ell_ground_truth(ell, coefficients):
    assert quartic_soluble_mod_ell(coefficients, ell) == \
        brute_soluble(coefficients, ell)


def test_soluble_mod_ell_examples():
    # 3 (x^4 + z^4) mod 5 takes the square value 6 = 1 at (1 : 1)
    assert quartic_soluble_mod_ell([3, 0, 0, 0, 3], 5)
    # 2 x^4 + 2 z^4 takes 4 = 1 at (1 : 1)
    assert quartic_soluble_mod_ell([2, 0, 0, 0, 2], 3)
    # x^2 + z^2 has no zero mod 3, so 2 (x^2 + z^2)^2 is constantly 2
    assert not quartic_soluble_mod_ell([2, 0, 4, 0, 2], 3)


@settings(max_examples=100)
@given(st.lists(st.integers(0, 30), min_size=5, max_size=5))
def test_full_scan_matches_enumeration(coefficients):
    small = PrimeModulus(p=31)
    f = quartic(*coefficients, modulus=small)
    assert quartic_locally_soluble(f, ell_set=(), full_scan=True) == \
        brute_soluble(coefficients, 31)


def test_bounded_search_needs_stream():
    f = quartic(P - 1, 0, 0, 0, P - 1)  # -x^4 - z^4, -1 a non-residue
    with pytest.raises(ValueError):
        quartic_locally_soluble(f, ell_set=())


def test_sample_quartic(context):
    stream = LabeledStream(context, LABEL_F2)
    f = sample_quartic(stream)
    assert stream.cursor == 5
    assert f.p == P
    with pytest.raises(ValueError):
        sample_quartic(LabeledStream(context, LABEL_U))


def test_accept_quartic_deterministic(context):
    def run():
        return accept_quartic(LabeledStream(context, LABEL_F2),
                              LabeledStream(context, LABEL_U),
                              GenerationSettings())
    first, second = run(), run()
    assert first.form == second.form
    assert first.rejections == second.rejections
    assert first.first_cursor == 0
    f = first.form
    assert not f.is_zero()
    assert not is_perfect_square(f)
    assert not is_singular_quartic(first.invariants)
    assert first.invariants == quartic_invariants(f)


def test_evaluate():
    f = quartic(1, 2, 3, 4, 5)
    assert f.evaluate(1, 1) == 15
    assert f.evaluate(0, 1) == 5
    assert f.evaluate(1, 0) == 1
