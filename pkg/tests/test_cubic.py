import itertools

import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from selmergen.arithmetic.field import PrimeModulus
from selmergen.arithmetic.hash_stream import (LABEL_C3_C4, LABEL_C3_C6,
                                              LABEL_F3, LABEL_U, LabeledStream,
                                              hash_to_field)
from selmergen.descent.cubic import (MONOMIALS, TernaryCubic, accept_cubic,
                                     coefficient_tensor, cubic_invariants,
                                     cubic_locally_soluble,
                                     cubic_soluble_mod_ell,
                                     degree4_contraction, degree6_contraction,
                                     evaluate_cubic, is_singular_cubic,
                                     sample_cubic)
from selmergen.models.config import GenerationSettings

P = 100003
F = PrimeModulus(p=P)
residues = st.integers(0, P - 1)


def cubic(coefficients, modulus=F):
    return TernaryCubic(coeffs=tuple(modulus.element(k)
                                     for k in coefficients))


def monomial_coefficients(**terms):
    """Coefficient list from keyword terms such as x3=1, y2z=-1."""
    names = {(3, 0, 0): "x3", (2, 1, 0): "x2y", (2, 0, 1): "x2z",
             (1, 2, 0): "xy2", (1, 1, 1): "xyz", (1, 0, 2): "xz2",
             (0, 3, 0): "y3", (0, 2, 1): "y2z", (0, 1, 2): "yz2",
             (0, 0, 3): "z3"}
    return [terms.get(names[m], 0) for m in MONOMIALS]


def _poly_mul(u, v, p):
    out = {}
    for mu, a in u.items():
        for mv, b in v.items():
            key = tuple(i + j for i, j in zip(mu, mv))
            out[key] = (out.get(key, 0) + a * b) % p
    return out


def substitute(coefficients, M, p):
    """Coefficients of F(M v) for a 3x3 matrix M."""
    basis = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    linear = [dict(zip(basis, row)) for row in M]
    result = {}
    for k, exponents in zip(coefficients, MONOMIALS):
        term = {(0, 0, 0): k}
        for form, e in zip(linear, exponents):
            for _ in range(e):
                term = _poly_mul(term, form, p)
        for key, value in term.items():
            result[key] = (result.get(key, 0) + value) % p
    return [result.get(m, 0) for m in MONOMIALS]


def det3(M, p):
    (a, b, c), (d, e, f), (g, h, i) = M
    return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)) % p


@settings(max_examples=200)
@given(st.lists(residues, min_size=10, max_size=10),
       st.lists(residues, min_size=9, max_size=9))
def test_sl3_invariance(coefficients, entries):
    M = [entries[0:3], entries[3:6], entries[6:9]]
    d = det3(M, P)
    assume(d != 0)
    scale = pow(d, -1, P)
    M[0] = [m * scale % P for m in M[0]]
    assert det3(M, P) == 1

    before = cubic_invariants(cubic(coefficients))
    after = cubic_invariants(cubic(substitute(coefficients, M, P)))
    assert (after.S, after.T) == (before.S, before.T)


@settings(max_examples=50)
@given(residues, residues)
def test_weierstrass_calibration(A, B):
    # y^2 z - x^3 - A x z^2 - B z^3
    F3 = cubic(monomial_coefficients(y2z=1, x3=-1, xz2=-A, z3=-B))
    inv = cubic_invariants(F3)
    assert inv.c4_3 == -48 * A
    assert inv.c6_3 == -864 * B


@pytest.mark.parametrize("terms, S, T", [
    (dict(x3=1, y3=1, z3=1), 0, -279936),
    (dict(xyz=1), 24, 48),
    (dict(x3=1), 0, 0),
])
def test_integral_contractions(terms, S, T):
    g = coefficient_tensor(monomial_coefficients(**terms))
    assert degree4_contraction(g) == S
    assert degree6_contraction(g) == T


def test_singularity():
    assert not is_singular_cubic(cubic_invariants(
        cubic(monomial_coefficients(x3=1, y3=1, z3=1))))
    # the triangle xyz and the triple line x^3
    assert is_singular_cubic(cubic_invariants(
        cubic(monomial_coefficients(xyz=1))))
    assert is_singular_cubic(cubic_invariants(
        cubic(monomial_coefficients(x3=1))))


def test_classical_normalization():
    fermat = cubic_invariants(cubic(monomial_coefficients(x3=1, y3=1, z3=1)))
    assert (fermat.S, fermat.T) == (0, 1)
    # the nodal cubic y^2 z = x^3 + x^2 z
    nodal = cubic_invariants(cubic(monomial_coefficients(y2z=1, x3=-1,
                                                         x2z=-1)))
    assert nodal.S != 0
    assert 64 * nodal.S ** 3 == nodal.T ** 2
    assert is_singular_cubic(nodal)


@settings(max_examples=50)
@given(residues, residues)
def test_classical_weierstrass_values(A, B):
    inv = cubic_invariants(cubic(monomial_coefficients(y2z=1, x3=-1,
                                                       xz2=-A, z3=-B)))
    assert inv.S == F.element(-A) / 27
    assert inv.T == F.element(-4 * B) / 27
    assert 64 * inv.S ** 3 - inv.T ** 2 == \
        F.element(-16) / 19683 * (4 * A ** 3 + 27 * B ** 2)
    assert inv.c4_3 ** 3 - inv.c6_3 ** 2 == \
        2 ** 6 * 3 ** 12 * (64 * inv.S ** 3 - inv.T ** 2)


def _common_zero(polys, gens, p):
    if not gens:
        return all(int(q) % p == 0 for q in polys)
    polys = [q for q in polys
             if not sympy.Poly(q, *gens, modulus=p).is_zero]
    if not polys:
        return True
    return sympy.groebner(polys, *gens, modulus=p).exprs != [1]


def singular_by_groebner(coefficients, p):
    """Common zero of the three partials over the algebraic closure."""
    x, y, z = sympy.symbols("x y z")
    form = sum(k * x**i * y**j * z**l
               for k, (i, j, l) in zip(coefficients, MONOMIALS))
    partials = [sympy.diff(form, v) for v in (x, y, z)]
    charts = (({z: 1}, (x, y)), ({y: 1, z: 0}, (x,)),
              ({x: 1, y: 0, z: 0}, ()))
    return any(_common_zero([sympy.expand(q.subs(point)) for q in partials],
                            gens, p)
               for point, gens in charts)


small_cubics = st.sampled_from([5, 7, 11, 13]).flatmap(
    lambda p: st.tuples(st.just(p), st.lists(st.integers(0, p - 1),
                                             min_size=10, max_size=10)))


@settings(max_examples=100)
@given(small_cubics)
def test_singularity_matches_smoothness(case):
    p, coefficients = case
    assume(any(coefficients))
    inv = cubic_invariants(cubic(coefficients, modulus=PrimeModulus(p=p)))
    assert is_singular_cubic(inv) == singular_by_groebner(coefficients, p)


def test_placeholder_mode(context):
    F3 = cubic(range(1, 11))
    classical = cubic_invariants(F3)
    placeholder = cubic_invariants(F3, "hash_placeholder", context)
    payload = b"".join(k.to_bytes() for k in F3.coeffs)
    assert placeholder.c4_3 == hash_to_field(context, LABEL_C3_C4, payload)
    assert placeholder.c6_3 == hash_to_field(context, LABEL_C3_C6, payload)
    assert (placeholder.S, placeholder.T) == (classical.S, classical.T)
    with pytest.raises(ValueError):
        cubic_invariants(F3, "hash_placeholder")
    with pytest.raises(ValueError):
        cubic_invariants(F3, "other")


def brute_soluble(coefficients, ell):
    return any(evaluate_cubic(coefficients, x, y, z) % ell == 0
               for x, y, z in itertools.product(range(ell), repeat=3)
               if (x, y, z) != (0, 0, 0))


@settings(max_examples=500)
@given(st.sampled_from([3, 5, 7, 11]),
       st.lists(st.integers(0, 10**6), min_size=10, max_size=10))
def test_soluble_mod_ell_ground_truth(ell, coefficients):
    assert cubic_soluble_mod_ell(coefficients, ell) == \
        brute_soluble(coefficients, ell)


def test_soluble_mod_ell_example():
    # norm form of F_7(2^(1/3)) over F_7: no nontrivial zero
    coefficients = monomial_coefficients(x3=1, y3=2, z3=4, xyz=-6)
    assert not cubic_soluble_mod_ell(coefficients, 7)
    assert cubic_soluble_mod_ell(coefficients, 5)


@settings(max_examples=100)
@given(st.lists(st.integers(0, 30), min_size=10, max_size=10))
def test_full_scan_matches_enumeration(coefficients):
    small = PrimeModulus(p=31)
    F3 = cubic(coefficients, modulus=small)
    assert cubic_locally_soluble(F3, ell_set=(), full_scan=True) == \
        brute_soluble(coefficients, 31)


def test_sample_cubic(context):
    stream = LabeledStream(context, LABEL_F3)
    F3 = sample_cubic(stream)
    assert stream.cursor == 10
    assert len(F3.coeffs) == 10
    with pytest.raises(ValueError):
        sample_cubic(LabeledStream(context, LABEL_U))
    with pytest.raises(ValueError):
        TernaryCubic(coeffs=F3.coeffs[:9])


def test_accept_cubic(context):
    acc = accept_cubic(LabeledStream(context, LABEL_F3),
                       LabeledStream(context, LABEL_U), GenerationSettings())
    assert not acc.form.is_zero()
    assert not is_singular_cubic(acc.invariants)
    assert acc.invariants == cubic_invariants(acc.form)
    assert set(acc.rejections) == {"zero", "singular", "insoluble"}
