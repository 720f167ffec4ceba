from selmergen.arithmetic.hash_stream import (LABEL_REC_C4, LABEL_REC_C6,
                                              rec_mix)
from selmergen.curves.reconcile import (CurveParams, Reconciliation,
                                        SingularRetry, blend, discriminant,
                                        reconcile)
from tests.conftest import DEMO_C4, DEMO_C6


def test_demo_curve(modulus):
    curve = CurveParams.from_invariants(modulus, DEMO_C4, DEMO_C6)
    assert curve.delta == 53954
    assert curve.A == 65414
    assert curve.B == 4915
    assert curve.is_nonsingular
    assert curve.j_invariant * curve.delta == curve.c4 ** 3


def test_discriminant_formula(modulus):
    c4, c6 = modulus.element(5), modulus.element(7)
    assert discriminant(c4, c6) == -16 * (4 * 125 + 27 * 49)


def test_weierstrass_singular_with_nonzero_delta(modulus):
    # c4^3 = c6^2 makes x^3 - 27 c4 x - 54 c6 a square times a linear factor
    curve = CurveParams.from_invariants(modulus, 1, 1)
    assert curve.delta != 0
    assert curve.weierstrass_discriminant == 0
    assert not curve.is_nonsingular


def test_blend(modulus):
    one = modulus.one()
    result = blend(modulus, one, 2 * one, 3 * one, 4 * one)
    assert isinstance(result, Reconciliation)
    assert result.curve.c4 == 2 + 9
    assert result.curve.c6 == 4 + 12


def test_blend_singular_retry(modulus):
    one = modulus.one()
    mix = -2 * one / 3
    result = blend(modulus, one, one, mix, mix)
    assert isinstance(result, SingularRetry)
    assert (result.c4_mix, result.c6_mix) == (mix, mix)


def test_reconcile_uses_hash_mix(context, modulus):
    c4_2, c4_3 = modulus.element(11), modulus.element(13)
    c6_2, c6_3 = modulus.element(17), modulus.element(19)
    result = reconcile(context, c4_2, c4_3, c6_2, c6_3)
    assert result.c4_mix == rec_mix(context, LABEL_REC_C4, c4_2, c4_3)
    assert result.c6_mix == rec_mix(context, LABEL_REC_C6, c6_2, c6_3)
    assert result == reconcile(context, c4_2, c4_3, c6_2, c6_3)


def test_twist_model(modulus):
    curve = CurveParams.from_invariants(modulus, DEMO_C4, DEMO_C6)
    twist = curve.twist(2)
    assert twist.A == curve.A * 4
    assert twist.B == curve.B * 8
