"""
Group law on ``y^2 = x^3 + A x + B`` over F_p in affine coordinates.
"""

from typing import Optional

from pydantic import BaseModel, ConfigDict

from selmergen.arithmetic.field import Fe, fe_sqrt
from selmergen.arithmetic.hash_stream import LabeledStream
from selmergen.curves.reconcile import CurveParams
from selmergen.helpers.errors import PointSamplingExhausted

MAX_POINT_DRAWS = 1000


class Point(BaseModel):
    """
    A point of the curve; both coordinates None is the point at infinity.

    Attributes
    ----------
    x, y : Fe or None
        Affine coordinates.

    """
    x: Optional[Fe] = None
    y: Optional[Fe] = None

    model_config = ConfigDict(extra="forbid", frozen=True,
                              arbitrary_types_allowed=True)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        if self.is_infinity:
            return "Point(infinity)"
        return f"Point({self.x.value}, {self.y.value})"


INFINITY = Point()


def is_on_curve(P: Point, curve: CurveParams) -> bool:
    if P.is_infinity:
        return True
    return P.y * P.y == P.x ** 3 + curve.A * P.x + curve.B


def point_negate(P: Point, curve: CurveParams) -> Point:
    if P.is_infinity:
        return P
    return Point(x=P.x, y=-P.y)


def point_double(P: Point, curve: CurveParams) -> Point:
    if P.is_infinity or not P.y:
        return INFINITY
    slope = (3 * P.x * P.x + curve.A) / (2 * P.y)
    x3 = slope * slope - 2 * P.x
    return Point(x=x3, y=slope * (P.x - x3) - P.y)


def point_add(P: Point, Q: Point, curve: CurveParams) -> Point:
    """
    Chord-tangent addition; the point at infinity is the identity.

    Parameters
    ----------
    P, Q : Point
        Points on ``curve``.
    curve : CurveParams
        The curve.

    Returns
    -------
    Point
        ``P + Q``.

    """
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    if P.x == Q.x:
        if P.y == Q.y:
            return point_double(P, curve)
        return INFINITY
    slope = (Q.y - P.y) / (Q.x - P.x)
    x3 = slope * slope - P.x - Q.x
    return Point(x=x3, y=slope * (P.x - x3) - P.y)


def scalar_mul(k: int, P: Point, curve: CurveParams) -> Point:
    """k-fold sum of P by left-to-right double-and-add, ``k >= 0``."""
    if k < 0:
        raise ValueError("scalar must be non-negative")
    result = INFINITY
    for bit in bin(k)[2:]:
        result = point_double(result, curve)
        if bit == "1":
            result = point_add(result, P, curve)
    return result


def lift_x(x: Fe, curve: CurveParams) -> Optional[Point]:
    """The point with abscissa x and the smaller of the two ordinates."""
    y = fe_sqrt(x ** 3 + curve.A * x + curve.B)
    if y is None:
        return None
    y = min(y, -y, key=lambda t: t.value)
    return Point(x=x, y=y)


def random_point(curve: CurveParams, u_stream: LabeledStream,
                 max_draws: int = MAX_POINT_DRAWS) -> Point:
    """
    Deterministic point drawn from the "U" stream.

    Abscissae are drawn until ``x^3 + A x + B`` is a square; the ordinate
    is the smaller square root.

    Parameters
    ----------
    curve : CurveParams
        A non-singular curve.
    u_stream : LabeledStream
        The "U" stream.
    max_draws : int, optional
        Draw budget. The default is 1000.

    Raises
    ------
    PointSamplingExhausted
        If no draw succeeded.

    Returns
    -------
    Point
        An affine point on the curve.

    """
    for _ in range(max_draws):
        P = lift_x(u_stream.next(), curve)
        if P is not None:
            return P
    raise PointSamplingExhausted(
        f"no point found in {max_draws} draws from the U stream")
