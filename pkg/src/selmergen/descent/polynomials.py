"""
Dense univariate polynomials over F_p as coefficient lists, lowest degree
first, with plain integer residues. Only what the root-existence test
needs is implemented.
"""

from selmergen.arithmetic.field import legendre_int


def trim(poly: list[int], p: int) -> list[int]:
    """Reduce coefficients mod p and drop vanishing leading terms."""
    out = [c % p for c in poly]
    while out and out[-1] == 0:
        out.pop()
    return out


def poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the nonzero polynomial m."""
    a = trim(a, p)
    m = trim(m, p)
    lead_inv = pow(m[-1], -1, p)
    while len(a) >= len(m):
        factor = a[-1] * lead_inv % p
        shift = len(a) - len(m)
        for i, c in enumerate(m):
            a[shift + i] = (a[shift + i] - factor * c) % p
        a = trim(a, p)
    return a


def poly_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return poly_mod(prod, m, p)


def poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    """Monic greatest common divisor."""
    a, b = trim(a, p), trim(b, p)
    while b:
        a, b = b, poly_mod(a, b, p)
    if not a:
        return a
    lead_inv = pow(a[-1], -1, p)
    return [c * lead_inv % p for c in a]


def x_power_mod(e: int, m: list[int], p: int) -> list[int]:
    """X^e modulo m by binary exponentiation."""
    result = poly_mod([1], m, p)
    base = poly_mod([0, 1], m, p)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, m, p)
        base = poly_mulmod(base, base, m, p)
        e >>= 1
    return result


def has_root(poly: list[int], p: int) -> bool:
    """
    Decide whether a polynomial has a root in F_p.

    Low degrees are settled directly (zero polynomial: every x is a root;
    nonzero constant: none; linear: always; quadratic: discriminant
    Legendre test). Otherwise the test is ``gcd(X^p - X, g) != 1``.

    Parameters
    ----------
    poly : list of int
        Coefficients, lowest degree first.
    p : int
        Odd prime.

    Returns
    -------
    bool
        True iff some x in F_p satisfies ``poly(x) = 0``.

    """
    g = trim(poly, p)
    degree = len(g) - 1
    if degree < 0:
        return True
    if degree == 0:
        return False
    if degree == 1:
        return True
    if degree == 2:
        c, b, a = g
        return legendre_int(b * b - 4 * a * c, p) >= 0
    if g[0] == 0:
        return True

    xp = x_power_mod(p, g, p)
    # X^p - X
    diff = xp + [0] * max(0, 2 - len(xp))
    diff[1] = (diff[1] - 1) % p
    return len(poly_gcd(g, diff, p)) > 1
