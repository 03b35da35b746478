"""Multivariate GCD over QQ by recursive primitive pseudo-remainder sequences.

Polynomials here are plain dicts ``{exponent tuple: Fraction}`` and need not
be homogeneous.  The main variable at each level is the highest-index variable
occurring in either operand; coefficients with respect to it are polynomials
in the remaining variables, whose GCD is computed recursively.
"""

from __future__ import annotations

from fractions import Fraction

Poly = dict


def _mul(a: Poly, b: Poly) -> Poly:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def _sub(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for e, c in b.items():
        v = out.get(e, 0) - c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _scale(a: Poly, c) -> Poly:
    return {e: v * c for e, v in a.items()} if c else {}


def exact_div(a: Poly, b: Poly) -> Poly:
    """Quotient ``a / b``, raising ``ValueError`` when the division is not exact."""
    if not b:
        raise ZeroDivisionError("division by zero polynomial")
    lb = max(b)
    cb = b[lb]
    rem = dict(a)
    quot: dict = {}
    while rem:
        lr = max(rem)
        shift = tuple(x - y for x, y in zip(lr, lb))
        if any(s < 0 for s in shift):
            raise ValueError("polynomial division is not exact")
        c = rem[lr] / cb
        quot[shift] = quot.get(shift, 0) + c
        for e, v in b.items():
            e2 = tuple(x + y for x, y in zip(e, shift))
            w = rem.get(e2, 0) - c * v
            if w:
                rem[e2] = w
            else:
                rem.pop(e2, None)
    return {e: c for e, c in quot.items() if c}


def _deg(a: Poly, v: int) -> int:
    return max((e[v] for e in a), default=-1)


def _coeffs(a: Poly, v: int) -> dict[int, Poly]:
    out: dict[int, Poly] = {}
    for e, c in a.items():
        out.setdefault(e[v], {})[e[:v] + (0,) + e[v + 1 :]] = c
    return out


def _main_var(a: Poly, b: Poly) -> int:
    n = len(next(iter(a or b)))
    for v in range(n - 1, -1, -1):
        if _deg(a, v) > 0 or _deg(b, v) > 0:
            return v
    return -1


def _monic(a: Poly) -> Poly:
    if not a:
        return a
    lead = a[max(a, key=lambda e: (sum(e), e))]
    return {e: c / lead for e, c in a.items()}


def _one(n: int) -> Poly:
    return {(0,) * n: Fraction(1)}


def content(a: Poly, v: int) -> Poly:
    """GCD of the coefficients of ``a`` viewed as a polynomial in ``x_v``."""
    g: Poly = {}
    for c in _coeffs(a, v).values():
        g = gcd(g, c)
        if len(g) == 1 and not any(next(iter(g))):
            break
    return g


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    n = _deg(b, v)
    cb = _coeffs(b, v)
    lcb = cb[n]
    r = a
    while r:
        m = _deg(r, v)
        if m < n:
            break
        lcr = _coeffs(r, v)[m]
        shift = [0] * len(next(iter(b)))
        shift[v] = m - n
        shifted = {tuple(x + y for x, y in zip(e, shift)): c for e, c in b.items()}
        r = _sub(_mul(lcb, r), _mul(lcr, shifted))
    return r


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic (grlex-leading coefficient 1) greatest common divisor."""
    if not a:
        return _monic(b)
    if not b:
        return _monic(a)
    n = len(next(iter(a)))
    v = _main_var(a, b)
    if v < 0:
        return _one(n)
    if _deg(a, v) <= 0:
        return gcd(a, content(b, v))
    if _deg(b, v) <= 0:
        return gcd(content(a, v), b)
    ca, cb = content(a, v), content(b, v)
    c = gcd(ca, cb)
    pa, pb = exact_div(a, ca), exact_div(b, cb)
    if _deg(pa, v) < _deg(pb, v):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, v)
        if not r:
            break
        if _deg(r, v) <= 0:
            return _monic(c)
        pa, pb = pb, exact_div(r, content(r, v))
    g = exact_div(pb, content(pb, v))
    return _monic(_mul(c, g))
