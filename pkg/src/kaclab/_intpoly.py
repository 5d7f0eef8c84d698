"""Exact arithmetic on integer polynomials (coefficient lists, constant term first)."""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce

from gmpy2 import divexact, mpz


def trim(p: list[int]) -> list[int]:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def derivative(p: list[int]) -> list[int]:
    return [i * c for i, c in enumerate(p)][1:]


def content(p: list[int]) -> int:
    return reduce(math.gcd, p, 0)


def primitive(p: list[int]) -> list[int]:
    """Divide out the content, keeping the sign of every coefficient."""
    g = content(p)
    if g <= 1:
        return list(p)
    return [c // g for c in p]


def sign_variations(seq) -> int:
    last = 0
    var = 0
    for c in seq:
        if c:
            s = 1 if c > 0 else -1
            if last and s != last:
                var += 1
            last = s
    return var


def prem(a: list[int], b: list[int]) -> tuple[list[int], int]:
    """Pseudo-remainder lc(b)**e * a mod b, and the exponent e used."""
    a = list(a)
    nb = len(b)
    lb = b[-1]
    e = 0
    while len(a) >= nb:
        la = a[-1]
        s = len(a) - nb
        if lb != 1:
            a = [x * lb for x in a]
        for i, bi in enumerate(b):
            if bi:
                a[s + i] -= la * bi
        a.pop()
        e += 1
        while a and a[-1] == 0:
            a.pop()
    return a, e


def _prem_full(a: list, b: list) -> list:
    """lc(b)**(deg a - deg b + 1) * a mod b."""
    a = list(a)
    nb = len(b)
    lb = b[-1]
    while len(a) >= nb:
        la = a[-1]
        s = len(a) - nb
        a = [x * lb for x in a]
        for i, bi in enumerate(b):
            if bi:
                a[s + i] -= la * bi
        a.pop()
    return trim(a)


def signed_remainder_chain(p: list[int]) -> list[list[int]]:
    """Sturm chain p, p', -rem(p, p'), ... up to positive constant factors.

    Uses the subresultant PRS (divisors from Collins' recurrence, taken in
    absolute value) so coefficient sizes grow only linearly along the chain.
    """
    p = [mpz(c) for c in trim(p)]
    dp = [c * i for i, c in enumerate(p)][1:]
    chain = [p]
    if not dp:
        return chain
    chain.append(dp)
    prev, cur = p, dp
    delta = len(prev) - len(cur)
    beta, psi = mpz(1), mpz(1)
    while len(cur) > 1:
        r = _prem_full(prev, cur)
        if not r:
            break
        # -rem = -prem / lc(cur)**(delta+1); keep only positive rescalings
        if cur[-1] < 0 and (delta + 1) % 2 == 1:
            nxt = [divexact(x, beta) for x in r]
        else:
            nxt = [-divexact(x, beta) for x in r]
        lc = abs(cur[-1])
        psi = divexact(lc**delta, psi ** (delta - 1))
        new_delta = len(cur) - len(nxt)
        beta = lc * psi**new_delta
        prev, cur, delta = cur, nxt, new_delta
        chain.append(nxt)
    return chain


def gcd(p: list[int], q: list[int]) -> list[int]:
    """Primitive gcd over Z[x] (up to sign)."""
    a, b = trim(p), trim(q)
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return primitive(a)
    a, b = primitive(a), primitive(b)
    while b:
        r, _ = prem(a, b)
        a, b = b, (primitive(r) if r else [])
    return a


def polydiv_exact(p: list[int], d: list[int]) -> list[int]:
    """Exact quotient p / d, returned as a primitive integer polynomial."""
    p = [Fraction(c) for c in trim(p)]
    d = trim(d)
    nd = len(d)
    q = [Fraction(0)] * (len(p) - nd + 1)
    for i in range(len(q) - 1, -1, -1):
        c = p[i + nd - 1] / d[-1]
        q[i] = c
        if c:
            for j, dj in enumerate(d):
                p[i + j] -= c * dj
    if any(p[: nd - 1]):
        raise ArithmeticError("division is not exact")
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in q), 1)
    return primitive([int(c * den) for c in q])


def squarefree(p: list[int]) -> list[int]:
    p = trim(p)
    g = gcd(p, derivative(p))
    if len(g) <= 1:
        return primitive(p)
    return polydiv_exact(p, g)


def homogeneous_value(p: list[int], num: int, den: int) -> int:
    """den**deg * p(num/den) as an exact integer (den > 0)."""
    n = len(p) - 1
    if n < 0:
        return 0
    v = p[-1]
    if den == 1:
        for c in reversed(p[:-1]):
            v = v * num + c
        return v
    dpow = 1
    for c in reversed(p[:-1]):
        dpow *= den
        v = v * num + c * dpow
    return v


def sign_at(p: list[int], x) -> int:
    """Sign of p at a rational x, exactly."""
    x = Fraction(x)
    v = homogeneous_value(p, x.numerator, x.denominator)
    return (v > 0) - (v < 0)


def multiplicity_at(p: list[int], num: int, den: int) -> tuple[int, list[int]]:
    """Multiplicity of the root num/den and the deflated quotient."""
    mult = 0
    p = trim(p)
    while len(p) > 1 and homogeneous_value(p, num, den) == 0:
        p = divide_linear(p, num, den)
        mult += 1
    return mult, p


def divide_linear(p: list[int], num: int, den: int) -> list[int]:
    """Quotient of p by (den*x - num); p(num/den) must vanish."""
    if den == 1:
        # synthetic division stays integral
        n = len(p) - 1
        q = [0] * n
        acc = 0
        for i in range(n, 0, -1):
            acc = acc * num + p[i]
            q[i - 1] = acc
        if acc * num + p[0] != 0:
            raise ArithmeticError("not a root")
        return q
    return polydiv_exact(p, [-num, den])


def taylor_shift(p: list[int], k: int) -> list[int]:
    """Coefficients of p(x + k)."""
    a = list(p)
    n = len(a) - 1
    if k == 0 or n < 1:
        return a
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] += k * a[j + 1]
    return a


def box_transform(p: list[int], k: int, d: int) -> list[int]:
    """Descartes transform of p on the dyadic box (k/2**d, (k+1)/2**d).

    Positive roots of the returned polynomial correspond one-to-one to roots of
    p inside the open box, so its sign variations bound their number.
    """
    n = len(p) - 1
    scaled = [c << (d * (n - j)) for j, c in enumerate(p)]
    q = taylor_shift(scaled, k)  # 2**(d n) p((k + t) / 2**d)
    return taylor_shift(q[::-1], 1)
