"""Dense univariate polynomials over Q, Sturm sequences and real-root isolation.

A polynomial is a list of :class:`fractions.Fraction` coefficients in
ascending degree order with no trailing zeros; the zero polynomial is ``[]``.
"""
from fractions import Fraction
from functools import lru_cache

import sympy


def trim(p):
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def degree(p):
    return len(p) - 1


def evaluate(p, x):
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def add(p, q):
    n = max(len(p), len(q))
    return trim([(p[i] if i < len(p) else 0) + (q[i] if i < len(q) else 0) for i in range(n)])


def neg(p):
    return [-c for c in p]


def sub(p, q):
    return add(p, neg(q))


def mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def derivative(p):
    return trim([i * c for i, c in enumerate(p)][1:])


def divmod_poly(a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lb = b[-1]
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        c = a[-1] / lb
        q[shift] = c
        for i, bc in enumerate(b):
            a[i + shift] -= c * bc
        a = trim(a)
    return trim(q), a


def monic(p):
    return [c / p[-1] for c in p] if p else []


def gcd(p, q):
    p, q = trim(p), trim(q)
    while q:
        p, q = q, divmod_poly(p, q)[1]
    return monic(p)


def squarefree_part(p):
    if not p:
        return []
    g = gcd(p, derivative(p))
    return monic(divmod_poly(p, g)[0])


def squarefree_decomposition(p):
    """Yun's algorithm: return ``{i: a_i}`` with ``p = lc * prod a_i**i``."""
    out = {}
    if degree(p) < 1:
        return out
    dp = derivative(p)
    a = gcd(p, dp)
    b = divmod_poly(p, a)[0]
    c = divmod_poly(dp, a)[0]
    d = sub(c, derivative(b))
    i = 1
    while degree(b) > 0:
        a = gcd(b, d)
        if degree(a) > 0:
            out[i] = a
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = sub(c, derivative(b))
        i += 1
    return out


def root_multiplicity(p, r):
    m = 0
    lin = [-Fraction(r), Fraction(1)]
    while p and evaluate(p, r) == 0:
        p = divmod_poly(p, lin)[0]
        m += 1
    return m


def sign(x):
    return (x > 0) - (x < 0)


def sturm_sequence(p):
    seq = [trim(p), derivative(p)]
    while seq[-1]:
        r = divmod_poly(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append(neg(r))
    return seq


def _variations(seq, x):
    signs = [sign(evaluate(s, x)) for s in seq]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_roots(p, lo, hi, seq=None):
    """Number of distinct real roots of ``p`` in the half-open interval (lo, hi]."""
    seq = seq or sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


def cauchy_bound(p):
    lc = abs(p[-1])
    return 1 + max((abs(c) / lc for c in p[:-1]), default=Fraction(0))


def isolate_real_roots(p):
    """Disjoint isolating intervals ``(lo, hi)`` for the distinct real roots of ``p``.

    Exact rational roots found during bisection come back as ``(r, r)``.
    Intervals are open on both ends otherwise and sorted increasingly.
    """
    p = squarefree_part(trim(p))
    if degree(p) < 1:
        return []
    seq = sturm_sequence(p)
    bound = cauchy_bound(p)
    out = []
    # entries (lo, hi, include_hi): roots counted in (lo, hi] or (lo, hi)
    stack = [(-bound, bound, True)]
    while stack:
        lo, hi, include_hi = stack.pop()
        n = count_roots(p, lo, hi, seq)
        hi_root = evaluate(p, hi) == 0
        if hi_root:
            if include_hi:
                out.append((hi, hi))
            n -= 1
        if n == 0:
            continue
        if n == 1 and not hi_root:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid, True))
        stack.append((mid, hi, False))
    out.sort()
    return out


def refine(p, interval, width):
    lo, hi = interval
    if lo == hi:
        return interval
    seq = sturm_sequence(p)
    while hi - lo > width:
        mid = (lo + hi) / 2
        if evaluate(p, mid) == 0:
            return (mid, mid)
        if count_roots(p, lo, mid, seq):
            hi = mid
        else:
            lo = mid
    return (lo, hi)


def count_real_roots(p):
    return len(isolate_real_roots(p))


@lru_cache(maxsize=4096)
def _ground_roots(coeffs):
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), t, domain="QQ")
    return tuple(sorted((Fraction(int(r.p), int(r.q)), m) for r, m in poly.ground_roots().items()))


def rational_roots(p):
    """Sorted ``[(root, multiplicity), ...]`` over Q."""
    p = trim(p)
    if degree(p) < 1:
        return []
    return list(_ground_roots(tuple(p)))


def remove_roots(p, roots):
    """Divide out ``(t - r)`` for every occurrence of ``r`` as a root of ``p``."""
    for r in roots:
        lin = [-Fraction(r), Fraction(1)]
        while p and evaluate(p, r) == 0:
            p = divmod_poly(p, lin)[0]
    return p


def reverse(p, deg=None):
    """``t**deg * p(1/t)`` as a coefficient list."""
    deg = degree(p) if deg is None else deg
    return trim(list(reversed(list(p) + [Fraction(0)] * (deg - degree(p)))))


def shift(p, c):
    """Coefficients of ``p(t + c)``."""
    out = []
    for coeff in reversed(p):
        out = add(mul(out, [Fraction(c), Fraction(1)]), [coeff])
    return out


@lru_cache(maxsize=4096)
def _factor_list(coeffs):
    t = sympy.Symbol("t")
    poly = sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in coeffs])), t, domain="QQ")
    lc, factors = poly.factor_list()
    out = []
    for fac, m in factors:
        out.append(([Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())], m))
    return Fraction(int(lc.p), int(lc.q)), out


def strip_definite_factors(p):
    """Drop the irreducible factors of ``p`` that have no real root.

    The result has the same sign as ``p`` at every real point where ``p``
    does not vanish, and the same real zeros.
    """
    p = trim(p)
    if degree(p) < 1:
        return p
    lc, factors = _factor_list(tuple(p))
    out = [lc]
    for fac, m in factors:
        if count_real_roots(fac) == 0:
            if sign(fac[-1]) < 0:
                out = neg(out) if m % 2 else out
            continue
        for _ in range(m):
            out = mul(out, fac)
    return out
