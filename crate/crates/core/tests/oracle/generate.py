"""Reference values for tests/oracle.rs, computed with mpmath at 50 digits.

Run from this directory: python3 generate.py > values.json
Parameters are stored as the exact doubles that the Rust side reads.
"""

import json
import random

import mpmath as mp

mp.mp.dps = 50


def poch(x, n):
    return mp.rf(x, n)


def ak(a, b, k):
    """A_k by the printed nested sums (p = 1..4), term by term."""
    a = [mp.mpf(x) for x in a]
    b = [mp.mpf(x) for x in b]
    p = len(b)
    if p == 1:
        return mp.mpf(1) if k == 0 else mp.mpf(0)
    if p == 2:
        return poch(b[1] - a[2], k) * poch(b[0] - a[2], k) / mp.factorial(k)
    if p == 3:
        s = mp.mpf(0)
        for k2 in range(k + 1):
            d = k - k2
            s += (poch(b[2] + b[1] - a[3] - a[2] + k2, d) * poch(b[0] - a[2], d)
                  * poch(b[2] - a[3], k2) * poch(b[1] - a[3], k2)
                  / (mp.factorial(d) * mp.factorial(k2)))
        return s
    if p == 4:
        s = mp.mpf(0)
        for k2 in range(k + 1):
            d = k - k2
            outer = (poch(b[3] + b[2] + b[1] - a[4] - a[3] - a[2] + k2, d)
                     * poch(b[0] - a[2], d) / mp.factorial(d))
            inner = mp.mpf(0)
            for k3 in range(k2 + 1):
                e = k2 - k3
                inner += (poch(b[3] + b[2] - a[4] - a[3] + k3, e) * poch(b[1] - a[3], e)
                          / mp.factorial(e)
                          * poch(b[3] - a[4], k3) * poch(b[2] - a[4], k3) / mp.factorial(k3))
            s += outer * inner
        return s
    raise ValueError(p)


def inner(a, b, x1, x2, n, top):
    return mp.fsum(poch(-top, k) / (poch(x1, k) * poch(x2, k)) * ak(a, b, k)
                   for k in range(top + 1))


def s_of(a, b):
    return mp.fsum(mp.mpf(x) for x in b) - mp.fsum(mp.mpf(x) for x in a)


def g_singular(a, b, n):
    s = s_of(a, b)
    a1, a2 = mp.mpf(a[0]) + s, mp.mpf(a[1]) + s
    return ((-1) ** n * poch(a1, n) * poch(a2, n) * mp.gamma(-s - n) / mp.factorial(n)
            * inner(a, b, a1, a2, n, n))


def e_coeff(a, b, n):
    a1, a2 = mp.mpf(a[0]), mp.mpf(a[1])
    return -poch(a1, n) * poch(a2, n) / mp.factorial(n) ** 2 * inner(a, b, a1, a2, n, n)


def q_coeff(a, b, t, n):
    a1, a2 = mp.mpf(a[0]) + t, mp.mpf(a[1]) + t
    return (-(-1) ** t * poch(a1, n) * poch(a2, n) / mp.gamma(1 + t + n)
            * inner(a, b, a1, a2, n, n))


def h_coeff(a, b, t, n):
    a1, a2 = mp.mpf(a[0]) - t, mp.mpf(a[1]) - t
    return ((-1) ** n * poch(a1, n) * poch(a2, n) * mp.gamma(t - n) / mp.factorial(n)
            * inner(a, b, a1, a2, n, n))


def v_coeff(a, b, t, n):
    a1, a2 = mp.mpf(a[0]) - t, mp.mpf(a[1]) - t
    return (-(-1) ** t * poch(a1, t + n) * poch(a2, t + n)
            / (mp.factorial(n) * mp.factorial(t + n)) * inner(a, b, a1, a2, n, t + n))


def prefactor(a, b):
    return mp.fprod(mp.gamma(x) for x in a) / mp.fprod(mp.gamma(x) for x in b)


def hyp_value(a, b):
    """Γ-weighted p+1Fp at unit argument; needs s > 0."""
    return prefactor(a, b) * mp.hyper(a, b, 1)


def p2_alpha_beta(a, b):
    a3 = mp.mpf(a[2])
    return mp.mpf(b[1]) - a3, mp.mpf(b[0]) - a3


def d0_p2(a, b):
    """Sum over k >= 1 rewritten as a 4F3 at unit argument."""
    a1, a2 = mp.mpf(a[0]), mp.mpf(a[1])
    al, be = p2_alpha_beta(a, b)
    tail = al * be / (a1 * a2) * mp.hyper([1, 1, al + 1, be + 1], [2, a1 + 1, a2 + 1], 1)
    return 2 * mp.digamma(1) - mp.digamma(a1) - mp.digamma(a2) + tail


def u0_p2(a, b, t):
    assert t == 1
    a1, a2 = mp.mpf(a[0]), mp.mpf(a[1])
    al, be = p2_alpha_beta(a, b)
    tail = (al * be * (al + 1) * (be + 1) / (2 * a1 * a2)
            * mp.hyper([1, 1, al + 2, be + 2], [3, a1 + 1, a2 + 1], 1))
    x1, x2 = a1 - t, a2 - t
    fin = mp.fsum(poch(-t, k) / (poch(x1, k) * poch(x2, k)) * ak(a, b, k)
                  * (mp.digamma(1 + t - k) + mp.digamma(1) - mp.digamma(a1) - mp.digamma(a2))
                  for k in range(t + 1))
    return tail + (-1) ** t * poch(x1, t) * poch(x2, t) / mp.factorial(t) * fin


def direct(a, b, m):
    return mp.fsum(mp.fprod(mp.gamma(mp.mpf(x) + l) for x in a)
                   / (mp.fprod(mp.gamma(mp.mpf(x) + l) for x in b) * mp.factorial(l))
                   for l in range(m))


def d0_by_extrapolation(a, b):
    """lim (S_m − ψ(m) + ψ(1)) by polynomial extrapolation in 1/m."""
    a_m = [mp.mpf(x) for x in a]
    b_m = [mp.mpf(x) for x in b]
    ms = [250 * 2 ** j for j in range(8)]
    vals = []
    s = mp.mpf(0)
    term = prefactor(a_m, b_m)
    l = 0
    for m in ms:
        while l < m:
            s += term
            term *= mp.fprod(x + l for x in a_m) / (mp.fprod(x + l for x in b_m) * (l + 1))
            l += 1
        vals.append(s - mp.digamma(m) + mp.digamma(1))
    xs = [mp.mpf(1) / m for m in ms]
    # Neville at x = 0
    p = list(vals)
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i])
    return p[0]


def balanced(rng, p, s, lo=0.2, hi=2.0):
    """Random a (p+1 entries) and b (p entries) with Σb − Σa = s."""
    while True:
        a = [rng.uniform(lo, hi) for _ in range(p + 1)]
        b = [rng.uniform(lo, hi) for _ in range(p - 1)]
        last = sum(a) - sum(b) + s
        if lo < last < hi + 1.0:
            return a, b + [last]


def num(x):
    return mp.nstr(x, 30, strip_zeros=False)


def main():
    rng = random.Random(20240611)
    out = {"finite": [], "series": [], "ak": [], "specfun": [], "direct": []}

    def add_finite(kind, a, b, t, n, value):
        out["finite"].append({"kind": kind, "a": a, "b": b, "t": t, "n": n, "value": num(value)})

    for _ in range(50):
        p = rng.choice([2, 3])
        a, b = balanced(rng, p, rng.uniform(0.1, 2.9))
        if abs(s_of(a, b) - mp.nint(s_of(a, b))) < 0.05:
            continue
        n = rng.randrange(0, 4)
        add_finite("g_singular", a, b, 0, n, g_singular(a, b, n))
    for _ in range(50):
        p = rng.choice([2, 3])
        a, b = balanced(rng, p, 0.0)
        n = rng.randrange(0, 4)
        add_finite("e", a, b, 0, n, e_coeff(a, b, n))
    for _ in range(50):
        p = rng.choice([2, 3])
        t = rng.choice([1, 2])
        a, b = balanced(rng, p, float(t))
        n = rng.randrange(0, 4)
        add_finite("q", a, b, t, n, q_coeff(a, b, t, n))
    for _ in range(50):
        p = rng.choice([2, 3])
        t = rng.choice([2, 3])
        a, b = balanced(rng, p, float(-t))
        n = rng.randrange(0, t)
        add_finite("h", a, b, t, n, h_coeff(a, b, t, n))
    for _ in range(50):
        p = rng.choice([2, 3])
        t = rng.choice([1, 2])
        a, b = balanced(rng, p, float(-t))
        n = rng.randrange(0, 4)
        add_finite("v", a, b, t, n, v_coeff(a, b, t, n))

    # the fixed examples
    a, b = [0.3, 0.4, 0.6], [1.1, 1.25]
    add_finite("g_singular", a, b, 0, 2, g_singular(a, b, 2))
    a, b = [0.6, 0.7, 0.8], [0.5, 0.6]
    add_finite("v", a, b, 1, 0, v_coeff(a, b, 1, 0))

    # infinite sums
    def add_series(kind, a, b, t, value):
        out["series"].append({"kind": kind, "a": a, "b": b, "t": t, "value": num(value)})

    for a, b in [([0.5, 0.5, 0.5], [1.5, 1.5]), ([0.3, 0.4, 0.6], [1.1, 1.25]),
                 ([0.5, 0.7, 0.9, 1.1], [1.2, 1.3, 1.9])]:
        add_series("g0", a, b, 0, hyp_value(a, b))
    for a, b, t in [([0.5, 0.5, 0.5], [1.0, 1.5], 1), ([0.4, 0.7, 0.9], [1.6, 2.4], 2),
                    ([0.3, 0.8, 0.6, 1.2], [1.1, 1.3, 1.5], 1)]:
        add_series("l0", a, b, t, hyp_value(a, b))
    for a, b in [([0.4, 0.7, 0.9], [0.8, 1.2]), ([1.25, 0.625, 0.4375], [0.9375, 1.375])]:
        v = d0_p2(a, b)
        check = d0_by_extrapolation(a, b)
        assert abs(v - check) < mp.mpf(10) ** -18, (v, check)
        add_series("d0", a, b, 0, v)
    for a, b in [([0.6, 0.7, 0.8], [0.5, 0.6]), ([0.9, 1.3, 0.7], [1.2, 0.7])]:
        add_series("u0", a, b, 1, u0_p2(a, b, 1))

    # A_k
    for a, b, k in [([0.3, 0.4, 0.5, 0.6], [1.0, 1.1, 1.2], 5),
                    ([0.3, 0.4, 0.5, 0.6], [1.0, 1.1, 1.2], 20),
                    ([0.5, 0.5, 0.5, 0.5, 1.25], [1.0, 1.0, 1.0, 0.25], 7),
                    ([0.3, 0.9, 0.5, 0.6, 1.4], [1.0, 1.7, 1.2, 0.4], 12)]:
        out["ak"].append({"a": a, "b": b, "k": k, "value": num(ak(a, b, k))})

    # special functions
    for x in [0.5, 0.3, 1.0e-3, 2.5, 7.25, 33.3, 170.5, 1.0e4, -0.5, -2.7, -10.3, -19.9]:
        g = mp.gamma(x)
        out["specfun"].append({"kind": "lgamma", "x": x, "value": num(mp.log(abs(g))),
                               "sign": 1 if g > 0 else -1})
    for x in [0.25, 1.0, 1.5, 3.7, 12.0, 250.5, -0.5, -3.3]:
        out["specfun"].append({"kind": "digamma", "x": x, "value": num(mp.digamma(x)), "sign": 0})

    for a, b, m in [([0.5, 0.5, 0.5], [1.0, 1.0], 100), ([0.5, 0.7], [1.9], 1000),
                    ([0.5, 0.5, 0.5, 0.5, 1.25], [1.0, 1.0, 1.0, 0.25], 1000)]:
        out["direct"].append({"a": a, "b": b, "m": m, "value": num(direct(a, b, m))})

    print(json.dumps(out, indent=1))


if __name__ == "__main__":
    main()
