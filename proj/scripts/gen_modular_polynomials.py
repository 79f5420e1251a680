#!/usr/bin/env python3
"""Regenerate data/phi_<N>.txt for prime levels from q-expansions of j.

For a prime l the l+1 functions j(l*tau) and j((tau+i)/l) are the roots of
Phi_l(X, j(tau)).  Their power sums are integral q-series; Newton's
identities turn them into elementary symmetric functions, each of which is
rewritten as a polynomial in j by peeling off leading poles.

Output format: one line "i j c" per nonzero coefficient of X^i Y^j, only
i >= j stored (the polynomial is symmetric).
"""
import sys
from pathlib import Path


def sigma3(n):
    return sum(d ** 3 for d in range(1, n + 1) if n % d == 0)


def mul(a, b, n):
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def inverse(a, n):
    # a[0] == 1
    out = [0] * n
    out[0] = 1
    for k in range(1, n):
        out[k] = -sum(a[i] * out[k - i] for i in range(1, k + 1) if i < len(a))
    return out


def j_coefficients(n):
    """c[k] for j = sum_{k>=-1} c[k] q^k, returned as list shifted by one."""
    e4 = [1] + [240 * sigma3(k) for k in range(1, n + 1)]
    # Delta / q = prod (1 - q^k)^24
    prod = [1] + [0] * n
    for k in range(1, n + 1):
        for _ in range(24):
            prod = [prod[i] - (prod[i - k] if i >= k else 0) for i in range(n + 1)]
    e4c = mul(mul(e4, e4, n + 1), e4, n + 1)
    return mul(e4c, inverse(prod, n + 1), n + 1)  # coefficient of q^(k-1)


class Laurent:
    """Truncated Laurent series: value[k] is the coefficient of x^(k + low)."""

    def __init__(self, low, coeffs):
        self.low = low
        self.c = list(coeffs)

    def high(self):
        return self.low + len(self.c)  # exclusive bound of known terms

    def __mul__(self, o):
        low = self.low + o.low
        n = min(self.high() + o.low, o.high() + self.low) - low
        return Laurent(low, mul(self.c, o.c, n))

    def __add__(self, o):
        low = min(self.low, o.low)
        high = min(self.high(), o.high())
        out = [0] * (high - low)
        for s in (self, o):
            for i, x in enumerate(s.c):
                k = s.low + i
                if k < high:
                    out[k - low] += x
        return Laurent(low, out)

    def scale(self, k):
        return Laurent(self.low, [k * x for x in self.c])

    def coeff(self, k):
        i = k - self.low
        return self.c[i] if 0 <= i < len(self.c) else 0


def modular_polynomial(l):
    deg = l + 1
    # need the elementary symmetric functions up to q^0 exactly; the
    # series in s = q^(1/l) must reach s^(l * l * deg) for safety.
    terms_q = l * deg + 8
    terms_s = l * terms_q + 8
    jc = j_coefficients(terms_s + 2)
    J_s = Laurent(-1, jc[: terms_s + 1])  # j as series in s
    # j(q) as series in q is the same coefficient list.
    J_q = Laurent(-1, jc[: terms_q + 1])
    # j(q^l) as series in q
    jl = [0] * (l * (terms_q + 1) + 1)
    for k, c in enumerate(jc[: terms_q + 1]):
        pos = l * (k - 1) + l  # exponent l*(k-1), shifted by l
        if pos < len(jl):
            jl[pos] = c
    J_lq = Laurent(-l, jl[: terms_q + l])

    power_sums = []
    Pk_s = Laurent(0, [1] + [0] * terms_s)
    Pk_l = Laurent(0, [1] + [0] * terms_q)
    for k in range(1, deg + 1):
        Pk_s = Pk_s * J_s
        Pk_l = Pk_l * J_lq
        # l * sum of coefficients at exponents divisible by l, as series in q
        low = -k
        high = Pk_s.high() // l
        trace = Laurent(low, [l * Pk_s.coeff(l * m) for m in range(low, high)])
        power_sums.append(trace + Pk_l)

    elem = [Laurent(0, [1] + [0] * terms_q)]
    for k in range(1, deg + 1):
        acc = None
        for i in range(1, k + 1):
            term = (elem[k - i] * power_sums[i - 1]).scale((-1) ** (i - 1))
            acc = term if acc is None else acc + term
        assert all(x % k == 0 for x in acc.c)
        elem.append(Laurent(acc.low, [x // k for x in acc.c]))

    Jpow = [Laurent(0, [1] + [0] * (terms_q + deg))]
    for _ in range(deg + 1):
        Jpow.append(Jpow[-1] * J_q)

    coeffs = {}
    for k in range(0, deg + 1):
        series = elem[k]
        poly = {}
        for m in range(deg, 0, -1):
            a = series.coeff(-m)
            if a:
                poly[m] = a
                series = series + Jpow[m].scale(-a)
        for m in range(-deg * l, 0):
            assert series.coeff(m) == 0, (l, k, m)
        poly[0] = series.coeff(0)
        sign = (-1) ** k
        for m, a in poly.items():
            if a:
                coeffs[(deg - k, m)] = coeffs.get((deg - k, m), 0) + sign * a
    return coeffs


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "data")
    out.mkdir(parents=True, exist_ok=True)
    (out / "phi_1.txt").write_text("1 0 1\n0 1 -1\n")
    for l in (2, 3, 5, 7):
        c = modular_polynomial(l)
        for (i, j), v in c.items():
            assert c.get((j, i)) == v, "asymmetric"
        lines = [f"{i} {j} {v}" for (i, j), v in sorted(c.items(), reverse=True) if i >= j and v]
        (out / f"phi_{l}.txt").write_text("\n".join(lines) + "\n")
        print(f"phi_{l}: {len(lines)} stored coefficients")


if __name__ == "__main__":
    main()
