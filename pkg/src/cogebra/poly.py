"""Dense univariate polynomial arithmetic over an exact field handle.

Polynomials are tuples of raw field elements, coefficients low-to-high,
with no trailing zeros (the zero polynomial is the empty tuple).  All
functions take the field handle first and never mutate their inputs.
"""

from __future__ import annotations


def pnormal(F, coeffs):
    """Strip trailing zeros and return a tuple."""
    c = list(coeffs)
    while c and F.eq(c[-1], F.zero()):
        c.pop()
    return tuple(c)


def pzero(F):
    return ()


def pone(F):
    return (F.one(),)


def pconst(F, a):
    return pnormal(F, (a,))


def pX(F):
    return (F.zero(), F.one())


def pdeg(p):
    """Degree, with the zero polynomial at -1."""
    return len(p) - 1


def padd(F, p, q):
    n = max(len(p), len(q))
    out = []
    for i in range(n):
        a = p[i] if i < len(p) else F.zero()
        b = q[i] if i < len(q) else F.zero()
        out.append(F.add(a, b))
    return pnormal(F, out)


def pneg(F, p):
    return tuple(F.neg(a) for a in p)


def psub(F, p, q):
    return padd(F, p, pneg(F, q))


def pscale(F, c, p):
    if F.eq(c, F.zero()):
        return ()
    return pnormal(F, tuple(F.mul(c, a) for a in p))


def pmul(F, p, q):
    if not p or not q:
        return ()
    out = [F.zero()] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] = F.add(out[i + j], F.mul(a, b))
    return pnormal(F, out)


def pdivmod(F, p, q):
    """Quotient and remainder; q must be nonzero."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = pdeg(q)
    lead_inv = F.inv(q[-1])
    quo = [F.zero()] * max(0, len(p) - len(q) + 1)
    for i in range(len(p) - len(q), -1, -1):
        c = F.mul(rem[i + dq], lead_inv)
        if F.eq(c, F.zero()):
            continue
        quo[i] = c
        for j, b in enumerate(q):
            rem[i + j] = F.sub(rem[i + j], F.mul(c, b))
    return pnormal(F, quo), pnormal(F, rem)


def pmod(F, p, q):
    return pdivmod(F, p, q)[1]


def pmonic(F, p):
    if not p:
        return ()
    return pscale(F, F.inv(p[-1]), p)


def pgcd(F, p, q):
    a, b = p, q
    while b:
        a, b = b, pmod(F, a, b)
    return pmonic(F, a)


def peval(F, p, x):
    """Horner evaluation at a raw field element."""
    acc = F.zero()
    for c in reversed(p):
        acc = F.add(F.mul(acc, x), c)
    return acc


def ppowmod(F, p, n, modulus):
    """p**n mod modulus by binary exponentiation."""
    result = pmod(F, pone(F), modulus)
    base = pmod(F, p, modulus)
    while n > 0:
        if n & 1:
            result = pmod(F, pmul(F, result, base), modulus)
        base = pmod(F, pmul(F, base, base), modulus)
        n >>= 1
    return result


def preverse(F, p):
    """Reversed coefficient polynomial x^deg * p(1/x), normalized."""
    return pnormal(F, tuple(reversed(p)))


def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(F, p):
    """Rabin irreducibility test; F must be a finite field."""
    n = pdeg(p)
    if n <= 0:
        return False
    if n == 1:
        return True
    q = F.order
    x = pX(F)
    # x^(q^n) == x mod p
    t = pmod(F, x, p)
    for _ in range(n):
        t = _frobenius(F, t, q, p)
    if t != pmod(F, x, p):
        return False
    for r in _prime_factors(n):
        t = pmod(F, x, p)
        for _ in range(n // r):
            t = _frobenius(F, t, q, p)
        g = pgcd(F, psub(F, t, pmod(F, x, p)), p)
        if pdeg(g) != 0:
            return False
    return True


def _frobenius(F, t, q, modulus):
    return ppowmod(F, t, q, modulus)


def find_irreducible(F, n):
    """Deterministically smallest monic irreducible of degree n over finite F."""
    if n == 1:
        return pX(F)
    elems = list(F.elements())
    # iterate coefficient tuples (c_0..c_{n-1}) in lexicographic element order
    idx = [0] * n
    while True:
        cand = tuple(elems[i] for i in idx) + (F.one(),)
        cand = pnormal(F, cand)
        if pdeg(cand) == n and is_irreducible(F, cand):
            return cand
        pos = n - 1
        while pos >= 0 and idx[pos] == len(elems) - 1:
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            raise RuntimeError(f"no irreducible of degree {n} found")
        idx[pos] += 1


def format_poly(F, p, var="x"):
    """Human-readable form, used by the CLI printers."""
    if not p:
        return "0"
    terms = []
    for i, c in enumerate(p):
        if F.eq(c, F.zero()):
            continue
        cs = F.to_str(c)
        if i == 0:
            terms.append(cs)
        else:
            xp = var if i == 1 else f"{var}^{i}"
            terms.append(xp if cs == "1" else f"{cs}*{xp}")
    return " + ".join(terms)


def parse_poly(F, text, var="x"):
    """Parse strings like 'x^2-x-1' or '2*x^3 + 1' into a coefficient tuple."""
    s = text.replace(" ", "").replace("-", "+-")
    if s.startswith("+"):
        s = s[1:]
    coeffs = {}
    for chunk in s.split("+"):
        if not chunk:
            continue
        neg = chunk.startswith("-")
        if neg:
            chunk = chunk[1:]
        if var in chunk:
            head, _, tail = chunk.partition(var)
            if head.endswith("*"):
                head = head[:-1]
            coeff = F.from_str(head) if head else F.one()
            power = int(tail[1:]) if tail.startswith("^") else 1
        else:
            coeff = F.from_str(chunk)
            power = 0
        if neg:
            coeff = F.neg(coeff)
        coeffs[power] = F.add(coeffs.get(power, F.zero()), coeff)
    if not coeffs:
        return ()
    out = [F.zero()] * (max(coeffs) + 1)
    for k, v in coeffs.items():
        out[k] = v
    return pnormal(F, out)
