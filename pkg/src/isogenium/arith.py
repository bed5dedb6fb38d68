"""F_p and F_p^2 arithmetic, quadratic-residue machinery, and root-finding.

F_p elements are plain ints in [0, p).  F_p^2 elements are pairs
(a0, a1) meaning a0 + a1*w where w^2 = n and n is the smallest
quadratic non-residue mod p; all F_p^2 operations live on Fp2Field so
the element representation stays a cheap tuple.  Univariate polynomials
over F_p^2 are lists of element pairs, constant term first, mirroring
the coefficient-list convention of sympy's galoistools.

Root-finding: degree <= 2 by explicit formulas (square roots in F_p^2
via norm descent to two Tonelli-Shanks calls in F_p), completely split
cubics by Cardano (square root plus cube root, both inside F_p^2), and
the general case by gcd with Y^(p^2) - Y followed by seeded
equal-degree splitting.
"""

from __future__ import annotations

import random

MAX_PRIME = 1 << 50

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ZeroPolynomial(ValueError):
    """Root-finding was asked for the zero polynomial."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid far beyond the 2^50 cap."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


def primes_in(lo: int, hi: int) -> list[int]:
    """Primes p with lo <= p <= hi."""
    return [p for p in range(max(lo, 2), hi + 1) if is_prime(p)]


def legendre_symbol(a: int, p: int) -> int:
    """Euler's criterion a^((p-1)/2), mapped into {-1, 0, 1}."""
    a %= p
    if a == 0:
        return 0
    t = pow(a, (p - 1) // 2, p)
    return 1 if t == 1 else -1


def smallest_nonresidue(p: int) -> int:
    """Smallest positive n with (n|p) = -1.  Exists for every odd prime."""
    n = 2
    while legendre_symbol(n, p) != -1:
        n += 1
    return n


def sqrt_mod_p(a: int, p: int) -> int | None:
    """A square root of a mod p, or None if a is a non-residue.

    Tonelli-Shanks with the p = 3 mod 4 shortcut; deterministic because
    the needed non-residue is the canonical smallest one.
    """
    a %= p
    if a == 0:
        return 0
    if legendre_symbol(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = pow(smallest_nonresidue(p), q, p)
    m, c, t, r = s, z, pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t * t % p, 1
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


class Fp2Field:
    """Context for F_p^2 = F_p[w]/(w^2 - n), n the smallest non-residue.

    Elements are (a0, a1) int pairs.  The canonical total order on
    elements is by the integer key a0 + p*a1, used for every piece of
    deterministic output ordering in the package.
    """

    def __init__(self, p: int):
        if not (5 <= p < MAX_PRIME) or not is_prime(p):
            raise ValueError(f"p must be an odd prime in [5, 2^50): got {p}")
        self.p = p
        self.n = smallest_nonresidue(p)
        self.zero = (0, 0)
        self.one = (1, 0)
        self._cbrt_data = None
        self._omega = None

    # -- element plumbing --------------------------------------------------

    def el(self, a0: int, a1: int = 0) -> tuple[int, int]:
        return (a0 % self.p, a1 % self.p)

    def key(self, x: tuple[int, int]) -> int:
        return x[0] + self.p * x[1]

    def from_key(self, k: int) -> tuple[int, int]:
        return (k % self.p, k // self.p)

    def in_fp(self, x: tuple[int, int]) -> bool:
        return x[1] == 0

    def fmt(self, x: tuple[int, int]) -> str:
        return f"{x[0]}+{x[1]}*w"

    # -- ring operations ---------------------------------------------------

    def add(self, x, y):
        p = self.p
        return ((x[0] + y[0]) % p, (x[1] + y[1]) % p)

    def sub(self, x, y):
        p = self.p
        return ((x[0] - y[0]) % p, (x[1] - y[1]) % p)

    def neg(self, x):
        p = self.p
        return (-x[0] % p, -x[1] % p)

    def mul(self, x, y):
        p, n = self.p, self.n
        a0, a1 = x
        b0, b1 = y
        return ((a0 * b0 + n * a1 * b1) % p, (a0 * b1 + a1 * b0) % p)

    def sqr(self, x):
        p, n = self.p, self.n
        a0, a1 = x
        return ((a0 * a0 + n * a1 * a1) % p, 2 * a0 * a1 % p)

    def smul(self, c: int, x):
        p = self.p
        return (c * x[0] % p, c * x[1] % p)

    def conj(self, x):
        """Frobenius x -> x^p; an involution fixing exactly F_p."""
        return (x[0], -x[1] % self.p)

    def norm(self, x) -> int:
        """x * x^p, always in F_p."""
        p, n = self.p, self.n
        return (x[0] * x[0] - n * x[1] * x[1]) % p

    def inv(self, x):
        if x == (0, 0):
            raise ZeroDivisionError("inverse of zero in F_p^2")
        p = self.p
        d = pow(self.norm(x), p - 2, p)
        return (x[0] * d % p, -x[1] * d % p)

    def pow_(self, x, e: int):
        if e < 0:
            return self.pow_(self.inv(x), -e)
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, x)
            x = self.sqr(x)
            e >>= 1
        return r

    # -- square and cube roots ----------------------------------------------

    def is_square(self, x) -> bool:
        if x == (0, 0):
            return True
        return legendre_symbol(self.norm(x), self.p) == 1

    def sqrt(self, x):
        """A square root of x in F_p^2, or None if there is none."""
        p, n = self.p, self.n
        a0, a1 = x
        if a1 == 0:
            if a0 == 0:
                return (0, 0)
            r = sqrt_mod_p(a0, p)
            if r is not None:
                return (r, 0)
            # a0 and n both non-residues, so a0/n is one: sqrt = v*w.
            v = sqrt_mod_p(a0 * pow(n, p - 2, p) % p, p)
            return (0, v)
        nm = self.norm(x)
        s = sqrt_mod_p(nm, p)
        if s is None:
            return None
        inv2 = (p + 1) // 2
        u2 = (a0 + s) * inv2 % p
        u = sqrt_mod_p(u2, p) if u2 else None
        if u is None:
            u2 = (a0 - s) * inv2 % p
            u = sqrt_mod_p(u2, p)
            if u is None:
                return None
        v = a1 * pow(2 * u, p - 2, p) % p
        return (u, v)

    def omega(self):
        """A primitive cube root of unity; F_p^2 always contains one."""
        if self._omega is None:
            s = self.sqrt((-3 % self.p, 0))
            inv2 = (self.p + 1) // 2
            self._omega = self.smul(inv2, self.sub(s, self.one))
        return self._omega

    def _cbrt_setup(self):
        p = self.p
        q1 = p * p - 1
        m, s = q1, 0
        while m % 3 == 0:
            m //= 3
            s += 1
        third = q1 // 3
        rho = None
        for cand in [(k, 1) for k in range(0, 20)] + [(k, 0) for k in range(2, 50)]:
            if cand == (0, 0):
                continue
            if self.pow_(cand, third) != self.one:
                rho = cand
                break
        g = self.pow_(rho, m)
        u3 = pow(3, -1, m)
        k3 = (3 * u3 - 1) // m
        # g3[i] = g^(3^i); the last entry has order 3.
        g3 = [g]
        for _ in range(s - 1):
            g3.append(self.mul(self.mul(g3[-1], g3[-1]), g3[-1]))
        self._cbrt_data = (m, s, g, g3, k3)

    def cbrt(self, x):
        """A cube root of x in F_p^2, or None if x is not a cube."""
        if x == (0, 0):
            return (0, 0)
        if self._cbrt_data is None:
            self._cbrt_setup()
        m, s, g, g3, k3 = self._cbrt_data
        w = self.pow_(x, pow(3, -1, m))
        t = self.pow_(x, m)
        z = self.pow_(t, (-k3) % 3**s)
        # Base-3 Pohlig-Hellman discrete log of z in <g>.
        top = g3[s - 1]
        top2 = self.sqr(top)
        e = 0
        for i in range(s):
            r = self.mul(z, self.pow_(g, (-e) % 3**s))
            v = self.pow_(r, 3 ** (s - 1 - i))
            if v == self.one:
                d = 0
            elif v == top:
                d = 1
            elif v == top2:
                d = 2
            else:
                return None
            e += d * 3**i
        if e % 3:
            return None
        y = self.mul(w, self.pow_(g, e // 3))
        if self.mul(self.sqr(y), y) != x:
            return None
        return y


def frobenius(field: Fp2Field, x: tuple[int, int]) -> tuple[int, int]:
    """x^p on F_p^2; the mirror involution on vertex labels."""
    return field.conj(x)


# -- polynomials over F_p^2 -------------------------------------------------
# Coefficient lists, constant term first; [] is the zero polynomial.


def poly_trim(f):
    while f and f[-1] == (0, 0):
        f.pop()
    return f


def poly_degree(f) -> int:
    return len(f) - 1


def poly_eval(field, f, x):
    acc = (0, 0)
    for c in reversed(f):
        acc = field.add(field.mul(acc, x), c)
    return acc


def poly_monic(field, f):
    lc = f[-1]
    if lc == field.one:
        return list(f)
    ilc = field.inv(lc)
    return [field.mul(c, ilc) for c in f]


def poly_mul(field, f, g):
    if not f or not g:
        return []
    out = [(0, 0)] * (len(f) + len(g) - 1)
    p, n = field.p, field.n
    for i, (a0, a1) in enumerate(f):
        if a0 == 0 and a1 == 0:
            continue
        for j, (b0, b1) in enumerate(g):
            c0, c1 = out[i + j]
            out[i + j] = (
                (c0 + a0 * b0 + n * a1 * b1) % p,
                (c1 + a0 * b1 + a1 * b0) % p,
            )
    return poly_trim(out)


def poly_divmod(field, f, g):
    """Quotient and remainder; g must be nonzero."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    if len(f) - 1 < dg:
        return [], poly_trim(f)
    ilc = field.inv(g[-1])
    q = [(0, 0)] * (len(f) - dg)
    for i in range(len(f) - dg - 1, -1, -1):
        c = field.mul(f[i + dg], ilc)
        if c != (0, 0):
            q[i] = c
            for k in range(dg + 1):
                f[i + k] = field.sub(f[i + k], field.mul(c, g[k]))
    return poly_trim(q), poly_trim(f[:dg])


def poly_mod(field, f, g):
    return poly_divmod(field, f, g)[1]


def poly_gcd(field, f, g):
    """Monic gcd."""
    a, b = poly_trim(list(f)), poly_trim(list(g))
    while b:
        a, b = b, poly_mod(field, a, b)
    return poly_monic(field, a) if a else []


def poly_deflate(field, f, r):
    """Divide f by (Y - r) via synthetic division; remainder must vanish."""
    out = [(0, 0)] * (len(f) - 1)
    acc = (0, 0)
    for i in range(len(f) - 1, 0, -1):
        acc = field.add(field.mul(acc, r), f[i])
        out[i - 1] = acc
    rem = field.add(field.mul(acc, r), f[0])
    if rem != (0, 0):
        raise ValueError("not a root; deflation has nonzero remainder")
    return out


def poly_pow_mod(field, base, e: int, mod):
    r = [field.one]
    base = poly_mod(field, base, mod)
    while e:
        if e & 1:
            r = poly_mod(field, poly_mul(field, r, base), mod)
        base = poly_mod(field, poly_mul(field, base, base), mod)
        e >>= 1
    return r


def _poly_frob_compose(field, h, mod):
    """Given h = Y^p mod `mod`, return Y^(p^2) mod `mod`.

    Y^(p^2) = h^sigma (h) where sigma is the coefficient Frobenius;
    evaluated by Horner with polynomial multiplications mod `mod`.
    """
    acc = []
    for c in reversed([field.conj(c) for c in h]):
        acc = poly_mod(field, poly_mul(field, acc, h), mod)
        if c != (0, 0):
            if not acc:
                acc = [c]
            else:
                acc = list(acc)
                acc[0] = field.add(acc[0], c)
                acc = poly_trim(acc)
    return acc


# -- explicit small-degree solvers -------------------------------------------


def roots_quadratic(field, b, c):
    """Roots with multiplicity of Y^2 + b*Y + c over F_p^2 ([] if none)."""
    p = field.p
    inv2 = (p + 1) // 2
    disc = field.sub(field.sqr(b), field.smul(4, c))
    if disc == (0, 0):
        return [(field.smul(-inv2 % p, b), 2)]
    s = field.sqrt(disc)
    if s is None:
        return []
    r1 = field.smul(inv2, field.sub(s, b))
    r2 = field.smul(-inv2 % p, field.add(s, b))
    return [(r1, 1), (r2, 1)]


def roots_split_cubic(field, a, b, c):
    """Roots of Y^3 + a*Y^2 + b*Y + c, valid when it splits over F_p^2.

    Cardano: depress, then one square root and one cube root, both of
    which stay inside F_p^2 exactly when the cubic splits there.
    Returns None when that assumption fails (caller falls back to the
    generic path).
    """
    p = field.p
    inv3 = pow(3, p - 2, p)
    shift = field.smul(inv3, a)  # roots of depressed cubic minus shift
    a2 = field.sqr(a)
    P = field.sub(b, field.smul(inv3, a2))
    Q = field.add(
        field.sub(c, field.smul(inv3, field.mul(a, b))),
        field.smul(2 * pow(inv3, 3, p) % p, field.mul(a, a2)),
    )
    if P == (0, 0) and Q == (0, 0):
        return [(field.neg(shift), 3)]
    P3 = field.mul(P, field.sqr(P))
    Q2 = field.sqr(Q)
    disc = field.sub(field.smul(-4 % p, P3), field.smul(27, Q2))
    if disc == (0, 0):
        # Double root 3Q/(2P)... as roots {r, r, -2r} of the depressed cubic.
        if P == (0, 0):
            return None
        r = field.mul(field.smul(-3 % p, Q), field.inv(field.smul(2, P)))
        out = [(field.sub(r, shift), 2), (field.sub(field.smul(-2 % p, r), shift), 1)]
        return out
    if P == (0, 0):
        u = field.cbrt(field.neg(Q))
        if u is None:
            return None
        om = field.omega()
        rs = [u, field.mul(om, u), field.mul(field.sqr(om), u)]
        return [(field.sub(r, shift), 1) for r in rs]
    t = field.sqrt(field.smul(-27 % p, disc))
    if t is None:
        return None
    inv2 = (p + 1) // 2
    u3 = field.smul(inv2, field.add(field.smul(-27 % p, Q), t))
    if u3 == (0, 0):
        u3 = field.smul(inv2, field.sub(field.smul(-27 % p, Q), t))
    u = field.cbrt(u3)
    if u is None:
        return None
    v = field.mul(field.smul(-3 % p, P), field.inv(u))
    om = field.omega()
    om2 = field.sqr(om)
    inv3e = (inv3, 0)
    roots = []
    for uu, vv in ((u, v), (field.mul(om, u), field.mul(om2, v)), (field.mul(om2, u), field.mul(om, v))):
        z = field.mul(inv3e, field.add(uu, vv))
        roots.append((field.sub(z, shift), 1))
    if len({field.key(r) for r, _ in roots}) != 3:
        return None
    return roots


def _split_all_roots(field, g, rng):
    """All roots of g, where g is monic, squarefree and splits over F_p^2."""
    d = len(g) - 1
    if d <= 0:
        return []
    if d == 1:
        return [field.neg(g[0])]
    if d == 2:
        rts = roots_quadratic(field, g[1], g[0])
        return [r for r, _ in rts]
    if d == 3:
        rts = roots_split_cubic(field, g[2], g[1], g[0])
        if rts is not None and all(poly_eval(field, g, r) == (0, 0) for r, _ in rts):
            return [r for r, _ in rts]
    # Seeded equal-degree splitting: gcd(g, (Y+a)^((p^2-1)/2) - 1).
    p = field.p
    half = (p * p - 1) // 2
    while True:
        a = (rng.randrange(p), rng.randrange(p))
        h = poly_pow_mod(field, [a, field.one], half, g)
        if not h:
            continue
        h = list(h)
        h[0] = field.sub(h[0], field.one)
        d1 = poly_gcd(field, g, poly_trim(h))
        if 0 < len(d1) - 1 < len(g) - 1:
            d2, rem = poly_divmod(field, g, d1)
            assert not rem
            return _split_all_roots(field, d1, rng) + _split_all_roots(field, poly_monic(field, d2), rng)


def find_roots(field, f):
    """All roots of f in F_p^2 with exact multiplicities.

    Output sorted by the canonical key a0 + p*a1.  Multiplicities are
    found by repeated deflation, so (Y - r)^m | f and (Y - r)^(m+1) does
    not, for every returned pair.
    """
    f = poly_trim(list(f))
    if not f:
        raise ZeroPolynomial("find_roots on the zero polynomial")
    if len(f) == 1:
        return []
    f = poly_monic(field, f)
    d = len(f) - 1
    if d == 1:
        return [(field.neg(f[0]), 1)]
    if d == 2:
        return sorted(roots_quadratic(field, f[1], f[0]), key=lambda t: field.key(t[0]))
    # Squarefree part, then Frobenius-stable (= split over F_p^2) part.
    df = poly_trim([field.smul(i, f[i]) for i in range(1, len(f))])
    sf = poly_divmod(field, f, poly_gcd(field, f, df))[0]
    sf = poly_monic(field, sf)
    p = field.p
    h = poly_pow_mod(field, [(0, 0), field.one], p, sf)  # Y^p mod sf
    h2 = _poly_frob_compose(field, h, sf)  # Y^(p^2) mod sf
    h2 = list(h2) if h2 else []
    while len(h2) < 2:
        h2.append((0, 0))
    h2[1] = field.sub(h2[1], field.one)
    split = poly_gcd(field, sf, poly_trim(h2))
    if not split or len(split) == 1:
        return []
    seed = hash((p, tuple(field.key(c) for c in f))) & 0xFFFFFFFF
    rng = random.Random(seed)
    roots = _split_all_roots(field, split, rng)
    out = []
    for r in roots:
        m, g = 0, f
        while True:
            try:
                g = poly_deflate(field, g, r)
                m += 1
            except ValueError:
                break
            if not g:
                break
        out.append((r, m))
    out.sort(key=lambda t: field.key(t[0]))
    return out


# -- polynomials over F_p (kernel cubics/quartics, Hilbert polynomials) ------


def fp_poly_roots(p: int, coeffs: list[int]) -> list[int]:
    """Distinct roots in F_p of a polynomial with int coefficients.

    Coefficient list constant-first, degree <= 16 intended.  Uses
    gcd(x^p - x, f) to cut to the split part, then explicit formulas
    and seeded random splitting.
    """
    f = _fp_trim([c % p for c in coeffs])
    if not f:
        raise ZeroPolynomial("fp_poly_roots on the zero polynomial")
    if len(f) == 1:
        return []
    return sorted(set(_fp_roots_inner(p, f)))


def _fp_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _fp_monic(p, f):
    il = pow(f[-1], p - 2, p)
    return [c * il % p for c in f]


def _fp_mulmod(p, f, g, m):
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return _fp_mod(p, out, m)


def _fp_mod(p, f, m):
    f = list(f)
    dm = len(m) - 1
    ilc = pow(m[-1], p - 2, p)
    for i in range(len(f) - dm - 1, -1, -1):
        c = f[i + dm] * ilc % p
        if c:
            for k in range(dm + 1):
                f[i + k] = (f[i + k] - c * m[k]) % p
    return _fp_trim(f[:dm])


def _fp_gcd(p, a, b):
    a, b = _fp_trim(list(a)), _fp_trim(list(b))
    while b:
        if len(a) < len(b):
            a, b = b, a
            continue
        a, b = b, _fp_mod(p, a, b)
    return _fp_monic(p, a) if a else []


def _fp_powmod(p, base, e, m):
    r = [1]
    base = _fp_mod(p, base, m)
    while e:
        if e & 1:
            r = _fp_mulmod(p, r, base, m)
        base = _fp_mulmod(p, base, base, m)
        e >>= 1
    return r


def _fp_roots_inner(p, f, _rng=None):
    f = _fp_monic(p, _fp_trim(list(f)))
    d = len(f) - 1
    if d == 0:
        return []
    if d == 1:
        return [-f[0] % p]
    if d == 2:
        disc = (f[1] * f[1] - 4 * f[0]) % p
        s = sqrt_mod_p(disc, p)
        if s is None:
            return []
        inv2 = (p + 1) // 2
        rts = {(s - f[1]) * inv2 % p, (-s - f[1]) * inv2 % p}
        return list(rts)
    xp = _fp_powmod(p, [0, 1], p, f)
    xp = list(xp) + [0] * (2 - len(xp))
    xp[1] = (xp[1] - 1) % p
    g = _fp_gcd(p, f, _fp_trim(xp))
    if not g or len(g) == 1:
        return []
    if len(g) - 1 <= 2:
        return _fp_roots_inner(p, g)
    rng = _rng or random.Random(hash((p, tuple(f))) & 0xFFFFFFFF)
    while True:
        a = rng.randrange(p)
        h = _fp_powmod(p, [a, 1], (p - 1) // 2, g)
        h = list(h) if h else [0]
        h[0] = (h[0] - 1) % p
        d1 = _fp_gcd(p, g, _fp_trim(h))
        if 0 < len(d1) - 1 < len(g) - 1:
            d2 = _fp_divide(p, g, d1)
            return _fp_roots_inner(p, d1, rng) + _fp_roots_inner(p, d2, rng)


def _fp_divide(p, f, g):
    f = list(f)
    dg = len(g) - 1
    ilc = pow(g[-1], p - 2, p)
    q = [0] * (len(f) - dg)
    for i in range(len(f) - dg - 1, -1, -1):
        c = f[i + dg] * ilc % p
        if c:
            q[i] = c
            for k in range(dg + 1):
                f[i + k] = (f[i + k] - c * g[k]) % p
    return _fp_trim(q)
