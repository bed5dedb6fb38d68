"""Classical modular polynomials Phi_2, Phi_3 and their special loci.

Holds the integer coefficient matrices, specializations Phi_ell(j, Y)
mod p, the self-loop locus Phi_ell(X, X), the double-edge locus
Res(Phi_ell, dPhi_ell/dY; Y) in hard-coded factored form, the
attachment quadratic X^2 + 191025 X - 121287375, and the small table
of Hilbert class polynomials used both for CM starting vertices and
for locus bookkeeping.
"""

from __future__ import annotations

from isogenium.arith import Fp2Field, fp_poly_roots, legendre_symbol, sqrt_mod_p


class UnknownDiscriminant(KeyError):
    """Discriminant outside the hard-coded Hilbert table."""


# Phi_2(X, Y), the eleven nonzero coefficients.
PHI2_COEFFS: dict[tuple[int, int], int] = {
    (3, 0): 1,
    (0, 3): 1,
    (2, 2): -1,
    (2, 1): 1488,
    (1, 2): 1488,
    (2, 0): -162000,
    (0, 2): -162000,
    (1, 1): 40773375,
    (1, 0): 8748000000,
    (0, 1): 8748000000,
    (0, 0): -157464000000000,
}

# Phi_3(X, Y), classical table; validated in tests against the printed
# specializations Phi_3(0,x), Phi_3(x,x), Phi_3(54000,x), Phi_3(8000,x)
# and Phi_3(-32768,x).
PHI3_COEFFS: dict[tuple[int, int], int] = {
    (4, 0): 1,
    (0, 4): 1,
    (3, 3): -1,
    (3, 2): 2232,
    (2, 3): 2232,
    (3, 1): -1069956,
    (1, 3): -1069956,
    (3, 0): 36864000,
    (0, 3): 36864000,
    (2, 2): 2587918086,
    (2, 1): 8900222976000,
    (1, 2): 8900222976000,
    (2, 0): 452984832000000,
    (0, 2): 452984832000000,
    (1, 1): -770845966336000000,
    (1, 0): 1855425871872000000000,
    (0, 1): 1855425871872000000000,
}


class ModularPolynomial:
    """Symmetric integer bivariate polynomial of degree ell+1 per variable."""

    def __init__(self, level: int, coeffs: dict[tuple[int, int], int]):
        self.level = level
        self.coeffs = dict(coeffs)
        d = level + 1
        self.matrix = [[coeffs.get((i, j), 0) for j in range(d + 1)] for i in range(d + 1)]

    def specialize(self, field: Fp2Field, j) -> list[tuple[int, int]]:
        """Phi_ell(j, Y) as a monic UniPoly over F_p^2."""
        d = self.level + 1
        jp = [field.one]
        for _ in range(d):
            jp.append(field.mul(jp[-1], j))
        out = []
        for col in range(d + 1):
            acc = (0, 0)
            for row in range(d + 1):
                c = self.matrix[row][col]
                if c:
                    acc = field.add(acc, field.smul(c % field.p, jp[row]))
            out.append(acc)
        return out

    def eval2(self, field: Fp2Field, x, y) -> tuple[int, int]:
        """Phi_ell(x, y) in F_p^2; zero iff x, y are ell-isogenous."""
        d = self.level + 1
        xp = [field.one]
        yp = [field.one]
        for _ in range(d):
            xp.append(field.mul(xp[-1], x))
            yp.append(field.mul(yp[-1], y))
        acc = (0, 0)
        for (i, jj), c in self.coeffs.items():
            acc = field.add(acc, field.smul(c % field.p, field.mul(xp[i], yp[jj])))
        return acc

    def is_adjacent(self, field: Fp2Field, x, y) -> bool:
        return self.eval2(field, x, y) == (0, 0)


PHI2 = ModularPolynomial(2, PHI2_COEFFS)
PHI3 = ModularPolynomial(3, PHI3_COEFFS)
_BY_LEVEL = {2: PHI2, 3: PHI3}


def modular_polynomial(ell: int) -> ModularPolynomial:
    if ell not in _BY_LEVEL:
        raise ValueError(f"only ell in {{2, 3}} is supported: got {ell}")
    return _BY_LEVEL[ell]


def phi_specialize(ell: int, field: Fp2Field, j) -> list[tuple[int, int]]:
    return modular_polynomial(ell).specialize(field, j)


# Self-loop locus: integer factorization of Phi_ell(X, X).
#   Phi_2(X, X) = -(X + 3375)^2 (X - 1728) (X - 8000)
#   Phi_3(X, X) = -X (X - 54000) (X - 8000)^2 (X + 32768)^2
SELF_LOOP_FACTORS = {
    2: (-1, [([3375, 1], 2), ([-1728, 1], 1), ([-8000, 1], 1)]),
    3: (-1, [([0, 1], 1), ([-54000, 1], 1), ([-8000, 1], 2), ([32768, 1], 2)]),
}

# Double-edge locus: integer factorization of Res(Phi_ell, d/dY Phi_ell; Y).
#   Res_2 = -4 X^2 (X - 1728) (X + 3375)^2 (X^2 + 191025 X - 121287375)^2
#   Res_3 = -27 x^2 (x - 8000)^2 (x - 1728)^2 (x + 32768)^2
#           * (x^2 - 52250000 x + 12167000000)^2
#           * (x^2 - 1264000 x - 681472000)^2
#           * (x^2 + 117964800 x - 134217728000)^2
DOUBLE_EDGE_FACTORS = {
    2: (-4, [([0, 1], 2), ([-1728, 1], 1), ([3375, 1], 2),
             ([-121287375, 191025, 1], 2)]),
    3: (-27, [([0, 1], 2), ([-8000, 1], 2), ([-1728, 1], 2), ([32768, 1], 2),
              ([12167000000, -52250000, 1], 2),
              ([-681472000, -1264000, 1], 2),
              ([-134217728000, 117964800, 1], 2)]),
}

ATTACHMENT_POLY = [-121287375, 191025, 1]  # Hilbert class polynomial of Q(sqrt(-15))


def self_loop_locus(ell: int, p: int) -> dict[int, int]:
    """Roots of Phi_ell(X, X) mod p with multiplicity, keyed by residue."""
    _, factors = SELF_LOOP_FACTORS[ell]
    out: dict[int, int] = {}
    for poly, mult in factors:
        for r in fp_poly_roots(p, poly):
            out[r] = out.get(r, 0) + mult
    return out


def double_edge_locus(ell: int, p: int) -> set[int]:
    """Distinct F_p roots of Res_ell(X) mod p."""
    _, factors = DOUBLE_EDGE_FACTORS[ell]
    out: set[int] = set()
    for poly, _ in factors:
        out.update(fp_poly_roots(p, poly))
    return out


def attachment_roots(p: int) -> tuple[int, int] | None:
    """The two roots of X^2 + 191025 X - 121287375 mod p, when both exist,
    are distinct, and are supersingular (Legendre (-15|p) = -1)."""
    if legendre_symbol(-15, p) != -1:
        return None
    c0, c1, _ = ATTACHMENT_POLY
    disc = (c1 * c1 - 4 * c0) % p
    if disc == 0:
        return None
    s = sqrt_mod_p(disc, p)
    if s is None:
        return None
    inv2 = (p + 1) // 2
    r1 = (-c1 + s) * inv2 % p
    r2 = (-c1 - s) * inv2 % p
    return (min(r1, r2), max(r1, r2))


# Hilbert class polynomials, integer coefficients constant-first.
# Class number one: D in {-3, -4, -7, -8, -11, -19, -43, -67, -163};
# class number two entries needed by the attachment locus and the
# double-edge factor lists.
HILBERT_TABLE: dict[int, list[int]] = {
    -3: [0, 1],
    -4: [-1728, 1],
    -7: [3375, 1],
    -8: [-8000, 1],
    -11: [32768, 1],
    -15: [-121287375, 191025, 1],
    -19: [884736, 1],
    -20: [-681472000, -1264000, 1],
    -24: [14670139392, -4834944, 1],
    -43: [884736000, 1],
    -67: [147197952000, 1],
    -163: [262537412640768000, 1],
}


def hilbert_start_table() -> dict[int, list[int]]:
    return {d: list(c) for d, c in HILBERT_TABLE.items()}


def hilbert_class_polynomial(d: int) -> list[int]:
    if d not in HILBERT_TABLE:
        raise UnknownDiscriminant(d)
    return list(HILBERT_TABLE[d])
