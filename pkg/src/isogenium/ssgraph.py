"""Full supersingular ell-isogeny graph over F_p-bar, built by BFS.

Vertices are supersingular j-invariants in F_p^2, found by expanding
Phi_ell(j, Y) from a CM starting vertex.  Expansion of a vertex deflates
the specialization by the already-known parent root, so the inner loop
is one quadratic (ell = 2) or one split cubic (ell = 3) per vertex.

The supersingular polynomial oracle recomputes the vertex set by an
independent route: roots of H(t) = sum C(m,i)^2 t^i with m = (p-1)/2
over F_p^2 (equivalently the roots of the resultant of H with
F(s,t) = s t^2 (t-1)^2 - 2^8 (t^2 - t + 1)^3), pushed through the
lambda -> j map, with 0 and 1728 re-adjoined by their congruence
criteria.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from isogenium.arith import (
    Fp2Field,
    find_roots,
    is_prime,
    legendre_symbol,
    poly_deflate,
    roots_quadratic,
    roots_split_cubic,
    sqrt_mod_p,
)
from isogenium.modpoly import hilbert_start_table, modular_polynomial

ORACLE_CAP = 10_000


class NoStartFound(RuntimeError):
    """The CM table has no discriminant giving a supersingular start."""


class OracleTooLarge(ValueError):
    """supersingular_oracle is O(p^2) and capped for validation use."""


class Disconnected(RuntimeError):
    """A BFS missed vertices of a graph that must be connected."""


def vertex_count_formula(p: int) -> int:
    """floor(p/12) plus the 0/1728 correction by p mod 12."""
    eps = {1: 0, 5: 1, 7: 1, 11: 2}[p % 12]
    return p // 12 + eps


def initial_supersingular_j(p: int) -> int:
    """A supersingular j in F_p via the CM table, smallest |D| first."""
    if p < 5:
        raise ValueError("p must be at least 5")
    table = hilbert_start_table()
    for d in sorted(table, key=abs):
        if legendre_symbol(d, p) != -1:
            continue
        poly = table[d]
        if len(poly) == 2:
            return -poly[0] % p
        c0, c1, _ = poly
        disc = (c1 * c1 - 4 * c0) % p
        s = sqrt_mod_p(disc, p)
        if s is None:
            continue
        inv2 = (p + 1) // 2
        r1 = (-c1 + s) * inv2 % p
        r2 = (-c1 - s) * inv2 % p
        return min(r1, r2)
    raise NoStartFound(f"CM start table exhausted for p = {p}")


@dataclass
class IsogenyMultiGraph:
    """G_ell(F_p-bar): canonical vertex order, directed multiplicities.

    adj[i] lists (neighbor index, multiplicity) with out-multiplicity
    summing to ell + 1 at every vertex.
    """

    p: int
    ell: int
    field: Fp2Field
    vertices: list[tuple[int, int]]
    adj: list[list[tuple[int, int]]]
    _index: dict[tuple[int, int], int] = dataclass_field(default=None, repr=False)
    _simple: list[list[int]] = dataclass_field(default=None, repr=False)
    _csr = None

    def __len__(self) -> int:
        return len(self.vertices)

    @property
    def index(self) -> dict[tuple[int, int], int]:
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self.vertices)}
        return self._index

    def conjugate_index(self, i: int) -> int:
        return self.index[self.field.conj(self.vertices[i])]

    def spine_mask(self) -> list[bool]:
        return [v[1] == 0 for v in self.vertices]

    def out_multiplicity(self, i: int) -> int:
        return sum(m for _, m in self.adj[i])

    def multiplicity(self, i: int, j: int) -> int:
        for k, m in self.adj[i]:
            if k == j:
                return m
        return 0

    def loops(self) -> dict[int, int]:
        """Self-loop multiplicity per vertex index, where present."""
        return {i: m for i in range(len(self.vertices)) for k, m in self.adj[i] if k == i}

    def simple_adjacency(self) -> list[list[int]]:
        """Undirected simple view: distinct neighbors, loops dropped."""
        if self._simple is None:
            self._simple = [sorted(k for k, _ in nbrs if k != i) for i, nbrs in enumerate(self.adj)]
        return self._simple

    def csr(self):
        """scipy CSR of the undirected simple view (distance engine)."""
        if self._csr is None:
            from scipy.sparse import csr_matrix

            indptr = [0]
            indices: list[int] = []
            for nbrs in self.simple_adjacency():
                indices.extend(nbrs)
                indptr.append(len(indices))
            n = len(self.vertices)
            data = np.ones(len(indices), dtype=np.int8)
            self._csr = csr_matrix(
                (data, np.asarray(indices, dtype=np.int32), np.asarray(indptr, dtype=np.int32)),
                shape=(n, n),
            )
        return self._csr

    def to_json(self) -> str:
        F = self.field
        edges = []
        for i, nbrs in enumerate(self.adj):
            for k, m in sorted(nbrs):
                edges.append([i, k, m])
        doc = {
            "p": self.p,
            "ell": self.ell,
            "vertices": [F.fmt(v) for v in self.vertices],
            "edges": edges,
        }
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def _expand_vertex(field, phi, v, parent):
    """Neighbor multiset of v: roots with multiplicity of Phi_ell(v, Y)."""
    f = phi.specialize(field, v)
    if parent is None:
        return find_roots(field, f)
    g = poly_deflate(field, f, parent)
    if len(g) == 3:
        rest = roots_quadratic(field, g[1], g[0])
    else:
        rest = roots_split_cubic(field, g[2], g[1], g[0])
        if rest is None or any(
            field.add(field.mul(field.add(field.mul(field.add(r, g[2]), r), g[1]), r), g[0]) != (0, 0)
            for r, _ in rest
        ):
            rest = find_roots(field, g)
    counts: dict[tuple[int, int], int] = {parent: 1}
    for r, m in rest:
        counts[r] = counts.get(r, 0) + m
    return sorted(counts.items(), key=lambda t: field.key(t[0]))


def build_graph(p: int, ell: int) -> IsogenyMultiGraph:
    """BFS construction of G_ell(F_p-bar) from a CM starting vertex."""
    if ell not in (2, 3):
        raise ValueError("ell must be 2 or 3")
    if p == ell or p < 5 or not is_prime(p):
        raise ValueError(f"need a prime p >= 5 with p != ell: got {p}")
    field = Fp2Field(p)
    phi = modular_polynomial(ell)
    start = (initial_supersingular_j(p), 0)
    parent: dict[tuple[int, int], tuple[int, int] | None] = {start: None}
    raw_adj: dict[tuple[int, int], list[tuple[tuple[int, int], int]]] = {}
    layer = [start]
    while layer:
        nxt = []
        for v in sorted(layer, key=field.key):
            nbrs = _expand_vertex(field, phi, v, parent[v])
            assert sum(m for _, m in nbrs) == ell + 1, f"regularity broken at {v}"
            raw_adj[v] = nbrs
            for w, _ in nbrs:
                if w not in parent:
                    parent[w] = v
                    nxt.append(w)
        layer = nxt
    vertices = sorted(raw_adj, key=field.key)
    index = {v: i for i, v in enumerate(vertices)}
    adj = [[(index[w], m) for w, m in raw_adj[v]] for v in vertices]
    g = IsogenyMultiGraph(p=p, ell=ell, field=field, vertices=vertices, adj=adj)
    g._index = index
    return g


def mirror_check(g: IsogenyMultiGraph) -> bool:
    """True iff every edge (u, v, m) has the mirror edge (u^p, v^p, m)."""
    for i in range(len(g.vertices)):
        ci = g.conjugate_index(i)
        mirrored = sorted((g.conjugate_index(k), m) for k, m in g.adj[i])
        if mirrored != sorted(g.adj[ci]):
            return False
    return True


# -- independent supersingular-set oracle ------------------------------------


def _hasse_poly_mod(p: int) -> np.ndarray:
    """H(t) = sum_{i<=m} C(m,i)^2 t^i mod p, m = (p-1)/2, as int64 array."""
    m = (p - 1) // 2
    out = np.empty(m + 1, dtype=np.int64)
    c = 1
    for i in range(m + 1):
        out[i] = c * c % p
        c = c * (m - i) % p * pow(i + 1, p - 2, p) % p
    return out


def _fp_roots_dense(p: int, coeffs: np.ndarray) -> list[int]:
    """All F_p roots of a dense coefficient array by vectorized Horner."""
    xs = np.arange(p, dtype=np.int64)
    acc = np.zeros(p, dtype=np.int64)
    for c in coeffs[::-1]:
        acc = (acc * xs + int(c)) % p
    return [int(r) for r in np.nonzero(acc == 0)[0]]


def _np_polymul_mod(p, a, b, m):
    prod = np.convolve(a, b) % p
    return _np_polyrem(p, prod, m)


def _np_polyrem(p, f, m):
    """f mod m for monic m, numpy coefficient arrays (constant first)."""
    f = f.copy()
    dm = len(m) - 1
    for i in range(len(f) - dm - 1, -1, -1):
        c = f[i + dm] % p
        if c:
            f[i : i + dm + 1] = (f[i : i + dm + 1] - c * m) % p
    out = f[:dm]
    return np.trim_zeros(out, "b")


def _np_gcd(p, a, b):
    a = np.trim_zeros(np.asarray(a, dtype=np.int64) % p, "b")
    b = np.trim_zeros(np.asarray(b, dtype=np.int64) % p, "b")
    while b.size:
        binv = pow(int(b[-1]), p - 2, p)
        bm = b * binv % p
        a, b = b, _np_polyrem(p, a, bm)
    if a.size:
        a = a * pow(int(a[-1]), p - 2, p) % p
    return a


def _np_powmod(p, base, e, m):
    r = np.array([1], dtype=np.int64)
    base = _np_polyrem(p, base % p, m)
    while e:
        if e & 1:
            r = _np_polymul_mod(p, r, base, m)
        base = _np_polymul_mod(p, base, base, m)
        e >>= 1
    return r


def _split_quadratic_part(p: int, h2: np.ndarray, rng) -> list[tuple[int, int]]:
    """Split a product of distinct irreducible quadratics over F_p into
    (trace, norm) pairs via seeded equal-degree splitting."""
    h2 = np.trim_zeros(h2 % p, "b")
    deg = len(h2) - 1
    if deg == 0:
        return []
    if deg == 2:
        inv = pow(int(h2[2]), p - 2, p)
        return [((-int(h2[1]) * inv) % p, int(h2[0]) * inv % p)]
    h2 = h2 * pow(int(h2[-1]), p - 2, p) % p
    half = (p * p - 1) // 2
    while True:
        a = rng.randrange(p)
        b = rng.randrange(1, p)
        w = _np_powmod(p, np.array([a, b], dtype=np.int64), half, h2)
        if not w.size:
            continue
        w = w.copy()
        w[0] = (w[0] - 1) % p
        d1 = _np_gcd(p, h2, w)
        if 0 < len(d1) - 1 < deg:
            d2 = _np_polydiv(p, h2, d1)
            return _split_quadratic_part(p, d1, rng) + _split_quadratic_part(p, d2, rng)


def _np_polydiv(p, f, g):
    f = f.copy() % p
    dg = len(g) - 1
    ilc = pow(int(g[-1]), p - 2, p)
    q = np.zeros(len(f) - dg, dtype=np.int64)
    for i in range(len(f) - dg - 1, -1, -1):
        c = f[i + dg] * ilc % p
        if c:
            q[i] = c
            f[i : i + dg + 1] = (f[i : i + dg + 1] - c * g) % p
    return np.trim_zeros(q, "b")


def supersingular_oracle(p: int) -> set[tuple[int, int]]:
    """The supersingular j-invariant set over F_p^2, computed without Phi.

    Finds all roots lambda of H(t) over F_p^2 (the F_p ones by dense
    evaluation, the rest by splitting the quadratic part of H), maps
    them through j(lambda) = 2^8 (l^2-l+1)^3 / (l^2 (l-1)^2) -- exactly
    the root set of Res_t(H, F) -- and re-adjoins 0 and 1728 when their
    congruence criteria hold.
    """
    if p > ORACLE_CAP:
        raise OracleTooLarge(f"oracle capped at p <= {ORACLE_CAP}")
    if p < 5 or not is_prime(p):
        raise ValueError("p must be a prime >= 5")
    import random as _random

    field = Fp2Field(p)
    H = _hasse_poly_mod(p)
    out: set[tuple[int, int]] = set()

    def add_j(lam):
        l2 = field.sqr(lam)
        num = field.sub(field.add(l2, field.one), lam)
        num = field.smul(256, field.mul(field.sqr(num), num))
        den = field.mul(l2, field.sqr(field.sub(lam, field.one)))
        j = field.mul(num, field.inv(den))
        out.add(j)
        out.add(field.conj(j))

    fp_roots = _fp_roots_dense(p, H)
    rem = H.astype(np.int64)
    for r in fp_roots:
        add_j((r, 0))
        rem = _np_polydiv(p, rem, np.array([-r % p, 1], dtype=np.int64))
    rng = _random.Random(p)
    for trace, norm in _split_quadratic_part(p, rem, rng):
        disc = (trace * trace - 4 * norm) % p
        s = field.sqrt((disc, 0))
        inv2 = (p + 1) // 2
        lam = field.smul(inv2, field.add((trace, 0), s))
        add_j(lam)
    if p % 3 == 2:
        out.add((0, 0))
    if p % 4 == 3:
        out.add((1728 % p, 0))
    return out
