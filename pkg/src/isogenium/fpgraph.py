"""G_ell(F_p): supersingular curves over F_p up to F_p-isomorphism.

Vertices are the two canonical short Weierstrass models per
supersingular j in F_p (quadratic twists, or the quartic-twist pair at
j = 1728).  Edges are F_p-rational ell-isogenies found from rational
kernel x-coordinates and Velu's formulas, then identified against the
canonical models by u^4/u^6 isomorphism testing.  Levels (surface /
floor / flat) come from rationality of the full 2-torsion.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dataclass_field
from enum import Enum

from isogenium.arith import Fp2Field, fp_poly_roots, legendre_symbol
from isogenium.modpoly import modular_polynomial


class NotSupersingular(ValueError):
    """j = 0 or 1728 requested for a p where it is ordinary."""


class DifferentJInvariants(ValueError):
    """Isomorphism test between curves with different j-invariants."""


class KernelNotOnCurve(ValueError):
    """Velu called with an x that is not a rational kernel abscissa."""


class TwistIdentificationFailure(RuntimeError):
    """A Velu codomain matched neither canonical model (arithmetic bug)."""


class InvalidDiscriminant(ValueError):
    pass


class Level(str, Enum):
    SURFACE = "surface"
    FLOOR = "floor"
    FLAT = "flat"


@dataclass(frozen=True)
class CurveModel:
    """y^2 = x^3 + a x + b over F_p, tagged with its j and twist class."""

    p: int
    a: int
    b: int
    j: int
    twist_tag: int

    def __post_init__(self):
        p = self.p
        if (4 * pow(self.a, 3, p) + 27 * self.b * self.b) % p == 0:
            raise ValueError("singular model")


def j_invariant(p: int, a: int, b: int) -> int:
    num = 4 * pow(a, 3, p) % p
    den = (num + 27 * b * b) % p
    return 1728 * num * pow(den, p - 2, p) % p


def canonical_models(field: Fp2Field, j: int) -> tuple[CurveModel, CurveModel]:
    """The two F_p-classes with invariant j, as fixed deterministic models."""
    p, n = field.p, field.n
    j %= p
    if j == 1728 % p:
        if p % 4 != 3:
            raise NotSupersingular("j = 1728 is ordinary unless p = 3 mod 4")
        return (
            CurveModel(p, -1 % p, 0, j, 0),
            CurveModel(p, 4 % p, 0, j, 1),
        )
    if j == 0:
        if p % 3 != 2:
            raise NotSupersingular("j = 0 is ordinary unless p = 2 mod 3")
        return (
            CurveModel(p, 0, 1, 0, 0),
            CurveModel(p, 0, pow(n, 3, p), 0, 1),
        )
    k = j * (1728 - j) % p
    a = 3 * k % p
    b = 2 * k * (1728 - j) % p
    return (
        CurveModel(p, a, b, j, 0),
        CurveModel(p, a * n * n % p, b * pow(n, 3, p) % p, j, 1),
    )


def is_fp_isomorphic(e1: CurveModel, e2: CurveModel) -> bool:
    """Whether some u in F_p* gives a2 = u^4 a1, b2 = u^6 b1."""
    p = e1.p
    if e1.j != e2.j:
        raise DifferentJInvariants((e1.j, e2.j))
    if e1.b == 0:  # j = 1728: quartic twist classes
        r = e2.a * pow(e1.a, p - 2, p) % p
        return pow(r, (p - 1) // math.gcd(4, p - 1), p) == 1
    if e1.a == 0:  # j = 0: sextic twist classes
        r = e2.b * pow(e1.b, p - 2, p) % p
        return pow(r, (p - 1) // math.gcd(6, p - 1), p) == 1
    r = e1.a * e2.b % p * pow(e2.a * e1.b % p, p - 2, p) % p
    return legendre_symbol(r, p) == 1


def rational_kernels(e: CurveModel, ell: int) -> list[int]:
    """x-coordinates of F_p-stable order-ell kernels.

    ell = 2: roots of the 2-division cubic x^3 + a x + b.
    ell = 3: roots of the 3-division polynomial 3x^4 + 6ax^2 + 12bx - a^2
    (the kernel {O, (x0, +-y0)} is Frobenius-stable iff x0 is rational).
    """
    p, a, b = e.p, e.a, e.b
    if ell == 2:
        return fp_poly_roots(p, [b, a, 0, 1])
    if ell == 3:
        return fp_poly_roots(p, [-a * a % p, 12 * b % p, 6 * a % p, 0, 3])
    raise ValueError("ell must be 2 or 3")


def velu_codomain(e: CurveModel, x0: int, ell: int) -> tuple[int, int]:
    """Codomain (a', b') of the ell-isogeny with kernel abscissa x0.

    Standard Velu sums: kernel point Q = (x0, y0), gx = 3 x0^2 + a,
    u = 4 y0^2; for order 2, t = gx and y0 = 0; for order 3 the kernel
    is {O, Q, -Q} and t = 2 gx.  Then a' = a - 5t, b' = b - 7(u + t x0).
    The result is checked against Phi_ell(j(E), Y) at runtime.
    """
    p, a, b = e.p, e.a, e.b
    x0 %= p
    y0sq = (pow(x0, 3, p) + a * x0 + b) % p
    gx = (3 * x0 * x0 + a) % p
    if ell == 2:
        if y0sq != 0:
            raise KernelNotOnCurve("x0 is not a rational 2-torsion abscissa")
        t = gx
        w = t * x0 % p
    elif ell == 3:
        if (3 * pow(x0, 4, p) + 6 * a * x0 * x0 + 12 * b * x0 - a * a) % p != 0:
            raise KernelNotOnCurve("x0 is not a root of the 3-division polynomial")
        t = 2 * gx % p
        w = (4 * y0sq + t * x0) % p
    else:
        raise ValueError("ell must be 2 or 3")
    a2 = (a - 5 * t) % p
    b2 = (b - 7 * w) % p
    field = Fp2Field(p)
    phi = modular_polynomial(ell)
    j2 = j_invariant(p, a2, b2)
    assert phi.is_adjacent(field, (e.j, 0), (j2, 0)), "Velu codomain fails the Phi check"
    return a2, b2


@dataclass
class FpVertex:
    model: CurveModel
    level: Level


@dataclass
class FpGraph:
    """G_ell(F_p) with twist bookkeeping used by the spine classifier.

    kernel_targets[i] is the multiset (sorted list) of codomain
    j-invariants of the rational kernels at vertex i; tau[i] is the
    quadratic-twist involution (fixing each j = 1728 vertex).
    """

    p: int
    ell: int
    vertices: list[FpVertex]
    edges: list[tuple[int, int]]
    kernel_targets: list[list[int]]
    tau: list[int]
    component_id: list[int]
    _adj: list[list[int]] = dataclass_field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.vertices)

    def adjacency(self) -> list[list[int]]:
        if self._adj is None:
            adj = [[] for _ in self.vertices]
            for u, v in self.edges:
                adj[u].append(v)
                if u != v:
                    adj[v].append(u)
            self._adj = [sorted(x) for x in adj]
        return self._adj

    def components(self) -> list[list[int]]:
        ncomp = max(self.component_id, default=-1) + 1
        out = [[] for _ in range(ncomp)]
        for i, c in enumerate(self.component_id):
            out[c].append(i)
        return out

    def vertices_for_j(self, j: int) -> list[int]:
        return [i for i, v in enumerate(self.vertices) if v.model.j == j]

    def surface_cycle_length(self) -> int | None:
        """Vertices on the surface of one volcano (p = 7 mod 8 only)."""
        if self.p % 8 != 7:
            return None
        comps = self.components()
        sizes = {
            sum(1 for i in comp if self.vertices[i].level == Level.SURFACE)
            for comp in comps
        }
        assert len(sizes) == 1, "volcano surfaces of unequal size"
        return sizes.pop()

    def to_json(self) -> str:
        doc = {
            "p": self.p,
            "ell": self.ell,
            "vertices": [
                {"j": v.model.j, "twist_tag": v.model.twist_tag, "level": v.level.value}
                for v in self.vertices
            ],
            "edges": sorted([min(u, v), max(u, v)] for u, v in self.edges),
        }
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def _full_two_torsion(e: CurveModel) -> bool:
    return len(fp_poly_roots(e.p, [e.b, e.a, 0, 1])) == 3


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def build_fp_graph(p: int, ell: int, ss_set) -> FpGraph:
    """Construct G_ell(F_p) on the given supersingular F_p j-invariants.

    ss_set: iterable of ints (or of (j, 0) pairs from the full graph).
    """
    field = Fp2Field(p)
    js = sorted({(j[0] if isinstance(j, tuple) else int(j)) % p for j in ss_set})
    vertices: list[FpVertex] = []
    model_index: dict[tuple[int, int], int] = {}
    flat = p % 4 == 1
    for j in js:
        m0, m1 = canonical_models(field, j)
        for m in (m0, m1):
            if flat:
                level = Level.FLAT
            else:
                level = Level.SURFACE if _full_two_torsion(m) else Level.FLOOR
            model_index[(j, m.twist_tag)] = len(vertices)
            vertices.append(FpVertex(model=m, level=level))

    directed: dict[tuple[int, int], int] = {}
    kernel_targets: list[list[int]] = []
    for i, v in enumerate(vertices):
        targets = []
        for x0 in rational_kernels(v.model, ell):
            a2, b2 = velu_codomain(v.model, x0, ell)
            j2 = j_invariant(p, a2, b2)
            targets.append(j2)
            cand = CurveModel(p, a2, b2, j2, 0)
            m0, m1 = canonical_models(field, j2)
            if is_fp_isomorphic(cand, m0):
                k = model_index[(j2, 0)]
            elif is_fp_isomorphic(cand, m1):
                k = model_index[(j2, 1)]
            else:
                raise TwistIdentificationFailure((p, ell, v.model, x0))
            directed[(i, k)] = directed.get((i, k), 0) + 1
        kernel_targets.append(sorted(targets))

    edges: list[tuple[int, int]] = []
    for (i, k), cnt in sorted(directed.items()):
        if i < k:
            assert directed.get((k, i), 0) == cnt, "dual pairing broken"
            edges.extend([(i, k)] * cnt)
        elif i == k:
            assert cnt % 2 == 0, "unpaired self-dual kernel"
            edges.extend([(i, i)] * (cnt // 2))

    uf = _UnionFind(len(vertices))
    for u, v in edges:
        uf.union(u, v)
    roots: dict[int, int] = {}
    component_id = []
    for i in range(len(vertices)):
        r = uf.find(i)
        component_id.append(roots.setdefault(r, len(roots)))

    tau = []
    j1728 = 1728 % p
    for i, v in enumerate(vertices):
        j = v.model.j
        if j == j1728:
            tau.append(i)  # quadratic twist fixes each quartic class
        else:
            tau.append(model_index[(j, 1 - v.model.twist_tag)])

    return FpGraph(
        p=p,
        ell=ell,
        vertices=vertices,
        edges=edges,
        kernel_targets=kernel_targets,
        tau=tau,
        component_id=component_id,
    )


def class_number(d: int) -> int:
    """h(d) by enumerating reduced primitive forms (a, b, c) of disc d.

    b^2 - 4ac = d, |b| <= a <= c, gcd(a, b, c) = 1, and b >= 0 whenever
    |b| = a or a = c.
    """
    if d >= 0 or d % 4 not in (0, 1):
        raise InvalidDiscriminant(d)
    if abs(d) > 10**7:
        raise InvalidDiscriminant(f"|d| too large for brute force: {d}")
    count = 0
    amax = math.isqrt(abs(d) // 3)
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            num = b * b - d
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (b == -a or a == c):
                continue
            if math.gcd(math.gcd(a, abs(b)), c) == 1:
                count += 1
    return count
