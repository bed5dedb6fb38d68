"""The F_p spine of G_ell(F_p-bar) and its transition classification.

extract_spine induces the subgraph on Frobenius-fixed vertices.
project_and_classify decides, for each component of G_ell(F_p), whether
it stacks with its quadratic-twist partner or folds onto itself, finds
attachments along a j-invariant (twist vertices of one j sitting in two
self-paired components), and accounts for every spine edge that has no
F_p-rational kernel behind it: non-loop surpluses become attach-by-edge
events, loop surpluses are recorded as irrational self-isogenies.

Multiplicity bookkeeping at j = 0 and 1728 follows the undirected
relaxation: the extra automorphisms make directed multiplicities
asymmetric there, so pair multiplicities are always read from the
non-special side, and a pair of special endpoints counts once.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from isogenium.fpgraph import FpGraph, class_number
from isogenium.ssgraph import IsogenyMultiGraph


class ClassificationIncomplete(RuntimeError):
    """A component or extra edge defied the stack/fold/attach taxonomy."""


class SingleComponent(RuntimeError):
    """Component-distance experiment on a connected spine."""


@dataclass
class SpineGraph:
    """Induced subgraph of G_ell(F_p-bar) on vertices with j in F_p."""

    p: int
    ell: int
    vertices: list[int]  # j-invariants, sorted
    mult: dict[tuple[int, int], int]  # directed (a, b) -> multiplicity
    component_id: dict[int, int]
    graph_index: dict[int, int]  # j -> vertex index in the parent graph

    def __len__(self) -> int:
        return len(self.vertices)

    def n_components(self) -> int:
        return max(self.component_id.values(), default=-1) + 1

    def components(self) -> list[list[int]]:
        out = [[] for _ in range(self.n_components())]
        for j in self.vertices:
            out[self.component_id[j]].append(j)
        return out

    def is_connected(self) -> bool:
        return self.n_components() <= 1

    def loops(self) -> dict[int, int]:
        return {a: m for (a, b), m in self.mult.items() if a == b}

    def edge_set(self) -> set[tuple[int, int]]:
        return {(a, b) for (a, b) in self.mult if a <= b}


def extract_spine(g: IsogenyMultiGraph) -> SpineGraph:
    js = sorted(v[0] for v in g.vertices if v[1] == 0)
    jset = set(js)
    graph_index = {j: g.index[(j, 0)] for j in js}
    mult: dict[tuple[int, int], int] = {}
    parent = {j: j for j in js}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for j in js:
        for k, m in g.adj[graph_index[j]]:
            w = g.vertices[k]
            if w[1] == 0 and w[0] in jset:
                mult[(j, w[0])] = m
                ra, rb = find(j), find(w[0])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    roots: dict[int, int] = {}
    comp: dict[int, int] = {}
    for j in js:
        r = find(j)
        comp[j] = roots.setdefault(r, len(roots))
    return SpineGraph(p=g.p, ell=g.ell, vertices=js, mult=mult, component_id=comp, graph_index=graph_index)


def spine_size_formula(p: int) -> int:
    """Class-number prediction for |S| by p mod 8."""
    if p % 4 == 1:
        return class_number(-4 * p) // 2
    if p % 8 == 7:
        return class_number(-p)
    return 2 * class_number(-p)


# -- transition report --------------------------------------------------------


@dataclass(frozen=True)
class Fold:
    component: tuple[tuple[int, int], ...]  # (j, twist_tag) pairs, sorted

    @property
    def min_j(self) -> int:
        return self.component[0][0]


@dataclass(frozen=True)
class Stack:
    component_a: tuple[tuple[int, int], ...]
    component_b: tuple[tuple[int, int], ...]

    @property
    def min_j(self) -> int:
        return min(self.component_a[0][0], self.component_b[0][0])


@dataclass(frozen=True)
class AttachEdge:
    j1: int
    j2: int
    new_multiplicity: int = 2


@dataclass(frozen=True)
class AttachAlongJ:
    j: int


@dataclass
class TransitionReport:
    p: int
    ell: int
    folds: list[Fold]
    stacks: list[Stack]
    attach_edges: list[AttachEdge]
    attach_along_j: list[AttachAlongJ]
    new_loops: dict[int, int]  # j -> count of spine loops with no F_p kernel

    @property
    def events(self) -> list:
        return [*self.folds, *self.stacks, *self.attach_edges, *self.attach_along_j]

    def to_json(self) -> str:
        events = []
        for f in self.folds:
            events.append({"kind": "Fold", "component": [list(v) for v in f.component]})
        for s in self.stacks:
            events.append(
                {
                    "kind": "Stack",
                    "component_a": [list(v) for v in s.component_a],
                    "component_b": [list(v) for v in s.component_b],
                }
            )
        for a in self.attach_edges:
            events.append({"kind": "AttachEdge", "j1": a.j1, "j2": a.j2, "new_multiplicity": a.new_multiplicity})
        for a in self.attach_along_j:
            events.append({"kind": "AttachAlongJ", "j": a.j})
        doc = {
            "p": self.p,
            "ell": self.ell,
            "events": events,
            "new_loops": {str(j): m for j, m in sorted(self.new_loops.items())},
        }
        return json.dumps(doc, separators=(",", ":"), sort_keys=True)


def _component_canonical_form(gfp: FpGraph, comp: list[int]):
    """j-labeled vertex and edge multisets: equal forms = stackable."""
    verts = sorted(gfp.vertices[i].model.j for i in comp)
    inb = set(comp)
    edges = sorted(
        tuple(sorted((gfp.vertices[u].model.j, gfp.vertices[v].model.j)))
        for u, v in gfp.edges
        if u in inb and v in inb
    )
    return tuple(verts), tuple(edges)


def _vertex_descriptor(gfp: FpGraph, comp: list[int]) -> tuple[tuple[int, int], ...]:
    return tuple(sorted((gfp.vertices[i].model.j, gfp.vertices[i].model.twist_tag) for i in comp))


def project_and_classify(gfp: FpGraph, s: SpineGraph) -> TransitionReport:
    if (gfp.p, gfp.ell) != (s.p, s.ell):
        raise ValueError("F_p graph and spine built for different (p, ell)")
    p = gfp.p
    special = {0 % p, 1728 % p}

    comps = gfp.components()
    # Twist involution must permute components.
    comp_partner: dict[int, int] = {}
    for cid, comp in enumerate(comps):
        images = {gfp.component_id[gfp.tau[i]] for i in comp}
        if len(images) != 1:
            raise ClassificationIncomplete(f"twist involution tears component {cid}")
        comp_partner[cid] = images.pop()

    folds: list[Fold] = []
    stacks: list[Stack] = []
    seen = set()
    for cid, comp in enumerate(comps):
        if cid in seen:
            continue
        pid = comp_partner[cid]
        if pid == cid:
            for i in comp:
                if gfp.tau[i] not in set(comp):
                    raise ClassificationIncomplete("fold component missing a twist")
            folds.append(Fold(component=_vertex_descriptor(gfp, comp)))
            seen.add(cid)
        else:
            if comp_partner[pid] != cid:
                raise ClassificationIncomplete("twist pairing not an involution")
            if _component_canonical_form(gfp, comp) != _component_canonical_form(gfp, comps[pid]):
                raise ClassificationIncomplete(
                    f"paired components {cid}, {pid} are not isomorphic after relabeling"
                )
            a, b = _vertex_descriptor(gfp, comp), _vertex_descriptor(gfp, comps[pid])
            stacks.append(Stack(*sorted((a, b))))
            seen.update((cid, pid))

    # Attachment along a j-invariant: the two twist vertices of j sit in
    # distinct self-paired components.
    attach_along: list[AttachAlongJ] = []
    for j in s.vertices:
        idxs = gfp.vertices_for_j(j)
        if len(idxs) != 2:
            raise ClassificationIncomplete(f"expected two models for j = {j}")
        c1, c2 = (gfp.component_id[i] for i in idxs)
        if c1 == c2:
            continue
        if comp_partner[c1] == c2:
            continue  # stacking pair, already explained
        if comp_partner[c1] == c1 and comp_partner[c2] == c2:
            attach_along.append(AttachAlongJ(j=j))
        else:
            raise ClassificationIncomplete(f"unexplained split of j = {j} across components")

    # Edge accounting: spine multiplicity vs rational-kernel multiplicity.
    # Pair multiplicities are read from the non-special side; both-special
    # pairs count once (the undirected relaxation at 0 and 1728).
    kernel_count: dict[tuple[int, int], int] = {}
    for i, targets in enumerate(gfp.kernel_targets):
        v = gfp.vertices[i]
        if v.model.twist_tag != 0:
            continue
        for t in targets:
            kernel_count[(v.model.j, t)] = kernel_count.get((v.model.j, t), 0) + 1

    def projected_mult(a: int, b: int) -> int:
        if a in special and b in special:
            has = any(
                gfp.vertices[u].model.j in (a, b) and gfp.vertices[v].model.j in (a, b)
                and {gfp.vertices[u].model.j, gfp.vertices[v].model.j} == {a, b}
                for u, v in gfp.edges
            )
            return 1 if has else 0
        if a in special:
            return kernel_count.get((b, a), 0)
        return kernel_count.get((a, b), 0)

    def spine_mult(a: int, b: int) -> int:
        if a in special and b in special:
            return 1 if s.mult.get((a, b), 0) else 0
        if a in special:
            return s.mult.get((b, a), 0)
        m = s.mult.get((a, b), 0)
        if b not in special and s.mult.get((b, a), 0) != m:
            raise ClassificationIncomplete(f"asymmetric multiplicity at non-special pair {(a, b)}")
        return m

    attach_edges: list[AttachEdge] = []
    new_loops: dict[int, int] = {}
    for a, b in sorted(s.edge_set()):
        if a == b:
            extra = s.mult.get((a, a), 0) - kernel_count.get((a, a), 0)
            if extra < 0:
                raise ClassificationIncomplete(f"more rational loops than spine loops at {a}")
            if extra:
                new_loops[a] = extra
            continue
        ms, mp = spine_mult(a, b), projected_mult(a, b)
        if mp > ms:
            raise ClassificationIncomplete(f"more rational kernels than spine edges on {(a, b)}")
        if mp < ms:
            attach_edges.append(AttachEdge(j1=a, j2=b, new_multiplicity=ms - mp))

    folds.sort(key=lambda f: f.min_j)
    stacks.sort(key=lambda st: st.min_j)
    attach_edges.sort(key=lambda e: (e.j1, e.j2))
    attach_along.sort(key=lambda e: e.j)
    return TransitionReport(
        p=p,
        ell=gfp.ell,
        folds=folds,
        stacks=stacks,
        attach_edges=attach_edges,
        attach_along_j=attach_along,
        new_loops=new_loops,
    )


def sfa_theorem_check(report: TransitionReport) -> bool:
    """Event constraints of the stack/fold/attach theorems.

    ell = 2: only stacks, at most one fold, at most one attach-by-edge,
    never an attachment along a j-invariant; the fold component holds
    1728 when p = 3 mod 4 and is the 8000--8000 edge when p = 5 mod 8.
    ell = 3 and p = 11 mod 12: exactly two folds carrying the 1728
    vertices (with 0 and 54000), attached along 1728, everything else
    stacks, at most 4 attach-by-edge pairs.  Other ell = 3 congruence
    classes only get the generic double-edge budget.
    """
    p, ell = report.p, report.ell
    n_edge, n_along = len(report.attach_edges), len(report.attach_along_j)
    if n_along + 2 * n_edge > 2 * ell * (2 * ell - 1):
        return False
    if ell == 2:
        if n_along != 0 or n_edge > 1 or len(report.folds) > 1:
            return False
        if p % 4 == 3:
            if len(report.folds) != 1:
                return False
            if all(j != 1728 % p for j, _ in report.folds[0].component):
                return False
        elif p % 8 == 5:
            if len(report.folds) != 1:
                return False
            comp = report.folds[0].component
            if len(comp) != 2 or any(j != 8000 % p for j, _ in comp):
                return False
        else:  # p = 1 mod 8: 8000 is ordinary, nothing can fold
            if report.folds:
                return False
        return True
    if p % 12 != 11:
        return True
    if len(report.folds) != 2 or n_along != 1 or n_edge > 4:
        return False
    if report.attach_along_j[0].j != 1728 % p:
        return False
    fold_js = [{j for j, _ in f.component} for f in report.folds]
    if not all(1728 % p in js for js in fold_js):
        return False
    if not any(0 in js for js in fold_js) or not any(54000 % p in js for js in fold_js):
        return False
    return True


def component_count_estimate(p: int, gfp: FpGraph | None = None) -> Fraction:
    """Heuristic spine component count by congruence class."""
    if p % 4 == 1:
        return Fraction(class_number(-4 * p), 4)
    if p % 8 == 3:
        return Fraction(class_number(-p), 2)
    if gfp is None:
        raise ValueError("p = 7 mod 8 needs the F_p graph for the surface cycle length")
    n = gfp.surface_cycle_length()
    return Fraction(class_number(-p), 2 * n)


def spine_component_distances(g: IsogenyMultiGraph, s: SpineGraph, seed: int = 0):
    """Pairwise min-distances between spine components inside the full graph,
    plus a random-vertex-pair baseline, both normalized by the diameter."""
    from isogenium import metrics

    comps = s.components()
    if len(comps) < 2:
        raise SingleComponent(s.p)
    simple = g.simple_adjacency()
    samples: list[int] = []
    for i in range(len(comps)):
        sources = [s.graph_index[j] for j in comps[i]]
        dist = metrics.multi_source_bfs(simple, sources)
        for k in range(i + 1, len(comps)):
            d = min(dist[s.graph_index[j]] for j in comps[k])
            samples.append(d)
    dd = metrics.DistanceDistribution.from_samples(
        samples, kind="spine_component_distance", p=g.p, ell=g.ell, seed=seed
    )
    import random as _random

    rng = _random.Random(seed)
    diam = metrics.diameter(g)
    n = len(g.vertices)
    baseline = []
    for _ in range(100):
        u = rng.randrange(n)
        v = rng.randrange(n)
        while v == u:
            v = rng.randrange(n)
        baseline.append(metrics.bfs_distance_between(simple, u, v))
    dd.metadata["diameter"] = diam
    dd.metadata["normalized_mean"] = (dd.mean / diam) if samples else None
    dd.metadata["random_pair_mean"] = math.fsum(baseline) / len(baseline)
    dd.metadata["random_pair_normalized_mean"] = dd.metadata["random_pair_mean"] / diam
    return dd
