"""Distances, diameters, conjugate-pair and spine experiments.

Single- and multi-source BFS run on the simple undirected view of the
graph (multiplicities never shorten paths).  Bulk distance work
(diameters, all-pairs experiments) goes through scipy's csgraph BFS;
the pure-Python BFS stays as the oracle side for small graphs and for
the metric-axiom property tests.

Every sampled experiment records its seed, and identical configuration
reproduces identical output bytes.
"""

from __future__ import annotations

import csv
import math
import random
from collections import deque
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

import numpy as np

from isogenium.modpoly import modular_polynomial
from isogenium.ssgraph import Disconnected, IsogenyMultiGraph

EXHAUSTIVE_VERTEX_LIMIT = 5000
DEFAULT_SAMPLES = 1000


class NoConjugatePairs(RuntimeError):
    """The graph has no conjugate pairs outside F_p."""


@dataclass
class DistanceDistribution:
    """Histogrammed graph distances for one experiment."""

    samples: list[int]
    mean: float
    stddev: float
    min: int | None
    max: int | None
    kind: str
    p: int
    ell: int
    sample_size: int
    seed: int
    metadata: dict = dataclass_field(default_factory=dict)

    @classmethod
    def from_samples(cls, samples, kind, p, ell, seed, sample_size=None):
        samples = [int(x) for x in samples]
        n = len(samples)
        mean = math.fsum(samples) / n if n else float("nan")
        var = math.fsum((x - mean) ** 2 for x in samples) / n if n else float("nan")
        return cls(
            samples=samples,
            mean=mean,
            stddev=math.sqrt(var) if n else float("nan"),
            min=min(samples) if n else None,
            max=max(samples) if n else None,
            kind=kind,
            p=p,
            ell=ell,
            sample_size=sample_size if sample_size is not None else n,
            seed=seed,
        )


# -- BFS engines ---------------------------------------------------------------


def bfs_distances(adj: list[list[int]], source: int) -> list[int]:
    """Single-source BFS distance list; -1 marks unreachable vertices."""
    dist = [-1] * len(adj)
    dist[source] = 0
    dq = deque([source])
    while dq:
        u = dq.popleft()
        du = dist[u]
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du + 1
                dq.append(v)
    return dist


def multi_source_bfs(adj: list[list[int]], sources) -> list[int]:
    dist = [-1] * len(adj)
    dq = deque()
    for s in sources:
        if dist[s] != 0:
            dist[s] = 0
            dq.append(s)
    while dq:
        u = dq.popleft()
        du = dist[u]
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = du + 1
                dq.append(v)
    return dist


def bfs_distance_between(adj: list[list[int]], u: int, v: int) -> int:
    if u == v:
        return 0
    dist = bfs_distances(adj, u)
    if dist[v] < 0:
        raise Disconnected((u, v))
    return dist[v]


def graph_distances_from(g: IsogenyMultiGraph, sources) -> np.ndarray:
    """Rows of the distance matrix via scipy BFS (float array, inf = unreachable)."""
    from scipy.sparse.csgraph import dijkstra

    sources = np.asarray(list(sources), dtype=np.int64)
    if sources.size == 0:
        return np.empty((0, len(g.vertices)))
    return dijkstra(g.csr(), directed=False, unweighted=True, indices=sources)


def eccentricities(g: IsogenyMultiGraph, chunk: int = 512) -> np.ndarray:
    n = len(g.vertices)
    out = np.empty(n)
    for lo in range(0, n, chunk):
        rows = graph_distances_from(g, range(lo, min(lo + chunk, n)))
        out[lo : lo + rows.shape[0]] = rows.max(axis=1)
    return out


def diameter(g: IsogenyMultiGraph) -> int:
    """Exact diameter by BFS from every vertex."""
    ecc = eccentricities(g)
    d = ecc.max()
    if not np.isfinite(d):
        raise Disconnected("graph is not connected")
    return int(d)


def diameter_lower_bound(p: int) -> float:
    """Counting bound log2(floor(p/12)) - log2(3) + 1 on the diameter."""
    return math.log2(p // 12) - math.log2(3) + 1


# -- conjugate pairs -----------------------------------------------------------


def conjugate_pairs(g: IsogenyMultiGraph) -> list[tuple[int, int]]:
    """Unordered conjugate pairs (i, conj(i)) off the spine, each once."""
    out = []
    for i, v in enumerate(g.vertices):
        if v[1] == 0:
            continue
        ci = g.conjugate_index(i)
        if i < ci:
            out.append((i, ci))
    return out


def isogenous_conjugate_proportion(g: IsogenyMultiGraph, ell: int | None = None) -> Fraction | None:
    """Fraction of conjugate pairs that are ell-isogenous; None if no pairs.

    With ell equal to the graph's level this is adjacency; for another
    level the pair is tested directly on Phi_ell, so one built graph
    serves both levels.
    """
    pairs = conjugate_pairs(g)
    if not pairs:
        return None
    if ell is None or ell == g.ell:
        hits = sum(1 for i, ci in pairs if g.multiplicity(i, ci) > 0)
    else:
        phi = modular_polynomial(ell)
        F = g.field
        hits = sum(
            1 for i, ci in pairs if phi.is_adjacent(F, g.vertices[i], g.vertices[ci])
        )
    return Fraction(hits, len(pairs))


def conjugate_stats(
    g: IsogenyMultiGraph, sample_size: int = DEFAULT_SAMPLES, seed: int = 0
) -> tuple[DistanceDistribution, DistanceDistribution]:
    """C_p over conjugate pairs and A_p over arbitrary non-spine pairs.

    Exhaustive below EXHAUSTIVE_VERTEX_LIMIT vertices, sampled with the
    seeded generator above it.
    """
    nonspine = [i for i, v in enumerate(g.vertices) if v[1] != 0]
    if len(nonspine) < 2:
        raise NoConjugatePairs(g.p)
    cpairs = conjugate_pairs(g)
    n = len(g.vertices)
    if n < EXHAUSTIVE_VERTEX_LIMIT:
        rows = graph_distances_from(g, nonspine)
        pos = {v: k for k, v in enumerate(nonspine)}
        c_samples = [int(rows[pos[i], ci]) for i, ci in cpairs]
        nonspine_arr = np.asarray(nonspine)
        a_samples: list[int] = []
        for k, i in enumerate(nonspine):
            later = nonspine_arr[k + 1 :]
            a_samples.extend(int(x) for x in rows[k, later])
        c = DistanceDistribution.from_samples(
            c_samples, kind="conjugate", p=g.p, ell=g.ell, seed=seed, sample_size=len(c_samples)
        )
        a = DistanceDistribution.from_samples(
            a_samples, kind="arbitrary", p=g.p, ell=g.ell, seed=seed, sample_size=len(a_samples)
        )
        c.metadata["exhaustive"] = a.metadata["exhaustive"] = True
        return c, a
    rng = random.Random(seed)
    c_sources = [rng.choice(nonspine) for _ in range(sample_size)]
    a_pairs = []
    for _ in range(sample_size):
        u = rng.choice(nonspine)
        v = rng.choice(nonspine)
        while v == u:
            v = rng.choice(nonspine)
        a_pairs.append((u, v))
    sources = sorted({*c_sources, *(u for u, _ in a_pairs)})
    rows = graph_distances_from(g, sources)
    pos = {v: k for k, v in enumerate(sources)}
    c_samples = [int(rows[pos[i], g.conjugate_index(i)]) for i in c_sources]
    a_samples = [int(rows[pos[u], v]) for u, v in a_pairs]
    c = DistanceDistribution.from_samples(
        c_samples, kind="conjugate", p=g.p, ell=g.ell, seed=seed, sample_size=sample_size
    )
    a = DistanceDistribution.from_samples(
        a_samples, kind="arbitrary", p=g.p, ell=g.ell, seed=seed, sample_size=sample_size
    )
    c.metadata["exhaustive"] = a.metadata["exhaustive"] = False
    return c, a


# -- opposite pairs ------------------------------------------------------------


def opposite_pair_proportion(g: IsogenyMultiGraph, spine_indices, pairs) -> Fraction:
    """Fraction of pairs with a shortest path through the spine:
    some spine vertex s has d(u, s) + d(s, v) = d(u, v)."""
    pairs = list(pairs)
    if not pairs:
        return Fraction(0, 1)
    spine_arr = np.asarray(sorted(spine_indices), dtype=np.int64)
    sources = sorted({x for pair in pairs for x in pair})
    rows = graph_distances_from(g, sources)
    pos = {v: k for k, v in enumerate(sources)}
    hits = 0
    for u, v in pairs:
        du, dv = rows[pos[u]], rows[pos[v]]
        d = du[v]
        if (du[spine_arr] + dv[spine_arr] == d).any():
            hits += 1
    return Fraction(hits, len(pairs))


def sample_conjugate_pairs(g: IsogenyMultiGraph, sample_size: int, seed: int):
    """(j, j^p) for sample_size seeded draws of non-spine j."""
    nonspine = [i for i, v in enumerate(g.vertices) if v[1] != 0]
    rng = random.Random(seed)
    return [(i, g.conjugate_index(i)) for i in (rng.choice(nonspine) for _ in range(sample_size))]


def sample_arbitrary_pairs(g: IsogenyMultiGraph, sample_size: int, seed: int):
    nonspine = [i for i, v in enumerate(g.vertices) if v[1] != 0]
    rng = random.Random(seed)
    out = []
    for _ in range(sample_size):
        u = rng.choice(nonspine)
        v = rng.choice(nonspine)
        while v == u:
            v = rng.choice(nonspine)
        out.append((u, v))
    return out


# -- distance to the spine -----------------------------------------------------


def distance_to_spine(
    g: IsogenyMultiGraph, subset_indices, kind: str = "spine_distance", seed: int = 0
) -> DistanceDistribution:
    """Multi-source BFS distances from every vertex to the subset."""
    subset = sorted(set(subset_indices))
    if not subset:
        raise ValueError("subset must be nonempty")
    dist = multi_source_bfs(g.simple_adjacency(), subset)
    if any(d < 0 for d in dist):
        raise Disconnected("subset does not reach the whole graph")
    dd = DistanceDistribution.from_samples(dist, kind=kind, p=g.p, ell=g.ell, seed=seed)
    n, m = len(g.vertices), len(subset)
    dd.metadata["expected_mean"] = math.log2(n / m)
    dd.metadata["subset_size"] = m
    return dd


def random_subgraph_baseline(
    g: IsogenyMultiGraph, size: int, seed: int = 0, repetitions: int = 10
) -> list[DistanceDistribution]:
    """Distance distributions to `repetitions` random vertex subsets of
    the given size (the paper's random-subgraph control)."""
    rng = random.Random(seed)
    n = len(g.vertices)
    out = []
    for r in range(repetitions):
        subset = rng.sample(range(n), size)
        out.append(distance_to_spine(g, subset, kind="random_subgraph", seed=seed))
        out[-1].metadata["repetition"] = r
    return out


# -- per-prime statistics and aggregation ---------------------------------------

STATS_COLUMNS = [
    "p",
    "p_mod_8",
    "p_mod_12",
    "n_vertices",
    "spine_size",
    "spine_components",
    "diameter",
    "diameter_lower_bound",
    "conj_prop_2",
    "conj_prop_3",
    "opp_conj_prop",
    "opp_arb_prop",
    "spine_dist_mean",
    "spine_dist_expected",
    "d_p",
    "sample_size",
    "seed",
]

AGGREGATE_METRICS = [
    "n_vertices",
    "spine_size",
    "spine_components",
    "diameter",
    "conj_prop_2",
    "conj_prop_3",
    "opp_conj_prop",
    "opp_arb_prop",
    "spine_dist_mean",
    "d_p",
]


@dataclass
class StatsRecord:
    p: int
    p_mod_8: int
    p_mod_12: int
    n_vertices: int
    spine_size: int
    spine_components: int
    diameter: int | None = None
    diameter_lower_bound: float | None = None
    conj_prop_2: float | None = None
    conj_prop_3: float | None = None
    opp_conj_prop: float | None = None
    opp_arb_prop: float | None = None
    spine_dist_mean: float | None = None
    spine_dist_expected: float | None = None
    d_p: float | None = None
    sample_size: int = DEFAULT_SAMPLES
    seed: int = 0

    def row(self) -> list:
        return [getattr(self, c) for c in STATS_COLUMNS]


def congruence_aggregate(records: list[StatsRecord], modulus: int) -> list[dict]:
    """Per-residue mean/stddev/count rows for every scalar metric."""
    if modulus not in (8, 12):
        raise ValueError("modulus must be 8 or 12")
    if not records:
        raise ValueError("no records to aggregate")
    rows = []
    residues = sorted({r.p % modulus for r in records})
    for residue in residues:
        grp = [r for r in records if r.p % modulus == residue]
        for metric in AGGREGATE_METRICS:
            vals = [float(getattr(r, metric)) for r in grp if getattr(r, metric) is not None]
            if not vals:
                continue
            mean = math.fsum(vals) / len(vals)
            var = math.fsum((v - mean) ** 2 for v in vals) / len(vals)
            rows.append(
                {
                    "modulus": modulus,
                    "residue": residue,
                    "metric": metric,
                    "mean": mean,
                    "stddev": math.sqrt(var),
                    "n": len(vals),
                }
            )
    return rows


# -- CSV writers (fixed schemas, deterministic bytes) ----------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, Fraction):
        return _fmt(float(x))
    if isinstance(x, float):
        return "%.12g" % x
    return str(x)


def write_distances_csv(path, distributions: list[DistanceDistribution]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["p", "ell", "kind", "sample", "value"])
        for dd in distributions:
            for k, val in enumerate(dd.samples):
                w.writerow([dd.p, dd.ell, dd.kind, k, val])


def write_stats_csv(path, records: list[StatsRecord]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STATS_COLUMNS)
        for r in sorted(records, key=lambda r: r.p):
            w.writerow([_fmt(x) for x in r.row()])


def write_aggregates_csv(path, rows: list[dict]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["modulus", "residue", "metric", "mean", "stddev", "n"])
        for r in rows:
            w.writerow([r["modulus"], r["residue"], r["metric"], _fmt(r["mean"]), _fmt(r["stddev"]), r["n"]])
