"""Synthetic instance generators (deterministic under seed)."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .adaptive import AdaptiveSocialInstance
from .objectives import (
    CoverageDiversityObjective,
    GraphCutObjective,
    ImageSummaryObjective,
    SocialRevenueObjective,
    cosine_similarity,
    similarity_from_features,
)
from .rng import make_rng
from .systems import (
    CardinalitySystem,
    ExplicitSystem,
    GroundSet,
    MultiLabelBoundSystem,
    PartitionMatroidSystem,
    SocialSeedingSystem,
)
from .verify import measured_k_from_masks

MOVIE_GENRES = ("adventure", "animation", "fantasy")


@dataclass
class InstanceBundle:
    name: str
    ground: GroundSet
    objective: object
    system: object
    adaptive: object = None
    meta: dict = field(default_factory=dict)


def _random_graph(rng, n, avg_degree):
    """Simple undirected weighted graph with roughly avg_degree * n / 2 edges."""
    target = int(round(avg_degree * n / 2))
    edges = {}
    while len(edges) < min(target, n * (n - 1) // 2):
        u, v = int(rng.integers(n)), int(rng.integers(n))
        if u == v:
            continue
        key = (min(u, v), max(u, v))
        if key not in edges:
            edges[key] = float(rng.uniform(0.0, 1.0))
    return [(u, v, w) for (u, v), w in sorted(edges.items())]


def generate_instance(kind: str, n: int, seed: int = 0, **params) -> InstanceBundle:
    """Synthetic instance of one of the experiment families.

    movie: clustered 25-dim feature vectors, exp(-0.2 * dist) similarities,
    coverage-diversity objective, three genre labels capped at 10 each plus
    a global cap m (default 30).
    image: three categories, non-negative feature vectors, cosine
    similarities, image-summary objective, per-category cap 5 plus a global
    cap m (default 15).
    social: random weighted graph, 5 products, per-node cap 3, per-product
    cap m (default 10), Pareto-II revenue coefficients; bundles the adaptive
    variant of the same instance.
    random-cut: random weighted graph, cut objective, cardinality cap.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed, "gen", kind)
    if kind == "movie":
        m = int(params.get("m", 30))
        per_genre = int(params.get("per_label_cap", 10))
        decay = float(params.get("decay", 0.2))
        centers = rng.normal(0.0, 1.0, size=(3, 25))
        assign = rng.integers(0, 3, size=n)
        feats = centers[assign] + rng.normal(0.0, 0.8, size=(n, 25))
        labels = []
        for u in range(n):
            k = 1 + int(rng.random() < 0.4)
            labels.append(frozenset(str(g) for g in rng.choice(MOVIE_GENRES, size=k, replace=False)))
        M = similarity_from_features(feats, decay)
        ground = GroundSet(n, {"features": feats, "labels": labels})
        return InstanceBundle(
            f"movie-n{n}-s{seed}",
            ground,
            CoverageDiversityObjective(M),
            MultiLabelBoundSystem(labels, per_genre, m),
            meta={"kind": kind, "seed": seed, "m": m},
        )
    if kind == "image":
        m = int(params.get("m", 15))
        per_cat = int(params.get("per_category_cap", 5))
        categories = rng.integers(0, 3, size=n)
        centers = np.abs(rng.normal(1.0, 0.6, size=(3, 16)))
        feats = np.abs(centers[categories] + np.abs(rng.normal(0.0, 0.3, size=(n, 16))))
        sim = cosine_similarity(feats)
        ground = GroundSet(n, {"features": feats, "categories": categories})
        return InstanceBundle(
            f"image-n{n}-s{seed}",
            ground,
            ImageSummaryObjective(sim),
            PartitionMatroidSystem(categories, per_cat, m),
            meta={"kind": kind, "seed": seed, "m": m},
        )
    if kind == "social":
        n_products = int(params.get("n_products", 5))
        per_node = int(params.get("q", 3))
        m = int(params.get("m", 10))
        avg_degree = float(params.get("avg_degree", 10.0))
        edges = _random_graph(rng, n, avg_degree)
        alpha = rng.pareto(2.0, size=(n, n_products))
        ground = GroundSet(n * n_products, {"n_nodes": n, "n_products": n_products, "edges": edges})
        return InstanceBundle(
            f"social-n{n}-s{seed}",
            ground,
            SocialRevenueObjective(n, n_products, edges, alpha),
            SocialSeedingSystem(n, n_products, per_node, m),
            adaptive=AdaptiveSocialInstance(n, n_products, edges),
            meta={"kind": kind, "seed": seed, "m": m, "q": per_node, "n_products": n_products},
        )
    if kind == "random-cut":
        d = int(params.get("d", max(3, n // 4)))
        avg_degree = float(params.get("avg_degree", 6.0))
        edges = _random_graph(rng, n, avg_degree)
        ground = GroundSet(n, {"edges": edges})
        return InstanceBundle(
            f"cut-n{n}-s{seed}",
            ground,
            GraphCutObjective(n, edges),
            CardinalitySystem(n, d),
            meta={"kind": kind, "seed": seed, "d": d},
        )
    raise ValueError(f"unknown instance kind {kind!r} (movie, image, social, random-cut)")


def adaptivity_instance(n: int, seed: int = 0, clusters: Optional[int] = None) -> InstanceBundle:
    """Clustered image-summary instance over a free matroid (rank n, k=1).

    Tight within-cluster similarity makes marginal gains collapse after one
    pick per cluster, so the batched algorithm finishes in few thresholds;
    used to measure adaptive-round scaling against the rank.
    """
    rng = make_rng(seed, "adaptivity", n)
    if clusters is None:
        # fixed cluster count: growing n adds near-duplicates, the regime
        # where adaptive rounds scale polylogarithmically
        clusters = 16
    centers = np.abs(rng.normal(1.0, 1.0, size=(clusters, 12))) + 0.2
    assign = rng.integers(0, clusters, size=n)
    feats = centers[assign] * (1.0 + 0.01 * rng.normal(size=(n, 12)))
    sim = cosine_similarity(np.abs(feats))
    ground = GroundSet(n, {"clusters": assign})
    return InstanceBundle(
        f"adaptivity-n{n}-s{seed}",
        ground,
        ImageSummaryObjective(sim),
        CardinalitySystem(n, n),
        meta={"kind": "adaptivity", "seed": seed, "clusters": clusters},
    )


def random_explicit_system(rng_or_seed, n: int, k: int, max_tries: int = 200) -> ExplicitSystem:
    """Random explicit family with measured k-system parameter exactly k.

    Intersections of k random partition matroids are k-systems; candidates
    are regenerated until the exhaustively measured k matches and the rank
    is at least 2.
    """
    rng = rng_or_seed if isinstance(rng_or_seed, np.random.Generator) else make_rng(rng_or_seed, "explicit")
    for _ in range(max_tries):
        group_masks = []
        caps = []
        for _p in range(k):
            groups = int(rng.integers(2, 4))
            assign = rng.integers(0, groups, size=n)
            for g in range(groups):
                mask = 0
                for u in range(n):
                    if assign[u] == g:
                        mask |= 1 << u
                if mask:
                    group_masks.append(mask)
                    caps.append(int(rng.integers(1, 3)))
        masks = []
        for m in range(1 << n):
            if all((m & gm).bit_count() <= c for gm, c in zip(group_masks, caps)):
                masks.append(m)
        rank = max(m.bit_count() for m in masks)
        if rank < 2:
            continue
        measured = measured_k_from_masks(n, masks)
        if measured == k:
            return ExplicitSystem.from_masks(n, masks, declared_k=measured)
    raise RuntimeError(f"could not generate an explicit {k}-system on n={n}")


def random_symmetric_objective(rng_or_seed, n: int, kind: str = "coverage-diversity"):
    """Small random non-monotone objective for ratio experiments."""
    rng = rng_or_seed if isinstance(rng_or_seed, np.random.Generator) else make_rng(rng_or_seed, "obj")
    if kind == "coverage-diversity":
        feats = rng.normal(0.0, 1.0, size=(n, 4))
        return CoverageDiversityObjective(similarity_from_features(feats, 0.2))
    if kind == "cut":
        edges = []
        for u in range(n):
            for v in range(u + 1, n):
                if rng.random() < 0.5:
                    edges.append((u, v, float(rng.uniform(0.1, 1.0))))
        return GraphCutObjective(n, edges)
    raise ValueError(f"unknown objective kind {kind!r}")
