"""Instance ingestion: feature CSVs, edge lists, JSON objective / constraint specs.

File formats:
  feature CSV   id,label1;label2;...,f1,f2,...,fd   (label field may be empty)
  edge list     u v w                               (whitespace separated)
  objective / constraint specs: JSON objects selecting a type plus parameters;
  CLI flags accept either a path or an inline JSON string.
"""

import json
import os

import numpy as np

from .generate import InstanceBundle, generate_instance
from .objectives import (
    CoverageDiversityObjective,
    FacilityLocationObjective,
    GraphCutObjective,
    ImageSummaryObjective,
    ModularObjective,
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


class InstanceFormatError(ValueError):
    pass


def load_features_csv(path):
    """Rows of `id,labels,f1,...,fd`; ids must be dense 0..n-1."""
    rows = {}
    dim = None
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not any(line.strip() for line in lines):
        raise InstanceFormatError(f"{path}: empty feature file")
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) < 3:
            raise InstanceFormatError(f"{path}:{lineno}: expected id,labels,f1,... got {line!r}")
        try:
            uid = int(parts[0])
        except ValueError:
            raise InstanceFormatError(f"{path}:{lineno}: bad element id {parts[0]!r}") from None
        labels = frozenset(x for x in parts[1].split(";") if x)
        try:
            feats = [float(x) for x in parts[2:]]
        except ValueError:
            raise InstanceFormatError(f"{path}:{lineno}: non-numeric feature value") from None
        if dim is None:
            dim = len(feats)
        elif len(feats) != dim:
            raise InstanceFormatError(
                f"{path}:{lineno}: feature dimension {len(feats)} != {dim}"
            )
        if uid in rows:
            raise InstanceFormatError(f"{path}:{lineno}: duplicate element id {uid}")
        rows[uid] = (labels, feats)
    n = len(rows)
    if sorted(rows) != list(range(n)):
        raise InstanceFormatError(f"{path}: element ids must be dense 0..{n - 1}")
    labels = [rows[u][0] for u in range(n)]
    feats = np.array([rows[u][1] for u in range(n)], dtype=np.float64)
    return labels, feats


def load_edge_list(path):
    """`u v w` per line; returns (n_nodes, edges)."""
    edges = []
    max_node = -1
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not any(line.strip() for line in lines):
        raise InstanceFormatError(f"{path}: empty edge list")
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise InstanceFormatError(f"{path}:{lineno}: expected `u v w`, got {line!r}")
        try:
            u, v, w = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise InstanceFormatError(f"{path}:{lineno}: bad edge entry {line!r}") from None
        if u < 0 or v < 0:
            raise InstanceFormatError(f"{path}:{lineno}: negative node id")
        edges.append((u, v, w))
        max_node = max(max_node, u, v)
    return max_node + 1, edges


def parse_spec(text_or_path):
    """Inline JSON object or a path to one."""
    s = str(text_or_path).strip()
    if s.startswith("{"):
        try:
            return json.loads(s), "."
        except json.JSONDecodeError as e:
            raise InstanceFormatError(f"bad inline JSON spec: {e}") from None
    if not os.path.exists(s):
        raise InstanceFormatError(f"spec file not found: {s}")
    with open(s) as fh:
        try:
            return json.load(fh), os.path.dirname(os.path.abspath(s))
        except json.JSONDecodeError as e:
            raise InstanceFormatError(f"{s}: bad JSON: {e}") from None


def build_objective(spec, base_dir=".", seed=0):
    """Objective oracle from a spec dict; returns (oracle, ground)."""
    kind = spec.get("type")
    rel = lambda p: p if os.path.isabs(p) else os.path.join(base_dir, p)
    if kind in ("coverage_diversity", "image_summary", "facility_location"):
        if "features" in spec:
            labels, feats = load_features_csv(rel(spec["features"]))
            payload = {"labels": labels, "features": feats}
            if kind == "coverage_diversity":
                M = similarity_from_features(feats, float(spec.get("decay", 0.2)))
            else:
                M = cosine_similarity(feats)
        elif "matrix" in spec:
            M = np.asarray(spec["matrix"], dtype=np.float64)
            payload = {}
        else:
            raise InstanceFormatError(f"{kind} spec needs `features` or `matrix`")
        cls = {
            "coverage_diversity": CoverageDiversityObjective,
            "image_summary": ImageSummaryObjective,
            "facility_location": FacilityLocationObjective,
        }[kind]
        obj = cls(M)
        return obj, GroundSet(obj.n, payload)
    if kind == "modular":
        obj = ModularObjective(spec["weights"])
        return obj, GroundSet(obj.n)
    if kind == "cut":
        if "edges" in spec and isinstance(spec["edges"], str):
            n, edges = load_edge_list(rel(spec["edges"]))
        else:
            edges = [tuple(e) for e in spec["edges"]]
            n = spec.get("n", 1 + max(max(u, v) for u, v, _ in edges))
        obj = GraphCutObjective(n, edges)
        return obj, GroundSet(n, {"edges": edges})
    if kind == "social_revenue":
        if isinstance(spec.get("edges"), str):
            n_nodes, edges = load_edge_list(rel(spec["edges"]))
        else:
            edges = [tuple(e) for e in spec["edges"]]
            n_nodes = spec.get("n_nodes", 1 + max(max(u, v) for u, v, _ in edges))
        d = int(spec.get("n_products", 5))
        if "alpha" in spec:
            alpha = np.asarray(spec["alpha"], dtype=np.float64)
        else:
            # coefficient draws are sampled once and frozen for non-adaptive runs
            alpha = make_rng(spec.get("alpha_seed", seed), "alpha").pareto(2.0, size=(n_nodes, d))
        if "weight_seed" in spec or any(w is None for _, _, w in edges):
            w_rng = make_rng(spec.get("weight_seed", seed), "weights")
            edges = [(u, v, float(w_rng.uniform())) for u, v, _ in edges]
        obj = SocialRevenueObjective(n_nodes, d, edges, alpha)
        return obj, GroundSet(obj.n, {"n_nodes": n_nodes, "n_products": d, "edges": edges})
    raise InstanceFormatError(f"unknown objective type {kind!r}")


def build_system(spec, ground: GroundSet):
    kind = spec.get("type")
    n = ground.n
    if kind == "cardinality":
        return CardinalitySystem(n, int(spec["d"]))
    if kind == "partition":
        return PartitionMatroidSystem(
            spec["categories"], spec["caps"], spec.get("global_cap")
        )
    if kind == "multilabel":
        labels = spec.get("labels") or ground.payload.get("labels")
        if labels is None:
            raise InstanceFormatError("multilabel spec needs labels (inline or from the feature CSV)")
        cap = spec.get("per_label_cap", 10)
        if isinstance(cap, dict):
            cap = {str(k): int(v) for k, v in cap.items()}
        return MultiLabelBoundSystem(labels, cap, spec.get("global_cap"))
    if kind == "social":
        return SocialSeedingSystem(
            int(spec["n_nodes"]),
            int(spec.get("n_products", 5)),
            int(spec.get("q", 3)),
            int(spec["m"]),
        )
    if kind == "explicit":
        return ExplicitSystem(int(spec["n"]), [set(s) for s in spec["sets"]], spec.get("declared_k"))
    raise InstanceFormatError(f"unknown constraint type {kind!r}")


def build_adaptive(spec, base_dir="."):
    """Adaptive instance from a spec dict.

    finite: {"type": "finite", "state_probs": [[...], ...],
             "utility": {"name": "coverage", "item_weights": [...],
                         "cover": [[[item, ...], ...], ...], "penalty": 0.0}}
    social: {"type": "social", "edges": path-or-list, "n_products": 5}
    """
    from .adaptive import AdaptiveSocialInstance, CoverageUtility, FiniteAdaptiveInstance

    kind = spec.get("type")
    if kind == "finite":
        util = spec["utility"]
        if util.get("name") != "coverage":
            raise InstanceFormatError(f"unknown utility fixture {util.get('name')!r}")
        fn = CoverageUtility(util["item_weights"], util["cover"], util.get("penalty", 0.0))
        return FiniteAdaptiveInstance(spec["state_probs"], fn)
    if kind == "social":
        if isinstance(spec.get("edges"), str):
            path = spec["edges"]
            n_nodes, edges = load_edge_list(path if os.path.isabs(path) else os.path.join(base_dir, path))
        else:
            edges = [tuple(e) for e in spec["edges"]]
            n_nodes = spec.get("n_nodes", 1 + max(max(u, v) for u, v, _ in edges))
        return AdaptiveSocialInstance(n_nodes, int(spec.get("n_products", 5)), edges)
    raise InstanceFormatError(f"unknown adaptive instance type {kind!r}")


def load_instance(objective_spec, constraint_spec, seed=0) -> InstanceBundle:
    """Build a bundle from two spec strings/paths (or `generate:` shortcuts).

    `generate:kind:n` produces the synthetic instance family directly.
    """
    if isinstance(objective_spec, str) and objective_spec.startswith("generate:"):
        _, kind, n = objective_spec.split(":")
        return generate_instance(kind, int(n), seed)
    ospec, obase = parse_spec(objective_spec)
    objective, ground = build_objective(ospec, obase, seed)
    cspec, _ = parse_spec(constraint_spec)
    system = build_system(cspec, ground)
    if system.n != objective.n:
        raise InstanceFormatError(
            f"constraint ground size {system.n} != objective ground size {objective.n}"
        )
    return InstanceBundle("loaded", ground, objective, system, meta={"seed": seed})
