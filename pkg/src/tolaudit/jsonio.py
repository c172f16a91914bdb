"""JSON ingestion and deterministic report serialization.

Input documents follow fixed shapes (points plus one of three relation
encodings; labels; feature assignments; attack targets; similarity).  All
emitted JSON is byte-deterministic: keys sorted, floats rounded to 12
significant digits, one trailing newline.
"""

from __future__ import annotations

import dataclasses
import json
import math
from pathlib import Path
from typing import Any, Mapping

from .audit import Attack, Classifier
from .accuracy import WorldModel
from .category import SimilarityScale, TverskyModel
from .errors import GuardError, ValidationError
from .features import FeatureRepresentation
from .spaces import (
    ContrastContext,
    Covering,
    ToleranceSpace,
    relation_from_contrast,
    relation_from_covering,
)

__all__ = [
    "MAX_POINTS_GUARD",
    "read_json",
    "canonical_json",
    "space_from_doc",
    "load_space",
    "space_to_doc",
    "classifier_from_doc",
    "load_classifier",
    "world_from_doc",
    "load_world",
    "attack_from_doc",
    "load_attack",
    "attack_to_doc",
    "features_from_doc",
    "load_features",
    "features_to_doc",
    "similarity_from_doc",
    "load_similarity",
]

MAX_POINTS_GUARD = 100_000


def read_json(path: str | Path) -> Any:
    """Parse a JSON file, reporting line and column on syntax errors."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from None


def _canonical(obj: Any) -> Any:
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            raise ValidationError("reports must not contain NaN or infinite floats")
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {str(k): _canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_canonical(v) for v in obj]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return _canonical(dataclasses.asdict(obj))
    return obj


def canonical_json(obj: Any) -> str:
    """Deterministic serialization: sorted keys, 12-significant-digit floats."""
    return json.dumps(_canonical(obj), sort_keys=True, indent=2) + "\n"


def _require(doc: Mapping, key: str, where: str) -> Any:
    if key not in doc:
        raise ValidationError(f"{where}: missing required key {key!r}")
    return doc[key]


def space_from_doc(doc: Mapping, max_points: int = MAX_POINTS_GUARD) -> ToleranceSpace:
    """Build a tolerance space from its JSON document."""
    points = [str(p) for p in _require(doc, "points", "space document")]
    if len(points) > max_points:
        raise GuardError(f"space has {len(points)} points, above the guard of {max_points}")
    weights = doc.get("weights")
    if weights is None:
        weights = [1.0] * len(points)
    rel = _require(doc, "relation", "space document")
    kind = _require(rel, "type", "relation")
    if kind == "edges":
        edges = [(int(i), int(j)) for i, j in _require(rel, "edges", "edges relation")]
        return ToleranceSpace.from_edges(points, edges, weights)
    if kind == "covering":
        sets = [frozenset(int(i) for i in s) for s in _require(rel, "sets", "covering relation")]
        return relation_from_covering(Covering(tuple(points), tuple(sets)), weights)
    if kind == "contrast":
        matrix = tuple(tuple(float(v) for v in row) for row in _require(rel, "matrix", "contrast relation"))
        epsilon = tuple(float(e) for e in _require(rel, "epsilon", "contrast relation"))
        return relation_from_contrast(ContrastContext(tuple(points), matrix, epsilon), weights)
    raise ValidationError(f"unknown relation type {kind!r} (expected edges, covering, or contrast)")


def load_space(path: str | Path, max_points: int = MAX_POINTS_GUARD) -> ToleranceSpace:
    return space_from_doc(read_json(path), max_points)


def space_to_doc(space: ToleranceSpace) -> dict:
    edges = [
        [i, j]
        for i in range(space.n)
        for j in sorted(space.neighbors[i])
        if j > i
    ]
    return {
        "points": list(space.point_ids),
        "weights": list(space.weights),
        "relation": {"type": "edges", "edges": edges},
    }


def classifier_from_doc(doc: Mapping, space: ToleranceSpace) -> Classifier:
    labels = [int(c) for c in _require(doc, "labels", "classifier document")]
    if len(labels) != space.n:
        raise ValidationError(f"classifier lists {len(labels)} labels for {space.n} points")
    return Classifier(tuple(labels), int(_require(doc, "num_labels", "classifier document")))


def load_classifier(path: str | Path, space: ToleranceSpace) -> Classifier:
    return classifier_from_doc(read_json(path), space)


def world_from_doc(doc: Mapping, space: ToleranceSpace) -> WorldModel:
    labels = [int(c) for c in _require(doc, "labels", "world document")]
    if len(labels) != space.n:
        raise ValidationError(f"world model lists {len(labels)} labels for {space.n} points")
    return WorldModel(tuple(labels), int(_require(doc, "num_labels", "world document")))


def load_world(path: str | Path, space: ToleranceSpace) -> WorldModel:
    return world_from_doc(read_json(path), space)


def attack_from_doc(doc: Mapping, space: ToleranceSpace) -> Attack:
    targets = [int(t) for t in _require(doc, "target", "attack document")]
    if len(targets) != space.n:
        raise ValidationError(f"attack lists {len(targets)} targets for {space.n} points")
    return Attack(tuple(targets))


def load_attack(path: str | Path, space: ToleranceSpace) -> Attack:
    return attack_from_doc(read_json(path), space)


def attack_to_doc(attack: Attack) -> dict:
    return {"target": list(attack.targets)}


def features_from_doc(doc: Mapping, space: ToleranceSpace) -> FeatureRepresentation:
    raw = _require(doc, "features", "feature document")
    fids = tuple(tuple(str(x) for x in f) if isinstance(f, list) else str(f) for f in raw)
    assign = _require(doc, "assign", "feature document")
    if len(assign) != space.n:
        raise ValidationError(f"feature document assigns {len(assign)} points out of {space.n}")
    return FeatureRepresentation(
        space.point_ids, fids, tuple(frozenset(int(k) for k in s) for s in assign)
    )


def load_features(path: str | Path, space: ToleranceSpace) -> FeatureRepresentation:
    return features_from_doc(read_json(path), space)


def features_to_doc(rep: FeatureRepresentation) -> dict:
    return {
        "features": [list(f) if isinstance(f, tuple) else f for f in rep.feature_ids],
        "assign": [sorted(s) for s in rep.assign],
    }


def similarity_from_doc(doc: Mapping, space: ToleranceSpace) -> SimilarityScale | TverskyModel:
    """Either a raw matrix scale or a Tversky model with its own features."""
    if "matrix" in doc:
        matrix = tuple(tuple(float(v) for v in row) for row in doc["matrix"])
        return SimilarityScale(space.point_ids, matrix)
    if "tversky" in doc:
        t = doc["tversky"]
        rep = features_from_doc(_require(t, "features", "tversky document"), space)
        return TverskyModel(
            alpha=float(_require(t, "alpha", "tversky document")),
            beta=float(_require(t, "beta", "tversky document")),
            theta=float(_require(t, "theta", "tversky document")),
            salience=tuple(float(v) for v in _require(t, "salience", "tversky document")),
            rep=rep,
        )
    raise ValidationError("similarity document needs either 'matrix' or 'tversky'")


def load_similarity(path: str | Path, space: ToleranceSpace) -> SimilarityScale | TverskyModel:
    return similarity_from_doc(read_json(path), space)
