"""Finite tolerance spaces and the structures that generate them.

A tolerance space is a finite weighted point set carrying a reflexive,
symmetric indiscriminability relation.  Two points related by it are
Doppelgangers of each other; the transitive closure of the relation
partitions the space into elementary (metamorphy) classes.  Relations can
be ingested directly as edges, derived from coverings, or derived from
contrast contexts (a contrast function plus per-point thresholds).
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ValidationError

__all__ = [
    "ToleranceSpace",
    "Covering",
    "ContrastContext",
    "ElementaryPartition",
    "TransitivityCheck",
    "relation_from_covering",
    "canonical_covering",
    "is_transitive",
    "relation_from_contrast",
    "canonical_contrast",
    "weber_contrast",
    "transitive_closure",
    "is_optimal",
]


def _check_weights(weights: Sequence[float], n: int) -> tuple[float, ...]:
    if len(weights) != n:
        raise ValidationError(f"expected {n} weights, got {len(weights)}")
    ws = tuple(float(w) for w in weights)
    for i, w in enumerate(ws):
        if not math.isfinite(w) or w < 0.0:
            raise ValidationError(f"weight of point #{i} must be finite and >= 0, got {w}")
    if sum(ws) <= 0.0:
        raise ValidationError("total weight must be positive")
    return ws


def _check_point_ids(point_ids: Sequence[str]) -> tuple[str, ...]:
    ids = tuple(str(p) for p in point_ids)
    if not ids:
        raise ValidationError("a tolerance space needs at least one point")
    if len(set(ids)) != len(ids):
        dup = next(p for p in ids if ids.count(p) > 1)
        raise ValidationError(f"point ids must be pairwise distinct (duplicate {dup!r})")
    return ids


@dataclass(frozen=True)
class ToleranceSpace:
    """A finite weighted point set with a reflexive symmetric relation.

    ``neighbors[i]`` is the Doppelganger set D(x_i) as a frozenset of point
    indices; it always contains ``i`` itself.  Weights are raw non-negative
    measure values, normalized to probabilities on demand by
    :meth:`probabilities`.  Instances are immutable and safe to share.
    """

    point_ids: tuple[str, ...]
    neighbors: tuple[frozenset[int], ...]
    weights: tuple[float, ...]
    # Pairs (x, y) where the generating structure held one-way only and was
    # symmetrized; informational, not part of the relation itself.
    asymmetries: tuple[tuple[str, str], ...] = ()

    def __post_init__(self) -> None:
        ids = _check_point_ids(self.point_ids)
        object.__setattr__(self, "point_ids", ids)
        n = len(ids)
        if len(self.neighbors) != n:
            raise ValidationError(f"expected {n} neighbor sets, got {len(self.neighbors)}")
        nbrs = tuple(frozenset(s) for s in self.neighbors)
        for i, s in enumerate(nbrs):
            for j in s:
                if not (0 <= j < n):
                    raise ValidationError(f"neighbor index {j} of point #{i} out of range")
            if i not in s:
                raise ValidationError(f"relation must be reflexive: {ids[i]!r} not related to itself")
        for i, s in enumerate(nbrs):
            for j in s:
                if i not in nbrs[j]:
                    raise ValidationError(
                        f"relation must be symmetric: {ids[i]!r} ~ {ids[j]!r} but not conversely"
                    )
        object.__setattr__(self, "neighbors", nbrs)
        object.__setattr__(self, "weights", _check_weights(self.weights, n))
        object.__setattr__(self, "asymmetries", tuple((str(a), str(b)) for a, b in self.asymmetries))
        object.__setattr__(self, "_index", {p: i for i, p in enumerate(ids)})

    @property
    def n(self) -> int:
        return len(self.point_ids)

    def index(self, point_id: str) -> int:
        try:
            return self._index[point_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"unknown point id {point_id!r}") from None

    def related(self, i: int, j: int) -> bool:
        return j in self.neighbors[i]

    def doppelgangers(self, i: int) -> frozenset[int]:
        """D(x_i): all points indiscriminable from x_i, including itself."""
        return self.neighbors[i]

    def probabilities(self) -> tuple[float, ...]:
        """Weights normalized to a probability measure."""
        total = sum(self.weights)
        return tuple(w / total for w in self.weights)

    def total_weight(self) -> float:
        return sum(self.weights)

    @classmethod
    def from_edges(
        cls,
        point_ids: Sequence[str],
        edges: Iterable[tuple[int, int]],
        weights: Sequence[float] | None = None,
    ) -> "ToleranceSpace":
        """Build a space from unordered index pairs; loops are implicit."""
        ids = _check_point_ids(point_ids)
        n = len(ids)
        adj: list[set[int]] = [{i} for i in range(n)]
        for i, j in edges:
            if not (0 <= i < n and 0 <= j < n):
                raise ValidationError(f"edge ({i}, {j}) out of range for {n} points")
            adj[i].add(j)
            adj[j].add(i)
        if weights is None:
            weights = [1.0] * n
        return cls(ids, tuple(frozenset(s) for s in adj), tuple(weights))


@dataclass(frozen=True)
class Covering:
    """Per-point subsets g(x) with x in g(x), given as index sets."""

    point_ids: tuple[str, ...]
    sets: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        ids = _check_point_ids(self.point_ids)
        object.__setattr__(self, "point_ids", ids)
        n = len(ids)
        if len(self.sets) != n:
            raise ValidationError(f"expected {n} covering sets, got {len(self.sets)}")
        sets = tuple(frozenset(s) for s in self.sets)
        for i, s in enumerate(sets):
            for j in s:
                if not (0 <= j < n):
                    raise ValidationError(f"covering set of {ids[i]!r} references index {j} out of range")
            if i not in s:
                raise ValidationError(f"covering must satisfy x in g(x): violated at {ids[i]!r}")
        object.__setattr__(self, "sets", sets)


@dataclass(frozen=True)
class ContrastContext:
    """Real-valued contrast matrix c(x, y) with per-point thresholds.

    The derived pre-relation is c(x, y) <= epsilon(x); the invariant
    c(x, x) <= epsilon(x) keeps it reflexive.
    """

    point_ids: tuple[str, ...]
    contrast: tuple[tuple[float, ...], ...]
    epsilon: tuple[float, ...]

    def __post_init__(self) -> None:
        ids = _check_point_ids(self.point_ids)
        object.__setattr__(self, "point_ids", ids)
        n = len(ids)
        if len(self.contrast) != n or any(len(row) != n for row in self.contrast):
            raise ValidationError(f"contrast must be an {n}x{n} matrix")
        if len(self.epsilon) != n:
            raise ValidationError(f"expected {n} epsilon values, got {len(self.epsilon)}")
        c = tuple(tuple(float(v) for v in row) for row in self.contrast)
        eps = tuple(float(e) for e in self.epsilon)
        for row in c:
            for v in row:
                if not math.isfinite(v):
                    raise ValidationError("contrast values must be finite")
        for i in range(n):
            if c[i][i] > eps[i]:
                raise ValidationError(
                    f"c(x, x) <= epsilon(x) violated at {ids[i]!r}: "
                    f"{c[i][i]} > {eps[i]} (derived relation would not be reflexive)"
                )
        object.__setattr__(self, "contrast", c)
        object.__setattr__(self, "epsilon", eps)


@dataclass(frozen=True)
class ElementaryPartition:
    """Quotient under the transitive closure: the elementary sets.

    Classes are listed in order of their least point index and hold sorted
    indices; ``class_index[i]`` is the class id of point i.
    """

    class_index: tuple[int, ...]
    classes: tuple[tuple[int, ...], ...]

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def class_of(self, i: int) -> tuple[int, ...]:
        return self.classes[self.class_index[i]]

    def same_class(self, i: int, j: int) -> bool:
        return self.class_index[i] == self.class_index[j]


@dataclass(frozen=True)
class TransitivityCheck:
    transitive: bool
    # On failure: point ids (x, y, z) with x ~ y, y ~ z but x !~ z.
    witness: tuple[str, str, str] | None = None


def relation_from_covering(cov: Covering, weights: Sequence[float] | None = None) -> ToleranceSpace:
    """Derive the symmetrized relation y in g(x) or x in g(y).

    One-way memberships are symmetrized and reported in the space's
    ``asymmetries`` diagnostics.
    """
    n = len(cov.point_ids)
    if weights is None:
        weights = [1.0] * n
    ws = _check_weights(weights, n)
    adj: list[set[int]] = [set(s) for s in cov.sets]
    asym: list[tuple[str, str]] = []
    for i in range(n):
        for j in cov.sets[i]:
            if i != j and i not in cov.sets[j]:
                asym.append((cov.point_ids[i], cov.point_ids[j]))
                adj[j].add(i)
    return ToleranceSpace(cov.point_ids, tuple(frozenset(s) for s in adj), ws, tuple(asym))


def canonical_covering(space: ToleranceSpace) -> Covering:
    """The canonical covering g(x) = D(x) of the relation."""
    return Covering(space.point_ids, space.neighbors)


def is_transitive(space: ToleranceSpace) -> TransitivityCheck:
    """Transitivity test via the covering criterion D(y) a subset of D(x) for x ~ y."""
    for i in range(space.n):
        for j in sorted(space.neighbors[i]):
            extra = space.neighbors[j] - space.neighbors[i]
            if extra:
                k = min(extra)
                return TransitivityCheck(
                    False, (space.point_ids[i], space.point_ids[j], space.point_ids[k])
                )
    return TransitivityCheck(True, None)


def relation_from_contrast(ctx: ContrastContext, weights: Sequence[float] | None = None) -> ToleranceSpace:
    """Relation r(x, y) = [c(x, y) <= epsilon(x)], symmetrized if needed.

    If the pre-relation is already symmetric it is returned as is; otherwise
    each one-way pair is symmetrized and flagged in ``asymmetries``.
    """
    n = len(ctx.point_ids)
    if weights is None:
        weights = [1.0] * n
    ws = _check_weights(weights, n)
    pre = [[ctx.contrast[i][j] <= ctx.epsilon[i] for j in range(n)] for i in range(n)]
    adj: list[set[int]] = [set() for _ in range(n)]
    asym: list[tuple[str, str]] = []
    for i in range(n):
        for j in range(n):
            if pre[i][j]:
                adj[i].add(j)
                if not pre[j][i]:
                    asym.append((ctx.point_ids[i], ctx.point_ids[j]))
                    adj[j].add(i)
    return ToleranceSpace(ctx.point_ids, tuple(frozenset(s) for s in adj), ws, tuple(asym))


def canonical_contrast(space: ToleranceSpace) -> ContrastContext:
    """A 0/1 contrast context that reproduces the relation exactly.

    Contrast 0 on related pairs and 1 elsewhere with threshold 0, so that
    c(x, y) <= epsilon(x) holds exactly on the relation.
    """
    n = space.n
    c = tuple(
        tuple(0.0 if j in space.neighbors[i] else 1.0 for j in range(n)) for i in range(n)
    )
    return ContrastContext(space.point_ids, c, (0.0,) * n)


def weber_contrast(points: Sequence[float], k: float, ids: Sequence[str] | None = None) -> ContrastContext:
    """Relative-difference contrast c(x, y) = |y - x| / min(x, y) with threshold k.

    Models just-noticeable differences for positive magnitudes: two values
    are indiscriminable when the smaller must be scaled by less than 1 + k
    to reach the larger.
    """
    vals = [float(v) for v in points]
    if k <= 0:
        raise ValidationError(f"Weber constant k must be positive, got {k}")
    for v in vals:
        if not (v > 0) or not math.isfinite(v):
            raise ValidationError(f"Weber contrast needs strictly positive magnitudes, got {v}")
    if ids is None:
        ids = tuple(f"{v:.12g}" for v in vals)
    n = len(vals)
    c = tuple(
        tuple(abs(vals[j] - vals[i]) / min(vals[i], vals[j]) for j in range(n)) for i in range(n)
    )
    return ContrastContext(tuple(ids), c, (float(k),) * n)


def transitive_closure(space: ToleranceSpace) -> ElementaryPartition:
    """Elementary sets: connected components of the discrimination graph.

    Class ids are assigned in order of the least contained point index, so
    the output is deterministic.
    """
    n = space.n
    cls = [-1] * n
    classes: list[tuple[int, ...]] = []
    for start in range(n):
        if cls[start] >= 0:
            continue
        cid = len(classes)
        queue = deque([start])
        cls[start] = cid
        members = [start]
        while queue:
            i = queue.popleft()
            for j in space.neighbors[i]:
                if cls[j] < 0:
                    cls[j] = cid
                    members.append(j)
                    queue.append(j)
        classes.append(tuple(sorted(members)))
    return ElementaryPartition(tuple(cls), tuple(classes))


def is_optimal(space: ToleranceSpace) -> bool:
    """True iff no point has a non-identical Doppelganger."""
    return all(len(s) == 1 for s in space.neighbors)
