"""Feature representations and discriminative feature representations (DFRs).

A feature representation assigns each point a finite subset of a feature
universe.  It is discriminative for a relation when two points share a
feature exactly when they are related.  Every reflexive symmetric relation
admits one: assign to each point the singleton and edge cliques containing
it.  Refinement replaces features by their semantic clusters, dropping
hypothetical features and merging synonymous ones; it preserves the DFR
property and is idempotent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .audit import Classifier
from .errors import TheoremViolationError, ValidationError
from .spaces import ContrastContext, ToleranceSpace, is_transitive

__all__ = [
    "FeatureId",
    "FeatureRepresentation",
    "DfrCheck",
    "LawCheck",
    "indiscernible",
    "is_dfr",
    "satisfies_law_of_indiscriminability",
    "clique_dfr",
    "semantic_cluster",
    "is_hypothetical",
    "refine",
    "pawlak_contrast",
    "finite_dfr_witness",
]

# Plain string ids come from ingested files; generated features (cliques,
# clusters) are canonical sorted tuples of point ids.
FeatureId = str | tuple[str, ...]


def _fid_key(fid: FeatureId) -> str:
    return json.dumps(list(fid) if isinstance(fid, tuple) else fid)


@dataclass(frozen=True)
class FeatureRepresentation:
    """Per-point finite feature sets over a common feature universe.

    ``assign[i]`` holds indices into ``feature_ids``.  A feature is
    attributed when some point carries it, hypothetical otherwise.
    """

    point_ids: tuple[str, ...]
    feature_ids: tuple[FeatureId, ...]
    assign: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        ids = tuple(self.point_ids)
        if len(set(ids)) != len(ids):
            raise ValidationError("point ids must be pairwise distinct")
        fids = tuple(tuple(f) if isinstance(f, (list, tuple)) else str(f) for f in self.feature_ids)
        if len(set(fids)) != len(fids):
            raise ValidationError("feature ids must be pairwise distinct")
        if len(self.assign) != len(ids):
            raise ValidationError(f"expected {len(ids)} assignments, got {len(self.assign)}")
        assign = tuple(frozenset(s) for s in self.assign)
        for i, s in enumerate(assign):
            for k in s:
                if not (0 <= k < len(fids)):
                    raise ValidationError(f"assignment of {ids[i]!r} references feature index {k} out of range")
        object.__setattr__(self, "point_ids", ids)
        object.__setattr__(self, "feature_ids", fids)
        object.__setattr__(self, "assign", assign)
        object.__setattr__(self, "_pt_index", {p: i for i, p in enumerate(ids)})
        object.__setattr__(self, "_ft_index", {f: k for k, f in enumerate(fids)})

    @property
    def n(self) -> int:
        return len(self.point_ids)

    def point_index(self, point_id: str) -> int:
        try:
            return self._pt_index[point_id]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"unknown point id {point_id!r}") from None

    def feature_index(self, fid: FeatureId) -> int:
        key = tuple(fid) if isinstance(fid, (list, tuple)) else fid
        try:
            return self._ft_index[key]  # type: ignore[attr-defined]
        except KeyError:
            raise ValidationError(f"unknown feature id {fid!r}") from None

    def features_of(self, point_id: str) -> frozenset[int]:
        return self.assign[self.point_index(point_id)]

    def attributed_features(self) -> tuple[int, ...]:
        """Indices of features carried by at least one point."""
        carried = frozenset().union(*self.assign) if self.assign else frozenset()
        return tuple(sorted(carried))


def _check_alignment(rep: FeatureRepresentation, space: ToleranceSpace) -> None:
    if rep.point_ids != space.point_ids:
        raise ValidationError("feature representation and space must list the same points in the same order")


def indiscernible(rep: FeatureRepresentation, x: str, y: str) -> bool:
    """True iff x and y carry exactly the same features."""
    return rep.features_of(x) == rep.features_of(y)


@dataclass(frozen=True)
class DfrCheck:
    ok: bool
    witness: tuple[str, str] | None = None
    reason: str | None = None


def is_dfr(rep: FeatureRepresentation, space: ToleranceSpace) -> DfrCheck:
    """Check that feature-sharing coincides exactly with the relation."""
    _check_alignment(rep, space)
    for i in range(space.n):
        for j in range(i + 1, space.n):
            share = bool(rep.assign[i] & rep.assign[j])
            related = space.related(i, j)
            if share and not related:
                return DfrCheck(
                    False,
                    (space.point_ids[i], space.point_ids[j]),
                    "unrelated points share a feature",
                )
            if related and not share:
                return DfrCheck(
                    False,
                    (space.point_ids[i], space.point_ids[j]),
                    "related points share no feature",
                )
    return DfrCheck(True)


@dataclass(frozen=True)
class LawCheck:
    holds: bool
    witness: tuple[str, str] | None = None
    converse_holds: bool | None = None
    converse_witness: tuple[str, str] | None = None
    # Set only when both directions hold; transitivity is then implied.
    transitivity_confirmed: bool | None = None


def satisfies_law_of_indiscriminability(
    rep: FeatureRepresentation, space: ToleranceSpace, check_converse: bool = False
) -> LawCheck:
    """Indiscernible implies indiscriminable; optionally also the converse.

    When both directions hold the relation must be transitive; that
    consequence is verified and a failure raises TheoremViolationError.
    """
    _check_alignment(rep, space)
    witness = None
    for i in range(space.n):
        for j in range(i + 1, space.n):
            if rep.assign[i] == rep.assign[j] and not space.related(i, j):
                witness = (space.point_ids[i], space.point_ids[j])
                break
        if witness:
            break
    holds = witness is None
    if not check_converse:
        return LawCheck(holds, witness)
    conv_witness = None
    for i in range(space.n):
        for j in sorted(space.neighbors[i]):
            if j > i and rep.assign[i] != rep.assign[j]:
                conv_witness = (space.point_ids[i], space.point_ids[j])
                break
        if conv_witness:
            break
    converse = conv_witness is None
    confirmed = None
    if holds and converse:
        confirmed = is_transitive(space).transitive
        if not confirmed:
            raise TheoremViolationError(
                "law of indiscriminability holds in both directions but the relation is not transitive"
            )
    return LawCheck(holds, witness, converse, conv_witness, confirmed)


def clique_dfr(space: ToleranceSpace) -> FeatureRepresentation:
    """A DFR from singleton and edge cliques of the discrimination graph.

    Feature ids are sorted tuples of point ids: (x,) for every point and
    (x, y) for every related pair.  Edge cliques alone settle both
    directions of the sharing criterion, so larger cliques are not needed.
    """
    ids = space.point_ids
    features: list[tuple[str, ...]] = [(p,) for p in ids]
    assign: list[set[int]] = [{i} for i in range(space.n)]
    for i in range(space.n):
        for j in sorted(space.neighbors[i]):
            if j <= i:
                continue
            fid = tuple(sorted((ids[i], ids[j])))
            k = len(features)
            features.append(fid)
            assign[i].add(k)
            assign[j].add(k)
    return FeatureRepresentation(ids, tuple(features), tuple(frozenset(s) for s in assign))


def semantic_cluster(rep: FeatureRepresentation, fid: FeatureId) -> tuple[str, ...]:
    """Points carrying the feature; empty means the feature is hypothetical."""
    k = rep.feature_index(fid)
    return tuple(rep.point_ids[i] for i in range(rep.n) if k in rep.assign[i])


def is_hypothetical(rep: FeatureRepresentation, fid: FeatureId) -> bool:
    return not semantic_cluster(rep, fid)


def refine(rep: FeatureRepresentation) -> FeatureRepresentation:
    """Replace features by their clusters; drop hypothetical, merge synonyms.

    The new universe is the set of distinct nonempty clusters (as sorted
    point-id tuples) and each point carries the clusters of its features.
    Applying refine twice gives the same representation as applying it once.
    """
    clusters: dict[int, tuple[str, ...]] = {}
    for k in range(len(rep.feature_ids)):
        members = tuple(rep.point_ids[i] for i in range(rep.n) if k in rep.assign[i])
        if members:
            clusters[k] = members
    new_features = sorted({c for c in clusters.values()}, key=_fid_key)
    index = {c: i for i, c in enumerate(new_features)}
    assign = tuple(
        frozenset(index[clusters[k]] for k in s if k in clusters) for s in rep.assign
    )
    return FeatureRepresentation(rep.point_ids, tuple(new_features), assign)


def pawlak_contrast(rep: FeatureRepresentation) -> ContrastContext:
    """0/1 contrast from attribute equality: related iff feature sets equal."""
    n = rep.n
    c = tuple(
        tuple(0.0 if rep.assign[i] == rep.assign[j] else 1.0 for j in range(n)) for i in range(n)
    )
    return ContrastContext(rep.point_ids, c, (0.0,) * n)


def finite_dfr_witness(
    rep: FeatureRepresentation, space: ToleranceSpace, classifier: Classifier
) -> tuple[str, str]:
    """Adversarial pair forced by a label count exceeding the feature count.

    Preconditions: rep is a DFR for the space and the classifier is fully
    populated with more labels than attributed features.  Some feature must
    then be shared across two label groups; its carriers give a related,
    differently-labeled pair.
    """
    _check_alignment(rep, space)
    if len(classifier.labels) != space.n:
        raise ValidationError("classifier and space must cover the same points")
    check = is_dfr(rep, space)
    if not check.ok:
        raise ValidationError(f"representation is not a DFR ({check.reason}: {check.witness})")
    if not classifier.fully_populated:
        raise ValidationError("classifier must be fully populated")
    num_attr = len(rep.attributed_features())
    if classifier.num_labels <= num_attr:
        raise ValidationError(
            f"need more labels than attributed features (m = {classifier.num_labels}, "
            f"#features = {num_attr})"
        )
    for k in rep.attributed_features():
        carriers = [i for i in range(rep.n) if k in rep.assign[i]]
        for a_pos, i in enumerate(carriers):
            for j in carriers[a_pos + 1 :]:
                if classifier.labels[i] != classifier.labels[j]:
                    return (space.point_ids[i], space.point_ids[j])
    raise TheoremViolationError(
        "pigeonhole guarantees a shared feature across two label groups, but none was found"
    )
