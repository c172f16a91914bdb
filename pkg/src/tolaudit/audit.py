"""Classifier audits: adversarial pairs, regularity, well-posedness,
enumeration, sorites extraction, conceptual entropy, and fooling rates.

A classifier is a total labeling of the points with labels 1..m.  It is
regular when labels are constant on elementary classes, equivalently when
no indiscriminable pair is labeled differently.  Conceptual entropy
measures per-point label ambiguity over Doppelganger sets; the measure of
the ambiguity region bounds the fooling rate of every Doppelganger attack.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import GuardError, TheoremViolationError, ValidationError
from .spaces import ElementaryPartition, ToleranceSpace, transitive_closure

__all__ = [
    "Classifier",
    "Attack",
    "Refusal",
    "AuditReport",
    "adversarial_pairs",
    "is_regular",
    "stirling2",
    "well_posed",
    "enumerate_regular",
    "sorites_extract",
    "doppel_chain",
    "ambiguity_region",
    "label_distribution",
    "conceptual_entropy",
    "fooling_rate",
    "fooling_bound",
    "max_fooling_attack",
    "na_hazard_witness",
    "audit_report",
]

ENUMERATION_GUARD = 16


@dataclass(frozen=True)
class Classifier:
    """Total labeling of points into labels 1..num_labels."""

    labels: tuple[int, ...]
    num_labels: int

    def __post_init__(self) -> None:
        if self.num_labels < 1:
            raise ValidationError(f"label count must be >= 1, got {self.num_labels}")
        labels = tuple(int(c) for c in self.labels)
        for i, c in enumerate(labels):
            if not (1 <= c <= self.num_labels):
                raise ValidationError(f"label of point #{i} must be in 1..{self.num_labels}, got {c}")
        object.__setattr__(self, "labels", labels)

    @property
    def fully_populated(self) -> bool:
        return len(set(self.labels)) == self.num_labels


@dataclass(frozen=True)
class Attack:
    """Pointwise substitution map; valid when every target is a Doppelganger."""

    targets: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))


@dataclass(frozen=True)
class Refusal:
    """No rate-one attack exists; lists the points that cannot be attacked."""

    unattackable: tuple[str, ...]


def _check_aligned(space: ToleranceSpace, classifier: Classifier) -> None:
    if len(classifier.labels) != space.n:
        raise ValidationError(
            f"classifier labels {len(classifier.labels)} do not match {space.n} points"
        )


def adversarial_pairs(space: ToleranceSpace, classifier: Classifier) -> tuple[tuple[str, str], ...]:
    """All related pairs with differing labels, ordered by point index."""
    _check_aligned(space, classifier)
    out = []
    for i in range(space.n):
        for j in sorted(space.neighbors[i]):
            if j > i and classifier.labels[i] != classifier.labels[j]:
                out.append((space.point_ids[i], space.point_ids[j]))
    return tuple(out)


def is_regular(space: ToleranceSpace, classifier: Classifier) -> bool:
    """True iff labels are constant on every elementary class."""
    _check_aligned(space, classifier)
    part = transitive_closure(space)
    for cls in part.classes:
        ref = classifier.labels[cls[0]]
        if any(classifier.labels[i] != ref for i in cls[1:]):
            return False
    return True


def stirling2(p: int, m: int) -> int:
    """Stirling number of the second kind by the standard recurrence."""
    if p < 0 or m < 0:
        raise ValidationError("Stirling arguments must be non-negative")
    if m == 0:
        return 1 if p == 0 else 0
    if m > p:
        return 0
    row = [1] + [0] * m  # S(0, 0..m)
    for n in range(1, p + 1):
        new = [0] * (m + 1)
        for k in range(1, min(n, m) + 1):
            new[k] = k * row[k] + row[k - 1]
        row = new
    return row[m]


def well_posed(space: ToleranceSpace, m: int) -> tuple[bool, int]:
    """Whether m labels admit a fully populated regular classifier.

    Returns (m <= number of elementary classes, S(p, m)); the count is the
    number of such classifiers viewed as segmentations.
    """
    if m < 1:
        raise ValidationError(f"label count must be >= 1, got {m}")
    p = transitive_closure(space).num_classes
    return (m <= p, stirling2(p, m))


def _partitions_into(parts: int, blocks: int):
    """All partitions of range(parts) into exactly `blocks` nonempty blocks.

    Blocks appear ordered by their least element (restricted-growth order).
    """

    def rec(i: int, current: list[list[int]]):
        if i == parts:
            if len(current) == blocks:
                yield [list(b) for b in current]
            return
        remaining = parts - i
        for b in current:
            if len(current) + remaining - 1 >= blocks:
                b.append(i)
                yield from rec(i + 1, current)
                b.pop()
        if len(current) < blocks:
            current.append([i])
            yield from rec(i + 1, current)
            current.pop()

    yield from rec(0, [])


def enumerate_regular(
    space: ToleranceSpace,
    m: int,
    labeled: bool = False,
    max_classes: int = ENUMERATION_GUARD,
) -> list[Classifier]:
    """Materialize every regular fully populated classifier with m labels.

    Classifiers are counted as segmentations: blocks of elementary classes,
    numbered canonically by least point index, so the count is S(p, m).
    With ``labeled=True`` all m! labelings of each segmentation are emitted.
    """
    part = transitive_closure(space)
    p = part.num_classes
    if p > max_classes:
        raise GuardError(f"enumeration limited to {max_classes} classes (got {p})")
    if m < 1:
        raise ValidationError(f"label count must be >= 1, got {m}")
    out: list[Classifier] = []
    for blocks in _partitions_into(p, m):
        labels = [0] * space.n
        for label_minus1, block in enumerate(blocks):
            for cid in block:
                for i in part.classes[cid]:
                    labels[i] = label_minus1 + 1
        base = Classifier(tuple(labels), m)
        if not labeled:
            out.append(base)
        else:
            for perm in itertools.permutations(range(1, m + 1)):
                out.append(Classifier(tuple(perm[c - 1] for c in base.labels), m))
    return out


def sorites_extract(
    space: ToleranceSpace,
    chain: Sequence[str],
    classifier: Classifier,
    strategy: str = "last",
) -> tuple[str, str]:
    """Extract an adversarial pair from a labeled Doppelganger chain.

    ``last``: the label's last agreement with the chain head, paired with the
    next element.  ``first``: the element before the first departure, paired
    with it.  Either way the returned pair is related, differently labeled,
    and one side shares the head's label.
    """
    _check_aligned(space, classifier)
    if strategy not in ("first", "last"):
        raise ValidationError(f"strategy must be 'first' or 'last', got {strategy!r}")
    if len(chain) < 2:
        raise ValidationError("chain must contain at least two points")
    idx = [space.index(p) for p in chain]
    for k in range(len(idx) - 1):
        if not space.related(idx[k], idx[k + 1]):
            raise ValidationError(
                f"broken chain at position {k}: {chain[k]!r} and {chain[k + 1]!r} are not related"
            )
    lab = [classifier.labels[i] for i in idx]
    if lab[0] == lab[-1]:
        raise ValidationError("chain endpoints carry equal labels; nothing to extract")
    if strategy == "last":
        i = max(k for k in range(len(idx)) if lab[k] == lab[0])
        return (chain[i], chain[i + 1])
    i = min(k for k in range(len(idx)) if lab[k] != lab[0])
    return (chain[i - 1], chain[i])


def doppel_chain(space: ToleranceSpace, x: str, y: str) -> tuple[str, ...] | None:
    """A shortest Doppelganger chain from x to y, or None if not metamorphic."""
    src, dst = space.index(x), space.index(y)
    prev: dict[int, int] = {src: src}
    queue = [src]
    while queue:
        nxt: list[int] = []
        for i in queue:
            for j in sorted(space.neighbors[i]):
                if j not in prev:
                    prev[j] = i
                    nxt.append(j)
        if dst in prev:
            break
        queue = nxt
    if dst not in prev:
        return None
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return tuple(space.point_ids[i] for i in reversed(path))


def ambiguity_region(space: ToleranceSpace, classifier: Classifier) -> tuple[str, ...]:
    """Points having at least one differently-labeled Doppelganger."""
    _check_aligned(space, classifier)
    out = []
    for i in range(space.n):
        if any(classifier.labels[j] != classifier.labels[i] for j in space.neighbors[i]):
            out.append(space.point_ids[i])
    return tuple(out)


def label_distribution(space: ToleranceSpace, classifier: Classifier, x: str) -> tuple[float, ...]:
    """Label probabilities over D(x): p_j = mu(R_j intersect D(x)) / mu(D(x))."""
    _check_aligned(space, classifier)
    i = space.index(x)
    mu = space.probabilities()
    mass = [0.0] * classifier.num_labels
    for j in space.neighbors[i]:
        mass[classifier.labels[j] - 1] += mu[j]
    total = sum(mass)
    if total <= 0.0:
        raise ValidationError(f"mu(D({x!r})) = 0: label distribution undefined")
    return tuple(v / total for v in mass)


def conceptual_entropy(space: ToleranceSpace, classifier: Classifier, x: str) -> float:
    """Base-2 entropy of the label distribution over D(x)."""
    dist = label_distribution(space, classifier, x)
    return -sum(p * math.log2(p) for p in dist if p > 0.0)


def _check_attack(space: ToleranceSpace, attack: Attack) -> None:
    if len(attack.targets) != space.n:
        raise ValidationError(f"attack must map all {space.n} points, got {len(attack.targets)}")
    for i, t in enumerate(attack.targets):
        if not (0 <= t < space.n):
            raise ValidationError(f"attack target {t} of point {space.point_ids[i]!r} out of range")
        if t not in space.neighbors[i]:
            raise ValidationError(
                f"attack violates the Doppelganger constraint at {space.point_ids[i]!r}: "
                f"target {space.point_ids[t]!r} is not indiscriminable from it"
            )


def fooling_rate(space: ToleranceSpace, classifier: Classifier, attack: Attack) -> float:
    """Normalized measure of points whose attack image gets a different label."""
    _check_aligned(space, classifier)
    _check_attack(space, attack)
    mu = space.probabilities()
    return sum(
        mu[i] for i, t in enumerate(attack.targets) if classifier.labels[t] != classifier.labels[i]
    )


def fooling_bound(space: ToleranceSpace, classifier: Classifier) -> float:
    """Measure of the ambiguity region: an upper bound for every attack's rate."""
    region = ambiguity_region(space, classifier)
    mu = space.probabilities()
    return sum(mu[space.index(p)] for p in region)


def max_fooling_attack(space: ToleranceSpace, classifier: Classifier) -> Attack | Refusal:
    """Rate-one attack when every point is conceptually ambiguous.

    Each point is sent to its smallest-index differently-labeled
    Doppelganger; if some point has none, a Refusal lists all such points.
    """
    _check_aligned(space, classifier)
    targets = []
    unattackable = []
    for i in range(space.n):
        cands = [j for j in sorted(space.neighbors[i]) if classifier.labels[j] != classifier.labels[i]]
        if cands:
            targets.append(cands[0])
        else:
            unattackable.append(space.point_ids[i])
    if unattackable:
        return Refusal(tuple(unattackable))
    return Attack(tuple(targets))


def na_hazard_witness(space: ToleranceSpace, training_subset: Iterable[str]) -> tuple[str, str] | None:
    """Adversarial pair created by labeling unseen data as NA.

    If some elementary class is only partially covered by the subset, returns
    (x, z) with x inside, z a Doppelganger of x outside; labeling z as NA
    makes the pair adversarial.  None when every class is all-in or all-out.
    """
    inside = {space.index(p) for p in training_subset}
    for i in sorted(inside):
        for j in sorted(space.neighbors[i]):
            if j not in inside:
                return (space.point_ids[i], space.point_ids[j])
    return None


@dataclass(frozen=True)
class AuditReport:
    """Aggregate audit of one classifier over one space.

    Invariant: regular iff there are no adversarial pairs iff the ambiguity
    region is empty.  Entropy values align with point order and use the
    logarithm base recorded in ``entropy_base``.
    """

    regular: bool
    adversarial_pairs: tuple[tuple[str, str], ...]
    ambiguity_region: tuple[str, ...]
    entropy: tuple[float, ...]
    fooling_bound: float
    well_posed: bool
    stirling_count: int
    num_classes: int
    entropy_base: int = 2

    def __post_init__(self) -> None:
        empty_pairs = not self.adversarial_pairs
        empty_region = not self.ambiguity_region
        if not (self.regular == empty_pairs == empty_region):
            raise TheoremViolationError(
                "audit invariant failed: regularity, empty pair list, and empty "
                "ambiguity region must coincide"
            )


def audit_report(space: ToleranceSpace, classifier: Classifier) -> AuditReport:
    """Run the full per-classifier audit."""
    _check_aligned(space, classifier)
    pairs = adversarial_pairs(space, classifier)
    region = ambiguity_region(space, classifier)
    entropy = tuple(conceptual_entropy(space, classifier, p) for p in space.point_ids)
    posed, count = well_posed(space, classifier.num_labels)
    part = transitive_closure(space)
    return AuditReport(
        regular=not pairs,
        adversarial_pairs=pairs,
        ambiguity_region=region,
        entropy=entropy,
        fooling_bound=fooling_bound(space, classifier),
        well_posed=posed,
        stirling_count=count,
        num_classes=part.num_classes,
    )
