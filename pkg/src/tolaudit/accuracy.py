"""Accuracy, recall, and the no-trade-off results for Doppelganger attacks.

Against a perceptually regular world model, low-recall classifiers leave
every correctly classified input attackable, while sufficiently high recall
forces hyper-sensitive behavior: every misclassified input is itself an
adversarial Doppelganger.  Both results are checked constructively, with a
three-valued verdict so vacuous hypotheses are never mistaken for passes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .audit import Classifier
from .errors import ValidationError
from .spaces import ToleranceSpace, transitive_closure

__all__ = [
    "WorldModel",
    "TheoremCheck",
    "validate_world_model",
    "accuracy",
    "recall_rates",
    "k_bar",
    "check_low_recall_unsafety",
    "check_hypersensitivity",
    "is_hyper_sensitive",
    "TradeoffReport",
    "tradeoff_scan",
]


@dataclass(frozen=True)
class WorldModel:
    """Ground-truth labeling; must be regular with positive class masses."""

    labels: tuple[int, ...]
    num_labels: int

    def __post_init__(self) -> None:
        if self.num_labels < 1:
            raise ValidationError(f"class count must be >= 1, got {self.num_labels}")
        labels = tuple(int(c) for c in self.labels)
        for i, c in enumerate(labels):
            if not (1 <= c <= self.num_labels):
                raise ValidationError(f"world label of point #{i} must be in 1..{self.num_labels}, got {c}")
        object.__setattr__(self, "labels", labels)


def validate_world_model(space: ToleranceSpace, world: WorldModel) -> None:
    """Reject world models that are not regular or have a zero-mass class."""
    if len(world.labels) != space.n:
        raise ValidationError(f"world labels {len(world.labels)} do not match {space.n} points")
    part = transitive_closure(space)
    for cls in part.classes:
        ref = world.labels[cls[0]]
        for i in cls[1:]:
            if world.labels[i] != ref:
                raise ValidationError(
                    f"world model is not perceptually regular: class of "
                    f"{space.point_ids[cls[0]]!r} carries labels {ref} and {world.labels[i]}"
                )
    mu = space.probabilities()
    mass = [0.0] * world.num_labels
    for i, c in enumerate(world.labels):
        mass[c - 1] += mu[i]
    for c, m in enumerate(mass, start=1):
        if m <= 0.0:
            raise ValidationError(f"world class {c} has zero measure")


def _check_pair(space: ToleranceSpace, world: WorldModel, classifier: Classifier) -> None:
    validate_world_model(space, world)
    if len(classifier.labels) != space.n:
        raise ValidationError(f"classifier labels {len(classifier.labels)} do not match {space.n} points")
    if classifier.num_labels != world.num_labels:
        raise ValidationError(
            f"classifier has {classifier.num_labels} labels but the world model has {world.num_labels}"
        )


def accuracy(space: ToleranceSpace, world: WorldModel, classifier: Classifier) -> float:
    """Total mass of agreement: sum_i mu(R_i intersect Omega_i)."""
    _check_pair(space, world, classifier)
    mu = space.probabilities()
    return sum(mu[i] for i in range(space.n) if classifier.labels[i] == world.labels[i])


def recall_rates(space: ToleranceSpace, world: WorldModel, classifier: Classifier) -> tuple[float, ...]:
    """Per-class recall mu(R_i intersect Omega_i) / mu(Omega_i)."""
    _check_pair(space, world, classifier)
    mu = space.probabilities()
    hit = [0.0] * world.num_labels
    mass = [0.0] * world.num_labels
    for i in range(space.n):
        c = world.labels[i] - 1
        mass[c] += mu[i]
        if classifier.labels[i] == world.labels[i]:
            hit[c] += mu[i]
    return tuple(h / m for h, m in zip(hit, mass))


def k_bar(space: ToleranceSpace, world: WorldModel) -> float:
    """Largest ratio of own-class mass to Doppelganger-set mass over points."""
    validate_world_model(space, world)
    mu = space.probabilities()
    omega_mass = [0.0] * world.num_labels
    for i, c in enumerate(world.labels):
        omega_mass[c - 1] += mu[i]
    best = 0.0
    for i in range(space.n):
        dmass = sum(mu[j] for j in space.neighbors[i])
        if dmass <= 0.0:
            raise ValidationError(f"mu(D({space.point_ids[i]!r})) = 0: ratio undefined")
        best = max(best, omega_mass[world.labels[i] - 1] / dmass)
    return best


@dataclass(frozen=True)
class TheoremCheck:
    """Outcome of a hypothesis-guarded theorem check on concrete data.

    verdict is ``holds``, ``violated`` (a falsification: the listed
    witnesses break the guaranteed conclusion), or ``inapplicable`` (the
    hypothesis fails, so nothing is claimed).
    """

    verdict: str
    witnesses: tuple[str, ...] = ()
    detail: str = ""


def check_low_recall_unsafety(
    space: ToleranceSpace, world: WorldModel, classifier: Classifier
) -> TheoremCheck:
    """Low recall leaves every correctly classified input attackable.

    Hypothesis: every Doppelganger set has positive mass and
    max-recall * k_bar < 1.  Conclusion verified per correctly classified
    point x: the own-label share of D(x) stays below that product, so a
    positive mass of differently-labeled Doppelgangers remains.
    """
    _check_pair(space, world, classifier)
    mu = space.probabilities()
    if any(sum(mu[j] for j in space.neighbors[i]) <= 0.0 for i in range(space.n)):
        return TheoremCheck("inapplicable", detail="some Doppelganger set has zero mass")
    rho_max = max(recall_rates(space, world, classifier))
    bound = rho_max * k_bar(space, world)
    if bound >= 1.0:
        return TheoremCheck(
            "inapplicable", detail=f"max recall * k_bar = {bound:.6g} is not below 1"
        )
    bad: list[str] = []
    for i in range(space.n):
        if classifier.labels[i] != world.labels[i]:
            continue
        dmass = sum(mu[j] for j in space.neighbors[i])
        own = sum(mu[j] for j in space.neighbors[i] if classifier.labels[j] == classifier.labels[i])
        adv = sum(mu[j] for j in space.neighbors[i] if classifier.labels[j] != classifier.labels[i])
        if adv <= 0.0 or own / dmass > bound + 1e-12:
            bad.append(space.point_ids[i])
    if bad:
        return TheoremCheck(
            "violated",
            tuple(bad),
            "correctly classified points without a positive-mass adversarial set",
        )
    return TheoremCheck("holds", detail=f"max recall * k_bar = {bound:.6g} < 1")


def check_hypersensitivity(
    space: ToleranceSpace, world: WorldModel, classifier: Classifier
) -> TheoremCheck:
    """High recall forces every misclassified input to be adversarial.

    Hypothesis: positive Doppelganger masses and (1 - min recall) * k_bar
    < 1.  Conclusion verified per misclassified point x: the share of D(x)
    carrying x's (wrong) label stays below that product, so some
    Doppelganger of x is labeled differently.
    """
    _check_pair(space, world, classifier)
    mu = space.probabilities()
    if any(sum(mu[j] for j in space.neighbors[i]) <= 0.0 for i in range(space.n)):
        return TheoremCheck("inapplicable", detail="some Doppelganger set has zero mass")
    rho_min = min(recall_rates(space, world, classifier))
    bound = (1.0 - rho_min) * k_bar(space, world)
    if bound >= 1.0:
        return TheoremCheck(
            "inapplicable", detail=f"(1 - min recall) * k_bar = {bound:.6g} is not below 1"
        )
    bad: list[str] = []
    for i in range(space.n):
        if classifier.labels[i] == world.labels[i]:
            continue
        dmass = sum(mu[j] for j in space.neighbors[i])
        wrong = sum(mu[j] for j in space.neighbors[i] if classifier.labels[j] == classifier.labels[i])
        adv = dmass - wrong
        if adv <= 0.0 or wrong / dmass > bound + 1e-12:
            bad.append(space.point_ids[i])
    if bad:
        return TheoremCheck(
            "violated", tuple(bad), "misclassified points that are not adversarial Doppelgangers"
        )
    return TheoremCheck("holds", detail=f"(1 - min recall) * k_bar = {bound:.6g} < 1")


def is_hyper_sensitive(space: ToleranceSpace, world: WorldModel, classifier: Classifier) -> bool:
    """Direct check: every misclassified input has a differently-labeled Doppelganger."""
    _check_pair(space, world, classifier)
    for i in range(space.n):
        if classifier.labels[i] == world.labels[i]:
            continue
        if all(classifier.labels[j] == classifier.labels[i] for j in space.neighbors[i]):
            return False
    return True


@dataclass(frozen=True)
class TradeoffReport:
    """Threshold sweep on a signed-line Gaussian instance.

    Rows hold (epsilon, accuracy, mass of misclassified adversarial
    Doppelgangers).  ``eps_star`` maximizes the analytic ambiguity mass.
    """

    rows: tuple[tuple[float, float, float], ...]
    eps_star: float
    accuracy_strictly_decreasing: bool
    mass_unimodal: bool


def _is_unimodal(values: Sequence[float]) -> bool:
    """Weakly increasing then weakly decreasing."""
    k = 0
    n = len(values)
    while k + 1 < n and values[k + 1] >= values[k]:
        k += 1
    while k + 1 < n and values[k + 1] <= values[k]:
        k += 1
    return k == n - 1


def tradeoff_scan(kline, eps_values: Sequence[float] | None = None) -> TradeoffReport:
    """Sweep the decision threshold on a k-line instance.

    For each epsilon: the accuracy of the threshold classifier against the
    sign world model, and the mass of grid points in (epsilon/w, epsilon),
    the misclassified adversarial Doppelgangers.  Defaults to sweeping the
    positive grid values themselves.
    """
    from .weber import kline_eps_star

    space = kline.space
    values = kline.values
    if eps_values is None:
        eps_values = [v for v in values if v > 0.0]
    eps_list = sorted(float(e) for e in eps_values)
    if not eps_list:
        raise ValidationError("epsilon sweep must be nonempty")
    if any(e <= 0.0 for e in eps_list):
        raise ValidationError("epsilon values must be positive")
    mu = space.probabilities()
    rows = []
    for eps in eps_list:
        clf = Classifier(tuple(1 if v < eps else 2 for v in values), 2)
        acc = accuracy(space, kline.world, clf)
        adv_mass = sum(mu[i] for i, v in enumerate(values) if eps / kline.w < v < eps)
        rows.append((eps, acc, adv_mass))
    accs = [r[1] for r in rows]
    masses = [r[2] for r in rows]
    return TradeoffReport(
        rows=tuple(rows),
        eps_star=kline_eps_star(kline.w),
        accuracy_strictly_decreasing=all(b < a for a, b in zip(accs, accs[1:])),
        mass_unimodal=_is_unimodal(masses),
    )
