"""Category structure: affinity, prototypes and fringe, dispersion statistics.

Affinity is the measure-weighted total similarity of a point with a set;
prototypes and fringe elements are its argmax/argmin within the set.  For
feature-contrast (Tversky) similarity under the salience hypotheses of the
metamorphy classes, affinity over a regular class collapses to a closed
form, validated here against the brute-force sum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import TheoremViolationError, ValidationError
from .features import FeatureRepresentation
from .metric import laplacian_sigma
from .spaces import ToleranceSpace, transitive_closure

__all__ = [
    "SimilarityScale",
    "TverskyModel",
    "affinity",
    "prototypes",
    "fringe",
    "m_core",
    "tau_fringe",
    "tversky_similarity",
    "similarity_from_tversky",
    "tversky_affinity_closed_form",
    "structural_entropy",
    "index_of_coincidence",
    "importance",
    "expected_affinity",
    "salience_regularity_check",
]


@dataclass(frozen=True)
class SimilarityScale:
    """Similarity matrix with self-similarity dominating each row."""

    point_ids: tuple[str, ...]
    matrix: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.point_ids)
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise ValidationError(f"similarity must be an {n}x{n} matrix")
        m = tuple(tuple(float(v) for v in row) for row in self.matrix)
        for i in range(n):
            for j in range(n):
                if not math.isfinite(m[i][j]):
                    raise ValidationError("similarity values must be finite")
                if m[i][i] < m[i][j]:
                    raise ValidationError(
                        f"salience must dominate: s({self.point_ids[i]!r}, {self.point_ids[i]!r}) < "
                        f"s({self.point_ids[i]!r}, {self.point_ids[j]!r})"
                    )
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "point_ids", tuple(self.point_ids))


@dataclass(frozen=True)
class TverskyModel:
    """Feature-contrast similarity with additive per-feature salience.

    s(x, y) = theta*f(common) - alpha*f(x only) - beta*f(y only), where f
    sums non-negative weights over feature sets, realizing feature
    additivity exactly on the finite universe.
    """

    alpha: float
    beta: float
    theta: float
    salience: tuple[float, ...]
    rep: FeatureRepresentation

    def __post_init__(self) -> None:
        for name, v in (("alpha", self.alpha), ("beta", self.beta), ("theta", self.theta)):
            if not math.isfinite(float(v)) or float(v) < 0.0:
                raise ValidationError(f"{name} must be a non-negative real, got {v}")
        sal = tuple(float(v) for v in self.salience)
        if len(sal) != len(self.rep.feature_ids):
            raise ValidationError(
                f"need one salience weight per feature ({len(self.rep.feature_ids)}), got {len(sal)}"
            )
        for v in sal:
            if not math.isfinite(v) or v < 0.0:
                raise ValidationError(f"salience weights must be non-negative, got {v}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "beta", float(self.beta))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "salience", sal)

    def feature_mass(self, feature_indices: Iterable[int]) -> float:
        return sum(self.salience[k] for k in feature_indices)

    def prominence(self, x: str) -> float:
        """f(x): total salience of the features attributed to x."""
        return self.feature_mass(self.rep.features_of(x))


def _resolve_set(space: ToleranceSpace, d_ids: Iterable[str]) -> list[int]:
    idx = sorted({space.index(p) for p in d_ids})
    if not idx:
        raise ValidationError("the target set must be nonempty")
    return idx


def affinity(space: ToleranceSpace, scale: SimilarityScale, x: str, d_ids: Iterable[str]) -> float:
    """Measure-weighted total similarity of x with the set."""
    if scale.point_ids != space.point_ids:
        raise ValidationError("similarity scale and space must list the same points")
    i = space.index(x)
    mu = space.probabilities()
    return sum(mu[j] * scale.matrix[i][j] for j in _resolve_set(space, d_ids))


def _affinity_profile(
    space: ToleranceSpace, scale: SimilarityScale, d_ids: Iterable[str]
) -> list[tuple[str, float]]:
    members = _resolve_set(space, d_ids)
    ids = [space.point_ids[i] for i in members]
    return [(p, affinity(space, scale, p, ids)) for p in ids]


def prototypes(space: ToleranceSpace, scale: SimilarityScale, d_ids: Iterable[str]) -> tuple[str, ...]:
    """All affinity maximizers within the set, ties included."""
    profile = _affinity_profile(space, scale, d_ids)
    top = max(v for _, v in profile)
    return tuple(p for p, v in profile if v == top)


def fringe(space: ToleranceSpace, scale: SimilarityScale, d_ids: Iterable[str]) -> tuple[str, ...]:
    """All affinity minimizers within the set, ties included."""
    profile = _affinity_profile(space, scale, d_ids)
    bottom = min(v for _, v in profile)
    return tuple(p for p, v in profile if v == bottom)


def m_core(space: ToleranceSpace, scale: SimilarityScale, d_ids: Iterable[str], threshold: float) -> tuple[str, ...]:
    """Members whose affinity reaches the threshold."""
    return tuple(p for p, v in _affinity_profile(space, scale, d_ids) if v >= threshold)


def tau_fringe(space: ToleranceSpace, scale: SimilarityScale, d_ids: Iterable[str], threshold: float) -> tuple[str, ...]:
    """Members whose affinity is at most the threshold."""
    return tuple(p for p, v in _affinity_profile(space, scale, d_ids) if v <= threshold)


def tversky_similarity(model: TverskyModel, x: str, y: str) -> float:
    """Feature-contrast similarity between two points."""
    fx = model.rep.features_of(x)
    fy = model.rep.features_of(y)
    return (
        model.theta * model.feature_mass(fx & fy)
        - model.alpha * model.feature_mass(fx - fy)
        - model.beta * model.feature_mass(fy - fx)
    )


def similarity_from_tversky(model: TverskyModel) -> SimilarityScale:
    """Materialize the full similarity matrix of a Tversky model."""
    ids = model.rep.point_ids
    matrix = tuple(tuple(tversky_similarity(model, x, y) for y in ids) for x in ids)
    return SimilarityScale(ids, matrix)


def _require_regular_set(space: ToleranceSpace, members: list[int]) -> None:
    part = transitive_closure(space)
    member_set = set(members)
    for i in members:
        cls = part.class_of(i)
        missing = [j for j in cls if j not in member_set]
        if missing:
            raise ValidationError(
                f"set is not perceptually regular: class of {space.point_ids[i]!r} "
                f"is split (missing {space.point_ids[missing[0]]!r})"
            )


def tversky_affinity_closed_form(
    model: TverskyModel, space: ToleranceSpace, x: str, d_ids: Iterable[str]
) -> float:
    """Closed-form affinity over a regular class under the salience hypotheses.

    Hypotheses (verified, not assumed): the set is a union of elementary
    classes; metamorphic pairs share full salience,
    f(common features) = f(x); non-metamorphic pairs share no features.
    Then

        P(x, D) = (a+b+t) * mu(D) * (mu([x]) / mu(D) - a/(a+b+t)) * f(x) - b * I(D)

    with I(D) the importance of D, matching the brute-force sum exactly.
    """
    if model.rep.point_ids != space.point_ids:
        raise ValidationError("Tversky model and space must list the same points")
    members = _resolve_set(space, d_ids)
    _require_regular_set(space, members)
    part = transitive_closure(space)
    for i in range(space.n):
        fi = model.rep.assign[i]
        for j in range(i + 1, space.n):
            fj = model.rep.assign[j]
            common = model.feature_mass(fi & fj)
            if part.same_class(i, j):
                for k, fk in ((i, fi), (j, fj)):
                    if not math.isclose(common, model.feature_mass(fk), rel_tol=0.0, abs_tol=1e-12):
                        raise ValidationError(
                            "salience hypothesis fails: shared features of metamorphic pair "
                            f"({space.point_ids[i]!r}, {space.point_ids[j]!r}) do not carry the "
                            f"full salience of {space.point_ids[k]!r}"
                        )
            elif fi & fj:
                raise ValidationError(
                    "disjointness hypothesis fails: non-metamorphic pair "
                    f"({space.point_ids[i]!r}, {space.point_ids[j]!r}) shares a feature"
                )
    mu = space.probabilities()
    i = space.index(x)
    mu_d = sum(mu[j] for j in members)
    mu_cls = sum(mu[j] for j in part.class_of(i))
    coeff = model.alpha + model.beta + model.theta
    imp = sum(mu[j] * model.prominence(space.point_ids[j]) for j in members)
    fx = model.prominence(x)
    if coeff == 0.0:
        return 0.0
    return coeff * mu_d * (mu_cls / mu_d - model.alpha / coeff) * fx - model.beta * imp


def structural_entropy(space: ToleranceSpace, d_ids: Iterable[str]) -> float:
    """Base-2 dispersion of elementary-class masses within a regular set."""
    members = _resolve_set(space, d_ids)
    _require_regular_set(space, members)
    part = transitive_closure(space)
    mu = space.probabilities()
    mu_d = sum(mu[i] for i in members)
    if mu_d <= 0.0:
        raise ValidationError("structural entropy undefined on a zero-mass set")
    total = 0.0
    for i in members:
        cls_mass = sum(mu[j] for j in part.class_of(i))
        if cls_mass > 0.0:
            total += mu[i] * math.log2(cls_mass / mu_d)
    return -total / mu_d


def index_of_coincidence(space: ToleranceSpace, d_ids: Iterable[str]) -> float:
    """Probability that two independent draws from the set are metamorphic."""
    members = _resolve_set(space, d_ids)
    _require_regular_set(space, members)
    part = transitive_closure(space)
    mu = space.probabilities()
    mu_d = sum(mu[i] for i in members)
    if mu_d <= 0.0:
        raise ValidationError("index of coincidence undefined on a zero-mass set")
    total = sum(mu[i] * sum(mu[j] for j in part.class_of(i)) for i in members)
    return total / (mu_d * mu_d)


def importance(model: TverskyModel, space: ToleranceSpace, d_ids: Iterable[str]) -> float:
    """Total measure-weighted salience of the set."""
    if model.rep.point_ids != space.point_ids:
        raise ValidationError("Tversky model and space must list the same points")
    mu = space.probabilities()
    return sum(mu[i] * model.prominence(space.point_ids[i]) for i in _resolve_set(space, d_ids))


def expected_affinity(space: ToleranceSpace, scale: SimilarityScale, d_ids: Iterable[str]) -> float:
    """Mean affinity of the set with itself: (1/mu(D)) * sum mu(x) P(x, D)."""
    members = _resolve_set(space, d_ids)
    mu = space.probabilities()
    mu_d = sum(mu[i] for i in members)
    if mu_d <= 0.0:
        raise ValidationError("expected affinity undefined on a zero-mass set")
    ids = [space.point_ids[i] for i in members]
    return sum(mu[i] * affinity(space, scale, space.point_ids[i], ids) for i in members) / mu_d


def salience_regularity_check(model: TverskyModel, space: ToleranceSpace) -> bool:
    """True iff prominence is constant on elementary classes.

    When it is, the prominence function must be annihilated by the chain
    Laplacian; that consequence is verified numerically.
    """
    if model.rep.point_ids != space.point_ids:
        raise ValidationError("Tversky model and space must list the same points")
    part = transitive_closure(space)
    f = [model.prominence(p) for p in space.point_ids]
    for cls in part.classes:
        ref = f[cls[0]]
        if any(abs(f[i] - ref) > 1e-12 for i in cls[1:]):
            return False
    residual = laplacian_sigma(space, f, part)
    if max(abs(v) for v in residual) > 1e-9:
        raise TheoremViolationError(
            "regular salience must be harmonic for the chain Laplacian, but the residual is large"
        )
    return True
