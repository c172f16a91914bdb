"""Weber-law discretizations with analytic Gaussian/erf oracles.

These generators turn the continuous worked instances (a bounded interval
of magnitudes, a two-cell interval, the half-Gaussian ray, the signed
Gaussian line) into finite tolerance spaces.  Grids are geometric because
Weber neighborhoods are multiplicative; the grid ratio must stay below the
Weber factor w so that adjacent grid points remain indiscriminable and
chaining survives discretization.  Gaussian weights are exact cell masses
computed with the local erf, with truncated tail mass recorded in the
instance metadata.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .accuracy import WorldModel
from .audit import Classifier
from .errors import ValidationError
from .spaces import ToleranceSpace

__all__ = [
    "erf",
    "WeberGrid",
    "RayInstance",
    "KlineInstance",
    "make_weber_interval",
    "make_weber_two_cell",
    "make_weber_ray_gaussian",
    "make_kline_gaussian",
    "analytic_oracles",
    "kline_eps_star",
    "kline_eps_star_exact",
]

_SQRT_PI = math.sqrt(math.pi)


def erf(x: float) -> float:
    """Error function via a nonalternating scaled power series.

    Uses erf(x) = (2 x e^(-x^2) / sqrt(pi)) * sum_{n>=0} (2x^2)^n / (3*5*...*(2n+1)),
    whose terms are all positive, so there is no cancellation.  For
    |x| >= 6 the complement is below 2.2e-17 and +-1 is returned.
    Absolute error stays well under 1e-12; pinned by test vectors.
    """
    if math.isnan(x):
        return math.nan
    ax = abs(x)
    if ax >= 6.0:
        return math.copysign(1.0, x)
    if ax == 0.0:
        return 0.0
    t = 2.0 * ax * ax
    term = 1.0
    total = 1.0
    n = 0
    while term > 1e-17 * total:
        n += 1
        term *= t / (2 * n + 1)
        total += term
    return math.copysign(2.0 * ax * math.exp(-ax * ax) / _SQRT_PI * total, x)


def _gauss_cdf(x: float, mean: float, sigma: float) -> float:
    return 0.5 * (1.0 + erf((x - mean) / (sigma * math.sqrt(2.0))))


def _ratio_edges(values: Sequence[float], w: float) -> list[tuple[int, int]]:
    """Edges of the multiplicative-window relation: i ~ j iff max/min < w."""
    edges = []
    n = len(values)
    for i in range(n):
        j = i + 1
        while j < n and values[j] < values[i] * w:
            edges.append((i, j))
            j += 1
    return edges


def _ids(values: Sequence[float]) -> tuple[str, ...]:
    return tuple(repr(v) for v in values)


@dataclass(frozen=True)
class WeberGrid:
    """Geometric grid a, a*ratio, ... on [a, b], with b always included.

    Requires 1 < ratio < w = 1 + k so adjacent points stay indiscriminable.
    """

    a: float
    b: float
    ratio: float
    w: float
    points: tuple[float, ...] = field(init=False)

    def __post_init__(self) -> None:
        a, b, ratio, w = float(self.a), float(self.b), float(self.ratio), float(self.w)
        if not (0.0 < a <= b) or not math.isfinite(b):
            raise ValidationError(f"need 0 < a <= b, got a={a}, b={b}")
        if not (w > 1.0):
            raise ValidationError(f"Weber factor w must exceed 1, got {w}")
        if not (1.0 < ratio < w):
            raise ValidationError(
                f"grid ratio must satisfy 1 < ratio < w (got ratio={ratio}, w={w}); "
                "a coarser grid would break Doppelganger chaining"
            )
        pts = []
        v = a
        while v < b * (1.0 - 1e-12):
            pts.append(v)
            v *= ratio
        if not pts or pts[-1] < b:
            pts.append(b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "ratio", ratio)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "points", tuple(pts))


def make_weber_interval(
    grid: WeberGrid, measure: str | Mapping[str, float] = "uniform"
) -> ToleranceSpace:
    """Discretized Weber interval: x ~ y iff max(x,y)/min(x,y) < w.

    The continuous neighborhoods are the open multiplicative intervals
    (x/w, x*w) clipped to [a, b]; on grid values, clipping is automatic.
    ``measure`` is "uniform" or {"kind": "gaussian", "mean": m, "sigma": s}
    for Gaussian cell masses over geometric midpoint cells.
    """
    values = grid.points
    if measure == "uniform":
        weights: Sequence[float] = [1.0] * len(values)
    elif isinstance(measure, Mapping) and measure.get("kind") == "gaussian":
        mean = float(measure["mean"])
        sigma = float(measure["sigma"])
        if sigma <= 0:
            raise ValidationError(f"gaussian sigma must be positive, got {sigma}")
        edges = (
            [values[0]]
            + [math.sqrt(values[i] * values[i + 1]) for i in range(len(values) - 1)]
            + [values[-1]]
        )
        weights = [
            _gauss_cdf(hi, mean, sigma) - _gauss_cdf(lo, mean, sigma)
            for lo, hi in zip(edges, edges[1:])
        ]
        if len(values) == 1:
            weights = [1.0]
    else:
        raise ValidationError(f"unknown measure spec {measure!r}")
    return ToleranceSpace.from_edges(_ids(values), _ratio_edges(values, grid.w), weights)


def make_weber_two_cell(a: float, b: float, b_prime: float, w: float, ratio: float) -> ToleranceSpace:
    """Two-cell Weber interval [a, b] followed by (b, b']; uniform weights.

    Neighborhoods are the multiplicative windows clipped to the cell of the
    base point, so the transitive closure has exactly two elementary
    classes: grid points <= b and grid points > b.
    """
    a, b, b_prime, w, ratio = map(float, (a, b, b_prime, w, ratio))
    if not (0.0 < a < b < b_prime / w):
        raise ValidationError(f"parameters must satisfy 0 < a < b < b'/w (got a={a}, b={b}, b'={b_prime}, w={w})")
    if not (1.0 < ratio < w):
        raise ValidationError(f"grid ratio must satisfy 1 < ratio < w (got ratio={ratio}, w={w})")
    pts = {a, b, b_prime}
    v = a
    while v < b_prime * (1.0 - 1e-12):
        pts.add(v)
        v *= ratio
    values = sorted(pts)
    edges = [
        (i, j)
        for i, j in _ratio_edges(values, w)
        if (values[i] <= b) == (values[j] <= b)
    ]
    return ToleranceSpace.from_edges(_ids(values), edges, [1.0] * len(values))


@dataclass(frozen=True)
class RayInstance:
    """Half-Gaussian ray with a threshold classifier at epsilon."""

    space: ToleranceSpace
    classifier: Classifier
    values: tuple[float, ...]
    w: float
    epsilon: float
    metadata: dict


@dataclass(frozen=True)
class KlineInstance:
    """Signed Gaussian line with sign world model and threshold classifier."""

    space: ToleranceSpace
    world: WorldModel
    classifier: Classifier
    values: tuple[float, ...]
    w: float
    epsilon: float
    metadata: dict


def _ray_values(w: float, eps: float, ratio: float, start: float, stop: float, refine_levels: int) -> list[float]:
    log_r = math.log(ratio)
    k_min = math.ceil(math.log(start / eps) / log_r)
    k_max = math.floor(math.log(stop / eps) / log_r + 1e-12)
    pts = {eps * ratio**k for k in range(k_min, k_max + 1)}
    # The classifier threshold and the two region endpoints are snapped onto
    # the grid and locally refined (dyadic sub-steps), the usual treatment
    # of known discontinuities: without it the discrete ambiguity region
    # would lag the analytic one by a full grid step.
    for v in (eps / w, eps, w * eps):
        if start <= v <= stop:
            pts.add(v)
            for i in range(1, refine_levels + 1):
                step = ratio ** (2.0**-i)
                for cand in (v * step, v / step):
                    if start <= cand <= stop:
                        pts.add(cand)
    return sorted(pts)


def make_weber_ray_gaussian(
    w: float,
    epsilon: float,
    *,
    ratio: float = 1.02,
    start: float | None = None,
    stop: float | None = None,
    refine_levels: int = 6,
) -> RayInstance:
    """Half-Gaussian ray (density 2 e^(-t^2)/sqrt(pi) on t > 0), Weber windows.

    Weights are exact cell masses over geometric midpoint cells; the first
    cell reaches down to 0 and the mass beyond the truncation point is
    discarded and recorded.  The classifier labels 1 below epsilon and 2 at
    or above it.  The analytic ambiguity-region mass erf(w*eps) - erf(eps/w)
    is stored in the metadata for cross-validation.
    """
    w, epsilon, ratio = float(w), float(epsilon), float(ratio)
    if w <= 1.0:
        raise ValidationError(f"Weber factor w must exceed 1, got {w}")
    if epsilon <= 0.0:
        raise ValidationError(f"threshold epsilon must be positive, got {epsilon}")
    if not (1.0 < ratio < w):
        raise ValidationError(f"grid ratio must satisfy 1 < ratio < w (got ratio={ratio}, w={w})")
    if start is None:
        start = epsilon / (8.0 * w)
    if stop is None:
        stop = max(4.0, 1.5 * w * epsilon)
    start, stop = float(start), float(stop)
    if stop < w * epsilon:
        raise ValidationError(
            f"truncation at {stop} would clip the ambiguity region (needs stop >= w*epsilon = {w * epsilon})"
        )
    if not (0.0 < start < epsilon / w):
        raise ValidationError(f"start must lie in (0, epsilon/w) (got {start})")
    values = _ray_values(w, epsilon, ratio, start, stop, refine_levels)
    edges = (
        [0.0]
        + [math.sqrt(values[i] * values[i + 1]) for i in range(len(values) - 1)]
        + [stop]
    )
    weights = [erf(hi) - erf(lo) for lo, hi in zip(edges, edges[1:])]
    space = ToleranceSpace.from_edges(_ids(values), _ratio_edges(values, w), weights)
    classifier = Classifier(tuple(1 if v < epsilon else 2 for v in values), 2)
    meta = {
        "w": w,
        "epsilon": epsilon,
        "ratio": ratio,
        "start": start,
        "stop": stop,
        "refine_levels": refine_levels,
        "points": len(values),
        "truncated_mass": 1.0 - erf(stop),
        "analytic_ambiguity_bound": analytic_oracles("ambiguity_bound", w=w, epsilon=epsilon),
    }
    return RayInstance(space, classifier, tuple(values), w, epsilon, meta)


def make_kline_gaussian(
    w: float,
    epsilon: float,
    *,
    ratio: float = 1.02,
    inner: float = 0.01,
    outer: float = 4.0,
    points: Sequence[float] | None = None,
) -> KlineInstance:
    """Signed Gaussian line (mean 0, variance 1/2) with {0} isolated.

    Two points are indiscriminable iff they share a sign and lie within a
    multiplicative factor w; 0 is indiscriminable only from itself, so the
    elementary classes mirror {negatives}, {0}, {positives}.  The world
    model labels by sign (0 belongs to the upper class); the classifier
    thresholds at epsilon.
    """
    w, epsilon = float(w), float(epsilon)
    if w <= 1.0:
        raise ValidationError(f"Weber factor w must exceed 1, got {w}")
    if epsilon <= 0.0:
        raise ValidationError(f"threshold epsilon must be positive, got {epsilon}")
    if points is None:
        ratio, inner, outer = float(ratio), float(inner), float(outer)
        if not (1.0 < ratio < w):
            raise ValidationError(f"grid ratio must satisfy 1 < ratio < w (got ratio={ratio}, w={w})")
        if not (0.0 < inner < outer):
            raise ValidationError(f"need 0 < inner < outer (got inner={inner}, outer={outer})")
        pos = []
        v = inner
        while v < outer * (1.0 - 1e-12):
            pos.append(v)
            v *= ratio
        pos.append(outer)
        values = [-p for p in reversed(pos)] + [0.0] + pos
        half = inner / math.sqrt(ratio)
        pos_edges = [half] + [math.sqrt(pos[i] * pos[i + 1]) for i in range(len(pos) - 1)] + [outer]
        pos_w = [0.5 * (erf(hi) - erf(lo)) for lo, hi in zip(pos_edges, pos_edges[1:])]
        weights = list(reversed(pos_w)) + [erf(half)] + pos_w
        truncated = 1.0 - erf(outer)
    else:
        values = sorted(float(v) for v in points)
        if 0.0 not in values:
            raise ValidationError("k-line grids must contain the point 0")
        if len(values) != len(set(values)):
            raise ValidationError("k-line grid points must be distinct")
        mids = [(values[i] + values[i + 1]) / 2.0 for i in range(len(values) - 1)]
        gap_lo = values[0] - (mids[0] - values[0]) if mids else values[0] - 1.0
        gap_hi = values[-1] + (values[-1] - mids[-1]) if mids else values[-1] + 1.0
        edges = [gap_lo] + mids + [gap_hi]
        weights = [0.5 * (erf(hi) - erf(lo)) for lo, hi in zip(edges, edges[1:])]
        truncated = 1.0 - 0.5 * (erf(gap_hi) - erf(gap_lo))
    n = len(values)
    # Same-sign multiplicative windows, built per sign block; 0 stays isolated.
    edges_rel: list[tuple[int, int]] = []
    neg = [i for i, v in enumerate(values) if v < 0.0]
    posi = [i for i, v in enumerate(values) if v > 0.0]
    for block in (neg, posi):
        mags = [abs(values[i]) for i in block]
        order = sorted(range(len(block)), key=lambda k: mags[k])
        for a_pos in range(len(order)):
            ia = order[a_pos]
            b_pos = a_pos + 1
            while b_pos < len(order) and mags[order[b_pos]] < mags[ia] * w:
                edges_rel.append((block[ia], block[order[b_pos]]))
                b_pos += 1
    space = ToleranceSpace.from_edges(_ids(values), edges_rel, weights)
    world = WorldModel(tuple(1 if v < 0.0 else 2 for v in values), 2)
    classifier = Classifier(tuple(1 if v < epsilon else 2 for v in values), 2)
    meta = {
        "w": w,
        "epsilon": epsilon,
        "points": n,
        "truncated_mass": truncated,
        "analytic_ambiguity_mass": analytic_oracles("kline_ambiguity_mass", w=w, epsilon=epsilon),
        "analytic_accuracy": analytic_oracles("kline_accuracy", epsilon=epsilon),
        "analytic_eps_star": kline_eps_star_exact(w),
    }
    return KlineInstance(space, world, classifier, tuple(values), w, epsilon, meta)


def analytic_oracles(name: str, **params: float) -> float:
    """Closed-form reference values for the Gaussian instances.

    ambiguity_bound(w, epsilon): half-Gaussian-ray mass of the ambiguity
    region (epsilon/w, w*epsilon), i.e. erf(w*eps) - erf(eps/w).
    kline_ambiguity_mass(w, epsilon): mass of the misclassified adversarial
    band (eps/w, eps) on the signed line.
    kline_accuracy(epsilon): accuracy of the threshold classifier against
    the sign world model, 1 - erf(eps)/2.
    """
    if name == "ambiguity_bound":
        w, eps = float(params["w"]), float(params["epsilon"])
        return erf(w * eps) - erf(eps / w)
    if name == "kline_ambiguity_mass":
        w, eps = float(params["w"]), float(params["epsilon"])
        return 0.5 * (erf(eps) - erf(eps / w))
    if name == "kline_accuracy":
        eps = float(params["epsilon"])
        return 1.0 - 0.5 * erf(eps)
    raise ValidationError(f"unknown oracle name {name!r}")


def _golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = f(c), f(d)
    while (b - a) > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def kline_eps_star(w: float, tol: float = 1e-8) -> float:
    """Threshold maximizing the adversarial band mass, by golden section.

    The band mass (erf(eps) - erf(eps/w))/2 rises from 0 and decays at
    infinity with a unique interior maximum.
    """
    if w <= 1.0:
        raise ValidationError(f"Weber factor w must exceed 1, got {w}")
    return _golden_section_max(
        lambda e: analytic_oracles("kline_ambiguity_mass", w=w, epsilon=e), 1e-9, 8.0, tol
    )


def kline_eps_star_exact(w: float) -> float:
    """Closed form for the band-mass maximizer: the zero of the derivative.

    d/de [erf(e) - erf(e/w)] vanishes where e^2 (1 - 1/w^2) = ln w.
    """
    if w <= 1.0:
        raise ValidationError(f"Weber factor w must exceed 1, got {w}")
    return math.sqrt(math.log(w) / (1.0 - w**-2))
