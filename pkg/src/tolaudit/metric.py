"""Perceptual metric and Laplace operators on the discrimination graph.

The discrimination graph has the points as vertices and an edge between
every indiscriminable pair.  Graph distance maps through d/(1+d) to the
perceptual distance, with disconnected pairs at exactly 1.  Two Laplace
operators are provided: the discrimination operator built from Doppelganger
sets and degrees mu(D(x)), and the better-behaved chain operator built from
elementary classes, whose kernel is exactly the perceptually regular
functions and whose spectrum is {0, 1}.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Sequence

import numpy as np

from .errors import GuardError, ValidationError
from .spaces import ElementaryPartition, ToleranceSpace, transitive_closure

__all__ = [
    "graph_distance",
    "distances_from",
    "perceptual_distance",
    "strata",
    "laplacian_ad",
    "laplacian_sigma",
    "laplacian_ad_matrix",
    "laplacian_sigma_matrix",
    "ad_spectrum",
    "sigma_spectrum",
    "is_perceptually_regular",
]

DENSE_SPECTRUM_GUARD = 512


def distances_from(space: ToleranceSpace, x: str) -> list[int | float]:
    """BFS graph distances from x; unreachable points get math.inf."""
    src = space.index(x)
    dist: list[int | float] = [math.inf] * space.n
    dist[src] = 0
    queue = deque([src])
    while queue:
        i = queue.popleft()
        for j in space.neighbors[i]:
            if dist[j] is math.inf or dist[j] > dist[i] + 1:
                dist[j] = dist[i] + 1
                queue.append(j)
    return dist


def graph_distance(space: ToleranceSpace, x: str, y: str) -> int | float:
    """Shortest chain length between x and y; math.inf iff not metamorphic."""
    return distances_from(space, x)[space.index(y)]


def perceptual_distance(space: ToleranceSpace, x: str, y: str) -> float:
    """d/(1+d) with the infinite case mapped to exactly 1."""
    d = graph_distance(space, x, y)
    if math.isinf(d):
        return 1.0
    return d / (1.0 + d)


def strata(space: ToleranceSpace, x: str) -> list[tuple[float, tuple[str, ...]]]:
    """Nonempty spheres around x by perceptual distance, radius ascending.

    The union of all spheres of radius < 1 is the elementary class of x;
    the radius-1 sphere (absent when empty) is everything outside it.
    """
    dist = distances_from(space, x)
    spheres: dict[float, list[str]] = {}
    for i, d in enumerate(dist):
        rho = 1.0 if math.isinf(d) else d / (1.0 + d)
        spheres.setdefault(rho, []).append(space.point_ids[i])
    return [(rho, tuple(spheres[rho])) for rho in sorted(spheres)]


def _as_values(space: ToleranceSpace, f: Sequence[float]) -> np.ndarray:
    vals = np.asarray(f, dtype=float)
    if vals.shape != (space.n,):
        raise ValidationError(f"function must have one value per point ({space.n}), got shape {vals.shape}")
    if not np.all(np.isfinite(vals)):
        raise ValidationError("function values must be finite")
    return vals


def laplacian_ad(space: ToleranceSpace, f: Sequence[float]) -> np.ndarray:
    """Discrimination Laplacian over Doppelganger sets.

    (Lf)(x) = f(x) - (1/sqrt(d(x))) * sum_{y in D(x)} mu(y) f(y)/sqrt(d(y))
    with degree d(x) = mu(D(x)) under the normalized measure.  sqrt(d) is
    always in the kernel.
    """
    vals = _as_values(space, f)
    mu = np.array(space.probabilities())
    deg = np.array([mu[list(s)].sum() for s in space.neighbors])
    for i, d in enumerate(deg):
        if d <= 0.0:
            raise ValidationError(
                f"discrimination Laplacian undefined: mu(D({space.point_ids[i]!r})) = 0"
            )
    sq = np.sqrt(deg)
    out = np.empty(space.n)
    for i, s in enumerate(space.neighbors):
        idx = list(s)
        out[i] = vals[i] - (mu[idx] * vals[idx] / sq[idx]).sum() / sq[i]
    return out


def laplacian_sigma(
    space: ToleranceSpace, f: Sequence[float], partition: ElementaryPartition | None = None
) -> np.ndarray:
    """Chain Laplacian: f minus its weighted mean over each elementary class."""
    vals = _as_values(space, f)
    part = partition if partition is not None else transitive_closure(space)
    mu = np.array(space.probabilities())
    out = np.empty(space.n)
    for cls in part.classes:
        idx = list(cls)
        mass = mu[idx].sum()
        if mass <= 0.0:
            members = ", ".join(space.point_ids[i] for i in cls)
            raise ValidationError(f"chain Laplacian undefined: class {{{members}}} has zero measure")
        mean = (mu[idx] * vals[idx]).sum() / mass
        out[idx] = vals[idx] - mean
    return out


def laplacian_ad_matrix(space: ToleranceSpace) -> np.ndarray:
    """Dense matrix of the discrimination Laplacian."""
    mu = np.array(space.probabilities())
    deg = np.array([mu[list(s)].sum() for s in space.neighbors])
    for i, d in enumerate(deg):
        if d <= 0.0:
            raise ValidationError(
                f"discrimination Laplacian undefined: mu(D({space.point_ids[i]!r})) = 0"
            )
    sq = np.sqrt(deg)
    mat = np.eye(space.n)
    for i, s in enumerate(space.neighbors):
        for j in s:
            mat[i, j] -= mu[j] / (sq[i] * sq[j])
    return mat


def laplacian_sigma_matrix(space: ToleranceSpace) -> np.ndarray:
    """Dense matrix of the chain Laplacian (identity minus class averaging)."""
    part = transitive_closure(space)
    mu = np.array(space.probabilities())
    mat = np.eye(space.n)
    for cls in part.classes:
        idx = list(cls)
        mass = mu[idx].sum()
        if mass <= 0.0:
            members = ", ".join(space.point_ids[i] for i in cls)
            raise ValidationError(f"chain Laplacian undefined: class {{{members}}} has zero measure")
        for i in idx:
            mat[i, idx] -= mu[idx] / mass
    return mat


def _dense_spectrum(mat: np.ndarray, n: int, max_points: int) -> np.ndarray:
    if n > max_points:
        raise GuardError(
            f"dense spectrum limited to {max_points} points (got {n}); raise the guard explicitly"
        )
    eig = np.linalg.eigvals(mat)
    order = np.lexsort((eig.imag, eig.real))
    return eig[order]


def ad_spectrum(space: ToleranceSpace, max_points: int = DENSE_SPECTRUM_GUARD) -> np.ndarray:
    """Eigenvalues of the discrimination Laplacian (dense; guarded size)."""
    return _dense_spectrum(laplacian_ad_matrix(space), space.n, max_points)


def sigma_spectrum(space: ToleranceSpace, max_points: int = DENSE_SPECTRUM_GUARD) -> np.ndarray:
    """Eigenvalues of the chain Laplacian; always {0, 1} up to rounding."""
    return _dense_spectrum(laplacian_sigma_matrix(space), space.n, max_points)


def is_perceptually_regular(
    space: ToleranceSpace,
    f: Sequence[float],
    partition: ElementaryPartition | None = None,
    atol: float = 0.0,
) -> bool:
    """True iff f is constant on every elementary class (within atol)."""
    vals = _as_values(space, f)
    part = partition if partition is not None else transitive_closure(space)
    for cls in part.classes:
        ref = vals[cls[0]]
        for i in cls[1:]:
            if abs(vals[i] - ref) > atol:
                return False
    return True
