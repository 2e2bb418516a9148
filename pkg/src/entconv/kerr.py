"""Probe-phase tagging of photonic branches and X-quadrature readout.

The coherent probe is tracked symbolically: a basis component containing k
L-polarized photons rotates the probe by k phase units, so the state splits
into branches keyed by the integer tag k.  Readout models the X quadrature of
the rotated probe as a unit-variance Gaussian centered at 2*alpha*cos(k*theta)
and classifies with maximum-likelihood midpoint thresholds.  In gaussian mode
a draw landing in the wrong cell reports a wrong tag while the signal state
still collapses to the true branch: the error is informational and surfaces
as a wrong feed-forward decision downstream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qstate import QuantumState

MIN_MEAN_GAP = 1e-9
_ZERO_WEIGHT = 1e-24


def _l_counts(n_photons: int) -> np.ndarray:
    idx = np.arange(1 << n_photons)
    counts = np.zeros_like(idx)
    for b in range(n_photons):
        counts += (idx >> b) & 1
    return counts


@dataclass(frozen=True)
class KerrPartition:
    """A state split into unnormalized branches by probe-phase tag."""

    branches: dict[int, QuantumState]
    theta: float
    alpha: float

    def tags(self) -> tuple[int, ...]:
        return tuple(sorted(self.branches))

    def weights(self) -> dict[int, float]:
        return {k: s.norm2() for k, s in self.branches.items()}

    def total_weight(self) -> float:
        return sum(self.weights().values())


def apply_cross_kerr(state: QuantumState, theta: float, alpha: float) -> KerrPartition:
    """Split a photons-only state into branches keyed by L-photon count.

    Amplitudes are untouched; the tag is the only record of the probe phase.
    """
    if state.has_spin:
        raise ValueError("spin must be measured out before the probe interaction")
    if theta <= 0:
        raise ValueError("theta must be positive")
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    counts = _l_counts(state.n_photons)
    branches = {}
    for k in np.unique(counts):
        amps = np.where(counts == k, state.amplitudes, 0.0)
        if np.any(amps != 0):
            branches[int(k)] = QuantumState(state.n_photons, False, amps)
    return KerrPartition(branches, theta, alpha)


@dataclass(frozen=True)
class HomodyneModel:
    """Gaussian likelihoods and decision thresholds for a set of probe tags.

    ``means`` aligns with ``tags``; ``thresholds`` are the midpoints between
    adjacent means sorted ascending, the maximum-likelihood rule for
    equal-variance Gaussians.
    """

    alpha: float
    theta: float
    tags: tuple[int, ...]
    means: tuple[float, ...]
    thresholds: tuple[float, ...]
    tags_by_mean: tuple[int, ...]

    @classmethod
    def for_tags(cls, alpha: float, theta: float, tags) -> "HomodyneModel":
        tags = tuple(sorted(int(k) for k in tags))
        if not tags:
            raise ValueError("no tags to discriminate")
        means = tuple(2.0 * alpha * math.cos(k * theta) for k in tags)
        by_mean = sorted(zip(means, tags))
        for (m_lo, _), (m_hi, _) in zip(by_mean, by_mean[1:]):
            if m_hi - m_lo <= MIN_MEAN_GAP:
                raise ValueError("degenerate phase configuration")
        thresholds = tuple((lo[0] + hi[0]) / 2.0 for lo, hi in zip(by_mean, by_mean[1:]))
        return cls(alpha, theta, tags, means, thresholds, tuple(t for _, t in by_mean))

    def mean_of(self, tag: int) -> float:
        return self.means[self.tags.index(tag)]

    def classify(self, x):
        """Tag whose decision cell contains x; vectorized over arrays."""
        cell = np.searchsorted(np.asarray(self.thresholds), x, side="left")
        return np.asarray(self.tags_by_mean)[cell]


def homodyne_pdf(x, alpha: float, k: int, theta: float):
    """Probability density of the X quadrature for tag k: unit-variance Gaussian."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    mean = 2.0 * alpha * math.cos(k * theta)
    return np.exp(-0.5 * (np.asarray(x, dtype=float) - mean) ** 2) / math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class HomodyneOutcome:
    """One probe readout: classified tag, true branch kept, raw branch weight."""

    tag: int
    true_tag: int
    state: QuantumState
    probability: float
    quadrature: float | None

    @property
    def misclassified(self) -> bool:
        return self.tag != self.true_tag


def homodyne_measure(
    part: KerrPartition,
    model: HomodyneModel,
    mode: str = "ideal",
    rng: np.random.Generator | None = None,
    forced_tag: int | None = None,
) -> HomodyneOutcome:
    """Read the probe phase out of a partition.

    Ideal mode samples the tag with probability equal to the branch weight.
    Gaussian mode samples the true tag by weight, then draws a quadrature
    value from its Gaussian and classifies by threshold; the returned state is
    always the renormalized true branch.  ``forced_tag`` pins both the true
    and reported tag (used for branch-by-branch analysis).
    """
    if mode not in ("ideal", "gaussian"):
        raise ValueError(f"unknown homodyne mode {mode!r}")
    weights = part.weights()
    missing = [k for k in weights if k not in model.tags]
    if missing:
        raise ValueError(f"partition tags {missing} missing from homodyne model")
    if forced_tag is not None:
        if forced_tag not in weights or weights[forced_tag] <= _ZERO_WEIGHT:
            raise ValueError("forced tag absent")
        true = classified = int(forced_tag)
        x = None
    else:
        if rng is None:
            raise ValueError("rng required when no tag is forced")
        total = part.total_weight()
        draw = rng.random() * total
        acc = 0.0
        true = part.tags()[-1]
        for k in part.tags():
            acc += weights[k]
            if draw < acc:
                true = k
                break
        if mode == "ideal":
            classified = true
            x = None
        else:
            x = float(rng.normal(model.mean_of(true), 1.0))
            classified = int(model.classify(x))
    return HomodyneOutcome(classified, true, part.branches[true].normalized(), weights[true], x)


def error_probability(x_d: float) -> float:
    """Misclassification probability for two unit-variance peaks a distance x_d apart.

    This is the tail mass of one Gaussian beyond the midpoint threshold:
    erfc(x_d / (2*sqrt(2))) / 2.
    """
    if x_d < 0:
        raise ValueError("peak distance must be nonnegative")
    return 0.5 * math.erfc(x_d / (2.0 * math.sqrt(2.0)))


def peak_distances(alpha: float, theta: float, tags) -> list[float]:
    """Distances between the quadrature means of adjacent tags (sorted by tag)."""
    tags = sorted(tags)
    means = [2.0 * alpha * math.cos(k * theta) for k in tags]
    return [means[i] - means[i + 1] for i in range(len(means) - 1)]


def classify_samples(model: HomodyneModel, true_tag: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n quadrature values from one tag's Gaussian and classify each.

    Vectorized; used to estimate empirical misclassification rates.
    """
    x = rng.normal(model.mean_of(true_tag), 1.0, size=int(n))
    return model.classify(x)
