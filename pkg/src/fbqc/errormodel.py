"""Error models on syndrome-graph edges.

Hardware-agnostic sampling (independent erasure + outcome flips per
measurement) and the analytic linear-optical maps: boosted-fusion failure,
photon loss, and the (2,2)-Shor encoded fusion erasure probability.

Sampling uses counter-based Philox streams keyed by (master seed, stream
tag, trial index), so trials are reproducible and independent of execution
order or worker count.

A note on erased outcomes: a lost fusion outcome is intrinsically random,
so `TrialSample.flipped` carries a fair coin on every erased edge (and the
p_error flips on non-erased edges).  Check parities computed over these
substituted values, together with weight-0 erased edges in the matcher,
reproduce the merged-check decoding semantics exactly; the coin bits are
what make an undecodable (torus-winding) erased cluster fail half the time.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "HardwareAgnosticParams",
    "LinearOpticalParams",
    "TrialSample",
    "NoSolutionError",
    "trial_rng",
    "sample_hardware_agnostic",
    "p0",
    "p_enc",
    "boosting_photons",
    "fusion_outcome_distribution",
    "effective_erasure",
    "loss_threshold",
]


class NoSolutionError(ValueError):
    """The zero-loss erasure probability already exceeds the threshold."""


@dataclass(frozen=True)
class HardwareAgnosticParams:
    p_erasure: float
    p_error: float

    def __post_init__(self):
        for name in ("p_erasure", "p_error"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


@dataclass(frozen=True)
class LinearOpticalParams:
    p_fail: float
    p_loss: float
    encoded: bool = False

    def __post_init__(self):
        if not 0.0 < self.p_fail < 1.0:
            raise ValueError("p_fail must be in (0, 1)")
        if not 0.0 <= self.p_loss < 1.0:
            raise ValueError("p_loss must be in [0, 1)")

    @property
    def eta(self) -> float:
        return 1.0 - self.p_loss


@dataclass(frozen=True)
class TrialSample:
    """Per-edge erasure flags and outcome-flip bits for one decoding trial."""

    erased: np.ndarray
    flipped: np.ndarray

    def __post_init__(self):
        if self.erased.shape != self.flipped.shape:
            raise ValueError("erased/flipped must have equal length")


def trial_rng(master_seed: int, stream: int, trial: int) -> np.random.Generator:
    """Independent counter-based stream for one (point, trial) pair."""
    key = (np.uint64(master_seed) << np.uint64(32)) ^ np.uint64(stream)
    return np.random.Generator(np.random.Philox(key=[key, np.uint64(trial)]))


def sample_hardware_agnostic(
    params: HardwareAgnosticParams,
    n_edges: int,
    rng: np.random.Generator,
) -> TrialSample:
    """One i.i.d. erasure/flip sample over the edges of a syndrome graph.

    Each edge is erased with probability p_erasure.  A non-erased edge is
    flipped with probability p_error (a measurement can only be incorrect
    if it is not erased); an erased edge carries a fair coin standing in
    for its lost, intrinsically random outcome.
    """
    u = rng.random(n_edges)
    erased = u < params.p_erasure
    v = rng.random(n_edges)
    flipped = np.where(erased, v < 0.5, v < params.p_error)
    return TrialSample(
        erased=erased.astype(np.uint8), flipped=flipped.astype(np.uint8)
    )


def p0(p_fail: float, eta: float) -> float:
    """Marginal erasure probability of one physical fusion measurement."""
    if not 0.0 < p_fail <= 1.0:
        raise ValueError("p_fail must be in (0, 1]")
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must be in [0, 1]")
    return 1.0 - (1.0 - p_fail / 2.0) * eta ** (1.0 / p_fail)


def p_enc(p0_val: float) -> float:
    """Erasure probability of a (2,2)-Shor encoded fusion measurement.

    Average of the two code orientations: the repetition-above direction
    needs both of two measurement pairs, the other either of two pairs.
    """
    if not 0.0 <= p0_val <= 1.0:
        raise ValueError("p0 must be in [0, 1]")
    hard = (1.0 - (1.0 - p0_val) ** 2) ** 2
    easy = 1.0 - (1.0 - p0_val**2) ** 2
    return 0.5 * (hard + easy)


def boosting_photons(n_level: int) -> tuple[int, float]:
    """(ancilla photon count, p_fail) for the boosting family 1/2^n."""
    if n_level < 1:
        raise ValueError("boost level must be >= 1")
    return (2**n_level - 2, 0.5**n_level)


def fusion_outcome_distribution(eta: float) -> dict[str, float]:
    """Outcome probabilities of a Bell-pair-boosted fusion (p_fail = 1/4)."""
    if not 0.0 <= eta <= 1.0:
        raise ValueError("eta must be in [0, 1]")
    e4 = eta**4
    return {
        "success": 0.75 * e4,
        "failure-x": e4 / 8.0,
        "failure-z": e4 / 8.0,
        "no-info": 1.0 - e4,
    }


def effective_erasure(params: LinearOpticalParams) -> float:
    """Per-measurement erasure probability of the linear-optical model."""
    base = p0(params.p_fail, params.eta)
    return p_enc(base) if params.encoded else base


def loss_threshold(
    p_fail: float, p_erasure_star: float, encoded: bool
) -> float:
    """The photon-loss rate at which the effective erasure hits threshold.

    effective_erasure is strictly increasing in p_loss, so the solution is
    unique when it exists; found by bisection to 1e-9.
    """

    def g(p_loss: float) -> float:
        return (
            effective_erasure(LinearOpticalParams(p_fail, p_loss, encoded))
            - p_erasure_star
        )

    if g(0.0) >= 0.0:
        raise NoSolutionError(
            "erasure at zero loss already exceeds the threshold"
        )
    hi = 1.0 - 1e-12
    if g(hi) <= 0.0:  # threshold unreachable even at total loss (p* >= 1)
        return 1.0
    return float(brentq(g, 0.0, hi, xtol=1e-9))
