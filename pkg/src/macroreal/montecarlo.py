"""
Trajectory sampling of sequential unsharp measurements.

Random numbers come from SplitMix64 in counter form, so the generator is
fully specified here and any implementation reproduces the same draws:

* ``mix(z)``: ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31`` (all mod 2**64)
* the k-th output (k = 0, 1, ...) of stream ``s`` is
  ``mix(s + (k + 1) * 0x9E3779B97F4A7C15)``
* a uniform on ``[0, 1)`` is ``(output >> 11) * 2**-53``
* substream ``j`` of seed ``s`` is ``mix(s ^ mix(j + 0x9E3779B97F4A7C15))``

Sample ``i`` with ``k`` measured times uses outputs ``i*k .. i*k + k - 1``;
chunking the sample range therefore never changes the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

from .errors import DomainError
from .inequalities import get_spec
from .qm import ModelParams, conjugate_by, effect_sqrt_diagonal, evolution_unitary, initial_density
from .sequences import MeasurementPlan

__all__ = [
    "GOLDEN_GAMMA",
    "mix64",
    "splitmix64",
    "uniforms",
    "substream",
    "TrajectoryConfig",
    "sample_sequences",
    "MCEstimate",
    "estimate_inequality",
]

GOLDEN_GAMMA = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_CHUNK = 1 << 20


def mix64(z) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def splitmix64(seed: int, count: int, offset: int = 0) -> np.ndarray:
    """Outputs ``offset .. offset + count - 1`` of the stream seeded by ``seed``."""
    k = np.arange(offset + 1, offset + count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed % (1 << 64)) + k * GOLDEN_GAMMA
    return mix64(z)


def uniforms(seed: int, count: int, offset: int = 0) -> np.ndarray:
    return (splitmix64(seed, count, offset) >> np.uint64(11)).astype(np.float64) * 2.0**-53


def substream(seed: int, index: int) -> int:
    with np.errstate(over="ignore"):
        key = mix64(np.uint64(index % (1 << 64)) + GOLDEN_GAMMA)
    return int(mix64(np.uint64(seed % (1 << 64)) ^ key))


@dataclass(frozen=True)
class TrajectoryConfig:
    plan: MeasurementPlan
    measured_indices: tuple[int, ...]
    n_samples: int
    rng_seed: int

    def __post_init__(self) -> None:
        idx = tuple(int(i) for i in self.measured_indices)
        if not idx:
            raise DomainError("at least one measured time is required")
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise DomainError(f"measured indices must be strictly increasing: {idx}")
        if idx[0] < 1 or idx[-1] > self.plan.n_times:
            raise DomainError(f"measured indices {idx} outside 1..{self.plan.n_times}")
        if self.n_samples < 1:
            raise DomainError(f"n_samples must be >= 1, got {self.n_samples}")
        if self.rng_seed < 0:
            raise DomainError("rng_seed must be non-negative")
        for name in ("theta", "phi", "tau", "lam"):
            if np.ndim(getattr(self.plan, name)) != 0:
                raise DomainError("trajectory sampling needs a scalar plan")
        object.__setattr__(self, "measured_indices", idx)


def _branch_update(rho: np.ndarray, lam: float, outcome: int) -> tuple[float, np.ndarray | None]:
    d_a, d_b = effect_sqrt_diagonal(lam, outcome)
    w = np.array([[d_a * d_a, d_a * d_b], [d_b * d_a, d_b * d_b]])
    post = rho * w
    p = float((post[0, 0] + post[1, 1]).real)
    return p, (post / p if p > 0.0 else None)


def sample_sequences(config: TrajectoryConfig) -> dict[tuple[int, ...], int]:
    """Count outcome strings over ``n_samples`` simulated runs.

    Each run draws its outcome at every measured time from the Lüders
    probabilities of its own conditional state. Runs sharing an outcome
    prefix share that state, so the state is tracked per prefix and the
    draws are compared in bulk.
    """
    plan = config.plan
    idx = config.measured_indices
    k = len(idx)
    lam = float(plan.lam)
    counts = {outs: 0 for outs in product((1, -1), repeat=k)}

    # conditional state and P(+) for every outcome prefix, keyed by a bit code (1 = minus)
    rho0 = initial_density(float(plan.theta), float(plan.phi))
    states: dict[tuple[int, int], np.ndarray] = {}
    p_plus: dict[tuple[int, int], float] = {}

    def state_for(step: int, code: int) -> np.ndarray | None:
        key = (step, code)
        if key not in states:
            if step == 0:
                rho, prev = rho0, 1
            else:
                parent = state_for(step - 1, code >> 1)
                if parent is None:
                    states[key] = None
                    return None
                outcome = -1 if code & 1 else 1
                _, rho = _branch_update(parent, lam, outcome)
                if rho is None:
                    states[key] = None
                    return None
                prev = idx[step - 1]
            gap = idx[step] - prev
            if gap:
                rho = conjugate_by(evolution_unitary(gap * float(plan.tau)), rho)
            states[key] = rho
            p_plus[key] = min(max(_branch_update(rho, lam, 1)[0], 0.0), 1.0)
        return states[key]

    for start in range(0, config.n_samples, _CHUNK):
        n = min(_CHUNK, config.n_samples - start)
        u = uniforms(config.rng_seed, n * k, start * k).reshape(n, k)
        codes = np.zeros(n, dtype=np.int64)
        for step in range(k):
            bit = np.zeros(n, dtype=np.int64)
            for code in np.unique(codes):
                state_for(step, int(code))
                sel = codes == code
                bit[sel] = (u[sel, step] >= p_plus[(step, int(code))]).astype(np.int64)
            codes = (codes << 1) | bit
        tally = np.bincount(codes, minlength=1 << k)
        for code, c in enumerate(tally):
            outs = tuple(-1 if (code >> (k - 1 - s)) & 1 else 1 for s in range(k))
            counts[outs] += int(c)
    return counts


@dataclass(frozen=True)
class MCEstimate:
    estimate: float
    std_error: float
    frequencies: tuple[tuple[str, float, float], ...]


def estimate_inequality(spec_name: str, params: ModelParams, n_samples: int,
                        seed: int) -> MCEstimate:
    """Estimate a criterion with one independent sub-ensemble per term.

    Term ``t`` samples only the times its event lists, drawing from
    substream ``t`` of ``seed``. ``frequencies`` holds
    ``(event, frequency, standard error)`` for every term.
    """
    spec = get_spec(spec_name)
    plan = MeasurementPlan.from_params(params, spec.n_times)
    total, var = 0.0, 0.0
    freqs = []
    for t, (sign, ev) in enumerate(spec.terms):
        cfg = TrajectoryConfig(plan, ev.indices, n_samples, substream(seed, t))
        counts = sample_sequences(cfg)
        p = counts[tuple(o for _, o in ev.outcomes)] / n_samples
        se = math.sqrt(p * (1.0 - p) / n_samples)
        freqs.append((str(ev), p, se))
        total += sign * p
        var += se * se
    return MCEstimate(total, math.sqrt(var), tuple(freqs))
