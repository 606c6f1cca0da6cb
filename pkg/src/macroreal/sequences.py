"""
Sequential measurements on the oscillating two-level system.

Probabilities are computed by propagating the density matrix through the
measurement sequence: unitary evolution between measured times, an
(unnormalized) Lüders sandwich at each measured time, and a trace at the
end. The trace of the unnormalized state is the product of the branch
probabilities, so a zero-probability prefix simply yields 0.

All functions accept array-valued plan parameters and broadcast.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError
from .qm import (
    ModelParams,
    _check_range,
    conjugate_by,
    effect_sqrt_diagonal,
    evolution_unitary,
    initial_density,
)

__all__ = [
    "MeasurementPlan",
    "Event",
    "joint_probability",
    "event_probabilities",
    "single_time_probability",
    "correlation",
    "outcome_table",
]


@dataclass(frozen=True)
class MeasurementPlan:
    """Equally spaced measurement times ``t_1 .. t_n`` with fixed sharpness.

    ``tau`` is the phase accumulated between neighbouring times. Any of
    ``theta``, ``phi``, ``tau``, ``lam`` may be numpy arrays; results then
    broadcast over them.
    """

    n_times: int
    tau: float | np.ndarray
    lam: float | np.ndarray = 1.0
    theta: float | np.ndarray = 0.0
    phi: float | np.ndarray = 0.0

    def __post_init__(self) -> None:
        if int(self.n_times) != self.n_times or self.n_times < 1:
            raise DomainError(f"n_times must be a positive integer, got {self.n_times!r}")
        _check_range("lambda", self.lam, 0.0, 1.0, lo_open=True)
        _check_range("theta", self.theta, 0.0, np.pi / 2)
        _check_range("phi", self.phi, 0.0, 2 * np.pi)
        _check_range("tau", self.tau, 0.0, np.inf)

    @classmethod
    def from_params(cls, params: ModelParams, n_times: int) -> "MeasurementPlan":
        return cls(n_times, params.tau, params.lam, params.theta, params.phi)


_EVENT_TOKEN = re.compile(r"^\s*(\d+)\s*([+-])\s*$")


@dataclass(frozen=True, order=True)
class Event:
    """Outcomes at a subset of measurement times.

    ``outcomes`` is a tuple of ``(time_index, ±1)`` pairs with strictly
    increasing 1-based indices. Times not listed are not measured.
    """

    outcomes: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        pairs = tuple((int(i), int(o)) for i, o in self.outcomes)
        if not pairs:
            raise ValueError("an event needs at least one measured time")
        for i, o in pairs:
            if i < 1:
                raise ValueError(f"time indices are 1-based, got {i}")
            if o not in (1, -1):
                raise ValueError(f"outcome must be +1 or -1, got {o}")
        idx = [i for i, _ in pairs]
        if any(b <= a for a, b in zip(idx, idx[1:])):
            raise ValueError(f"time indices must be strictly increasing: {idx}")
        object.__setattr__(self, "outcomes", pairs)

    @classmethod
    def parse(cls, text: str) -> "Event":
        """Build from compact notation, e.g. ``"2+,3-"``."""
        pairs = []
        for token in text.split(","):
            m = _EVENT_TOKEN.match(token)
            if m is None:
                raise ValueError(f"cannot parse event token {token!r} in {text!r}")
            pairs.append((int(m.group(1)), 1 if m.group(2) == "+" else -1))
        return cls(tuple(pairs))

    @property
    def indices(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.outcomes)

    @property
    def last_index(self) -> int:
        return self.outcomes[-1][0]

    def flipped(self) -> "Event":
        return Event(tuple((i, -o) for i, o in self.outcomes))

    def satisfied_by(self, assignment: tuple[int, ...]) -> bool:
        return all(assignment[i - 1] == o for i, o in self.outcomes)

    def __str__(self) -> str:
        return ",".join(f"{i}{'+' if o > 0 else '-'}" for i, o in self.outcomes)


def _check_event(plan: MeasurementPlan, event: Event) -> None:
    if event.last_index > plan.n_times:
        raise DomainError(
            f"event {event} references time {event.last_index} > n_times={plan.n_times}"
        )


def _propagate(plan: MeasurementPlan, event: Event) -> np.ndarray:
    rho = initial_density(plan.theta, plan.phi)
    current = 1
    for index, outcome in event.outcomes:
        if index > current:
            u = evolution_unitary((index - current) * np.asarray(plan.tau, dtype=float))
            rho = conjugate_by(u, rho)
            current = index
        d_a, d_b = effect_sqrt_diagonal(plan.lam, outcome)
        # sqrt(F) rho sqrt(F) for diagonal sqrt(F)
        rho = rho * np.stack(
            [np.stack([d_a * d_a, d_a * d_b], -1), np.stack([d_b * d_a, d_b * d_b], -1)], -2
        )
    return (rho[..., 0, 0] + rho[..., 1, 1]).real


def _as_result(p: np.ndarray):
    p = np.clip(p, 0.0, 1.0)
    return float(p) if np.ndim(p) == 0 else p


def joint_probability(plan: MeasurementPlan, event: Event):
    """Probability of ``event`` when only the times it lists are measured.

    Unmeasured times in between contribute unitary evolution only.
    """
    _check_event(plan, event)
    return _as_result(_propagate(plan, event))


def event_probabilities(plan: MeasurementPlan, events: Iterable[Event]) -> dict[Event, np.ndarray]:
    """Evaluate several events on one plan, computing each distinct event once."""
    out: dict[Event, np.ndarray] = {}
    for ev in events:
        if ev not in out:
            out[ev] = joint_probability(plan, ev)
    return out


def single_time_probability(plan: MeasurementPlan, time_index: int, outcome: int):
    """Probability of ``outcome`` at ``time_index`` with no earlier measurement."""
    return joint_probability(plan, Event(((time_index, outcome),)))


def correlation(plan: MeasurementPlan, i: int, j: int):
    """Two-time correlator ``<Q_i Q_j>`` from the four sequential joint probabilities."""
    if not i < j:
        raise DomainError(f"correlation needs i < j, got i={i}, j={j}")
    if j > plan.n_times:
        raise DomainError(f"time {j} exceeds n_times={plan.n_times}")
    total = 0.0
    for oi, oj in product((1, -1), repeat=2):
        total = total + oi * oj * _propagate(plan, Event(((i, oi), (j, oj))))
    return float(total) if np.ndim(total) == 0 else total


def outcome_table(plan: MeasurementPlan, indices: Iterable[int]) -> Mapping[tuple[int, ...], float]:
    """Joint distribution over all outcome strings for the given measured times."""
    idx = tuple(indices)
    return {
        outs: joint_probability(plan, Event(tuple(zip(idx, outs))))
        for outs in product((1, -1), repeat=len(idx))
    }
