"""
Macrorealism criteria as data.

Each criterion is an `InequalitySpec`: signed event probabilities plus the
bound a macrorealist model must respect. The same evaluator handles the
three-term Wigner-form inequalities, their n-term chain, the n-term
Leggett-Garg correlator sums (expanded to events) and the no-signalling-in-
time residual.

Stable names::

    wlgi3-4, wlgi3-5a .. wlgi3-5k     three-term Wigner-form inequalities
    <any of the above>-flipped        same with every outcome label inverted
    wlgi-n:<n>                        n-term chain, n >= 3
    lgi:<n>                           K_n correlator sum, n >= 3
    nsit                              P(Q2=+) - P(1+,2+) - P(1-,2+)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .errors import DomainError, UnknownSpecError
from .qm import ModelParams
from .sequences import Event, MeasurementPlan, correlation, event_probabilities

__all__ = [
    "InequalitySpec",
    "ViolationResult",
    "WLGI3_TABLE",
    "wlgi3_catalog",
    "wlgi_n",
    "lgi_spec",
    "lgi_bounds",
    "nsit_spec",
    "get_spec",
    "spec_names",
    "evaluate",
    "evaluate_named",
    "lgi_kn",
    "nsit_delta",
    "spec_value",
]


@dataclass(frozen=True)
class InequalitySpec:
    """``lower_bound <= sum(sign * P(event)) <= upper_bound`` under macrorealism."""

    name: str
    n_times: int
    terms: tuple[tuple[int, Event], ...]
    upper_bound: float
    lower_bound: float | None = None

    def __post_init__(self) -> None:
        terms = tuple((int(s), ev) for s, ev in self.terms)
        for sign, ev in terms:
            if sign not in (1, -1):
                raise ValueError(f"{self.name}: term sign must be ±1, got {sign}")
            if ev.last_index > self.n_times:
                raise ValueError(f"{self.name}: event {ev} exceeds n_times={self.n_times}")
        object.__setattr__(self, "terms", terms)

    @property
    def events(self) -> tuple[Event, ...]:
        return tuple(ev for _, ev in self.terms)

    def flipped(self, name: str | None = None) -> "InequalitySpec":
        """Invert every outcome label; bounds are unchanged."""
        return InequalitySpec(
            name or f"{self.name}-flipped",
            self.n_times,
            tuple((s, ev.flipped()) for s, ev in self.terms),
            self.upper_bound,
            self.lower_bound,
        )

    def combine(self, probabilities: Mapping[Event, np.ndarray]):
        total = 0.0
        for sign, ev in self.terms:
            total = total + sign * probabilities[ev]
        return total

    def __str__(self) -> str:
        parts = [f"{'+' if s > 0 else '-'}P({ev})" for s, ev in self.terms]
        lo = "" if self.lower_bound is None else f"{self.lower_bound:g} <= "
        return f"{lo}{' '.join(parts)} <= {self.upper_bound:g}"


@dataclass(frozen=True)
class ViolationResult:
    """Criterion value at one parameter point; ``margin > 0`` is a violation."""

    params: ModelParams
    value: float
    bound: float
    margin: float = field(init=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "margin", self.value - self.bound)


# Leading term first, then the two subtracted terms.
WLGI3_TABLE: dict[str, tuple[str, str, str]] = {
    "wlgi3-4": ("2+,3-", "1+,2+", "1-,3-"),
    "wlgi3-5a": ("2+,3+", "1-,2+", "1+,3+"),
    "wlgi3-5b": ("2+,3-", "1-,2+", "1+,3-"),
    "wlgi3-5c": ("2+,3+", "1+,2+", "1-,3+"),
    "wlgi3-5d": ("1+,3-", "1+,2-", "2+,3-"),
    "wlgi3-5e": ("1+,3-", "1+,2+", "2-,3-"),
    "wlgi3-5f": ("1+,3+", "1+,2+", "2-,3+"),
    "wlgi3-5g": ("1+,3+", "1+,2-", "2+,3+"),
    "wlgi3-5h": ("1+,2-", "1+,3-", "2-,3+"),
    "wlgi3-5i": ("1+,2-", "1+,3+", "2-,3-"),
    "wlgi3-5j": ("1+,2+", "1+,3+", "2+,3-"),
    "wlgi3-5k": ("1+,2+", "1+,3-", "2+,3+"),
}


def _wlgi3(name: str) -> InequalitySpec:
    lead, a, b = (Event.parse(t) for t in WLGI3_TABLE[name])
    return InequalitySpec(name, 3, ((1, lead), (-1, a), (-1, b)), 0.0)


@lru_cache(maxsize=None)
def wlgi3_catalog() -> tuple[InequalitySpec, ...]:
    """The 12 listed three-term inequalities followed by their 12 flips."""
    base = [_wlgi3(name) for name in WLGI3_TABLE]
    return tuple(base + [spec.flipped() for spec in base])


def wlgi_n(n: int) -> InequalitySpec:
    """``P(1+, n-) - sum_i P(i+, (i+1)-) <= 0`` over ``n`` times."""
    if int(n) != n or n < 3:
        raise DomainError(f"wlgi-n needs an integer n >= 3, got {n!r}")
    n = int(n)
    terms = [(1, Event(((1, 1), (n, -1))))]
    terms += [(-1, Event(((i, 1), (i + 1, -1)))) for i in range(1, n)]
    return InequalitySpec(f"wlgi-n:{n}", n, tuple(terms), 0.0)


def lgi_bounds(n: int) -> tuple[float, float]:
    """``(lower, upper)`` macrorealist bounds on ``K_n``."""
    if int(n) != n or n < 3:
        raise DomainError(f"lgi needs an integer n >= 3, got {n!r}")
    lower = -n if n % 2 else -(n - 2)
    return float(lower), float(n - 2)


def _lgi_pairs(n: int) -> list[tuple[int, int, int]]:
    """``(sign, i, j)`` for ``K_n = C_21 + C_32 + ... + C_n(n-1) - C_n1``."""
    return [(1, i, i + 1) for i in range(1, n)] + [(-1, 1, n)]


def lgi_spec(n: int) -> InequalitySpec:
    """``K_n`` with each correlator expanded into its four joint probabilities."""
    lower, upper = lgi_bounds(n)
    terms = []
    for sign, i, j in _lgi_pairs(n):
        for oi in (1, -1):
            for oj in (1, -1):
                terms.append((sign * oi * oj, Event(((i, oi), (j, oj)))))
    return InequalitySpec(f"lgi:{n}", n, tuple(terms), upper, lower)


def nsit_spec() -> InequalitySpec:
    """Two-sided equality residual; macrorealism demands exactly zero."""
    terms = (
        (1, Event.parse("2+")),
        (-1, Event.parse("1+,2+")),
        (-1, Event.parse("1-,2+")),
    )
    return InequalitySpec("nsit", 2, terms, 0.0, 0.0)


_NAMED = re.compile(r"^(wlgi-n|lgi):(\d+)$")


def get_spec(name: str) -> InequalitySpec:
    name = name.strip()
    if name == "nsit":
        return nsit_spec()
    base = name[: -len("-flipped")] if name.endswith("-flipped") else name
    if base in WLGI3_TABLE:
        spec = _wlgi3(base)
        return spec.flipped() if base != name else spec
    m = _NAMED.match(name)
    if m:
        kind, n = m.group(1), int(m.group(2))
        return wlgi_n(n) if kind == "wlgi-n" else lgi_spec(n)
    raise UnknownSpecError(f"unknown spec {name!r}; known: {', '.join(spec_names())}, wlgi-n:<n>, lgi:<n>")


def spec_names() -> list[str]:
    return [s.name for s in wlgi3_catalog()] + ["nsit"]


def spec_value(spec: InequalitySpec, theta, phi, tau, lam=1.0):
    """Vectorized criterion value over broadcast parameter arrays."""
    plan = MeasurementPlan(spec.n_times, tau, lam, theta, phi)
    return spec.combine(event_probabilities(plan, spec.events))


def evaluate(spec: InequalitySpec, params: ModelParams) -> ViolationResult:
    value = float(spec_value(spec, params.theta, params.phi, params.tau, params.lam))
    return ViolationResult(params, value, spec.upper_bound)


def lgi_kn(n: int, params: ModelParams) -> ViolationResult:
    """``K_n`` from the correlators of an ``n``-time plan, against ``n - 2``."""
    _, upper = lgi_bounds(n)
    plan = MeasurementPlan.from_params(params, n)
    k = sum(sign * correlation(plan, i, j) for sign, i, j in _lgi_pairs(n))
    return ViolationResult(params, float(k), upper)


def nsit_delta(params: ModelParams) -> float:
    """``P(Q2=+)`` minus its reconstruction from a prior measurement at ``t_1``."""
    return evaluate(nsit_spec(), params).value


def evaluate_named(name: str, params: ModelParams) -> ViolationResult:
    m = _NAMED.match(name.strip())
    if m and m.group(1) == "lgi":
        return lgi_kn(int(m.group(2)), params)
    return evaluate(get_spec(name), params)
