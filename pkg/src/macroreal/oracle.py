"""
Brute-force macrorealist checker.

A macrorealist model assigns an overall joint distribution to the outcomes
``(Q_1, ..., Q_n)``; the set of such distributions is the convex hull of
the ``2**n`` deterministic assignments. A linear criterion therefore
attains its classical extremes on an assignment, and enumerating them
decides validity exactly. Everything here is integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import DomainError, ResourceError
from .inequalities import InequalitySpec, lgi_spec, wlgi3_catalog, wlgi_n

__all__ = [
    "MAX_TIMES",
    "Assignment",
    "assignments",
    "classical_max",
    "classical_min",
    "classical_range",
    "residual_terms",
    "CertificationEntry",
    "CertificationReport",
    "certify",
    "certify_catalog",
]

MAX_TIMES = 24
_CHUNK = 1 << 16

Assignment = tuple[int, ...]


def _outcome_block(n: int, start: int, stop: int) -> np.ndarray:
    """Rows ``start..stop-1`` of the lexicographic ±1 table, ``+`` first."""
    idx = np.arange(start, stop, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    bits = (idx[:, None] >> shifts) & 1
    return (1 - 2 * bits).astype(np.int8)


def assignments(n: int) -> Iterator[Assignment]:
    """All deterministic outcome assignments in lexicographic order."""
    for start in range(0, 1 << n, _CHUNK):
        for row in _outcome_block(n, start, min(start + _CHUNK, 1 << n)):
            yield tuple(int(v) for v in row)


def _guard(n: int) -> None:
    if n > MAX_TIMES:
        raise ResourceError(f"n_times={n} exceeds enumeration limit {MAX_TIMES}")


def _block_values(spec: InequalitySpec, block: np.ndarray) -> np.ndarray:
    total = np.zeros(block.shape[0], dtype=np.int64)
    for sign, ev in spec.terms:
        hit = np.ones(block.shape[0], dtype=bool)
        for i, o in ev.outcomes:
            hit &= block[:, i - 1] == o
        total += sign * hit.astype(np.int64)
    return total


def classical_range(spec: InequalitySpec) -> tuple[int, int]:
    """Exact ``(min, max)`` of the criterion over all assignments."""
    n = spec.n_times
    _guard(n)
    lo, hi = None, None
    for start in range(0, 1 << n, _CHUNK):
        vals = _block_values(spec, _outcome_block(n, start, min(start + _CHUNK, 1 << n)))
        bmin, bmax = int(vals.min()), int(vals.max())
        lo = bmin if lo is None else min(lo, bmin)
        hi = bmax if hi is None else max(hi, bmax)
    return lo, hi


def classical_max(spec: InequalitySpec) -> int:
    return classical_range(spec)[1]


def classical_min(spec: InequalitySpec) -> int:
    return classical_range(spec)[0]


def residual_terms(n: int) -> tuple[dict[Assignment, int], int]:
    """Per-assignment weight left over in the n-term chain identity.

    ``c(v) = sum_i [v_i=+, v_{i+1}=-] - [v_1=+, v_n=-]``. Summing the
    adjacent-pair marginals and subtracting the ``(1+, n-)`` marginal leaves
    ``sum_v c(v) rho(v)``; every ``c(v)`` is non-negative, which is the
    n-term Wigner-form inequality.
    """
    if int(n) != n or not 3 <= n <= 20:
        raise DomainError(f"residual_terms needs 3 <= n <= 20, got {n!r}")
    n = int(n)
    table = _outcome_block(n, 0, 1 << n)
    plus = table == 1
    coeff = np.zeros(table.shape[0], dtype=np.int64)
    for i in range(n - 1):
        coeff += plus[:, i] & ~plus[:, i + 1]
    coeff -= plus[:, 0] & ~plus[:, n - 1]
    mapping = {tuple(int(v) for v in row): int(c) for row, c in zip(table, coeff)}
    return mapping, int(coeff.sum())


@dataclass(frozen=True)
class CertificationEntry:
    name: str
    declared_upper: float
    classical_max: int
    declared_lower: float | None
    classical_min: int
    passed: bool

    def __str__(self) -> str:
        lo = "" if self.declared_lower is None else (
            f" lower={self.declared_lower:g} classical_min={self.classical_min}"
        )
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name} upper={self.declared_upper:g} classical_max={self.classical_max}{lo}"


def certify(spec: InequalitySpec, tight: bool = False) -> CertificationEntry:
    """Check the declared bounds against the enumerated classical range.

    With ``tight`` the declared bounds must equal the classical extremes,
    not merely contain them.
    """
    lo, hi = classical_range(spec)
    ok = hi <= spec.upper_bound
    if spec.lower_bound is not None:
        ok = ok and lo >= spec.lower_bound
    if tight:
        ok = ok and hi == spec.upper_bound
        if spec.lower_bound is not None:
            ok = ok and lo == spec.lower_bound
    return CertificationEntry(spec.name, spec.upper_bound, hi, spec.lower_bound, lo, ok)


@dataclass(frozen=True)
class CertificationReport:
    wlgi3: tuple[CertificationEntry, ...]
    wlgi_chain: tuple[CertificationEntry, ...]
    lgi: tuple[CertificationEntry, ...]

    @property
    def entries(self) -> tuple[CertificationEntry, ...]:
        return self.wlgi3 + self.wlgi_chain + self.lgi

    @property
    def passed(self) -> bool:
        return all(e.passed for e in self.entries)

    def summary(self) -> str:
        def span(group):
            names = [e.name.split(":")[1] for e in group]
            word = "certified" if all(e.passed for e in group) else "FAILED"
            return f"{names[0]}..{names[-1]}", word

        ok3 = sum(e.passed for e in self.wlgi3)
        chain_span, chain_word = span(self.wlgi_chain)
        lgi_span, lgi_word = span(self.lgi)
        return (
            f"{ok3}/{len(self.wlgi3)} WLGI-3 certified, "
            f"wlgi-n {chain_span} {chain_word}, lgi {lgi_span} bounds {lgi_word}"
        )


def certify_catalog(n_range: range = range(3, 9)) -> CertificationReport:
    """Certify the 24 three-term specs, the chain for ``n_range`` and LGI bounds.

    LGI bounds are checked for tightness as well as validity.
    """
    return CertificationReport(
        tuple(certify(s) for s in wlgi3_catalog()),
        tuple(certify(wlgi_n(n)) for n in n_range),
        tuple(certify(lgi_spec(n), tight=True) for n in n_range),
    )
