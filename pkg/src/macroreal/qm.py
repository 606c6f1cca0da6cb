"""
Two-level system primitives
---------------------------
Complex 2x2 algebra over the basis ``{|A>, |B>}`` (index 0 and 1), the
oscillation unitary, sharp/unsharp measurement effects and the Lüders
state update.

Matrices are plain ``numpy`` arrays of shape ``(..., 2, 2)``. Every array
function broadcasts over leading axes, which is what lets the optimizer
evaluate a whole parameter grid in one pass. The validated value types
(`QubitState`, `Effect`) wrap single matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, NullEventError

__all__ = [
    "ALGEBRA_TOL",
    "PIPELINE_TOL",
    "NULL_PROBABILITY",
    "IDENTITY",
    "Q_OBSERVABLE",
    "mat_mul",
    "adjoint",
    "trace",
    "conjugate_by",
    "is_hermitian",
    "QubitState",
    "ModelParams",
    "Effect",
    "LudersOutcome",
    "initial_state",
    "initial_density",
    "evolution_unitary",
    "effects",
    "effect_sqrt_diagonal",
    "luders_update",
    "evolve",
]

ALGEBRA_TOL = 1e-12
PIPELINE_TOL = 1e-10
NULL_PROBABILITY = 1e-14

IDENTITY = np.eye(2, dtype=np.complex128)
# Q = |A><A| - |B><B|
Q_OBSERVABLE = np.diag([1.0, -1.0]).astype(np.complex128)


# --- raw 2x2 algebra -------------------------------------------------------

def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched 2x2 product written out element by element.

    Faster than ``a @ b`` for large stacks of 2x2 matrices; broadcasts
    leading axes like ``numpy.matmul``.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    shape = np.broadcast_shapes(a.shape[:-2], b.shape[:-2]) + (2, 2)
    out = np.empty(shape, dtype=np.result_type(a, b, np.complex128))
    a00, a01, a10, a11 = a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1]
    b00, b01, b10, b11 = b[..., 0, 0], b[..., 0, 1], b[..., 1, 0], b[..., 1, 1]
    out[..., 0, 0] = a00 * b00 + a01 * b10
    out[..., 0, 1] = a00 * b01 + a01 * b11
    out[..., 1, 0] = a10 * b00 + a11 * b10
    out[..., 1, 1] = a10 * b01 + a11 * b11
    return out


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(np.asarray(a), -1, -2))


def trace(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    return a[..., 0, 0] + a[..., 1, 1]


def conjugate_by(u: np.ndarray, rho: np.ndarray) -> np.ndarray:
    """Return ``u @ rho @ u^dagger``."""
    return mat_mul(mat_mul(u, rho), adjoint(u))


def is_hermitian(a: np.ndarray, atol: float = ALGEBRA_TOL) -> bool:
    return bool(np.allclose(a, adjoint(a), rtol=0.0, atol=atol))


def _check_range(name: str, value: float, lo: float, hi: float,
                 lo_open: bool = False, atol: float = ALGEBRA_TOL) -> None:
    v = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(v)):
        raise DomainError(f"{name} must be finite, got {value!r}")
    below = v <= lo if lo_open else v < lo - atol
    if np.any(below) or np.any(v > hi + atol):
        bracket = "(" if lo_open else "["
        raise DomainError(f"{name}={value!r} outside {bracket}{lo:g}, {hi:g}]")


# --- value types -----------------------------------------------------------

@dataclass(frozen=True)
class QubitState:
    """Density matrix of the two-level system.

    Construction checks Hermiticity, unit trace and positivity to
    ``ALGEBRA_TOL`` unless ``atol`` is raised by the caller.
    """

    matrix: np.ndarray
    atol: float = ALGEBRA_TOL

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (2, 2):
            raise ValueError(f"density matrix must be 2x2, got shape {m.shape}")
        if not is_hermitian(m, self.atol):
            raise ValueError("density matrix is not Hermitian")
        if abs(trace(m) - 1.0) > self.atol:
            raise ValueError(f"density matrix trace {trace(m).real:.3e} != 1")
        if np.linalg.eigvalsh(m).min() < -self.atol:
            raise ValueError("density matrix has a negative eigenvalue")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def purity(self) -> float:
        return float(trace(mat_mul(self.matrix, self.matrix)).real)

    def populations(self) -> tuple[float, float]:
        return float(self.matrix[0, 0].real), float(self.matrix[1, 1].real)


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of one experimental configuration.

    ``theta`` and ``phi`` fix the initial state, ``tau`` is the phase
    ``Delta E * Delta t`` accumulated between neighbouring measurement
    times (hbar = 1) and ``lam`` is the measurement sharpness.
    """

    theta: float
    phi: float
    tau: float
    lam: float = 1.0

    def __post_init__(self) -> None:
        _check_range("theta", self.theta, 0.0, np.pi / 2)
        _check_range("phi", self.phi, 0.0, 2 * np.pi)
        _check_range("tau", self.tau, 0.0, np.inf)
        _check_range("lambda", self.lam, 0.0, 1.0, lo_open=True)

    def with_lambda(self, lam: float) -> "ModelParams":
        return ModelParams(self.theta, self.phi, self.tau, lam)


@dataclass(frozen=True)
class Effect:
    """One element of a two-outcome POVM together with its square root."""

    operator: np.ndarray
    sqrt_operator: np.ndarray
    outcome: int

    def __post_init__(self) -> None:
        if self.outcome not in (1, -1):
            raise ValueError(f"outcome must be +1 or -1, got {self.outcome!r}")


class LudersOutcome(NamedTuple):
    probability: float
    post_state: QubitState | None


# --- operations ------------------------------------------------------------

def initial_density(theta, phi) -> np.ndarray:
    """Unvalidated ``|psi0><psi0|`` broadcast over array inputs.

    ``|psi0> = cos(theta)|A> + exp(i phi) sin(theta)|B>``.
    """
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c = np.cos(theta)
    s = np.sin(theta)
    shape = np.broadcast_shapes(theta.shape, phi.shape)
    rho = np.empty(shape + (2, 2), dtype=np.complex128)
    coherence = c * s * np.exp(-1j * phi)
    rho[..., 0, 0] = c * c
    rho[..., 0, 1] = coherence
    rho[..., 1, 0] = np.conj(coherence)
    rho[..., 1, 1] = s * s
    return rho


def initial_state(theta: float, phi: float) -> QubitState:
    _check_range("theta", theta, 0.0, np.pi / 2)
    _check_range("phi", phi, 0.0, 2 * np.pi)
    return QubitState(initial_density(theta, phi))


def evolution_unitary(tau) -> np.ndarray:
    """Oscillation unitary ``cos(tau) I - i sin(tau) (|A><B| + |B><A|)``.

    The global phase ``exp(-i (E0 + E') dt)`` is set to one; it cancels in
    every probability. Broadcasts over array ``tau``.
    """
    tau = np.asarray(tau, dtype=float)
    if not np.all(np.isfinite(tau)):
        raise DomainError(f"tau must be finite, got {tau!r}")
    c = np.cos(tau)
    s = -1j * np.sin(tau)
    u = np.empty(tau.shape + (2, 2), dtype=np.complex128)
    u[..., 0, 0] = c
    u[..., 1, 1] = c
    u[..., 0, 1] = s
    u[..., 1, 0] = s
    return u


def effect_sqrt_diagonal(lam, outcome: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal of ``sqrt(F_outcome)`` as two arrays ``(d_A, d_B)``.

    Effects are diagonal in the measured basis, so the Lüders sandwich
    reduces to ``rho_kl * d_k * d_l``.
    """
    lam = np.asarray(lam, dtype=float)
    plus = np.sqrt((1.0 + lam) / 2.0)
    minus = np.sqrt((1.0 - lam) / 2.0)
    return (plus, minus) if outcome == 1 else (minus, plus)


def effects(lam: float) -> tuple[Effect, Effect]:
    """Return ``(F+, F-)`` with ``F± = (I ± lam Q) / 2``."""
    _check_range("lambda", lam, 0.0, 1.0, lo_open=True)
    pair = []
    for outcome in (1, -1):
        op = 0.5 * (IDENTITY + outcome * lam * Q_OBSERVABLE)
        d_a, d_b = effect_sqrt_diagonal(lam, outcome)
        root = np.diag([d_a, d_b]).astype(np.complex128)
        op.setflags(write=False)
        root.setflags(write=False)
        pair.append(Effect(op, root, outcome))
    return pair[0], pair[1]


def luders_update(state: QubitState, effect: Effect,
                  require_state: bool = False) -> LudersOutcome:
    """Apply the generalized Lüders rule for one measurement outcome.

    Returns the outcome probability ``tr(rho F)`` and the normalized
    post-measurement state ``sqrt(F) rho sqrt(F)^dagger / tr(rho F)``.
    When the probability does not exceed ``NULL_PROBABILITY`` the
    post-state is ``None``, or `NullEventError` is raised if
    ``require_state`` is set.
    """
    rho = state.matrix
    p = float(trace(mat_mul(rho, effect.operator)).real)
    if p <= NULL_PROBABILITY:
        if require_state:
            raise NullEventError(
                f"outcome {effect.outcome:+d} has probability {p:.3e}; post-state undefined"
            )
        return LudersOutcome(max(p, 0.0), None)
    root = effect.sqrt_operator
    post = conjugate_by(root, rho) / p
    # restore exact Hermiticity lost to rounding
    post = 0.5 * (post + adjoint(post))
    return LudersOutcome(min(p, 1.0), QubitState(post, atol=PIPELINE_TOL))


def evolve(state: QubitState, tau: float) -> QubitState:
    rho = conjugate_by(evolution_unitary(tau), state.matrix)
    rho = 0.5 * (rho + adjoint(rho))
    return QubitState(rho, atol=PIPELINE_TOL)
