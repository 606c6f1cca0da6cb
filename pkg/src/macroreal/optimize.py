"""
Violation maximization and critical sharpness.

The search runs in two stages. First a dense grid over ``theta`` and
``tau`` with ``phi`` pinned to ``pi/2`` or ``3pi/2`` (the value depends on
``phi`` only through ``sin(phi)``, so these are the only candidate
maximizers). Then coordinate descent with golden-section line searches
refines the best grid point. A coarser grid over the full ``phi`` circle is
refined the same way and must not beat the pinned result; if it does, the
unpinned optimum is reported instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, NonMonotoneError
from .inequalities import InequalitySpec, get_spec, lgi_spec, spec_value, wlgi3_catalog
from .qm import ModelParams
from .sequences import Event, MeasurementPlan, event_probabilities

__all__ = [
    "DEFAULT_GRID",
    "OptimizationReport",
    "CriticalLambda",
    "golden_section_max",
    "coordinate_ascent",
    "maximize_violation",
    "maximize_many",
    "catalog_max",
    "stationarity_check",
    "critical_lambda",
    "lgi_critical_lambda",
    "lgi_max",
]

# (theta points, tau points, phi points of the full-circle fallback)
DEFAULT_GRID = (181, 629, 64)
PINNED_PHI = (np.pi / 2, 3 * np.pi / 2)
VALUE_TOL = 1e-8
FALLBACK_TOL = 1e-6
FD_STEP = 1e-6
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0

_BOUNDS = {
    "theta": (0.0, np.pi / 2),
    "phi": (0.0, 2 * np.pi),
    "tau": (0.0, np.pi),
}


@dataclass(frozen=True)
class OptimizationReport:
    spec_name: str
    lam: float
    best_params: ModelParams
    best_value: float
    grid_resolution: tuple[int, int, int]
    refinement_iterations: int
    gradient_norm_at_optimum: float
    grid_value: float
    fallback_value: float
    phi_pinned: bool

    @property
    def margin(self) -> float:
        return self.best_value - get_spec(self.spec_name).upper_bound


@dataclass(frozen=True)
class CriticalLambda:
    value: float
    violated: bool
    iterations: int


def golden_section_max(f: Callable[[float], float], a: float, b: float,
                       xtol: float = 1e-10) -> tuple[float, float, int]:
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), evaluations)``."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    evals = 2
    while b - a > xtol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        evals += 1
    return (c, fc, evals) if fc >= fd else (d, fd, evals)


def coordinate_ascent(f: Callable[[dict], float], start: dict, steps: dict,
                      tol: float = VALUE_TOL, max_sweeps: int = 200) -> tuple[dict, float, int]:
    """Cyclic coordinate ascent over the keys of ``steps``.

    Each coordinate is line-searched on ``[x - step, x + step]`` clipped to
    its domain. Brackets shrink when a sweep stops improving much, so the
    search settles into narrow ridges instead of stalling on them.
    """
    point = dict(start)
    best = f(point)
    steps = dict(steps)
    sweeps = 0
    while sweeps < max_sweeps:
        sweeps += 1
        before = best
        for key, h in steps.items():
            lo_dom, hi_dom = _BOUNDS[key]
            lo = max(lo_dom, point[key] - h)
            hi = min(hi_dom, point[key] + h)

            def line(x, key=key):
                return f({**point, key: x})

            x, val, _ = golden_section_max(line, lo, hi)
            if val > best:
                point[key], best = x, val
        gain = best - before
        if gain < tol:
            break
        steps = {k: max(h * 0.5, 1e-6) if gain < 1e-4 else h for k, h in steps.items()}
    return point, best, sweeps


def _grids(resolution: tuple[int, int, int], pinned: bool):
    n_theta, n_tau, n_phi = resolution
    if not pinned:
        n_theta, n_tau = max(n_theta // 4, 2) + 1, max(n_tau // 4, 2)
    theta = np.linspace(0.0, np.pi / 2, n_theta)
    tau = np.pi * (np.arange(n_tau) + 0.5) / n_tau
    phi = np.array(PINNED_PHI) if pinned else 2 * np.pi * np.arange(n_phi) / n_phi
    return theta, phi, tau


def _grid_table(specs: Sequence[InequalitySpec], lam: float, theta, phi, tau) -> list[np.ndarray]:
    n_times = max(s.n_times for s in specs)
    plan = MeasurementPlan(n_times, tau[None, None, :], lam, theta[:, None, None], phi[None, :, None])
    events: list[Event] = [ev for s in specs for ev in s.events]
    probs = event_probabilities(plan, events)
    return [s.combine(probs) for s in specs]


def _scalar_objective(spec: InequalitySpec, lam: float):
    def f(p: dict) -> float:
        return float(spec_value(spec, p["theta"], p["phi"], p["tau"], lam))

    return f


def _gradient_norm(f, point: dict, keys: Sequence[str], h: float = FD_STEP) -> float:
    sq = 0.0
    for key in keys:
        lo, hi = _BOUNDS[key]
        up = min(point[key] + h, hi)
        dn = max(point[key] - h, lo)
        sq += ((f({**point, key: up}) - f({**point, key: dn})) / (up - dn)) ** 2
    return math.sqrt(sq)


def _refine(spec, lam, start: dict, keys: Sequence[str], resolution) -> tuple[dict, float, int]:
    n_theta, n_tau, n_phi = resolution
    spacing = {
        "theta": (np.pi / 2) / max(n_theta - 1, 1),
        "tau": np.pi / n_tau,
        "phi": 2 * np.pi / n_phi,
    }
    f = _scalar_objective(spec, lam)
    steps = {k: 2.0 * spacing[k] for k in keys}
    return coordinate_ascent(f, start, steps)


def maximize_many(specs: Sequence[InequalitySpec], lam: float = 1.0,
                  grid: tuple[int, int, int] = DEFAULT_GRID,
                  refine_within: float | None = None) -> list[OptimizationReport | None]:
    """Maximize several specs, sharing event probabilities on the grids.

    With ``refine_within`` set, only specs whose grid maximum comes within
    that distance of the best grid maximum are refined; the others get
    ``None``.
    """
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"lambda={lam!r} outside (0, 1]")
    grid = tuple(int(g) for g in grid)
    if len(grid) != 3 or min(grid) < 2:
        raise DomainError(f"grid must be three integers >= 2, got {grid!r}")

    pinned_axes = _grids(grid, pinned=True)
    free_axes = _grids(grid, pinned=False)
    pinned_vals = _grid_table(specs, lam, *pinned_axes)
    free_vals = _grid_table(specs, lam, *free_axes)
    grid_max = [float(v.max()) for v in pinned_vals]
    cutoff = -np.inf if refine_within is None else max(grid_max) - refine_within

    reports: list[OptimizationReport | None] = []
    for spec, pv, fv, gmax in zip(specs, pinned_vals, free_vals, grid_max):
        if gmax < cutoff:
            reports.append(None)
            continue
        # first maximal entry in C order = lexicographic (theta, phi, tau) tie-break
        i, j, k = np.unravel_index(np.argmax(pv), pv.shape)
        start = {"theta": pinned_axes[0][i], "phi": pinned_axes[1][j], "tau": pinned_axes[2][k]}
        point, best, sweeps = _refine(spec, lam, start, ("theta", "tau"), grid)

        i, j, k = np.unravel_index(np.argmax(fv), fv.shape)
        fstart = {"theta": free_axes[0][i], "phi": free_axes[1][j], "tau": free_axes[2][k]}
        fpoint, fbest, fsweeps = _refine(spec, lam, fstart, ("theta", "phi", "tau"), grid)

        keys: tuple[str, ...] = ("theta", "tau")
        pinned_ok = fbest <= best + FALLBACK_TOL
        if not pinned_ok:
            point, best, keys = fpoint, fbest, ("theta", "phi", "tau")
        f = _scalar_objective(spec, lam)
        reports.append(OptimizationReport(
            spec_name=spec.name,
            lam=float(lam),
            best_params=ModelParams(*(float(point[k]) for k in ("theta", "phi", "tau")), lam),
            best_value=float(best),
            grid_resolution=grid,
            refinement_iterations=sweeps + fsweeps,
            gradient_norm_at_optimum=_gradient_norm(f, point, keys),
            grid_value=gmax,
            fallback_value=float(fbest),
            phi_pinned=pinned_ok,
        ))
    return reports


def maximize_violation(spec_name: str, lam: float = 1.0,
                       grid: tuple[int, int, int] = DEFAULT_GRID) -> OptimizationReport:
    """Largest value of the named criterion over ``(theta, phi, tau)`` at sharpness ``lam``."""
    return maximize_many([get_spec(spec_name)], lam, grid)[0]


def catalog_max(lam: float = 1.0, grid: tuple[int, int, int] = DEFAULT_GRID,
                refine_within: float = 1e-2) -> OptimizationReport:
    """Best report over all 24 three-term Wigner-form inequalities.

    Specs whose grid maximum trails the leader by more than
    ``refine_within`` cannot overtake it after refinement and are skipped.
    """
    reports = maximize_many(wlgi3_catalog(), lam, grid, refine_within=refine_within)
    done = [r for r in reports if r is not None]
    return max(done, key=lambda r: r.best_value)


def stationarity_check(theta: float, tau: float, phi: float,
                       h: float = FD_STEP) -> tuple[float, float]:
    """Central differences ``(df/dtau, df/dtheta)`` of the sharp ``wlgi3-4`` value."""
    if not any(abs(phi - p) < 1e-6 for p in PINNED_PHI):
        raise DomainError(f"phi must be pi/2 or 3pi/2, got {phi!r}")
    spec = get_spec("wlgi3-4")

    def f(t, s):
        return float(spec_value(spec, t, phi, s, 1.0))

    d_tau = (f(theta, tau + h) - f(theta, tau - h)) / (2 * h)
    d_theta = (f(theta + h, tau) - f(theta - h, tau)) / (2 * h)
    return d_tau, d_theta


def _lambda_profile(spec: InequalitySpec, theta, phi, tau):
    def value(lam):
        return spec_value(spec, theta, phi, tau, lam)
    return value


def critical_lambda(spec_name: str, params_at_max: tuple[float, float, float],
                    xtol: float = 1e-10, samples: int = 100) -> CriticalLambda:
    """Smallest sharpness at which the criterion is violated at a fixed point.

    ``params_at_max`` is ``(theta, phi, tau)``. The profile is sampled on
    ``samples`` points first. A profile that never exceeds the bound gives
    ``value=1, violated=False``. Otherwise it must be non-decreasing and the
    root of ``value(lam) = upper_bound`` is bracketed by bisection.
    """
    spec = get_spec(spec_name)
    theta, phi, tau = params_at_max
    profile = _lambda_profile(spec, theta, phi, tau)
    lams = np.linspace(1.0 / samples, 1.0, samples)
    vals = np.asarray(profile(lams)) - spec.upper_bound
    if np.all(vals <= 0.0):
        return CriticalLambda(1.0, False, 0)
    if np.any(np.diff(vals) < -1e-12):
        raise NonMonotoneError(
            f"{spec_name}: lambda profile is not monotone at {params_at_max}; scan it instead"
        )
    lo, hi = 1e-12, 1.0
    if float(profile(lo)) - spec.upper_bound > 0.0:
        return CriticalLambda(lo, True, 0)
    it = 0
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if float(profile(mid)) - spec.upper_bound > 0.0:
            hi = mid
        else:
            lo = mid
        it += 1
    return CriticalLambda(0.5 * (lo + hi), True, it)


def lgi_critical_lambda(n: int) -> float:
    """Sharpness below which no ``n``-term LGI can be violated."""
    if int(n) != n or n < 3:
        raise DomainError(f"lgi needs an integer n >= 3, got {n!r}")
    return math.sqrt((n - 2) / (n * math.cos(math.pi / n)))


def lgi_max(n: int, lam: float = 1.0, n_tau: int = 4001) -> tuple[float, float]:
    """Maximum of ``K_n`` over the time spacing, as ``(K_max, tau)``.

    ``K_n`` does not depend on the initial state, so ``theta = phi = 0``.
    """
    spec = lgi_spec(n)
    tau = np.pi * (np.arange(n_tau) + 0.5) / n_tau
    vals = spec_value(spec, 0.0, 0.0, tau, lam)
    k = int(np.argmax(vals))
    h = np.pi / n_tau
    x, best, _ = golden_section_max(
        lambda t: float(spec_value(spec, 0.0, 0.0, t, lam)),
        max(tau[k] - h, 0.0), min(tau[k] + h, np.pi),
    )
    return float(best), float(x)
