"""Parameter sweeps, violation-window location and six-angle searches."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import root

from .core import EulerAngles, InvalidInputError
from .lgi import (
    ANGLE_NAMES,
    DichotomicMap,
    EvolutionConfig,
    LgiReport,
    evaluate_batch,
    joint_unambiguous,
    lgi_report,
    marginal_distribution,
    signalling_deltas,
)

OBJECTIVES = ("max-violation", "max-k")


@dataclass(frozen=True)
class SweepSpec:
    base: EvolutionConfig
    param: str = "theta2"
    start: float = 0.0
    end: float = math.pi
    steps: int = 101

    def __post_init__(self):
        if self.param not in ANGLE_NAMES:
            raise InvalidInputError(f"unknown sweep parameter {self.param!r}")
        if int(self.steps) != self.steps or self.steps < 2:
            raise InvalidInputError("steps must be an integer >= 2")
        if not (math.isfinite(self.start) and math.isfinite(self.end)):
            raise InvalidInputError("sweep range must be finite")
        if self.start == self.end:
            raise InvalidInputError("sweep range is empty (start == end)")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.end, int(self.steps))


def sweep(spec: SweepSpec, qmap: DichotomicMap = DichotomicMap()) -> list[tuple[float, LgiReport]]:
    return [(float(v), lgi_report(spec.base.with_angle(spec.param, v), qmap)) for v in spec.values()]


@dataclass(frozen=True)
class ViolationWindow:
    param: str
    intervals: tuple[tuple[float, float], ...]

    def __bool__(self) -> bool:
        return bool(self.intervals)


def find_violation_window(
    spec: SweepSpec, refine_tol: float = 1e-4 * math.pi, qmap: DichotomicMap = DichotomicMap()
) -> ViolationWindow:
    """Intervals of the swept angle where K_A > 1 + Delta_A.

    Sign changes between adjacent sweep points are bisected down to
    ``refine_tol``; each endpoint is the midpoint of its final bracket.
    """
    if not refine_tol > 0:
        raise InvalidInputError("refine_tol must be positive")

    def g(x: float) -> float:
        return lgi_report(spec.base.with_angle(spec.param, x), qmap).violation

    xs = spec.values()
    inside = [g(x) > 0 for x in xs]

    def crossing(lo: float, hi: float, lo_inside: bool) -> float:
        while abs(hi - lo) > refine_tol:
            mid = 0.5 * (lo + hi)
            if (g(mid) > 0) == lo_inside:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    intervals = []
    left = float(xs[0]) if inside[0] else None
    for i in range(1, len(xs)):
        if inside[i] == inside[i - 1]:
            continue
        x = crossing(float(xs[i - 1]), float(xs[i]), inside[i - 1])
        if inside[i]:
            left = x
        else:
            intervals.append((left, x))
            left = None
    if left is not None:
        intervals.append((left, float(xs[-1])))
    if spec.start > spec.end:
        intervals = sorted((min(a, b), max(a, b)) for a, b in intervals)
    return ViolationWindow(spec.param, tuple(intervals))


@dataclass(frozen=True)
class SearchSpec:
    """Search box and objective; the initial state is always |C>."""

    bounds: tuple[tuple[float, float], ...] = ((0.0, math.pi),) * 6
    objective: str = "max-violation"
    penalty: float = 0.0
    resolution: int = 8
    tol: float = 1e-9
    max_evals: int = 2_000_000

    def __post_init__(self):
        if len(self.bounds) != 6:
            raise InvalidInputError("need bounds for all six angles")
        for lo, hi in self.bounds:
            if not (math.isfinite(lo) and math.isfinite(hi)) or lo > hi:
                raise InvalidInputError(f"invalid bounds ({lo}, {hi})")
        if self.objective not in OBJECTIVES:
            raise InvalidInputError(f"objective must be one of {OBJECTIVES}")
        if not self.penalty >= 0:
            raise InvalidInputError("penalty weight must be >= 0")
        if self.resolution < 2:
            raise InvalidInputError("resolution must be >= 2")
        if not self.tol > 0:
            raise InvalidInputError("tol must be positive")
        if self.max_evals < 1:
            raise InvalidInputError("max_evals must be >= 1")


@dataclass(frozen=True)
class SearchResult:
    config: EvolutionConfig
    report: LgiReport
    objective: float
    grid_best: float
    evaluations: int
    converged: bool


def objective_value(report: LgiReport, objective: str, penalty: float) -> float:
    gain = report.violation if objective == "max-violation" else report.K
    return gain - penalty * (report.Delta + report.Delta_A)


def _grid_axes(spec: SearchSpec) -> list[np.ndarray]:
    return [np.array([lo]) if lo == hi else np.linspace(lo, hi, spec.resolution) for lo, hi in spec.bounds]


def _reduce_pi(x: float) -> tuple[int, float]:
    """(k, r) with x = r + k*pi and r in [0, pi); values that round onto pi fold to 0."""
    k = math.floor(x / math.pi)
    r = x - k * math.pi
    if r < 0.0:
        k, r = k - 1, r + math.pi
    if r >= math.pi:
        k, r = k + 1, 0.0
    return k, r


def canonical_final_angles(theta: float, chi: float, phi: float) -> tuple[float, float, float]:
    """Equivalent U32 angles in [0, pi)^3.

    Shifting chi or phi by pi changes U only by a left diagonal sign matrix
    (together with sign flips of the outer angles), which no detection
    probability can see when U is the last operation before detection.
    """
    k, phi = _reduce_pi(phi)
    if k % 2:
        theta, chi = -theta, -chi
    k, chi = _reduce_pi(chi)
    if k % 2:
        theta = -theta
    _, theta = _reduce_pi(theta)
    return theta, chi, phi


# U32 angles re-solved to keep delta(n3) = 0 during constrained refinement
_DEPENDENT = (4, 5)
_N_STARTS = 32


def _real_unitary(theta: float, chi: float, phi: float) -> tuple[tuple[float, ...], ...]:
    """Closed form of R23(theta) R13(chi) R12(phi)."""
    ct, st = math.cos(theta), math.sin(theta)
    cc, sc = math.cos(chi), math.sin(chi)
    cp, sp = math.cos(phi), math.sin(phi)
    row0 = (cc * cp, cc * sp, sc)
    row1, row2 = (-sp, cp, 0.0), (-sc * cp, -sc * sp, cc)
    return (
        row0,
        tuple(ct * a + st * b for a, b in zip(row1, row2)),
        tuple(-st * a + ct * b for a, b in zip(row1, row2)),
    )


def _signalling_residual(dep: np.ndarray, x: np.ndarray) -> list[float]:
    """delta(A), delta(B) for initial state |C>; delta(C) follows from the sum rule."""
    z = list(x)
    z[_DEPENDENT[0]], z[_DEPENDENT[1]] = dep
    mid = [row[2] for row in _real_unitary(*z[:3])]
    u2 = _real_unitary(*z[3:])
    out = []
    for row in u2[:2]:
        terms = [u * m for u, m in zip(row, mid)]
        out.append(sum(terms) ** 2 - sum(t * t for t in terms))
    return out


def _project_nsit(x: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray | None:
    dep = list(_DEPENDENT)
    sol = root(_signalling_residual, x[dep], args=(x,), method="hybr", tol=1e-14)
    if not sol.success or np.max(np.abs(_signalling_residual(sol.x, x))) > 1e-12:
        return None
    z = x.copy()
    z[dep] = sol.x
    z[3:] = canonical_final_angles(*z[3:])
    if np.any(z < lo) or np.any(z > hi):
        return None
    return z


class _Budget:
    def __init__(self, limit: int, used: int):
        self.limit = limit
        self.used = used

    @property
    def exhausted(self) -> bool:
        return self.used >= self.limit


def _coordinate_descent(x, fx, rep, f, axes, step, lo, hi, tol, budget: _Budget, project=None):
    """Cyclic single-axis moves; all steps halve after a sweep with no improvement."""
    step = step.copy()
    while axes and step[axes].max() >= tol:
        improved = False
        for k in axes:
            for sign in (1.0, -1.0):
                if budget.exhausted:
                    return x, fx, rep, False
                trial = x.copy()
                trial[k] = np.clip(x[k] + sign * step[k], lo[k], hi[k])
                if trial[k] == x[k]:
                    continue
                if project is not None:
                    trial = project(trial)
                    if trial is None:
                        continue
                ft, rt = f(trial)
                budget.used += 1
                if ft > fx:
                    x, fx, rep = trial, ft, rt
                    improved = True
                    break
        if not improved:
            step *= 0.5
    return x, fx, rep, True


def search_max_violation(spec: SearchSpec, qmap: DichotomicMap = DichotomicMap()) -> SearchResult:
    """Coarse grid scan followed by derivative-free coordinate descent.

    The first grid maximum in lexicographic angle order wins ties and seeds a
    plain coordinate descent on the objective.  With a positive signalling
    penalty the objective has a kink along the zero-signalling set that
    single-axis moves cannot follow, so a second stage restarts from the
    most-violating grid points projected onto that set (chi2, phi2 re-solved
    after every move) and descends over the remaining angles.  Running out of
    ``max_evals`` returns the best point so far with ``converged=False``.
    """
    axes = _grid_axes(spec)
    n_grid = math.prod(len(a) for a in axes)
    n_scan = min(n_grid, spec.max_evals)

    best_idx, best_val = 0, -math.inf
    gains = []
    chunk = 1 << 15
    points = itertools.product(*axes)
    done = 0
    while done < n_scan:
        block = np.array(list(itertools.islice(points, min(chunk, n_scan - done))))
        m = evaluate_batch(block, qmap=qmap)
        gain = m["K_A"] - 1 - m["Delta_A"] if spec.objective == "max-violation" else m["K"]
        vals = gain - spec.penalty * (m["Delta"] + m["Delta_A"])
        gains.append(gain)
        i = int(np.argmax(vals))
        if vals[i] > best_val:
            best_idx, best_val = done + i, float(vals[i])
        done += len(block)

    def grid_point(idx: int) -> np.ndarray:
        return np.array(next(itertools.islice(itertools.product(*axes), idx, None)), dtype=float)

    def f(point) -> tuple[float, LgiReport]:
        rep = lgi_report(EvolutionConfig.from_angles(point), qmap)
        return objective_value(rep, spec.objective, spec.penalty), rep

    x = grid_point(best_idx)
    fx, rep = f(x)
    grid_best = fx
    if n_scan < n_grid:
        return SearchResult(EvolutionConfig.from_angles(x), rep, fx, grid_best, n_scan, False)

    budget = _Budget(spec.max_evals, n_scan)
    lo = np.array([b[0] for b in spec.bounds])
    hi = np.array([b[1] for b in spec.bounds])
    step = (hi - lo) / (spec.resolution - 1)
    free = [k for k in range(6) if step[k] > 0]
    x, fx, rep, converged = _coordinate_descent(x, fx, rep, f, free, step, lo, hi, spec.tol, budget)

    dependent_free = all(step[k] > 0 for k in _DEPENDENT)
    if converged and spec.penalty > 0 and dependent_free:
        gain = np.concatenate(gains)
        _, first = np.unique(np.round(gain, 12), return_index=True)
        starts = first[np.argsort(-gain[first], kind="stable")][:_N_STARTS]
        independent = [k for k in free if k not in _DEPENDENT]

        def project(point):
            return _project_nsit(point, lo, hi)

        for idx in sorted(starts, key=lambda i: (-gain[i], i)):
            if budget.exhausted:
                converged = False
                break
            start = project(grid_point(int(idx)))
            if start is None:
                continue
            fs, rs = f(start)
            budget.used += 1
            if not fs > fx:
                continue
            x, fx, rep, converged = _coordinate_descent(
                start, fs, rs, f, independent, step, lo, hi, spec.tol, budget, project
            )
            if not converged:
                break
    return SearchResult(EvolutionConfig.from_angles(x), rep, fx, grid_best, budget.used, converged)


def solve_nsit_angles(theta: float, chi_guess: float, phi_guess: float) -> EulerAngles:
    """Angles (theta fixed) at which U21 = U32 = U(theta, chi, phi) acting on |C>
    gives delta(n3) = 0 for every n3, located from a nearby guess."""

    def residual(x):
        cfg = EvolutionConfig(EulerAngles(theta, *x), EulerAngles(theta, *x))
        delta, _ = signalling_deltas(marginal_distribution(cfg), joint_unambiguous(cfg))
        # delta sums to zero, so two components carry all the constraints
        return delta[:2]

    sol = root(residual, [chi_guess, phi_guess], method="hybr", tol=1e-15)
    if not sol.success or np.max(np.abs(residual(sol.x))) > 1e-13:
        raise InvalidInputError(f"no zero-signalling point near ({chi_guess}, {phi_guess}): {sol.message}")
    return EulerAngles(theta, float(sol.x[0]), float(sol.x[1]))
