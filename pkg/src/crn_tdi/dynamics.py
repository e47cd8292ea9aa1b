"""Simulation of variable-k power-law systems and empirical persistence diagnostics."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import RK45

from .egraph import EGraph
from .tdi import drift

# Dormand-Prince 5(4) tableau and dense-output matrix, shared with scipy
_A, _B, _C, _E, _P = RK45.A, RK45.B, RK45.C, RK45.E, RK45.P
_ORDER = 4


class IntegrationError(RuntimeError):
    def __init__(self, message: str, t: float, state: np.ndarray):
        super().__init__(f"{message} at t={t:.6g}")
        self.t, self.state = t, state


# ---------------------------------------------------------------------- rate schedules
@dataclass(frozen=True)
class Constant:
    value: float

    def __call__(self, t: float) -> float:
        return self.value


@dataclass(frozen=True)
class PiecewiseConstant:
    """``values[i]`` on [breaks[i-1], breaks[i]); breaks increasing, len(values) = len(breaks)+1."""

    breaks: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) != len(self.breaks) + 1:
            raise ValueError("need one more value than breakpoints")
        if any(b >= c for b, c in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breakpoints must increase strictly")

    def __call__(self, t: float) -> float:
        return self.values[int(np.searchsorted(self.breaks, t, side="right"))]


@dataclass(frozen=True)
class ClippedSinusoid:
    amplitude: float
    omega: float
    phase: float = 0.0

    def __call__(self, t: float) -> float:
        return math.exp(self.amplitude * math.sin(self.omega * t + self.phase))


@dataclass(frozen=True)
class RateSchedule:
    """Per-edge rate functions, clamped into [epsilon, 1/epsilon]."""

    epsilon: float
    rates: tuple[Callable[[float], float], ...]

    def __post_init__(self):
        if not 0 < self.epsilon <= 1:
            raise ValueError("epsilon must lie in (0, 1]")
        lo, hi = self.epsilon, 1 / self.epsilon
        for r in self.rates:
            fixed = [r.value] if isinstance(r, Constant) else (
                r.values if isinstance(r, PiecewiseConstant) else [])
            if any(not lo <= v <= hi for v in fixed):
                raise ValueError(f"rate value outside [{lo:g}, {hi:g}]")

    @classmethod
    def constant(cls, values: Sequence[float], epsilon: float | None = None) -> "RateSchedule":
        values = [float(v) for v in values]
        if epsilon is None:
            epsilon = min([1.0] + [min(v, 1 / v) for v in values])
        return cls(epsilon, tuple(Constant(v) for v in values))

    @classmethod
    def random_sinusoids(cls, n_edges: int, epsilon: float, rng, omega: float = 1.0):
        """One clipped sinusoid per edge, amplitude log(1/eps), random phase."""
        amp = math.log(1 / epsilon) if epsilon < 1 else 0.0
        return cls(epsilon, tuple(ClippedSinusoid(amp, omega, float(rng.uniform(0, 2 * math.pi)))
                                  for _ in range(n_edges)))

    def __call__(self, t: float) -> np.ndarray:
        k = np.array([r(t) for r in self.rates], dtype=float)
        return np.clip(k, self.epsilon, 1 / self.epsilon)


# ---------------------------------------------------------------------- integration
@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _rms(x):
    return float(np.sqrt(np.mean(x * x))) if x.size else 0.0


def integrate(G: EGraph, schedule: RateSchedule, x0: Sequence[float], t_end: float,
              rtol: float = 1e-6, atol: float | None = None, n_report: int = 200,
              max_steps: int = 1_000_000) -> Trajectory:
    """Adaptive Dormand-Prince 5(4) with positivity-preserving step rejection.

    Any step whose stages, endpoint or dense-output samples leave the open
    positive orthant is rejected and retried with half the step.
    """
    x = np.array(x0, dtype=float)
    if x.shape != (G.dim,):
        raise ValueError(f"initial state has shape {x.shape}, expected ({G.dim},)")
    if np.any(x <= 0):
        raise ValueError("initial state must be strictly positive")
    if not t_end > 0:
        raise ValueError("t_end must be positive")
    if len(schedule.rates) != len(G.edges):
        raise ValueError("schedule must provide one rate per edge")
    atol = rtol * 1e-3 if atol is None else atol
    n_report = max(200, int(n_report))
    report = np.linspace(0.0, t_end, n_report + 1)

    def f(t, y):
        return drift(G, schedule(t), y)

    t = 0.0
    k1 = f(t, x)
    scale = atol + rtol * np.abs(x)
    d0, d1 = _rms(x / scale), _rms(k1 / scale)
    h = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h = min(h, t_end)
    times, states = [0.0], [x.copy()]
    ri = 1
    steps = rejected = 0
    K = np.empty((len(_C) + 1, G.dim))
    while t < t_end:
        if steps >= max_steps:
            raise IntegrationError("maximum number of steps exceeded", t, x)
        h_min = 16 * np.spacing(max(1.0, t))
        if h < h_min:
            raise IntegrationError("step size underflow", t, x)
        last = t + h >= t_end
        if last:
            h = t_end - t
        K[0] = k1
        ok = True
        for s in range(1, len(_C)):
            y = x + h * (K[:s].T @ _A[s, :s])
            if np.any(y <= 0):
                ok = False
                break
            K[s] = f(t + _C[s] * h, y)
        if ok:
            x_new = x + h * (K[:-1].T @ _B)
            ok = bool(np.all(x_new > 0))
        if not ok:
            h *= 0.5
            rejected += 1
            continue
        K[-1] = f(t + h, x_new)
        scale = atol + rtol * np.maximum(np.abs(x), np.abs(x_new))
        err = _rms((h * (K.T @ _E)) / scale)
        if err > 1:
            h *= max(0.2, 0.9 * err ** (-1 / (_ORDER + 1)))
            rejected += 1
            continue
        t_new = t_end if last else t + h
        dense = []
        Q = K.T @ _P
        while ri < len(report) and report[ri] <= t_new:
            if ri == len(report) - 1:
                dense.append((t_end, x_new.copy()))
            else:
                th = (report[ri] - t) / h
                dense.append((report[ri], x + h * (Q @ (th ** np.arange(1, Q.shape[1] + 1)))))
            ri += 1
        if any(np.any(y <= 0) for _, y in dense):
            h *= 0.5
            rejected += 1
            ri -= len(dense)
            continue
        for tt, y in dense:
            times.append(float(tt))
            states.append(y)
        t, x, k1 = t_new, x_new, K[-1].copy()
        steps += 1
        factor = 5.0 if err == 0 else min(5.0, 0.9 * err ** (-1 / (_ORDER + 1)))
        h *= factor
    meta = {"method": "dopri5", "rtol": rtol, "atol": atol, "steps": steps,
            "rejected": rejected, "epsilon": schedule.epsilon}
    return Trajectory(np.array(times), np.array(states), meta)


# ---------------------------------------------------------------------- diagnostics
@dataclass
class PersistenceReport:
    """Empirical diagnostic only; low minima suggest but never prove extinction."""

    species: tuple[str, ...]
    running_min: np.ndarray
    minima: np.ndarray
    global_min: float
    residual: float
    floor: float
    flagged: tuple[str, ...]

    def to_json(self) -> dict:
        return {"kind": "empirical diagnostic",
                "minima": dict(zip(self.species, map(float, self.minima))),
                "global_min": self.global_min, "class_residual": self.residual,
                "floor": self.floor, "below_floor": list(self.flagged)}


def class_residual(states: np.ndarray, G: EGraph) -> float:
    """max_t dist(x(t) - x(0), S) for the stoichiometric subspace S."""
    diff = np.asarray(states, dtype=float) - states[0]
    E = np.array(G.edge_vectors, dtype=float).reshape(len(G.edges), G.dim)
    if E.size:
        u, sv, vt = np.linalg.svd(E, full_matrices=False)
        basis = vt[sv > 1e-12 * sv.max()]
        diff = diff - (diff @ basis.T) @ basis
    return float(np.max(np.linalg.norm(diff, axis=1), initial=0.0))


def persistence_report(traj: Trajectory, G: EGraph, floor: float = 1e-8) -> PersistenceReport:
    running = np.minimum.accumulate(traj.states, axis=0)
    minima = running[-1]
    names = G.species_names()
    flagged = tuple(n for n, m in zip(names, minima) if m < floor)
    return PersistenceReport(names, running, minima, float(minima.min()),
                             class_residual(traj.states, G), floor, flagged)


def write_csv(traj: Trajectory, fh) -> None:
    """``t,x1,...,xn`` rows with %.12g formatting."""
    n = traj.states.shape[1]
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(["t"] + [f"x{i + 1}" for i in range(n)])
    for t, x in zip(traj.times, traj.states):
        w.writerow(["%.12g" % t] + ["%.12g" % v for v in x])
