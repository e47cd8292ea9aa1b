"""Embedding endotactic dynamics into toric differential inclusions, and refuting it.

Given an endotactic E-graph, :func:`embedding_parameters` produces a fan and a
radius ``delta`` such that every power-law drift with rates in [eps, 1/eps]
lies in the inclusion's right-hand side ``tdi_rhs(params, log x)``.  For a
non-endotactic graph, :func:`refute_embedding` builds a constant-rate system
and a point where the drift escapes a given list of inclusions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .egraph import EGraph
from .endotactic import DirectionVerdict, is_endotactic
from .fan import DegenerateSources, Fan, build_fan, intersection_signs
from .geometry.cones import DEFAULT_TOL, GeneratedCone, cone_residual, polar_from_signs
from .geometry.linalg import dot

LAMBDA_CAP = 2.0 ** 60


class NotEndotactic(ValueError):
    def __init__(self, witness: DirectionVerdict):
        w = ", ".join(str(x) for x in witness.direction)
        super().__init__(f"graph is not endotactic: direction ({w}) fails at edge "
                         f"{witness.violating_edge}")
        self.witness = witness


class IsEndotactic(ValueError):
    """A refutation was requested for an endotactic graph."""


@dataclass(frozen=True)
class TdiParams:
    fan: Fan
    epsilon: float
    K0: float
    delta: float

    def to_json(self) -> dict:
        return {"epsilon": self.epsilon, "K0": self.K0, "delta": self.delta,
                "n_rays": len(self.fan.rays) if self.fan.J.dim else 0,
                "dim_J": self.fan.J.dim}


def _norm(v) -> float:
    return math.sqrt(sum(float(x) ** 2 for x in v))


def _check_epsilon(epsilon) -> float:
    epsilon = float(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    return epsilon


def embedding_parameters(G: EGraph, epsilon: float) -> TdiParams:
    """Fan of source differences plus K0 (rounded down) and delta (rounded up)."""
    epsilon = _check_epsilon(epsilon)
    if not G.edges:
        return TdiParams(Fan.from_normals([], G.dim), epsilon, epsilon ** 2, 1.0)
    verdict = is_endotactic(G)
    if not verdict.endotactic:
        raise NotEndotactic(verdict.witness)
    sources = G.sources
    if len(sources) < 2:
        raise DegenerateSources("a single source vertex cannot carry an endotactic graph")
    fan = build_fan(sources)
    units = [r.unit for r in fan.rays]
    E = np.array(G.edge_vectors, dtype=float)
    proj = E @ np.array(units).T
    neg = -proj[proj < 0]
    if neg.size == 0:
        raise DegenerateSources("no edge points against any ray of the fan")
    K0 = epsilon ** 2 * float(neg.min()) * (1 - 1e-12)
    total = float(np.linalg.norm(E, axis=1).sum())
    gap = min(_norm([a - b for a, b in zip(s, t)])
              for i, s in enumerate(sources) for t in sources[i + 1:])
    delta = math.log(total / K0) / gap * (1 + 1e-12)
    return TdiParams(fan, epsilon, K0, max(delta, 1e-12))


def _rhs_from_signs(fan: Fan, signs: tuple) -> GeneratedCone:
    if not fan.normals:
        return GeneratedCone(fan.dim)
    return polar_from_signs(signs, fan.normals, fan.dim)


def inclusion_rhs(fan: Fan, delta: float, X: Sequence[float]) -> GeneratedCone:
    """Polar of the intersection of the fan's chambers within ``delta`` of X."""
    return _rhs_from_signs(fan, intersection_signs(fan, X, delta))


def tdi_rhs(params: TdiParams, X: Sequence[float]) -> GeneratedCone:
    return inclusion_rhs(params.fan, params.delta, X)


# ---------------------------------------------------------------------- drift
def _exponents(G: EGraph):
    S = np.array([G.vertices[s] for s, _ in G.edges], dtype=float).reshape(len(G.edges), G.dim)
    E = np.array(G.edge_vectors, dtype=float).reshape(len(G.edges), G.dim)
    return S, E


def scaled_drift(G: EGraph, k: Sequence[float], X: Sequence[float]):
    """Drift at x = exp(X) divided by exp(scale); returns (vector, scale).

    Membership in a cone is scale invariant, so the scaled vector can be
    tested directly even where the drift itself overflows.
    """
    X = np.asarray(X, dtype=float)
    if not G.edges:
        return np.zeros(G.dim), 0.0
    k = np.asarray(k, dtype=float)
    if k.shape != (len(G.edges),):
        raise ValueError(f"expected {len(G.edges)} rates, got {k.shape}")
    S, E = _exponents(G)
    logs = S @ X
    scale = float(logs.max())
    return (k * np.exp(logs - scale)) @ E, scale


def scaled_drift_along(G: EGraph, k: Sequence[float], X: Sequence[float], w: Sequence) -> float:
    """(scaled drift) . w, summed per edge with exact slopes e_i . w.

    Edges orthogonal to w contribute exactly zero, so a small positive
    component is not swamped by cancellation among large orthogonal terms.
    """
    if not G.edges:
        return 0.0
    S, _ = _exponents(G)
    logs = S @ np.asarray(X, dtype=float)
    slopes = np.array([float(dot(e, w)) for e in G.edge_vectors])
    return float(np.sum(np.asarray(k, float) * np.exp(logs - logs.max()) * slopes))


def drift(G: EGraph, k: Sequence[float], x: Sequence[float]) -> np.ndarray:
    """Power-law vector field sum_i k_i x^{s_i} (s'_i - s_i)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (G.dim,):
        raise ValueError(f"state has shape {x.shape}, expected ({G.dim},)")
    if np.any(x <= 0):
        raise ValueError("drift is defined only for strictly positive states")
    v, scale = scaled_drift(G, k, np.log(x))
    return v * math.exp(scale)


# ---------------------------------------------------------------------- verification
@dataclass(frozen=True)
class SamplerConfig:
    n_samples: int = 1000
    seed: int = 0
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be at least 1")


@dataclass
class VerificationReport:
    n_samples: int
    n_violations: int
    max_violation: float
    seed: int
    delta: float
    K0: float
    n_warnings: int = 0
    worst_sample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.n_violations == 0

    def to_json(self) -> dict:
        out = {"n_samples": self.n_samples, "n_violations": self.n_violations,
               "max_violation": self.max_violation, "seed": self.seed,
               "delta": self.delta, "K0": self.K0, "n_warnings": self.n_warnings}
        if self.worst_sample is not None:
            out["worst_sample"] = self.worst_sample
        return out


def _unit(rng, n):
    u = rng.normal(size=n)
    return u / np.linalg.norm(u)


def sample_points(fan: Fan, delta: float, n: int, rng):
    """Stratified log-concentration samples.

    Points near each face of the fan (offsets 0.1, 1 and 10 times delta along
    random directions) interleaved with uniform points in [-10d, 10d]^n.
    """
    faces = fan.faces if fan.normals else []
    anchors = []
    for f in faces:
        p = np.array([float(c) for c in f.point])
        nrm = np.linalg.norm(p)
        anchors.append(p / nrm if nrm else p)
    offsets = (0.1 * delta, delta, 10 * delta)
    out = []
    strata = [(a, d) for a in anchors for d in offsets]
    for i in range(n):
        if not strata or i % 2 == 1:
            out.append(rng.uniform(-10 * delta, 10 * delta, size=fan.dim))
        else:
            a, d = strata[(i // 2) % len(strata)]
            out.append(a * rng.uniform(0, 10 * delta) + d * _unit(rng, fan.dim))
    return out


def sample_rates(n_edges: int, epsilon: float, n: int, rng):
    """Corner rate vectors in {eps, 1/eps}^E alternating with uniform draws."""
    lo, hi = epsilon, 1 / epsilon
    out = []
    for i in range(n):
        if i % 2 == 0:
            out.append(np.where(rng.random(n_edges) < 0.5, lo, hi))
        else:
            out.append(rng.uniform(lo, hi, size=n_edges))
    return out


def verify_embedding(G: EGraph, epsilon: float, samples: SamplerConfig | None = None,
                     params: TdiParams | None = None) -> VerificationReport:
    """Check drift(e^X) in tdi_rhs(X) on stratified samples of (X, k)."""
    samples = samples or SamplerConfig()
    if params is None:
        params = embedding_parameters(G, epsilon)
    rng = np.random.default_rng(samples.seed)
    Xs = sample_points(params.fan, params.delta, samples.n_samples, rng)
    ks = sample_rates(len(G.edges), params.epsilon, samples.n_samples, rng)
    cache: dict[tuple, GeneratedCone] = {}
    n_viol = n_warn = 0
    worst, worst_sample = 0.0, None
    for idx, (X, k) in enumerate(zip(Xs, ks)):
        signs = intersection_signs(params.fan, X, params.delta)
        cone = cache.get(signs)
        if cone is None:
            cone = cache[signs] = _rhs_from_signs(params.fan, signs)
        v, _ = scaled_drift(G, k, X)
        res = cone_residual(v, cone)
        if res > samples.tol:
            n_viol += 1
        elif res > 0:
            n_warn += 1
        if res > worst:
            worst = res
            worst_sample = {"index": idx, "X": [float(x) for x in X],
                            "rates": [float(r) for r in k], "residual": res}
    return VerificationReport(samples.n_samples, n_viol, worst, samples.seed, params.delta,
                              params.K0, n_warn, worst_sample if n_viol else None)


# ---------------------------------------------------------------------- refutation
@dataclass(frozen=True)
class Target:
    fan: Fan
    delta: float

    def to_json(self) -> dict:
        return {"normals": [list(n) for n in self.fan.normals], "delta": self.delta}


@dataclass
class Counterexample:
    w_prime: tuple
    epsilon: float
    rates: tuple[float, ...]
    X0: tuple[float, ...]
    drift: tuple[float, ...]
    drift_log_scale: float
    distinguished_edge: int
    drift_dot_w: float
    checked_against: list = field(default_factory=list)
    residuals: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "w_prime": [str(Fraction(x)) for x in self.w_prime],
            "epsilon": self.epsilon,
            "rates": list(self.rates),
            "distinguished_edge": self.distinguished_edge,
            "X0": list(self.X0),
            "drift": list(self.drift),
            "drift_log_scale": self.drift_log_scale,
            "drift_dot_w_prime": self.drift_dot_w,
            "targets": [dict(t.to_json(), residual=r)
                        for t, r in zip(self.checked_against, self.residuals)],
        }

    def recheck(self, G: EGraph) -> bool:
        """Recompute the violation from the certificate alone.

        The drift escapes F(X0) when w' lies in P(X0) (so F(X0) = P° sits in
        the half-space v.w' <= 0, checked exactly) and drift.w' > 0.
        """
        if not scaled_drift_along(G, self.rates, self.X0, self.w_prime) > 0:
            return False
        return all(_w_in_intersection(t, self.X0, self.w_prime) for t in self.checked_against)


def _as_target(t) -> Target:
    if isinstance(t, Target):
        return t
    fan, delta = t
    if not delta > 0:
        raise ValueError("target delta must be positive")
    return Target(fan, float(delta))


def refute_embedding(G: EGraph, targets: Sequence, tol: float = DEFAULT_TOL) -> Counterexample:
    """Constant-rate system and a point X0 on ray(w') escaping every target inclusion."""
    verdict = is_endotactic(G)
    if verdict.endotactic:
        raise IsEndotactic("graph is endotactic; every variable-k system embeds")
    targets = [_as_target(t) for t in targets]
    for t in targets:
        if t.fan.dim != G.dim:
            raise ValueError("target fan dimension differs from the graph")
    wp = tuple(-Fraction(x) for x in verdict.witness.direction)
    wpf = np.array([float(x) for x in wp])
    wnorm = float(np.linalg.norm(wpf))
    evec = G.edge_vectors
    srcs = [G.vertices[s] for s, _ in G.edges]
    slopes = [dot(wp, e) for e in evec]
    total = sum(_norm(e) for e in evec)
    min_pos = min(float(d) for d in slopes if d > 0)
    epsilon = math.sqrt(min_pos / (2 * wnorm * total))

    order = sorted(range(len(evec)), key=lambda i: (-dot(wp, srcs[i]), i))
    j = next(i for i in order if slopes[i] > 0)
    rates = tuple(1 / epsilon if i == j else epsilon for i in range(len(evec)))

    distinct = list(dict.fromkeys(srcs))
    gaps = [_norm([a - b for a, b in zip(s, t)])
            for i, s in enumerate(distinct) for t in distinct[i + 1:]]
    L = 0.0
    if gaps:
        L = math.log(2 * wnorm * total / (epsilon ** 2 * float(slopes[j]))) / min(gaps)

    unit = wpf / wnorm
    lam = 1.0
    while True:
        X0 = lam * unit
        if all(_far_from_other_chambers(t, wp, X0, max(t.delta, L)) for t in targets):
            break
        lam *= 2
        if lam > LAMBDA_CAP:
            raise RuntimeError("lambda exceeded 2^60 without separating X0 from the chambers")

    v, scale = scaled_drift(G, rates, X0)
    along = scaled_drift_along(G, rates, X0, wp)
    if not along > 0:
        raise RuntimeError("constructed drift does not point along w'")
    residuals = []
    for t in targets:
        if not _w_in_intersection(t, X0, wp):
            raise RuntimeError("w' is not in the intersection of the qualifying chambers")
        # informational: the half-space certificate above is what proves escape
        residuals.append(cone_residual(v, inclusion_rhs(t.fan, t.delta, X0), tol))
    return Counterexample(wp, epsilon, rates, tuple(float(x) for x in X0),
                          tuple(float(x) for x in v), scale, j, along, targets, residuals)


def _w_in_intersection(target: Target, X0, wp) -> bool:
    fan = target.fan
    if not fan.normals:
        return True
    return fan.contains(intersection_signs(fan, X0, target.delta), wp)


def _far_from_other_chambers(target: Target, wp, X0: np.ndarray, bound: float) -> bool:
    # every chamber missing w' is cut off by a hyperplane h with n_h.w' != 0, and
    # its distance from X0 is at least |n_h.X0| / |n_h|
    fan = target.fan
    if not fan.normals:
        return True
    N = fan.float_normals
    d = np.abs(N @ X0) / np.linalg.norm(N, axis=1)
    relevant = [dot(n, wp) != 0 for n in fan.normals]
    return bool(np.all(d[relevant] > bound))
