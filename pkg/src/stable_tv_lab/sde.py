"""Euler-Maruyama engine for the Brownian and stable SDEs.

    dX_t = b(X_t) dt + sigma dL_t      (stable driver, 1 < alpha < 2)
    dY_t = b(Y_t) dt + sigma dB_t      (Brownian driver)

Driver increments are exact in law at every step (the only discretization
error is in the drift term), which keeps the alpha -> 2 comparison clean.
Paths are simulated in fixed-size blocks with per-block substreams, so
ensembles are bit-identical regardless of the worker count.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from stable_tv_lab.rng import RngStream
from stable_tv_lab.stable_sampling import (
    StableSpec,
    SubordinatorSpec,
    sample_subordinator,
    sample_sym_stable,
)

BLOCK_SIZE = 4096  # paths per substream block; fixed so workers never matter


class IntegrationError(RuntimeError):
    """Path became non-finite (drift explosion under too-large dt)."""

    def __init__(self, step: int, message: str | None = None):
        self.step = step
        super().__init__(message or f"non-finite state at step {step}")


@dataclass(frozen=True)
class DriftField:
    """Drift b with its declared dissipativity/smoothness constants.

    The constants are claims, verified by probe_h1/probe_h2, not trusted.
    b must be vectorized: (n, d) -> (n, d).
    """

    b: Callable[[np.ndarray], np.ndarray]
    d: int
    theta0: float
    theta1: float = 0.0
    theta2: float = 0.0
    K: float = 0.0
    name: str = "custom"

    @property
    def L0(self) -> float:
        """sqrt(2K / theta0), defined when K > 0."""
        if self.K <= 0.0:
            raise ValueError("L0 is only defined for K > 0")
        return float(np.sqrt(2.0 * self.K / self.theta0))


def drift_registry(name: str, d: int = 1, **kwargs) -> DriftField:
    """Built-in drifts: ou, ou-perturbed(eps), custom-affine(A, c), zero."""
    if name == "ou":
        return DriftField(b=lambda x: -x, d=d, theta0=1.0, theta1=1.0, name="ou")
    if name == "ou-perturbed":
        eps = float(kwargs.get("eps", 0.1))
        return DriftField(
            b=lambda x: -x + eps * np.sin(x),
            d=d,
            theta0=1.0 - eps,
            theta1=1.0 + eps,
            theta2=eps,
            name=f"ou-perturbed({eps})",
        )
    if name == "custom-affine":
        A = np.atleast_2d(np.asarray(kwargs["A"], dtype=float))
        c = np.atleast_1d(np.asarray(kwargs.get("c", np.zeros(d)), dtype=float))
        sym = (A + A.T) / 2.0
        theta0 = -float(np.linalg.eigvalsh(sym).max())
        if theta0 <= 0.0:
            raise ValueError("custom-affine drift must be dissipative (A + A^T < 0)")
        theta1 = float(np.linalg.norm(A, 2))
        return DriftField(
            b=lambda x: x @ A.T + c,
            d=d,
            theta0=theta0,
            theta1=theta1,
            name="custom-affine",
        )
    if name == "zero":
        return DriftField(b=lambda x: np.zeros_like(x), d=d, theta0=0.0, name="zero")
    raise KeyError(f"unknown drift {name!r}")


@dataclass(frozen=True)
class EulerConfig:
    dt: float | None = None
    scheme: str = "direct-stable"  # direct-stable | subordinated | brownian
    sigma: np.ndarray | None = None

    def __post_init__(self):
        if self.dt is not None and self.dt <= 0.0:
            raise ValueError("dt must be positive")
        if self.scheme not in ("direct-stable", "subordinated", "brownian"):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        if self.sigma is not None:
            sigma = np.atleast_2d(np.asarray(self.sigma, dtype=float))
            if not np.isfinite(np.linalg.cond(sigma)):
                raise ValueError("sigma must be invertible")
            object.__setattr__(self, "sigma", sigma)

    def step_size(self, t: float) -> float:
        return self.dt if self.dt is not None else min(1e-3, t / 100.0)


@dataclass(frozen=True)
class Ensemble:
    endpoints: np.ndarray  # (n, d)
    t: float
    provenance: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.endpoints.shape[0]

    def to_csv(self, path) -> None:
        path = Path(path)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow([f"x{i + 1}" for i in range(self.endpoints.shape[1])])
            writer.writerows(self.endpoints.tolist())
        with open(path.with_suffix(path.suffix + ".json"), "w") as fh:
            json.dump({**self.provenance, "t": self.t, "n": self.n}, fh, indent=2)


def probe_h1(drift: DriftField, pairs) -> float:
    """Worst dissipativity margin over probe pairs.

    Returns max over (x, y) of <x-y, b(x)-b(y)> + theta0 |x-y|^2 - K;
    non-positive means the declared (theta0, K) hold on the probe set.
    """
    if len(pairs) == 0:
        raise ValueError("need at least one probe pair")
    worst = -np.inf
    for x, y in pairs:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        y = np.atleast_1d(np.asarray(y, dtype=float))
        if x.shape != y.shape or x.shape[0] != drift.d:
            raise ValueError("probe pair dimension mismatch")
        bx = drift.b(x[None, :])[0]
        by = drift.b(y[None, :])[0]
        margin = float(np.dot(x - y, bx - by) + drift.theta0 * np.sum((x - y) ** 2) - drift.K)
        worst = max(worst, margin)
    return worst


def probe_h2(drift: DriftField, points, fd_step: float = 1e-5, rng: RngStream | None = None):
    """Finite-difference estimates of the derivative bounds (theta1, theta2).

    Central differences along random unit directions; returns the observed
    suprema of |D_v b| / |v| and |D_w D_v b| / (|v||w|) over the probe set.
    """
    if fd_step <= 0.0:
        raise ValueError("fd_step must be positive")
    rng = rng or RngStream(0xD1F, 0)
    d = drift.d
    dirs = [np.eye(d)[i] for i in range(d)]
    extra = rng.normal((8, d))
    dirs += [v / np.linalg.norm(v) for v in extra]
    h = fd_step
    theta1_hat = 0.0
    theta2_hat = 0.0
    for x in points:
        x = np.atleast_1d(np.asarray(x, dtype=float))
        for v in dirs:
            dv = (drift.b((x + h * v)[None]) - drift.b((x - h * v)[None]))[0] / (2 * h)
            theta1_hat = max(theta1_hat, float(np.linalg.norm(dv)))
            for w in dirs[: min(len(dirs), d + 2)]:
                dvw = (
                    drift.b((x + h * v + h * w)[None])
                    - drift.b((x + h * v - h * w)[None])
                    - drift.b((x - h * v + h * w)[None])
                    + drift.b((x - h * v - h * w)[None])
                )[0] / (4 * h * h)
                theta2_hat = max(theta2_hat, float(np.linalg.norm(dvw)))
    return theta1_hat, theta2_hat


def _parse_driver(driver):
    """'brownian' or ('stable', alpha) -> (kind, alpha)."""
    if driver == "brownian":
        return "brownian", 2.0
    if isinstance(driver, (tuple, list)) and len(driver) == 2 and driver[0] == "stable":
        alpha = float(driver[1])
        if not 1.0 < alpha < 2.0:
            raise ValueError(f"stable driver needs alpha in (1, 2), got {alpha}")
        return "stable", alpha
    raise ValueError(f"driver must be 'brownian' or ('stable', alpha), got {driver!r}")


def _stable_increments(alpha: float, dt: float, d: int, n: int, scheme: str, rng: RngStream):
    """Exact-in-law driver increments over one step, shape (n, d)."""
    if scheme == "direct-stable" and d == 1:
        return sample_sym_stable(StableSpec(alpha, dt), rng, size=n)[:, None]
    # subordinated (and the d > 1 direct route, which is subordination too)
    s = sample_subordinator(SubordinatorSpec(alpha, dt), rng, size=n)
    return np.sqrt(s)[:, None] * rng.normal((n, d))


def _simulate_block(drift, cfg, kind, alpha, x0, t, rng, n):
    """Euler-Maruyama for n paths at once; returns (n, d) endpoints."""
    d = drift.d
    dt = cfg.step_size(t)
    sigma = cfg.sigma
    x = np.broadcast_to(np.atleast_1d(np.asarray(x0, dtype=float)), (n, d)).copy()
    remaining = t
    step = 0
    while remaining > 1e-15:
        h = min(dt, remaining)  # last partial step hits t exactly
        if kind == "brownian":
            dl = np.sqrt(h) * rng.normal((n, d))
        else:
            dl = _stable_increments(alpha, h, d, n, cfg.scheme, rng)
        if sigma is not None:
            dl = dl @ sigma.T
        x = x + drift.b(x) * h + dl
        if not np.all(np.isfinite(x)):
            raise IntegrationError(step)
        remaining -= h
        step += 1
    return x


def integrate_bm(drift: DriftField, cfg: EulerConfig, x0, t: float, rng: RngStream):
    """Single Brownian-SDE endpoint."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    return _simulate_block(drift, cfg, "brownian", 2.0, x0, t, rng, 1)[0]


def integrate_stable(drift: DriftField, cfg: EulerConfig, alpha: float, x0, t: float, rng: RngStream):
    """Single stable-SDE endpoint (scheme per cfg: direct-stable or subordinated)."""
    if t <= 0.0:
        raise ValueError("t must be positive")
    if not 1.0 < alpha < 2.0:
        raise ValueError(f"alpha must be in (1, 2), got {alpha}")
    if cfg.scheme == "brownian":
        raise ValueError("integrate_stable needs a stable scheme")
    return _simulate_block(drift, cfg, "stable", alpha, x0, t, rng, 1)[0]


def run_ensemble(
    drift: DriftField,
    cfg: EulerConfig,
    driver,
    x0,
    t: float,
    n: int,
    rng: RngStream,
    workers: int = 1,
) -> Ensemble:
    """n independent endpoints; output independent of the worker count.

    Work is partitioned into fixed BLOCK_SIZE blocks, block i drawing from
    rng.substream(i); blocks are concatenated in index order.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    kind, alpha = _parse_driver(driver)
    n_blocks = (n + BLOCK_SIZE - 1) // BLOCK_SIZE
    sizes = [min(BLOCK_SIZE, n - i * BLOCK_SIZE) for i in range(n_blocks)]

    def job(i):
        return _simulate_block(drift, cfg, kind, alpha, x0, t, rng.substream(i), sizes[i])

    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(job, range(n_blocks)))
    else:
        blocks = [job(i) for i in range(n_blocks)]
    endpoints = np.concatenate(blocks, axis=0)
    prov = {
        "drift": drift.name,
        "driver": "brownian" if kind == "brownian" else f"stable({alpha})",
        "dt": cfg.step_size(t),
        "scheme": cfg.scheme if kind != "brownian" else "brownian",
        "seed": rng.root_seed,
        "stream": rng.stream_index,
        "x0": np.asarray(x0, dtype=float).tolist(),
    }
    return Ensemble(endpoints=endpoints, t=t, provenance=prov)


def mc_semigroup(h, drift, driver, x, t, n, rng, cfg: EulerConfig | None = None, workers: int = 1):
    """Monte Carlo estimate of P_t h(x) (or Q_t h(x)) with its std error."""
    kind, _ = _parse_driver(driver)
    if cfg is None:
        cfg = EulerConfig(scheme="brownian" if kind == "brownian" else "subordinated")
    ens = run_ensemble(drift, cfg, driver, x, t, n, rng, workers=workers)
    vals = np.asarray(h(ens.endpoints[:, 0] if drift.d == 1 else ens.endpoints), dtype=float)
    est = float(np.mean(vals))
    se = float(np.std(vals, ddof=1) / np.sqrt(n)) if n > 1 else float("inf")
    return est, se
