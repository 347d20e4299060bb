"""Configuration-driven verification campaigns.

Every campaign is deterministic in (seed, params): data CSVs and the
JSON report are value-identical across re-runs and worker counts.
Failed checks never abort sibling checks; the report records each
check as {name, value, expected, tolerance, pass}.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

import stable_tv_lab
from stable_tv_lab.constants import constant_report, s_inverse_moment
from stable_tv_lab.distances import (
    rate_fit,
    tv_cf_lower_bound,
    tv_from_samples_1d,
    tv_noise_floor,
)
from stable_tv_lab.ou import exact_tv_mu, lb_curve
from stable_tv_lab.pde import PoissonProblem, generator_p, generator_q, poisson_solution_grid
from stable_tv_lab.rng import RngStream
from stable_tv_lab.sde import EulerConfig, drift_registry, mc_semigroup
from stable_tv_lab.stable_sampling import (
    SampleSet,
    StableSpec,
    SubordinatorSpec,
    empirical_char_fn,
    robust_mean,
    sample_subordinator,
    sample_sym_stable,
    sample_stable_vector,
)

CAMPAIGNS = {}


def _campaign(name):
    def deco(fn):
        CAMPAIGNS[name] = fn
        return fn

    return deco


DEFAULT_PARAMS = {
    "constants": {"d": [1, 2, 3], "alpha": [1.5, 1.9]},
    "verify-samplers": {"alpha": [1.1, 1.5, 1.9], "t": [0.5, 1.0, 2.0], "xi": [0.5, 1.0, 2.0], "n": 100_000},
    "moment-check": {"alpha": [1.0, 1.25, 1.5, 1.75], "t": [0.5, 1.0, 2.0], "n": 1_000_000, "blocks": 32, "rtol": 0.02},
    "ou-rate": {"alpha": [1.9, 1.95, 1.99, 1.995]},
    "tv-theorem": {"alpha": [1.7, 1.8, 1.85, 1.9], "t": 5.0, "dt": 0.01, "n": 400_000, "xi": [0.5, 1.0, 2.0]},
    "poisson-rate": {"alpha": [1.8, 1.9, 1.95], "x_half": 15.0, "x_step": 0.01, "residual_x": 3.0},
    "gradient-probe": {"alpha": [1.5], "t_grid": [1e-3, 1e-1], "t_nodes": 7, "n": 200_000},
}


@dataclass
class ExperimentConfig:
    campaign: str
    seed: int = 0
    params: dict = field(default_factory=dict)
    output_dir: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.campaign not in CAMPAIGNS:
            raise ValueError(
                f"unknown campaign {self.campaign!r}; choose from {sorted(CAMPAIGNS)}"
            )
        merged = dict(DEFAULT_PARAMS[self.campaign])
        merged.update(self.params)
        unknown = set(self.params) - set(DEFAULT_PARAMS[self.campaign])
        if unknown:
            raise ValueError(f"params.{unknown.pop()}: unknown key for campaign {self.campaign}")
        self.params = merged

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        raw = json.loads(Path(path).read_text())
        raw.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**raw)


@dataclass
class RunReport:
    config: dict
    checks: list
    data: dict = field(default_factory=dict)
    elapsed_s: float = 0.0
    version: str = stable_tv_lab.__version__

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "checks": self.checks,
            "passed": self.passed,
            "elapsed_s": self.elapsed_s,
            "version": self.version,
        }

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        (out / "data").mkdir(parents=True, exist_ok=True)
        with open(out / "report.json", "w") as fh:
            json.dump(self.as_dict(), fh, indent=2)
        for name, rows in self.data.items():
            with open(out / "data" / f"{name}.csv", "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerows(rows)


def _check(checks, name, value, expected, tolerance, provenance=""):
    ok = bool(np.isfinite(value)) and bool(abs(value - expected) <= tolerance)
    checks.append(
        {
            "name": name,
            "value": float(value),
            "expected": float(expected),
            "tolerance": float(tolerance),
            "pass": bool(ok),
            "provenance": provenance,
        }
    )
    return ok


def _check_true(checks, name, ok, detail=""):
    checks.append(
        {
            "name": name,
            "value": float(bool(ok)),
            "expected": 1.0,
            "tolerance": 0.0,
            "pass": bool(ok),
            "provenance": detail,
        }
    )
    return ok


def run_campaign(cfg: ExperimentConfig) -> RunReport:
    t0 = time.perf_counter()
    checks, data = [], {}
    CAMPAIGNS[cfg.campaign](cfg, checks, data)
    report = RunReport(
        config={
            "campaign": cfg.campaign,
            "seed": cfg.seed,
            "params": cfg.params,
            "workers": cfg.workers,
        },
        checks=checks,
        data=data,
        elapsed_s=time.perf_counter() - t0,
    )
    if cfg.output_dir:
        report.write(cfg.output_dir)
    return report


@_campaign("constants")
def _constants(cfg, checks, data):
    p = cfg.params
    rows = [["d", "alpha", "A", "omega", "ratio", "tail_mass"]]
    for d in p["d"]:
        ratios = []
        for alpha in sorted(p["alpha"]):
            r = constant_report(d, alpha)
            rows.append([r.d, r.alpha, r.A, r.omega, r.ratio, r.tail_mass])
            ratios.append(r.ratio)
        if len(ratios) >= 2:
            _check_true(
                checks,
                f"ratio-trend-to-1[d={d}]",
                abs(ratios[-1] - 1.0) <= abs(ratios[0] - 1.0) + 1e-12,
                "A*omega/(d(2-alpha)) approaches 1 as alpha increases",
            )
    data["constants"] = rows


@_campaign("verify-samplers")
def _verify_samplers(cfg, checks, data):
    p = cfg.params
    n = int(p["n"])
    tol = 3.0 / np.sqrt(n)
    rows = [["sampler", "alpha", "t", "xi", "empirical", "target", "error"]]
    stream = 0
    for alpha in p["alpha"]:
        for t in p["t"]:
            sym = sample_sym_stable(StableSpec(alpha, t), RngStream(cfg.seed, stream), size=n)
            stream += 1
            sub = sample_subordinator(SubordinatorSpec(alpha, t), RngStream(cfg.seed, stream), size=n)
            stream += 1
            _check_true(checks, f"subordinator-positive[{alpha},{t}]", np.all(sub > 0.0))
            for xi in p["xi"]:
                emp = empirical_char_fn(SampleSet(sym), xi).value.real
                target = np.exp(-t * abs(xi) ** alpha / 2.0)
                rows.append(["sym", alpha, t, xi, emp, target, abs(emp - target)])
                _check(checks, f"sym-cf[{alpha},{t},{xi}]", emp, target, tol)
                lap = float(np.mean(np.exp(-xi * sub)))
                lap_target = np.exp(-t * (2.0 * xi) ** (alpha / 2.0) / 2.0)
                rows.append(["sub", alpha, t, xi, lap, lap_target, abs(lap - lap_target)])
                _check(checks, f"sub-laplace[{alpha},{t},{xi}]", lap, lap_target, tol)
    data["sampler_cf"] = rows


@_campaign("moment-check")
def _moment_check(cfg, checks, data):
    p = cfg.params
    n, blocks, rtol = int(p["n"]), int(p["blocks"]), float(p["rtol"])
    rows = [["alpha", "t", "estimate", "target", "rel_error"]]
    stream = 0
    for alpha in p["alpha"]:
        for t in p["t"]:
            s = sample_subordinator(SubordinatorSpec(alpha, t), RngStream(cfg.seed, stream), size=n)
            stream += 1
            est = robust_mean(SampleSet(1.0 / s), blocks)
            target = s_inverse_moment(alpha, t)
            rows.append([alpha, t, est, target, abs(est / target - 1.0)])
            _check(checks, f"inverse-moment[{alpha},{t}]", est, target, rtol * target)
    data["inverse_moment"] = rows


@_campaign("ou-rate")
def _ou_rate(cfg, checks, data):
    p = cfg.params
    alphas = sorted(p["alpha"])
    rows = [["alpha", "tv_exact", "lb_curve", "ratio_to_eps"]]
    pts = []
    for alpha in alphas:
        tv = exact_tv_mu(alpha)
        lb = lb_curve(alpha)
        rows.append([alpha, tv, lb, tv / (2.0 - alpha)])
        pts.append((alpha, tv))
        _check_true(checks, f"tv>=lb[{alpha}]", tv >= lb, f"tv={tv}, lb={lb}")
    fit = rate_fit(pts)
    data["ou_rate"] = rows
    data["rate_fit"] = [["epsilon", "value"]] + [list(pt) for pt in fit.points]
    _check(checks, "rate-slope", fit.slope, 1.0, 0.1, "TV(mu_alpha, mu_2) ~ (2-alpha)")
    _check(
        checks,
        "lb-ratio-limit",
        lb_curve(1.999) / 0.001,
        np.exp(-0.25) / 8.0,
        0.002 * np.exp(-0.25) / 8.0,
        "lb/(2-alpha) -> e^{-1/4}/8",
    )


def coupled_ergodic_pair(alpha, t, dt, n, rng: RngStream):
    """Stable and Brownian OU endpoints driven by shared Gaussians.

    The coupling (common random numbers) strips most MC noise from the
    difference of cos/sin means, which is what the TV lower bound uses.
    Paths are simulated in fixed blocks so output ignores worker count.
    """
    from stable_tv_lab.sde import BLOCK_SIZE

    n_blocks = (n + BLOCK_SIZE - 1) // BLOCK_SIZE
    xs, ys = [], []
    steps = int(round(t / dt))
    for i in range(n_blocks):
        m = min(BLOCK_SIZE, n - i * BLOCK_SIZE)
        sub = rng.substream(i)
        x = np.zeros(m)
        y = np.zeros(m)
        for _ in range(steps):
            z = sub.normal(m)
            s = sample_subordinator(SubordinatorSpec(alpha, dt), sub, size=m)
            x = x - x * dt + np.sqrt(s) * z
            y = y - y * dt + np.sqrt(dt) * z
        xs.append(x)
        ys.append(y)
    return np.concatenate(xs), np.concatenate(ys)


@_campaign("tv-theorem")
def _tv_theorem(cfg, checks, data):
    p = cfg.params
    alphas = sorted(p["alpha"])
    t, dt, n = float(p["t"]), float(p["dt"]), int(p["n"])
    xis = list(p["xi"])
    rows = [["alpha", "tv_cf_lower", "tv_samples", "tv_exact"]]
    pts = []
    prev = None
    floor = None
    for k, alpha in enumerate(alphas):
        x, y = coupled_ergodic_pair(alpha, t, dt, n, RngStream(cfg.seed, 1000 + k))
        a_set, b_set = SampleSet(x), SampleSet(y)
        lb = tv_cf_lower_bound(a_set, b_set, xis)
        stv = tv_from_samples_1d(a_set, b_set, 64)
        tv_exact = exact_tv_mu(alpha)
        rows.append([alpha, lb, stv, tv_exact])
        pts.append((alpha, lb))
        _check_true(checks, f"tv-range[{alpha}]", 0.0 <= lb <= 2.0 and 0.0 <= stv <= 2.0)
        if prev is not None:
            _check_true(
                checks,
                f"tv-decreasing[{alpha}]",
                lb <= prev + 2.0 / np.sqrt(n),
                "TV decreases toward 0 as alpha increases at fixed t",
            )
        prev = lb
        if floor is None:
            floor = tv_noise_floor(b_set, 64)
            _check_true(checks, "noise-floor<=0.05", floor <= 0.05, f"floor={floor}")
        _check(
            checks,
            f"sample-tv-vs-exact[{alpha}]",
            stv,
            tv_exact,
            max(floor, 0.05),
            "histogram TV within the calibrated self-distance floor",
        )
    fit = rate_fit(pts)
    data["tv_theorem"] = rows
    data["rate_fit"] = [["epsilon", "value"]] + [list(pt) for pt in fit.points]
    _check(checks, "ergodic-tv-slope", fit.slope, 1.0, 0.15, "lower-bound TV ~ (2-alpha)")


@_campaign("poisson-rate")
def _poisson_rate(cfg, checks, data):
    p = cfg.params
    alphas = sorted(p["alpha"])
    ou = drift_registry("ou")
    grid = np.arange(-float(p["x_half"]), float(p["x_half"]) + 1e-9, float(p["x_step"]))
    xr = float(p["residual_x"])
    x_probe = np.arange(-xr, xr + 1e-9, 0.5)
    rows = [["alpha", "x", "f_alpha", "residual"]]
    f2 = poisson_solution_grid(PoissonProblem(h=np.cos, alpha=2.0, drift=ou), grid)
    mu2 = np.exp(-0.25)
    res2 = max(abs(generator_q(f2, ou, x) - (np.cos(x) - mu2)) for x in x_probe)
    for x in x_probe:
        rows.append([2.0, x, float(f2(x)), abs(generator_q(f2, ou, x) - (np.cos(x) - mu2))])
    _check(checks, "residual[alpha=2]", res2, 0.0, 1e-3, "Brownian generator residual")
    ratios = []
    for alpha in alphas:
        fa = poisson_solution_grid(PoissonProblem(h=np.cos, alpha=alpha, drift=ou), grid)
        mua = np.exp(-1.0 / (2.0 * alpha))
        res = max(abs(generator_p(fa, ou, alpha, x) - (np.cos(x) - mua)) for x in x_probe)
        for x in x_probe:
            rows.append([alpha, x, float(fa(x)), abs(generator_p(fa, ou, alpha, x) - (np.cos(x) - mua))])
        _check(checks, f"residual[alpha={alpha}]", res, 0.0, 1e-2, "stable generator residual")
        eps = 2.0 - alpha
        from stable_tv_lab.pde import lin_norm_diff

        ratios.append((alpha, lin_norm_diff(fa, f2) / (eps * np.log(1.0 / eps))))
    data["poisson"] = rows
    data["lin_norm_shape"] = [["alpha", "ratio"]] + [list(r) for r in ratios]
    vals = [r for _, r in ratios]
    _check_true(
        checks,
        "lin-norm-shape-bounded",
        max(vals) / min(vals) < 3.0,
        f"ratio spread {max(vals) / min(vals):.3f} over alpha grid",
    )


@_campaign("gradient-probe")
def _gradient_probe(cfg, checks, data):
    p = cfg.params
    n = int(p["n"])
    t_lo, t_hi = p["t_grid"]
    ts = np.geomspace(t_lo, t_hi, int(p["t_nodes"]))
    ou = drift_registry("ou")
    h = lambda y: (y <= 0.0).astype(float)
    rows = [["driver", "alpha", "t", "grad"]]

    def fitted_exponent(driver, alpha, base_stream):
        grads = []
        for k, t in enumerate(ts):
            eps = 0.25 * t ** (1.0 / alpha)
            cfg_e = EulerConfig(dt=t / 50.0, scheme="brownian" if driver == "brownian" else "subordinated")
            drv = "brownian" if driver == "brownian" else ("stable", alpha)
            rng = RngStream(cfg.seed, base_stream + k)
            plus, _ = mc_semigroup(h, ou, drv, [eps], t, n, rng.fresh(), cfg=cfg_e)
            minus, _ = mc_semigroup(h, ou, drv, [-eps], t, n, rng.fresh(), cfg=cfg_e)
            g = abs(plus - minus) / (2.0 * eps)
            grads.append(g)
            rows.append([driver, alpha, t, g])
        return float(np.polyfit(np.log(ts), np.log(grads), 1)[0])

    expo = fitted_exponent("brownian", 2.0, 0)
    _check(checks, "grad-exponent[brownian]", expo, -0.5, 0.05, "indicator h, small-t blow-up")
    for j, alpha in enumerate(p["alpha"]):
        expo = fitted_exponent("stable", alpha, 100 * (j + 1))
        _check(checks, f"grad-exponent[stable,{alpha}]", expo, -1.0 / alpha, 0.1)
    # smooth h stays bounded: |d/dx P_t cos(x)| <= e^{-t} <= 1
    bound_ok = True
    for t in ts:
        est, _ = mc_semigroup(np.cos, ou, ("stable", float(p["alpha"][0])), [0.3], t, 20_000,
                              RngStream(cfg.seed, 9000 + int(1e6 * t)),
                              cfg=EulerConfig(dt=t / 20.0, scheme="subordinated"))
        bound_ok = bound_ok and abs(est) <= 1.1
    _check_true(checks, "smooth-h-no-blowup", bound_ok)
    data["gradient_probe"] = rows
