"""Experiment harness: growth-rate sweeps emitting deterministic CSV.

Each experiment tag has a fixed column set; records are produced in grid
order and formatted with 12 significant digits, so a (config, seeds) pair
yields byte-identical output across runs and degrees of parallelism.
Seeds and the software version are embedded as CSV comments.  Wall times
are collected per record but reported on stdout only, never in the CSV,
which would break byte determinism.
"""

from __future__ import annotations

import csv
import io
import json
import math
import time

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import __version__
from .ascent import AscentConfig
from .core import Exponent, as_exponent, conjugate, from_reciprocal, p_norm, p_norm_rows
from .operators import MatrixOperator, bennett_sample, inclusion
from .reductions import QuotientInstance, quotient_verify
from .cotype import CotypeParams, EmbeddedNorm, cotype_estimate, lp_space
from .summing import SummingParams, VectorFamily, pi_estimate, strong_norm, weak_norm

EXPERIMENTS = (
    "bennett_ratio",
    "identity_l2_growth",
    "tomczak_suite",
    "quotient_suite",
    "cotype_suite",
    "pi1_log_example",
)

COLUMNS = {
    "bennett_ratio": [
        "experiment", "n", "m", "s", "q", "p", "t", "k", "K_proxy", "seed",
        "pi_k", "certified_lower", "basis_exact", "ratio", "slope", "expected_slope",
    ],
    "identity_l2_growth": [
        "experiment", "n", "p", "q", "k", "seed",
        "pi_k", "k_bound", "ratio", "basis_value", "basis_expected",
    ],
    "tomczak_suite": [
        "experiment", "inequality", "n", "d", "domain", "seed", "p", "q",
        "k_small", "k_big", "val_small", "val_big", "ratio", "bound_factor", "holds",
    ],
    "quotient_suite": [
        "experiment", "instance", "p", "q", "r", "s", "k", "seed",
        "lhs", "rhs", "ratio", "holds", "sound", "sound_violations", "candidates",
    ],
    "cotype_suite": [
        "experiment", "space", "n", "q", "k", "kind", "seed",
        "value", "dim_bound", "ratio", "holds",
    ],
    "pi1_log_example": [
        "experiment", "n", "k", "s", "m", "seed",
        "pi1_k", "certified_lower", "ratio", "envelope", "c_hat",
    ],
}

# Desk-scale guard: Bennett sweeps keep m = ceil(n^(s/2)) enumerable-ish.
MAX_BENNETT_COLS = 256


@dataclass
class ExperimentRecord:
    """One grid point x seed of a sweep."""

    experiment: str
    params: dict
    metrics: dict
    seed: int
    wall_time_s: float = 0.0

    def row(self, columns) -> list:
        merged = {"experiment": self.experiment, "seed": self.seed}
        merged.update(self.params)
        merged.update(self.metrics)
        return [merged.get(c, "") for c in columns]


@dataclass
class ExperimentConfig:
    """Parsed experiment description: tag, grids, seeds, budget, output."""

    experiment: str
    params: dict = field(default_factory=dict)
    seeds: list = field(default_factory=lambda: [0])
    ascent: dict = field(default_factory=dict)
    out: str = "experiment.csv"
    plot: bool = True
    threads: int = 1

    @classmethod
    def from_dict(cls, doc: dict) -> "ExperimentConfig":
        known = {"experiment", "seeds", "ascent", "out", "plot", "threads"}
        params = {k: v for k, v in doc.items() if k not in known}
        return cls(
            experiment=doc.get("experiment", ""),
            params=params,
            seeds=list(doc.get("seeds", [0])),
            ascent=dict(doc.get("ascent", {})),
            out=str(doc.get("out", "experiment.csv")),
            plot=bool(doc.get("plot", True)),
            threads=int(doc.get("threads", 1)),
        )

    @classmethod
    def from_file(cls, path) -> "ExperimentConfig":
        path = Path(path)
        if path.suffix.lower() == ".toml":
            with open(path, "rb") as fh:
                return cls.from_dict(tomllib.load(fh))
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def budget(self, seed: int) -> AscentConfig:
        kw = {"starts": 8, "iters": 300, "seed": seed}
        kw.update({k: v for k, v in self.ascent.items() if k in ("starts", "iters", "patience", "step0")})
        return AscentConfig(**kw)


class ConfigError(ValueError):
    """The experiment configuration is invalid; nothing was computed."""


def _as_exp_list(values) -> list[Exponent]:
    if values is None:
        return []
    return [as_exponent(v) for v in values]


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def validate_config(cfg: ExperimentConfig) -> None:
    """Reject bad configs (unknown tag, empty grids, broken exponent
    relations, grids beyond the desk-scale caps) before any computation."""
    _require(cfg.experiment in EXPERIMENTS,
             f"unknown experiment {cfg.experiment!r}; choose from {', '.join(EXPERIMENTS)}")
    _require(len(cfg.seeds) > 0, "seeds must be nonempty")
    _require(all(isinstance(s, int) for s in cfg.seeds), "seeds must be integers")
    p = cfg.params
    if cfg.experiment == "bennett_ratio":
        for key in ("n", "s", "q", "p"):
            _require(key in p and len(p[key]) > 0, f"bennett_ratio needs a nonempty grid {key!r}")
        for q in _as_exp_list(p["q"]):
            _require(Exponent(1) <= q <= Exponent(2), f"bennett needs 1 <= q <= 2, got {q}")
        for s in _as_exp_list(p["s"]):
            _require(s >= 2, f"bennett needs s >= 2, got {s}")
        for n in p["n"]:
            for s in _as_exp_list(p["s"]):
                m = math.ceil(float(n) ** (float(s) / 2.0))
                _require(m <= MAX_BENNETT_COLS,
                         f"grid point n={n}, s={s} gives m={m} > cap {MAX_BENNETT_COLS}")
        for q in _as_exp_list(p["q"]):
            for pp in _as_exp_list(p["p"]):
                _require(q <= pp, f"need q <= p, got q={q}, p={pp}")
    elif cfg.experiment == "identity_l2_growth":
        for key in ("n", "p", "q"):
            _require(key in p and len(p[key]) > 0, f"identity_l2_growth needs grid {key!r}")
        for q, pp in zip(_as_exp_list(p["q"]), _as_exp_list(p["p"])):
            _require(q <= pp, f"need q <= p, got q={q}, p={pp}")
    elif cfg.experiment == "tomczak_suite":
        _require("n" in p and len(p["n"]) > 0, "tomczak_suite needs a grid of ranks 'n'")
        _require(all(int(n) >= 1 for n in p["n"]), "ranks must be positive")
    elif cfg.experiment == "quotient_suite":
        insts = p.get("instances", ["scalar", "id_l2_2", "random_linf3"])
        _require(len(insts) > 0, "quotient_suite needs instances")
        for name in insts:
            _require(name in ("scalar", "id_l2_2", "random_linf3"),
                     f"unknown quotient instance {name!r}")
    elif cfg.experiment == "cotype_suite":
        _require("spaces" in p and len(p["spaces"]) > 0, "cotype_suite needs 'spaces'")
        _require("q" in p and len(p["q"]) > 0, "cotype_suite needs a grid 'q'")
        for q in _as_exp_list(p["q"]):
            _require(q >= 2, f"cotype needs q >= 2, got {q}")
    elif cfg.experiment == "pi1_log_example":
        for key in ("n", "k"):
            _require(key in p and len(p[key]) > 0, f"pi1_log_example needs grid {key!r}")
        for n in p["n"]:
            for k in p["k"]:
                s = 2.0 * (1.0 + math.log(int(k)))
                m = math.ceil(float(n) ** (s / 2.0))
                _require(m <= MAX_BENNETT_COLS,
                         f"grid point n={n}, k={k} gives m={m} > cap {MAX_BENNETT_COLS}")


def _bennett_t(q: Exponent, s: Exponent) -> Exponent:
    """t from 1/s = (1-theta)/q' + theta/2 and 1/t = 1/q - theta/2."""
    qprime = conjugate(q)
    denom = Fraction(1, 2) - qprime.reciprocal
    if denom == 0:
        raise ConfigError("q = 2 leaves theta undetermined")
    theta = (s.reciprocal - qprime.reciprocal) / denom
    if not 0 < theta < 1:
        raise ConfigError(f"(q={q}, s={s}) gives theta={theta} outside (0,1)")
    return from_reciprocal(q.reciprocal - theta / 2)


def _fit_slope(ks, ratios):
    pts = [(math.log(k), math.log(r)) for k, r in zip(ks, ratios) if r > 0 and k > 0]
    if len(pts) < 2 or len({x for x, _ in pts}) < 2:
        return float("nan")
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


def _run_bennett(cfg: ExperimentConfig):
    p_grid = cfg.params
    records = []
    k_list = [int(k) for k in p_grid.get("k", [])]
    for n in [int(v) for v in p_grid["n"]]:
        for s in _as_exp_list(p_grid["s"]):
            m = math.ceil(n ** (float(s) / 2.0))
            ks = [k for k in (k_list or _default_k_grid(m)) if 1 <= k <= m]
            for q in _as_exp_list(p_grid["q"]):
                t = _bennett_t(q, s)
                qprime = conjugate(q)
                for pp in _as_exp_list(p_grid["p"]):
                    expected = float(pp.reciprocal - t.reciprocal)
                    K_proxy = min(4 * n * math.ceil(float(s)), 1 << 20)
                    for seed in cfg.seeds:
                        t0 = time.time()
                        A = bennett_sample(m, n, qprime, seed)
                        lower = m ** float(pp.reciprocal) * math.sqrt(n)
                        basis = VectorFamily(np.eye(m), qprime)
                        basis_val = strong_norm(basis, A, pp)
                        basis_ok = (
                            abs(basis_val - lower) <= 1e-9 * lower
                            and abs(weak_norm(basis, q).value - 1.0) <= 1e-9
                        )
                        ratios = []
                        group = []
                        for k in ks:
                            est = pi_estimate(A, SummingParams(pp, q, k), cfg.budget(seed))
                            ratio = est.value / lower
                            ratios.append(ratio)
                            group.append(ExperimentRecord(
                                "bennett_ratio",
                                {"n": n, "m": m, "s": str(s), "q": str(q), "p": str(pp),
                                 "t": str(t), "k": k, "K_proxy": K_proxy},
                                {"pi_k": est.value, "certified_lower": lower,
                                 "basis_exact": basis_ok, "ratio": ratio,
                                 "expected_slope": expected},
                                seed,
                            ))
                        slope = _fit_slope(ks, ratios)
                        wall = time.time() - t0
                        for rec in group:
                            rec.metrics["slope"] = slope
                            rec.wall_time_s = wall / max(len(group), 1)
                        records.extend(group)
    return records


def _default_k_grid(m: int) -> list[int]:
    ks = []
    k = 1
    while k < m:
        ks.append(k)
        k *= 2
    ks.append(m)
    return sorted(set(ks))


def _run_identity(cfg: ExperimentConfig):
    p_grid = cfg.params
    records = []
    k_list = [int(k) for k in p_grid.get("k", [])]
    for n in [int(v) for v in p_grid["n"]]:
        for pp, q in zip(_as_exp_list(p_grid["p"]), _as_exp_list(p_grid["q"])):
            default_k = sorted({n, math.ceil(n ** (float(q) / 2.0))})
            ks = k_list or default_k
            T = inclusion(n, 2, 2)
            basis = VectorFamily(np.eye(n), 2)
            basis_val = strong_norm(basis, T, q) / weak_norm(basis, q).value
            basis_expected = n ** float(q.reciprocal)
            for seed in cfg.seeds:
                for k in ks:
                    t0 = time.time()
                    est = pi_estimate(T, SummingParams(pp, q, k), cfg.budget(seed))
                    bound = k ** float(pp.reciprocal)
                    records.append(ExperimentRecord(
                        "identity_l2_growth",
                        {"n": n, "p": str(pp), "q": str(q), "k": k},
                        {"pi_k": est.value, "k_bound": bound, "ratio": est.value / bound,
                         "basis_value": basis_val, "basis_expected": basis_expected},
                        seed, time.time() - t0,
                    ))
    return records


def _random_rank_n(n: int, d: int, domain: str, rng) -> MatrixOperator:
    G = rng.standard_normal((d, n)) @ rng.standard_normal((n, d))
    u = Exponent("inf") if domain == "linf" else Exponent(2)
    return MatrixOperator(G, u, 2)


def _run_tomczak(cfg: ExperimentConfig):
    p_grid = cfg.params
    d = int(p_grid.get("dim", [5])[0]) if isinstance(p_grid.get("dim"), list) else int(p_grid.get("dim", 5))
    domains = p_grid.get("domains", ["l2", "linf"])
    p1_list = _as_exp_list(p_grid.get("p1", ["4"]))
    records = []
    for n in [int(v) for v in p_grid["n"]]:
        for domain in domains:
            for seed in cfg.seeds:
                t0 = time.time()
                rng = np.random.default_rng(seed * 1000 + n)
                T = _random_rank_n(n, d, domain, rng)
                budget = cfg.budget(seed)
                small = pi_estimate(T, SummingParams(2, 2, n), budget)
                big = pi_estimate(T, SummingParams(2, 2, 4 * n), budget,
                                  warm_starts=[small.witness.padded(3 * n)] if small.witness is not None else ())
                factor = math.sqrt(2.0)
                records.append(ExperimentRecord(
                    "tomczak_suite",
                    {"inequality": "tomczak", "n": n, "d": d, "domain": domain,
                     "p": "2", "q": "2", "k_small": n, "k_big": 4 * n},
                    {"val_small": small.value, "val_big": big.value,
                     "ratio": big.value / small.value if small.value else 1.0,
                     "bound_factor": factor,
                     "holds": big.value <= factor * 1.01 * small.value},
                    seed, time.time() - t0,
                ))
                for p1 in p1_list:
                    small1 = pi_estimate(T, SummingParams(p1, 1, n), budget)
                    big1 = pi_estimate(T, SummingParams(p1, 1, 4 * n), budget,
                                       warm_starts=[small1.witness.padded(3 * n)] if small1.witness is not None else ())
                    records.append(ExperimentRecord(
                        "tomczak_suite",
                        {"inequality": "koenig_tzafriri", "n": n, "d": d, "domain": domain,
                         "p": str(p1), "q": "1", "k_small": n, "k_big": 4 * n},
                        {"val_small": small1.value, "val_big": big1.value,
                         "ratio": big1.value / small1.value if small1.value else 1.0,
                         "bound_factor": float("nan"), "holds": True},
                        seed, 0.0,
                    ))
    return records


def _quotient_instance(name: str, seed: int):
    if name == "scalar":
        T = MatrixOperator([[1.0]], "inf", 2)
        return QuotientInstance(T, 2, 1, 2, "inf", 1)
    if name == "id_l2_2":
        return QuotientInstance(inclusion(2, 2, 2), 2, 2, 1, 2, 2)
    if name == "random_linf3":
        rng = np.random.default_rng(seed + 977)
        T = MatrixOperator(rng.standard_normal((3, 3)), "inf", 2)
        return QuotientInstance(T, 2, 1, 2, "inf", 3)
    raise ConfigError(f"unknown quotient instance {name!r}")


def _run_quotient(cfg: ExperimentConfig):
    names = cfg.params.get("instances", ["scalar", "id_l2_2", "random_linf3"])
    n_candidates = int(cfg.params.get("candidates", 25))
    records = []
    for name in names:
        for seed in cfg.seeds:
            t0 = time.time()
            inst = _quotient_instance(name, seed)
            rep = quotient_verify(inst, seed=seed, n_candidates=n_candidates,
                                  budget=cfg.budget(seed))
            records.append(ExperimentRecord(
                "quotient_suite",
                {"instance": name, "p": str(inst.p), "q": str(inst.q),
                 "r": str(inst.r), "s": str(inst.s), "k": inst.k,
                 "candidates": n_candidates},
                {"lhs": rep.lhs.value, "rhs": rep.rhs.value, "ratio": rep.ratio,
                 "holds": rep.holds, "sound": rep.context["sound"],
                 "sound_violations": rep.context["sound_violations"]},
                seed, time.time() - t0,
            ))
    return records


def parse_space(desc: str, seed: int = 0) -> tuple[str, EmbeddedNorm]:
    """Space descriptors: 'l2:3', 'l1:2', 'linf:4', '4/3:2', 'random:3:5'."""
    parts = str(desc).split(":")
    if parts[0] == "random":
        n, nprime = int(parts[1]), int(parts[2]) if len(parts) > 2 else int(parts[1])
        rng = np.random.default_rng(seed + 131)
        A = rng.standard_normal((nprime, n)) + np.vstack([np.eye(n), np.zeros((nprime - n, n))])
        return desc, EmbeddedNorm(MatrixOperator(A, 2, 2))
    tag, n = parts[0], int(parts[1])
    exps = {"l1": "1", "l2": "2", "linf": "inf"}
    e = exps.get(tag, tag)
    return desc, lp_space(n, e)


def _run_cotype(cfg: ExperimentConfig):
    p_grid = cfg.params
    mc = int(p_grid.get("mc_samples", 20000))
    kind = str(p_grid.get("kind", "gaussian"))
    k_list = [int(k) for k in p_grid.get("k", [])]
    records = []
    for desc in p_grid["spaces"]:
        for q in _as_exp_list(p_grid["q"]):
            for seed in cfg.seeds:
                name, E = parse_space(desc, seed)
                n = E.dim
                ks = k_list or [min(2 * n, 12)]
                for k in ks:
                    t0 = time.time()
                    est = cotype_estimate(E, CotypeParams(q, k, kind, mc), cfg.budget(seed))
                    bound = n ** float(q.reciprocal)
                    holds = est.value <= 1.02 * bound if kind == "gaussian" else True
                    records.append(ExperimentRecord(
                        "cotype_suite",
                        {"space": name, "n": n, "q": str(q), "k": k, "kind": kind},
                        {"value": est.value, "dim_bound": bound,
                         "ratio": est.value / bound, "holds": holds},
                        seed, time.time() - t0,
                    ))
    return records


def _run_pi1_log(cfg: ExperimentConfig):
    p_grid = cfg.params
    records = []
    for n in [int(v) for v in p_grid["n"]]:
        for k in [int(v) for v in p_grid["k"]]:
            s = 2.0 * (1.0 + math.log(k))
            m = math.ceil(n ** (s / 2.0))
            for seed in cfg.seeds:
                t0 = time.time()
                A = bennett_sample(m, n, "inf", seed)
                est = pi_estimate(A, SummingParams(1, 1, k), cfg.budget(seed))
                lower = m * math.sqrt(n)
                ratio = est.value / lower
                envelope = math.sqrt((1.0 + math.log(k)) / n)
                records.append(ExperimentRecord(
                    "pi1_log_example",
                    {"n": n, "k": k, "s": s, "m": m},
                    {"pi1_k": est.value, "certified_lower": lower, "ratio": ratio,
                     "envelope": envelope, "c_hat": ratio / envelope},
                    seed, time.time() - t0,
                ))
    return records


_RUNNERS = {
    "bennett_ratio": _run_bennett,
    "identity_l2_growth": _run_identity,
    "tomczak_suite": _run_tomczak,
    "quotient_suite": _run_quotient,
    "cotype_suite": _run_cotype,
    "pi1_log_example": _run_pi1_log,
}


def _format_cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def render_csv(experiment: str, records: list[ExperimentRecord], seeds) -> str:
    columns = COLUMNS[experiment]
    buf = io.StringIO()
    buf.write(f"# pqsumming {__version__}\n")
    buf.write(f"# experiment: {experiment}\n")
    buf.write(f"# seeds: {','.join(str(s) for s in seeds)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for rec in records:
        writer.writerow([_format_cell(v) for v in rec.row(columns)])
    return buf.getvalue()


def run_experiment(cfg: ExperimentConfig, out_path=None, threads: int | None = None):
    """Validate, run and write one experiment; returns (csv_path, records).

    One seed is one unit of work: the full grid runs per seed and the
    per-seed record lists are concatenated in seed order, so the CSV bytes
    do not depend on the degree of parallelism.
    """
    validate_config(cfg)
    threads = cfg.threads if threads is None else threads
    runner = _RUNNERS[cfg.experiment]
    subs = [
        ExperimentConfig(cfg.experiment, cfg.params, [seed], cfg.ascent, cfg.out, cfg.plot, 1)
        for seed in cfg.seeds
    ]
    if threads > 1 and len(subs) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_seed = list(pool.map(runner, subs))
    else:
        per_seed = [runner(sub) for sub in subs]
    records = [rec for group in per_seed for rec in group]
    text = render_csv(cfg.experiment, records, cfg.seeds)
    path = Path(out_path or cfg.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    if cfg.plot:
        from .plots import render_figure

        render_figure(cfg.experiment, records, path.with_suffix(".png"))
    return path, records
