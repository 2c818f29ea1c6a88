"""Multi-start experiment driver.

A run draws one start vector per trial with entries uniform in ``[-1, 1]``
from a single seeded stream, solves from each, writes one JSON line per
trial and summarizes by clustering the converged eigenvalues.
"""
from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import IO, Optional, Union

import numpy as np

from .bform import BForm
from .errors import ConfigError, InvalidSpec
from .generators import BGenSpec, GenSpec, gen_bform, gen_tensor, rng
from .io import parse_tensor_file
from .manifold import Objective, Sense
from .solver import SolveConfig, solve
from .tensor import SymTensor

__all__ = [
    "RunConfig",
    "Cluster",
    "Report",
    "load_config",
    "config_from_dict",
    "build_objective",
    "cluster_eigenvalues",
    "run_trials",
    "format_summary",
]

CLUSTER_TOL = 5e-5


@dataclass
class RunConfig:
    tensor: Union[GenSpec, str]
    bform: BGenSpec = field(default_factory=BGenSpec)
    sense: Sense = Sense.MAXIMIZE
    trials: int = 100
    seed: int = 0
    solver: SolveConfig = field(default_factory=SolveConfig)
    workers: int = 1

    def __post_init__(self):
        self.sense = Sense.parse(self.sense)
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    def to_dict(self) -> dict:
        tensor = {"file": self.tensor} if isinstance(self.tensor, str) else self.tensor.to_dict()
        return {
            "tensor": tensor,
            "bform": self.bform.to_dict(),
            "sense": self.sense.value,
            "trials": self.trials,
            "seed": self.seed,
            "solver": asdict(self.solver),
            "workers": self.workers,
        }


def _solver_from_dict(doc: dict) -> SolveConfig:
    known = {f.name for f in fields(SolveConfig)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown solver keys: {sorted(unknown)}")
    doc = dict(doc)
    if isinstance(doc.get("delta"), str):
        if doc["delta"].lower() not in ("hessian", "auto"):
            raise ConfigError(f"delta must be a number or 'hessian', got {doc['delta']!r}")
        doc["delta"] = None
    try:
        return SolveConfig(**doc)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def config_from_dict(doc: dict, base: Path | None = None) -> RunConfig:
    """Build a :class:`RunConfig` from a parsed JSON document.

    Relative tensor file paths are resolved against ``base``.
    """
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(doc) - {"tensor", "bform", "sense", "trials", "seed", "solver", "workers"}
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "tensor" not in doc:
        raise ConfigError("config needs a 'tensor' entry")
    try:
        t = doc["tensor"]
        if isinstance(t, str) or (isinstance(t, dict) and "file" in t):
            path = Path(t if isinstance(t, str) else t["file"])
            if base is not None and not path.is_absolute():
                path = base / path
            tensor: Union[GenSpec, str] = str(path)
        elif isinstance(t, dict):
            tensor = GenSpec(**t)
        else:
            raise ConfigError("tensor must be an object or a file path")
        bform = BGenSpec(**doc.get("bform", {}))
        return RunConfig(
            tensor=tensor,
            bform=bform,
            sense=doc.get("sense", "max"),
            trials=int(doc.get("trials", 100)),
            seed=int(doc.get("seed", 0)),
            solver=_solver_from_dict(doc.get("solver", {})),
            workers=int(doc.get("workers", 1)),
        )
    except (InvalidSpec, TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None


def load_config(path) -> RunConfig:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load config {path}: {exc}") from None
    return config_from_dict(doc, base=path.parent)


def build_tensor(spec: Union[GenSpec, str]) -> SymTensor:
    if isinstance(spec, str):
        return parse_tensor_file(spec)
    return gen_tensor(spec)


def build_bform(spec: BGenSpec, dim: int) -> BForm:
    if spec.dim is not None and spec.dim != dim:
        raise ConfigError(f"bform dim {spec.dim} differs from tensor dim {dim}")
    if spec.dim is None:
        spec = BGenSpec(spec.family, spec.order, dim, spec.seed)
    return gen_bform(spec)


def build_objective(cfg: RunConfig) -> Objective:
    A = build_tensor(cfg.tensor)
    return Objective(A, build_bform(cfg.bform, A.dim), cfg.sense)


@dataclass
class Cluster:
    lam: float
    occ: int
    mean_iter: float
    mean_backtracks: float
    mean_time_ms: float


@dataclass
class Report:
    records: list[dict]
    clusters: list[Cluster]
    trials: int
    suc: int

    @property
    def largest(self) -> Optional[Cluster]:
        return max(self.clusters, key=lambda c: c.lam) if self.clusters else None

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "suc": self.suc,
            "clusters": [asdict(c) for c in self.clusters],
        }


def cluster_eigenvalues(lams, tol: float = CLUSTER_TOL) -> list[np.ndarray]:
    """Group values whose sorted neighbours lie within ``tol``; returns index arrays."""
    lams = np.asarray(lams, dtype=np.float64)
    if lams.size == 0:
        return []
    order = np.argsort(lams, kind="stable")
    breaks = np.nonzero(np.diff(lams[order]) > tol)[0] + 1
    return np.split(order, breaks)


def _one_trial(args):
    obj, solver_cfg, t, u0 = args
    t0 = time.perf_counter()
    res = solve(obj, u0, solver_cfg)
    ms = (time.perf_counter() - t0) * 1e3
    return {
        "trial": t,
        "lambda": float(res.lam),
        "res": float(res.residual),
        "iters": res.iterations,
        "backtracks": res.total_backtracks,
        "time_ms": round(ms, 3),
        "converged": bool(res.converged),
    }


def run_trials(cfg: RunConfig, out: IO[str] | None = None, obj: Objective | None = None) -> Report:
    """Run ``cfg.trials`` solves; JSONL records go to ``out`` in trial order."""
    obj = obj or build_objective(cfg)
    gen = rng(cfg.seed)
    starts = [gen.uniform(-1.0, 1.0, obj.dim) for _ in range(cfg.trials)]
    jobs = [(obj, cfg.solver, t, u) for t, u in enumerate(starts)]
    records = []
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            # map yields in submission order, so output order is stable
            it = pool.map(_one_trial, jobs, chunksize=max(1, cfg.trials // (4 * cfg.workers)))
            for rec in it:
                records.append(rec)
                if out is not None:
                    out.write(json.dumps(rec) + "\n")
    else:
        for job in jobs:
            rec = _one_trial(job)
            records.append(rec)
            if out is not None:
                out.write(json.dumps(rec) + "\n")
    ok = [r for r in records if r["converged"]]
    clusters = []
    for grp in cluster_eigenvalues([r["lambda"] for r in ok]):
        rs = [ok[i] for i in grp]
        clusters.append(
            Cluster(
                lam=float(np.mean([r["lambda"] for r in rs])),
                occ=len(rs),
                mean_iter=float(np.mean([r["iters"] for r in rs])),
                mean_backtracks=float(np.mean([r["backtracks"] for r in rs])),
                mean_time_ms=float(np.mean([r["time_ms"] for r in rs])),
            )
        )
    return Report(records=records, clusters=clusters, trials=cfg.trials, suc=len(ok))


def format_summary(report: Report) -> str:
    lines = [f"{'lambda':>14} {'occ':>6} {'iter':>7} {'iter-in':>8} {'time_ms':>9}"]
    for c in sorted(report.clusters, key=lambda c: -c.lam):
        lines.append(
            f"{c.lam:>14.6g} {c.occ:>6d} {c.mean_iter:>7.1f} {c.mean_backtracks:>8.1f} {c.mean_time_ms:>9.3f}"
        )
    lines.append(f"suc {report.suc}/{report.trials}")
    return "\n".join(lines)
