"""Comparison of the normalized sampler with Schlather's cut-off algorithm.

For each ``(R, k)`` row the Smith model is simulated ``N`` times with both
samplers and the report collects counted means, their formula
counterparts and the ``Q / M_k = A_{R,k} P_{R,k}`` factorization.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field

from . import _backend
from .errors import ConfigError, EmptyInput
from .estimators import (A_factor, P_factor_with_se, estimate_counts, factorization_gap,
                         formula_estimate_M, formula_estimate_Q)
from .geometry import RectDomain
from .rng import derive_seed
from .shapes import GaussianShape, SpectralModel
from .simulators import (run_replications, schlather_params, simulate_normalized,
                         simulate_schlather)

SCHEMA = "maxfield.experiment/1"

# Published reference values: R -> (Q, {k: (M_k, ratio, A, P)})
PAPER_TABLE1 = {
    1: (3.12, {2: (4.38, 0.71, 0.75, 0.94), 3: (5.46, 0.57, 0.56, 1.00)}),
    2: (5.73, {2: (7.57, 0.76, 0.81, 0.94), 3: (8.93, 0.64, 0.65, 0.98)}),
    5: (15.82, {2: (18.82, 0.84, 0.89, 0.95), 3: (19.98, 0.79, 0.78, 1.02)}),
    10: (35.63, {2: (40.57, 0.88, 0.94, 0.94), 3: (41.16, 0.87, 0.87, 1.00)}),
    50: (239.75, {2: (257.61, 0.93, 0.99, 0.94), 3: (247.35, 0.97, 0.97, 1.00)}),
    100: (540.44, {2: (579.11, 0.93, 0.99, 0.94), 3: (550.70, 0.98, 0.98, 1.00)}),
}
PAPER_TABLE2 = {
    1: (8.14, {2: (14.86, 0.55, 0.56, 0.96), 3: (26.37, 0.31, 0.32, 0.96)}),
    2: (26.32, {2: (40.17, 0.66, 0.66, 1.00), 3: (61.07, 0.43, 0.42, 1.03)}),
    5: (150.89, {2: (189.83, 0.79, 0.80, 0.99), 3: (247.10, 0.61, 0.61, 1.00)}),
    10: (636.03, {2: (727.33, 0.87, 0.88, 0.99), 3: (839.55, 0.76, 0.75, 1.01)}),
}

PRESETS = {
    "table1": {"dim": 1, "h": 0.1, "N": 5000, "R": [1, 2, 5, 10, 50, 100], "paper": PAPER_TABLE1},
    "table2": {"dim": 2, "h": 0.25, "N": 2500, "R": [1, 2, 5, 10], "paper": PAPER_TABLE2},
}

_TAG_NORMALIZED = 0
_TAG_SCHLATHER = 1


@dataclass
class ExperimentConfig:
    dim: int = 1
    h: float = 0.1
    sigma: float = 1.0
    R: list = field(default_factory=lambda: [1.0])
    k: list = field(default_factory=lambda: [2, 3])
    N: int = 5000
    seed: int = 0
    threads: int = 1
    name: str = "custom"

    def validate(self):
        if self.N < 1:
            raise EmptyInput("N must be at least 1")
        if self.N < 2:
            raise EmptyInput("N must be at least 2 to estimate standard errors")
        if not self.R:
            raise ConfigError("R", "need at least one R")
        for k in self.k:
            if int(k) != k or k < 1:
                raise ConfigError("cutoff_k", "k must be a positive integer")
        for R in self.R:
            RectDomain(self.dim, float(R), self.h)

    @classmethod
    def preset(cls, name, **overrides):
        if name not in PRESETS:
            raise ConfigError("experiment", f"unknown preset {name!r}")
        pre = PRESETS[name]
        cfg = cls(dim=pre["dim"], h=pre["h"], N=pre["N"], R=list(pre["R"]), name=name)
        for key, val in overrides.items():
            if val is not None:
                setattr(cfg, key, val)
        return cfg


@dataclass
class RowK:
    k: int
    M: float
    M_se: float
    M_formula: float
    M_formula_se: float
    ratio: float
    ratio_se: float
    A: float
    P: float
    P_se: float
    AP: float
    factorization_gap: float
    factorization_se: float
    volume: float
    paper: dict | None = None


@dataclass
class ReportRow:
    R: float
    dim: int
    N: int
    c: float
    Q: float
    Q_se: float
    Q_formula: float
    Q_formula_se: float
    by_k: list
    paper_Q: float | None = None


@dataclass
class ExperimentReport:
    config: dict
    rows: list
    backend: str
    schema: str = SCHEMA

    def to_dict(self):
        return {"schema": self.schema, "backend": self.backend, "config": self.config,
                "rows": [asdict(r) for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    CSV_FIELDS = ["R", "k", "dim", "N", "c", "Q", "Q_se", "Q_formula", "M", "M_se",
                  "M_formula", "ratio", "ratio_se", "A", "P", "P_se", "AP",
                  "factorization_gap", "factorization_se",
                  "paper_Q", "paper_M", "paper_ratio", "paper_A", "paper_P"]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=self.CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for row in self.rows:
            for rk in row.by_k:
                paper = rk.paper or {}
                w.writerow({
                    "R": row.R, "k": rk.k, "dim": row.dim, "N": row.N, "c": repr(row.c),
                    "Q": repr(row.Q), "Q_se": repr(row.Q_se), "Q_formula": repr(row.Q_formula),
                    "M": repr(rk.M), "M_se": repr(rk.M_se), "M_formula": repr(rk.M_formula),
                    "ratio": repr(rk.ratio), "ratio_se": repr(rk.ratio_se), "A": repr(rk.A),
                    "P": repr(rk.P), "P_se": repr(rk.P_se), "AP": repr(rk.AP),
                    "factorization_gap": repr(rk.factorization_gap),
                    "factorization_se": repr(rk.factorization_se),
                    "paper_Q": row.paper_Q if row.paper_Q is not None else "",
                    "paper_M": paper.get("M", ""), "paper_ratio": paper.get("ratio", ""),
                    "paper_A": paper.get("A", ""), "paper_P": paper.get("P", ""),
                })
        return buf.getvalue()


def _paper_lookup(cfg, R):
    pre = PRESETS.get(cfg.name)
    if pre is None or cfg.dim != pre["dim"] or cfg.h != pre["h"] or cfg.sigma != 1.0:
        return None
    return pre["paper"].get(int(R)) if float(R).is_integer() else None


def row_seed(seed, method_tag, R, k=0):
    """Independent master seed per (method, R, k); stream index = replication."""
    return derive_seed(seed, method_tag, int(round(R * 1000)), int(k))


def run_row(cfg: ExperimentConfig, R: float, keep=False):
    dom = RectDomain(cfg.dim, float(R), cfg.h)
    model = SpectralModel(GaussianShape(cfg.sigma, cfg.dim), dom)
    norm = run_replications(lambda s: simulate_normalized(model, s), cfg.N,
                            row_seed(cfg.seed, _TAG_NORMALIZED, R), cfg.threads)
    Q, Q_se = estimate_counts(norm)
    Qf, Qf_se = formula_estimate_Q(norm, model.c)
    paper = _paper_lookup(cfg, R)
    by_k = []
    schl_sets = {}
    for k in cfg.k:
        k = int(k)
        schl = run_replications(lambda s: simulate_schlather(model, k, s), cfg.N,
                                row_seed(cfg.seed, _TAG_SCHLATHER, R, k), cfg.threads)
        vol = schlather_params(model, k)["volume"]
        M, M_se = estimate_counts(schl)
        Mf, Mf_se = formula_estimate_M(schl, vol, model.C)
        ratio = Q / M
        ratio_se = ratio * math.sqrt((Q_se / Q) ** 2 + (M_se / M) ** 2)
        A = A_factor(float(R), cfg.sigma, k, cfg.dim)
        P, P_se = P_factor_with_se(norm, schl)
        gap, gap_se = factorization_gap(norm, schl, model.c, vol, model.C)
        ref = None
        if paper is not None and k in paper[1]:
            pm = paper[1][k]
            ref = {"M": pm[0], "ratio": pm[1], "A": pm[2], "P": pm[3]}
        by_k.append(RowK(k=k, M=M, M_se=M_se, M_formula=Mf, M_formula_se=Mf_se,
                         ratio=ratio, ratio_se=ratio_se, A=A, P=P, P_se=P_se, AP=A * P,
                         factorization_gap=gap, factorization_se=gap_se, volume=vol,
                         paper=ref))
        if keep:
            schl_sets[k] = schl
    row = ReportRow(R=float(R), dim=cfg.dim, N=cfg.N, c=model.c, Q=Q, Q_se=Q_se,
                    Q_formula=Qf, Q_formula_se=Qf_se, by_k=by_k,
                    paper_Q=paper[0] if paper else None)
    if keep:
        return row, norm, schl_sets
    return row


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    cfg.validate()
    rows = [run_row(cfg, R) for R in cfg.R]
    return ExperimentReport(config=asdict(cfg), rows=rows, backend=_backend.BACKEND)
