import csv
import io
import json

import pytest

from maxfield.errors import ConfigError, EmptyInput
from maxfield.experiment import SCHEMA, ExperimentConfig, run_experiment


def test_degenerate_configs():
    with pytest.raises(EmptyInput):
        run_experiment(ExperimentConfig(N=0))
    with pytest.raises(ConfigError):
        run_experiment(ExperimentConfig(R=[1.0], h=0.3))
    with pytest.raises(ConfigError):
        run_experiment(ExperimentConfig(k=[1.5]))
    with pytest.raises(ConfigError):
        ExperimentConfig.preset("table9")


def test_report_contents():
    cfg = ExperimentConfig.preset("table1", R=[1], N=400, seed=3)
    rep = run_experiment(cfg)
    row = rep.rows[0]
    assert [rk.k for rk in row.by_k] == [2, 3]
    assert row.paper_Q == 3.12 and row.by_k[0].paper["M"] == 4.38
    assert row.Q < row.by_k[0].M < row.by_k[1].M
    assert row.by_k[0].AP == pytest.approx(row.by_k[0].A * row.by_k[0].P)

    d = json.loads(rep.to_json())
    assert d["schema"] == SCHEMA and d["config"]["seed"] == 3
    rows = list(csv.DictReader(io.StringIO(rep.to_csv())))
    assert len(rows) == 2 and rows[1]["k"] == "3" and rows[0]["paper_M"] == "4.38"


def test_custom_rows_have_no_reference():
    rep = run_experiment(ExperimentConfig(R=[0.5], k=[2], N=50, seed=1))
    assert rep.rows[0].paper_Q is None and rep.rows[0].by_k[0].paper is None


def test_methods_use_independent_streams():
    a = run_experiment(ExperimentConfig(R=[1.0], k=[2], N=200, seed=5)).rows[0]
    b = run_experiment(ExperimentConfig(R=[1.0], k=[2, 3], N=200, seed=5)).rows[0]
    # adding a cut-off value leaves the other columns untouched
    assert a.Q == b.Q and a.by_k[0].M == b.by_k[0].M
