import json

import numpy as np
import pytest

from sdislab.engine import ConfigurationError
from sdislab.harness import (
    BatteryOptions,
    DataError,
    GridSpec,
    PositionsTable,
    enumerate_grid,
    load_poc_groups,
    read_positions_csv,
    recommended_region_flag,
    run_battery,
    run_experiment,
    sb_battery,
    summarize_poc,
    write_poc_summary,
    write_positions_csv,
)
from sdislab.harness.grid import run_seed

TINY = GridSpec(sdis_list=("sat", "cotn"), population_sizes=(6,), F_values=(0.5, 1.5),
                Cr_values=(0.9,), runs_per_config=3, n=4, budget=120, base_seed=10)


def test_grid_enumeration_and_seeds():
    cells = enumerate_grid(TINY)
    assert len(cells) == TINY.size == 4
    assert [str(c.sdis) for c in cells] == ["sat", "sat", "cotn", "cotn"]
    assert [c.seed for c in cells] == [10, 13, 16, 19]
    assert [run_seed(cells[1], r) for r in range(3)] == [13, 14, 15]


def test_grid_text_round_trip():
    assert GridSpec.from_text(TINY.to_text()) == TINY


def test_grid_text_parsing():
    text = "# demo\nmutations = rand1, best1\nF_values: 0.5\nCr_values = 0.1,0.9\nruns_per_config = 2\n"
    spec = GridSpec.from_text(text)
    assert spec.mutations == ("rand1", "best1") and spec.F_values == (0.5,)
    assert spec.size == 2 * 6 * 2
    assert spec.effective_budget == 300000


@pytest.mark.parametrize("text", ["nonsense\n", "colour = red\n", "n = many\n", "mutations = rand7\n"])
def test_grid_text_errors(text):
    with pytest.raises(ConfigurationError):
        GridSpec.from_text(text)


def test_recommended_region():
    assert recommended_region_flag(0.7, 0.99)
    assert not recommended_region_flag(0.7, 0.5)


def test_experiment_writes_outputs(tmp_path):
    res = run_experiment(TINY, tmp_path)
    assert not res.failed and len(res.records) == 12
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert [c["status"] for c in manifest["cells"]] == ["ok"] * 4
    table = read_positions_csv(tmp_path / manifest["cells"][0]["file"])
    assert table.positions.shape == (3, 4)
    assert table.seeds.tolist() == [10, 11, 12]
    viol = (tmp_path / manifest["cells"][0]["file"].replace(".csv", ".violations.csv")).read_text()
    assert viol.splitlines()[0].startswith("run,seed,infeasible,dim_0")


def test_failed_cell_is_isolated(tmp_path):
    spec = GridSpec(mutations=("rand1", "rand-to-best2"), sdis_list=("sat",), population_sizes=(5,),
                    F_values=(0.5,), Cr_values=(0.5,), runs_per_config=2, n=3, budget=50)
    res = run_experiment(spec, tmp_path)
    assert len(res.failed) == 1 and "N >= 6" in res.failed[0].error
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert [c["status"] for c in manifest["cells"]] == ["ok", "failed"]


def test_poc_summary_round_trip(tmp_path):
    run_experiment(TINY, tmp_path)
    groups = load_poc_groups(tmp_path)
    summaries = summarize_poc(groups, bins=10)
    assert len(summaries) == 4
    for s in summaries:
        assert s.q1 <= s.median <= s.q3 and sum(s.histogram) == 3
    summary_path, hist_path = write_poc_summary(summaries, tmp_path, bins=10)
    lines = summary_path.read_text().splitlines()
    assert lines[0] == "mutation,crossover,sdis,N,F,Cr,median,iqr" and len(lines) == 5
    assert len(hist_path.read_text().splitlines()) == 1 + 4 * 10


def test_summary_quantiles_are_type7():
    from sdislab.engine import Configuration

    s = summarize_poc({Configuration(n=2): [0.1, 0.2, 0.4, 0.8]})[0]
    assert (s.q1, s.median, s.q3) == pytest.approx((0.175, 0.3, 0.5))


def _write(path, text):
    path.write_text(text)
    return path


@pytest.mark.parametrize("text,msg", [
    ("", "empty"),
    ("a,b\n", "header"),
    ("run,seed,poc,dim_0\n", "no data"),
    ("run,seed,poc,dim_0\n0,0,0\n", "row 2"),
    ("run,seed,poc,dim_0\n0,0,0,abc\n", "row 2"),
    ("run,seed,poc,dim_0\n0,0,0,1.5\n", "outside"),
    ("run,seed,poc,dim_0\n0,0,0,nan\n", "non-finite"),
])
def test_read_positions_errors(tmp_path, text, msg):
    with pytest.raises(DataError, match=msg):
        read_positions_csv(_write(tmp_path / "x.csv", text))


def test_read_missing_file(tmp_path):
    with pytest.raises(DataError):
        read_positions_csv(tmp_path / "missing.csv")


def test_positions_csv_round_trip_is_exact(tmp_path):
    rng = np.random.default_rng(0)
    table = PositionsTable(np.arange(5), np.arange(5) + 100, rng.random(5), rng.random((5, 3)))
    write_positions_csv(tmp_path / "p.csv", table)
    back = read_positions_csv(tmp_path / "p.csv")
    assert np.array_equal(back.positions, table.positions) and np.array_equal(back.pocs, table.pocs)


def test_battery_on_uniform_and_outputs(tmp_path):
    rng = np.random.default_rng(1)
    table = PositionsTable(np.arange(60), np.arange(60), np.zeros(60), rng.random((60, 8)))
    write_positions_csv(tmp_path / "u.csv", table)
    opts = BatteryOptions(permutations=200, bootstrap=200, threshold_simulations=1000)
    res = sb_battery(tmp_path / "u.csv", opts, out_dir=tmp_path / "out")
    assert res.clean
    assert set(res.reports) == {"ad_default", "ad_transformed", "ad_aggregated", "spacing",
                                "ks_pairs", "corr_outliers", "corr_permutation"}
    csv_text = (tmp_path / "out" / "u.battery.csv").read_text().splitlines()
    assert csv_text[0] == "test,dim,statistic,p_raw,p_adj,reject"
    doc = json.loads((tmp_path / "out" / "u.battery.json").read_text())
    assert doc["overview"]["n"] == 8


def test_battery_is_seeded():
    M = np.random.default_rng(2).random((40, 5))
    opts = BatteryOptions(permutations=100, bootstrap=100, threshold_simulations=1000, seed=3)
    assert run_battery(M, opts).overview == run_battery(M, opts).overview
