import csv
import json

import numpy as np
import pytest

from seta.errors import ConfigError
from seta.harness import (
    SUMMARY_FIELDS,
    apply_overrides,
    expand_sweep,
    from_dict,
    read_metrics,
    replay_rho_bar,
    run_experiment,
    sweep,
)
from seta.harness.cli import main
from seta.plan import cumulative_pruned

SMALL = {
    "dataset": {"synthetic": {"classes": 3, "dim": 4, "base_per_class": 30, "duplication_factor": 2, "val_per_class": 10}},
    "model": {"kind": "mlp_1hidden", "hidden": 8},
    "train": {"lr": 0.05, "batch_size": 16},
    "scheduler": {"r": 0.6, "k": 4, "alpha": 0.5},
    "epochs": 8,
    "seeds": [0],
}


def small(tmp_path, **over):
    raw = json.loads(json.dumps(SMALL))
    raw["output_dir"] = str(tmp_path / "out")
    raw.update(over)
    return raw


# -- config ------------------------------------------------------------------

def test_defaults_parse():
    cfg = from_dict({})
    assert cfg.method == "seta" and cfg.epochs == 30 and cfg.seeds == (0,)
    assert cfg.dataset.n_train == 20_000


def test_roundtrip(tmp_path):
    cfg = from_dict(small(tmp_path))
    again = from_dict(cfg.to_dict())
    assert again == cfg


@pytest.mark.parametrize(
    "patch",
    [
        {"bogus": 1},
        {"scheduler": {"kk": 3}},
        {"scheduler": {"epochs": 3}},
        {"train": {"seed": 3}},
        {"dataset": {"synthetic": {"clases": 3}}},
        {"dataset": {"parquet": {}}},
        {"model": {"kind": "resnet"}},
        {"method": "magic"},
        {"seeds": []},
        {"seeds": [1, 1]},
        {"epochs": 0},
        {"scheduler": {"alpha": 1.5}},
    ],
)
def test_config_errors(tmp_path, patch):
    raw = small(tmp_path)
    raw.update(patch)
    with pytest.raises(ConfigError):
        from_dict(raw)


def test_overrides(tmp_path):
    raw = apply_overrides(small(tmp_path), method="dynamic_random", r=0.3, k=6, alpha=0.2, epochs=4, seed=9, out="x")
    cfg = from_dict(raw)
    assert cfg.method == "dynamic_random"
    assert cfg.scheduler.r == cfg.baseline.r == 0.3
    assert (cfg.scheduler.k, cfg.scheduler.alpha, cfg.epochs, cfg.seeds, cfg.output_dir) == (6, 0.2, 4, (9,), "x")
    assert SMALL["scheduler"]["k"] == 4  # input untouched


def test_config_hash(tmp_path):
    a = from_dict(small(tmp_path))
    b = from_dict(small(tmp_path))
    assert a.run_hash(0) == b.run_hash(0)
    assert a.run_hash(0) != a.run_hash(1)
    c = from_dict(apply_overrides(small(tmp_path), alpha=0.6))
    assert c.run_hash(0) != a.run_hash(0)
    raw = small(tmp_path)
    raw["train"]["momentum"] = 0.8
    assert from_dict(raw).run_hash(0) != a.run_hash(0)
    d = from_dict(apply_overrides(small(tmp_path), out=str(tmp_path / "elsewhere")))
    assert d.run_hash(0) == a.run_hash(0)


# -- runs ----------------------------------------------------------------------

def test_run_writes_replayable_metrics(tmp_path):
    (res,) = run_experiment(from_dict(small(tmp_path)))
    epochs, footer = read_metrics(res.out_dir / "metrics.jsonl")
    assert [e["epoch"] for e in epochs] == list(range(8))
    n = footer["dataset_size"]
    assert footer["rho_bar"] == replay_rho_bar(epochs, n)
    for i, e in enumerate(epochs):
        assert e["rho_t"] == 1 - e["n_selected"] / n
        assert e["rho_bar_cum"] == cumulative_pruned([x["n_selected"] for x in epochs[: i + 1]], n)
    assert [e["phase"] for e in epochs] == ["bootstrap"] + ["curriculum"] * 6 + ["anneal"]
    # window replays the cyclic formula
    for e in epochs:
        if e["phase"] == "curriculum":
            s, end = e["window"]
            w = end - s + 1
            assert s == e["window_n"] % (e["k_eff"] - w + 1)
    assert [e["window_n"] for e in epochs if e["window_n"] is not None] == list(range(6))
    resolved = json.loads((res.out_dir / "config.json").read_text())
    assert resolved["seed"] == 0 and "seeds" not in resolved
    timing = [json.loads(l) for l in (res.out_dir / "timing.jsonl").read_text().splitlines()]
    assert len(timing) == 9 and timing[-1]["type"] == "footer"


def test_repeat_seeds_deterministic(tmp_path):
    raw = small(tmp_path, seeds=[1, 2, 3])
    results = run_experiment(from_dict(raw))
    files = [r.out_dir / "metrics.jsonl" for r in results]
    assert len({f.read_bytes() for f in files}) == 3
    raw["output_dir"] = str(tmp_path / "again")
    again = run_experiment(from_dict(raw))
    for f, r in zip(files, again):
        assert f.read_bytes() == (r.out_dir / "metrics.jsonl").read_bytes()


def test_full_vs_seta_structure(tmp_path):
    (seta,) = run_experiment(from_dict(small(tmp_path)))
    (full,) = run_experiment(from_dict(small(tmp_path, method="full", output_dir=str(tmp_path / "full"))))
    es, _ = read_metrics(seta.out_dir / "metrics.jsonl")
    ef, ff = read_metrics(full.out_dir / "metrics.jsonl")
    assert list(es[0]) == list(ef[0])
    assert ff["rho_bar"] == 0.0
    assert all(e["window"] is None for e in ef)
    assert any(a["n_selected"] != b["n_selected"] for a, b in zip(es, ef))


@pytest.mark.parametrize("method", ["static_random", "dynamic_random", "mean_loss_prune"])
def test_baseline_runs(tmp_path, method):
    (res,) = run_experiment(from_dict(small(tmp_path, method=method)))
    epochs, footer = read_metrics(res.out_dir / "metrics.jsonl")
    assert footer["rho_bar"] == replay_rho_bar(epochs, footer["dataset_size"])


def test_csv_dataset_run(tmp_path):
    g = np.random.default_rng(0)
    path = tmp_path / "d.csv"
    with open(path, "w") as fh:
        fh.write("f1,f2,label\n")
        for _ in range(120):
            c = int(g.integers(0, 2))
            fh.write(f"{g.normal() + 3 * c},{g.normal()},{'yes' if c else 'no'}\n")
    raw = small(tmp_path)
    raw["dataset"] = {"csv": {"path": str(path), "validation_fraction": 0.25}}
    (res,) = run_experiment(from_dict(raw))
    assert res.footer["dataset_size"] == 90
    assert res.final_acc > 0.8


def test_aborted_run_leaves_parseable_file(tmp_path, monkeypatch):
    import seta.harness.runner as runner

    real = runner.sgd_epoch
    calls = {"n": 0}

    def flaky(*a, **k):
        calls["n"] += 1
        if calls["n"] == 4:
            raise RuntimeError("boom")
        return real(*a, **k)

    monkeypatch.setattr(runner, "sgd_epoch", flaky)
    with pytest.raises(RuntimeError):
        run_experiment(from_dict(small(tmp_path)))
    lines = (tmp_path / "out" / "seed_0" / "metrics.jsonl").read_text().splitlines()
    objs = [json.loads(l) for l in lines]
    assert [o["type"] for o in objs] == ["epoch"] * 3 + ["aborted"]
    assert objs[-1]["epoch"] == 3


def test_truncated_file_still_parses(tmp_path):
    (res,) = run_experiment(from_dict(small(tmp_path)))
    path = res.out_dir / "metrics.jsonl"
    lines = path.read_text().splitlines(keepends=True)
    path.write_text("".join(lines[:5]))
    epochs, footer = read_metrics(path)
    assert len(epochs) == 5 and footer is None


# -- sweep -----------------------------------------------------------------------

def test_sweep_grid_cardinality(tmp_path):
    base = small(tmp_path, epochs=3)
    base["seeds"] = [0, 1, 2]
    raw = {"base": base, "grid": {"scheduler.alpha": [0.2, 0.4, 0.6, 0.8, 1.0]}, "output_dir": str(tmp_path / "sw")}
    configs, summary = expand_sweep(raw)
    rows = sweep(configs, summary)
    assert len(rows) == 15
    with open(summary) as fh:
        reader = csv.DictReader(fh)
        assert tuple(reader.fieldnames) == SUMMARY_FIELDS
        got = list(reader)
    assert sorted({float(r["alpha"]) for r in got}) == [0.2, 0.4, 0.6, 0.8, 1.0]
    assert all(r["method"] == "seta" for r in got)


def test_sweep_failed_rows(tmp_path):
    good = small(tmp_path, epochs=3)
    bad = small(tmp_path, epochs=3)
    bad["dataset"] = {"csv": {"path": str(tmp_path / "missing.csv")}}
    configs, summary = expand_sweep({"configs": [good, bad], "output_dir": str(tmp_path / "sw")})
    rows = sweep(configs, summary)
    assert len(rows) == 2
    assert np.isfinite(rows[0]["rho_bar"]) and np.isnan(rows[1]["rho_bar"])


def test_sweep_parallel_matches_serial(tmp_path):
    base = small(tmp_path, epochs=3)
    base["seeds"] = [0, 1]
    grid = {"method": ["seta", "dynamic_random"]}
    c1, s1 = expand_sweep({"base": base, "grid": grid, "output_dir": str(tmp_path / "a")})
    c2, s2 = expand_sweep({"base": base, "grid": grid, "output_dir": str(tmp_path / "b")})
    assert sweep(c1, s1) == sweep(c2, s2, workers=2)


def test_sweep_errors(tmp_path):
    with pytest.raises(ConfigError):
        sweep([], tmp_path / "s.csv")
    with pytest.raises(ConfigError):
        expand_sweep({"base": small(tmp_path, seeds=[])})
    with pytest.raises(ConfigError):
        expand_sweep({"grid": {"scheduler.k": []}})
    with pytest.raises(ConfigError):
        expand_sweep({"configs": [], "grid": {}})


# -- cli -------------------------------------------------------------------------

def test_cli_run(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(small(tmp_path)))
    code = main(["run", "--config", str(cfg), "--alpha", "1.0", "--seed", "5", "--out", str(tmp_path / "cli")])
    assert code == 0
    resolved = json.loads((tmp_path / "cli" / "seed_5" / "config.json").read_text())
    assert resolved["scheduler"]["alpha"] == 1.0 and resolved["seed"] == 5
    assert "rho_bar=" in capsys.readouterr().out


def test_cli_config_error_exit_code(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"typo": 1}))
    assert main(["run", "--config", str(cfg)]) == 1
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["run", "--config", str(bad)]) == 1
    assert main(["sweep"]) == 1


def test_cli_runtime_error_exit_code(tmp_path):
    raw = small(tmp_path)
    raw["dataset"] = {"csv": {"path": str(tmp_path / "missing.csv")}}
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps(raw))
    assert main(["run", "--config", str(cfg)]) == 2


def test_cli_sweep(tmp_path):
    base = small(tmp_path, epochs=2)
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps({"base": base, "grid": {"scheduler.k": [2, 3]}}))
    assert main(["sweep", "--config", str(path), "--out", str(tmp_path / "sw")]) == 0
    assert (tmp_path / "sw" / "summary.csv").read_text().count("\n") == 3


def test_cli_help_lists_defaults(capsys):
    with pytest.raises(SystemExit):
        main(["run", "--help"])
    out = capsys.readouterr().out
    for flag in ("--config", "--method", "--r", "--k", "--alpha", "--epochs", "--seed", "--out"):
        assert flag in out
    assert "default" in out
