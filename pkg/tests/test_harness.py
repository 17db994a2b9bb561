import json
import random

import pytest

from leaselab.cli import main
from leaselab.generators import BadParams, burst_times, gen_instance
from leaselab.harness import (
    ExperimentConfig,
    format_summary_table,
    read_records_csv,
    records_to_csv,
    report,
    run_experiment,
    trial_seed,
)
from leaselab.instances import Instance


def test_gen_star_instance():
    inst = gen_instance("star", {"n": 4, "T": 2, "L": 1}, random.Random(0))
    assert inst.graph.node_count == 4
    assert len(inst.requests) == 2
    assert len(inst.catalog) == 1


def test_gen_path_matches_oracle_example():
    inst = gen_instance("path", {"n": 3, "T": 1, "k": 2}, random.Random(3))
    assert inst.graph.node_count == 3
    assert inst.requests[0][0] == 1


def test_gen_deterministic_under_seed():
    a = gen_instance("random-gnp-connected", {"n": 8, "p": 0.4}, random.Random(7))
    b = gen_instance("random-gnp-connected", {"n": 8, "p": 0.4}, random.Random(7))
    assert a == b


def test_gen_grid():
    inst = gen_instance("grid", {"rows": 2, "cols": 3}, random.Random(0))
    assert inst.graph.node_count == 6


def test_gen_pp_adversary_single_node_dominatable():
    inst = gen_instance("pp-adversary", {"n": 5, "L": 2, "horizon": 8}, random.Random(0))
    assert inst.graph.degree(0) == 4  # the center dominates everything
    assert [t for t, _ in inst.requests] == burst_times(8) == [0, 1, 3, 7]


def test_gen_rejects_unknown_kind():
    with pytest.raises(BadParams):
        gen_instance("nope", {}, random.Random(0))


def test_burst_times_nested():
    assert burst_times(16) == [0, 1, 3, 7, 15]


def test_instance_json_roundtrip():
    inst = gen_instance("star", {"n": 4, "T": 2, "L": 3}, random.Random(1))
    again = Instance.from_json(json.loads(json.dumps(inst.to_json())))
    assert again == inst


def test_trial_seed_is_stable():
    assert trial_seed(0, 0) == trial_seed(0, 0)
    assert trial_seed(0, 0) != trial_seed(0, 1)
    assert trial_seed(0, 1) != trial_seed(1, 0)


def test_run_experiment_with_oracle_ratio_at_least_one():
    cfg = ExperimentConfig(
        algorithm="ocdsl",
        trials=1,
        base_seed=3,
        oracle=True,
        generator=("path", {"n": 3, "T": 1, "k": 2}),
        instance_id="path3",
    )
    (record,) = run_experiment(cfg)
    assert record.ratio is not None and record.ratio >= 1.0
    assert record.c1 + record.c2 == record.online_cost


def test_run_experiment_deterministic():
    cfg = dict(
        algorithm="ocdsl",
        trials=3,
        base_seed=9,
        oracle=True,
        generator=("star", {"n": 4, "T": 2, "L": 2, "k": 2}),
    )
    a = run_experiment(ExperimentConfig(**cfg))
    b = run_experiment(ExperimentConfig(**cfg))
    assert records_to_csv(a) == records_to_csv(b)


def test_run_experiment_all_algorithms():
    for algorithm in ("ocdsl", "odsl-pd", "odsl-rr", "pp"):
        cfg = ExperimentConfig(
            algorithm=algorithm,
            trials=2,
            base_seed=1,
            oracle=True,
            generator=("star", {"n": 4, "T": 2, "L": 2}),
        )
        records = run_experiment(cfg)
        assert len(records) == 2
        for rec in records:
            assert rec.online_cost > 0
            assert rec.ratio >= 1.0


def test_report_accounting_identity_and_max():
    cfg = ExperimentConfig(
        algorithm="ocdsl",
        trials=4,
        base_seed=2,
        oracle=True,
        generator=("random-gnp-connected", {"n": 5, "p": 0.5, "T": 2, "k": 2, "L": 2}),
        instance_id="gnp5",
    )
    records = run_experiment(cfg)
    rows = report(records)
    assert len(rows) == 1
    row = rows[0]
    assert row.runs == 4
    assert row.total_c1 + row.total_c2 == row.total_cost
    assert row.max_ratio >= row.mean_ratio >= 1.0


def test_report_empty_is_ok():
    assert report([]) == []
    assert format_summary_table([]) == "(no records)"


def test_report_rejects_broken_split():
    cfg = ExperimentConfig(
        algorithm="pp",
        trials=1,
        base_seed=0,
        generator=("star", {"n": 3, "T": 2}),
    )
    records = run_experiment(cfg)
    records[0].c1 += 1
    with pytest.raises(ValueError):
        report(records)


def test_records_csv_roundtrip(tmp_path):
    cfg = ExperimentConfig(
        algorithm="odsl-pd",
        trials=2,
        base_seed=5,
        oracle=True,
        generator=("path", {"n": 4, "T": 2, "k": 2}),
    )
    records = run_experiment(cfg)
    out = tmp_path / "records.csv"
    out.write_text(records_to_csv(records))
    again = read_records_csv(str(out))
    assert records_to_csv(again) == records_to_csv(records)


# ------------------------------------------------------------------ CLI


def test_cli_gen_run_verify_roundtrip(tmp_path):
    inst_path = tmp_path / "inst.json"
    records_path = tmp_path / "records.csv"
    ledger_path = tmp_path / "ledger.csv"
    assert main([
        "gen", "--kind", "star", "--params", "n=4", "T=2", "L=2", "k=2",
        "--seed", "3", "--out", str(inst_path),
    ]) == 0
    assert main([
        "run", "--instance", str(inst_path), "--algorithm", "ocdsl",
        "--trials", "1", "--seed", "4", "--oracle",
        "--out", str(records_path), "--ledger-out", str(ledger_path),
    ]) == 0
    assert main([
        "verify", "--instance", str(inst_path), "--ledger", str(ledger_path),
    ]) == 0
    header = records_path.read_text().splitlines()[0]
    assert header.startswith("instance_id,algorithm,seed,online_cost,c1,c2,opt_cost,ratio")


def test_cli_run_byte_identical(tmp_path):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    argv = [
        "run", "--kind", "random-gnp-connected", "--params", "n=6", "p=0.5", "T=3", "k=2", "L=2",
        "--algorithm", "ocdsl", "--trials", "3", "--seed", "11", "--oracle",
    ]
    main(argv + ["--out", str(out_a)])
    main(argv + ["--out", str(out_b)])
    assert out_a.read_bytes() == out_b.read_bytes()


def test_cli_oracle_and_report(tmp_path, capsys):
    inst_path = tmp_path / "inst.json"
    main(["gen", "--kind", "path", "--params", "n=3", "T=1", "k=2", "--seed", "0",
          "--out", str(inst_path)])
    main(["oracle", "--instance", str(inst_path), "--out", str(tmp_path / "opt.csv")])
    out = capsys.readouterr().out
    assert "optimal cost:" in out
    records_path = tmp_path / "records.csv"
    main(["run", "--instance", str(inst_path), "--algorithm", "odsl-rr",
          "--trials", "2", "--seed", "1", "--oracle", "--out", str(records_path)])
    main(["report", "--records", str(records_path), "--out", str(tmp_path / "summary.csv")])
    table = capsys.readouterr().out
    assert "odsl-rr" in table


def test_cli_pp_subcommand(tmp_path):
    out = tmp_path / "pp.csv"
    assert main([
        "pp", "--rainy", "0,1", "--leases", "1:1,4:2", "--out", str(out),
    ]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "row,t,lease,start,cost,opt,ratio"
    assert lines[-1].startswith("summary,")
    assert lines[-1].endswith("4,2,2.0")


def test_cli_pd_steps_end_with_primal_dual_pair(tmp_path):
    steps = tmp_path / "pd.jsonl"
    main([
        "run", "--kind", "path", "--params", "n=4", "T=2", "k=2",
        "--algorithm", "odsl-pd", "--seed", "3",
        "--out", str(tmp_path / "r.csv"), "--steps-out", str(steps),
    ])
    lines = steps.read_text().splitlines()
    final = json.loads(lines[-1])
    assert set(final) == {"primal", "dual"}
    from fractions import Fraction

    assert Fraction(final["dual"]) <= Fraction(final["primal"])


def test_cli_steps_jsonl(tmp_path):
    steps = tmp_path / "steps.jsonl"
    main([
        "run", "--kind", "star", "--params", "n=4", "T=2", "L=1", "k=3",
        "--algorithm", "ocdsl", "--seed", "8", "--steps-out", str(steps),
        "--out", str(tmp_path / "r.csv"),
    ])
    lines = steps.read_text().splitlines()
    assert len(lines) == 2
    payload = json.loads(lines[0])
    for key in ("t", "requested", "purchases", "s_t", "representatives", "root", "r_t",
                "c1_increment", "c2_increment"):
        assert key in payload
