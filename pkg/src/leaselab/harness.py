"""Experiment orchestration: seeded trials, verification, oracle ratios, reports.

Every trial derives its seed from (base seed, trial index) by stable hashing,
so runs are reproducible and embarrassingly parallel in principle. Costs are
carried as exact rationals end to end; CSV cells hold them as fraction
strings ("3", "5/2") so that downstream checks stay exact.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import statistics
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import InfeasibleOutput
from .generators import gen_instance
from .graphs import max_degree
from .instances import Instance, PurchaseLedger
from .ocdsl import OcdslState, StepReport
from .oracle import check_solution, offline_opt, offline_opt_ds
from .permits import PermitState, pp_offline_opt
from .primal_dual import DualState

ALGORITHMS = ("ocdsl", "odsl-pd", "odsl-rr", "pp")

CSV_COLUMNS = [
    "instance_id",
    "algorithm",
    "seed",
    "online_cost",
    "c1",
    "c2",
    "opt_cost",
    "ratio",
    "n",
    "lease_count",
    "max_degree",
    "steps",
]


@dataclass
class ExperimentConfig:
    algorithm: str
    trials: int = 1
    base_seed: int = 0
    oracle: bool = False
    instance: Optional[Instance] = None  # fixed instance for all trials
    generator: Optional[Tuple[str, Dict]] = None  # (kind, params), fresh per trial
    instance_id: str = "instance"
    timing: bool = False

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if (self.instance is None) == (self.generator is None):
            raise ValueError("provide exactly one of instance or generator")


@dataclass
class RunRecord:
    instance_id: str
    algorithm: str
    seed: int
    online_cost: Fraction
    c1: Fraction
    c2: Fraction
    opt_cost: Optional[Fraction]
    ratio: Optional[float]
    n: int
    lease_count: int
    max_degree: int
    steps: int
    wall_time_s: float = 0.0

    def to_row(self, timing: bool = False) -> List[str]:
        row = [
            self.instance_id,
            self.algorithm,
            str(self.seed),
            str(self.online_cost),
            str(self.c1),
            str(self.c2),
            "" if self.opt_cost is None else str(self.opt_cost),
            "" if self.ratio is None else repr(self.ratio),
            str(self.n),
            str(self.lease_count),
            str(self.max_degree),
            str(self.steps),
        ]
        if timing:
            row.append(f"{self.wall_time_s:.6f}")
        return row


def trial_seed(base_seed: int, index: int) -> int:
    digest = hashlib.sha256(f"{base_seed}:{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def run_algorithm(
    algorithm: str, inst: Instance, seed: int
) -> Tuple[Fraction, Fraction, Fraction, PurchaseLedger, List[StepReport], Optional[object]]:
    """Run one algorithm over the instance; returns (cost, c1, c2, ledger, steps, state)."""
    reports: List[StepReport] = []
    if algorithm in ("ocdsl", "odsl-rr"):
        state = OcdslState(
            inst.graph, inst.catalog, seed=seed, connect=(algorithm == "ocdsl")
        )
        for t, nodes in inst.requests:
            reports.append(state.serve_request(nodes, t))
        return state.total_cost(), state.c1, state.c2, state.ledger, reports, state
    if algorithm == "odsl-pd":
        dual = DualState(inst.graph, inst.catalog)
        for t, nodes in inst.requests:
            purchases = []
            for u in nodes:
                for tr in dual.serve(u, t)[0]:
                    purchases.append((tr.node, tr.lease, tr.start, inst.catalog.cost(tr.lease)))
            reports.append(
                StepReport(
                    t=t,
                    requested=tuple(nodes),
                    purchases=purchases,
                    s_t=[],
                    representatives=[],
                    root=None,
                    r_t=[],
                    c1_increment=sum((p[3] for p in purchases), Fraction(0)),
                    c2_increment=Fraction(0),
                    growth_rounds=0,
                )
            )
        primal, _ = dual.totals()
        return primal, primal, Fraction(0), dual.ledger, reports, dual
    if algorithm == "pp":
        permit = PermitState(inst.catalog)
        node = 0  # permit runs ignore the graph; charge purchases to node 0
        ledger = PurchaseLedger()
        for t, _ in inst.requests:
            for lease, start in permit.request(t):
                ledger.add(
                    inst.catalog.triplet_at(node, lease, start), t, inst.catalog.cost(lease)
                )
        cost = permit.total_cost()
        return cost, cost, Fraction(0), ledger, reports, None
    raise ValueError(f"unknown algorithm {algorithm!r}")


def verify_run(algorithm: str, inst: Instance, ledger: PurchaseLedger) -> bool:
    if algorithm == "pp":
        return all(
            any(inst.catalog.is_active(tr, t) for tr in ledger) for t, _ in inst.requests
        )
    return check_solution(inst, ledger, require_connected=(algorithm == "ocdsl"))


def oracle_cost(algorithm: str, inst: Instance) -> Fraction:
    if algorithm == "ocdsl":
        return offline_opt(inst)[0]
    if algorithm == "pp":
        return pp_offline_opt(inst.times, inst.catalog, inst.horizon)
    return offline_opt_ds(inst)[0]


def run_experiment(cfg: ExperimentConfig) -> List[RunRecord]:
    records: List[RunRecord] = []
    for index in range(cfg.trials):
        seed = trial_seed(cfg.base_seed, index)
        if cfg.generator is not None:
            kind, params = cfg.generator
            inst = gen_instance(kind, params, random.Random(f"{seed}:inst"))
        else:
            inst = cfg.instance
            assert inst is not None
        started = time.monotonic()
        cost, c1, c2, ledger, _, _ = run_algorithm(cfg.algorithm, inst, seed)
        elapsed = time.monotonic() - started
        if not verify_run(cfg.algorithm, inst, ledger):
            raise InfeasibleOutput(
                f"{cfg.algorithm} produced an infeasible ledger on trial {index}"
            )
        opt: Optional[Fraction] = None
        ratio: Optional[float] = None
        if cfg.oracle:
            opt = oracle_cost(cfg.algorithm, inst)
            ratio = float(cost / opt)
        records.append(
            RunRecord(
                instance_id=f"{cfg.instance_id}#{index}",
                algorithm=cfg.algorithm,
                seed=seed,
                online_cost=cost,
                c1=c1,
                c2=c2,
                opt_cost=opt,
                ratio=ratio,
                n=inst.graph.node_count,
                lease_count=len(inst.catalog),
                max_degree=max_degree(inst.graph),
                steps=len(inst.requests),
                wall_time_s=elapsed,
            )
        )
    return records


# ------------------------------------------------------------------ CSV and report


def records_to_csv(records: Sequence[RunRecord], timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(CSV_COLUMNS) + (["wall_time_s"] if timing else [])
    writer.writerow(header)
    for rec in records:
        writer.writerow(rec.to_row(timing))
    return buf.getvalue()


def write_records_csv(records: Sequence[RunRecord], path: str, timing: bool = False) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(records_to_csv(records, timing))


def read_records_csv(path: str) -> List[RunRecord]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            records.append(
                RunRecord(
                    instance_id=row["instance_id"],
                    algorithm=row["algorithm"],
                    seed=int(row["seed"]),
                    online_cost=Fraction(row["online_cost"]),
                    c1=Fraction(row["c1"]),
                    c2=Fraction(row["c2"]),
                    opt_cost=Fraction(row["opt_cost"]) if row["opt_cost"] else None,
                    ratio=float(row["ratio"]) if row["ratio"] else None,
                    n=int(row["n"]),
                    lease_count=int(row["lease_count"]),
                    max_degree=int(row["max_degree"]),
                    steps=int(row["steps"]),
                    wall_time_s=float(row.get("wall_time_s") or 0.0),
                )
            )
    return records


@dataclass
class SummaryRow:
    group: str
    algorithm: str
    runs: int
    mean_ratio: Optional[float]
    median_ratio: Optional[float]
    max_ratio: Optional[float]
    total_cost: Fraction
    total_c1: Fraction
    total_c2: Fraction


def report(records: Sequence[RunRecord]) -> List[SummaryRow]:
    """Aggregate records per (instance family, algorithm); verifies C1+C2 accounting."""
    for rec in records:
        if rec.c1 + rec.c2 != rec.online_cost:
            raise ValueError(
                f"cost split broken for {rec.instance_id}: "
                f"{rec.c1} + {rec.c2} != {rec.online_cost}"
            )
    groups: Dict[Tuple[str, str], List[RunRecord]] = {}
    for rec in records:
        family = rec.instance_id.split("#", 1)[0]
        groups.setdefault((family, rec.algorithm), []).append(rec)
    rows = []
    for (family, algorithm) in sorted(groups):
        members = groups[(family, algorithm)]
        ratios = [r.ratio for r in members if r.ratio is not None]
        rows.append(
            SummaryRow(
                group=family,
                algorithm=algorithm,
                runs=len(members),
                mean_ratio=statistics.fmean(ratios) if ratios else None,
                median_ratio=statistics.median(ratios) if ratios else None,
                max_ratio=max(ratios) if ratios else None,
                total_cost=sum((r.online_cost for r in members), Fraction(0)),
                total_c1=sum((r.c1 for r in members), Fraction(0)),
                total_c2=sum((r.c2 for r in members), Fraction(0)),
            )
        )
    return rows


def summary_to_csv(rows: Sequence[SummaryRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "group",
            "algorithm",
            "runs",
            "mean_ratio",
            "median_ratio",
            "max_ratio",
            "total_cost",
            "total_c1",
            "total_c2",
        ]
    )
    for row in rows:
        writer.writerow(
            [
                row.group,
                row.algorithm,
                str(row.runs),
                "" if row.mean_ratio is None else repr(row.mean_ratio),
                "" if row.median_ratio is None else repr(row.median_ratio),
                "" if row.max_ratio is None else repr(row.max_ratio),
                str(row.total_cost),
                str(row.total_c1),
                str(row.total_c2),
            ]
        )
    return buf.getvalue()


def format_summary_table(rows: Sequence[SummaryRow]) -> str:
    if not rows:
        return "(no records)"
    headers = ["group", "algorithm", "runs", "mean", "median", "max", "cost", "C1", "C2"]
    table = [headers]
    for row in rows:
        fmt = lambda x: "-" if x is None else f"{x:.4f}"
        table.append(
            [
                row.group,
                row.algorithm,
                str(row.runs),
                fmt(row.mean_ratio),
                fmt(row.median_ratio),
                fmt(row.max_ratio),
                str(row.total_cost),
                str(row.total_c1),
                str(row.total_c2),
            ]
        )
    widths = [max(len(r[i]) for r in table) for i in range(len(headers))]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(r)) for r in table]
    return "\n".join(lines)


def steps_to_jsonl(reports: Sequence[StepReport]) -> str:
    return "".join(json.dumps(r.to_json(), separators=(",", ":")) + "\n" for r in reports)
