"""Command line front end: gen | run | oracle | verify | pp | report."""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from fractions import Fraction
from typing import Dict, Optional, Sequence

from .generators import GENERATOR_KINDS, gen_instance
from .harness import (
    ExperimentConfig,
    format_summary_table,
    read_records_csv,
    records_to_csv,
    report,
    run_algorithm,
    run_experiment,
    steps_to_jsonl,
    summary_to_csv,
    trial_seed,
)
from .instances import Instance, PurchaseLedger
from .leases import LeaseCatalog, Triplet, as_cost
from .ocdsl import OcdslState
from .oracle import check_solution, offline_opt, offline_opt_ds
from .permits import PermitState, pp_offline_opt
from .primal_dual import DualState


def _parse_params(pairs: Sequence[str]) -> Dict:
    params: Dict = {}
    for pair in pairs:
        if "=" not in pair:
            raise SystemExit(f"bad --params entry {pair!r}, expected key=value")
        key, value = pair.split("=", 1)
        try:
            params[key] = int(value)
        except ValueError:
            try:
                params[key] = float(value)
            except ValueError:
                params[key] = value
    return params


def _load_instance(path: str) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return Instance.from_json(json.load(fh))


def _write(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _ledger_csv(ledger: PurchaseLedger) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["node", "lease", "start", "step", "cost"])
    for node, lease, start, step, cost in ledger.rows():
        writer.writerow([node, lease, start, step, str(cost)])
    return buf.getvalue()


def _read_ledger_csv(path: str, catalog: LeaseCatalog) -> PurchaseLedger:
    ledger = PurchaseLedger()
    with open(path, encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            ledger.add(
                Triplet(int(row["node"]), int(row["lease"]), int(row["start"])),
                step=int(row["step"]),
                cost=Fraction(row["cost"]),
            )
    return ledger


def cmd_gen(args: argparse.Namespace) -> int:
    params = _parse_params(args.params)
    rng = random.Random(f"{args.seed}:inst")
    inst = gen_instance(args.kind, params, rng)
    _write(json.dumps(inst.to_json(), indent=2) + "\n", args.out)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    if args.instance:
        cfg = ExperimentConfig(
            algorithm=args.algorithm,
            trials=args.trials,
            base_seed=args.seed,
            oracle=args.oracle,
            instance=_load_instance(args.instance),
            instance_id=args.instance.rsplit("/", 1)[-1].removesuffix(".json"),
            timing=args.timing,
        )
    else:
        cfg = ExperimentConfig(
            algorithm=args.algorithm,
            trials=args.trials,
            base_seed=args.seed,
            oracle=args.oracle,
            generator=(args.kind, _parse_params(args.params)),
            instance_id=args.kind,
            timing=args.timing,
        )
    records = run_experiment(cfg)
    _write(records_to_csv(records, timing=args.timing), args.out)
    if args.steps_out or args.ledger_out or args.edge_ledger_out or args.dump_tree:
        # re-run trial 0 to export its artifacts
        seed = trial_seed(cfg.base_seed, 0)
        if cfg.generator is not None:
            inst = gen_instance(cfg.generator[0], cfg.generator[1], random.Random(f"{seed}:inst"))
        else:
            inst = cfg.instance
        _, _, _, ledger, reports, state = run_algorithm(cfg.algorithm, inst, seed)
        if args.steps_out:
            text = steps_to_jsonl(reports)
            if isinstance(state, DualState):
                primal, dual = state.totals()
                text += json.dumps({"primal": str(primal), "dual": str(dual)}) + "\n"
            _write(text, args.steps_out)
        if args.ledger_out:
            _write(_ledger_csv(ledger), args.ledger_out)
        if args.edge_ledger_out:
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["u", "v", "lease", "start", "step", "cost"])
            if isinstance(state, OcdslState) and state.osfl is not None:
                for entry in state.osfl.ledger:
                    writer.writerow(
                        [
                            entry.edge[0],
                            entry.edge[1],
                            entry.lease,
                            entry.start,
                            entry.step,
                            str(inst.catalog.cost(entry.lease)),
                        ]
                    )
            _write(buf.getvalue(), args.edge_ledger_out)
        if args.dump_tree:
            if isinstance(state, OcdslState) and state.osfl is not None:
                sys.stdout.write(state.osfl.hst.format_tree() + "\n")
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    solve = offline_opt if args.mode == "cds" else offline_opt_ds
    cost, ledger = solve(inst)
    sys.stdout.write(f"optimal cost: {cost}\n")
    _write(_ledger_csv(ledger), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    inst = _load_instance(args.instance)
    ledger = _read_ledger_csv(args.ledger, inst.catalog)
    ok = check_solution(inst, ledger, require_connected=(args.mode == "cds"))
    sys.stdout.write("FEASIBLE\n" if ok else "INFEASIBLE\n")
    return 0 if ok else 1


def cmd_pp(args: argparse.Namespace) -> int:
    rainy = sorted({int(x) for x in args.rainy.split(",") if x != ""})
    pairs = []
    for chunk in args.leases.split(","):
        duration, cost = chunk.split(":")
        pairs.append((int(duration), as_cost(cost)))
    catalog = LeaseCatalog.from_pairs(pairs)
    horizon = args.horizon if args.horizon is not None else (max(rainy) + 1 if rainy else 1)
    state = PermitState(catalog)
    for t in rainy:
        state.request(t)
    cost = state.total_cost()
    opt = pp_offline_opt(rainy, catalog, horizon)
    ratio = float(cost / opt) if opt else 1.0
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["row", "t", "lease", "start", "cost", "opt", "ratio"])
    for t, lease, start, paid in state.purchases:
        writer.writerow(["purchase", t, lease, start, str(paid), "", ""])
    writer.writerow(["summary", "", "", "", str(cost), str(opt), repr(ratio)])
    _write(buf.getvalue(), args.out)
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    records = read_records_csv(args.records)
    rows = report(records)
    sys.stdout.write(format_summary_table(rows) + "\n")
    if args.out:
        _write(summary_to_csv(rows), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leaselab")
    sub = parser.add_subparsers(dest="command", required=True)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    p_gen.add_argument("--params", nargs="*", default=[], metavar="key=value")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--out", default=None)
    p_gen.set_defaults(func=cmd_gen)

    p_run = sub.add_parser("run", help="run an online algorithm over trials")
    p_run.add_argument("--instance", default=None, help="instance JSON file")
    p_run.add_argument("--kind", choices=GENERATOR_KINDS, default=None)
    p_run.add_argument("--params", nargs="*", default=[], metavar="key=value")
    p_run.add_argument("--algorithm", choices=("ocdsl", "odsl-pd", "odsl-rr", "pp"), default="ocdsl")
    p_run.add_argument("--trials", type=int, default=1)
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--oracle", action="store_true")
    p_run.add_argument("--timing", action="store_true", help="include wall times (breaks byte determinism)")
    p_run.add_argument("--out", default=None, help="records CSV")
    p_run.add_argument("--steps-out", default=None, help="per-step JSON lines (trial 0)")
    p_run.add_argument("--ledger-out", default=None, help="node ledger CSV (trial 0)")
    p_run.add_argument("--edge-ledger-out", default=None, help="leased edge CSV (trial 0)")
    p_run.add_argument("--dump-tree", action="store_true", help="print the embedding tree (trial 0)")
    p_run.set_defaults(func=cmd_run)

    p_oracle = sub.add_parser("oracle", help="exact offline optimum for an instance")
    p_oracle.add_argument("--instance", required=True)
    p_oracle.add_argument("--mode", choices=("cds", "ds"), default="cds")
    p_oracle.add_argument("--out", default=None)
    p_oracle.set_defaults(func=cmd_oracle)

    p_verify = sub.add_parser("verify", help="check a ledger against an instance")
    p_verify.add_argument("--instance", required=True)
    p_verify.add_argument("--ledger", required=True)
    p_verify.add_argument("--mode", choices=("cds", "ds"), default="cds")
    p_verify.set_defaults(func=cmd_verify)

    p_pp = sub.add_parser("pp", help="run the parking-permit algorithm on rainy days")
    p_pp.add_argument("--rainy", required=True, help="comma separated day list")
    p_pp.add_argument("--leases", required=True, help="duration:cost pairs, comma separated")
    p_pp.add_argument("--horizon", type=int, default=None)
    p_pp.add_argument("--out", default=None)
    p_pp.set_defaults(func=cmd_pp)

    p_report = sub.add_parser("report", help="summarize a records CSV")
    p_report.add_argument("--records", required=True)
    p_report.add_argument("--out", default=None)
    p_report.set_defaults(func=cmd_report)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "run" and not args.instance and not args.kind:
        raise SystemExit("run needs --instance or --kind")
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
