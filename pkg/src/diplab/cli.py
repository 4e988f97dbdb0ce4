"""Command-line experiment driver.

    diplab run         --q 7 --k 2 --seed 1
    diplab attack      --mode scalar --q 101 --trials 10000
    diplab attack      --mode vecmat --q 2 --k 2 --trials 10000
    diplab distinguish --q 101 --k 4 --trials 100000

JSON goes to stdout (or ``--out``), a one-line summary to stderr.
Exit status: 0 all claims pass, 1 a claim failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass

from .attack import nonsingular_probability, run_distinguisher_experiment, run_scalar_attack_experiment
from .composed import run_vecmat_attack_experiment
from .experiment import check_exact, check_rate
from .field import Rng, is_prime
from .linalg import FieldVector, inner_product
from .protocol import run_session

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class ExperimentConfig:
    subcommand: str
    q: int
    k: int
    trials: int
    seed: int
    mode: str | None = None
    out: str | None = None
    threads: int = 1

    def to_dict(self) -> dict:
        d = {"subcommand": self.subcommand, "q": self.q, "k": self.k,
             "trials": self.trials, "seed": self.seed}
        if self.mode is not None:
            d["mode"] = self.mode
        return d


def cmd_run(cfg: ExperimentConfig) -> dict:
    rng = Rng(cfg.seed)
    x = FieldVector(rng.field_array(cfg.q, cfg.k), cfg.q)
    y = FieldVector(rng.field_array(cfg.q, cfg.k), cfg.q)
    t = run_session(x, y, cfg.k, cfg.q, rng)
    expected = inner_product(x, y).value
    got = (t.outcome1 + t.outcome2).value if t.completed else "lambda"
    return {
        "inputs": {"x": x.tolist(), "y": y.tolist()},
        "transcript": t.to_dict(),
        "claims": [check_exact("outcome1 + outcome2 == <x, y>", got, expected)],
    }


def cmd_attack(cfg: ExperimentConfig) -> dict:
    if cfg.mode == "scalar":
        rep = run_scalar_attack_experiment(cfg.q, cfg.trials, cfg.seed, cfg.threads)
        p = 1.0 - 1.0 / cfg.q
        return {
            "result": {"success_rate": rep.success_rate, "recovered": rep.recovered,
                       "correct": rep.correct},
            "claims": [
                check_rate("k=1 recovery rate ~ 1 - 1/q", rep.recovered, rep.trials, p),
                check_exact("every recovery equals the true input", rep.correct, rep.recovered),
            ],
        }
    rep = run_vecmat_attack_experiment(cfg.q, cfg.k, cfg.trials, cfg.seed, cfg.threads)
    p = nonsingular_probability(cfg.q, cfg.k)
    return {
        "result": {
            "success_rate": rep.success_rate, "unique": rep.unique,
            "unique_correct": rep.unique_correct, "nonsingular": rep.nonsingular,
            "biconditional_violations": rep.biconditional_violations,
            "partial_missing_truth": rep.partial_missing_truth,
        },
        "claims": [
            check_rate("unique recovery rate ~ prod(1 - q^-i)", rep.unique, rep.trials, p),
            check_exact("every unique recovery equals the true input", rep.unique_correct, rep.unique),
            check_exact("unique <=> Y0 nonsingular violations", rep.biconditional_violations, 0),
            check_exact("partial solution sets missing the truth", rep.partial_missing_truth, 0),
        ],
    }


def cmd_distinguish(cfg: ExperimentConfig) -> dict:
    rep = run_distinguisher_experiment(cfg.q, cfg.k, cfg.trials, cfg.seed, cfg.threads)
    p = 1.0 / cfg.q
    adv = check_rate("advantage ~ 1 - 1/q", rep.real_accepts - rep.ideal_accepts, rep.trials, 1.0 - p)
    return {
        "result": rep.to_dict(),
        "claims": [
            check_exact("real-view accept rate", rep.real_accept_rate, 1.0),
            check_rate("simulated-view accept rate ~ 1/q", rep.ideal_accepts, rep.trials, p),
            adv,
        ],
    }


COMMANDS = {"run": cmd_run, "attack": cmd_attack, "distinguish": cmd_distinguish}


def _seed_default() -> int:
    env = os.environ.get("DIPLAB_SEED")
    return 0 if env is None else int(env, 0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diplab", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--q", type=int, default=101, help="prime field modulus (< 2**31)")
    common.add_argument("--k", type=int, default=None, help="vector length")
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--seed", type=lambda s: int(s, 0), default=None,
                        help="64-bit seed (default: $DIPLAB_SEED, else 0)")
    common.add_argument("--out", default=None, help="write JSON here instead of stdout")
    common.add_argument("--threads", type=int, default=1, help="worker processes")
    common.add_argument("--timing", action="store_true", help="embed wall-clock duration in the JSON")
    sub.add_parser("run", parents=[common], help="one protocol session, full transcript")
    p_att = sub.add_parser("attack", parents=[common], help="input recovery by a semi-honest P2")
    p_att.add_argument("--mode", choices=["scalar", "vecmat"], default="scalar")
    sub.add_parser("distinguish", parents=[common], help="real vs. straw-simulated views")
    return parser


def parse_config(argv=None) -> tuple[ExperimentConfig, bool]:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if not is_prime(ns.q) or ns.q >= 2**31:
        parser.error(f"--q {ns.q} is not a prime below 2**31")
    mode = getattr(ns, "mode", None)
    if ns.subcommand == "attack" and mode == "scalar":
        if ns.k not in (None, 1):
            parser.error("--mode scalar fixes k = 1")
        k = 1
    else:
        k = 4 if ns.k is None else ns.k
    if k < 1:
        parser.error("--k must be at least 1")
    if ns.trials < 1:
        parser.error("--trials must be at least 1")
    if ns.threads < 1:
        parser.error("--threads must be at least 1")
    try:
        seed = _seed_default() if ns.seed is None else ns.seed
    except ValueError:
        parser.error("DIPLAB_SEED is not an integer")
    if not 0 <= seed < 2**64:
        parser.error("--seed must fit in 64 unsigned bits")
    cfg = ExperimentConfig(ns.subcommand, ns.q, k, ns.trials, seed, mode, ns.out, ns.threads)
    return cfg, ns.timing


def main(argv=None) -> int:
    cfg, timing = parse_config(argv)
    t0 = time.perf_counter()
    body = COMMANDS[cfg.subcommand](cfg)
    elapsed = time.perf_counter() - t0
    ok = all(c["pass"] for c in body["claims"])
    report = {"config": cfg.to_dict(), **body, "pass": ok}
    if timing:
        report["duration_s"] = elapsed
    text = json.dumps(report, indent=2) + "\n"
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    verdict = "PASS" if ok else "FAIL"
    print(f"diplab {cfg.subcommand}: {verdict} "
          f"({sum(c['pass'] for c in body['claims'])}/{len(body['claims'])} claims, {elapsed:.2f}s)",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
