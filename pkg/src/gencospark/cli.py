"""Command-line front end: compute, gen, verify, sweep.

Exit codes: 0 success, 1 verification mismatch, 2 usage or parse error,
3 size-guard refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction

import numpy as np

from .cospark import CosparkResult, spcospark
from .oracle import MAX_ORACLE_ROWS, SizeGuardError, brute_cospark, brute_spcospark, realize
from .pattern import (
    PatternError,
    SparsityPattern,
    build_graph,
    load_pattern,
    random_pattern,
    save_pattern,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_SIZE_GUARD = 3


def derive_seed(seed: int, *key: int) -> int:
    """Child seed for (seed, *key); stable across runs and platforms."""
    ss = np.random.SeedSequence([int(seed) % (1 << 64), *key])
    return int(ss.generate_state(1, np.uint64)[0])


def numeric_cospark(p: SparsityPattern, seed: int, expected: int) -> tuple[int, int | None]:
    """Oracle cospark of a realization, retried once with a fresh seed on disagreement.

    Integer sampling is not continuous, so a single unlucky realization can
    be degenerate. Returns (first value, retry value or None).
    """
    first = brute_cospark(realize(p, derive_seed(seed, 0))).value
    if first == expected:
        return first, None
    return first, brute_cospark(realize(p, derive_seed(seed, 1))).value


# -- compute ---------------------------------------------------------------

def result_json(p: SparsityPattern, res: CosparkResult) -> dict:
    out = {
        "m": p.m,
        "n": p.n,
        "nnz": p.nnz,
        "spcospark": res.spcospark,
        "x_f": sorted(i + 1 for i in res.x_f),
        "deficient": res.deficient,
    }
    if res.per_w is not None:
        out["per_w"] = [
            {
                "excluded_col": d.excluded_col + 1,
                "x_w": d.x_w_size,
                "b": d.b_size,
                "x_bar": d.x_bar_size,
            }
            for d in res.per_w
        ]
    return out


def cmd_compute(args) -> int:
    try:
        p = load_pattern(args.file)
    except (OSError, PatternError) as exc:
        print(f"error: {args.file}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    res = spcospark(build_graph(p), order_seed=args.order_seed, diagnostics=args.diagnostics)

    if args.json:
        print(json.dumps(result_json(p, res)))
        return EXIT_OK

    print(f"m = {p.m}, n = {p.n}, nnz = {p.nnz}")
    if res.deficient:
        print("spcospark = 0 (deficient)")
        return EXIT_OK
    print(f"spcospark = {res.spcospark}")
    print(f"|X_f| = {len(res.x_f)}")
    print("X_f = " + " ".join(str(i + 1) for i in sorted(res.x_f)))
    if res.per_w:
        print()
        print(f"{'v':>4} {'|X_W|':>7} {'|B|':>6} {'|X_W bar|':>10}")
        for d in res.per_w:
            print(f"{d.excluded_col + 1:>4} {d.x_w_size:>7} {d.b_size:>6} {d.x_bar_size:>10}")
    return EXIT_OK


# -- gen -------------------------------------------------------------------

def cmd_gen(args) -> int:
    try:
        p = random_pattern(args.rows, args.cols, args.density, args.seed)
    except PatternError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        save_pattern(p, args.out)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"nnz = {p.nnz}")
    return EXIT_OK


# -- verify ----------------------------------------------------------------

@dataclass
class TrialRecord:
    trial: int
    nnz: int
    spcospark: int
    brute_spcospark: int
    cospark: int
    cospark_retry: int | None
    deficient: bool
    combinatorial_ok: bool
    numeric_ok: bool


def run_verify(m: int, n: int, density: float, trials: int, seed: int) -> list[TrialRecord]:
    if m > MAX_ORACLE_ROWS:
        raise SizeGuardError(f"m={m} exceeds the oracle limit of {MAX_ORACLE_ROWS} rows")
    records = []
    for t in range(trials):
        p = random_pattern(m, n, density, derive_seed(seed, 0, t))
        res = spcospark(build_graph(p))
        brute, _ = brute_spcospark(p)
        first, retry = numeric_cospark(p, derive_seed(seed, 1, t), res.spcospark)
        numeric = first if retry is None else retry
        records.append(
            TrialRecord(
                trial=t,
                nnz=p.nnz,
                spcospark=res.spcospark,
                brute_spcospark=brute,
                cospark=first,
                cospark_retry=retry,
                deficient=res.deficient,
                combinatorial_ok=brute == res.spcospark,
                numeric_ok=numeric == res.spcospark,
            )
        )
    return records


def cmd_verify(args) -> int:
    try:
        records = run_verify(args.rows, args.cols, args.density, args.trials, args.seed)
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_GUARD
    except PatternError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failed = [r for r in records if not (r.combinatorial_ok and r.numeric_ok)]

    if args.json:
        print(json.dumps({
            "m": args.rows,
            "n": args.cols,
            "density": args.density,
            "seed": args.seed,
            "trials": [asdict(r) for r in records],
            "agree": len(records) - len(failed),
            "disagree": len(failed),
        }))
    else:
        print(f"{'trial':>5} {'nnz':>5} {'spcospark':>9} {'brute_sp':>8} {'cospark':>7}  comb  num")
        for r in records:
            cos = str(r.cospark) if r.cospark_retry is None else f"{r.cospark}->{r.cospark_retry}"
            print(
                f"{r.trial:>5} {r.nnz:>5} {r.spcospark:>9} {r.brute_spcospark:>8} {cos:>7}"
                f"  {_flag(r.combinatorial_ok):>4} {_flag(r.numeric_ok):>4}"
                + ("  (deficient)" if r.deficient else "")
            )
        print(f"agreement: {len(records) - len(failed)}/{len(records)}")
    return EXIT_MISMATCH if failed else EXIT_OK


def _flag(ok: bool) -> str:
    return "ok" if ok else "FAIL"


# -- sweep -----------------------------------------------------------------

@dataclass
class LevelRecord:
    density: float
    trials: int = 0
    matches: int = 0
    mismatches: int = 0
    deficient_skips: int = 0
    unchecked: int = 0
    retries: int = 0
    spcospark_sum: int = 0
    runtime_sum: float = 0.0
    mismatch_trials: list[int] = field(default_factory=list)

    @property
    def mean_spcospark(self) -> Fraction | None:
        return Fraction(self.spcospark_sum, self.trials) if self.trials else None

    @property
    def mean_runtime(self) -> float | None:
        return self.runtime_sum / self.trials if self.trials else None


def sweep_densities(levels: int) -> list[float]:
    """Interior points k / (levels + 1), k = 1..levels; 0 and 1 are degenerate."""
    return [k / (levels + 1) for k in range(1, levels + 1)]


def run_sweep(
    m: int,
    n: int,
    densities: list[float],
    per_level: int,
    seed: int,
    oracle: bool = True,
) -> list[LevelRecord]:
    if oracle and m > MAX_ORACLE_ROWS:
        raise SizeGuardError(f"m={m} exceeds the oracle limit of {MAX_ORACLE_ROWS} rows")
    levels = []
    for k, density in enumerate(densities):
        rec = LevelRecord(density=density)
        for t in range(per_level):
            p = random_pattern(m, n, density, derive_seed(seed, 0, k, t))
            graph = build_graph(p)
            t0 = time.perf_counter()
            res = spcospark(graph)
            rec.runtime_sum += time.perf_counter() - t0
            rec.trials += 1
            rec.spcospark_sum += res.spcospark
            if res.deficient:
                rec.deficient_skips += 1
                continue
            if not oracle:
                rec.unchecked += 1
                continue
            first, retry = numeric_cospark(p, derive_seed(seed, 1, k, t), res.spcospark)
            if retry is not None:
                rec.retries += 1
            if (first if retry is None else retry) == res.spcospark:
                rec.matches += 1
            else:
                rec.mismatches += 1
                rec.mismatch_trials.append(t)
        levels.append(rec)
    return levels


def sweep_json(levels: list[LevelRecord], params: dict, timing: bool) -> dict:
    out_levels = []
    for rec in levels:
        mean = rec.mean_spcospark
        row = {
            "density": rec.density,
            "trials": rec.trials,
            "matches": rec.matches,
            "mismatches": rec.mismatches,
            "deficient_skips": rec.deficient_skips,
            "unchecked": rec.unchecked,
            "retries": rec.retries,
            "mean_spcospark": None if mean is None else str(mean),
            "mismatch_trials": rec.mismatch_trials,
        }
        if timing:
            row["mean_runtime_s"] = rec.mean_runtime
        out_levels.append(row)
    return {
        **params,
        "levels": out_levels,
        "total_trials": sum(r.trials for r in levels),
        "total_mismatches": sum(r.mismatches for r in levels),
    }


def cmd_sweep(args) -> int:
    if args.densities:
        try:
            densities = [float(x) for x in args.densities.split(",")]
        except ValueError:
            print(f"error: bad --densities {args.densities!r}", file=sys.stderr)
            return EXIT_USAGE
    else:
        densities = sweep_densities(args.levels)
    try:
        levels = run_sweep(
            args.rows, args.cols, densities, args.per_level, args.seed, oracle=not args.no_oracle
        )
    except SizeGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_GUARD
    except PatternError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    timing = not args.no_timing
    params = {"seed": args.seed, "m": args.rows, "n": args.cols, "per_level": args.per_level}
    if args.json:
        print(json.dumps(sweep_json(levels, params, timing)))
    else:
        print(f"m = {args.rows}, n = {args.cols}, per level = {args.per_level}, seed = {args.seed}")
        header = (
            f"{'density':>8} {'trials':>6} {'match':>6} {'mismatch':>8}"
            f" {'deficient':>9} {'unchecked':>9} {'retries':>7} {'mean_spcospark':>14}"
        )
        print(header + (f" {'mean_runtime_ms':>15}" if timing else ""))
        for rec in levels:
            mean = rec.mean_spcospark
            line = (
                f"{rec.density:>8.4f} {rec.trials:>6} {rec.matches:>6} {rec.mismatches:>8}"
                f" {rec.deficient_skips:>9} {rec.unchecked:>9} {rec.retries:>7}"
                f" {'-' if mean is None else str(mean):>14}"
            )
            if timing:
                rt = rec.mean_runtime
                line += f" {'-' if rt is None else f'{rt * 1e3:.3f}':>15}"
            print(line)
        total = sum(r.mismatches for r in levels)
        print(f"total trials = {sum(r.trials for r in levels)}, mismatches = {total}")
    return EXIT_MISMATCH if any(r.mismatches for r in levels) else EXIT_OK


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gencospark",
        description="Generic cospark of a sparsity pattern via bipartite matching.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="generic cospark of a Matrix Market pattern file")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.add_argument("--diagnostics", action="store_true", help="per excluded column statistics")
    p.add_argument("--order-seed", type=int, default=None, help="shuffle the greedy visiting order")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("gen", help="write a random pattern")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("verify", help="compare against both brute-force oracles")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int, required=True)
    p.add_argument("--density", type=float, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="density sweep against the numeric oracle")
    p.add_argument("--rows", type=int, default=20)
    p.add_argument("--cols", type=int, default=5)
    p.add_argument("--levels", type=int, default=10)
    p.add_argument("--per-level", type=int, default=50)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--densities", default=None, help="comma-separated list overriding --levels")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-oracle", action="store_true")
    p.add_argument("--no-timing", action="store_true", help="omit runtimes (byte-reproducible output)")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("rows", "cols", "trials", "levels", "per_level"):
        value = getattr(args, name, None)
        if value is not None and value < (0 if name in ("trials", "per_level") else 1):
            parser.error(f"--{name.replace('_', '-')} must be positive")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
