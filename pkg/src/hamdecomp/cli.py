"""Hamiltonian decompositions of the union of two Hamiltonian cycles.

Exit codes: 0 decomposition found / certificate verified, 1 proven
nonexistent, 2 budget exhausted, 3 usage or format error, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, fields
from pathlib import Path

from .engine import ALGORITHMS, ILP, ILP_LS, Decomposition, EngineConfig, NonExistent, run
from .instances import (
    FormatError,
    Instance,
    generate_instance,
    instance_for_seed,
    parse_certificate,
    parse_instance,
    serialize_certificate,
    serialize_instance,
)
from .multigraph import DIRECTED, UNDIRECTED, HamDecompError, verify_certificate
from .oracle import MAX_ORACLE_N, brute_force_decompose
from .rng import Xorshift64Star
from .solver import SolveBudget

EXIT_FOUND = 0
EXIT_NONEXISTENT = 1
EXIT_BUDGET = 2
EXIT_USAGE = 3
EXIT_VERIFY_FAILED = 4

SOLUTION = "solution"
NOSOLUTION = "nosolution"
BUDGET = "budget"

CSV_HEADER = [
    "kind", "n", "instance_id", "seed", "algorithm", "outcome",
    "iterations", "cuts_added", "solver_ms", "ls_ms", "total_ms",
]
TIMING_COLUMNS = ("solver_ms", "ls_ms", "total_ms")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


@dataclass
class BenchRow:
    kind: str
    n: int
    instance_id: int
    seed: int
    algorithm: str
    outcome: str
    iterations: int
    cuts_added: int
    solver_ms: float
    ls_ms: float
    total_ms: float

    def csv_values(self) -> list[str]:
        out = []
        for f, v in zip(fields(self), astuple(self)):
            out.append(f"{v:.3f}" if f.name in TIMING_COLUMNS else str(v))
        return out


def outcome_label(outcome) -> str:
    if isinstance(outcome, Decomposition):
        return SOLUTION
    if isinstance(outcome, NonExistent):
        return NOSOLUTION
    return BUDGET


def _config(args, seed: int) -> EngineConfig:
    deadline = None if args.time_limit_ms <= 0 else args.time_limit_ms / 1000.0
    return EngineConfig(
        algorithm=args.algorithm,
        budget=SolveBudget(deadline=deadline),
        max_iterations=args.max_iterations,
        attempt_limit=args.attempt_limit,
        seed=seed,
    )


def _read_instance(path: str) -> Instance:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    return parse_instance(text)


def cmd_generate(args) -> int:
    if args.n < 3:
        raise UsageError("--n must be at least 3")
    inst = generate_instance(args.n, args.kind, Xorshift64Star(args.seed))
    text = serialize_instance(inst)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_FOUND


def cmd_solve(args) -> int:
    inst = _read_instance(args.instance)
    outcome = run(inst, _config(args, args.seed))
    st = outcome.stats
    label = outcome_label(outcome)
    print(
        f"{label} {st.iterations} {st.cuts_added} {st.solver_time * 1000:.3f} "
        f"{st.ls_time * 1000:.3f} {st.total_time * 1000:.3f}"
    )
    if isinstance(outcome, Decomposition):
        out = args.out or f"{args.instance}.cert"
        Path(out).write_text(serialize_certificate(outcome.certificate), encoding="utf-8")
        return EXIT_FOUND
    return EXIT_NONEXISTENT if label == NOSOLUTION else EXIT_BUDGET


def cmd_verify(args) -> int:
    inst = _read_instance(args.instance)
    try:
        text = Path(args.certificate).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.certificate}: {exc}") from None
    cert = parse_certificate(text, inst.kind)
    report = verify_certificate(inst, cert)
    for line in report.lines():
        print(line)
    return EXIT_FOUND if report.passed else EXIT_VERIFY_FAILED


def cmd_oracle(args) -> int:
    inst = _read_instance(args.instance)
    if inst.n > MAX_ORACLE_N:
        raise UsageError(f"oracle is limited to n <= {MAX_ORACLE_N}")
    result = brute_force_decompose(inst, args.witnesses)
    print(f"exists {'true' if result.exists else 'false'}")
    print(f"count {result.count_pairs}")
    for cert in result.witnesses:
        print("witness " + serialize_certificate(cert).replace("\n", " | ").rstrip(" |"))
    return EXIT_FOUND if result.exists else EXIT_NONEXISTENT


def _bench_task(task) -> BenchRow:
    kind, n, instance_id, seed, algorithm, args = task
    inst = instance_for_seed(n, kind, seed)
    args = argparse.Namespace(**{**vars(args), "algorithm": algorithm})
    outcome = run(inst, _config(args, seed))
    st = outcome.stats
    return BenchRow(
        kind, n, instance_id, seed, algorithm, outcome_label(outcome),
        st.iterations, st.cuts_added,
        st.solver_time * 1000, st.ls_time * 1000, st.total_time * 1000,
    )


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"bad --sizes {text!r}") from None
    if not sizes or any(s < 3 for s in sizes):
        raise UsageError("--sizes needs integers >= 3")
    return sizes


def bench_tasks(args) -> list[tuple]:
    sizes = _parse_sizes(args.sizes)
    if args.count < 0:
        raise UsageError("--count must be nonnegative")
    kinds = [UNDIRECTED, DIRECTED] if args.kind == "both" else [args.kind]
    algorithms = [ILP, ILP_LS] if args.algorithm == "both" else [args.algorithm]
    tasks = []
    for kind in kinds:
        for n in sizes:
            for i in range(args.count):
                for alg in algorithms:
                    tasks.append((kind, n, i, args.seed + i, alg, args))
    return tasks


def run_bench(args) -> list[BenchRow]:
    tasks = bench_tasks(args)
    if args.jobs <= 1 or len(tasks) <= 1:
        return [_bench_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=args.jobs) as pool:
        rows = list(pool.map(_bench_task, tasks, chunksize=1))
    # pool.map preserves task order, which is the --jobs 1 order
    return rows


def write_csv(rows: list[BenchRow], path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for row in rows:
            writer.writerow(row.csv_values())


def summarize(rows: list[BenchRow]) -> list[str]:
    """Mean time and iterations split by outcome, one line per (kind, n, algorithm)."""
    groups: dict[tuple, list[BenchRow]] = {}
    for r in rows:
        groups.setdefault((r.kind, r.n, r.algorithm), []).append(r)
    lines = []
    for (kind, n, alg), rs in groups.items():
        parts = [f"{kind:<10} n={n:<5} {alg:<6}"]
        for label in (SOLUTION, NOSOLUTION, BUDGET):
            sel = [r for r in rs if r.outcome == label]
            if sel:
                t = sum(r.total_ms for r in sel) / len(sel) / 1000
                it = sum(r.iterations for r in sel) / len(sel)
                parts.append(f"{label} N={len(sel)} time={t:.3f}s iter={it:.2f}")
            else:
                parts.append(f"{label} N=0")
        lines.append("  ".join(parts))
    return lines


def cmd_bench(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    rows = run_bench(args)
    write_csv(rows, args.csv)
    for line in summarize(rows):
        print(line)
    return EXIT_FOUND


def _add_engine_flags(p, algorithm_choices):
    p.add_argument("--algorithm", choices=algorithm_choices, default=ILP_LS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--attempt-limit", type=int, default=10)
    p.add_argument("--time-limit-ms", type=int, default=60000,
                   help="wall-clock limit per instance; <= 0 disables it")
    p.add_argument("--max-iterations", type=int, default=1000)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hamdecomp", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", choices=[DIRECTED, UNDIRECTED], default=UNDIRECTED)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="search for a Hamiltonian decomposition")
    p.add_argument("instance")
    p.add_argument("--out", help="certificate path (default: <instance>.cert)")
    _add_engine_flags(p, list(ALGORITHMS))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a certificate against an instance")
    p.add_argument("instance")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force existence check (n <= 12)")
    p.add_argument("instance")
    p.add_argument("--witnesses", type=int, default=4)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run a seeded benchmark and write CSV")
    p.add_argument("--sizes", required=True, help="comma separated vertex counts")
    p.add_argument("--count", type=int, required=True)
    p.add_argument("--kind", choices=[DIRECTED, UNDIRECTED, "both"], default="both")
    p.add_argument("--csv", required=True)
    p.add_argument("--jobs", type=int, default=1)
    _add_engine_flags(p, list(ALGORITHMS) + ["both"])
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (UsageError, FormatError, HamDecompError, ValueError) as exc:
        print(f"hamdecomp: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
