"""Command line: ``phylofix {count,sample,enumerate,verify}``.

Results go to stdout, diagnostics to stderr.  Sample ``r`` of a run always
uses the stream ``RandomSource(seed).spawn(r)``, so output bytes depend only
on the arguments and the seed, whatever ``--workers`` is.
"""
from __future__ import annotations

import argparse
import json
import secrets
import sys
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .core import CycleNotationError, is_fixed, parse_permutation, to_newick
from .counting import build_s_table, chain_weight, check_partition, r_lambda, t_n_k
from .oracle import GuardError, enumerate_all_trees, enumerate_fixed_trees
from .sampler import (
    EmptySupportError,
    RandomSource,
    canonical_permutation,
    sample_fixed_tree,
    sample_partition,
)
from .verify import checks


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    command: str
    target: Optional[str] = None
    n: Optional[int] = None
    k: int = 1
    partition: Optional[str] = None
    permutation: Optional[str] = None
    fixed_by: Optional[str] = None
    seed: Optional[int] = None
    count: int = 1
    format: str = "newick"
    workers: int = 1
    max_n: int = 5
    verbose: bool = False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="phylofix", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact counts")
    p.add_argument("target", choices=["fixed-trees", "chains"])
    p.add_argument("--partition", help="cycle type, e.g. 8,4,2")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=2)

    p = sub.add_parser("sample", help="uniform random generation")
    p.add_argument("target", choices=["tree", "chain", "partition"])
    p.add_argument("--permutation", help='cycle notation, e.g. "(1,2)(3,4)"')
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--format", choices=["newick", "json"], default="newick")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("enumerate", help="list every tree (brute force)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--fixed-by", help="keep trees fixed by this permutation")

    p = sub.add_parser("verify", help="cross-check formulas against brute force")
    p.add_argument("--max-n", type=int, default=5)

    for p in sub.choices.values():
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def parse_config(argv: Optional[Sequence[str]] = None) -> CliConfig:
    args = vars(build_parser().parse_args(argv))
    return CliConfig(**{key: value for key, value in args.items() if value is not None})


# ----------------------------------------------------------------------


def _positive(name: str, value: Optional[int]) -> int:
    if value is None:
        raise UsageError(f"--{name} is required")
    if value < 1:
        raise UsageError(f"--{name} must be at least 1")
    return value


def cmd_count(cfg: CliConfig) -> List[str]:
    if cfg.target == "fixed-trees":
        if cfg.partition is None:
            raise UsageError("--partition is required")
        try:
            parts = check_partition(sorted((int(p) for p in cfg.partition.split(",")), reverse=True))
        except ValueError:
            raise UsageError(f"malformed partition {cfg.partition!r}") from None
        return [str(r_lambda(parts))]
    return [str(t_n_k(_positive("n", cfg.n), _positive("k", cfg.k)))]


def _sample_one(job):
    target, n, k, seed, index, perm_text, table = job
    rng = RandomSource(seed).spawn(index)
    if target == "partition":
        return sample_partition(n, k, table, rng)
    if target == "tree":
        sigma = parse_permutation(perm_text, range(1, n + 1))
        tree = sample_fixed_tree(sigma, rng)
        assert is_fixed(tree, sigma)
        return to_newick(tree)
    sigma = canonical_permutation(sample_partition(n, k, table, rng))
    trees = [sample_fixed_tree(sigma, rng) for _ in range(k)]
    assert all(is_fixed(t, sigma) for t in trees)
    return [to_newick(t) for t in trees]


def cmd_sample(cfg: CliConfig) -> List[str]:
    seed = cfg.seed if cfg.seed is not None else secrets.randbits(64)
    if not 0 <= seed < 2**64:
        raise UsageError("--seed must be a 64-bit unsigned integer")
    count = _positive("count", cfg.count)
    perm_text = None
    table = None
    k = cfg.k
    if cfg.target == "tree":
        if cfg.permutation is None:
            raise UsageError("--permutation is required")
        try:
            sigma = parse_permutation(cfg.permutation, range(1, cfg.n + 1) if cfg.n else None)
        except CycleNotationError as exc:
            raise UsageError(str(exc)) from None
        if r_lambda(sigma.cycle_type) == 0:
            raise EmptySupportError(f"empty support: cycle type {sigma.cycle_type} is not binary")
        n, k, perm_text = len(sigma), 1, cfg.permutation
    else:
        n = _positive("n", cfg.n)
        k = _positive("k", cfg.k)
        table = build_s_table(n, k)

    jobs = [(cfg.target, n, k, seed, r, perm_text, table) for r in range(count)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            results = list(pool.map(_sample_one, jobs, chunksize=max(1, count // (4 * cfg.workers))))
    else:
        results = [_sample_one(job) for job in jobs]

    if cfg.target == "partition":
        return _partition_report(cfg, n, k, seed, count, results, table)
    meta = {"n": n, "k": k, "seed": seed}
    if cfg.target == "tree":
        meta["permutation"] = str(sigma)
    if cfg.format == "json":
        return [json.dumps({**meta, "trees": results})]
    lines = ["# " + " ".join(f"{key}={value}" for key, value in meta.items()) + f" count={count}"]
    if cfg.target == "tree":
        return lines + results
    for idx, chain in enumerate(results):
        if idx:
            lines.append("")
        lines.extend(chain)
    return lines


def _partition_report(cfg, n, k, seed, count, results, table) -> List[str]:
    # Exact law only on observed partitions; the unseen mass enters the TV
    # distance as one term, so this scales past full enumeration.
    total = table.total(n)
    freq = Counter(results)
    observed = sorted(freq, reverse=True)
    exact = {lam: chain_weight(lam, k) / total for lam in observed}
    tv = (sum(abs(Fraction(freq[lam], count) - exact[lam]) for lam in observed)
          + 1 - sum(exact.values())) / 2
    key = lambda lam: ",".join(map(str, lam))
    if cfg.format == "json":
        return [json.dumps({
            "n": n, "k": k, "seed": seed, "count": count,
            "partitions": {key(lam): freq[lam] for lam in observed},
            "exact": {key(lam): str(exact[lam]) for lam in observed},
            "tv": float(tv),
        })]
    lines = [f"# n={n} k={k} seed={seed} count={count}", "# partition\tcount\tfrequency\texact"]
    for lam in observed:
        lines.append(f"{key(lam)}\t{freq[lam]}\t{freq[lam] / count:.6f}\t{float(exact[lam]):.6f}")
    lines.append(f"tv={float(tv):.6f}")
    return lines


def cmd_enumerate(cfg: CliConfig) -> List[str]:
    n = _positive("n", cfg.n)
    if cfg.fixed_by:
        try:
            sigma = parse_permutation(cfg.fixed_by, range(1, n + 1))
        except CycleNotationError as exc:
            raise UsageError(str(exc)) from None
        trees = enumerate_fixed_trees(sigma)
    else:
        trees = enumerate_all_trees(range(1, n + 1))
    lines = sorted(to_newick(t) for t in trees)
    return lines + [f"count={len(lines)}"]


def cmd_verify(cfg: CliConfig) -> tuple[List[str], bool]:
    try:
        suite = checks(cfg.max_n)
    except ValueError as exc:
        raise GuardError(str(exc)) from None
    lines = []
    ok = True
    for name, run in suite:
        start = time.perf_counter()
        failures = list(run())
        if cfg.verbose:
            print(f"{name}: {time.perf_counter() - start:.2f}s", file=sys.stderr)
        if failures:
            ok = False
            lines.append(f"FAIL {name}: {failures[0]}" + (f" (+{len(failures) - 1} more)" if len(failures) > 1 else ""))
        else:
            lines.append(f"PASS {name}")
    return lines, ok


def main(argv: Optional[Sequence[str]] = None) -> int:
    cfg = parse_config(argv)
    ok = True
    try:
        if cfg.command == "count":
            lines = cmd_count(cfg)
        elif cfg.command == "sample":
            lines = cmd_sample(cfg)
        elif cfg.command == "enumerate":
            lines = cmd_enumerate(cfg)
        else:
            lines, ok = cmd_verify(cfg)
    except (UsageError, GuardError, EmptySupportError, ValueError) as exc:
        print(f"phylofix: error: {exc}", file=sys.stderr)
        return 2
    for line in lines:
        print(line)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
