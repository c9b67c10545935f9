"""Benchmark protocol: k-descent from the greedy bound with repeated timed runs.

For each k, starting one below the greedy DSatur bound (UBI), the algorithm
runs ``runs`` times with seeds ``base_seed + i``. If any run finds a proper
k-coloring, k is lowered and the batch repeats; the first batch with no
success ends the descent. UB is the last k with a success and Reached the
success rate of that batch.
"""

from __future__ import annotations

import csv
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from . import search
from .coloring import verify_coloring
from .graph import Graph
from .greedy import greedy_dsatur
from .instances import complete
from .policy import SearchParams
from .sat_encoder import solve_external

log = logging.getLogger(__name__)

ALGORITHMS = ("nrpa", "nmcs", "greedy", "sat-external")

RESULTS_HEADER = ["instance", "algorithm", "k", "seed", "solved", "elapsed_seconds", "playouts"]
SUMMARY_HEADER = ["instance", "chi", "ubi", "algorithm", "ub", "reached_percent", "avg_elapsed"]
TRACE_HEADER = ["instance", "algorithm", "cumulative_seconds", "improvements"]


class MetadataError(ValueError):
    pass


@dataclass
class InstanceMeta:
    name: str
    chi_known: int | None = None
    difficulty: str = ""
    ubi: int | None = None


@dataclass
class RunRecord:
    instance: str
    algorithm: str
    k: int
    seed: int
    solved: bool
    elapsed: float
    playout_count: int
    coloring: list[int] | None = field(default=None, repr=False)

    def row(self) -> list[str]:
        return [
            self.instance, self.algorithm, str(self.k), str(self.seed),
            str(int(self.solved)), f"{self.elapsed:.3f}", str(self.playout_count),
        ]


@dataclass
class KSummary:
    ubi: int
    ub: int
    # percent of successful runs at k = ub; None when no batch ran at ub
    reached: float | None
    improved: bool


@dataclass
class AlgorithmConfig:
    """Everything a single run needs besides the graph, k and seed."""

    name: str = "nrpa"
    timeout: float | None = 1800.0
    level: int = 7
    iterations: int = 100
    alpha: float = 1.0
    adapt_all: bool = True
    max_playouts: int | None = None
    # template for the external SAT solver, see sat_encoder.solve_external
    sat_command: str | None = None

    def __post_init__(self):
        if self.name not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.name!r}; expected one of {ALGORITHMS}")


def warmup() -> None:
    """Compile the search kernels so the first timed run does not pay for it."""
    search.nrpa(complete(3), 3, SearchParams(level=1, iterations=2, max_playouts=4))
    search.nrpa(complete(3), 2, SearchParams(level=1, iterations=2, max_playouts=4))
    search.nmcs(complete(3), 2, level=1)


def run_once(g: Graph, k: int, seed: int, config: AlgorithmConfig) -> RunRecord:
    """One timed attempt at a proper k-coloring."""
    if config.name == "nrpa":
        params = SearchParams(
            level=config.level, iterations=config.iterations, alpha=config.alpha,
            adapt_all=config.adapt_all, seed=seed, timeout=config.timeout,
            max_playouts=config.max_playouts,
        )
        res = search.nrpa(g, k, params)
    elif config.name == "nmcs":
        res = search.nmcs_increasing(g, k, timeout=config.timeout, seed=seed, max_playouts=config.max_playouts)
    elif config.name == "sat-external":
        if not config.sat_command:
            raise ValueError("sat-external needs a solver command template")
        ext = solve_external(g, k, config.sat_command, timeout=config.timeout)
        solved = bool(ext.satisfiable)
        return RunRecord(g.name, config.name, k, seed, solved, ext.elapsed, 0, ext.coloring)
    else:
        raise ValueError(f"{config.name!r} is not a search algorithm")
    coloring = res.assignment if res.solved else None
    return RunRecord(g.name, config.name, k, seed, res.solved, res.elapsed, res.playout_count, coloring)


def _run_job(job: tuple[Graph, int, int, AlgorithmConfig]) -> RunRecord:
    g, k, seed, config = job
    return run_once(g, k, seed, config)


def _batch(g: Graph, k: int, seeds: Sequence[int], config: AlgorithmConfig, pool) -> list[RunRecord]:
    jobs = [(g, k, s, config) for s in seeds]
    records = list(pool.map(_run_job, jobs)) if pool else [_run_job(j) for j in jobs]
    for r in records:
        if r.solved:
            check = verify_coloring(g, r.coloring)
            if not check.proper or check.colors_used > k:
                raise RuntimeError(f"{r.algorithm} returned an invalid {k}-coloring for {g.name} (seed {r.seed})")
    return records


def run_protocol(
    g: Graph,
    algorithm: str | AlgorithmConfig = "nrpa",
    runs: int = 5,
    timeout: float | None = 1800.0,
    base_seed: int = 0,
    lower_bound: int | None = None,
    jobs: int = 1,
    ubi: int | None = None,
) -> tuple[KSummary, list[RunRecord]]:
    """Run the k-descent protocol on one instance.

    ``algorithm`` is a name or a full :class:`AlgorithmConfig` (whose own
    timeout then wins over ``timeout``). When ``lower_bound`` is a proven
    chromatic number, the descent never tries k below it and, if the greedy
    bound already equals it, a batch is run at that k to measure Reached.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    config = algorithm if isinstance(algorithm, AlgorithmConfig) else AlgorithmConfig(algorithm, timeout=timeout)
    if ubi is None:
        ubi = greedy_dsatur(g)[0]
    if config.name == "greedy":
        record = RunRecord(g.name, "greedy", ubi, base_seed, True, 0.0, 1)
        return KSummary(ubi, ubi, 100.0, False), [record]

    floor = max(1, lower_bound or 1)
    k = min(ubi, max(ubi - 1, floor)) if lower_bound is not None else ubi - 1
    seeds = [base_seed + i for i in range(runs)]
    records: list[RunRecord] = []
    ub, reached = ubi, None
    if config.name != "sat-external":
        warmup()
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while k >= floor:
            batch = _batch(g, k, seeds, config, pool)
            records.extend(batch)
            wins = sum(r.solved for r in batch)
            log.info("%s %s k=%d: %d/%d solved", g.name, config.name, k, wins, runs)
            if not wins:
                break
            ub, reached = k, 100.0 * wins / runs
            k -= 1
    finally:
        if pool:
            pool.shutdown()
    return KSummary(ubi, ub, reached, ub < ubi), records


def avg_ratio_to_chi(summaries: Iterable[tuple[KSummary, InstanceMeta]]) -> float:
    """Mean of UB / chi over instances (UB falls back to UBI when not improved)."""
    ratios = []
    for summary, meta in summaries:
        if meta.chi_known is None:
            raise MetadataError(f"no chromatic number known for instance {meta.name!r}")
        ub = summary.ub if summary.improved else summary.ubi
        ratios.append(ub / meta.chi_known)
    if not ratios:
        raise MetadataError("no instances to average")
    return sum(ratios) / len(ratios)


def format_ratio(x: float) -> str:
    return f"{x:.4f}"


def improvement_trace(records: Sequence[RunRecord], ubi: int) -> list[tuple[float, int]]:
    """Cumulative time to each improvement over the greedy bound.

    Records must come from one instance and algorithm, in execution order.
    Every tested k adds the time of its best run to the running total: the
    fastest successful run, or for a batch with no success the fastest
    failed run. Each solved k below ``ubi`` gives a point
    ``(cumulative seconds, ubi - k)``; a final failed batch after at least
    one improvement adds a closing point at the same improvement count, so
    the trace ends where the descent stopped.
    """
    batches: dict[int, list[RunRecord]] = {}
    for r in records:
        batches.setdefault(r.k, []).append(r)
    trace: list[tuple[float, int]] = []
    total = 0.0
    for k, batch in batches.items():
        wins = [r.elapsed for r in batch if r.solved]
        if k >= ubi:
            continue
        total += min(wins) if wins else min(r.elapsed for r in batch)
        if wins:
            trace.append((total, ubi - k))
        elif trace:
            trace.append((total, trace[-1][1]))
    return trace


def read_meta(path: str | Path) -> dict[str, InstanceMeta]:
    """Parse ``name chi_or_LB difficulty`` lines; ``#`` starts a comment, ``?`` means unknown."""
    metas = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise MetadataError(f"{path}:{lineno}: expected 'name chi difficulty', got {raw!r}")
        try:
            chi = None if parts[1] in ("?", "-") else int(parts[1])
        except ValueError:
            raise MetadataError(f"{path}:{lineno}: bad chromatic number {parts[1]!r}") from None
        metas[parts[0]] = InstanceMeta(parts[0], chi, parts[2] if len(parts) > 2 else "")
    return metas


def write_results(path: str | Path, records: Iterable[RunRecord]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULTS_HEADER)
        w.writerows(r.row() for r in records)


def summary_row(meta: InstanceMeta, algorithm: str, summary: KSummary, records: Sequence[RunRecord]) -> list[str]:
    at_ub = [r.elapsed for r in records if r.k == summary.ub]
    return [
        meta.name,
        "" if meta.chi_known is None else str(meta.chi_known),
        str(summary.ubi),
        algorithm,
        str(summary.ub) if summary.improved or summary.reached is not None else "--",
        "--" if summary.reached is None else f"{summary.reached:.0f}",
        f"{sum(at_ub) / len(at_ub):.3f}" if at_ub else "",
    ]


def write_summary(path: str | Path, rows: Iterable[list[str]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        w.writerows(rows)


def write_trace(path: str | Path, rows: Iterable[tuple[str, str, float, int]]) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRACE_HEADER)
        w.writerows([name, algo, f"{t:.3f}", str(imp)] for name, algo, t, imp in rows)
