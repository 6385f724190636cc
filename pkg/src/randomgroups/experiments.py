"""Seeded Monte Carlo sweeps over model and graph parameter grids.

Every trial's RNG seed is a pure function of (master_seed, cell, trial
index): the cell's canonical key string is hashed with FNV-1a 64 and the
three values are chained through the splitmix64 avalanche mixer.  Records
are buffered and emitted in canonical (cell, trial) order whatever the
worker count, so output bytes depend only on the config.

The runtime_ms column is left empty unless timings are requested, since
wall time would break byte-identical reruns; see the CSV schema note in
write_csv.
"""

from __future__ import annotations

import io
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from time import perf_counter

from .linkgraph import collapse_duplicates, is_bipartite
from .matching import (
    DEFAULT_BUDGET,
    DEFAULT_RESTARTS,
    find_perfect_matching,
    sample_hypergraph,
)
from .models import sample_graph, sample_triangular
from .spectral import (
    CRITERION_MARGIN,
    bound_chung,
    bound_friedman,
    bound_friedman_bipartite,
    lambda1,
    spectral_criterion,
)

CSV_FIELDS = (
    "experiment model n m l d v M p trial seed "
    "lambda1 connected criterion matching duplicates runtime_ms"
).split()

EXPERIMENTS = ("criterion", "matching", "gap", "duplicates")

_MASK = (1 << 64) - 1


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def _fnv1a64(data: bytes) -> int:
    h = 0xCBF29CE484222325
    for b in data:
        h = ((h ^ b) * 0x100000001B3) & _MASK
    return h


def cell_key(cell: dict) -> str:
    """Canonical text of a cell: sorted key=value pairs."""
    return ",".join(f"{k}={cell[k]}" for k in sorted(cell))


def derived_seed(master_seed: int, cell: dict, trial: int) -> int:
    """64-bit trial seed: splitmix64 chained over master, cell hash, trial."""
    s = _splitmix64(master_seed & _MASK)
    s = _splitmix64(s ^ _fnv1a64(cell_key(cell).encode()))
    s = _splitmix64(s ^ (trial & _MASK))
    return s


@dataclass
class SweepConfig:
    """A sweep: one experiment kind, a list of parameter cells, trials."""

    experiment: str
    cells: list[dict]
    trials: int = 20
    master_seed: int = 0
    mode: str = "heuristic"
    jobs: int = 1
    timings: bool = False

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        if not self.cells:
            raise ValueError("sweep needs at least one cell")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.jobs < 1:
            raise ValueError("jobs must be >= 1")


@dataclass
class TrialRecord:
    """One trial's outcome; field names match the CSV schema.

    extras carries diagnostics with no schema column (degree stats,
    duplicate-graph max degree); writers skip it.
    """

    experiment: str
    model: str = ""
    n: int | None = None
    m: int | None = None
    l: int | None = None
    d: float | None = None
    v: int | None = None
    M: int | None = None
    p: float | None = None
    trial: int = 0
    seed: int = 0
    lambda1: float | None = None
    connected: bool | None = None
    criterion: bool | None = None
    matching: str = ""
    duplicates: int | None = None
    runtime_ms: float | None = None
    extras: dict = field(default_factory=dict)


def _run_criterion_trial(cell: dict, trial: int, seed: int, cfg: SweepConfig) -> TrialRecord:
    rng = random.Random(seed)
    model = cell.get("model", "triangular")
    positive = model == "positive-triangular"
    t0 = perf_counter()
    pres = sample_triangular(cell["m"], cell["d"], rng, positive=positive)
    holds, report = spectral_criterion(pres)
    ms = (perf_counter() - t0) * 1000.0
    rec = TrialRecord(
        experiment="criterion",
        model=model,
        m=cell["m"],
        d=cell["d"],
        trial=trial,
        seed=seed,
        lambda1=None if report.lambda1 != report.lambda1 else report.lambda1,
        connected=report.connected,
        criterion=holds,
        runtime_ms=ms,
    )
    if positive:
        from .linkgraph import build_link_graph

        rec.extras["bipartite"] = is_bipartite(build_link_graph(pres))
    rec.extras["relators"] = len(pres.relators)
    return rec


def _run_matching_trial(cell: dict, trial: int, seed: int, cfg: SweepConfig) -> TrialRecord:
    rng = random.Random(seed)
    part = cell["part_size"]
    reduced = bool(cell.get("reduced", False))
    mode = cell.get("mode", cfg.mode)
    t0 = perf_counter()
    h = sample_hypergraph(part, cell["M"], rng, reduced=reduced)
    res = find_perfect_matching(
        h,
        mode=mode,
        budget=int(cell.get("budget", DEFAULT_BUDGET)),
        restarts=int(cell.get("restarts", DEFAULT_RESTARTS)),
        seed=seed,
    )
    ms = (perf_counter() - t0) * 1000.0
    model = "hypergraph-reduced" if reduced else "hypergraph"
    return TrialRecord(
        experiment="matching",
        model=model,
        n=part // 2,
        M=cell["M"],
        trial=trial,
        seed=seed,
        matching=res.status,
        runtime_ms=ms,
    )


def _graph_bound(cell: dict) -> float | None:
    kind = cell["graph"]
    if kind in ("configuration", "configuration_reduced"):
        return bound_friedman(cell["v"], cell.get("c", 0.0))
    if kind == "bipartite_regular":
        return bound_friedman_bipartite(cell["v"], cell.get("eps", 0.0))
    if kind == "gnp":
        return bound_chung(cell["n"], cell["p"], cell.get("g", 0.0))
    if kind == "gnm":
        n = cell["n"]
        p = cell["M"] / (n * (n - 1) / 2)
        return bound_chung(n, p, cell.get("g", 0.0))
    return None


def _run_gap_trial(cell: dict, trial: int, seed: int, cfg: SweepConfig) -> TrialRecord:
    rng = random.Random(seed)
    kind = cell["graph"]
    params = {k: v for k, v in cell.items() if k in ("n", "v", "M", "p")}
    t0 = perf_counter()
    g = sample_graph(kind, rng, **params)
    lam, connected = lambda1(g)
    ms = (perf_counter() - t0) * 1000.0
    deg = g.degrees()
    rec = TrialRecord(
        experiment="gap",
        model=kind,
        n=cell["n"],
        v=cell.get("v"),
        M=cell.get("M"),
        p=cell.get("p"),
        trial=trial,
        seed=seed,
        lambda1=lam,
        connected=connected,
        criterion=connected and lam > 0.5 + CRITERION_MARGIN,
        runtime_ms=ms,
    )
    rec.extras["deg_min"] = min(deg)
    rec.extras["deg_max"] = max(deg)
    b = _graph_bound(cell)
    if b is not None:
        rec.extras["bound"] = b
    return rec


def _run_duplicates_trial(cell: dict, trial: int, seed: int, cfg: SweepConfig) -> TrialRecord:
    from .linkgraph import split_link_parts

    rng = random.Random(seed)
    t0 = perf_counter()
    pres = sample_triangular(cell["m"], cell["d"], rng)
    dup_total = 0
    kmax = 0
    for part in split_link_parts(pres):
        _, removed = collapse_duplicates(part)
        dup_total += removed.edge_count()
        if removed.edges:
            kmax = max(kmax, max(removed.degrees()))
    ms = (perf_counter() - t0) * 1000.0
    rec = TrialRecord(
        experiment="duplicates",
        model="triangular",
        m=cell["m"],
        d=cell["d"],
        trial=trial,
        seed=seed,
        duplicates=dup_total,
        runtime_ms=ms,
    )
    rec.extras["kmax"] = kmax
    return rec


_RUNNERS = {
    "criterion": _run_criterion_trial,
    "matching": _run_matching_trial,
    "gap": _run_gap_trial,
    "duplicates": _run_duplicates_trial,
}


def run_sweep(cfg: SweepConfig) -> list[TrialRecord]:
    """Run all (cell, trial) tasks; records come back in canonical order."""
    cfg.validate()
    runner = _RUNNERS[cfg.experiment]
    tasks = []
    for ci, cell in enumerate(cfg.cells):
        for t in range(cfg.trials):
            tasks.append((ci, t, cell, derived_seed(cfg.master_seed, cell, t)))
    if cfg.jobs == 1:
        results = {(ci, t): runner(cell, t, seed, cfg) for ci, t, cell, seed in tasks}
    else:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            futures = {
                (ci, t): pool.submit(runner, cell, t, seed, cfg)
                for ci, t, cell, seed in tasks
            }
            results = {key: fut.result() for key, fut in futures.items()}
    return [results[(ci, t)] for ci, t, _, _ in tasks]


def run_criterion_sweep(cfg: SweepConfig) -> list[TrialRecord]:
    return run_sweep(cfg)


def run_matching_sweep(cfg: SweepConfig) -> list[TrialRecord]:
    return run_sweep(cfg)


def run_gap_sweep(cfg: SweepConfig) -> list[TrialRecord]:
    return run_sweep(cfg)


def run_duplicate_stats(cfg: SweepConfig) -> list[TrialRecord]:
    return run_sweep(cfg)


# -------------------------------------------------------------- writers


def _cell_value(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def config_header(cfg: SweepConfig) -> list[str]:
    """Normalised config echoed as comment lines at the top of outputs."""
    lines = [
        f"# experiment={cfg.experiment}",
        f"# trials={cfg.trials}",
        f"# master_seed={cfg.master_seed}",
        f"# mode={cfg.mode}",
    ]
    for cell in cfg.cells:
        lines.append(f"# cell {cell_key(cell)}")
    return lines


def write_csv(records: list[TrialRecord], cfg: SweepConfig | None = None) -> str:
    """CSV with the fixed header; runtime_ms stays empty without timings.

    Wall time is the one nondeterministic field, so it is only written
    when cfg.timings is set; reruns of a sweep are otherwise
    byte-identical for a fixed master seed.
    """
    timings = bool(cfg.timings) if cfg else False
    out = io.StringIO()
    if cfg is not None:
        for line in config_header(cfg):
            out.write(line + "\n")
    out.write(",".join(CSV_FIELDS) + "\n")
    for rec in records:
        row = []
        for name in CSV_FIELDS:
            if name == "runtime_ms" and not timings:
                row.append("")
                continue
            row.append(_cell_value(getattr(rec, name)))
        out.write(",".join(row) + "\n")
    return out.getvalue()


def write_jsonl(records: list[TrialRecord], cfg: SweepConfig | None = None) -> str:
    """JSON lines with the same fields as the CSV schema."""
    timings = bool(cfg.timings) if cfg else False
    lines = []
    if cfg is not None:
        lines.extend(config_header(cfg))
    for rec in records:
        obj = {}
        for f in fields(rec):
            if f.name == "extras":
                continue
            if f.name == "runtime_ms" and not timings:
                obj[f.name] = None
                continue
            obj[f.name] = getattr(rec, f.name)
        lines.append(json.dumps(obj))
    return "\n".join(lines) + "\n"
