"""Seeded experiment runner: sample tournaments, filter by forbidden family,
record the largest transitive subtournament, estimate the growth exponent.
"""

from __future__ import annotations

import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .core import (
    TR_EXACT_LIMIT,
    PartialDigraph,
    Tournament,
    is_family_free,
    is_transitive_set,
    ramsey_transitive,
    tr_exact,
    transitive_order,
)
from .generators import make_rng, random_tournament
from .recognize import K6
from .smooth import epsilon_thresholds

__all__ = [
    "ConfigError",
    "RejectBudgetExhausted",
    "ExperimentConfig",
    "ExperimentRecord",
    "BUILTIN_FAMILY",
    "parse_config",
    "load_config",
    "sample_tournament",
    "sample_free",
    "estimate_epsilon",
    "run_sample",
    "run_experiment",
    "OUTPUT_ENV",
]

OUTPUT_ENV = "EHTOUR_OUTPUT"


class ConfigError(ValueError):
    pass


class RejectBudgetExhausted(RuntimeError):
    pass


BUILTIN_FAMILY: dict[str, Tournament] = {
    "arc": Tournament(2, [0b10, 0]),
    "c3": Tournament.from_backward_arcs(3, [(2, 0)]),
    "tt3": Tournament.transitive(3),
    "k6": K6,
    # a 4-vertex super 2-nebula and the 5-vertex delta-galaxy with a left star
    "sigma4": Tournament.from_backward_arcs(4, [(3, 0), (2, 0), (3, 1)]),
    "delta5": Tournament.from_backward_arcs(5, [(2, 0), (1, 0), (2, 1), (4, 3)]),
}


@dataclass
class ExperimentConfig:
    sizes: list[int]
    samples: int = 1
    family: list[str] = field(default_factory=list)
    seed: int = 0
    max_rejects: int = 10**6
    tr_limit: int = TR_EXACT_LIMIT
    output: str | None = None
    workers: int = 1
    record_timing: bool = False
    c: Fraction | None = None
    delta: int | None = None
    base_dir: str = "."

    def family_tournaments(self) -> list[Tournament]:
        out = []
        for item in self.family:
            if item.startswith("builtin:"):
                name = item.split(":", 1)[1]
                if name not in BUILTIN_FAMILY:
                    raise ConfigError(f"unknown builtin family member {name!r}")
                out.append(BUILTIN_FAMILY[name])
            else:
                path = Path(item)
                if not path.is_absolute():
                    path = Path(self.base_dir) / path
                try:
                    out.append(Tournament.from_text(path.read_text()))
                except OSError as exc:
                    raise ConfigError(f"cannot read family file {item}: {exc}") from exc
                except ValueError as exc:
                    raise ConfigError(f"bad family file {item}: {exc}") from exc
        return out


@dataclass
class ExperimentRecord:
    n: int
    sample: int
    is_free: bool
    rejects: int
    tr: int
    tr_exact: bool
    witness: list[int]
    elapsed: float | None = None

    def to_json(self) -> str:
        d = asdict(self)
        if self.elapsed is None:
            del d["elapsed"]
        return json.dumps(d, sort_keys=True)


def _int_list(text: str, key: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise ConfigError(f"{key} must be a list of integers") from exc


def parse_config(text: str, base_dir: str = ".") -> ExperimentConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value")
        k, v = (s.strip() for s in line.split("=", 1))
        raw[k] = v
    known = {"sizes", "samples", "family", "seed", "max_rejects", "tr_limit", "output",
             "workers", "record_timing", "c", "delta"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "sizes" not in raw:
        raise ConfigError("sizes is required")

    def pos_int(key, default):
        if key not in raw:
            return default
        try:
            v = int(raw[key])
        except ValueError as exc:
            raise ConfigError(f"{key} must be an integer") from exc
        if v < 1:
            raise ConfigError(f"{key} must be positive")
        return v

    sizes = _int_list(raw["sizes"], "sizes")
    if not sizes or any(n < 1 for n in sizes):
        raise ConfigError("sizes must be a non-empty list of positive integers")
    try:
        seed = int(raw.get("seed", "0"))
    except ValueError as exc:
        raise ConfigError("seed must be an integer") from exc
    if not 0 <= seed < 2**64:
        raise ConfigError("seed must be a 64-bit unsigned integer")
    timing = raw.get("record_timing", "false").lower()
    if timing not in ("true", "false", "1", "0", "yes", "no"):
        raise ConfigError("record_timing must be true or false")
    c = None
    if "c" in raw:
        try:
            c = Fraction(raw["c"])
        except ValueError as exc:
            raise ConfigError("c must be a rational") from exc
        if not 0 < c < 1:
            raise ConfigError("c must lie in (0,1)")
    family = [x for x in raw.get("family", "").replace(",", " ").split() if x]
    cfg = ExperimentConfig(
        sizes=sizes,
        samples=pos_int("samples", 1),
        family=family,
        seed=seed,
        max_rejects=pos_int("max_rejects", 10**6),
        tr_limit=pos_int("tr_limit", TR_EXACT_LIMIT),
        output=raw.get("output") or None,
        workers=pos_int("workers", 1),
        record_timing=timing in ("true", "1", "yes"),
        c=c,
        delta=pos_int("delta", None),
        base_dir=base_dir,
    )
    cfg.family_tournaments()
    return cfg


def load_config(path: str | os.PathLike) -> ExperimentConfig:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(text, base_dir=str(p.parent))


def sample_tournament(n: int, rng: np.random.Generator) -> Tournament:
    if n < 1:
        raise ValueError("n must be at least 1")
    return random_tournament(n, rng)


def sample_free(n: int, family: Sequence[PartialDigraph], rng: np.random.Generator,
                max_rejects: int = 10**6) -> tuple[Tournament, int]:
    """Rejection-sample a family-free tournament; returns it with the reject count."""
    for rejects in range(max_rejects + 1):
        t = sample_tournament(n, rng)
        if is_family_free(t, family):
            return t, rejects
    raise RejectBudgetExhausted(f"no family-free tournament on {n} vertices after {max_rejects} rejects")


def estimate_epsilon(records: Iterable) -> float:
    """Smallest ``log tr / log n`` over the records (the largest exponent they all allow)."""
    best = None
    for r in records:
        n, tr = (r["n"], r["tr"]) if isinstance(r, dict) else (r.n, r.tr)
        if n < 2:
            raise ValueError("every record needs n >= 2")
        v = math.log2(tr) / math.log2(n)
        best = v if best is None else min(best, v)
    if best is None:
        raise ValueError("no records")
    return best


def _transitive_lower(t: Tournament) -> list[int]:
    """Ramsey witness greedily extended by any vertex that keeps it transitive."""
    wit = list(ramsey_transitive(t))
    for v in range(t.n):
        if v not in wit and is_transitive_set(t, wit + [v]):
            wit.append(v)
    return transitive_order(t, wit)


def run_sample(args: tuple) -> ExperimentRecord:
    n, idx, seed, family, max_rejects, tr_limit, timing = args
    start = time.perf_counter()
    rng = make_rng(seed, (n, idx))
    try:
        t, rejects = sample_free(n, family, rng, max_rejects)
        free = True
    except RejectBudgetExhausted:
        t, rejects, free = sample_tournament(n, rng), max_rejects + 1, False
    if n <= tr_limit:
        size, wit = tr_exact(t, limit=None)
        exact = True
    else:
        wit = _transitive_lower(t)
        size, exact = len(wit), False
    elapsed = time.perf_counter() - start if timing else None
    return ExperimentRecord(n, idx, free, rejects, size, exact, [int(v) for v in wit], elapsed)


def run_experiment(cfg: ExperimentConfig, out=None) -> dict:
    """Write one JSON record per sample, in (n, sample) order, then a summary line.

    ``out`` defaults to the configured output path (overridden by the
    ``EHTOUR_OUTPUT`` environment variable) or standard output.
    """
    family = cfg.family_tournaments()
    jobs = [(n, i, cfg.seed, family, cfg.max_rejects, cfg.tr_limit, cfg.record_timing)
            for n in cfg.sizes for i in range(cfg.samples)]
    path = os.environ.get(OUTPUT_ENV) or cfg.output
    close = False
    if out is None:
        if path:
            p = Path(path)
            if not p.is_absolute():
                p = Path(cfg.base_dir) / p
            out = open(p, "w")
            close = True
        else:
            out = sys.stdout
    records: list[ExperimentRecord] = []
    try:
        if cfg.workers > 1:
            with ProcessPoolExecutor(cfg.workers) as pool:
                stream = pool.map(run_sample, jobs)
                for rec in stream:
                    out.write(rec.to_json() + "\n")
                    records.append(rec)
        else:
            for job in jobs:
                rec = run_sample(job)
                out.write(rec.to_json() + "\n")
                records.append(rec)
        summary = _summary(cfg, records)
        out.write(json.dumps({"summary": summary}, sort_keys=True) + "\n")
    finally:
        if close:
            out.close()
    return summary


def _summary(cfg: ExperimentConfig, records: list[ExperimentRecord]) -> dict:
    usable = [r for r in records if r.n >= 2]
    free = [r for r in usable if r.is_free]
    rates = {}
    for n in cfg.sizes:
        rs = [r for r in records if r.n == n]
        draws = sum(r.rejects + 1 for r in rs)
        rates[str(n)] = sum(r.rejects for r in rs) / draws if draws else 0.0
    thresholds = {}
    if cfg.c is not None or cfg.delta is not None:
        thresholds = {k: (str(v) if isinstance(v, Fraction) else v)
                      for k, v in epsilon_thresholds(c=cfg.c, delta=cfg.delta).items()}
    return {
        "epsilon_free": estimate_epsilon(free) if free else None,
        "epsilon_all": estimate_epsilon(usable) if usable else None,
        "records": len(records),
        "free_records": sum(r.is_free for r in records),
        "exact_tr": all(r.tr_exact for r in records),
        "reject_rate": rates,
        "thresholds": thresholds,
    }
