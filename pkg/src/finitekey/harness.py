"""
Parameter sweeps comparing Eve's worst-case ambiguity across estimation
methods, with plain-text configs and CSV/JSON output.

Conventional methods are evaluated at the theoretical phase error of the
channel using ``floor(m * conventional_fraction)`` samples: only the
matched x-basis rounds (a quarter of all rounds) feed the conventional
estimate. The accurate method samples a 16-outcome type of size ``m`` per
trial from a seed derived from ``(seed, point index, trial index)``, so
serial and parallel runs give identical rows.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .estimation import Construction, ambiguity_from_phase_error, worst_case_phase_error, xi_relative
from .infomeasures import EmpiricalDistribution
from .optimizer import min_ambiguity_accurate
from .quantum import (AmplitudeDamping, ChannelSpec, ChoiMatrix, Depolarizing, Explicit,
                      choi_of, sample_statistics, stats_accurate, stats_conventional)

ACCURATE = "accurate"
METHOD_ORDER = ("variational", "relative", "chernoff", "moment", "klar", ACCURATE)
CSV_FIELDS = ("method", "m", "ambiguity", "phase_error_estimate", "status", "trial")
DEFAULT_CONVENTIONAL_FRACTION = 0.25


class ConfigError(ValueError):
    """Malformed or inconsistent sweep configuration."""


def normalize_method(name: str) -> str:
    key = name.strip().lower()
    if key == ACCURATE:
        return ACCURATE
    try:
        return Construction.parse(key).value
    except ValueError:
        raise ConfigError(f"unknown method {name!r}; choose from {', '.join(METHOD_ORDER)}") from None


def parse_channel(text: str) -> ChannelSpec:
    """``depolarizing:Q``, ``amplitude_damping:Q`` or ``explicit:PATH``."""
    kind, sep, arg = text.strip().partition(":")
    kind = kind.strip().lower().replace("-", "_")
    if not sep:
        raise ConfigError(f"channel must look like 'depolarizing:0.1', got {text!r}")
    try:
        if kind in ("depolarizing", "dep"):
            return Depolarizing(float(arg))
        if kind in ("amplitude_damping", "amplitude", "ad"):
            return AmplitudeDamping(float(arg))
        if kind == "explicit":
            with open(arg.strip(), encoding="utf-8") as fh:
                return Explicit(ChoiMatrix.from_text(fh.read()))
    except OSError as exc:
        raise ConfigError(f"cannot read Choi matrix file {arg.strip()!r}: {exc.strerror}") from None
    except ValueError as exc:
        raise ConfigError(f"bad channel {text!r}: {exc}") from None
    raise ConfigError(f"unknown channel kind {kind!r}")


def format_channel(spec: ChannelSpec) -> str:
    if isinstance(spec, Depolarizing):
        return f"depolarizing:{spec.q!r}"
    if isinstance(spec, AmplitudeDamping):
        return f"amplitude_damping:{spec.q!r}"
    return "explicit"


@dataclass(frozen=True)
class SweepConfig:
    channel: ChannelSpec
    sample_sizes: tuple[int, ...]
    eps_pe: float = 1e-5
    methods: tuple[str, ...] = METHOD_ORDER
    seed: int = 0
    trials_per_point: int = 3
    conventional_fraction: float = DEFAULT_CONVENTIONAL_FRACTION

    def __post_init__(self) -> None:
        sizes = tuple(int(m) for m in self.sample_sizes)
        if not sizes:
            raise ConfigError("sample_sizes must not be empty")
        if any(m < 1 for m in sizes):
            raise ConfigError("sample sizes must be positive")
        if any(b <= a for a, b in zip(sizes, sizes[1:])):
            raise ConfigError("sample_sizes must be strictly increasing")
        methods = tuple(normalize_method(m) for m in self.methods)
        if not methods:
            raise ConfigError("at least one method is required")
        # canonical order keeps the output independent of how methods were listed
        methods = tuple(m for m in METHOD_ORDER if m in methods)
        if not 0.0 < self.eps_pe < 1.0:
            raise ConfigError(f"eps_pe must lie in (0, 1), got {self.eps_pe}")
        if self.trials_per_point < 1:
            raise ConfigError("trials_per_point must be >= 1")
        if not 0.0 < self.conventional_fraction <= 1.0:
            raise ConfigError("conventional_fraction must lie in (0, 1]")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        object.__setattr__(self, "sample_sizes", sizes)
        object.__setattr__(self, "methods", methods)
        object.__setattr__(self, "seed", int(self.seed))

    def conventional_m(self, m: int) -> int:
        return max(1, math.floor(m * self.conventional_fraction))


@dataclass(frozen=True)
class ResultRow:
    method: str
    m: int
    ambiguity: float
    phase_error_estimate: float | None = None
    status: str = "ok"
    trial: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.ambiguity <= 1.0:
            raise ValueError(f"ambiguity must lie in [0, 1], got {self.ambiguity}")

    def sort_key(self) -> tuple:
        return (self.m, METHOD_ORDER.index(self.method), -1 if self.trial is None else self.trial)


def _parse_int(text: str) -> int:
    # accepts 1e7 style as long as it is integral
    value = float(text)
    if not value.is_integer():
        raise ValueError(f"{text!r} is not an integer")
    return int(value)


def parse_config(text: str) -> dict:
    """Parse ``key = value`` lines (``#`` starts a comment) into SweepConfig kwargs."""
    kwargs: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw.strip()!r}")
        key = key.strip().lower().replace("-", "_")
        value = value.strip()
        try:
            if key == "channel":
                kwargs["channel"] = parse_channel(value)
            elif key in ("sample_sizes", "m"):
                kwargs["sample_sizes"] = tuple(_parse_int(v) for v in value.replace(",", " ").split())
            elif key in ("eps_pe", "eps"):
                kwargs["eps_pe"] = float(value)
            elif key == "methods":
                kwargs["methods"] = tuple(v for v in value.replace(",", " ").split())
            elif key == "seed":
                kwargs["seed"] = _parse_int(value)
            elif key in ("trials_per_point", "trials"):
                kwargs["trials_per_point"] = _parse_int(value)
            elif key == "conventional_fraction":
                kwargs["conventional_fraction"] = float(value)
            else:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    return kwargs


def load_config(path: str | os.PathLike, **overrides) -> SweepConfig:
    """Read a config file; keyword overrides that are not None win."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except FileNotFoundError:
        raise ConfigError(f"config not found: {path}") from None
    kwargs = parse_config(text)
    kwargs.update({k: v for k, v in overrides.items() if v is not None})
    missing = {"channel", "sample_sizes"} - kwargs.keys()
    if missing:
        raise ConfigError(f"config is missing {', '.join(sorted(missing))}")
    return SweepConfig(**kwargs)


def trial_seed(seed: int, point: int, trial: int) -> np.random.SeedSequence:
    return np.random.SeedSequence(seed, spawn_key=(point, trial))


def _conventional_rows(config: SweepConfig, m: int, observed: float) -> list[ResultRow]:
    rows = []
    m_conv = config.conventional_m(m)
    for method in config.methods:
        if method == ACCURATE:
            continue
        p_tilde = worst_case_phase_error(Construction(method), m_conv, observed, config.eps_pe)
        rows.append(ResultRow(method, m, ambiguity_from_phase_error(p_tilde), p_tilde, "ok", None))
    return rows


def _accurate_row(args: tuple) -> ResultRow:
    probs, m, eps_pe, seed, point, trial = args
    lam = sample_statistics(EmpiricalDistribution(probs, 0), m, trial_seed(seed, point, trial))
    result = min_ambiguity_accurate(lam, xi_relative(m, 16, eps_pe))
    if math.isnan(result.value):
        # empty region (or phase I out of budget): the estimate is rejected, no key
        return ResultRow(ACCURATE, m, 0.0, None, result.status.value, trial)
    value = min(max(result.value, 0.0), 1.0)
    return ResultRow(ACCURATE, m, value, None, result.status.value, trial)


def run_sweep(config: SweepConfig, workers: int = 1) -> list[ResultRow]:
    """Evaluate every method at every sample size; rows come back sorted."""
    rho = choi_of(config.channel)
    observed = float(stats_conventional(rho).probs[0])
    rows: list[ResultRow] = []
    jobs = []
    accurate_probs = stats_accurate(rho).probs
    for point, m in enumerate(config.sample_sizes):
        rows.extend(_conventional_rows(config, m, observed))
        if ACCURATE in config.methods:
            jobs.extend((accurate_probs, m, config.eps_pe, config.seed, point, trial)
                        for trial in range(config.trials_per_point))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows.extend(pool.map(_accurate_row, jobs))
    else:
        rows.extend(map(_accurate_row, jobs))
    rows.sort(key=ResultRow.sort_key)
    return rows


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return f"{value:.10g}"
    return str(value)


def rows_to_csv(rows: Iterable[ResultRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, f)) for f in CSV_FIELDS])
    return buf.getvalue()


def rows_to_json(rows: Iterable[ResultRow]) -> str:
    out = []
    for row in rows:
        rec = asdict(row)
        for key in ("ambiguity", "phase_error_estimate"):
            if rec[key] is not None:
                rec[key] = float(f"{rec[key]:.10g}")
        out.append(rec)
    return json.dumps(out, indent=1) + "\n"


def ambiguity_table(rows: Sequence[ResultRow]) -> dict[str, dict[int, float]]:
    """``{method: {m: ambiguity}}`` with accurate trials averaged."""
    acc: dict[str, dict[int, list[float]]] = {}
    for row in rows:
        acc.setdefault(row.method, {}).setdefault(row.m, []).append(row.ambiguity)
    return {meth: {m: float(np.mean(v)) for m, v in per.items()} for meth, per in acc.items()}


def with_overrides(config: SweepConfig, **overrides) -> SweepConfig:
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})
