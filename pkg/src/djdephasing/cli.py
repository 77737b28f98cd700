"""
Command-line interface and result serialization.

Config files are flat ``key = value`` text; ``#`` starts a comment and list
values are comma-separated::

    sigma = 1,2,3,4,5
    tau_c = 0.1,0.5,1.0,2.0,5.0,10.0
    seed = 42

Recognized keys: sigma (required), tau_c, model, oracle, dt, n_traj,
n_shots, seed, exact.
"""

from __future__ import annotations

import argparse
import math
import re
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import analytic
from .dj_circuit import OracleKind
from .errors import ArgumentError, ConfigParseError, MatchingRangeError, ShapeError
from .experiment import FidelityRecord, Model, SweepConfig, run_sweep
from .noise_models import matched_lambda
from .ou_noise import OUParams, estimate_autocorrelation, generate_ensemble, generate_trajectory

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2

CSV_HEADER = "model,sigma_ou,tau_c,dt,n_traj,n_shots,seed,fidelity_mean,fidelity_se,analytic_mean"

_TRUE = {"true", "yes", "1", "on"}
_FALSE = {"false", "no", "0", "off"}


# -- config ---------------------------------------------------------------------


def _floats(value: str, key: str, line: int) -> tuple[float, ...]:
    items = [v.strip() for v in value.split(",")]
    if value.strip() == "":
        return ()
    try:
        out = tuple(float(v) for v in items)
    except ValueError:
        raise ConfigParseError(f"malformed number in {key}: {value!r}", line) from None
    if not all(math.isfinite(v) for v in out):
        raise ConfigParseError(f"non-finite value in {key}: {value!r}", line)
    return out


def _int(value: str, key: str, line: int) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigParseError(f"malformed integer for {key}: {value!r}", line) from None


def _enum(enum_cls, value: str, key: str, line: int):
    try:
        return enum_cls(value.lower())
    except ValueError:
        allowed = ", ".join(e.value for e in enum_cls)
        raise ConfigParseError(f"{key} must be one of {allowed}; got {value!r}", line) from None


def parse_config(text: str) -> SweepConfig:
    """Parse flat key-value config text into a :class:`SweepConfig`.

    Raises
    ------
    ConfigParseError
        On unknown or repeated keys, malformed values, missing ``sigma``, or
        values that violate the sweep invariants. The message names the line.
    """
    fields: dict = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigParseError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, value = (s.strip() for s in line.split("=", 1))
        if key in lines:
            raise ConfigParseError(f"duplicate key {key!r}", lineno)
        lines[key] = lineno
        if key == "sigma":
            vals = _floats(value, key, lineno)
            if not vals:
                raise ConfigParseError("sigma list is empty", lineno)
            if any(v < 0 for v in vals):
                raise ConfigParseError(f"sigma values must be >= 0, got {value!r}", lineno)
            fields["sigma_values"] = vals
        elif key == "tau_c":
            vals = _floats(value, key, lineno)
            if any(v <= 0 for v in vals):
                raise ConfigParseError(f"tau_c values must be > 0, got {value!r}", lineno)
            fields["tau_c_values"] = vals
        elif key == "dt":
            (dt,) = _floats(value, key, lineno) or (float("nan"),)
            if not dt > 0:
                raise ConfigParseError(f"dt must be a positive number, got {value!r}", lineno)
            fields["dt"] = dt
        elif key in ("n_traj", "n_shots"):
            n = _int(value, key, lineno)
            if n < 1:
                raise ConfigParseError(f"{key} must be >= 1, got {n}", lineno)
            fields[key] = n
        elif key == "seed":
            seed = _int(value, key, lineno)
            if not 0 <= seed < 2**64:
                raise ConfigParseError(f"seed must be a 64-bit unsigned integer, got {seed}", lineno)
            fields["master_seed"] = seed
        elif key == "model":
            fields["model"] = _enum(Model, value, key, lineno)
        elif key == "oracle":
            fields["oracle"] = _enum(OracleKind, value, key, lineno)
        elif key == "exact":
            v = value.lower()
            if v not in _TRUE | _FALSE:
                raise ConfigParseError(f"exact must be true or false, got {value!r}", lineno)
            fields["exact_mode"] = v in _TRUE
        else:
            raise ConfigParseError(f"unknown key {key!r}", lineno)

    if "sigma_values" not in fields:
        raise ConfigParseError("sigma list required")
    model = fields.get("model", Model.BOTH)
    if model is not Model.MARKOVIAN and fields.get("tau_c_values", (1.0,)) == ():
        raise ConfigParseError("tau_c list required for OU sweeps", lines.get("tau_c"))
    try:
        return SweepConfig(**fields)
    except ArgumentError as exc:
        raise ConfigParseError(str(exc)) from None


def format_config(config: SweepConfig) -> str:
    """Config text that :func:`parse_config` maps back to ``config``."""
    join = lambda vals: ",".join(repr(v) for v in vals)
    return "\n".join(
        [
            f"sigma = {join(config.sigma_values)}",
            f"tau_c = {join(config.tau_c_values)}",
            f"model = {config.model.value}",
            f"oracle = {config.oracle.value}",
            f"dt = {config.dt!r}",
            f"n_traj = {config.n_traj}",
            f"n_shots = {config.n_shots}",
            f"seed = {config.master_seed}",
            f"exact = {'true' if config.exact_mode else 'false'}",
        ]
    ) + "\n"


# -- outputs ----------------------------------------------------------------------


def _real(x: float) -> str:
    return f"{x:.6f}"


def emit_csv(records: Sequence[FidelityRecord]) -> str:
    if not records:
        raise ArgumentError("no records to emit")
    rows = [CSV_HEADER]
    for r in records:
        rows.append(
            ",".join(
                [
                    r.model.value,
                    _real(r.sigma_ou),
                    "" if r.tau_c is None else _real(r.tau_c),
                    _real(r.dt),
                    str(r.n_traj),
                    str(r.n_shots),
                    str(r.seed),
                    _real(r.fidelity_mean),
                    _real(r.fidelity_se),
                    _real(r.analytic_mean),
                ]
            )
        )
    return "\n".join(rows) + "\n"


@dataclass(frozen=True)
class PlotSeries:
    label: str
    x_values: tuple[float, ...]
    y_values: tuple[float, ...]
    y_err: tuple[float, ...]

    def __post_init__(self):
        if not len(self.x_values) == len(self.y_values) == len(self.y_err):
            raise ShapeError(f"series {self.label!r} has mismatched lengths")
        if any(b <= a for a, b in zip(self.x_values, self.x_values[1:])):
            raise ShapeError(f"series {self.label!r} x values are not strictly increasing")


def _ou_grid(records: Sequence[FidelityRecord]):
    ou = {}
    for r in records:
        if r.model is Model.OU:
            key = (r.sigma_ou, r.tau_c)
            if key in ou:
                raise ShapeError(f"duplicate OU record at sigma={r.sigma_ou}, tau_c={r.tau_c}")
            ou[key] = r
    sigmas = sorted({s for s, _ in ou})
    taus = sorted({t for _, t in ou})
    missing = [(s, t) for s in sigmas for t in taus if (s, t) not in ou]
    if missing:
        raise ShapeError(f"OU records do not cover a rectangular grid; missing {missing[:3]}")
    return ou, sigmas, taus


def emit_plot_series(records: Sequence[FidelityRecord], mode: str) -> list[PlotSeries]:
    """Plot-ready series.

    ``vs_tau_c``: for each sigma, the OU curve over tau_c followed by a flat
    Markovian reference at the same x values. ``vs_sigma``: the OU curve at
    the smallest tau_c and the Markovian curve, both over sigma.
    """
    if mode not in ("vs_tau_c", "vs_sigma"):
        raise ArgumentError(f"mode must be vs_tau_c or vs_sigma, got {mode!r}")
    ou, sigmas, taus = _ou_grid(records)
    markov = {r.sigma_ou: r for r in records if r.model is Model.MARKOVIAN}
    out: list[PlotSeries] = []
    if mode == "vs_tau_c":
        if not ou:
            raise ShapeError("vs_tau_c needs OU records")
        for s in sigmas:
            pts = [ou[s, t] for t in taus]
            out.append(
                PlotSeries(
                    f"OU sigma={s}",
                    tuple(taus),
                    tuple(r.fidelity_mean for r in pts),
                    tuple(r.fidelity_se for r in pts),
                )
            )
            if s in markov:
                m = markov[s]
                n = len(taus)
                out.append(
                    PlotSeries(f"Markovian sigma={s}", tuple(taus), (m.fidelity_mean,) * n, (m.fidelity_se,) * n)
                )
        return out

    if ou:
        t0 = taus[0]
        pts = [ou[s, t0] for s in sigmas]
        out.append(
            PlotSeries(
                f"OU tau_c={t0}",
                tuple(sigmas),
                tuple(r.fidelity_mean for r in pts),
                tuple(r.fidelity_se for r in pts),
            )
        )
    if markov:
        ms = sorted(markov)
        if ou and ms != sigmas:
            raise ShapeError("Markovian sigma values differ from the OU grid")
        out.append(
            PlotSeries(
                "Markovian",
                tuple(ms),
                tuple(markov[s].fidelity_mean for s in ms),
                tuple(markov[s].fidelity_se for s in ms),
            )
        )
    if not out:
        raise ShapeError("no records to plot")
    return out


def format_plot_series(series: PlotSeries) -> str:
    rows = [f"# {series.label}"]
    rows += [f"{_real(x)} {_real(y)} {_real(e)}" for x, y, e in zip(series.x_values, series.y_values, series.y_err)]
    return "\n".join(rows) + "\n"


def _slug(label: str) -> str:
    return re.sub(r"[^A-Za-z0-9.]+", "_", label).strip("_")


def write_plot_files(records: Sequence[FidelityRecord], directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for mode in ("vs_tau_c", "vs_sigma"):
        try:
            series = emit_plot_series(records, mode)
        except ShapeError:
            if mode == "vs_tau_c" and not any(r.model is Model.OU for r in records):
                continue
            raise
        for k, s in enumerate(series):
            path = directory / f"{mode}_{k:02d}_{_slug(s.label)}.txt"
            path.write_text(format_plot_series(s))
            written.append(path)
    return written


# -- subcommands ------------------------------------------------------------------


def _load_config(path: str) -> SweepConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigParseError(f"cannot read config {path}: {exc.strerror}") from None
    return parse_config(text)


def cmd_sweep(args) -> int:
    config = _load_config(args.config)
    if args.exact:
        config = replace(config, exact_mode=True)
    records = run_sweep(config, workers=args.workers)
    Path(args.out).write_text(emit_csv(records))
    if args.plot_out:
        write_plot_files(records, Path(args.plot_out))
    return EXIT_OK


def validate_ou(params: OUParams, n_samples: int, seed: int, max_lag: int = 5) -> list[tuple[str, float, float, float, bool]]:
    """Generator checks as ``(name, estimate, theory, tolerance, ok)`` rows.

    Mean and variance come from ``n_samples`` independent trajectories of
    ``max_lag + 1`` steps, reading the last value; this tests that the
    stationary law survives the transition. Autocorrelations come from a
    single ``n_samples``-long trajectory.
    """
    if n_samples < 2 * (max_lag + 2):
        raise ArgumentError(f"need at least {2 * (max_lag + 2)} samples")
    rng = np.random.Generator(np.random.PCG64(seed))
    ensemble = generate_ensemble(params, max_lag + 1, n_samples, rng)[:, -1]
    series = generate_trajectory(params, n_samples, rng).values
    sigma2 = params.sigma_ou**2
    rows = []
    mean_tol = 5.0 * params.sigma_ou / math.sqrt(n_samples)
    mean = float(ensemble.mean())
    rows.append(("mean", mean, 0.0, mean_tol, abs(mean) <= mean_tol))
    var = float(ensemble.var(ddof=1))
    rows.append(("variance", var, sigma2, 0.05 * sigma2, abs(var - sigma2) <= 0.05 * sigma2))
    if params.sigma_ou > 0:
        for m in range(1, max_lag + 1):
            est = estimate_autocorrelation(series, m)
            theory = math.exp(-m * params.dt / params.tau_c)
            rows.append((f"acf lag {m}", est, theory, 0.02, abs(est - theory) <= 0.02))
    return rows


def cmd_validate_ou(args) -> int:
    params = OUParams(args.sigma, args.tau_c, args.dt)
    rows = validate_ou(params, args.samples, args.seed)
    print(f"{'check':<12}{'estimate':>12}{'theory':>12}{'tol':>10}  status")
    for name, est, theory, tol, ok in rows:
        print(f"{name:<12}{est:>12.6f}{theory:>12.6f}{tol:>10.4f}  {'ok' if ok else 'FAIL'}")
    return EXIT_OK if all(r[-1] for r in rows) else EXIT_VALIDATION


def cmd_analytic(args) -> int:
    params = OUParams(args.sigma, args.tau_c, args.dt)
    pred = analytic.ou_fidelity(params)
    print(f"ou_fidelity          {pred.mean_fidelity:.6f}")
    print(f"per_trajectory_std   {pred.per_trajectory_std:.6f}")
    try:
        lam = matched_lambda(params)
    except MatchingRangeError as exc:
        print(f"matched_lambda       n/a ({exc})")
        return EXIT_OK
    print(f"matched_lambda       {lam:.6f}")
    print(f"markovian_fidelity   {analytic.markovian_fidelity(lam):.6f}")
    return EXIT_OK


def z_score(record: FidelityRecord) -> float:
    diff = record.fidelity_mean - record.analytic_mean
    if record.fidelity_se > 0:
        return diff / record.fidelity_se
    return 0.0 if abs(diff) < 1e-12 else math.copysign(math.inf, diff)


def cmd_compare(args) -> int:
    config = replace(_load_config(args.config), exact_mode=True)
    records = run_sweep(config, workers=args.workers)
    worst = 0.0
    print(f"{'model':<10}{'sigma':>8}{'tau_c':>8}{'mc_mean':>11}{'se':>10}{'analytic':>11}{'z':>8}")
    for r in records:
        z = z_score(r)
        worst = max(worst, abs(z))
        tau = "" if r.tau_c is None else f"{r.tau_c:g}"
        print(
            f"{r.model.value:<10}{r.sigma_ou:>8g}{tau:>8}{r.fidelity_mean:>11.6f}"
            f"{r.fidelity_se:>10.6f}{r.analytic_mean:>11.6f}{z:>8.2f}"
        )
    print(f"max |z| = {worst:.2f}")
    return EXIT_OK if worst <= 5.0 else EXIT_VALIDATION


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="djdephasing", description="Deutsch-Jozsa fidelity under OU and Markovian dephasing")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sweep", help="run a parameter sweep and write CSV")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--plot-out")
    p.add_argument("--exact", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate-ou", help="check OU generator statistics")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--tau-c", type=float, required=True)
    p.add_argument("--dt", type=float, default=0.1)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_validate_ou)

    p = sub.add_parser("analytic", help="closed-form fidelities")
    p.add_argument("--sigma", type=float, required=True)
    p.add_argument("--tau-c", type=float, required=True)
    p.add_argument("--dt", type=float, default=0.1)
    p.set_defaults(func=cmd_analytic)

    p = sub.add_parser("compare", help="exact-mode Monte Carlo vs closed form")
    p.add_argument("--config", required=True)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigParseError, ArgumentError, MatchingRangeError, ShapeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
