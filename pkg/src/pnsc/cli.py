"""Command-line front end.

One subcommand per study: density / CDF / tail evaluation (pdf, cdf, tail),
direct stable or mixture sampling (sample), Poisson-field synthesis
(simulate), the cross-module check suite (validate), and receiver studies
(lrt, gsnr, capacity).  Every run is deterministic given its config and
seed.

Configuration comes from an optional JSON file (--config) holding the same
keys as the command's flags plus a mandatory schema_version; flags override
file values, unknown keys are rejected.  CSV output uses a fixed header per
command and 12 significant digits.

Exit codes: 0 success, 2 configuration error, 3 numerical non-convergence,
4 I/O error, 5 validation failure (the report is still written).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import stable
from .controls import (
    ConfigError,
    DomainError,
    FormatError,
    NonConvergenceError,
    ValidationFailure,
)
from .mixtures import (
    BandwidthLaw,
    PnscMixture,
    gsnr_surface,
    mixture_cdf,
    mixture_from_scale,
    mixture_pdf,
    mixture_tail,
    mixture_weights,
)
from .receiver import LrtSpec, Regime, biso_capacity, lrt, lrt_curve, lrt_summary, write_lrt_csv
from .simulator import (
    ChannelSpec,
    FadingSpec,
    FieldConfig,
    IntensityModel,
    estimate_tail_index,
    expected_count,
    get_kernel,
    map_intensity,
    synthesize,
    write_csv,
    write_iq,
)
from .stable import Param, PdfMethod, StableParams
from .validation import ValidateSettings, render_report, run_suite

__all__ = ["main"]

SCHEMA_VERSION = 1
EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4
EXIT_VALIDATION = 5

_GSNR_ALPHAS = sorted({round(0.1 * k, 10) for k in range(1, 20)} | {2.0 / 3.0})
_GSNR_GAMMAS = [1e-6, 1e-4, 2.5e-3, 5e-3, 7.5e-3, 1e-2]


# ------------------------------------------------------------- key table

def _as_float(v) -> float:
    try:
        out = float(v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"expected a number, got {v!r}") from exc
    if not math.isfinite(out):
        raise ConfigError(f"expected a finite number, got {v!r}")
    return out


def _as_int(v) -> int:
    if isinstance(v, bool):
        raise ConfigError(f"expected an integer, got {v!r}")
    try:
        if isinstance(v, str):
            return int(v, 10)
        if isinstance(v, float):
            if v != int(v):
                raise ValueError
            return int(v)
        return int(v)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"expected an integer, got {v!r}") from exc


def _as_bool(v) -> bool:
    if isinstance(v, bool):
        return v
    if isinstance(v, str) and v.lower() in ("true", "false"):
        return v.lower() == "true"
    raise ConfigError(f"expected true/false, got {v!r}")


def _as_str(v) -> str:
    if not isinstance(v, str):
        raise ConfigError(f"expected a string, got {v!r}")
    return v


def _as_floats(v) -> list[float]:
    if isinstance(v, str):
        parts = [p for p in v.split(",") if p.strip()]
        return [_as_float(p) for p in parts]
    if isinstance(v, (list, tuple)):
        return [_as_float(x) for x in v]
    raise ConfigError(f"expected a comma list of numbers, got {v!r}")


def _as_linspace(v) -> list[float]:
    vals = _as_floats(v)
    if len(vals) != 3 or vals[2] != int(vals[2]) or int(vals[2]) < 1:
        raise ConfigError("linspace needs lo,hi,count with integer count >= 1")
    return [float(x) for x in np.linspace(vals[0], vals[1], int(vals[2]))]


@dataclass(frozen=True)
class Key:
    name: str
    cast: Callable
    default: object = None
    required: bool = False
    help: str = ""


_MODEL_KEYS = [
    Key("alpha", _as_float, required=True, help="stable tail index in (0, 2]"),
    Key("beta", _as_float, 0.0, help="skewness (single law only)"),
    Key("gamma", _as_float, 1.0, help="scale (per-carrier base scale for mixtures)"),
    Key("delta", _as_float, 0.0, help="location (single law only)"),
    Key("mixture", _as_bool, False, help="evaluate the bandwidth mixture instead of one law"),
    Key("bandwidth", _as_str, "poisson", help="mixture bandwidth law: poisson | poisson-gamma"),
    Key("lambda_k", _as_float, help="Poisson bandwidth mean"),
    Key("k_max", _as_int, help="bandwidth truncation K_max"),
    Key("shape_a", _as_float, help="Poisson-Gamma shape"),
    Key("rate_b", _as_float, help="Poisson-Gamma rate"),
    Key("grid", _as_floats, help="comma list of evaluation points"),
    Key("linspace", _as_linspace, help="lo,hi,count evaluation grid"),
    Key("out", _as_str, help="CSV output path (stdout when omitted)"),
]

_LRT_SPEC_KEYS = [
    Key("alpha", _as_float, required=True),
    Key("gamma_tilde", _as_float, 1.0, help="per-carrier stable scale"),
    Key("regime", _as_str, help="cauchy | holtsmark | whittaker | general-series | gaussian | monte-carlo (inferred from alpha when omitted)"),
    Key("x_h0", _as_float, 1.0),
    Key("x_h1", _as_float, -1.0),
]

_COMMAND_KEYS: dict[str, list[Key]] = {
    "pdf": _MODEL_KEYS + [
        Key("method", _as_str, "auto", help="auto | closed-form | series | cf-inversion"),
    ],
    "cdf": list(_MODEL_KEYS),
    "tail": list(_MODEL_KEYS),
    "sample": [k for k in _MODEL_KEYS if k.name not in ("grid", "linspace")] + [
        Key("n", _as_int, required=True, help="number of draws"),
        Key("seed", _as_int, 0),
        Key("summary", _as_str, help="summary JSON path"),
    ],
    "simulate": [
        Key("lam", _as_float, required=True, help="spatial intensity"),
        Key("r_t", _as_float, required=True, help="field truncation radius"),
        Key("sigma", _as_float, required=True, help="path-loss exponent > 2"),
        Key("replicates", _as_int, required=True),
        Key("seed", _as_int, 0),
        Key("intensity", _as_str, "homogeneous", help="homogeneous | time-profile | spatial-power-law | sector"),
        Key("times", _as_floats, help="time-profile knots"),
        Key("rates", _as_floats, help="time-profile rates"),
        Key("lambda0", _as_float, help="power-law radial intensity level"),
        Key("beta_s", _as_float, help="power-law radial exponent"),
        Key("phi", _as_float, help="sector angle in (0, 2 pi]"),
        Key("fading", _as_str, "constant", help="constant | rayleigh"),
        Key("fading_value", _as_float, 1.0),
        Key("channel", _as_str, "rademacher", help="rademacher | gaussian | constant"),
        Key("channel_value", _as_float, 1.0),
        Key("bandwidth", _as_str, "poisson"),
        Key("lambda_k", _as_float),
        Key("k_max", _as_int),
        Key("shape_a", _as_float),
        Key("rate_b", _as_float),
        Key("kernel", _as_str, help="pure | compiled (best available when omitted)"),
        Key("threads", _as_int, help="worker threads (default: PNSC_THREADS or 1)"),
        Key("out", _as_str, help="binary IQ batch output path"),
        Key("csv", _as_str, help="CSV output path"),
        Key("summary", _as_str, help="summary JSON path (stdout when omitted)"),
    ],
    "validate": [
        Key("seed", _as_int, 0),
        Key("cf_replicates", _as_int, 100_000),
        Key("cf_mean_count", _as_float, 1000.0),
        Key("ks_replicates", _as_int, 5000),
        Key("ks_mean_count", _as_float, 10_000.0),
        Key("map_replicates", _as_int, 50_000),
        Key("corrupt_gamma", _as_float, 1.0, help="multiply the analytic CF scale (sensitivity hook)"),
        Key("kernel", _as_str),
        Key("threads", _as_int),
        Key("out", _as_str, help="JSON report path"),
    ],
    "lrt": _LRT_SPEC_KEYS + [
        Key("r", _as_float, help="single observation (prints Lambda)"),
        Key("grid", _as_floats),
        Key("linspace", _as_linspace),
        Key("out", _as_str, help="curve CSV path (stdout when omitted)"),
        Key("summary", _as_str, help="curve summary JSON path"),
    ],
    "gsnr": [
        Key("alphas", _as_floats, _GSNR_ALPHAS),
        Key("gammas", _as_floats, _GSNR_GAMMAS),
        Key("amplitude", _as_float, 1.0),
        Key("lambda_k", _as_float, 10.0),
        Key("k_max", _as_int, 64),
        Key("bandwidth", _as_str, "poisson"),
        Key("shape_a", _as_float),
        Key("rate_b", _as_float),
        Key("out", _as_str),
    ],
    "capacity": _LRT_SPEC_KEYS + [
        Key("n_mc", _as_int, 100_000),
        Key("seed", _as_int, 0),
        Key("out", _as_str, help="JSON output path (stdout when omitted)"),
    ],
}


# --------------------------------------------------------- config merging

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pnsc",
        description="Poisson-field stable interference models: evaluation, simulation, detection.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command, keys in _COMMAND_KEYS.items():
        p = sub.add_parser(command)
        p.add_argument("--config", help="JSON config file (flags override it)")
        for key in keys:
            flag = "--" + key.name.replace("_", "-")
            if key.cast is _as_bool:
                p.add_argument(flag, dest=key.name, action="store_const", const="true")
            else:
                p.add_argument(flag, dest=key.name, help=key.help or None)
    return parser


def _load_file(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a JSON object")
    version = raw.pop("schema_version", None)
    if version != SCHEMA_VERSION:
        raise ConfigError(
            f"config file must declare schema_version = {SCHEMA_VERSION}, got {version!r}"
        )
    return raw


def _merge_config(args: argparse.Namespace) -> dict:
    keys = _COMMAND_KEYS[args.command]
    allowed = {k.name for k in keys}
    file_values = _load_file(args.config) if args.config else {}
    unknown = sorted(set(file_values) - allowed)
    if unknown:
        raise ConfigError(
            f"unknown config key(s) for {args.command}: {', '.join(unknown)}"
        )
    cfg: dict = {"command": args.command}
    for key in keys:
        flag_value = getattr(args, key.name)
        if flag_value is not None:
            cfg[key.name] = key.cast(flag_value)
        elif key.name in file_values:
            cfg[key.name] = key.cast(file_values[key.name])
        elif key.required:
            raise ConfigError(f"missing required key '{key.name}' for {args.command}")
        else:
            cfg[key.name] = key.default
    return cfg


# --------------------------------------------------------------- helpers

def _emit_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _emit_json(path: str | None, payload: dict) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    _emit_text(path, text)


def _eval_grid(cfg: dict) -> list[float]:
    grid = cfg.get("grid")
    lin = cfg.get("linspace")
    if (grid is None) == (lin is None):
        raise ConfigError("provide exactly one of grid / linspace")
    return grid if grid is not None else lin


def _bandwidth_law(cfg: dict) -> BandwidthLaw:
    kind = cfg["bandwidth"]
    if cfg["k_max"] is None:
        raise ConfigError("bandwidth law needs k_max")
    if kind == "poisson":
        if cfg["lambda_k"] is None:
            raise ConfigError("poisson bandwidth needs lambda_k")
        return BandwidthLaw.poisson(cfg["lambda_k"], cfg["k_max"])
    if kind == "poisson-gamma":
        if cfg["shape_a"] is None or cfg["rate_b"] is None:
            raise ConfigError("poisson-gamma bandwidth needs shape_a and rate_b")
        return BandwidthLaw.poisson_gamma(cfg["shape_a"], cfg["rate_b"], cfg["k_max"])
    raise ConfigError(f"unknown bandwidth law {kind!r}")


def _model_of(cfg: dict) -> StableParams | PnscMixture:
    if cfg["mixture"]:
        if cfg["beta"] != 0.0 or cfg["delta"] != 0.0:
            raise ConfigError("mixtures are symmetric and centered; beta/delta must be 0")
        return mixture_from_scale(cfg["alpha"], cfg["gamma"], _bandwidth_law(cfg))
    return StableParams(cfg["alpha"], cfg["beta"], cfg["gamma"], cfg["delta"], Param.S0)


_PDF_METHODS = {
    "auto": PdfMethod.AUTO,
    "closed-form": PdfMethod.CLOSED_FORM,
    "series": PdfMethod.SERIES_ZOLOTAREV,
    "cf-inversion": PdfMethod.CF_INVERSION,
}

_CLOSED_FORM_ALPHAS = (2.0, 1.0, 1.5, 2.0 / 3.0)


def _resolve_pdf_method(p: StableParams, requested: str) -> PdfMethod:
    try:
        method = _PDF_METHODS[requested]
    except KeyError:
        raise ConfigError(f"unknown pdf method {requested!r}") from None
    if method is not PdfMethod.AUTO:
        return method
    # resolve so the CSV method column names the route actually taken
    if p.beta == 0.0 and any(p.alpha == a for a in _CLOSED_FORM_ALPHAS):
        return PdfMethod.CLOSED_FORM
    return PdfMethod.CF_INVERSION


def _write_value_rows(path: str | None, rows: list[tuple[float, float, str, bool]]) -> None:
    lines = ["x,value,method,converged"]
    for x, value, method, ok in rows:
        lines.append(f"{x:.12g},{value:.12g},{method},{'true' if ok else 'false'}")
    _emit_text(path, "\n".join(lines) + "\n")


def _point_rows(
    cfg: dict, evaluate: Callable[[float], float], label: str
) -> tuple[list[tuple[float, float, str, bool]], bool]:
    rows = []
    all_ok = True
    for x in _eval_grid(cfg):
        try:
            rows.append((x, evaluate(x), label, True))
        except NonConvergenceError:
            rows.append((x, math.nan, label, False))
            all_ok = False
    return rows, all_ok


# ------------------------------------------------------------- commands

def _cmd_pdf(cfg: dict) -> int:
    model = _model_of(cfg)
    if isinstance(model, PnscMixture):
        label = "mixture"
        evaluate = lambda x: mixture_pdf(model, x)  # noqa: E731
    else:
        method = _resolve_pdf_method(model, cfg["method"])
        label = method.value
        evaluate = lambda x: stable.pdf(model, x, method=method)  # noqa: E731
    rows, ok = _point_rows(cfg, evaluate, label)
    _write_value_rows(cfg["out"], rows)
    return EXIT_OK if ok else EXIT_NUMERIC


def _cmd_cdf(cfg: dict) -> int:
    model = _model_of(cfg)
    if isinstance(model, PnscMixture):
        label = "mixture"
        evaluate = lambda x: mixture_cdf(model, x)  # noqa: E731
    else:
        label = "quadrature"
        evaluate = lambda x: stable.cdf(model, x)  # noqa: E731
    rows, ok = _point_rows(cfg, evaluate, label)
    _write_value_rows(cfg["out"], rows)
    return EXIT_OK if ok else EXIT_NUMERIC


def _cmd_tail(cfg: dict) -> int:
    model = _model_of(cfg)
    if isinstance(model, PnscMixture):
        label = "mixture-asymptote"
        evaluate = lambda y: mixture_tail(model, y)[0]  # noqa: E731
    else:
        if model.delta != 0.0:
            raise ConfigError("tail asymptote assumes a centered law (delta = 0)")
        label = "asymptote"
        evaluate = lambda y: stable.tail_survival_asymptotic(model, y)  # noqa: E731
    rows, ok = _point_rows(cfg, evaluate, label)
    _write_value_rows(cfg["out"], rows)
    return EXIT_OK if ok else EXIT_NUMERIC


def _cmd_sample(cfg: dict) -> int:
    n, seed = cfg["n"], cfg["seed"]
    if n < 1:
        raise ConfigError("n must be >= 1")
    model = _model_of(cfg)
    if isinstance(model, PnscMixture):
        weights, _ = mixture_weights(_bandwidth_law(cfg))
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, 1))))
        k = rng.choice(np.arange(1, weights.size + 1), size=n, p=weights)
        z = stable.sample(StableParams(cfg["alpha"], 0.0, 1.0, 0.0, Param.S0), (seed, 0), n)
        values = cfg["gamma"] * k ** (1.0 / cfg["alpha"]) * z
    else:
        values = stable.sample(model, (seed, 0), n)
    lines = ["sample"] + [f"{v:.12g}" for v in values]
    _emit_text(cfg["out"], "\n".join(lines) + "\n")
    if cfg["summary"] is not None:
        _emit_json(
            cfg["summary"],
            {
                "schema_version": SCHEMA_VERSION,
                "command": "sample",
                "n": n,
                "seed": seed,
                "alpha": cfg["alpha"],
                "gamma": cfg["gamma"],
                "mixture": bool(cfg["mixture"]),
            },
        )
    return EXIT_OK


def _intensity_of(cfg: dict) -> IntensityModel:
    kind = cfg["intensity"]
    if kind == "homogeneous":
        return IntensityModel.homogeneous()
    if kind == "time-profile":
        if cfg["times"] is None or cfg["rates"] is None:
            raise ConfigError("time-profile intensity needs times and rates")
        return IntensityModel.time_profile(cfg["times"], cfg["rates"])
    if kind == "spatial-power-law":
        if cfg["lambda0"] is None or cfg["beta_s"] is None:
            raise ConfigError("spatial-power-law intensity needs lambda0 and beta_s")
        return IntensityModel.spatial_power_law(cfg["lambda0"], cfg["beta_s"])
    if kind == "sector":
        if cfg["phi"] is None:
            raise ConfigError("sector intensity needs phi")
        return IntensityModel.sector(cfg["phi"])
    raise ConfigError(f"unknown intensity kind {kind!r}")


def _fading_of(cfg: dict) -> FadingSpec:
    kind = cfg["fading"]
    if kind == "constant":
        return FadingSpec.constant(cfg["fading_value"])
    if kind == "rayleigh":
        return FadingSpec.rayleigh(cfg["fading_value"])
    raise ConfigError(f"unknown fading kind {kind!r}")


def _channel_of(cfg: dict) -> ChannelSpec:
    kind = cfg["channel"]
    if kind == "rademacher":
        return ChannelSpec.rademacher()
    if kind == "gaussian":
        return ChannelSpec.gaussian(cfg["channel_value"])
    if kind == "constant":
        return ChannelSpec.constant(cfg["channel_value"])
    raise ConfigError(f"unknown channel kind {kind!r}")


def _cmd_simulate(cfg: dict) -> int:
    kwargs = {}
    if cfg["lambda_k"] is not None or cfg["k_max"] is not None or cfg["shape_a"] is not None:
        kwargs["bandwidth"] = _bandwidth_law(cfg)
    field = FieldConfig(
        lam=cfg["lam"],
        r_t=cfg["r_t"],
        sigma=cfg["sigma"],
        fading=_fading_of(cfg),
        channel=_channel_of(cfg),
        intensity=_intensity_of(cfg),
        **kwargs,
    )
    batch = synthesize(
        field,
        cfg["replicates"],
        seed=cfg["seed"],
        kernel=cfg["kernel"],
        threads=cfg["threads"],
    )
    if cfg["out"] is not None:
        write_iq(batch, cfg["out"])
    if cfg["csv"] is not None:
        write_csv(batch, cfg["csv"])
    try:
        alpha_hat = estimate_tail_index(np.abs(batch.totals().real))
    except DomainError:
        alpha_hat = None
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "simulate",
        "seed": cfg["seed"],
        "replicates": cfg["replicates"],
        "sigma": cfg["sigma"],
        "alpha": 4.0 / cfg["sigma"],
        "lambda_star": map_intensity(field),
        "expected_count": expected_count(field),
        "k_max": int(batch.k_max),
        "kernel": get_kernel(cfg["kernel"]).kernel_id(),
        "alpha_hat": alpha_hat,
    }
    _emit_json(cfg["summary"], summary)
    return EXIT_OK


def _cmd_validate(cfg: dict) -> int:
    settings = ValidateSettings(
        seed=cfg["seed"],
        cf_replicates=cfg["cf_replicates"],
        cf_mean_count=cfg["cf_mean_count"],
        ks_replicates=cfg["ks_replicates"],
        ks_mean_count=cfg["ks_mean_count"],
        map_replicates=cfg["map_replicates"],
        gamma_corruption=cfg["corrupt_gamma"],
        kernel=cfg["kernel"],
        threads=cfg["threads"],
    )
    report = run_suite(settings).to_dict()
    if cfg["out"] is not None:
        _emit_json(cfg["out"], report)
    sys.stdout.write(render_report(report) + "\n")
    return EXIT_OK if report["passed"] else EXIT_VALIDATION


_REGIMES = {r.value: r for r in Regime}


def _lrt_spec_of(cfg: dict) -> LrtSpec:
    name = cfg["regime"]
    if name is None:
        alpha = cfg["alpha"]
        regime = Regime.GENERAL_SERIES
        for candidate, pinned in (
            (Regime.CAUCHY, 1.0),
            (Regime.HOLTSMARK, 1.5),
            (Regime.WHITTAKER, 2.0 / 3.0),
            (Regime.GAUSSIAN, 2.0),
        ):
            if math.isclose(alpha, pinned, rel_tol=1e-12, abs_tol=1e-12):
                regime = candidate
                break
    else:
        try:
            regime = _REGIMES[name]
        except KeyError:
            raise ConfigError(f"unknown regime {name!r}") from None
    return LrtSpec(cfg["alpha"], cfg["gamma_tilde"], regime, cfg["x_h0"], cfg["x_h1"])


def _cmd_lrt(cfg: dict) -> int:
    spec = _lrt_spec_of(cfg)
    single = cfg["r"] is not None
    gridded = cfg["grid"] is not None or cfg["linspace"] is not None
    if single == gridded:
        raise ConfigError("provide exactly one of r / grid / linspace")
    if single:
        value = lrt(spec, cfg["r"])
        sys.stdout.write(f"{value:.12g}\n")
        return EXIT_OK
    result = lrt_curve(spec, _eval_grid(cfg))
    if cfg["out"] is None:
        labels = result.point_regimes()
        lines = ["r,lambda,log_lambda,regime,valid"]
        for r, lam, ll, lab, ok in zip(
            result.r_grid, result.lam, result.log_lam, labels, result.valid
        ):
            lines.append(f"{r:.12g},{lam:.12g},{ll:.12g},{lab},{'true' if ok else 'false'}")
        sys.stdout.write("\n".join(lines) + "\n")
    else:
        write_lrt_csv(result, cfg["out"])
    summary = {"schema_version": SCHEMA_VERSION, "command": "lrt", **lrt_summary(result)}
    if cfg["summary"] is not None:
        _emit_json(cfg["summary"], summary)
    elif cfg["out"] is not None:
        _emit_json(None, summary)
    return EXIT_OK


def _cmd_gsnr(cfg: dict) -> int:
    law = _bandwidth_law(cfg)
    cells = gsnr_surface(cfg["alphas"], cfg["gammas"], cfg["amplitude"], law)
    lines = ["alpha,gamma,s0,gsnr"]
    for cell in cells:
        lines.append(f"{cell.alpha:.12g},{cell.gamma:.12g},{cell.s0:.12g},{cell.gsnr:.12g}")
    _emit_text(cfg["out"], "\n".join(lines) + "\n")
    return EXIT_OK


def _cmd_capacity(cfg: dict) -> int:
    spec = _lrt_spec_of(cfg)
    cap, se = biso_capacity(spec, cfg["n_mc"], rng_stream=cfg["seed"])
    payload = {
        "schema_version": SCHEMA_VERSION,
        "command": "capacity",
        "alpha": spec.alpha,
        "gamma_tilde": spec.gamma_tilde,
        "regime": spec.regime.value,
        "x_h0": spec.x_h0,
        "x_h1": spec.x_h1,
        "n_mc": cfg["n_mc"],
        "seed": cfg["seed"],
        "capacity_bits": cap,
        "std_error": se,
    }
    _emit_json(cfg["out"], payload)
    return EXIT_OK


_HANDLERS: dict[str, Callable[[dict], int]] = {
    "pdf": _cmd_pdf,
    "cdf": _cmd_cdf,
    "tail": _cmd_tail,
    "sample": _cmd_sample,
    "simulate": _cmd_simulate,
    "validate": _cmd_validate,
    "lrt": _cmd_lrt,
    "gsnr": _cmd_gsnr,
    "capacity": _cmd_capacity,
}


def main(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 after --help
        return int(exc.code or 0)
    try:
        cfg = _merge_config(args)
        return _HANDLERS[args.command](cfg)
    except (ConfigError, DomainError) as exc:
        print(f"pnsc {args.command}: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NonConvergenceError as exc:
        print(f"pnsc {args.command}: did not converge: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (FormatError, OSError) as exc:
        print(f"pnsc {args.command}: i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValidationFailure as exc:
        print(f"pnsc {args.command}: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
