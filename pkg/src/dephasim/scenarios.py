"""Scenario configs, built-in templates and the orchestrator behind ``dephasim run``.

A scenario is a JSON object::

    {"kind": "pipeline", "parameters": {...}, "output_dir": "out", "seed": 0}

Unknown keys are rejected at every level. Missing optional parameters are
filled from the defaults below, and the fully resolved config is echoed in
``manifest.json`` next to a SHA-256 of every artifact; passing that manifest
back to ``dephasim run`` reproduces the run.
"""
from __future__ import annotations

import copy
import hashlib
import json
import math
import os
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, io
from .channel import choi_eigenvalues
from .designer import (DesignTarget, HardwareProfile, invert_target, match_pixel_pitch, quantize,
                       realized_kappa_zero, roundtrip_error, samples_needed)
from .errors import ConfigError
from .freq import (DecoherenceTrace, chirped_gaussian, forward_kappa, kappa_zero,
                   scaled_decoherence)
from .ising import IsingChainSpec, RegimeThresholds, decoherence_fn, regime_classifier
from .measurement import CountingConfig, measure_trace
from .spectral import SpectralDensitySpec, ohmic_closed_form, spectral_decoherence

BUILD_ID = f"dephasim-{__version__}"
OUTPUT_DIR_ENV = "DEPHASIM_OUTPUT_DIR"
KINDS = ("ising", "spectral", "design", "forward", "measure", "pipeline")

REQUIRED = object()

_THRESHOLDS = {"low": 0.3, "rev": 0.5, "trap": 0.4}
_MEASURE = {"rate": 3000.0, "duration": 10.0, "mc": 100, "points": 81}
_HARDWARE = HardwareProfile().to_dict()

SCHEMAS: dict[str, dict] = {
    "ising": {
        "lambda": REQUIRED, "delta": 0.1, "n_spins": 4000, "coupling_J": 1.0,
        "tmax": 4.0, "samples": 801, "thresholds": _THRESHOLDS,
    },
    "spectral": {
        "family": "ohmic", "table": None, "alpha": 1.0, "omega_c": 1.0, "s": 1.0,
        "beta": "inf", "tmax": 20.0, "samples": 201, "compare_closed_form": False,
    },
    "forward": {
        "distribution": REQUIRED, "dmax": REQUIRED, "samples": 501, "allow_aliasing": False,
    },
    "design": {
        "target": REQUIRED, "grid_size": 4096, "hardware": None,
    },
    "measure": {
        "trace": REQUIRED, "rate": 3000.0, "duration": 10.0, "mc": 100,
    },
    "pipeline": {
        "source": REQUIRED, "grid_size": 4096, "time_step": REQUIRED, "window": REQUIRED,
        "hardware": _HARDWARE, "quantize": True, "measure": _MEASURE,
    },
}

SOURCE_SCHEMAS: dict[str, dict] = {
    "ising": {"lambda": REQUIRED, "delta": 0.1, "n_spins": 4000, "coupling_J": 1.0,
              "thresholds": _THRESHOLDS},
    "spectral": {"family": "ohmic", "table": None, "alpha": 1.0, "omega_c": 1.0, "s": 1.0,
                 "beta": "inf"},
    "chirped_gaussian": {"peak": 0.8, "kappa0": 0.6, "width": 1.0, "pixels": 4096},
}

TOP_LEVEL = {"kind": REQUIRED, "parameters": {}, "output_dir": None, "seed": 0}


@dataclass
class Scenario:
    kind: str
    parameters: dict
    output_dir: str
    seed: int = 0
    base_dir: Path = field(default_factory=Path.cwd)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "parameters": self.parameters,
                "output_dir": self.output_dir, "seed": self.seed}


def _resolve(given: dict, schema: dict, where: str) -> dict:
    if not isinstance(given, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(given) - set(schema))
    if unknown:
        raise ConfigError(f"unknown key {where + '.' if where else ''}{unknown[0]}")
    out = {}
    for key, default in schema.items():
        if key in given:
            out[key] = given[key]
        elif default is REQUIRED:
            raise ConfigError(f"missing required key {where}.{key}" if where else f"missing required key {key}")
        else:
            out[key] = copy.deepcopy(default)
    return out


def _nested(params: dict, key: str, schema: dict, where: str) -> None:
    if params.get(key) is not None:
        params[key] = _resolve(params[key], schema, f"{where}.{key}")


def validate(config: dict, base_dir: Path | None = None) -> Scenario:
    """Check a raw config dict and fill in defaults."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    top = _resolve(config, TOP_LEVEL, "")
    kind = top["kind"]
    if kind not in SCHEMAS:
        raise ConfigError(f"kind must be one of {', '.join(KINDS)}, got {kind!r}")
    params = _resolve(top["parameters"], SCHEMAS[kind], "parameters")
    if "thresholds" in params:
        _nested(params, "thresholds", _THRESHOLDS, "parameters")
    if kind == "pipeline":
        source = params["source"]
        if not isinstance(source, dict) or "type" not in source:
            raise ConfigError("missing required key parameters.source.type")
        stype = source["type"]
        if stype not in SOURCE_SCHEMAS:
            raise ConfigError(f"parameters.source.type must be one of {sorted(SOURCE_SCHEMAS)}")
        rest = {k: v for k, v in source.items() if k != "type"}
        params["source"] = {"type": stype, **_resolve(rest, SOURCE_SCHEMAS[stype], "parameters.source")}
        if "thresholds" in params["source"]:
            _nested(params["source"], "thresholds", _THRESHOLDS, "parameters.source")
        _nested(params, "measure", _MEASURE, "parameters")
    if kind in ("pipeline", "design") and isinstance(params.get("hardware"), dict):
        _nested(params, "hardware", _HARDWARE, "parameters")
        try:
            HardwareProfile.from_dict(params["hardware"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"parameters.hardware: {exc}") from exc
    output_dir = top["output_dir"] or os.environ.get(OUTPUT_DIR_ENV) or f"dephasim-out/{kind}"
    seed = top["seed"]
    if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
        raise ConfigError("seed must be a nonnegative integer")
    return Scenario(kind, params, str(output_dir), seed, base_dir or Path.cwd())


def load_config(path) -> tuple[dict, Path]:
    """Read a scenario config or a run manifest; returns (config, base dir)."""
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(data, dict) and "scenario" in data and "artifacts" in data:
        return data["scenario"], Path(data.get("base_dir", path.parent))
    return data, path.parent


# --- helpers ---------------------------------------------------------------

def _beta(value) -> float:
    if isinstance(value, str):
        if value.lower() in ("inf", "infinity"):
            return math.inf
        return float(value)
    return float(value)


def _spectral_spec(params: dict, base: Path) -> SpectralDensitySpec:
    beta = _beta(params["beta"])
    if params.get("table"):
        omega, J = io.read_spectral_table(base / params["table"])
        return SpectralDensitySpec.table(omega, J, beta=beta)
    if params["family"] == "bimodal":
        from .spectral import bimodal_table
        tab = bimodal_table()
        return SpectralDensitySpec.table(tab.omega, tab.J, beta=beta)
    return SpectralDensitySpec(family=params["family"], alpha=float(params["alpha"]),
                               omega_c=float(params["omega_c"]), s=float(params["s"]), beta=beta)


def _hardware(value, base: Path) -> HardwareProfile | None:
    if value is None:
        return None
    if isinstance(value, str):
        value = json.loads((base / value).read_text(encoding="utf-8"))
    return HardwareProfile.from_dict(value)


def _thresholds(d: dict) -> RegimeThresholds:
    return RegimeThresholds(low=d["low"], rev=d["rev"], trap=d["trap"])


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    raise TypeError(f"not JSON serializable: {type(obj)}")


def _write_json(path: Path, data) -> None:
    text = json.dumps(data, indent=2, sort_keys=True, default=_json_default, allow_nan=True)
    path.write_text(text + "\n", encoding="utf-8")


def source_trace(source: dict, times: np.ndarray, base: Path) -> DecoherenceTrace:
    """Target D on the source's own time axis."""
    stype = source["type"]
    if stype == "ising":
        spec = IsingChainSpec(lam=float(source["lambda"]), delta=float(source["delta"]),
                              n_spins=int(source["n_spins"]), coupling_J=float(source["coupling_J"]))
        return decoherence_fn(spec, times)
    if stype == "spectral":
        return spectral_decoherence(_spectral_spec(source, base), times)
    if stype == "chirped_gaussian":
        # sigma chosen so the |kappa| bump has unit width on the source axis
        peak, k0 = float(source["peak"]), float(source["kappa0"])
        sigma = 1.0 / (2 * np.pi * float(source["width"]) * peak ** 2)
        dist = chirped_gaussian(int(source["pixels"]), sigma, peak=peak, kappa0=k0)
        return scaled_decoherence(forward_kappa(dist, times))
    raise ConfigError(f"unknown source type {stype!r}")


# --- runners ---------------------------------------------------------------

def _run_ising(sc: Scenario, out: Path) -> dict:
    p = sc.parameters
    spec = IsingChainSpec(lam=float(p["lambda"]), delta=float(p["delta"]),
                          n_spins=int(p["n_spins"]), coupling_J=float(p["coupling_J"]))
    t = np.linspace(0.0, float(p["tmax"]), int(p["samples"]))
    trace = decoherence_fn(spec, t)
    io.write_trace(out / "trace.csv", trace)
    return {"regime": regime_classifier(trace, _thresholds(p["thresholds"])).value,
            "min_D": float(trace.kappa.real.min())}


def _run_spectral(sc: Scenario, out: Path) -> dict:
    p = sc.parameters
    spec = _spectral_spec(p, sc.base_dir)
    t = np.linspace(0.0, float(p["tmax"]), int(p["samples"]))
    trace = spectral_decoherence(spec, t)
    io.write_trace(out / "trace.csv", trace)
    summary = {"min_D": float(trace.kappa.real.min())}
    if p["compare_closed_form"]:
        if spec.is_table or spec.s != 1 or not spec.zero_temperature:
            raise ConfigError("compare_closed_form needs the zero-temperature ohmic family")
        exact = ohmic_closed_form(spec.alpha, spec.omega_c, t)
        summary["max_relative_error"] = float(np.max(np.abs(trace.kappa.real / exact - 1)))
    return summary


def _run_forward(sc: Scenario, out: Path) -> dict:
    p = sc.parameters
    dist = io.read_distribution(sc.base_dir / p["distribution"])
    d = np.linspace(0.0, float(p["dmax"]), int(p["samples"]))
    trace = forward_kappa(dist, d, allow_aliasing=bool(p["allow_aliasing"]))
    io.write_trace(out / "trace.csv", trace)
    return {"kappa_zero_abs": abs(kappa_zero(dist)), "max_abs_kappa": float(trace.abs.max())}


def _run_design(sc: Scenario, out: Path) -> dict:
    p = sc.parameters
    target = io.read_target(sc.base_dir / p["target"])
    grid = int(p["grid_size"])
    target = target.head(samples_needed(grid))
    dist = invert_target(target, grid)
    io.write_distribution(out / "distribution.csv", dist)
    summary = {"kappa_zero_abs": abs(kappa_zero(dist)),
               "roundtrip_error": roundtrip_error(target, dist)}
    hw = _hardware(p["hardware"], sc.base_dir)
    if hw is not None:
        q = quantize(dist, hw)
        io.write_distribution(out / "quantized_distribution.csv", q)
        summary["roundtrip_error_quantized"] = roundtrip_error(target, q, allow_aliasing=True)
    return summary


def _run_measure(sc: Scenario, out: Path) -> dict:
    p = sc.parameters
    trace = io.read_trace(sc.base_dir / p["trace"])
    cfg = CountingConfig(rate=float(p["rate"]), duration_s=float(p["duration"]),
                         seed=sc.seed, mc_samples=int(p["mc"]))
    run = measure_trace(trace, cfg)
    io.write_measurement(out / "measurement.csv", run)
    return {"coverage_3sigma": float(run.within(3.0).mean())}


def run_pipeline(sc: Scenario, out: Path) -> dict:
    """Source D(t) -> design -> quantize -> forward -> tomography."""
    p = sc.parameters
    grid = int(p["grid_size"])
    dt = float(p["time_step"])
    window = float(p["window"])
    t = np.arange(samples_needed(grid)) * dt
    if window > t[-1]:
        raise ConfigError(f"window {window} exceeds the design span {t[-1]}")
    source = p["source"]
    target_t = DesignTarget.from_trace(source_trace(source, t, sc.base_dir))
    io.write_target(out / "target.csv", target_t)

    hw = HardwareProfile.from_dict(p["hardware"]) if p["hardware"] is not None else HardwareProfile()
    target = match_pixel_pitch(target_t, hw, grid)
    path_per_time = target.step / dt
    dist = invert_target(target, grid)
    io.write_distribution(out / "distribution.csv", dist)
    realized = dist
    if p["quantize"]:
        realized = quantize(dist, hw)
        io.write_distribution(out / "quantized_distribution.csv", realized)

    kappa = forward_kappa(realized, target.d)
    scaled = scaled_decoherence(kappa)
    io.write_trace(out / "trace.csv", kappa)
    io.write_trace(out / "scaled_trace.csv", scaled)

    in_window = t <= window + 1e-12
    absD = np.abs(scaled.kappa[in_window])
    min_choi = min(choi_eigenvalues(complex(v))[0] for v in scaled.kappa[in_window])
    summary = {
        "path_per_time": path_per_time,
        "kappa_zero_abs": abs(kappa.kappa[0]),
        "design_kappa_zero_abs": abs(realized_kappa_zero(target, grid)),
        "roundtrip_error_full": roundtrip_error(target, dist),
        "roundtrip_error_realized": roundtrip_error(target, realized),
        "window_max_abs_D": float(absD.max()),
        "window_fraction_abs_D_ge_1_1": float(np.mean(absD >= 1.1)),
        "window_min_choi_eigenvalue": float(min_choi),
        "window_min_choi_eigenvalue_where_abs_D_ge_1_1":
            float(min((choi_eigenvalues(complex(v))[0] for v in scaled.kappa[in_window] if abs(v) >= 1.1),
                      default=float("nan"))),
    }
    if source["type"] == "ising":
        th = _thresholds(source["thresholds"])
        window_t = DecoherenceTrace(t[in_window], target_t.target[in_window])
        sim_t = DecoherenceTrace(t[in_window], absD.astype(complex))
        summary["regime_target"] = regime_classifier(window_t, th).value
        summary["regime_simulated"] = regime_classifier(sim_t, th).value

    m = p["measure"]
    if m is not None:
        idx = np.flatnonzero(in_window)
        pick = np.unique(np.rint(np.linspace(0, idx.size - 1, int(m["points"]))).astype(int))
        sub = DecoherenceTrace(kappa.d[idx[pick]], kappa.kappa[idx[pick]])
        cfg = CountingConfig(rate=float(m["rate"]), duration_s=float(m["duration"]),
                             seed=sc.seed, mc_samples=int(m["mc"]))
        run = measure_trace(sub, cfg)
        io.write_measurement(out / "measurement.csv", run)
        summary["measurement_coverage_3sigma"] = float(run.within(3.0).mean())
    return summary


RUNNERS = {
    "ising": _run_ising,
    "spectral": _run_spectral,
    "forward": _run_forward,
    "design": _run_design,
    "measure": _run_measure,
    "pipeline": run_pipeline,
}


def run_scenario(config: dict | Scenario, base_dir: Path | None = None,
                 output_dir: str | os.PathLike | None = None) -> tuple[Path, dict]:
    """Validate, run and write artifacts plus ``manifest.json``.

    Raises :class:`ConfigError` for bad configs; numerical and I/O errors
    propagate. Returns (output directory, summary).
    """
    sc = config if isinstance(config, Scenario) else validate(config, base_dir)
    if output_dir is not None:
        sc.output_dir = str(output_dir)
    out = Path(sc.output_dir)
    if not out.is_absolute():
        out = sc.base_dir / out
    out.mkdir(parents=True, exist_ok=True)
    summary = RUNNERS[sc.kind](sc, out)
    _write_json(out / "summary.json", summary)
    artifacts = {f.name: _sha256(f) for f in sorted(out.iterdir())
                 if f.suffix in (".csv", ".json") and f.name not in ("manifest.json", "error.json")}
    manifest = {"software": "dephasim", "build": BUILD_ID, "scenario": sc.to_dict(),
                "base_dir": str(sc.base_dir.resolve()), "artifacts": artifacts}
    _write_json(out / "manifest.json", manifest)
    return out, summary


# --- catalog ---------------------------------------------------------------

def _pipeline(source: dict, time_step: float, window: float, **extra) -> dict:
    params = {"source": source, "time_step": time_step, "window": window, "grid_size": 4096}
    params.update(extra)
    return {"kind": "pipeline", "parameters": params, "seed": 0}


TEMPLATES: dict[str, dict] = {
    "fig2a": {
        "description": "Ising chain, lambda = 0.01: collapse and revival, designed and measured",
        "config": _pipeline({"type": "ising", "lambda": 0.01, "delta": 0.1, "n_spins": 4000},
                            time_step=0.005, window=4.0),
    },
    "fig2b": {
        "description": "Ising chain, lambda = 0.9 (critical excited branch): fast monotone decay",
        "config": _pipeline({"type": "ising", "lambda": 0.9, "delta": 0.1, "n_spins": 4000},
                            time_step=0.005, window=4.0),
    },
    "fig2c": {
        "description": "Ising chain, lambda = 1.8: oscillations with trapping",
        "config": _pipeline({"type": "ising", "lambda": 1.8, "delta": 0.1, "n_spins": 4000},
                            time_step=0.005, window=4.0),
    },
    "nonpositive": {
        "description": "Chirped spectrum with |kappa(d)| > |kappa(0)|: rescaled |D| > 1, negative Choi eigenvalue",
        "config": _pipeline({"type": "chirped_gaussian", "peak": 0.8, "kappa0": 0.6, "width": 1.0},
                            time_step=0.05, window=4.0),
    },
    "fig4": {
        "description": "Synthetic bimodal spectral density at zero temperature through the simulator",
        "config": _pipeline({"type": "spectral", "family": "bimodal", "beta": "inf"},
                            time_step=0.01, window=20.0),
    },
    "ohmic-oracle": {
        "description": "Ohmic bath at zero temperature checked against (1 + wc^2 t^2)^(-alpha/2)",
        "config": {"kind": "spectral", "seed": 0,
                   "parameters": {"family": "ohmic", "alpha": 1.0, "omega_c": 1.0, "beta": "inf",
                                  "tmax": 20.0, "samples": 201, "compare_closed_form": True}},
    },
}

CATALOG_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["build", "scenarios"],
    "additionalProperties": False,
    "properties": {
        "build": {"type": "string"},
        "scenarios": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "description", "config"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "description": {"type": "string"},
                    "config": {
                        "type": "object",
                        "required": ["kind", "parameters"],
                        "properties": {
                            "kind": {"enum": list(KINDS)},
                            "parameters": {"type": "object"},
                            "seed": {"type": "integer", "minimum": 0},
                        },
                    },
                },
            },
        },
    },
}


def catalog() -> dict:
    return {"build": BUILD_ID,
            "scenarios": [{"name": name, "description": t["description"], "config": copy.deepcopy(t["config"])}
                          for name, t in TEMPLATES.items()]}


def list_scenarios(as_json: bool = False) -> str:
    cat = catalog()
    if as_json:
        return json.dumps(cat, indent=2, sort_keys=True)
    lines = []
    for entry in cat["scenarios"]:
        lines.append(f"{entry['name']:<14}{entry['description']}")
        lines.append(" " * 14 + json.dumps(entry["config"]["parameters"], sort_keys=True))
    return "\n".join(lines)


def template(name: str) -> dict:
    if name not in TEMPLATES:
        raise ConfigError(f"no template named {name!r}; choose from {', '.join(TEMPLATES)}")
    return copy.deepcopy(TEMPLATES[name]["config"])
