"""Batch front end.

Loads a JSON run configuration, dispatches exactly one library operation,
and writes a machine-readable report (JSON or CSV).  Exit codes: 0 on
success, 2 when a check command reports a failing/divergent verdict, 1 on
configuration or execution errors.  No numerics live here: every command is
a thin wrapper over one public library operation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from typing import Callable

import numpy as np

from . import convex_geometry as cg
from . import disc_analysis as da
from . import hardy_littlewood as hl
from . import kobayashi as kb


class ConfigError(ValueError):
    pass


def _as_complex(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"expected [re, im] pair, got {value!r}")


def _as_vector(value) -> np.ndarray:
    return np.array([_as_complex(v) for v in value], dtype=complex)


def function_from_spec(spec: dict) -> da.UnitDiscFunction:
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "identity":
        out = da.identity_map()
    elif kind == "constant":
        out = da.constant_map(_as_vector(spec.pop("values")))
    elif kind == "automorphism":
        out = kb.disc_automorphism(
            _as_complex(spec.pop("a")), float(spec.pop("phi", 0.0))
        )
    elif kind == "monomial":
        degree = int(spec.pop("degree"))
        coeff = _as_complex(spec.pop("coefficient", 1.0))
        if degree < 0:
            raise ConfigError("monomial degree must be nonnegative")
        out = da.scalar_function(
            lambda z: coeff * z**degree,
            lambda z: coeff * degree * z ** (degree - 1) if degree else 0.0j,
        )
    elif kind == "pair_identity_zero":
        out = da.vector_function(
            [lambda z: z, lambda z: 0.0 * z],
            [lambda z: 1.0 + 0.0j, lambda z: 0.0j],
        )
    elif kind == "nonextending":
        out = kb.nonextending_geodesic().map
    elif kind is None:
        raise ConfigError("function spec needs a 'kind'")
    else:
        raise ConfigError(f"unknown function kind {kind!r}")
    _reject_unknown(spec, context=f"function '{kind}'")
    return out


def majorant_from_spec(spec: dict):
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "family":
        out = hl.DerivMajorantFamily(
            K1=float(spec.pop("K1")),
            K2=float(spec.pop("K2")),
            alpha=float(spec.pop("alpha")),
            r0=float(spec.pop("r0")),
        )
    elif kind == "power":
        coeff = float(spec.pop("coefficient", 1.0))
        exponent = float(spec.pop("exponent", 0.0))
        r0 = float(spec.pop("r0"))
        out = hl.Majorant(
            lambda x: coeff * x**exponent,
            r0,
            lambda u: coeff * math.exp(-(exponent + 1.0) * u),
            lambda u: math.log(coeff) - (exponent + 1.0) * u if coeff > 0 else -math.inf,
        )
    elif kind is None:
        raise ConfigError("majorant spec needs a 'kind'")
    else:
        raise ConfigError(f"unknown majorant kind {kind!r}")
    _reject_unknown(spec, context=f"majorant '{kind}'")
    return out


def modulus_from_spec(spec: dict) -> da.ModulusFamily:
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "holder":
        out = da.ModulusFamily.holder(float(spec.pop("a")))
    elif kind == "log_reciprocal":
        out = da.ModulusFamily.log_reciprocal()
    elif kind == "stretched_exponential":
        out = da.ModulusFamily.stretched_exponential(
            float(spec.pop("coeff")), float(spec.pop("eps"))
        )
    elif kind is None:
        raise ConfigError("modulus spec needs a 'kind'")
    else:
        raise ConfigError(f"unknown modulus kind {kind!r}")
    _reject_unknown(spec, context=f"modulus '{kind}'")
    return out


def candidate_from_spec(spec: dict) -> kb.GeodesicCandidate:
    spec = dict(spec)
    kind = spec.pop("kind", None)
    if kind == "nonextending":
        out = kb.nonextending_geodesic()
    elif kind == "flat_slice":
        domain = cg.domain_from_json(spec.pop("domain"))
        if not isinstance(domain, cg.FlatModelDomain):
            raise ConfigError("flat_slice candidates need a flat_model domain")
        out = kb.flat_slice_candidate(
            domain, _as_complex(spec.pop("center")), float(spec.pop("radius"))
        )
    elif kind == "map":
        out = kb.GeodesicCandidate(
            function_from_spec(spec.pop("map")),
            cg.domain_from_json(spec.pop("domain")),
            str(spec.pop("construction", "custom")),
        )
    elif kind is None:
        raise ConfigError("candidate spec needs a 'kind'")
    else:
        raise ConfigError(f"unknown candidate kind {kind!r}")
    _reject_unknown(spec, context=f"candidate '{kind}'")
    return out


def _reject_unknown(leftover: dict, context: str) -> None:
    if leftover:
        key = sorted(leftover)[0]
        raise ConfigError(f"unknown key '{key}' in {context}")


def _complex_pair(z: complex) -> list[float]:
    return [z.real, z.imag]


# --- command handlers: each returns (result_payload, csv_rows, verdict_ok) ---

def _cmd_hl_verify(cfg: dict):
    report = hl.verify_majorant(
        function_from_spec(cfg["function"]), majorant_from_spec(cfg["majorant"])
    )
    ok = report.verified()
    payload = {
        "max_violation": report.max_violation,
        "worst_r": report.worst_r,
        "worst_theta": report.worst_theta,
        "verified": ok,
    }
    return payload, [payload], ok


def _cmd_hl_bound(cfg: dict):
    value = hl.omega_bound(majorant_from_spec(cfg["majorant"]), float(cfg["delta"]))
    payload = {"omega_bound": value}
    return payload, [payload], math.isfinite(value)


def _cmd_hl_l1(cfg: dict):
    res = hl.phi_log_l1(majorant_from_spec(cfg["majorant"]), int(cfg.get("n", 0)))
    payload = {
        "value": res.value if res.converged else None,
        "verdict": "converged" if res.converged else "diverged",
        "refinement_levels": res.refinement_levels,
        "estimated_error": res.estimated_error,
    }
    return payload, [payload], res.converged


def _cmd_mod_cont(cfg: dict):
    samples = da.boundary_samples(
        function_from_spec(cfg["function"]), int(cfg.get("n", 512))
    )
    deltas = cfg.get("deltas")
    if deltas is None:
        deltas = [float(cfg["delta"])]
    profile = da.modulus_profile(samples, [float(d) for d in deltas])
    rows = [
        {"delta": d, "omega": w} for d, w in zip(profile.deltas, profile.omegas)
    ]
    payload = {
        "deltas": profile.deltas.tolist(),
        "omegas": profile.omegas.tolist(),
        "cauchy_fraction": samples.cauchy_fraction,
    }
    return payload, rows, None


def _cmd_conjugate(cfg: dict):
    samples = da.boundary_samples(
        function_from_spec(cfg["function"]), int(cfg.get("n", 512))
    )
    if cfg.get("real_part", False):
        samples = da.BoundarySamples(
            samples.n,
            samples.values[:, 0].real.astype(complex),
            samples.radius_used,
            samples.cauchy_fraction,
        )
    conjugated = da.conjugate_function(samples)
    rows = [
        {"theta": t, "re": v.real, "im": v.imag}
        for t, v in zip(conjugated.thetas, conjugated.values[:, 0])
    ]
    payload = {"n": conjugated.n, "values": [ _complex_pair(v) for v in conjugated.values[:, 0] ]}
    return payload, rows, None


def _cmd_pz_bound(cfg: dict):
    value = da.pz_bound(
        modulus_from_spec(cfg["modulus"]), float(cfg["delta"]), float(cfg.get("K", 1.0))
    )
    payload = {"pz_bound": value if math.isfinite(value) else None,
               "finite": math.isfinite(value)}
    return payload, [payload], math.isfinite(value)


def _cmd_log_dini(cfg: dict):
    report = da.log_dini_test(
        modulus_from_spec(cfg["modulus"]), int(cfg.get("n_max", 6))
    )
    rows = [
        {"n": n, "verdict": verdict, "value": res.value if res.converged else None}
        for n, (verdict, res) in enumerate(zip(report.verdicts, report.results))
    ]
    payload = {
        "log_dini": report.log_dini,
        "n_max": report.n_max,
        "verdicts": list(report.verdicts),
        "note": "finite surrogate: tested n <= n_max only",
    }
    return payload, rows, report.log_dini


def _cmd_domain_distance(cfg: dict):
    domain = cg.domain_from_json(cfg["domain"])
    value = cg.boundary_distance(domain, _as_vector(cfg["point"]))
    payload = {"distance": value}
    return payload, [payload], None


def _cmd_domain_radius(cfg: dict):
    domain = cg.domain_from_json(cfg["domain"])
    value = cg.inscribed_disc_radius(
        domain, _as_vector(cfg["point"]), _as_vector(cfg["direction"])
    )
    payload = {"radius": value}
    return payload, [payload], None


def _cmd_flat_x0(cfg: dict):
    value = cg.x0_cap(
        float(cfg["C"]), float(cfg["alpha"]), int(cfg.get("scan_n", 100_000))
    )
    payload = {"x0": value}
    return payload, [payload], None


def _cmd_flat_rho(cfg: dict):
    value = cg.rho_triangle(
        float(cfg["d"]), float(cfg["slope"]), float(cfg["C"]), float(cfg["alpha"])
    )
    payload = {"rho": value}
    return payload, [payload], None


def _cmd_rest_check(cfg: dict):
    domain = cg.domain_from_json(cfg["domain"])
    if not isinstance(domain, cg.FlatModelDomain):
        raise ConfigError("rest-check needs a flat_model domain")
    point = _as_vector(cfg["point"])
    direction = _as_vector(cfg["direction"])
    report = cg.rest_bound_check(
        domain, point, direction, float(cfg.get("tol", 1e-6))
    )
    payload = {
        "z": [_complex_pair(z) for z in point],
        "v": [_complex_pair(v) for v in direction],
        "d": report.d,
        "radius": report.radius,
        "bound": report.bound,
        "margin": report.margin,
        "satisfied": report.satisfied,
    }
    row = dict(payload)
    row["z"] = ";".join(f"{z.real}{z.imag:+}j" for z in point)
    row["v"] = ";".join(f"{v.real}{v.imag:+}j" for v in direction)
    return payload, [row], report.satisfied


def _cmd_graham(cfg: dict):
    domain = cg.domain_from_json(cfg["domain"])
    bounds = kb.graham_bounds(
        domain, _as_vector(cfg["point"]), _as_vector(cfg["direction"])
    )
    payload = {"lower": bounds.lower, "upper": bounds.upper}
    return payload, [payload], None


def _cmd_geodesic_defect(cfg: dict):
    candidate = candidate_from_spec(cfg["candidate"])
    value = kb.geodesic_defect(
        candidate, _as_complex(cfg["zeta1"]), _as_complex(cfg["zeta2"])
    )
    payload = {"defect": value}
    return payload, [payload], None


def _cmd_geodesic_probe(cfg: dict):
    candidate = candidate_from_spec(cfg["candidate"])
    report = kb.boundary_extension_probe(
        candidate,
        n_theta=int(cfg.get("n_theta", 8192)),
        tol_ext=float(cfg.get("tol_ext", 1e-3)),
    )
    rows = [
        {"delta": d, "omega": w}
        for d, w in zip(report.profile.deltas, report.profile.omegas)
    ]
    payload = {
        "verdict": report.verdict,
        "omega_min": report.omega_min,
        "cauchy_fraction": report.cauchy_fraction,
    }
    return payload, rows, report.verdict != "fails"


def _cmd_mercer_fit(cfg: dict):
    candidate = candidate_from_spec(cfg["candidate"])
    fit = kb.mercer_fit(candidate, theta=float(cfg.get("theta", 0.0)))
    payload = {
        "C1": fit.C1,
        "C2": fit.C2,
        "beta": fit.beta,
        "residual": fit.residual,
        "clamped": fit.clamped,
    }
    return payload, [payload], None


def _cmd_pipeline(cfg: dict):
    domain = cg.domain_from_json(cfg["domain"])
    if not isinstance(domain, cg.FlatModelDomain):
        raise ConfigError("pipeline needs a flat_model domain")
    candidate = candidate_from_spec(cfg["candidate"])
    params = kb.PipelineParams(
        properness_threshold=float(cfg.get("properness_threshold", 0.05)),
        majorant_alpha_override=cfg.get("majorant_alpha_override"),
        probe_n_theta=int(cfg.get("probe_n_theta", 4096)),
    )
    report = kb.theorem_pipeline(domain, candidate, params)
    rows = [
        {"stage": s.name, "status": s.status} for s in report.stages
    ]
    return report.to_payload(), rows, report.ok


_COMMANDS: dict[str, tuple[Callable, set[str], set[str]]] = {
    # name -> (handler, required keys, optional keys)
    "hl-verify": (_cmd_hl_verify, {"function", "majorant"}, set()),
    "hl-bound": (_cmd_hl_bound, {"majorant", "delta"}, set()),
    "hl-l1": (_cmd_hl_l1, {"majorant"}, {"n"}),
    "mod-cont": (_cmd_mod_cont, {"function"}, {"n", "delta", "deltas"}),
    "conjugate": (_cmd_conjugate, {"function"}, {"n", "real_part"}),
    "pz-bound": (_cmd_pz_bound, {"modulus", "delta"}, {"K"}),
    "log-dini": (_cmd_log_dini, {"modulus"}, {"n_max"}),
    "domain-distance": (_cmd_domain_distance, {"domain", "point"}, set()),
    "domain-radius": (_cmd_domain_radius, {"domain", "point", "direction"}, set()),
    "flat-x0": (_cmd_flat_x0, {"C", "alpha"}, {"scan_n"}),
    "flat-rho": (_cmd_flat_rho, {"d", "slope", "C", "alpha"}, set()),
    "rest-check": (_cmd_rest_check, {"domain", "point", "direction"}, {"tol"}),
    "graham": (_cmd_graham, {"domain", "point", "direction"}, set()),
    "geodesic-defect": (_cmd_geodesic_defect, {"candidate", "zeta1", "zeta2"}, set()),
    "geodesic-probe": (_cmd_geodesic_probe, {"candidate"}, {"n_theta", "tol_ext"}),
    "mercer-fit": (_cmd_mercer_fit, {"candidate"}, {"theta"}),
    "pipeline": (
        _cmd_pipeline,
        {"domain", "candidate"},
        {"properness_threshold", "majorant_alpha_override", "probe_n_theta"},
    ),
}

_GLOBAL_KEYS = {"command", "seed", "format", "out"}


def validate_config(command: str, cfg: dict) -> None:
    handler = _COMMANDS.get(command)
    if handler is None:
        raise ConfigError(f"unknown command '{command}'")
    _, required, optional = handler
    allowed = required | optional | _GLOBAL_KEYS
    for key in cfg:
        if key not in allowed:
            raise ConfigError(f"unknown key '{key}' for command '{command}'")
    for key in required:
        if key not in cfg:
            raise ConfigError(f"missing key '{key}' for command '{command}'")
    if "command" in cfg and cfg["command"] != command:
        raise ConfigError(
            f"config command '{cfg['command']}' does not match '{command}'"
        )


def _sanitize(obj):
    """Plain-Python copy of a report tree: numpy scalars become floats/ints."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, float):
        return float(obj)
    return obj


def _write_atomic(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _render_csv(rows: list[dict]) -> str:
    if not rows:
        return "\n"
    header = list(rows[0].keys())
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for key in header:
            value = row.get(key)
            cells.append(repr(value) if isinstance(value, float) else str(value))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def run(command: str, cfg: dict) -> int:
    """Validate, dispatch, write the report; returns the process exit code."""
    validate_config(command, cfg)
    handler, _, _ = _COMMANDS[command]
    payload, rows, verdict_ok = handler(cfg)
    payload, rows = _sanitize(payload), _sanitize(rows)
    report = {
        "command": command,
        "seed": int(cfg.get("seed", 0)),
        "result": payload,
    }
    fmt = cfg.get("format", "json")
    if fmt not in ("json", "csv"):
        raise ConfigError(f"unknown format '{fmt}'")
    text = (
        json.dumps(report, sort_keys=True, indent=2) + "\n"
        if fmt == "json"
        else _render_csv(rows)
    )
    out = cfg.get("out")
    if out:
        _write_atomic(out, text)
    else:
        sys.stdout.write(text)
    return 0 if verdict_ok in (None, True) else 2


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="geodisc",
        description="Boundary-regularity toolkit for holomorphic discs in "
        "convex domains",
    )
    parser.add_argument("command", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--out", help="report path (stdout when omitted)")
    parser.add_argument("--format", choices=("csv", "json"), default=None)
    parser.add_argument("--seed", type=int, default=None)
    args = parser.parse_args(argv)

    cfg: dict = {}
    try:
        if args.config:
            with open(args.config) as fh:
                cfg = json.load(fh)
            if not isinstance(cfg, dict):
                raise ConfigError("config must be a JSON object")
        if args.out is not None:
            cfg["out"] = args.out
        if args.format is not None:
            cfg["format"] = args.format
        if args.seed is not None:
            cfg["seed"] = args.seed
        return run(args.command, cfg)
    except (ConfigError, ValueError, KeyError, OSError) as exc:
        print(f"geodisc: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
