"""Command-line entry point: ``geoion run | explain | schema``.

Exit codes: 0 success, 1 physics or validation failure (a JSON error report
is written), 2 usage or configuration error (nothing is written).
"""
from __future__ import annotations

import argparse
import copy
import datetime as _dt
import hashlib
import json
import math
import sys
from importlib import metadata
from pathlib import Path

import jsonschema
import numpy as np

from . import gates, plotting, pulse, qcore
from .errors import GeoIonError
from .evolve import propagate_piecewise
from .model import IonParams, TwoBitDriveConfig, two_ion_scene
from .phase import BlochPath, aa_phase, solid_angle

SCENARIOS = ("one_bit_rotation", "one_bit_phase", "two_bit_rotation", "two_bit_phase", "cps",
             "validate_effective", "calibrate_gamma", "robustness")

DEFAULTS = {
    "scenario": "one_bit_rotation",
    "seed": 0,
    "physics": {"omega0": 10.0, "omega": 1.0, "eta": 0.05, "fock_cutoff": 9,
                "lamb_dicke": "first_order"},
    "one_bit": {"rabi": 0.1, "theta": math.pi / 4, "detuning": None, "phi0": 0.3,
                "reverse": False},
    "two_bit": {"rabi1": 0.05, "rabi2": 0.05, "delta1": 1.1, "delta2": 1.1,
                "omegaD_tilde": None, "Phi0": 0.3, "alpha": math.pi / 2, "g_jk": None},
    "validate": {"rabi": 0.05, "delta1": 1.1, "delta2": 0.9, "dt": 0.2, "duration": None,
                 "tune": True, "record_every": 50},
    "calibration": {"subject": "one_qubit", "n": 64, "theta_min": 0.02,
                    "theta_max": math.pi / 2 - 1e-3},
    "robustness": {"sequence": "one_bit_rotation", "param": "sigma_phi", "sigmas": [1e-3, 4e-3],
                   "sigma_phi": 0.0, "sigma_omegaL": 0.0, "sigma_rabi_rel": 0.0,
                   "mode": "per_segment_offset", "samples": 200},
    "output": {"samples_per_segment": 200, "plots": True},
}

_num = {"type": "number"}
_num_or_null = {"type": ["number", "null"]}
_pos = {"type": "number", "exclusiveMinimum": 0}


def _obj(props, required=()):
    return {"type": "object", "properties": props, "additionalProperties": False,
            "required": list(required)}


SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "geoion scenario config",
    **_obj({
        "scenario": {"enum": list(SCENARIOS)},
        "seed": {"type": "integer", "minimum": 0},
        "physics": _obj({"omega0": _pos, "omega": _pos, "eta": {"type": "number", "minimum": 0},
                         "fock_cutoff": {"type": "integer", "minimum": 1},
                         "lamb_dicke": {"enum": ["first_order", "exact"]}}),
        "one_bit": _obj({"rabi": _pos, "theta": {"type": ["number", "null"], "exclusiveMinimum": 0,
                                                 "maximum": math.pi / 2},
                         "detuning": _num_or_null, "phi0": _num, "reverse": {"type": "boolean"}}),
        "two_bit": _obj({"rabi1": _pos, "rabi2": _pos, "delta1": _pos, "delta2": _pos,
                         "omegaD_tilde": _num_or_null, "Phi0": _num, "alpha": _num, "g_jk": _num_or_null}),
        "validate": _obj({"rabi": {"type": "number", "minimum": 0}, "delta1": _pos, "delta2": _pos,
                          "dt": _pos, "duration": _num_or_null, "tune": {"type": "boolean"},
                          "record_every": {"type": "integer", "minimum": 1}}),
        "calibration": _obj({"subject": {"enum": ["one_qubit", "two_qubit"]},
                             "n": {"type": "integer", "minimum": 2}, "theta_min": _pos,
                             "theta_max": {"type": "number", "exclusiveMinimum": 0,
                                           "maximum": math.pi / 2}}),
        "robustness": _obj({"sequence": {"enum": ["one_bit_rotation", "one_bit_phase",
                                                  "two_bit_rotation", "two_bit_phase", "ujk"]},
                            "param": {"enum": ["sigma_phi", "sigma_omegaL", "sigma_rabi_rel"]},
                            "sigmas": {"type": "array", "items": {"type": "number", "minimum": 0},
                                       "minItems": 1},
                            "sigma_phi": {"type": "number", "minimum": 0},
                            "sigma_omegaL": {"type": "number", "minimum": 0},
                            "sigma_rabi_rel": {"type": "number", "minimum": 0},
                            "mode": {"enum": list(gates.NOISE_MODES)},
                            "samples": {"type": "integer", "minimum": 1}}),
        "output": _obj({"samples_per_segment": {"type": "integer", "minimum": 2},
                        "plots": {"type": "boolean"}}),
    }),
}


class ConfigError(Exception):
    pass


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0.0.0"


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def _apply_set(cfg, item):
    if "=" not in item:
        raise ConfigError(f"--set expects key=value, got {item!r}")
    key, raw = item.split("=", 1)
    try:
        value = json.loads(raw)
    except json.JSONDecodeError:
        value = raw
    parts = key.split(".")
    node = cfg
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ConfigError(f"--set key {key!r} does not name a config section")
    node[parts[-1]] = value


def load_config(path=None, overrides=(), seed=None, samples=None):
    raw = {}
    if path:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}") from None
        if not isinstance(raw, dict):
            raise ConfigError("config must be a JSON object")
    for item in overrides:
        _apply_set(raw, item)
    if seed is not None:
        raw["seed"] = seed
    if samples is not None:
        raw.setdefault("robustness", {})["samples"] = samples
    try:
        jsonschema.validate(raw, SCHEMA)
    except jsonschema.ValidationError as exc:
        loc = ".".join(map(str, exc.absolute_path)) or "<root>"
        raise ConfigError(f"invalid config at {loc}: {exc.message}") from None
    cfg = _merge(DEFAULTS, raw)
    jsonschema.validate(cfg, SCHEMA)
    return cfg


def config_hash(cfg):
    blob = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


# ---------------------------------------------------------------- sequences


def _ion(cfg):
    return IonParams(cfg["physics"]["omega0"], 0)


def _one_bit_detuning(cfg):
    ob = cfg["one_bit"]
    if ob["detuning"] is not None:
        return float(ob["detuning"])
    return 2 * ob["rabi"] / math.tan(ob["theta"])


DEFAULT_ROTATION_OMEGAD = 0.05


def _two_bit(cfg, omegaD=None):
    """Drive config and coupling; unset omegaD_tilde means 0.05 for rotations, 0 otherwise."""
    tb, ph = cfg["two_bit"], cfg["physics"]
    wd = tb["omegaD_tilde"] if tb["omegaD_tilde"] is not None else omegaD
    c = TwoBitDriveConfig.from_detunings(ph["omega0"], tb["rabi1"], tb["rabi2"], tb["delta1"],
                                         tb["delta2"], omegaD_tilde=wd, omega=ph["omega"])
    g = tb["g_jk"] if tb["g_jk"] is not None else c.g_jk(ph["eta"])
    return c, g


def build_sequence(cfg, name):
    ob = cfg["one_bit"]
    if name == "one_bit_rotation":
        return pulse.seq_rotation_1q(_ion(cfg), ob["rabi"], _one_bit_detuning(cfg), ob["reverse"])
    if name == "one_bit_phase":
        return pulse.seq_phase_1q(_ion(cfg), ob["rabi"], ob["phi0"])
    if name == "two_bit_rotation":
        c, g = _two_bit(cfg, DEFAULT_ROTATION_OMEGAD)
        return pulse.seq_rotation_2q(c, g)
    if name == "two_bit_phase":
        c, g = _two_bit(cfg, 0.0)
        return pulse.seq_phase_2q(c, cfg["two_bit"]["Phi0"], g)
    if name == "ujk":
        c, g = _two_bit(cfg, omegaD=0.0)
        return pulse.seq_ujk(c, g, cfg["two_bit"]["alpha"], pulse.default_table("two_qubit"))
    raise ConfigError(f"no pulse sequence for {name!r}")


# ---------------------------------------------------------------- scenarios


def _probe(seq, which):
    return gates._probe_states(seq)[which]


def _phase_block(seq, psi, n):
    traj = propagate_piecewise(seq, psi, n, frame="rotating_at_laser")
    dec = aa_phase(traj)
    out = dec.to_dict()
    if traj.bloch is not None:
        om = solid_angle(BlochPath.from_trajectory(traj))
        out["solid_angle"] = om
        out["geometric_from_solid_angle"] = qcore.wrap_phase(-0.5 * om)
        out["oracle_gap"] = qcore.phase_distance(dec.geometric, -0.5 * om)
    return out, traj


def _png(files, cfg, name, fn, *args):
    if cfg["output"]["plots"]:
        files[name] = ("plot", fn, args)


def run_one_bit_rotation(cfg, files):
    seq = build_sequence(cfg, "one_bit_rotation")
    n = cfg["output"]["samples_per_segment"]
    rabi, det = cfg["one_bit"]["rabi"], _one_bit_detuning(cfg)
    theta = math.atan2(2 * rabi, det)
    gamma = (math.pi - 2 * theta) if cfg["one_bit"]["reverse"] else (2 * theta - math.pi)
    tgt = gates.target("rotation1q", gamma=gamma, omegaD=det, tau=seq.total_duration)
    rep = gates.verify_gate(seq, tgt, "interaction", n)
    phases, traj = _phase_block(seq, _probe(seq, "+y"), n)
    formula = pulse.arctan_formula_gamma(rabi, det)
    files["trajectory.csv"] = traj.to_csv(["0", "1"])
    _png(files, cfg, "bloch_path.png", plotting.bloch_path, traj.bloch)
    return {
        "sequence": seq.to_dict(), "theta": theta, "gamma_closed_form": gamma,
        "geometric_phase": phases["geometric"], "dynamical_phase": phases["dynamical"],
        "phase_decomposition": phases,
        "formula_4arctan": formula, "formula_4arctan_wrapped": qcore.wrap_phase(formula),
        "formula_discrepancy": qcore.phase_distance(formula, phases["geometric"]),
        "formula_agrees": qcore.phase_distance(formula, phases["geometric"]) < 1e-6,
        "fidelity": rep.fidelity, "gate_report": rep.to_dict(),
    }


def run_one_bit_phase(cfg, files):
    seq = build_sequence(cfg, "one_bit_phase")
    n = cfg["output"]["samples_per_segment"]
    phi0 = cfg["one_bit"]["phi0"]
    tgt = gates.target("phase1q", gamma_tilde=2 * phi0)
    rep = gates.verify_gate(seq, tgt, "interaction", n)
    ps = rep.per_state_phases
    rel = qcore.wrap_phase(ps["0"] - ps["1"])
    phases, traj = _phase_block(seq, _probe(seq, "0"), n)
    files["trajectory.csv"] = traj.to_csv(["0", "1"])
    _png(files, cfg, "bloch_path.png", plotting.bloch_path, traj.bloch, "Phase gate, |0> probe")
    claimed_rel = qcore.wrap_phase(8 * phi0)
    return {
        "sequence": seq.to_dict(), "phi0": phi0, "per_state_phases": ps,
        "relative_phase": rel, "relative_phase_closed_form": qcore.wrap_phase(4 * phi0),
        "gamma_tilde_realised": 2 * phi0, "gamma_tilde_claimed": 4 * phi0,
        "relative_phase_claimed": claimed_rel,
        "claim_agrees": qcore.phase_distance(rel, claimed_rel) < 1e-6,
        "phase_decomposition": phases, "fidelity": rep.fidelity, "gate_report": rep.to_dict(),
    }


def run_two_bit_rotation(cfg, files):
    seq = build_sequence(cfg, "two_bit_rotation")
    n = cfg["output"]["samples_per_segment"]
    c, g = _two_bit(cfg, DEFAULT_ROTATION_OMEGAD)
    theta = math.atan2(2 * abs(g), c.omegaD_tilde)
    tgt = gates.target("rotation2q", Gamma=2 * theta - math.pi,
                       omegaD_tau=c.omegaD_tilde * seq.total_duration)
    rep = gates.verify_gate(seq, tgt, "interaction", n)
    phases, traj = _phase_block(seq, _probe(seq, "+y"), n)
    files["trajectory.csv"] = traj.to_csv(qcore.basis_labels(2))
    _png(files, cfg, "bloch_path.png", plotting.bloch_path, traj.bloch, "span{|00>,|11>} path")
    return {"sequence": seq.to_dict(), "g_jk": g, "theta": theta, "Gamma": 2 * theta - math.pi,
            "phase_decomposition": phases, "fidelity": rep.fidelity, "gate_report": rep.to_dict()}


def run_two_bit_phase(cfg, files):
    seq = build_sequence(cfg, "two_bit_phase")
    n = cfg["output"]["samples_per_segment"]
    Phi0 = cfg["two_bit"]["Phi0"]
    # -1 on span{|00>,|11>} is exp(i pi Sigma_z) there, not a global phase
    realised = qcore.wrap_phase(2 * Phi0 - math.pi)
    rep = gates.verify_gate(seq, gates.target("phase2q", Gamma_tilde=realised), "interaction", n)
    phases, traj = _phase_block(seq, _probe(seq, "0"), n)
    files["trajectory.csv"] = traj.to_csv(qcore.basis_labels(2))
    return {"sequence": seq.to_dict(), "Phi0": Phi0, "Gamma_tilde_realised": realised,
            "per_state_phases": rep.per_state_phases,
            "phase_decomposition": phases, "fidelity": rep.fidelity, "gate_report": rep.to_dict()}


def run_cps(cfg, files):
    ident = gates.verify_cps_identity(True)
    variant = gates.chosen_cps_variant(ident)
    c, g = _two_bit(cfg, omegaD=0.0)
    pipe = gates.cps_pipeline(variant, c, g, cfg["one_bit"]["rabi"])
    return {"identity": ident.to_dict(), "printed_fidelity": ident.extras["printed_fidelity"],
            "fidelity": pipe.report.fidelity, "pipeline": pipe.report.to_dict(),
            "steps": [{"description": d, "n_segments": len(s.segments), "duration": s.total_duration}
                      for d, s in pipe.steps]}


def run_validate_effective(cfg, files):
    v, ph = cfg["validate"], cfg["physics"]
    scene = two_ion_scene(ph["omega0"], (v["rabi"], v["rabi"]), v["delta1"], v["delta2"], ph["eta"],
                          ph["fock_cutoff"], ph["omega"], lamb_dicke=ph["lamb_dicke"])
    rep = gates.validate_effective_model(scene, v["duration"], v["dt"], v["record_every"], v["tune"])
    s = rep.series
    lines = ["t,p00,p11,leakage"] + [f"{t!r},{a!r},{b!r},{c!r}" for t, a, b, c in
                                     zip(map(float, s["t"]), map(float, s["p00"]),
                                         map(float, s["p11"]), map(float, s["leakage"]))]
    files["trajectory.csv"] = "\n".join(lines) + "\n"
    _png(files, cfg, "populations.png", plotting.populations, s["t"],
         {"P00": s["p00"], "P11": s["p11"], "P01+P10": s["leakage"]}, "Full two-ion model")
    out = rep.to_dict()
    out["within_10_percent"] = bool(rep.relative_error <= 0.10)
    out["leakage_ok"] = bool(rep.max_leakage <= 0.05)
    out["top_fock_ok"] = bool(rep.max_top_fock <= 1e-6)
    return out


def run_calibrate_gamma(cfg, files):
    c = cfg["calibration"]
    table = pulse.calibrate_gamma(np.linspace(c["theta_min"], c["theta_max"], c["n"]), c["subject"])
    files["calibration.csv"] = table.to_csv()
    _png(files, cfg, "calibration.png", plotting.calibration, table)
    closed = 2 * table.theta - math.pi
    return {"subject": c["subject"], "n": int(c["n"]), "reachable_gamma": table.reachable(),
            "max_deviation_from_2theta_minus_pi": float(np.max(np.abs(table.unwrapped - closed))),
            "max_deviation_from_4arctan": float(max(qcore.phase_distance(a, b) for a, b in
                                                     zip(table.gamma, table.formula_gamma)))}


def run_robustness(cfg, files):
    r = cfg["robustness"]
    seq = build_sequence(cfg, r["sequence"])
    base = gates.NoiseModel(r["sigma_phi"], r["sigma_omegaL"], r["sigma_rabi_rel"], r["mode"], cfg["seed"])
    rows = gates.robustness_sweep(seq, r["sigmas"], r["samples"], base, r["param"])
    files["sweep.csv"] = gates.sweep_to_csv(rows)
    _png(files, cfg, "robustness.png", plotting.robustness, rows)
    out = {"sequence": r["sequence"], "param": r["param"],
           "rows": [{"sigma": s, **st.to_dict()} for s, st in rows]}
    if len(rows) >= 2 and rows[0][0] > 0:
        i0, i1 = rows[0][1].infidelity_mean, rows[-1][1].infidelity_mean
        out["infidelity_ratio"] = i1 / i0 if i0 > 0 else None
        out["quadratic_ratio"] = (rows[-1][0] / rows[0][0]) ** 2
    return out


RUNNERS = {name: globals()[f"run_{name}"] for name in SCENARIOS}


# ---------------------------------------------------------------- explain


def explain(cfg, scenario, out=None):
    w = (out or sys.stdout).write
    if scenario in ("one_bit_rotation", "one_bit_phase", "two_bit_rotation", "two_bit_phase"):
        seq = build_sequence(cfg, scenario)
        realises = {
            "one_bit_rotation": "logic rotation exp(i gamma sigma_y), gamma = 2 theta - pi; "
                                "interaction-picture phases exp(-+i omega_D tau / 2)",
            "one_bit_phase": "resonant phase gate -exp(-i 2 phi0 sigma_z) (two pi-pulses, phases -phi0, +phi0)",
            "two_bit_rotation": "rotation of span{|00>,|11>} in the two-bit rotating frame",
            "two_bit_phase": "resonant two-bit phase shift on |00>, |11>",
        }[scenario]
        w(f"{scenario}: {realises}\n")
        w(f"{'#':>2} {'block':>5} {'duration':>14} {'field x':>11} {'field y':>11} {'field z':>11}  phases\n")
        for i, s in enumerate(seq.segments):
            ph = ", ".join(f"ion {d.target_ion}: phi={d.phi:+.6f}" for d in s.drives)
            w(f"{i:>2} {s.block:>5} {s.duration:>14.6f} {s.field.x:>11.6f} {s.field.y:>11.6f} "
              f"{s.field.z:>11.6f}  {ph}\n")
        w(f"total duration {seq.total_duration:.6f}\n")
    elif scenario == "cps":
        w("cps: conditional phase shift diag(1,1,1,-1)\n")
        w("printed product (written order, rightmost acts first):\n")
        names = ["exp(i pi/4)", "exp(i pi n_j.sigma_j/3)", "exp(i pi n_k.sigma_k/3)",
                 "exp(-i pi sigma^x_k/2)", "U_jk(pi/4)", "exp(-i pi sigma^y_j/2)", "U_jk(pi/4)",
                 "exp(-i pi sigma^x_j/2)"]
        w("  " + " . ".join(names) + "\n")
        ident = gates.verify_cps_identity(True)
        w(f"printed fidelity to CPS: {ident.extras['printed_fidelity']:.12f}\n")
        v = gates.chosen_cps_variant(ident)
        w(f"verified variant used by the pipeline: {v.describe()}\n")
        w("application order:\n")
        for k, (kind, arg, _) in enumerate(gates.application_order(v)):
            if kind == "global":
                continue
            w(f"  {k}: {'U_jk(%.6f)' % arg if kind == 'ujk' else 'single-qubit on ion %d' % arg}\n")
    elif scenario == "validate_effective":
        w("validate_effective: RK4 integration of the full two-ion + phonon model from |00,0>,\n"
          "fit of P11 to C sin^2(Omega t/2), comparison of Omega with 2 g_jk\n")
    elif scenario == "calibrate_gamma":
        w("calibrate_gamma: simulate the two-pulse rotation on a tilt grid, tabulate the\n"
          "geometric phase beside 4 arctan(2 rabi / detuning)\n")
    elif scenario == "robustness":
        w("robustness: Monte Carlo over per-segment Gaussian offsets of laser phase,\n"
          "frequency and coupling; fidelity to the ideal gate and phase statistics\n")
    else:
        raise ConfigError(f"unknown scenario {scenario!r}")


# ---------------------------------------------------------------- main


def _write_outputs(outdir, files):
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for name, content in files.items():
        p = outdir / name
        if isinstance(content, tuple) and content[0] == "plot":
            _, fn, args = content
            fn(p, *args)
        else:
            p.write_text(content)
        written.append(name)
    return written


def _parser():
    ap = argparse.ArgumentParser(prog="geoion", description="Geometric-phase trapped-ion gate simulator")
    sub = ap.add_subparsers(dest="cmd", required=True)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config entry, e.g. one_bit.theta=0.5")
    common.add_argument("--seed", type=int)
    common.add_argument("--samples", type=int)
    common.add_argument("--quiet", action="store_true")
    r = sub.add_parser("run", parents=[common], help="run a scenario")
    r.add_argument("scenario", nargs="?", help="overrides the config's scenario")
    r.add_argument("--out", default="out", help="output directory")
    e = sub.add_parser("explain", parents=[common], help="print the pulse schedule of a scenario")
    e.add_argument("scenario")
    sub.add_parser("schema", help="print the config JSON schema")
    return ap


def main(argv=None):
    args = _parser().parse_args(argv)
    if args.cmd == "schema":
        print(json.dumps(SCHEMA, indent=2))
        return 0
    try:
        overrides = list(args.set)
        if getattr(args, "scenario", None):
            if args.scenario not in SCENARIOS:
                raise ConfigError(f"unknown scenario {args.scenario!r}")
            overrides.append(f"scenario={json.dumps(args.scenario)}")
        cfg = load_config(args.config, overrides, args.seed, args.samples)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.cmd == "explain":
        try:
            explain(cfg, cfg["scenario"])
        except GeoIonError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        return 0

    h = config_hash(cfg)
    head = {"scenario": cfg["scenario"], "config_hash": h, "seed": cfg["seed"], "version": _version()}
    files = {}
    status = 0
    try:
        result = RUNNERS[cfg["scenario"]](cfg, files)
        report = {**head, "status": "ok", "result": result}
    except GeoIonError as exc:
        files = {}
        report = {**head, "status": "error", "error": {"type": type(exc).__name__, "message": str(exc),
                                                       "diagnostics": getattr(exc, "diagnostics", None)}}
        status = 1
    files = {"report.json": json.dumps(_jsonable(report), indent=2, sort_keys=True) + "\n", **files}
    outdir = Path(args.out)
    written = _write_outputs(outdir, files)
    manifest = {**head, "files": written, "config": cfg,
                "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat()}
    (outdir / "manifest.json").write_text(json.dumps(_jsonable(manifest), indent=2, sort_keys=True) + "\n")
    if not args.quiet:
        res = report.get("result", {})
        msg = f"{cfg['scenario']}: {report['status']}"
        if "fidelity" in res:
            msg += f", fidelity {res['fidelity']:.12f}"
        print(msg + f" -> {outdir}")
    return status


if __name__ == "__main__":
    sys.exit(main())
