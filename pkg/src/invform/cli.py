"""``invform`` command-line front end.

Requests are YAML (or JSON) documents. Polynomial coefficients are
ascending, angles are degrees at the boundary and radians inside::

    plant: {num: [10, 1], den: [0, 10, 2, 1], delay: 0}
    steady_state: {kind: error-constant, order: 1, value: 0.5}
    spec: {pm_wg: {pm: 45, omega_g: 3}}
    compensator: lead            # or {pid_sigma: 0.125}, {pid_ki: 5}, auto ...

Exit status: 0 success, 2 infeasible, 3 parse error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass
from typing import Any

import numpy as np
import yaml

from . import networks, pid
from .errors import DesignError, Infeasible, NumericFailure, ParseError
from .polyfreq import TransferFunction, log_grid, system_type, tf_eval
from .stability import MarginReport, measure_margins, spec_met
from .targets import (
    DesignTargets,
    SteadyStateSpec,
    classify,
    dc_gain_from_spec,
    ki_from_spec,
    pm_range_lag,
    pm_range_lead,
    pid_targets_constrained_ki,
    targets_at_gain_crossover,
    targets_at_phase_crossover,
)

EXIT_OK, EXIT_INFEASIBLE, EXIT_PARSE, EXIT_NUMERIC = 0, 2, 3, 4
CSV_HEADER = ("omega", "re", "im", "mag", "phase_deg")
DEFAULT_GRID = (1e-2, 1e2, 400, "log")
AUTO_SIGMA = 0.25

SPEC_FIELDS = {
    "pm_wg": ("pm", "omega_g"),
    "gm_wp": ("gm", "omega_p"),
    "pm_wg_gm": ("pm", "omega_g", "gm"),
}
PLAIN_COMPENSATORS = ("auto", "lead", "lag", "leadlag", "pid_gm", "pd", "pi")
VALUED_COMPENSATORS = ("pid_sigma", "pid_ki", "pid_fix_ti", "pid_fix_td")
ALLOWED = {
    "pm_wg": {"auto", "lead", "lag", "pid_sigma", "pid_ki", "pd", "pi", "pid_fix_ti", "pid_fix_td"},
    "gm_wp": {"auto", "lead", "lag", "pid_sigma", "pd", "pi", "pid_fix_ti", "pid_fix_td"},
    "pm_wg_gm": {"auto", "leadlag", "pid_gm"},
}


# -- request documents --------------------------------------------------------------------


@dataclass(frozen=True)
class Spec:
    """One specification variant; angles in radians."""

    kind: str
    pm: float | None = None
    omega_g: float | None = None
    gm: float | None = None
    omega_p: float | None = None


@dataclass(frozen=True)
class Compensator:
    kind: str = "auto"
    value: float | None = None


@dataclass(frozen=True)
class DesignRequest:
    plant: TransferFunction
    gain: float = 1.0
    steady_state: SteadyStateSpec | None = None
    spec: Spec | None = None
    compensator: Compensator = Compensator()
    controller: TransferFunction | None = None

    @property
    def scaled_plant(self) -> TransferFunction:
        return self.plant * self.gain if self.gain != 1.0 else self.plant


def _number(x: Any, path: str, positive: bool = False) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ParseError(f"expected a number, got {x!r}", path)
    x = float(x)
    if not math.isfinite(x):
        raise ParseError("number must be finite", path)
    if positive and not x > 0:
        raise ParseError(f"must be positive, got {x:g}", path)
    return x


def _mapping(x: Any, path: str) -> dict:
    if not isinstance(x, dict) or not x:
        raise ParseError("expected a non-empty mapping", path)
    return x


def _coeffs(x: Any, path: str) -> list[float]:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        x = [x]
    if not isinstance(x, list) or not x:
        raise ParseError("expected a non-empty list of coefficients (ascending powers)", path)
    return [_number(c, f"{path}[{i}]") for i, c in enumerate(x)]


def _tf(x: Any, path: str) -> TransferFunction:
    m = _mapping(x, path)
    unknown = set(m) - {"num", "den", "delay"}
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", path)
    for key in ("num", "den"):
        if key not in m:
            raise ParseError("missing field", f"{path}.{key}")
    delay = _number(m.get("delay", 0.0), f"{path}.delay")
    num, den = _coeffs(m["num"], f"{path}.num"), _coeffs(m["den"], f"{path}.den")
    try:
        return TransferFunction(num, den, delay)
    except ValueError as exc:
        raise ParseError(str(exc), path) from exc


def _spec(x: Any) -> Spec:
    m = _mapping(x, "spec")
    if len(m) != 1:
        raise ParseError(f"exactly one of {sorted(SPEC_FIELDS)} is required, got {sorted(m)}", "spec")
    (kind, body), = m.items()
    if kind not in SPEC_FIELDS:
        raise ParseError(f"unknown spec variant {kind!r}", "spec")
    body = _mapping(body, f"spec.{kind}")
    fields = SPEC_FIELDS[kind]
    unknown = set(body) - set(fields)
    if unknown:
        raise ParseError(f"unknown keys {sorted(unknown)}", f"spec.{kind}")
    vals = {}
    for f in fields:
        if f not in body:
            raise ParseError("missing field", f"spec.{kind}.{f}")
        vals[f] = _number(body[f], f"spec.{kind}.{f}", positive=f != "pm")
    if "pm" in vals:
        vals["pm"] = math.radians(vals["pm"])
    if "gm" in vals and not vals["gm"] > 1:
        raise ParseError(f"gain margin must exceed 1, got {vals['gm']:g}", f"spec.{kind}.gm")
    return Spec(kind, **vals)


def _compensator(x: Any) -> Compensator:
    if isinstance(x, str):
        if x in PLAIN_COMPENSATORS or x == "pid_ki":  # K_i may come from steady state
            return Compensator(x)
        if x in VALUED_COMPENSATORS:
            raise ParseError(f"{x} needs a value, e.g. {{{x}: 1.0}}", "compensator")
        raise ParseError(f"unknown compensator {x!r}", "compensator")
    m = _mapping(x, "compensator")
    if len(m) != 1:
        raise ParseError("expected a single compensator", "compensator")
    (kind, value), = m.items()
    if kind in PLAIN_COMPENSATORS and value is None:
        return Compensator(kind)
    if kind not in VALUED_COMPENSATORS:
        raise ParseError(f"unknown compensator {kind!r}", "compensator")
    if value is None and kind == "pid_ki":
        return Compensator(kind)
    return Compensator(kind, _number(value, f"compensator.{kind}", positive=True))


def _steady_state(x: Any) -> SteadyStateSpec:
    m = _mapping(x, "steady_state")
    for key in ("kind", "order", "value"):
        if key not in m:
            raise ParseError("missing field", f"steady_state.{key}")
    order = m["order"]
    if isinstance(order, bool) or not isinstance(order, int):
        raise ParseError(f"expected an integer, got {order!r}", "steady_state.order")
    try:
        return SteadyStateSpec(m["kind"], order, _number(m["value"], "steady_state.value"))
    except ValueError as exc:
        raise ParseError(str(exc), "steady_state") from exc


def parse_request(doc: Any, require_spec: bool = False) -> DesignRequest:
    """Validate a loaded document; errors name the offending field path."""
    m = _mapping(doc, "")
    unknown = set(m) - {"plant", "gain", "steady_state", "spec", "compensator", "controller"}
    if unknown:
        raise ParseError(f"unknown top-level keys {sorted(unknown)}")
    if "plant" not in m:
        raise ParseError("missing field", "plant")
    plant = _tf(m["plant"], "plant")
    gain = _number(m.get("gain", 1.0), "gain", positive=True)
    ss = _steady_state(m["steady_state"]) if m.get("steady_state") is not None else None
    if "spec" in m:
        spec = _spec(m["spec"])
    elif require_spec:
        raise ParseError("missing field", "spec")
    else:
        spec = None
    comp = _compensator(m["compensator"]) if m.get("compensator") is not None else Compensator()
    if spec is not None and comp.kind not in ALLOWED[spec.kind]:
        raise ParseError(f"compensator {comp.kind!r} cannot meet a {spec.kind} spec; "
                         f"choose one of {sorted(ALLOWED[spec.kind])}", "compensator")
    ctrl = _tf(m["controller"], "controller") if m.get("controller") is not None else None
    return DesignRequest(plant, gain, ss, spec, comp, ctrl)


def _tf_doc(tf: TransferFunction) -> dict:
    return {"num": list(tf.num.coeffs) or [0.0], "den": list(tf.den.coeffs), "delay": tf.delay}


def dump_request(req: DesignRequest) -> dict:
    """Canonical document; ``dump_request(parse_request(d))`` is a fixed point."""
    out: dict[str, Any] = {"plant": _tf_doc(req.plant), "gain": req.gain}
    if req.steady_state is not None:
        ss = req.steady_state
        out["steady_state"] = {"kind": ss.kind.value, "order": ss.order, "value": ss.value}
    if req.spec is not None:
        s = req.spec
        body = {}
        for f in SPEC_FIELDS[s.kind]:
            v = getattr(s, f)
            body[f] = math.degrees(v) if f == "pm" else v
        out["spec"] = {s.kind: body}
    c = req.compensator
    out["compensator"] = c.kind if c.value is None else {c.kind: c.value}
    if req.controller is not None:
        out["controller"] = _tf_doc(req.controller)
    return out


def load_document(text: str) -> Any:
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ParseError(f"not a valid YAML/JSON document: {exc}") from exc
    if doc is None:
        raise ParseError("empty document")
    return doc


# -- design ---------------------------------------------------------------------------------


def _deg(x: float) -> float:
    return math.degrees(x)


def _targets_doc(t: DesignTargets) -> dict:
    return {"M": t.M, "phi_deg": _deg(t.phi), "omega": t.omega}


def _margins_doc(r: MarginReport) -> dict:
    return {
        "omega_g_list": list(r.omega_g_list),
        "omega_p_list": list(r.omega_p_list),
        "pm_deg": None if r.pm is None else _deg(r.pm),
        "gm": r.gm,
        "pm_list_deg": [_deg(x) for x in r.pm_list],
        "gm_list": list(r.gm_list),
        "well_defined": r.well_defined,
        "notes": list(r.notes),
    }


def _params_doc(p) -> dict:
    d = {"kind": type(p).__name__}
    d.update(dataclasses.asdict(p))
    if isinstance(p, pid.PidParams):
        d["ki"] = p.ki
        d["zeros"] = [[z.real, z.imag] for z in pid.pid_zeros(p)]
    return d


@dataclass
class _Context:
    """Everything derived from a request before a compensator is chosen."""

    req: DesignRequest
    plant: TransferFunction
    K: float
    gbar: TransferFunction
    ki: float | None
    network_targets: DesignTargets | None
    pid_targets: DesignTargets | None


def _context(req: DesignRequest) -> _Context:
    plant = req.scaled_plant
    K, ki = 1.0, None
    ss = req.steady_state
    if ss is not None:
        n = system_type(plant)
        if ss.order == n:
            K = dc_gain_from_spec(plant, ss)
        elif ss.order == n + 1:
            ki = ki_from_spec(plant, ss)
        else:
            dc_gain_from_spec(plant, ss)  # raises TypeMismatch with the explanation
    if req.compensator.kind == "pid_ki" and req.compensator.value is not None:
        ki = req.compensator.value
    gbar = plant * K if K != 1.0 else plant
    s = req.spec
    if s.kind == "gm_wp":
        nt = targets_at_phase_crossover(gbar, s.omega_p, s.gm)
        pt = targets_at_phase_crossover(plant, s.omega_p, s.gm)
    else:
        nt = targets_at_gain_crossover(gbar, s.omega_g, s.pm)
        pt = targets_at_gain_crossover(plant, s.omega_g, s.pm)
    return _Context(req, plant, K, gbar, ki, nt, pt)


def _pm_range(ctx: _Context, kind: str) -> tuple[float, float] | None:
    s = ctx.req.spec
    if s.kind != "pm_wg" or kind not in ("lead", "lag"):
        return None
    fn = pm_range_lead if kind == "lead" else pm_range_lag
    try:
        return fn(ctx.gbar, s.omega_g)
    except Infeasible:
        return None


def _design_one(ctx: _Context, kind: str, value: float | None):
    """Run one design; returns (params, candidates)."""
    s = ctx.req.spec
    if kind == "lead":
        return networks.design_lead(ctx.network_targets, ctx.K), []
    if kind == "lag":
        return networks.design_lag(ctx.network_targets, ctx.K), []
    if kind == "pd":
        return pid.design_pd(ctx.pid_targets), []
    if kind == "pi":
        return pid.design_pi(ctx.pid_targets), []
    if kind == "pid_sigma":
        return pid.design_pid_sigma(ctx.pid_targets, value), []
    if kind == "pid_fix_ti":
        return pid.design_pid_fix_ti(ctx.pid_targets, value), []
    if kind == "pid_fix_td":
        return pid.design_pid_fix_td(ctx.pid_targets, value), []
    if kind == "pid_ki":
        if ctx.ki is None:
            raise ParseError("pid_ki needs a value or a steady-state spec one order above the plant type",
                             "compensator")
        t = pid_targets_constrained_ki(ctx.plant, s.omega_g, s.pm, ctx.ki)
        return pid.design_pid_ki(t, ctx.ki), []
    if kind == "leadlag":
        sols = networks.design_leadlag(ctx.gbar, s.omega_g, s.pm, s.gm, ctx.K)
        by_wp = {x.omega_p: x for x in sols}
        try:
            search = networks.leadlag_search(ctx.gbar, s.omega_g, s.pm, s.gm, ctx.K).candidates
        except DesignError:
            search = [x.candidate for x in sols]
        cands = []
        for c in search:
            row = {"omega_p": c.omega_p, "accepted": c.accepted, "reason": c.reason}
            if c.omega_p in by_wp:
                x = by_wp[c.omega_p]
                row["params"] = _params_doc(x.params)
                row["real_forms"] = [_params_doc(r) for r in x.real_forms]
            cands.append(row)
        return sols[0].params, cands
    if kind == "pid_gm":
        sols = pid.design_pid_gm(ctx.plant, s.omega_g, s.pm, s.gm)
        return sols[0][0], [{"omega_p": w, "params": _params_doc(p)} for p, w in sols]
    raise ParseError(f"unknown compensator {kind!r}", "compensator")


def _auto_order(ctx: _Context) -> list[tuple[str, float | None]]:
    s = ctx.req.spec
    if s.kind == "pm_wg_gm":
        return [("leadlag", None), ("pid_gm", None)]
    if ctx.ki is not None and s.kind == "pm_wg":
        return [("pid_ki", None)]
    return [("lead", None), ("lag", None), ("pd", None), ("pi", None), ("pid_sigma", AUTO_SIGMA)]


def design(req: DesignRequest) -> tuple[int, dict]:
    """Run a design request; returns ``(exit status, report document)``."""
    if req.spec is None:
        raise ParseError("missing field", "spec")
    ctx = _context(req)
    report: dict[str, Any] = {
        "request": dump_request(req),
        "K": ctx.K,
        "targets": _targets_doc(ctx.network_targets),
        "pid_targets": _targets_doc(ctx.pid_targets),
    }
    fr = classify(ctx.network_targets)
    report["feasibility"] = dataclasses.asdict(fr)
    if ctx.ki is not None:
        report["ki"] = ctx.ki

    c = req.compensator
    order = _auto_order(ctx) if c.kind == "auto" else [(c.kind, c.value)]
    failures = []
    for kind, value in order:
        try:
            params, candidates = _design_one(ctx, kind, value)
        except Infeasible as exc:
            msg = str(exc)
            rng = _pm_range(ctx, kind)
            if rng is not None:
                msg += (f"; achievable phase margin at omega_g = {req.spec.omega_g:g} is "
                        f"({_deg(rng[0]):.6g}, {_deg(rng[1]):.6g}) deg")
            failures.append({"compensator": kind, "reason": exc.reason, "message": msg})
            continue
        break
    else:
        report.update(status="infeasible", attempts=failures,
                      reason=failures[-1]["reason"], message=failures[-1]["message"])
        return EXIT_INFEASIBLE, report

    rng = _pm_range(ctx, kind)
    if rng is not None:
        report["achievable_pm_range_deg"] = [_deg(rng[0]), _deg(rng[1])]
    loop = pid.controller_tf(params) * ctx.plant
    verified = measure_margins(loop)
    s = req.spec
    ok = spec_met(verified, omega_g=s.omega_g, pm=s.pm, omega_p=s.omega_p, gm=s.gm)
    report.update(
        chosen=kind,
        parameters=_params_doc(params),
        controller=_tf_doc(pid.controller_tf(params)),
        candidates=candidates,
        verified=_margins_doc(verified),
        spec_met=ok,
        status="success" if ok else "verification-failed",
    )
    if failures:
        report["attempts"] = failures
    return (EXIT_OK if ok else EXIT_NUMERIC), report


# -- analysis commands ------------------------------------------------------------------


def _loop(req: DesignRequest) -> TransferFunction:
    g = req.scaled_plant
    return req.controller * g if req.controller is not None else g


def analyze(req: DesignRequest, omega_range: tuple[float, float] | None = None,
            samples: int | None = None) -> dict:
    kw = {} if samples is None else {"samples": samples}
    r = measure_margins(_loop(req), omega_range, **kw)
    return {"loop": _tf_doc(_loop(req)), "margins": _margins_doc(r)}


def frequency_grid(spec: tuple[float, float, int, str]) -> np.ndarray:
    lo, hi, n, scale = spec
    return log_grid(lo, hi, n) if scale == "log" else np.linspace(lo, hi, n)


def nyquist_rows(tf: TransferFunction, w: np.ndarray) -> list[tuple[float, ...]]:
    w = np.sort(np.asarray(w, dtype=float))
    g = np.asarray(tf_eval(tf, w), dtype=complex)
    return [(float(x), float(z.real), float(z.imag), float(abs(z)), math.degrees(float(np.angle(z))))
            for x, z in zip(w, g)]


def boundary_curves(n: int = 200) -> dict[str, list[tuple[float, float]]]:
    """Region boundaries in the compensator-response plane ``z = M exp(j phi)``.

    ``Re z = 1`` bounds the Lead side, ``|z - 1/2| = 1/2`` (i.e. ``M = cos phi``)
    the Lag side, the imaginary axis bounds every PID-family region and the
    unit circle separates amplification from attenuation.
    """
    t = np.linspace(-math.pi, math.pi, n)
    y = np.linspace(-3.0, 3.0, n)
    return {
        "unit_circle": [(math.cos(a), math.sin(a)) for a in t],
        "lead_line_re_1": [(1.0, float(v)) for v in y],
        "lag_circle": [(0.5 + 0.5 * math.cos(a), 0.5 * math.sin(a)) for a in t],
        "pid_imag_axis": [(0.0, float(v)) for v in y],
    }


def feasibility(req: DesignRequest, curves: int = 0) -> dict:
    if req.spec is None:
        raise ParseError("missing field", "spec")
    ctx = _context(req)
    out = {
        "targets": _targets_doc(ctx.network_targets),
        "point": [ctx.network_targets.point.real, ctx.network_targets.point.imag],
        "feasibility": dataclasses.asdict(classify(ctx.network_targets)),
        "pid_targets": _targets_doc(ctx.pid_targets),
        "pid_feasibility": dataclasses.asdict(classify(ctx.pid_targets)),
    }
    if curves:
        out["boundaries"] = {k: [list(p) for p in v] for k, v in boundary_curves(curves).items()}
    return out


# -- formatting -------------------------------------------------------------------------


def _round(x: Any, full: bool) -> Any:
    if isinstance(x, float):
        return x if full or not math.isfinite(x) else float(f"{x:.8g}")
    if isinstance(x, dict):
        return {k: _round(v, full) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_round(v, full) for v in x]
    return x


def _flatten(x: Any, prefix: str = ""):
    if isinstance(x, dict):
        for k, v in x.items():
            yield from _flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(x, list) and x and isinstance(x[0], (dict, list)):
        for i, v in enumerate(x):
            yield from _flatten(v, f"{prefix}[{i}]")
    else:
        yield prefix, x


def render(doc: dict, fmt: str, full: bool) -> str:
    doc = _round(doc, full)
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    return "".join(f"{k}: {json.dumps(v)}\n" for k, v in _flatten(doc))


def render_csv(rows, full: bool) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    fmt = repr if full else (lambda v: f"{v:.8g}")
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


# -- argparse -----------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def parse_grid(text: str) -> tuple[float, float, int, str]:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ParseError(f"grid must be lo:hi:n[:log|lin], got {text!r}", "--grid")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParseError(f"bad grid {text!r}: {exc}", "--grid") from exc
    scale = parts[3] if len(parts) == 4 else "log"
    if scale not in ("log", "lin"):
        raise ParseError(f"grid scale must be log or lin, got {scale!r}", "--grid")
    if not (n >= 1 and (hi > lo or (hi == lo and n == 1)) and (lo > 0 or scale == "lin") and lo >= 0):
        raise ParseError(f"grid needs 0 < lo < hi and n >= 1 (lo == hi only with n == 1), got {text!r}",
                         "--grid")
    return lo, hi, n, scale


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", default="-", help="request document (YAML/JSON); '-' for stdin")
    common.add_argument("--output", "-o", default="-", help="output path; '-' for stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--grid", help="frequency grid lo:hi:n[:log|lin]")
    common.add_argument("--full-precision", action="store_true", help="print floats with full precision")

    p = _Parser(prog="invform", description="Closed-form compensator design from frequency specs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("design", parents=[common], help="design a compensator and verify the margins")
    sub.add_parser("analyze", parents=[common], help="measure gain/phase crossovers and margins")
    sub.add_parser("nyquist", parents=[common], help="CSV samples of the frequency response")
    f = sub.add_parser("feasibility", parents=[common], help="classify the design targets")
    f.add_argument("--boundaries", type=int, default=0, metavar="N",
                   help="include N samples of each region boundary")
    f.add_argument("--boundaries-csv", metavar="PATH", help="also write boundary samples as CSV")
    return p


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read input: {exc}", "--input") from exc


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def run(args: argparse.Namespace) -> int:
    grid = parse_grid(args.grid) if args.grid else None
    req = parse_request(load_document(_read(args.input)), require_spec=args.command in ("design", "feasibility"))
    full = args.full_precision
    status = EXIT_OK
    if args.command == "design":
        status, doc = design(req)
        text = render(doc, args.format, full)
    elif args.command == "analyze":
        rng, n = (None, None) if grid is None else ((grid[0], grid[1]), grid[2])
        text = render(analyze(req, rng, n), args.format, full)
    elif args.command == "nyquist":
        text = render_csv(nyquist_rows(_loop(req), frequency_grid(grid or DEFAULT_GRID)), full)
    else:
        n = args.boundaries or (200 if args.boundaries_csv else 0)
        doc = feasibility(req, n)
        if args.boundaries_csv:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(("curve", "re", "im"))
            for name, pts in doc["boundaries"].items():
                for x, y in pts:
                    w.writerow((name, f"{x:.8g}", f"{y:.8g}"))
            _write(args.boundaries_csv, buf.getvalue())
        text = render(doc, args.format, full)
    _write(args.output, text)
    return status


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Infeasible as exc:
        print(f"infeasible ({exc.reason}): {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except DesignError as exc:
        print(f"infeasible ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
