"""Command-line front end.

    qasym <command> [--spec PATH | --preset NAME] [--t LIST | --t-grid START:STOP:COUNT[:log]]
          [--order-L N] [--order-M N] [--rel-tol X] [--out PATH]

Commands: eval (direct summation), integral (adaptive quadrature), asym
(asymptotic expansion), verify (all three, cross-validated, CSV), preset
(list built-ins or dump one as a spec file).

eval/integral/asym emit a single JSON object; verify emits CSV with one row
per t.  Numbers are printed with 17 significant digits so output is
byte-identical across runs and round-trips binary64 exactly.

Exit status: 0 ok, 1 usage/parse error, 2 hypothesis failure, 3 numeric
failure (including a verify run whose deviations fail to shrink).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import HypothesisError, QasymError, SpecError
from .expansion import DEFAULT_L, DEFAULT_M, asym_from_parts
from .logvalue import LogValue
from .presets import PRESETS, Preset, get_preset
from .qseries import (T_MAX, ProductSpec, QuadTerm, SeriesSpec, normalize,
                      prefactor_exact, series_sum)
from .quad import integral as quad_integral

CSV_HEADER = "t,log_sum,log_integral,log_asym,ratio_sum_integral,ratio_sum_asym"


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def load_spec(path: str) -> ProductSpec | SeriesSpec:
    """Parse a JSON spec file.

    Schema: an object with numeric "A", "B", "v" and either an array
    "quads" of {"a","b","c","d","S"} (raw finite-symbol form) or an array
    "terms" of {"alpha","beta","gamma","S"} (already-normalized form);
    exactly one of the two.  Every invariant is validated; violations name
    the offending entry and inequality.
    """
    try:
        with open(path) as fh:
            raw = json.load(fh)
    except OSError as e:
        raise SpecError(f"cannot read spec file {path!r}: {e}") from None
    except json.JSONDecodeError as e:
        raise SpecError(f"{path}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    if not isinstance(raw, dict):
        raise SpecError(f"{path}: top level must be an object")
    for key in ("A", "B", "v"):
        if key not in raw:
            raise SpecError(f"{path}: missing required field {key!r}")
        if not isinstance(raw[key], (int, float)):
            raise SpecError(f"{path}: field {key!r} must be numeric")
    has_quads = "quads" in raw
    has_terms = "terms" in raw
    if has_quads == has_terms:
        raise SpecError(f"{path}: exactly one of 'quads' or 'terms' is required")
    A, B, v = float(raw["A"]), float(raw["B"]), float(raw["v"])
    try:
        if has_quads:
            quads = []
            for i, q in enumerate(raw["quads"]):
                missing = [k for k in ("a", "b", "c", "d", "S") if k not in q]
                if missing:
                    raise SpecError(f"quad {i}: missing {missing}")
                try:
                    quads.append(QuadTerm(float(q["a"]), float(q["b"]),
                                          float(q["c"]), float(q["d"]),
                                          float(q["S"])))
                except SpecError as e:
                    raise SpecError(f"quad {i}: {e}") from None
            return ProductSpec(A, B, v, tuple(quads))
        terms = []
        for i, p in enumerate(raw["terms"]):
            missing = [k for k in ("alpha", "beta", "gamma", "S") if k not in p]
            if missing:
                raise SpecError(f"term {i}: missing {missing}")
            terms.append((float(p["alpha"]), float(p["beta"]),
                          float(p["gamma"]), float(p["S"])))
        return SeriesSpec.make(A, B, v, terms)
    except SpecError as e:
        raise SpecError(f"{path}: {e}") from None


@dataclass
class RunConfig:
    command: str
    spec_source: str
    series: SeriesSpec
    prefactor: tuple[QuadTerm, ...]
    t_grid: list[float]
    order_L: int = DEFAULT_L
    order_M: int = DEFAULT_M
    rel_tol: float = 1e-10
    output: Optional[str] = None
    preset: Optional[Preset] = None

    def extra_log(self, t: float) -> float:
        return self.preset.extra_log(t) if self.preset is not None else 0.0


def _parse_t_grid(args: argparse.Namespace) -> list[float]:
    if args.t:
        try:
            grid = [float(s) for s in args.t.split(",") if s.strip()]
        except ValueError:
            raise SpecError(f"--t expects comma-separated floats, got {args.t!r}")
    elif args.t_grid:
        parts = args.t_grid.split(":")
        if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
            raise SpecError("--t-grid expects START:STOP:COUNT[:log]")
        try:
            start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
        except ValueError:
            raise SpecError(f"bad --t-grid {args.t_grid!r}")
        if count < 1:
            raise SpecError("--t-grid COUNT must be >= 1")
        if count == 1:
            grid = [start]
        elif len(parts) == 4:
            ratio = (stop / start) ** (1.0 / (count - 1))
            grid = [start * ratio ** i for i in range(count)]
        else:
            step = (stop - start) / (count - 1)
            grid = [start + step * i for i in range(count)]
    else:
        grid = [0.1, 0.05, 0.025]
    if any(not 0.0 < t < T_MAX for t in grid):
        raise SpecError(f"every t must lie in (0, {T_MAX})")
    return sorted(grid, reverse=True)


def _make_config(args: argparse.Namespace) -> RunConfig:
    if bool(args.spec) == bool(args.preset):
        raise SpecError("exactly one of --spec or --preset is required")
    preset = None
    if args.preset:
        preset = get_preset(args.preset)
        series, pref = preset.series, preset.prefactor
        source = f"preset:{args.preset}"
    else:
        loaded = load_spec(args.spec)
        if isinstance(loaded, ProductSpec):
            series, prefspec = normalize(loaded)
            pref = prefspec.quads
        else:
            series, pref = loaded, ()
        source = args.spec
    return RunConfig(command=args.command, spec_source=source, series=series,
                     prefactor=pref, t_grid=_parse_t_grid(args),
                     order_L=args.order_L, order_M=args.order_M,
                     rel_tol=args.rel_tol, output=args.out, preset=preset)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_result(cfg: RunConfig, rows: list[dict], branch: str = "",
                 diagnostics: Optional[dict] = None) -> str:
    doc = {
        "command": cfg.command,
        "inputs": {
            "spec_source": cfg.spec_source,
            "t_grid": cfg.t_grid,
            "order_L": cfg.order_L,
            "order_M": cfg.order_M,
            "rel_tol": cfg.rel_tol,
        },
        "results": {
            "log_value": [r["log_value"] for r in rows],
            "sign": [r["sign"] for r in rows],
            "branch": branch,
            "diagnostics": diagnostics or {},
            "rows": rows,
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _total_sum(cfg: RunConfig, t: float) -> LogValue:
    total = series_sum(cfg.series, t) * prefactor_exact(cfg.prefactor, t)
    return total * LogValue.from_log(cfg.extra_log(t))


def _total_integral(cfg: RunConfig, t: float) -> tuple[LogValue, dict]:
    res = quad_integral(cfg.series, t, cfg.rel_tol)
    total = res.value * prefactor_exact(cfg.prefactor, t)
    total = total * LogValue.from_log(cfg.extra_log(t))
    return total, {"subdivisions": res.subdivisions,
                   "abs_error_log": res.abs_error_log}


def run_eval(cfg: RunConfig) -> int:
    rows = []
    for t in cfg.t_grid:
        lv = _total_sum(cfg, t)
        rows.append({"t": t, "log_value": lv.log_abs, "sign": lv.sign})
    _emit(_json_result(cfg, rows, branch="series_sum"), cfg.output)
    return 0


def run_integral(cfg: RunConfig) -> int:
    rows = []
    diag: dict = {}
    for t in cfg.t_grid:
        lv, d = _total_integral(cfg, t)
        rows.append({"t": t, "log_value": lv.log_abs, "sign": lv.sign})
        diag[f"t={_fmt(t)}"] = d
    _emit(_json_result(cfg, rows, branch="integral", diagnostics=diag),
          cfg.output)
    return 0


def run_asym(cfg: RunConfig) -> int:
    rows = []
    branch = ""
    for t in cfg.t_grid:
        r = asym_from_parts(cfg.series, cfg.prefactor, t, cfg.order_L,
                            cfg.order_M, extra_log=cfg.extra_log(t))
        branch = r.branch
        rows.append({"t": t, "log_value": r.total.log_abs, "sign": r.total.sign,
                     "rate": r.rate, "t_power": r.t_power,
                     "log_constant": r.log_constant,
                     "correction_factor": r.correction_factor})
    _emit(_json_result(cfg, rows, branch=branch), cfg.output)
    return 0


def run_verify(cfg: RunConfig) -> int:
    """One CSV row per t; exit 0 iff the sum/integral deviations shrink
    strictly along the (descending) grid.  A deviation of exact 0.0 means
    the two values agree to every bit; once saturated there, staying at
    0.0 counts as shrunk."""
    lines = [CSV_HEADER]
    devs = []
    for t in cfg.t_grid:
        try:
            s = _total_sum(cfg, t)
            i, _ = _total_integral(cfg, t)
            a = asym_from_parts(cfg.series, cfg.prefactor, t, cfg.order_L,
                                cfg.order_M, extra_log=cfg.extra_log(t)).total
        except HypothesisError:
            raise
        except QasymError as e:
            raise QasymError(f"row t={_fmt(t)}: {e}") from e
        r_si = math.exp(s.log_abs - i.log_abs)
        r_sa = math.exp(s.log_abs - a.log_abs)
        devs.append(abs(r_si - 1.0))
        lines.append(",".join([_fmt(t), _fmt(s.log_abs), _fmt(i.log_abs),
                               _fmt(a.log_abs), _fmt(r_si), _fmt(r_sa)]))
    _emit("\n".join(lines) + "\n", cfg.output)
    shrinking = all(devs[k + 1] < devs[k]
                    or (devs[k + 1] == 0.0 and devs[k] == 0.0)
                    for k in range(len(devs) - 1))
    if not shrinking:
        print("verify: sum/integral deviations are not strictly shrinking: "
              + ", ".join(_fmt(d) for d in devs), file=sys.stderr)
        return 3
    return 0


def run_preset_cmd(args: argparse.Namespace) -> int:
    if not args.preset:
        sys.stdout.write("\n".join(sorted(PRESETS)) + "\n")
        return 0
    p = get_preset(args.preset)
    doc = {
        "name": p.name,
        "A": p.series.A, "B": p.series.B, "v": p.series.v,
        "terms": [{"alpha": q.alpha, "beta": q.beta, "gamma": q.gamma, "S": q.S}
                  for q in p.series.terms],
        "prefactor_quads": [{"a": q.a, "b": q.b, "c": q.c, "d": q.d, "S": q.S}
                            for q in p.prefactor],
        "reference": {"rate": p.reference.rate, "t_power": p.reference.t_power,
                      "log_constant": p.reference.log_constant,
                      "notes": p.reference.notes},
        "notes": p.notes,
    }
    _emit(json.dumps(doc, indent=2, sort_keys=True) + "\n", args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qasym",
        description="Evaluate Eulerian q-series near q -> 1- and cross-validate "
                    "direct summation, numerical integration and asymptotics.")
    ap.add_argument("command", choices=["eval", "integral", "asym", "verify",
                                        "preset"])
    ap.add_argument("--spec", help="JSON spec file")
    ap.add_argument("--preset", help="built-in series name (see 'qasym preset')")
    ap.add_argument("--t", help="comma-separated t values")
    ap.add_argument("--t-grid", help="START:STOP:COUNT[:log]")
    ap.add_argument("--order-L", type=int, default=DEFAULT_L,
                    help="correction order of the peak expansion")
    ap.add_argument("--order-M", type=int, default=DEFAULT_M,
                    help="correction order of the prefactor expansion")
    ap.add_argument("--rel-tol", type=float, default=1e-10,
                    help="quadrature relative tolerance")
    ap.add_argument("--out", help="write output to this file instead of stdout")
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code == 0 else 1
    try:
        if args.command == "preset":
            return run_preset_cmd(args)
        cfg = _make_config(args)
        if args.command == "eval":
            return run_eval(cfg)
        if args.command == "integral":
            return run_integral(cfg)
        if args.command == "asym":
            return run_asym(cfg)
        return run_verify(cfg)
    except SpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except HypothesisError as e:
        print(f"hypothesis failure: {e}", file=sys.stderr)
        return 2
    except QasymError as e:
        print(f"numeric failure: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
