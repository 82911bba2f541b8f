"""Command-line interface: dataset sweeps, single-state reports and self-checks.

Exit codes: 0 success, 1 validation failure, 2 configuration error,
3 numerical failure.
"""
import argparse
from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import asdict, dataclass, field
import datetime
import io
import json
import math
import sys

from . import __version__, fermi_gas, measures, numerics, spin_state, thermal_shifts, validation
from ._backend import NAME as BACKEND
from .errors import DomainError, EgspinError, NumericalError
from .fermi_gas import Dimension

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

TEMPERATURE_PRESETS = (0.0, 0.15, 0.2)

PROFILE_COLUMNS = [
    "kF_r", "T_over_TF", "mu_over_eF", "f", "f2", "p", "fidelity", "concurrence",
    "eof", "ere", "mutual_info", "classical_corr", "g_parallel", "g_antiparallel",
    "entangled", "bell_violating",
]
SHIFT_DELTAS = [
    "delta_f_numeric", "delta_f_sommerfeld", "delta_c_numeric",
    "delta_c_first_order", "delta_ere_numeric",
]
SURFACE_COLUMNS = ["kF_r", "T_over_TF", "delta_f"]
MU_COLUMNS = ["T_over_TF", "mu_over_eF", "sommerfeld_mu"]


class ConfigError(EgspinError, ValueError):
    """Invalid command-line configuration."""


@dataclass
class SweepConfig:
    x_min: float = 0.0
    x_max: float = 12.0
    x_steps: int = 121
    t_values: list = field(default_factory=lambda: [0.0])
    dimension: Dimension = Dimension.THREE
    output_format: str = "csv"
    output_path: str = None

    def validate(self):
        if not (math.isfinite(self.x_min) and math.isfinite(self.x_max)):
            raise ConfigError("--x-min/--x-max must be finite")
        if self.x_min < 0:
            raise ConfigError(f"--x-min must be >= 0 (got {self.x_min})")
        if self.x_max < self.x_min:
            raise ConfigError(f"--x-max ({self.x_max}) must be >= --x-min ({self.x_min})")
        if self.x_steps < 2:
            raise ConfigError(f"--x-steps must be >= 2 (got {self.x_steps})")
        if any(not (t >= 0 and math.isfinite(t)) for t in self.t_values):
            raise ConfigError(f"--temps must all be finite and >= 0 (got {self.t_values})")
        if self.dimension == Dimension.TWO and any(t > 0 for t in self.t_values):
            raise ConfigError("--dim 2 only supports --temps 0 (finite T is three-dimensional)")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"--format must be csv or json (got {self.output_format})")
        return self

    def x_grid(self):
        n = self.x_steps - 1
        h = (self.x_max - self.x_min) / n
        return [self.x_min + i * h for i in range(n)] + [self.x_max]


def _map(fn, items, jobs):
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def _thermal(t):
    return fermi_gas.solve_chemical_potential(t)


def cmd_profile(config, jobs=1):
    """Pair function and all measures along x, one block per temperature."""
    config.validate()
    rows = []
    for t in config.t_values:
        thermal = _thermal(t)

        def row(x, thermal=thermal):
            if thermal.t_rel == 0:
                f = fermi_gas.f_zero_T(x, config.dimension).f
            else:
                f = fermi_gas.f_finite_T(x, thermal).f
            m = measures.measure_set(f * f)
            return {
                "kF_r": x,
                "T_over_TF": thermal.t_rel,
                "mu_over_eF": thermal.mu_rel,
                "f": f,
                "f2": m.f2,
                "p": m.p,
                "fidelity": m.fidelity,
                "concurrence": m.concurrence,
                "eof": m.eof,
                "ere": m.e_re,
                "mutual_info": m.mutual_info,
                "classical_corr": m.classical_corr,
                "g_parallel": m.g_parallel,
                "g_antiparallel": m.g_antiparallel,
                "entangled": m.entangled,
                "bell_violating": m.bell_violating,
            }

        rows.extend(_map(row, config.x_grid(), jobs))
    return rows


def shift_columns(include_sommerfeld=True):
    deltas = [c for c in SHIFT_DELTAS if include_sommerfeld or c != "delta_f_sommerfeld"]
    return ["T_over_TF"] + deltas + [f"{c}_over_t2" for c in deltas]


def cmd_shift(x, t_grid, include_sommerfeld=True, jobs=1):
    """Thermal shifts at fixed x: numeric, Sommerfeld and first-order columns."""
    if not x > 0:
        raise ConfigError(f"--x must be > 0 (got {x})")
    if any(not t >= 0 for t in t_grid):
        raise ConfigError("--temps must all be >= 0")
    f0 = fermi_gas.f_zero_T(x).f
    slope = thermal_shifts.concurrence_slope(f0)

    def row(t):
        rec = thermal_shifts.shift_record(x, t)
        out = {
            "T_over_TF": t,
            "delta_f_numeric": rec.delta_f,
            "delta_f_sommerfeld": fermi_gas.delta_f_sommerfeld(x, t),
            "delta_c_numeric": rec.delta_c,
            "delta_c_first_order": slope * rec.delta_f,
            "delta_ere_numeric": rec.delta_ere,
        }
        if not include_sommerfeld:
            del out["delta_f_sommerfeld"]
        for key in list(out)[1:]:
            out[f"{key}_over_t2"] = out[key] / (t * t) if t > 0 else math.nan
        return out

    return _map(row, t_grid, jobs)


def cmd_surface(x_grid, t_grid, jobs=1):
    """Long-format (x, t, delta_f) rows for a surface plot."""
    if any(not x >= 0 for x in x_grid) or any(not t >= 0 for t in t_grid):
        raise ConfigError("x and T values must be >= 0")
    rows = []
    for t in t_grid:
        thermal = _thermal(t)
        deltas = _map(lambda x: thermal_shifts.delta_f_numeric(x, t, thermal), x_grid, jobs)
        rows.extend({"kF_r": x, "T_over_TF": t, "delta_f": d} for x, d in zip(x_grid, deltas))
    return rows


def cmd_mu(t_grid):
    """Solved chemical potential next to its leading Sommerfeld value."""
    if any(not t >= 0 for t in t_grid):
        raise ConfigError("--temps must all be >= 0")
    return [
        {
            "T_over_TF": t,
            "mu_over_eF": _thermal(t).mu_rel,
            "sommerfeld_mu": fermi_gas.sommerfeld_mu(t),
        }
        for t in t_grid
    ]


def cmd_state(f2):
    """Density matrix, spectrum, Werner parameters and measures at one f^2."""
    try:
        params = spin_state.werner_from_f2(f2)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None
    rho = spin_state.density_matrix(params)
    w, _ = numerics.eigen_sym4(rho.m)
    report = measures.measure_set(params.f2).as_dict()
    report.update(
        matrix=rho.m.tolist(),
        eigenvalues=w.tolist(),
        ppt_min_eigenvalue=spin_state.min_pt_eigenvalue(rho),
    )
    return report


def cmd_validate(quick=False, stream=None):
    stream = stream or sys.stdout
    results = validation.run_checks(quick)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status}  {r.name:<28} {r.detail}  [{r.seconds:.2f}s]", file=stream)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=stream)
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


def _fmt(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def render(rows, columns, fmt, meta=None):
    """Serialize rows as CSV (with ``#`` metadata lines) or a JSON array."""
    if fmt == "json":
        records = [{c: _json_value(r[c]) for c in columns} for r in rows]
        return json.dumps(records, indent=1) + "\n"
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_fmt(r[c]) for c in columns])
    return buf.getvalue()


def render_state(report):
    lines = ["two-spin density matrix (basis uu, ud, du, dd):"]
    for row in report["matrix"]:
        lines.append("  " + "  ".join(f"{v: .12f}" for v in row))
    lines.append("eigenvalues: " + ", ".join(f"{v:.12g}" for v in report["eigenvalues"]))
    lines.append(f"werner: f2={report['f2']!r} p={report['p']!r} F={report['fidelity']!r}")
    for key in ("concurrence", "eof", "e_re", "mutual_info", "classical_corr",
                "g_parallel", "g_antiparallel"):
        lines.append(f"{key}: {report[key]!r}")
    lines.append(f"ppt_min_eigenvalue: {report['ppt_min_eigenvalue']!r}")
    lines.append(f"entangled: {_fmt(report['entangled'])}")
    lines.append(f"bell_violating: {_fmt(report['bell_violating'])}")
    return "\n".join(lines) + "\n"


def _temps(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list of numbers, got {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--x-min", type=float, default=0.0)
    common.add_argument("--x-max", type=float, default=12.0)
    common.add_argument("--x-steps", type=int, default=121)
    common.add_argument("--temps", type=_temps, default=None,
                        help="comma-separated T/T_F values (presets: 0, 0.15, 0.2)")
    common.add_argument("--dim", type=int, choices=(2, 3), default=3)
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--reproducible", action="store_true",
                        help="omit the timestamp so identical runs give identical bytes")
    common.add_argument("--quick", action="store_true")
    common.add_argument("--jobs", type=int, default=1, help="threads for grid sweeps")

    parser = argparse.ArgumentParser(prog="egspin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"egspin {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("profile", parents=[common], help="f and all measures versus k_F r")
    shift = sub.add_parser("shift", parents=[common], help="thermal shifts at fixed k_F r")
    shift.add_argument("--x", type=float, default=1.0)
    shift.add_argument("--sommerfeld", action=argparse.BooleanOptionalAction, default=True)
    sub.add_parser("surface", parents=[common], help="delta f over a (k_F r, T/T_F) grid")
    state = sub.add_parser("state", parents=[common], help="report for one value of f^2")
    state.add_argument("--f2", type=float, required=True)
    sub.add_parser("mu", parents=[common], help="chemical potential versus T/T_F")
    sub.add_parser("validate", parents=[common], help="run the self-check suite")
    return parser


DEFAULT_TEMPS = {
    "profile": [0.0],
    "shift": [0.0, 0.01, 0.02, 0.03, 0.04, 0.05],
    "surface": [0.0, 0.05, 0.1, 0.15, 0.2],
    "mu": [0.0, 0.05, 0.1, 0.15, 0.2, 0.5],
}


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _metadata(args, config):
    meta = {
        "generator": f"egspin {__version__} (kernels: {BACKEND})",
        "command": args.command,
        "config": json.dumps(config, sort_keys=True),
    }
    if not args.reproducible:
        meta["generated"] = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
    return meta


def run(args):
    if args.command == "validate":
        return cmd_validate(args.quick)

    temps = args.temps if args.temps is not None else DEFAULT_TEMPS.get(args.command, [0.0])
    fmt = args.format or "csv"
    if args.jobs < 1:
        raise ConfigError("--jobs must be >= 1")

    if args.command == "state":
        report = cmd_state(args.f2)
        text = json.dumps(report, indent=1) + "\n" if args.format == "json" else render_state(report)
        _write(text, args.out)
        return EXIT_OK

    config = SweepConfig(args.x_min, args.x_max, args.x_steps, temps, Dimension(args.dim),
                         fmt, args.out).validate()
    echo = asdict(config)
    echo["dimension"] = int(config.dimension)
    echo.pop("output_path")
    if args.command == "profile":
        rows, columns = cmd_profile(config, args.jobs), PROFILE_COLUMNS
    elif args.command == "shift":
        echo = {"x": args.x, "t_values": temps, "sommerfeld": args.sommerfeld}
        rows = cmd_shift(args.x, temps, args.sommerfeld, args.jobs)
        columns = shift_columns(args.sommerfeld)
    elif args.command == "surface":
        rows, columns = cmd_surface(config.x_grid(), temps, args.jobs), SURFACE_COLUMNS
    elif args.command == "mu":
        echo = {"t_values": temps}
        rows, columns = cmd_mu(temps), MU_COLUMNS
    else:  # pragma: no cover - argparse restricts the choices
        raise ConfigError(f"unknown command {args.command}")
    _write(render(rows, columns, fmt, _metadata(args, echo)), args.out)
    return EXIT_OK


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except ConfigError as exc:
        print(f"egspin: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"egspin: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"egspin: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"egspin: cannot write output: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
