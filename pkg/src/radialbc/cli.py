"""Command-line interface: ``radialbc <command> [options]``.

Every command writes one report to stdout (JSON by default, or CSV) and
exits 0 on success, 2 when a requested bound state does not exist, and 1 on
any other error, with a single diagnostic line on stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass

from . import delta, oracle
from .eigensolver import TOL_E, sae_scan, solve_state, spectrum
from .errors import ExtrapolationError, NoSuchStateError, RadialError
from .integrator import LOG_UNIFORM, UNIFORM, RadialGrid, RadialProblem
from .origin import Channel, L2Only, U0Strict, indicial
from .potentials import (Coulomb, Harmonic, InverseSquare, load_tabulated,
                         origin_coefficients, sum_of)

SCHEMA = 1


class CliError(RadialError):
    pass


# --- parsing -----------------------------------------------------------------

def _kv(body: str, allowed: set, term: str) -> dict:
    out = {}
    for item in filter(None, body.split(",")):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in allowed:
            raise CliError(f"bad parameter {item!r} for {term!r}; "
                           f"expected one of {sorted(allowed)}")
        try:
            out[key] = float(val)
        except ValueError:
            raise CliError(f"non-numeric value in {item!r}") from None
    return out


def parse_potential(text: str, mass: float = 1.0):
    """``coulomb:Z=1``, ``harmonic:omega=1``, ``invsq:c=0.5`` (c = 2 m alpha),
    ``invsq:alpha=0.25`` or ``file:PATH``, joined with ``+``."""
    terms = []
    for part in re.split(r"\+(?=[A-Za-z_]+:)", text.strip()):
        name, _, body = part.partition(":")
        name = name.strip().lower()
        if name == "file":
            if not body:
                raise CliError("file: needs a path")
            with open(body, "rb") as fh:
                terms.append(load_tabulated(fh))
            continue
        if name == "coulomb":
            kv = _kv(body, {"Z"}, part)
            terms.append(Coulomb(kv.get("Z", 1.0)))
        elif name == "harmonic":
            kv = _kv(body, {"omega"}, part)
            terms.append(Harmonic(kv.get("omega", 1.0), mass))
        elif name == "invsq":
            kv = _kv(body, {"c", "alpha"}, part)
            if len(kv) != 1:
                raise CliError("invsq needs exactly one of c= or alpha=")
            alpha = kv["alpha"] if "alpha" in kv else kv["c"] / (2.0 * mass)
            terms.append(InverseSquare(alpha))
        else:
            raise CliError(f"unknown potential term {name!r}")
    return terms[0] if len(terms) == 1 else sum_of(*terms)


def parse_mode(text: str):
    name, _, body = text.strip().partition(":")
    if name == "u0" and not body:
        return U0Strict()
    if name == "l2":
        kv = _kv(body, {"theta", "r0"}, text)
        return L2Only(kv.get("theta", 0.0), kv.get("r0", 1.0))
    raise CliError(f"unknown mode {text!r}; use u0 or l2:theta=T,r0=R")


@dataclass
class RunConfig:
    potential: str
    l: int = 0
    mass: float = 1.0
    grid: str = "log"
    points: int = 20000
    r_min: float = 1e-6
    r_max: float = 80.0
    mode: str = "u0"
    tol_e: float = TOL_E
    fmt: str = "json"

    def channel(self) -> Channel:
        return Channel(self.l, self.mass)

    def radial_grid(self) -> RadialGrid:
        scheme = {"log": LOG_UNIFORM, "uniform": UNIFORM}[self.grid]
        return RadialGrid(scheme, self.r_min, self.r_max, self.points)

    def problem(self) -> RadialProblem:
        return RadialProblem(self.channel(), parse_potential(self.potential, self.mass),
                             parse_mode(self.mode), self.radial_grid())

    def describe(self) -> dict:
        return {"potential": self.potential, "l": self.l, "mass": self.mass,
                "mode": self.mode,
                "grid": {"scheme": self.grid, "n": self.points,
                         "r_min": self.r_min, "r_max": self.r_max}}


# --- output ------------------------------------------------------------------

def _fmt_float(x: float) -> str:
    return format(x, ".17g") if math.isfinite(x) else "null"


def to_json(obj) -> str:
    """Deterministic JSON: insertion order kept, floats at 17 significant digits."""
    if obj is None or isinstance(obj, bool):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {to_json(v)}"
                               for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(to_json(v) for v in obj) + "]"
    if hasattr(obj, "item"):  # numpy scalar
        return to_json(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def to_csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(columns)
    for row in rows:
        out = []
        for c in columns:
            v = row.get(c)
            if hasattr(v, "item"):
                v = v.item()
            if isinstance(v, bool):
                v = "true" if v else "false"
            elif isinstance(v, float):
                v = format(v, ".17g") if math.isfinite(v) else ""
            elif v is None:
                v = ""
            out.append(v)
        writer.writerow(out)
    return buf.getvalue()


@dataclass
class Report:
    payload: dict
    columns: list
    rows: list
    code: int = 0

    def render(self, fmt: str) -> str:
        if fmt == "csv":
            return to_csv(self.columns, self.rows)
        return to_json({"schema": SCHEMA, **self.payload}) + "\n"


# --- commands ----------------------------------------------------------------

def _delta_fields(solution) -> dict:
    try:
        v = delta.check_compatibility(solution)
    except ExtrapolationError:
        return {"compatible": None, "defect": None, "u0": None,
                "origin": "no_power_law"}
    return {"compatible": v.compatible, "defect": v.finite_defect,
            "u0": v.u0 if math.isfinite(v.u0) else None, "origin": v.status}


def _state_row(res) -> dict:
    return {"n": res.n_radial, "E": float(res.E), "nodes": res.solution.nodes,
            "mismatch": float(res.mismatch_residual),
            "origin_slope": float(res.origin_slope), **_delta_fields(res.solution)}


STATE_COLUMNS = ["n", "E", "nodes", "mismatch", "origin_slope", "compatible",
                 "defect", "u0", "origin"]


def cmd_solve(config: RunConfig, n: int) -> Report:
    res = solve_state(config.problem(), n, config.tol_e)
    row = _state_row(res)
    return Report({"problem": config.describe(), "result": row}, STATE_COLUMNS, [row])


def cmd_spectrum(config: RunConfig, n_max: int) -> Report:
    rows = [_state_row(r) for r in spectrum(config.problem(), n_max, config.tol_e)]
    return Report({"problem": config.describe(), "states": rows}, STATE_COLUMNS, rows)


def cmd_indicial(config: RunConfig) -> Report:
    pot = parse_potential(config.potential, config.mass)
    coeffs = origin_coefficients(pot)
    rep = indicial(config.channel(), coeffs)
    row = {"c2": coeffs.c2, "c1": coeffs.c1, "c0": coeffs.c0,
           "lambda_eff": rep.lambda_eff, "discriminant": rep.discriminant,
           "classification": rep.classification, "s_plus": rep.s_plus,
           "s_minus": rep.s_minus, "real_part": rep.real_part,
           "imag_part": rep.imag_part, "ambiguity": rep.ambiguity}
    return Report({"problem": {"potential": config.potential, "l": config.l,
                               "mass": config.mass}, "indicial": row},
                  list(row), [row])


def cmd_delta_check(config: RunConfig | None, trial: str | None = None,
                    widths=(0.1, 0.5, 1.0, 2.0), n: int = 0) -> Report:
    if trial is not None:
        if trial not in delta.BUILTIN_TRIALS:
            raise CliError(f"unknown trial {trial!r}; choose from "
                           f"{sorted(delta.BUILTIN_TRIALS)}")
        rep = delta.delta_report(delta.BUILTIN_TRIALS[trial], widths)
        rows = [{"w": w, "defect": d} for w, d in zip(rep.widths, rep.defects)]
        return Report({"trial": trial, "reference": rep.reference,
                       "max_abs_error": rep.max_abs_error, "rows": rows},
                      ["w", "defect"], rows)
    if config is None:
        raise CliError("delta-check needs --trial or --potential")
    res = solve_state(config.problem(), n, config.tol_e)
    row = {"n": n, "E": float(res.E), **_delta_fields(res.solution)}
    return Report({"problem": config.describe(), "result": row}, list(row), [row])


COMPARE_COLUMNS = ["mode", "theta", "n", "E", "u0_defect", "compatible"]


def cmd_compare(config: RunConfig, theta_list, n_max: int = 0) -> Report:
    base = config.problem().with_mode(U0Strict())
    cells = [("u0", None, spectrum(base, n_max, config.tol_e))]
    r0 = parse_mode(config.mode).r0 if config.mode.startswith("l2") else 1.0
    for theta, states in sae_scan(base.with_mode(L2Only(0.0, r0)), theta_list,
                                  n_max, config.tol_e):
        cells.append(("l2", theta, states))
    rows = []
    for label, theta, states in cells:
        for res in states:
            d = _delta_fields(res.solution)
            rows.append({"mode": label, "theta": theta, "n": res.n_radial,
                         "E": float(res.E), "u0_defect": d["defect"],
                         "compatible": d["compatible"]})
    return Report({"problem": config.describe(), "rows": rows}, COMPARE_COLUMNS, rows)


def cmd_oracle(config: RunConfig, k: int) -> Report:
    prob = oracle.oracle_problem(config.channel(),
                                 parse_potential(config.potential, config.mass),
                                 config.r_max, config.points)
    values = [float(e) for e in oracle.fd_spectrum(prob, k)]
    rows = [{"k": i, "E": e} for i, e in enumerate(values)]
    problem = config.describe()
    problem["grid"] = {"scheme": "uniform", "n": config.points,
                       "r_min": prob.grid.r_min, "r_max": config.r_max}
    return Report({"problem": problem, "h": prob.grid.h,
                   "eigenvalues": values}, ["k", "E"], rows)


# --- argument handling -------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _floats(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, "
                                         f"got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--potential", help="e.g. coulomb:Z=1+invsq:c=0.1")
    common.add_argument("--l", type=int, default=0)
    common.add_argument("--mass", type=float, default=1.0)
    common.add_argument("--grid", choices=["log", "uniform"], default="log")
    common.add_argument("--points", type=int, default=20000)
    common.add_argument("--r-min", type=float, default=1e-6)
    common.add_argument("--r-max", type=float, default=80.0)
    common.add_argument("--mode", default="u0", help="u0 or l2:theta=T,r0=R")
    common.add_argument("--tol-e", type=float, default=TOL_E)
    common.add_argument("--format", dest="fmt", choices=["json", "csv"],
                        default="json")

    parser = _Parser(prog="radialbc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    p = sub.add_parser("solve", parents=[common])
    p.add_argument("--n", type=int, default=0)
    p = sub.add_parser("spectrum", parents=[common])
    p.add_argument("--n-max", type=int, default=2)
    sub.add_parser("indicial", parents=[common])
    p = sub.add_parser("delta-check", parents=[common])
    p.add_argument("--trial", choices=sorted(delta.BUILTIN_TRIALS))
    p.add_argument("--widths", type=_floats, default=[0.1, 0.5, 1.0, 2.0])
    p.add_argument("--n", type=int, default=0)
    p = sub.add_parser("compare", parents=[common])
    p.add_argument("--thetas", type=_floats, default=[-1.0, 0.5, 1.0, 2.0])
    p.add_argument("--n-max", type=int, default=0)
    p = sub.add_parser("oracle", parents=[common])
    p.add_argument("--k", type=int, default=3)
    return parser


def run(argv=None) -> tuple[int, str, str]:
    """Execute a command; returns (exit code, stdout text, stderr line)."""
    try:
        args = build_parser().parse_args(argv)
        config = None
        if args.potential is not None:
            config = RunConfig(args.potential, args.l, args.mass, args.grid,
                               args.points, args.r_min, args.r_max, args.mode,
                               args.tol_e, args.fmt)
        elif not (args.command == "delta-check" and args.trial):
            raise CliError("--potential is required")
        if args.command == "solve":
            rep = cmd_solve(config, args.n)
        elif args.command == "spectrum":
            rep = cmd_spectrum(config, args.n_max)
        elif args.command == "indicial":
            rep = cmd_indicial(config)
        elif args.command == "delta-check":
            rep = cmd_delta_check(config, args.trial, args.widths, args.n)
        elif args.command == "compare":
            rep = cmd_compare(config, args.thetas, args.n_max)
        else:
            rep = cmd_oracle(config, args.k)
        return rep.code, rep.render(args.fmt), ""
    except NoSuchStateError as exc:
        msg = " ".join(str(exc).split())
        if not msg.startswith("no bound state"):
            msg = f"no bound state: {msg}"
        return 2, "", f"radialbc: {msg}"
    except (RadialError, ValueError, OSError) as exc:
        msg = " ".join(str(exc).split())
        return 1, "", f"radialbc: error: {type(exc).__name__}: {msg}"


def main(argv=None) -> int:
    code, out, err = run(argv)
    if out:
        sys.stdout.write(out)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
