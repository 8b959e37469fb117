"""Command-line front end.

    zeeman-zones spectrum --zone 0 --p-max 2
    zeeman-zones verify-eigen --max-degree 8
    zeeman-zones kernels --kind wiener-zonal --zone 1 --t 0.5
    zeeman-zones partition --zone 0 --t 0.5 1 2
    zeeman-zones coulomb --mode matrix --a 0 --b 1 --m-max 5
    zeeman-zones lamb --l 0 --mode total
    zeeman-zones report-all

Common settings (lambda, kappa, Q, tol, format, output and the integer
limits) can also come from a ``key=value`` config file given with
``--config``.  Flags override config keys, which override the defaults.

Exit codes: 0 success, 1 computation failure, 2 invalid arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .exactalg import ModelParams, apply_box_conjugated, apply_box_oracle, format_rational
from .quadrature import QuadratureError

__all__ = ["RunConfig", "main", "build_parser", "read_config_file"]

DEFAULTS = {
    "lambda": "1",
    "kappa": 1,
    "Q": 1.0,
    "tol": 1e-8,
    "zone": 0,
    "p_max": 10,
    "m_max": 10,
    "K": 10_000,
    "format": "csv",
    "output": None,
}
_CASTS = {
    "lambda": str,
    "kappa": int,
    "Q": float,
    "tol": float,
    "zone": int,
    "p_max": int,
    "m_max": int,
    "K": int,
    "format": str,
    "output": str,
}


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


@dataclass(frozen=True)
class RunConfig:
    lam: Fraction
    kappa: int
    zone: int
    Q: float
    p_max: int
    m_max: int
    K: int
    tol: float
    format: str
    output_path: Optional[str]

    def __post_init__(self):
        if self.lam <= 0:
            raise ConfigError("lambda must be positive")
        if self.kappa < 1:
            raise ConfigError("kappa must be >= 1")
        if self.zone < 0:
            raise ConfigError("zone must be >= 0")
        if not self.Q >= 0:
            raise ConfigError("Q must be >= 0")
        if min(self.p_max, self.m_max, self.K) < 0:
            raise ConfigError("p_max, m_max and K must be >= 0")
        if not self.tol > 0:
            raise ConfigError("tol must be positive")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")

    @property
    def params(self) -> ModelParams:
        return ModelParams(lam=self.lam, kappa=self.kappa, Q=self.Q)


def read_config_file(path) -> dict:
    """Flat ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in _CASTS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _CASTS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
    return out


def resolve_config(args) -> RunConfig:
    file_cfg = read_config_file(args.config) if args.config else {}
    merged = {}
    for key, default in DEFAULTS.items():
        flag = getattr(args, key, None)
        merged[key] = flag if flag is not None else file_cfg.get(key, default)
    try:
        lam = Fraction(str(merged["lambda"]).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"lambda must be a rational string, got {merged['lambda']!r}") from exc
    return RunConfig(lam=lam, kappa=int(merged["kappa"]), zone=int(merged["zone"]), Q=float(merged["Q"]),
                     p_max=int(merged["p_max"]), m_max=int(merged["m_max"]), K=int(merged["K"]),
                     tol=float(merged["tol"]), format=merged["format"], output_path=merged["output"])


# --- output -----------------------------------------------------------------


def _cell(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _json_cell(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    if isinstance(x, np.generic):
        return x.item()
    return x


def emit(header, rows, cfg: RunConfig, stream):
    if cfg.format == "json":
        records = [dict(zip(header, (_json_cell(x) for x in row))) for row in rows]
        text = json.dumps(records, indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([_cell(x) for x in row] for row in rows)
        text = buf.getvalue()
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        stream.write(text)


def _parse_complex(s: str) -> complex:
    try:
        return complex(s.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {s!r}") from exc


# --- subcommands ------------------------------------------------------------


def cmd_spectrum(args, cfg, out):
    from .zones import enumerate_zone_spectrum

    lines = enumerate_zone_spectrum(cfg.zone, cfg.params, cfg.p_max)
    emit(["zone", "p", "energy", "multiplicity"],
         [(cfg.zone, s.p, s.energy, s.multiplicity) for s in lines], cfg, out)
    return 0


def cmd_verify_eigen(args, cfg, out):
    from .zones import eigenvalue, ito_poly

    if cfg.kappa != 1:
        raise ConfigError("verify-eigen acts on one particle (kappa = 1)")
    params = cfg.params
    rows, failures = [], 0
    for total in range(args.max_degree + 1):
        for p in range(total + 1):
            q = total - p
            poly = ito_poly(p, q, cfg.lam)
            ev = eigenvalue(p, params)
            got = apply_box_conjugated(poly, params)
            ok = got == poly.scale(ev) and got == apply_box_oracle(poly, params)
            failures += not ok
            rows.append((p, q, ev, int(ok)))
    if cfg.output_path:
        emit(["p", "q", "eigenvalue", "ok"], rows, cfg, out)
    out.write(f"checked {len(rows)} eigen-relations, {failures} failures\n")
    return 0 if failures == 0 else 1


def cmd_kernels(args, cfg, out):
    from . import kernels as K

    if cfg.kappa != 1:
        raise ConfigError("kernel grids are written for kappa = 1")
    params = cfg.params
    if args.kind in ("wiener-global", "wiener-zonal") and not args.t > 0:
        raise ConfigError("t must be positive")
    xs = np.linspace(-args.extent, args.extent, args.grid)
    w = args.w
    rows = []
    for x in xs:
        for y in xs:
            z = complex(x, y)
            if args.kind == "projection":
                kv = K.point_spread(cfg.zone, params, z, w)
            elif args.kind == "wiener-zonal":
                kv = K.wiener_zonal(cfg.zone, args.t, z, w, params)
            elif args.kind == "schrodinger-zonal":
                kv = K.schrodinger_zonal(cfg.zone, args.t, z, w, params)
            elif args.kind == "wiener-global":
                kv = K.wiener_global(args.t, z, w, params)
            else:
                kv = K.schrodinger_global(args.t, z, w, params)
            v = complex(kv.value)
            rows.append((args.kind, cfg.zone, args.t, z.real, z.imag, w.real, w.imag, v.real, v.imag, kv.abs_err))
    emit(["kind", "zone", "t", "z_re", "z_im", "w_re", "w_im", "re", "im", "abs_err"], rows, cfg, out)
    return 0


def cmd_partition(args, cfg, out):
    from .kernels import partition_spectral, partition_zonal

    params = cfg.params
    rows = []
    for t in args.t:
        if args.variant == "wiener":
            closed = complex(partition_zonal(cfg.zone, t, params))
            spectral, bound = partition_spectral(cfg.zone, t, params)
        else:
            closed = complex(partition_zonal(cfg.zone, t, params, "schrodinger"))
            spectral, bound = partition_spectral(cfg.zone, t * complex(args.eta, 1.0), params)
        rows.append((args.variant, cfg.zone, cfg.kappa, t, closed.real, closed.imag,
                     spectral.real, spectral.imag, bound))
    emit(["variant", "zone", "kappa", "t", "re", "im", "spectral_re", "spectral_im", "tail_bound"],
         rows, cfg, out)
    return 0


def cmd_coulomb(args, cfg, out):
    from . import coulomb as C

    params = cfg.params
    if args.mode == "matrix":
        b = cfg.zone if args.b is None else args.b
        a = cfg.zone if args.a is None else args.a
        mat = C.transmission_matrix(a, b, range(-cfg.m_max, cfg.m_max + 1), params, args.potential)
        emit(["a", "b", "m", "re", "im", "abs_err"], mat.rows(), cfg, out)
    elif args.mode == "diag":
        rows = [(m, C.coulomb_diag_fock_exact(m), C.coulomb_diag_fock(m, params.lam_float, cfg.Q))
                for m in range(cfg.m_max + 1)]
        emit(["m", "ratio_exact", "E_m"], rows, cfg, out)
    elif args.mode == "divergence":
        rep = C.trace_divergence_report(cfg.zone, max(cfg.m_max, 100), args.epsilon,
                                        params.lam_float, cfg.Q)
        if cfg.format == "json":
            text = json.dumps(rep, indent=2) + "\n"
            if cfg.output_path:
                Path(cfg.output_path).write_text(text)
            else:
                out.write(text)
        else:
            emit(["key", "value"], sorted(rep.items()), cfg, out)
    elif args.mode == "log":
        emit(["m", "quadrature", "closed_form"], C.log_potential_diag(max(cfg.m_max, 1)), cfg, out)
    else:
        rows = [(l, C.bethe_velocity(l, params.lam_float), C.bethe_velocity_squared_exact(l, cfg.lam))
                for l in range(1, max(cfg.m_max, 1) + 1)]
        emit(["l", "velocity", "velocity_sq_exact"], rows, cfg, out)
    return 0


def cmd_lamb(args, cfg, out):
    from .constants import default_constants
    from .lamb import amplitude_table

    if args.constants:
        out.write(json.dumps(default_constants().to_json(), indent=2) + "\n")
        return 0
    ls = [args.l] if args.l is not None else list(range(cfg.p_max + 1))
    rows = amplitude_table(ls, args.mode, args.density, tol=cfg.tol)
    emit(["l", "mode", "density", "sigma_re", "sigma_im", "delta_eV", "delta_MHz", "abs_err"], rows, cfg, out)
    return 0


def cmd_report_all(args, cfg, out):
    from .acceptance import run_criterion

    all_ok = True
    for n in range(1, 12):
        res = run_criterion(n)
        all_ok &= res.passed
        out.write(res.summary_line(timing=False) + "\n")
        if args.verbose:
            for c in res.checks:
                out.write(f"    [{'ok' if c.passed else 'FAIL'}] {c.label}: {c.measured} (target {c.threshold})\n")
    return 0 if all_ok else 1


# --- parser -----------------------------------------------------------------


def _common(p: argparse.ArgumentParser):
    g = p.add_argument_group("common settings")
    g.add_argument("--config", help="key=value config file")
    g.add_argument("--lambda", dest="lambda", help="spectral parameter as a rational string, e.g. 1/2")
    g.add_argument("--kappa", type=int)
    g.add_argument("--Q", type=float, help="Coulomb strength")
    g.add_argument("--tol", type=float)
    g.add_argument("--zone", type=int)
    g.add_argument("--p-max", dest="p_max", type=int)
    g.add_argument("--m-max", dest="m_max", type=int)
    g.add_argument("--K", type=int)
    g.add_argument("--format", choices=("csv", "json"))
    g.add_argument("--output", help="write the table here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zeeman-zones", description="Zeeman zone spectra, kernels and amplitudes")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="zone spectrum with multiplicities")
    _common(p)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify-eigen", help="exact eigen-relations for p+q <= max degree")
    _common(p)
    p.add_argument("--max-degree", type=int, default=8)
    p.set_defaults(func=cmd_verify_eigen)

    p = sub.add_parser("kernels", help="kernel values on a square grid")
    _common(p)
    p.add_argument("--kind", default="projection",
                   choices=("projection", "wiener-zonal", "schrodinger-zonal", "wiener-global",
                            "schrodinger-global"))
    p.add_argument("--t", type=float, default=1.0)
    p.add_argument("--w", type=_parse_complex, default=0j, help="second point, e.g. 0.3+0.1j")
    p.add_argument("--grid", type=int, default=5)
    p.add_argument("--extent", type=float, default=1.0)
    p.set_defaults(func=cmd_kernels)

    p = sub.add_parser("partition", help="zonal partition functions")
    _common(p)
    p.add_argument("--t", type=float, nargs="+", default=[1.0])
    p.add_argument("--variant", choices=("wiener", "schrodinger"), default="wiener")
    p.add_argument("--eta", type=float, default=0.01,
                   help="Abel damping for the Schroedinger spectral column: tau = t(eta + i)")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("coulomb", help="zonal Coulomb operators and diagnostics")
    _common(p)
    p.add_argument("--mode", choices=("matrix", "diag", "divergence", "log", "bethe"), default="matrix")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--potential", choices=("coulomb3d", "log2d"), default="coulomb3d")
    p.add_argument("--epsilon", type=float, default=0.1)
    p.set_defaults(func=cmd_coulomb)

    p = sub.add_parser("lamb", help="amplitudes and level shifts")
    _common(p)
    p.add_argument("--l", type=int)
    p.add_argument("--mode", choices=("epsilon_p", "total"), default="total")
    p.add_argument("--density", choices=("stirling", "exact_gamma"), default="stirling")
    p.add_argument("--constants", action="store_true", help="dump the physical constants as JSON")
    p.set_defaults(func=cmd_lamb)

    p = sub.add_parser("report-all", help="run every acceptance check")
    _common(p)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_report_all)
    return parser


def main(argv=None, stdout=None) -> int:
    out = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        for name in ("a", "b", "l", "max_degree", "grid"):
            val = getattr(args, name, None)
            if val is not None and val < (1 if name == "grid" else 0):
                raise ConfigError(f"--{name.replace('_', '-')} out of range")
    except (ConfigError, OSError) as exc:
        parser.error(str(exc))
    try:
        # render into a buffer so failures never leave partial output behind
        buf = io.StringIO()
        code = args.func(args, cfg, buf)
    except ConfigError as exc:
        parser.error(str(exc))
    except (QuadratureError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    out.write(buf.getvalue())
    return code


if __name__ == "__main__":
    sys.exit(main())
