"""Command-line interface.

Every run echoes its effective configuration: JSON output is
{"config": ..., "rows": [...]}, CSV output starts with a "# config:" line
followed by a header row.  Exit codes: 0 ok, 2 invalid input, 3 precision
not reached, 4 resource budget exceeded.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from types import SimpleNamespace

from . import __version__
from .errors import CovkernelError, ValidationError
from .specfun.bessel import default_precision

FORMATS = ("text", "csv", "json")


@dataclass
class RunConfig:
    command: str
    params: dict = field(default_factory=dict)
    format: str = "text"
    seed: int | None = None
    precision_bits: int = 256
    tolerances: dict = field(default_factory=dict)
    version: str = __version__

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ValidationError(f"{self.prog}: {message}")


def _float_list(s):
    try:
        return [float(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of numbers: {s!r}")


def _int_list(s):
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {s!r}")


def _beta(s):
    if s not in ("1", "2"):
        raise argparse.ArgumentTypeError("beta must be 1 (real) or 2 (complex)")
    return int(s)


def _ensemble_args(p, need_b=True):
    p.add_argument("--beta", type=_beta, default=2)
    p.add_argument("--b", type=float, required=need_b, default=None if need_b else 0.75,
                   help="fourth moment E Q^4; b* is derived from it and beta")


def _fmt(p, default="text"):
    p.add_argument("--format", choices=FORMATS, default=default)


def build_parser():
    ap = _Parser(prog="covkernel", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("kernel", help="evaluate a limit kernel")
    p.add_argument("--id", required=True, choices=["sine", "sine-tilde", "airy", "airy-tilde"])
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--y", type=float, required=True)
    _fmt(p)

    p = sub.add_parser("mp", help="Marchenko-Pastur density and edges")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--xi", type=float, required=True)
    _fmt(p)

    p = sub.add_parser("mc", help="Monte Carlo estimate of f(n, m; mu, nu)")
    _ensemble_args(p)
    for k in ("n", "m"):
        p.add_argument(f"--{k}", type=int, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--reps", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    _fmt(p)

    p = sub.add_parser("exact", help="f(n, m; mu, nu) from generating-function coefficients")
    _ensemble_args(p)
    for k in ("n", "m"):
        p.add_argument(f"--{k}", type=int, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--method", choices=["series", "cauchy", "enumerate"], default="series")
    p.add_argument("--precision-bits", type=int, default=None)
    p.add_argument("--radius", type=float, default=None)
    p.add_argument("--nodes", type=int, default=None)
    _fmt(p)

    p = sub.add_parser("contour", help="f(n, m; mu, nu)/(n! m!) by quadrature along sigma")
    _ensemble_args(p)
    for k in ("n", "m"):
        p.add_argument(f"--{k}", type=int, required=True)
    p.add_argument("--mu", type=float, default=0.0)
    p.add_argument("--nu", type=float, default=0.0)
    p.add_argument("--regime", choices=["bulk", "edge"], default="bulk")
    p.add_argument("--N", type=int, default=None, help="contour scale (default max(n, 4))")
    p.add_argument("--a", type=float, default=8.0)
    p.add_argument("--rtol", type=float, default=1e-10)
    _fmt(p)

    for name, edge in (("verify-bulk", False), ("verify-edge", True)):
        p = sub.add_parser(name, help="convergence table for a limit theorem")
        p.add_argument("--gamma", type=float, required=True)
        if edge:
            p.add_argument("--edge", choices=["upper", "lower"], default="upper")
        else:
            p.add_argument("--xi", type=float, required=True)
        p.add_argument("--mu", type=float, default=0.0)
        p.add_argument("--nu", type=float, default=0.0)
        _ensemble_args(p)
        p.add_argument("--N", type=_int_list, required=True, help="comma-separated list")
        p.add_argument("--method", choices=["series", "cauchy", "contour", "mc"], default="contour")
        p.add_argument("--a", type=float, default=None)
        p.add_argument("--reps", type=int, default=100_000)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--precision-bits", type=int, default=None)
        _fmt(p, "csv")

    p = sub.add_parser("bessel-check", help="uniform Bessel approximations against the series")
    p.add_argument("--kind", choices=["i", "j"], default="i")
    p.add_argument("--alpha", type=_int_list, required=True, help="comma-separated orders")
    p.add_argument("--z", type=complex, required=True, help="argument, e.g. 2 or 0.7+0.7j")
    p.add_argument("--epsilon", type=float, default=0.05)
    _fmt(p, "csv")
    return ap


def _num(x):
    return repr(float(x))


def _emit(cfg: RunConfig, header, rows, out):
    """Write rows in the configured format; scalars print as a bare number in text mode."""
    if cfg.format == "json":
        payload = {"config": cfg.to_dict(), "rows": [dict(zip(header, r)) for r in rows]}
        out.write(json.dumps(payload, sort_keys=True) + "\n")
        return
    if cfg.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        buf.write("# config: " + json.dumps(cfg.to_dict(), sort_keys=True) + "\n")
        w.writerow(header)
        for r in rows:
            w.writerow([_num(v) if isinstance(v, float) else v for v in r])
        out.write(buf.getvalue())
        return
    for r in rows:
        out.write(" ".join(_num(v) if isinstance(v, float) else str(v) for v in r) + "\n")


def _spec(args):
    from .ensembles import ensemble_for
    return ensemble_for(args.beta, args.b)


def _b_star(args):
    from .ensembles import b_star
    var = 0.5 if args.beta == 2 else 1.0
    if not args.b >= var * var:
        raise ValidationError(f"b = E Q^4 must be at least (Var Q)^2 = {var * var} for beta={args.beta}")
    return b_star(args.beta, args.b)


def _cmd_kernel(args, cfg):
    from .kernels import kernel_eval
    return ["value"], [[kernel_eval(args.id, args.x, args.y)]]


def _cmd_mp(args, cfg):
    from .spectrum import mp_density, spectrum_edges
    if cfg.format == "text":
        return ["density"], [[mp_density(args.xi, args.gamma)]]
    geo = spectrum_edges(args.gamma)
    return (["density", "xi_lower", "xi_upper"],
            [[mp_density(args.xi, args.gamma), geo.xi_lower, geo.xi_upper]])


def _cmd_mc(args, cfg):
    from .ensembles import mc_correlation
    est, err = mc_correlation(_spec(args), args.n, args.m, args.mu, args.nu, args.reps, args.seed)
    return ["estimate", "stderr"], [[est, err]]


def _cmd_exact(args, cfg):
    import mpmath

    from .genfun import GfParams, gf_coefficient_cauchy, gf_coefficient_series
    from .logcomplex import LogComplex
    if args.n < args.m:
        raise ValidationError("need n >= m")
    if args.method == "enumerate":
        from .ensembles import enumerate_correlation
        return ["f"], [[enumerate_correlation(_spec(args), args.n, args.m, args.mu, args.nu)]]
    p = GfParams(args.n - args.m, args.beta, _b_star(args), args.mu, args.nu)
    if args.method == "series":
        c = gf_coefficient_series(p, args.m, args.precision_bits)
        f = c * mpmath.factorial(args.n) * mpmath.factorial(args.m)
        return ["coefficient", "f", "rel_error"], [[float(c), float(f), 0.0]]
    fact = LogComplex.from_log(math.lgamma(args.n + 1) + math.lgamma(args.m + 1))
    est = gf_coefficient_cauchy(p, args.m, args.radius, args.nodes)
    c = est.log()
    return (["coefficient", "f", "rel_error"],
            [[c.to_complex().real, (c * fact).to_complex().real, est.rel_error]])


def _cmd_contour(args, cfg):
    from .contour import ContourSpec, contour_correlation
    from .genfun import GfParams
    if args.n < args.m:
        raise ValidationError("need n >= m")
    p = GfParams(args.n - args.m, args.beta, _b_star(args), args.mu, args.nu)
    N = args.N or max(4, args.n)
    spec = (ContourSpec.edge if args.regime == "edge" else ContourSpec.bulk)(N, args.a)
    cfg.params["a_effective"] = spec.a
    r = contour_correlation(p, args.m, spec, rtol=args.rtol)
    return (["coefficient", "error", "log_scale", "scaled_value"],
            [[float(r), r.error * math.exp(r.log_scale) if r.log_scale < 700 else math.inf,
              r.log_scale, r.value]])


def _cmd_verify(args, cfg):
    from .asymptotics import ScalingPlan, convergence_table
    if args.command == "verify-bulk":
        plan = ScalingPlan.build("bulk", args.N[0], args.gamma, args.mu, args.nu, xi=args.xi)
    else:
        plan = ScalingPlan.build(f"edge-{args.edge}", args.N[0], args.gamma, args.mu, args.nu)
        cfg.params["xi_effective"] = plan.xi
    cfg.params["b_star"] = _b_star(args)
    opts = {"reps": args.reps, "seed": args.seed, "precision_bits": args.precision_bits}
    if args.a is not None:
        opts["a"] = args.a
    if args.method == "mc":
        spec = _spec(args)
    else:
        # only beta and b* enter the exact routes, so any admissible b is accepted
        spec = SimpleNamespace(beta=args.beta, b_star=cfg.params["b_star"])
    rows = convergence_table(plan, spec, args.method, args.N, **opts)
    return ["N", "lhs", "rhs", "abs_err"], [[r.N, r.lhs, r.rhs, r.abs_err] for r in rows]


def _cmd_bessel(args, cfg):
    from .specfun import (bessel_i_exact, bessel_i_uniform, bessel_j_exact,
                          bessel_j_uniform_airy)
    rows = []
    for a in args.alpha:
        if args.kind == "i":
            ex, ap = bessel_i_exact(a, args.z), bessel_i_uniform(a, args.z, args.epsilon)
        else:
            ex, ap = bessel_j_exact(a, args.z), bessel_j_uniform_airy(a, args.z, args.epsilon)
        rel = abs((ap / ex).to_complex() - 1)
        rows.append([a, ex.log_abs, ap.log_abs, rel])
    return ["alpha", "log_abs_exact", "log_abs_uniform", "rel_error"], rows


_COMMANDS = {
    "kernel": _cmd_kernel, "mp": _cmd_mp, "mc": _cmd_mc, "exact": _cmd_exact,
    "contour": _cmd_contour, "verify-bulk": _cmd_verify, "verify-edge": _cmd_verify,
    "bessel-check": _cmd_bessel,
}

_META = {"command", "format", "seed"}


def run(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        prec = getattr(args, "precision_bits", None)
        params = {k: (v.real, v.imag) if isinstance(v, complex) else v
                  for k, v in sorted(vars(args).items()) if k not in _META | {"precision_bits"}}
        cfg = RunConfig(command=args.command, params=params, format=args.format,
                        seed=getattr(args, "seed", None),
                        precision_bits=prec if prec is not None else default_precision())
        if "rtol" in params:
            cfg.tolerances["rtol"] = params.pop("rtol")
        header, rows = _COMMANDS[args.command](args, cfg)
        _emit(cfg, header, rows, out)
        return 0
    except CovkernelError as e:
        err.write(f"error: {e}\n")
        return e.exit_code
    except ValueError as e:
        # e.g. a malformed COVKERNEL_PRECISION_BITS value
        err.write(f"error: {e}\n")
        return ValidationError.exit_code


def main(argv=None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
