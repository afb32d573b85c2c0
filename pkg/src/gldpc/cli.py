"""Command-line interface: reproducible experiments over the library.

Every output carries a schema-version line and the fully resolved
configuration (including seeds), so a rerun with the same arguments is
byte-identical.  CSV is canonical; --format json mirrors the same rows.
Exit codes: 0 success, 2 configuration error, 3 numerical instability.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys

from . import codes as codes_mod
from . import de as de_mod
from .codes import hamming_rate_bound, nu_hat, registry_get, varshamov_rate_bound
from .ensemble import EnsembleSpec, apply_channel, ensemble_rate, sample_graph
from .errors import NumericalInstabilityError, UnknownCodeError
from .peeling import ber_monte_carlo, decode, decoder_kind

SCHEMA_PREFIX = "gldpc"
SCHEMA_VERSION = "v1"


def _fmt(x) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf"
        return format(x, ".10g")
    return str(x)


def _config_json(config: dict) -> str:
    return json.dumps(config, sort_keys=True, separators=(",", ":"))


def spec_hash(spec: EnsembleSpec) -> str:
    return hashlib.sha256(_config_json(spec.to_json_dict()).encode()).hexdigest()[:12]


def _emit(args, name: str, columns: list[str], rows: list[dict], config: dict):
    schema = f"{SCHEMA_PREFIX}/{name}/{SCHEMA_VERSION}"
    if args.format == "json":
        text = json.dumps(
            {"schema": schema, "config": config, "rows": rows},
            sort_keys=True, indent=2, default=_fmt,
        ) + "\n"
    else:
        lines = [f"# schema={schema}", f"# config={_config_json(config)}"]
        lines.append(",".join(columns))
        for row in rows:
            lines.append(",".join(_fmt(row[c]) for c in columns))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_grid(text: str) -> list[float]:
    """A:B:STEP inclusive range, or a comma-separated list, or one value."""
    if ":" in text:
        a, b, step = (float(t) for t in text.split(":"))
        if step <= 0:
            raise ValueError("grid step must be positive")
        out = []
        v = a
        while v <= b + 1e-9:
            out.append(round(v, 12))
            v += step
        return out
    return [float(t) for t in text.split(",")]


def _build_spec(args, nu=None) -> EnsembleSpec:
    if getattr(args, "spec", None):
        with open(args.spec) as fh:
            spec = EnsembleSpec.from_json(fh.read())
        if getattr(args, "xi", None):
            spec = _respec(spec, xi=args.xi)
        if nu is not None:
            spec = _respec(spec, nu=nu)
        return spec
    if args.J is None or args.K is None:
        raise ValueError("either --spec or --J/--K (with --nu/--component) is required")
    component = args.component
    nu_val = nu if nu is not None else (args.nu or 0.0)
    return EnsembleSpec.regular(
        args.J, args.K, nu_val, component,
        beta=getattr(args, "beta", 0.0) or 0.0,
        xi=getattr(args, "xi", 0.0) or 0.0,
    )


def _respec(spec: EnsembleSpec, nu: float | None = None, xi: float | None = None,
            beta: float | None = None) -> EnsembleSpec:
    """Copy a spec with nu (re-split proportionally per degree), xi or beta changed."""
    if nu is None:
        nu_val = spec.nu
        rho_p, rho_c = spec.rho_p, spec.rho_c
    else:
        nu_val = nu
        pooled: dict[int, float] = {}
        for d, f in tuple(spec.rho_p) + tuple(spec.rho_c):
            pooled[d] = pooled.get(d, 0.0) + f
        rho_p = tuple((d, (1.0 - nu) * f) for d, f in sorted(pooled.items()) if (1.0 - nu) * f > 0)
        rho_c = tuple((d, nu * f) for d, f in sorted(pooled.items()) if nu * f > 0)
    return EnsembleSpec(
        lam=spec.lam, rho_p=rho_p, rho_c=rho_c, nu=nu_val,
        component=spec.component,
        beta=spec.beta if beta is None else beta,
        xi=spec.xi if xi is None else xi,
    )


def cmd_codes(args) -> int:
    if args.codes_cmd == "list":
        rows = []
        for name in codes_mod.REGISTRY_NAMES:
            c = registry_get(name)
            rows.append({"name": c.name, "K": c.K, "k": c.k, "d": c.d,
                         "rate": float(c.rate)})
        _emit(args, "codes-list", ["name", "K", "k", "d", "rate"], rows, {})
        return 0
    c = registry_get(args.code)
    prof = codes_mod.decoding_profile(c)
    payload = {"name": c.name, "K": c.K, "k": c.k, "d": c.d,
               "rate": float(c.rate), "p": list(prof.p)}
    if args.format == "csv":
        rows = [{"w": w, "p_w": prof.p[w - 1]} for w in range(1, c.K + 1)]
        _emit(args, "codes-profile", ["w", "p_w"], rows,
              {k: payload[k] for k in ("name", "K", "k", "d", "rate")})
    else:
        text = json.dumps({"schema": f"{SCHEMA_PREFIX}/codes-profile/{SCHEMA_VERSION}",
                           **payload}, indent=2) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return 0


def cmd_rate_bounds(args) -> int:
    r0 = args.r0 if args.r0 is not None else 1.0 - args.J / args.K
    rows = []
    for nu in _parse_grid(args.nu_grid):
        rows.append({
            "nu": nu,
            "r0": r0,
            "hamming_bound_rate": hamming_rate_bound(r0, nu, args.d, args.K),
            "varshamov_bound_rate": varshamov_rate_bound(r0, nu, args.d, args.K),
        })
    config = {"d": args.d, "K": args.K, "r0": r0, "nu_grid": args.nu_grid}
    _emit(args, "rate-bounds",
          ["nu", "r0", "hamming_bound_rate", "varshamov_bound_rate"], rows, config)
    return 0


def cmd_de_threshold(args) -> int:
    spec = _build_spec(args)
    if args.decoder == "bdpd":
        res = de_mod.bd_threshold(spec, tol=args.tol)
    else:
        res = de_mod.de_threshold(spec, tol=args.tol)
    rate = ensemble_rate(spec, allow_infeasible=True)
    _, sc_capped = de_mod.sc_bound(spec)
    payload = {
        "schema": f"{SCHEMA_PREFIX}/de-threshold/{SCHEMA_VERSION}",
        "spec_hash": spec_hash(spec),
        "spec": spec.to_json_dict(),
        "decoder": args.decoder,
        "epsilon_star": res.epsilon_star,
        "tol": res.tol,
        "iterations": res.iterations,
        "sc_bound": sc_capped if math.isfinite(sc_capped) else None,
        "rate": rate,
        "gap_to_capacity": 1.0 - rate - res.epsilon_star,
    }
    text = json.dumps(payload, indent=2, default=_fmt) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _sweep_point(payload):
    spec_json, nu, tol = payload
    base = EnsembleSpec.from_json_dict(spec_json)
    spec = _respec(base, nu=nu)
    ppd = de_mod.de_threshold(spec, tol=tol).epsilon_star
    bd = de_mod.bd_threshold(spec, tol=tol).epsilon_star
    rate = ensemble_rate(spec, allow_infeasible=True)
    _, sc = de_mod.sc_bound(spec)
    comp = spec.component
    return {
        "nu": nu,
        "rate": rate,
        "hamming_bound_rate": hamming_rate_bound(spec.base_rate, nu, comp.d, comp.K),
        "varshamov_bound_rate": varshamov_rate_bound(spec.base_rate, nu, comp.d, comp.K),
        "eps_star_ppd": ppd,
        "eps_star_bdpd": bd,
        "sc_bound": sc,
        "gap": 1.0 - rate - ppd,
        "nu_hat_flag": int(nu > nu_hat(comp.K)),
        "feasible": int(rate > 0.0),
    }


def cmd_sweep_nu(args) -> int:
    spec = _build_spec(args, nu=0.0)
    if spec.component is None:
        raise ValueError("sweep-nu requires a component code")
    grid = _parse_grid(args.nu_grid)
    payloads = [(spec.to_json_dict(), nu, args.tol) for nu in grid]
    rows = _pmap(_sweep_point, payloads, args.jobs)
    config = {"spec": spec.to_json_dict(), "nu_grid": args.nu_grid, "tol": args.tol}
    _emit(args, "sweep-nu",
          ["nu", "rate", "hamming_bound_rate", "varshamov_bound_rate",
           "eps_star_ppd", "eps_star_bdpd", "sc_bound", "gap", "nu_hat_flag",
           "feasible"],
          rows, config)
    return 0


def cmd_ber(args) -> int:
    spec = _build_spec(args)
    eps_grid = _parse_grid(args.eps)
    rows = ber_monte_carlo(
        spec, args.n, eps_grid, args.trials,
        decoder=args.decoder, master_seed=args.seed, jobs=args.jobs,
    )
    config = {"spec": spec.to_json_dict(), "decoder": args.decoder, "n": args.n,
              "trials": args.trials, "seed": args.seed, "eps": args.eps}
    _emit(args, "ber", ["epsilon", "ber", "bler", "stderr", "trials", "n", "seed"],
          rows, config)
    return 0


def _puncture_point(payload):
    spec_json, xi, tol = payload
    base = EnsembleSpec.from_json_dict(spec_json)
    eps0 = de_mod.de_threshold(_respec(base, xi=0.0), tol=tol).epsilon_star
    spec = _respec(base, xi=xi)
    de_thr = de_mod.de_threshold(spec, tol=tol).epsilon_star
    return {
        "xi": xi,
        "rate": ensemble_rate(spec, allow_infeasible=True),
        "eps_star_de": de_thr,
        "eps_star_formula": de_mod.punctured_threshold(eps0, xi),
    }


def cmd_puncture_sweep(args) -> int:
    spec = _build_spec(args)
    grid = _parse_grid(args.xi_grid)
    payloads = [(spec.to_json_dict(), xi, args.tol) for xi in grid]
    rows = _pmap(_puncture_point, payloads, args.jobs)
    config = {"spec": spec.to_json_dict(), "xi_grid": args.xi_grid, "tol": args.tol}
    _emit(args, "puncture-sweep", ["xi", "rate", "eps_star_de", "eps_star_formula"],
          rows, config)
    return 0


def _dg_point(payload):
    spec_json, nu, beta, tol = payload
    base = EnsembleSpec.from_json_dict(spec_json)
    spec = _respec(base, nu=nu, beta=beta)
    thr = de_mod.de_threshold(spec, tol=tol).epsilon_star
    rate = ensemble_rate(spec, allow_infeasible=True)
    return {"nu": nu, "beta": beta, "rate": rate, "eps_star": thr,
            "gap": 1.0 - rate - thr, "feasible": int(rate > 0.0)}


def cmd_dg_sweep(args) -> int:
    if args.J is not None and args.J != 3:
        raise ValueError("generalized variable nodes are defined for J=3 only")
    args.J = 3
    spec = _build_spec(args)
    grid = _parse_grid(args.nu_grid)
    payloads = [(spec.to_json_dict(), nu, args.beta, args.tol) for nu in grid]
    rows = _pmap(_dg_point, payloads, args.jobs)
    config = {"spec": spec.to_json_dict(), "beta": args.beta,
              "nu_grid": args.nu_grid, "tol": args.tol}
    _emit(args, "dg-sweep", ["nu", "beta", "rate", "eps_star", "gap", "feasible"],
          rows, config)
    return 0


def cmd_trace(args) -> int:
    spec = _build_spec(args)
    config = {"spec": spec.to_json_dict(), "mode": args.mode, "eps": args.eps,
              "seed": args.seed, "n": args.n, "decoder": args.decoder}
    header = [f"schema={SCHEMA_PREFIX}/trace-{args.mode}/{SCHEMA_VERSION}",
              f"config={_config_json(config)}"]
    if args.mode == "de":
        run = de_mod.de_run(spec, args.eps)
        text = run.trajectory.to_csv(header)
    else:
        import numpy as np

        ss = np.random.SeedSequence(entropy=(args.seed,))
        s_graph, s_chan, s_dec = ss.spawn(3)
        graph = sample_graph(spec, args.n, s_graph)
        pattern = apply_channel(graph, args.eps, spec.xi, s_chan)
        res = decode(graph, pattern, decoder_kind(args.decoder, spec), seed=s_dec)
        text = res.trace.to_csv(header)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _pmap(fn, payloads, jobs):
    if jobs and jobs > 1:
        import concurrent.futures as cf

        with cf.ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, payloads))
    return [fn(p) for p in payloads]


def _add_spec_flags(p, with_beta=False, with_xi=True):
    p.add_argument("--spec", help="ensemble spec JSON file")
    p.add_argument("--J", type=int, help="variable degree (regular shorthand)")
    p.add_argument("--K", type=int, help="check degree (regular shorthand)")
    p.add_argument("--nu", type=float, help="generalized-check fraction")
    p.add_argument("--component", help="component code name (R-I..R-IX)")
    if with_xi:
        p.add_argument("--xi", type=float, default=0.0, help="puncturing fraction")
    if with_beta:
        p.add_argument("--beta", type=float, default=0.0,
                       help="generalized-variable fraction (J=3 only)")


def _add_output_flags(p):
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gldpc",
        description="GLDPC ensembles over the BEC: decoders, density evolution, bounds",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("codes", help="reference component codes")
    csub = p.add_subparsers(dest="codes_cmd", required=True)
    pl = csub.add_parser("list", help="tabulate the registry")
    pl.set_defaults(func=cmd_codes, format="json")
    _add_output_flags(pl)
    pl.set_defaults(format="json")
    pp = csub.add_parser("profile", help="decoding profile of one code")
    pp.add_argument("--code", required=True)
    _add_output_flags(pp)
    pp.set_defaults(func=cmd_codes, format="json")

    p = sub.add_parser("rate-bounds", help="Hamming/Varshamov design-rate bounds")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--J", type=int, default=2)
    p.add_argument("--r0", type=float, help="base rate override (default 1-J/K)")
    p.add_argument("--nu-grid", default="0:1:0.05")
    _add_output_flags(p)
    p.set_defaults(func=cmd_rate_bounds)

    p = sub.add_parser("de-threshold", help="density-evolution threshold")
    _add_spec_flags(p, with_beta=True)
    p.add_argument("--decoder", choices=("ppd", "bdpd"), default="ppd")
    p.add_argument("--tol", type=float, default=1e-4)
    _add_output_flags(p)
    p.set_defaults(func=cmd_de_threshold, format="json")

    p = sub.add_parser("sweep-nu", help="thresholds and bounds over a nu grid")
    _add_spec_flags(p)
    p.add_argument("--nu-grid", default="0:1:0.05")
    p.add_argument("--tol", type=float, default=1e-4)
    _add_output_flags(p)
    p.set_defaults(func=cmd_sweep_nu)

    p = sub.add_parser("ber", help="Monte-Carlo bit error rate")
    _add_spec_flags(p)
    p.add_argument("--eps", required=True, help="A:B:STEP or comma list")
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--decoder", choices=("ppd", "bdpd", "mlpd"), default="ppd")
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)
    p.set_defaults(func=cmd_ber)

    p = sub.add_parser("puncture-sweep", help="punctured thresholds over a xi grid")
    _add_spec_flags(p, with_xi=False)
    p.add_argument("--xi-grid", default="0:0.5:0.1")
    p.add_argument("--tol", type=float, default=1e-4)
    _add_output_flags(p)
    p.set_defaults(func=cmd_puncture_sweep)

    p = sub.add_parser("dg-sweep", help="generalized-variable ensembles over nu")
    _add_spec_flags(p, with_beta=True)
    p.add_argument("--nu-grid", default="0:0.6:0.05")
    p.add_argument("--tol", type=float, default=1e-4)
    _add_output_flags(p)
    p.set_defaults(func=cmd_dg_sweep)

    p = sub.add_parser("trace", help="residual-DD trajectory (simulated or DE)")
    _add_spec_flags(p, with_beta=True)
    p.add_argument("--mode", choices=("sim", "de"), default="de")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--decoder", choices=("ppd", "bdpd", "mlpd"), default="ppd")
    p.add_argument("--seed", type=int, default=0)
    _add_output_flags(p)
    p.set_defaults(func=cmd_trace)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except NumericalInstabilityError as exc:
        print(f"numerical instability: {exc}", file=sys.stderr)
        return 3
    except (ValueError, UnknownCodeError, OSError, KeyError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
