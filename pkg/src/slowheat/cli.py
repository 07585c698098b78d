"""Subcommand orchestration and deterministic artifact emission.

Six subcommands map onto the library's capabilities: ``magnus`` (effective
Hamiltonian orders with their certificates), ``lr-scan`` (bound family
against measured commutators), ``response`` (binned absorption with the
per-pair bounds), ``heat-scan`` (heating times across drive frequencies),
``delta`` (observable drift against calibrated envelopes), and ``lemmas``
(the combinatorial inequality suites).

Every run writes its CSV artifacts plus a ``manifest.json`` holding the
resolved config, code version, and wall time.  CSV content is deterministic:
floats are printed through one fixed format, row orders are explicit, and
parallel work merges in sorted task order, so identical configs produce
byte-identical CSV files at any thread count.  Exit codes: 0 success, 2
config/schema problems (no artifacts written), 3 module errors (domain,
accuracy, or resource limits)."""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import json
import math
import os
import sys
import time

import numpy as np

from . import __version__
from .config import SCHEMA_VERSION, apply_overrides, load_raw
from .errors import (AccuracyError, DegenerateInputError, DomainError,
                     ResourceLimitError, SchemaError)
from .fourier import FourierOperator
from .heating import (ENVELOPE_KINDS, ScanPoint, fit_scan_points,
                      heating_time, observable_delta, run_heating)
from .inequalities import run_all_lemmas
from .lattice import chain, lattice_constants
from .lr_bounds import (BOUND_KINDS, DOMINATION_ATOL, bound_on_grid,
                        measure_cone, params_from_lattice)
from .magnus import MagnusConfig, build_effective, local_norm_bound
from .models import driven_hamiltonian, power_law_ising, uniform_field
from .pauli import PowerLawSpec, pauli_op
from .response import ResponseConfig, pair_bound_table, response_binned

THREADS_ENV = "SLOWHEAT_THREADS"


def _fmt(value) -> str:
    """One fixed textual form per value; the determinism contract hinges here."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12g" % float(value)
    return str(value)


def _write_csv(path: str, header, rows):
    with open(path, "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _require(cfg: dict, section: str) -> dict:
    if cfg.get(section) is None:
        raise SchemaError(section, "this subcommand needs the section")
    return cfg[section]


def _build_lattice(cfg: dict):
    lc = cfg["lattice"]
    return chain(lc["n_sites"], boundary=lc["boundary"])


def _build_h0(cfg: dict, lat):
    ham = cfg["hamiltonian"]
    cp = ham["couplings"]
    return power_law_ising(lat, ham["alpha"], J=cp["J"], hx=cp["hx"],
                           hz=cp["hz"])


def _drive_period(cfg: dict) -> float:
    drive = _require(cfg, "drive")
    if (drive["omega"] is None) == (drive["period"] is None):
        raise SchemaError("drive.period",
                          "exactly one of drive.omega and drive.period "
                          "must be set")
    if drive["period"] is not None:
        return drive["period"]
    return 2.0 * math.pi / drive["omega"]


def _build_magnus(cfg: dict, lat, H0):
    drive = _require(cfg, "drive")
    mg = _require(cfg, "magnus")
    alpha = cfg["hamiltonian"]["alpha"]
    T = _drive_period(cfg)
    omega = 2.0 * math.pi / T
    H = driven_hamiltonian(H0, uniform_field(lat, drive["operator"]),
                           drive["g"], omega)
    mcfg = MagnusConfig(T=T, lam=lattice_constants(lat, alpha).lam,
                        q_max=mg["q_max"], kappa=mg["kappa"], c=mg["c"],
                        report_orders=mg["report_orders"])
    spec = PowerLawSpec(alpha=alpha, eta=1.0, k=1)
    return build_effective(H, lat, mcfg, spec), H, mcfg


def _cmd_magnus(cfg: dict, out_dir: str, threads: int) -> dict:
    lat = _build_lattice(cfg)
    result, _, mcfg = _build_magnus(cfg, lat, _build_h0(cfg, lat))
    rows = []
    for q in sorted(result.gq):
        cert = result.certificates[q]
        rows.append((q, result.gq[q].local_norm_envelope(),
                     local_norm_bound(mcfg, q), cert.passes,
                     cert.worst_pair[1]))
    _write_csv(os.path.join(out_dir, "magnus.csv"),
               ["q[1]", "local_norm_Gq[energy]", "lemma1_bound[energy]",
                "certified[bool]", "worst_pair_ratio[1]"], rows)
    return {"q_max": result.q_max, "omega_star": result.omega_star,
            "gamma_star": result.gamma_star,
            "c2_constant": result.c2_constant,
            "identity_residuals": [float(r) for r in
                                   result.identity_residuals]}


def _radius_site(lat, r: float) -> int:
    d0 = lat.distance_matrix()[0]
    hits = np.nonzero(np.abs(d0 - r) <= 1e-9)[0]
    if len(hits) == 0:
        raise SchemaError("lr_scan.radii",
                          f"no site at distance {r:g} from site 0")
    return int(hits[0])


def _cmd_lr_scan(cfg: dict, out_dir: str, threads: int) -> dict:
    scan = _require(cfg, "lr_scan")
    lat = _build_lattice(cfg)
    alpha = cfg["hamiltonian"]["alpha"]
    H0 = _build_h0(cfg, lat)
    sites = tuple(range(lat.n_sites))

    if scan["kinds"] == "applicable":
        kinds = []
        for kind in BOUND_KINDS:
            if kind == "conjectured":
                continue
            try:
                params_from_lattice(kind, lat, alpha, mu=scan["mu"])
            except DomainError:
                continue
            kinds.append(kind)
    else:
        kinds = list(scan["kinds"])
    params = {k: params_from_lattice(k, lat, alpha, mu=scan["mu"])
              for k in kinds}

    radii = sorted(scan["radii"])
    times = np.linspace(0.0, scan["t_max"], scan["n_times"])
    measured = None
    if scan["measure"]:
        pairs = [(pauli_op("X", 0), pauli_op("X", _radius_site(lat, r)), r)
                 for r in radii]
        measured = measure_cone(H0, pairs, times, sites).values

    rows = []
    for kind in kinds:
        grid = bound_on_grid(params[kind], times, radii)
        for i, t in enumerate(times):
            for j, r in enumerate(radii):
                b = grid.values[i, j]
                if measured is None:
                    rows.append((kind, t, r, b, None, None))
                else:
                    m = measured[i, j]
                    rows.append((kind, t, r, b, m,
                                 bool(m <= b + DOMINATION_ATOL)))
    _write_csv(os.path.join(out_dir, "lr_scan.csv"),
               ["kind", "t[time]", "r[distance]", "bound_value[1]",
                "measured_value[1]", "dominated[bool]"], rows)
    violations = 0 if measured is None else sum(
        1 for row in rows if row[5] is False)
    return {"kinds": kinds, "violations": violations}


def _cmd_response(cfg: dict, out_dir: str, threads: int) -> dict:
    rsp = _require(cfg, "response")
    lat = _build_lattice(cfg)
    alpha = cfg["hamiltonian"]["alpha"]
    H0 = _build_h0(cfg, lat)
    n = lat.n_sites
    edges = np.linspace(rsp["bins"]["lo"], rsp["bins"]["hi"],
                        rsp["bins"]["n"] + 1)
    rcfg = ResponseConfig(beta=rsp["beta"],
                          observables=tuple(pauli_op(rsp["observable"], i)
                                            for i in range(n)),
                          bin_edges=tuple(edges),
                          obs_sites=tuple(range(n)))
    result = response_binned(H0, rcfg, sites=tuple(range(n)))
    table = pair_bound_table(H0, rcfg, rsp["k_grid"],
                             lattice_constants(lat, alpha).lam,
                             sites=tuple(range(n)))
    d = lat.distance_matrix()
    rows = []
    dominated_all = True
    for i in range(n):
        for j in range(i, n):
            for b in range(rcfg.n_bins):
                sig = result.sigma[b, i, j]
                bound = table[b, i, j]
                ok = bool(abs(sig) <= bound + DOMINATION_ATOL)
                dominated_all = dominated_all and ok
                rows.append((i, j, d[i, j], rcfg.bin_edges[b],
                             rcfg.bin_edges[b + 1], sig, bound, ok))
    _write_csv(os.path.join(out_dir, "response.csv"),
               ["i[site]", "j[site]", "r_ij[distance]", "bin_lo[energy]",
                "bin_hi[energy]", "sigma[1]", "pair_bound[1]",
                "dominated[bool]"], rows)
    return {"dominated_all": dominated_all}


def _cmd_heat_scan(cfg: dict, out_dir: str, threads: int) -> dict:
    hs = _require(cfg, "heat_scan")
    drive = _require(cfg, "drive")
    lat = _build_lattice(cfg)
    H0 = _build_h0(cfg, lat)
    drive_op = uniform_field(lat, drive["operator"])
    sites = tuple(range(lat.n_sites))

    omegas = hs["omegas"]
    horizon = hs["n_periods"]
    if isinstance(horizon, list):
        if len(horizon) != len(omegas):
            raise SchemaError("heat_scan.n_periods",
                              "list length must match omegas")
        horizon = dict(zip(omegas, horizon))

    def per_omega(w):
        return horizon[w] if isinstance(horizon, dict) else horizon

    order = sorted(omegas)

    def one(w):
        H = (FourierOperator.constant(w, H0)
             + FourierOperator.cosine(w, drive_op, drive["g"]))
        return run_heating(H, H0, hs["beta"], per_omega(w), sites=sites,
                           steps=hs["steps"])

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(threads) as ex:
            traces = list(ex.map(one, order))
    else:
        traces = [one(w) for w in order]

    points, rows = [], []
    for w, trace in zip(order, traces):
        t_star = heating_time(trace, hs["fraction"])
        points.append(ScanPoint(omega=w, t_star=t_star,
                                n_periods=per_omega(w),
                                e_initial=trace.e_initial,
                                e_infinite=trace.e_infinite))
        rows.append((w, per_omega(w), t_star, t_star is not None,
                     trace.e_initial, trace.e_infinite))
        _write_csv(os.path.join(out_dir, f"heat_trace_omega_{_fmt(w)}.csv"),
                   ["n[1]", "t[time]", "energy[energy]"],
                   [(k, k * trace.period, e)
                    for k, e in enumerate(trace.energy)])
    fit = fit_scan_points(points)
    _write_csv(os.path.join(out_dir, "heat_scan.csv"),
               ["omega[energy]", "n_periods[1]", "t_star[time]",
                "crossed[bool]", "e_initial[energy]", "e_infinite[energy]"],
               rows)
    _write_csv(os.path.join(out_dir, "heat_fit.csv"),
               ["fit_available[bool]", "slope[1/energy]",
                "intercept[ln_time]", "slope_stderr[1/energy]",
                "spearman[1]", "n_crossed[1]"],
               [(fit.fit_available, fit.slope, fit.intercept,
                 fit.slope_stderr, fit.spearman,
                 sum(1 for p in points if p.t_star is not None))])
    return {"fit_available": fit.fit_available,
            "spearman": None if math.isnan(fit.spearman) else fit.spearman}


def _delta_envelope_specs(cfg: dict, lat, alpha: float) -> dict:
    dl = cfg["delta"]
    D = lat.dimension
    specs = {}
    for kind in dl["envelopes"]:
        if kind not in ENVELOPE_KINDS:
            raise SchemaError("delta.envelopes",
                              f"unknown envelope kind {kind!r}; choose "
                              f"from {ENVELOPE_KINDS}")
        if kind == "gong":
            specs[kind] = {"alpha": alpha, "D": D,
                           "v": params_from_lattice("gong", lat, alpha).v}
        elif kind == "else":
            sigma = dl["sigma"]
            if sigma is None:
                lo = (D + 1) / (alpha - D + 1)
                if lo >= 1.0:
                    raise DomainError(
                        f"no admissible sigma at alpha={alpha}, D={D}")
                sigma = (lo + 1.0) / 2.0
            specs[kind] = {"sigma": sigma, "D": D}
        elif kind == "tran":
            specs[kind] = {"alpha": alpha, "D": D}
        else:
            specs[kind] = {"beta": dl["beta_cone"], "D": D}
    return specs


def _cmd_delta(cfg: dict, out_dir: str, threads: int) -> dict:
    dl = _require(cfg, "delta")
    lat = _build_lattice(cfg)
    alpha = cfg["hamiltonian"]["alpha"]
    if not 0 <= dl["site"] < lat.n_sites:
        raise SchemaError("delta.site", "site index outside the lattice")
    specs = _delta_envelope_specs(cfg, lat, alpha)
    result, H, _ = _build_magnus(cfg, lat, _build_h0(cfg, lat))
    trace = observable_delta(result, H, pauli_op(dl["operator"], dl["site"]),
                             dl["n_periods"], envelope_specs=specs,
                             calibration_level=dl["calibration_level"],
                             sites=tuple(range(lat.n_sites)),
                             steps=dl["steps"])
    kinds = list(dl["envelopes"])
    rows = []
    for k, t in enumerate(trace.times):
        row = [k, t, trace.delta_norm[k]]
        for kind in kinds:
            env = trace.envelopes.get(kind)
            row.append(None if env is None else env[k])
        rows.append(tuple(row))
    _write_csv(os.path.join(out_dir, "delta.csv"),
               ["n[1]", "t[time]", "delta_norm[1]"]
               + [f"envelope_{k}[1]" for k in kinds], rows)
    return {"calibration_index": trace.calibration_index,
            "constants": {k: float(v) for k, v in trace.constants.items()}}


def _cmd_lemmas(cfg: dict, out_dir: str, threads: int) -> dict:
    reports = run_all_lemmas(seed=cfg["lemmas"]["seed"])
    rows = [(rep.lemma, ";".join(_fmt(p) for p in rep.point), rep.lhs,
             rep.rhs, rep.passes) for rep in reports]
    _write_csv(os.path.join(out_dir, "lemmas.csv"),
               ["lemma", "point", "lhs[1]", "rhs[1]", "passes[bool]"], rows)
    return {"n_reports": len(reports),
            "all_pass": all(rep.passes for rep in reports)}


_DISPATCH = {
    "magnus": _cmd_magnus,
    "lr-scan": _cmd_lr_scan,
    "response": _cmd_response,
    "heat-scan": _cmd_heat_scan,
    "delta": _cmd_delta,
    "lemmas": _cmd_lemmas,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="slowheat",
        description="Slow-heating laboratory for driven power-law spin "
                    "systems")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, help_text in [
            ("magnus", "effective Hamiltonian orders and certificates"),
            ("lr-scan", "bound family vs measured commutators"),
            ("response", "binned absorption and per-pair bounds"),
            ("heat-scan", "heating times across drive frequencies"),
            ("delta", "observable drift vs calibrated envelopes"),
            ("lemmas", "combinatorial inequality suites")]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="YAML experiment config"
                       + ("" if name == "lemmas" else " (required)"))
        p.add_argument("--set", action="append", default=[],
                       metavar="KEY=VALUE",
                       help="override a config entry (YAML-parsed value)")
        p.add_argument("--out", help="output directory (default: the "
                                     "config's out_dir)")
        p.add_argument("--threads", type=int,
                       help=f"worker threads; ${THREADS_ENV} is honored "
                            "only when this flag is absent")
    return parser


def _resolve_threads(args) -> int:
    if args.threads is not None:
        if args.threads < 1:
            raise SchemaError("--threads", "must be >= 1")
        return args.threads
    env = os.environ.get(THREADS_ENV)
    if env is None:
        return 1
    try:
        n = int(env)
    except ValueError:
        raise SchemaError(THREADS_ENV, f"not an integer: {env!r}")
    if n < 1:
        raise SchemaError(THREADS_ENV, "must be >= 1")
    return n


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    start = time.monotonic()
    try:
        threads = _resolve_threads(args)
        if args.config is not None:
            raw = load_raw(args.config)
        elif args.subcommand == "lemmas":
            raw = {"schema_version": SCHEMA_VERSION,
                   "lattice": {"n_sites": 2},
                   "hamiltonian": {"alpha": 3.0}}
        else:
            print(f"{args.subcommand} requires --config", file=sys.stderr)
            return 2
        cfg = apply_overrides(raw, args.set)
    except SchemaError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    out_dir = args.out if args.out is not None else cfg["out_dir"]
    try:
        os.makedirs(out_dir, exist_ok=True)
        extras = _DISPATCH[args.subcommand](cfg, out_dir, threads)
    except SchemaError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ResourceLimitError, AccuracyError, DomainError,
            DegenerateInputError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3

    manifest = {"subcommand": args.subcommand, "code_version": __version__,
                "threads": threads, "wall_time_s": time.monotonic() - start,
                "config": cfg, "results": extras}
    with open(os.path.join(out_dir, "manifest.json"), "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")
    return 0
