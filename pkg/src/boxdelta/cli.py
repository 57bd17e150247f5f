"""Command-line front end.

Every subcommand writes its data (JSON for single results, CSV for sweeps)
to ``--out`` or standard output.  With ``--out`` a run record
``<out>.run.json`` is written next to the data and a one-line summary is
printed.  Exit codes: 0 success, 1 usage error, 2 solver error.
"""

from __future__ import annotations

import argparse
import math
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import exact_states as es
from . import grid_oracle as go
from . import stability as stab
from . import two_mode as tm
from .elliptic import EllipticDomainError, complete_E, complete_K, jacobi, jacobi_epsilon
from .io import RunRecord, csv_text, json_text, write_text
from .linear_modes import basis
from .newton import SolverError

EXIT_OK, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


# ---------------------------------------------------------------------------
# helpers


def _map(fn, items, threads: int):
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(i) for i in items]


def _state_record(state: es.ExactState) -> dict:
    d = state.as_dict()
    if state.family in (es.ASYM_ATT, es.ASYM_REP):
        d["z_ex"] = abs(tm.z_exact(state))
    return d


def _grid_values(a: float, b: float, step: float) -> list[float]:
    return [float(v) for v in es.sweep_values(a, b, step)]


# ---------------------------------------------------------------------------
# subcommands; each returns (text, format, summary)


def cmd_elliptic(args):
    u, m = args.u, args.m
    sn, cn, dn = jacobi(u, m)
    if m < 1.0:
        K, eps = complete_K(m), jacobi_epsilon(u, m)
    else:
        K, eps = math.inf, math.tanh(u)
    vals = {"u": u, "m": m, "sn": sn, "cn": cn, "dn": dn, "K": K, "E": complete_E(m), "epsilon": eps}
    if args.format == "json":
        return json_text(vals), "json", "elliptic values"
    text = "\n".join(f"{k} {v:.15g}" for k, v in vals.items() if k not in ("u", "m")) + "\n"
    return text, "text", "elliptic values"


def cmd_modes(args):
    rows = [(i + 1, m.parity, m.index, m.k, m.energy) for i, m in enumerate(basis(args.gamma, args.count))]
    return csv_text(["index", "parity", "parity_index", "k", "energy"], rows), "csv", f"{len(rows)} modes"


def cmd_solve(args):
    st = es.solve(args.family, args.gamma, args.etaN, args.branch)
    return json_text(_state_record(st)), "json", f"{st.family} mu={st.mu:.15g}"


def _sweep_rows(points):
    rows = []
    for p in points:
        s = p.state
        if s is None:
            rows.append((p.etaN, None, None, None, None, False))
            continue
        z = abs(tm.z_exact(s)) if s.family in (es.ASYM_ATT, es.ASYM_REP) else 0.0
        rows.append((p.etaN, s.mu, s.energy_per_particle, z, s.node_count, True))
    return rows


def cmd_sweep(args):
    pts = es.continuation_sweep(args.family, args.gamma, (args.start, args.stop), args.step, args.branch)
    rows = _sweep_rows(pts)
    last = es.last_converged(pts)
    header = ["etaN", "mu", "E_per_N", "z_ex", "node_count", "converged"]
    return csv_text(header, rows), "csv", f"{sum(r[-1] for r in rows)}/{len(rows)} converged, last {last}"


def cmd_twomode(args):
    model = tm.overlaps(args.gamma)
    u2 = tm.variational_u2(model, args.etaN)
    zeta = tm.zeta(model, args.etaN)
    out = {
        "model": model.as_dict(),
        "etaN": args.etaN,
        "u2": u2,
        "states": [vars(s) for s in tm.variational_states(model, args.etaN)],
        "critical": {
            "variational_attractive": tm.critical_attractive_variational(model),
            "variational_repulsive": tm.critical_repulsive_variational(model),
            "sacchetti": tm.sacchetti_critical(model),
            "large_barrier": -tm.malomed_large(args.gamma),
            "small_barrier": -tm.malomed_small(args.gamma),
        },
        "zeta": zeta,
        "z_semiclassical": tm.sacchetti_z(zeta),
    }
    return json_text(out), "json", f"u2={u2}"


def _critical_row(gamma: float):
    model = tm.overlaps(gamma)
    row = [gamma]
    for fam, lim in ((es.ASYM_ATT, -60.0), (es.ASYM_REP, 60.0)):
        try:
            row.append(es.bifurcation_point(fam, gamma, lim))
        except SolverError:
            row.append(None)
    row += [
        tm.critical_attractive_variational(model),
        tm.critical_repulsive_variational(model),
        -tm.malomed_large(gamma),
        -tm.malomed_small(gamma),
        tm.sacchetti_critical(model),
    ]
    return row


CRITICAL_HEADER = [
    "gamma",
    "exact_attractive",
    "exact_repulsive",
    "variational_attractive",
    "variational_repulsive",
    "large_barrier",
    "small_barrier",
    "sacchetti",
]


def cmd_critical(args):
    gammas = _grid_values(args.start, args.stop, args.step)
    rows = _map(_critical_row, gammas, args.threads)
    return csv_text(CRITICAL_HEADER, rows), "csv", f"{len(rows)} barrier strengths"


def _stability_rows(family, gamma, a, b, step, basis_size, threads):
    etas = _grid_values(a, b, step)
    pts = _map(lambda e: stab.stability_at(family, gamma, e, basis_size), etas, threads)
    rows = []
    for p in pts:
        lam = list(p.lowest) + [None] * (2 - len(p.lowest))
        parts = []
        for z in lam:
            parts += [None, None] if z is None else [z.real, abs(z.imag)]
        rows.append([p.etaN, *parts, p.classification or "failed"])
    return rows


STABILITY_HEADER = ["etaN", "re_lambda1", "im_lambda1", "re_lambda2", "im_lambda2", "classification"]


def cmd_stability(args):
    rows = _stability_rows(args.family, args.gamma, args.start, args.stop, args.step, args.basis, args.threads)
    return csv_text(STABILITY_HEADER, rows), "csv", f"{len(rows)} points"


def cmd_oracle(args):
    if args.oracle_cmd == "ground":
        cfg = go.GridConfig(args.gamma, args.etaN, n_points=args.n_points)
        every = args.record_every if args.trajectory else 0
        st = go.imaginary_time_ground(cfg, args.init, args.seed, record_every=every)
        if args.trajectory:
            rows = [(t, x, d) for t, dens in st.trajectory for x, d in zip(st.x, dens)]
            write_text(args.trajectory, csv_text(["t", "x", "density"], rows))
        out = {
            "config": cfg,
            "init": args.init,
            "seed": st.seed,
            "mu": st.mu,
            "energy_per_particle": st.energy_per_particle,
            "z_asym": st.z_asym,
            "converged": st.converged,
            "steps": st.steps,
            "x": st.x,
            "psi": st.psi,
        }
        return json_text(out), "json", f"E/N={st.energy_per_particle:.15g} z={st.z_asym:.6g}"
    kink = go.kink_critical(args.gamma, (args.start, args.stop), args.step)
    out = {"gamma": args.gamma, "range": [args.start, args.stop], "step": args.step, "kink": kink}
    return json_text(out), "json", f"kink={kink}"


# ---------------------------------------------------------------------------
# reproduce targets


def _fig_all_energy(args):
    gamma = args.gamma
    etas = _grid_values(-6.0, 10.0, 0.1)
    neg = [e for e in etas if e < 0.0]
    pos = [e for e in etas if e > 0.0]
    asym = {}
    for fam, rng in ((es.ASYM_ATT, (neg[0], neg[-1])), (es.ASYM_REP, (pos[-1], pos[0]))):
        for p in es.continuation_sweep(fam, gamma, rng, 0.1):
            if p.converged:
                asym[round(p.etaN, 10)] = p.state.energy_per_particle
    rows = []
    for e in etas:
        if e == 0.0:
            m = tm.overlaps(gamma)
            rows.append((e, m.e0, m.e1, None))
            continue
        sym = es.solve(es.SYM_ATT if e < 0 else es.SYM_REP, gamma, e)
        anti = es.solve(es.ANTISYM_ATT if e < 0 else es.ANTISYM_REP, gamma, e)
        rows.append((e, sym.energy_per_particle, anti.energy_per_particle, asym.get(round(e, 10))))
    return csv_text(["etaN", "symmetric", "antisymmetric", "asymmetric"], rows)


def _fig_crit(args, cols):
    gammas = _grid_values(args.gamma_start, args.gamma_stop, args.gamma_step)
    rows = _map(_critical_row, gammas, args.threads)
    idx = [CRITICAL_HEADER.index(c) for c in cols]
    return csv_text(cols, [[r[i] for i in idx] for r in rows])


def _fig_energies(args):
    model = tm.overlaps(args.gamma)
    sweep = {round(p.etaN, 10): p.state for p in es.continuation_sweep(es.ASYM_ATT, args.gamma, (-6.0, -0.1), 0.05)}
    rows = []
    for e in _grid_values(-6.0, -0.1, 0.05):
        sym = es.solve_sym_attractive(args.gamma, e)
        st = sweep.get(round(e, 10))
        u2 = tm.variational_u2(model, e)
        rows.append(
            (
                e,
                sym.energy_per_particle,
                None if st is None else st.energy_per_particle,
                tm.variational_energy(model, 1.0, e),
                None if u2 is None else tm.variational_energy(model, math.sqrt(u2), e),
            )
        )
    return csv_text(["etaN", "exact_symmetric", "exact_asymmetric", "variational_symmetric", "variational_asymmetric"], rows)


def _fig_z(args):
    model = tm.overlaps(args.gamma)
    rows = []
    for p in es.continuation_sweep(es.ASYM_REP, args.gamma, (20.0, 2.0), 0.05):
        zs = tm.sacchetti_z(tm.zeta(model, p.etaN))
        if p.converged:
            aR, aL = tm.localized_amplitudes(p.state)
            rows.append((p.etaN, abs(tm.z_exact(p.state)), aR**2 + aL**2, zs))
        else:
            rows.append((p.etaN, None, None, zs))
    return csv_text(["etaN", "z_exact", "AR2_plus_AL2", "z_semiclassical"], rows)


def _profiles(states, n=401):
    x = np.linspace(-1.0, 1.0, n)
    cols = [es.evaluate(s, x) for s in states]
    return [(xi, *(c[i] for c in cols)) for i, xi in enumerate(x)]


def _fig_states(args):
    g = args.gamma
    zero = es.solve_asym_attractive(g, -2.73)
    excited = es.solve_asym_attractive(g, -10.2, branch=2)
    rep = es.solve_asym_repulsive(g, 10.0)
    return csv_text(["x", "asym_att_-2.73", "asym_att_-10.2_excited", "asym_rep_10"], _profiles([zero, excited, rep]))


def _fig_stability(family, gamma, a, b, basis_size):
    def run(args):
        return csv_text(STABILITY_HEADER, _stability_rows(family, gamma, a, b, 0.05, basis_size, args.threads))

    return run


def _fig_grid_energy(args):
    etas = _grid_values(-4.0, 4.0, 0.1)
    gammas = (5.0, 10.0, 20.0)
    cols = [go.energy_curve(g, etas) for g in gammas]
    return csv_text(["etaN"] + [f"gamma_{g:g}" for g in gammas], [(e, *(c[i] for c in cols)) for i, e in enumerate(etas)])


def _fig_evol(args):
    cfg = go.GridConfig(args.gamma, -5.0)
    st = go.imaginary_time_ground(cfg, "noisy", args.seed, record_every=64, run_full=True)
    rows = [(t, x, d) for t, dens in st.trajectory for x, d in zip(st.x, dens)]
    return csv_text(["t", "x", "density"], rows)


def _table_two_mode(args):
    m = tm.overlaps(args.gamma)
    d = m.as_dict()
    d["k"] = math.sqrt(m.e0)
    d["critical_attractive"] = tm.critical_attractive_variational(m)
    d["critical_repulsive"] = tm.critical_repulsive_variational(m)
    d["sacchetti_critical"] = tm.sacchetti_critical(m)
    return csv_text(["quantity", "value"], sorted(d.items()))


REPRODUCE = {
    # target: (figure it regenerates, builder)
    "fig-antisym-state": ("lowest antisymmetric repulsive state, etaN=10", lambda a: csv_text(
        ["x", "psi"], _profiles([es.solve_antisym_repulsive(10.0, 1, a.gamma)]))),
    "fig-sym-states": ("lowest two symmetric repulsive states, gamma=10, etaN=10", lambda a: csv_text(
        ["x", "branch1", "branch2"], _profiles([es.solve_sym_repulsive(a.gamma, 10.0, 1), es.solve_sym_repulsive(a.gamma, 10.0, 2)]))),
    "fig-asym-states": ("asymmetric attractive and repulsive states", _fig_states),
    "fig-all-energy": ("exact E/N of all branches over etaN in [-6, 10]", _fig_all_energy),
    "fig-energies": ("exact and variational attractive energies", _fig_energies),
    "fig-z": ("exact and semiclassical asymmetry, repulsive side", _fig_z),
    "fig-grid-energy": ("grid E/N versus etaN for several barriers", _fig_grid_energy),
    "fig-crit-attractive": ("attractive thresholds versus gamma", lambda a: _fig_crit(
        a, ["gamma", "exact_attractive", "variational_attractive", "large_barrier", "small_barrier"])),
    "fig-crit-repulsive": ("repulsive thresholds versus gamma", lambda a: _fig_crit(
        a, ["gamma", "exact_repulsive", "variational_repulsive", "sacchetti"])),
    "fig-stability-symmetric": ("BdG frequencies, symmetric state, gamma=10", _fig_stability(es.SYM_ATT, 10.0, -0.05, -6.0, 6)),
    "fig-stability-antisymmetric": ("BdG frequencies, antisymmetric state, gamma=10", _fig_stability(es.ANTISYM_REP, 10.0, 0.05, 6.0, 6)),
    "fig-stability-weak-barrier": ("BdG frequencies, antisymmetric attractive state, gamma=1", _fig_stability(es.ANTISYM_ATT, 1.0, -0.05, -12.0, 12)),
    "fig-evolution": ("imaginary-time relaxation at etaN=-5", _fig_evol),
    "table-two-mode": ("two-mode constants", _table_two_mode),
}


def cmd_reproduce(args):
    desc, build = REPRODUCE[args.target]
    return build(args), "csv", f"{args.target}: {desc}"


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boxdelta", description="Box-delta Gross-Pitaevskii solver.",
                formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    common = _Parser(add_help=False)
    common.add_argument("--out", help="output file (standard output if omitted)")
    common.add_argument("--format", choices=["csv", "json"], help="output format where both make sense")
    common.add_argument("--threads", type=int, default=1, help="worker threads for sweeps")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    kw = dict(parents=[common], formatter_class=argparse.ArgumentDefaultsHelpFormatter)

    e = sub.add_parser("elliptic", help="evaluate sn, cn, dn, K, E, epsilon", **kw)
    esub = e.add_subparsers(dest="elliptic_cmd", required=True, parser_class=_Parser)
    ev = esub.add_parser("eval", **kw)
    ev.add_argument("u", type=float)
    ev.add_argument("m", type=float)

    m = sub.add_parser("modes", help="linear modes as CSV", **kw)
    m.add_argument("--gamma", type=float, required=True)
    m.add_argument("--count", type=int, default=6)

    s = sub.add_parser("solve", help="one exact state as JSON", **kw)
    s.add_argument("--family", choices=es.FAMILIES, required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--etaN", type=float, required=True)
    s.add_argument("--branch", type=int, default=1)

    w = sub.add_parser("sweep", help="continuation sweep as CSV", **kw)
    w.add_argument("--family", choices=es.FAMILIES, required=True)
    w.add_argument("--gamma", type=float, required=True)
    w.add_argument("--range", nargs=2, type=float, metavar=("START", "STOP"), required=True)
    w.add_argument("--step", type=float, default=0.01)
    w.add_argument("--branch", type=int, default=1)

    t = sub.add_parser("twomode", help="two-mode estimates as JSON", **kw)
    t.add_argument("--gamma", type=float, required=True)
    t.add_argument("--etaN", type=float, required=True)

    c = sub.add_parser("critical", help="critical interaction strengths versus gamma", **kw)
    c.add_argument("--gamma-range", nargs=2, type=float, metavar=("START", "STOP"), default=[2.0, 30.0])
    c.add_argument("--step", type=float, default=1.0)

    b = sub.add_parser("stability", help="BdG frequencies along etaN as CSV", **kw)
    b.add_argument("--family", choices=es.FAMILIES, required=True)
    b.add_argument("--gamma", type=float, required=True)
    b.add_argument("--etaN-range", nargs=2, type=float, metavar=("START", "STOP"), required=True)
    b.add_argument("--step", type=float, default=0.1)
    b.add_argument("--basis", type=int, default=6)

    o = sub.add_parser("oracle", help="grid imaginary-time cross-check", **kw)
    osub = o.add_subparsers(dest="oracle_cmd", required=True, parser_class=_Parser)
    og = osub.add_parser("ground", **kw)
    og.add_argument("--gamma", type=float, required=True)
    og.add_argument("--etaN", type=float, required=True)
    og.add_argument("--init", choices=["symmetric", "noisy"], default="noisy")
    og.add_argument("--seed", type=int, default=go.DEFAULT_SEED)
    og.add_argument("--n-points", type=int, default=256)
    og.add_argument("--trajectory", help="write (t, x, density) CSV here")
    og.add_argument("--record-every", type=int, default=64)
    ok = osub.add_parser("kink", **kw)
    ok.add_argument("--gamma", type=float, required=True)
    ok.add_argument("--range", nargs=2, type=float, metavar=("START", "STOP"), default=[-4.0, -0.5])
    ok.add_argument("--step", type=float, default=0.1)

    r = sub.add_parser("reproduce", help="regenerate the data behind a figure or table", **kw)
    r.add_argument("target", choices=sorted(REPRODUCE))
    r.add_argument("--gamma", type=float, default=10.0)
    r.add_argument("--seed", type=int, default=go.DEFAULT_SEED)
    r.add_argument("--gamma-start", type=float, default=2.0)
    r.add_argument("--gamma-stop", type=float, default=30.0)
    r.add_argument("--gamma-step", type=float, default=1.0)
    return p


HANDLERS = {
    "elliptic": cmd_elliptic,
    "modes": cmd_modes,
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "twomode": cmd_twomode,
    "critical": cmd_critical,
    "stability": cmd_stability,
    "oracle": cmd_oracle,
    "reproduce": cmd_reproduce,
}


def _normalize_args(args):
    for name in ("range", "etaN_range", "gamma_range"):
        if getattr(args, name, None) is not None:
            args.start, args.stop = getattr(args, name)
    return args


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = _normalize_args(parser.parse_args(argv))
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        text, kind, summary = HANDLERS[args.command](args)
    except (SolverError, EllipticDomainError) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out:
        path = write_text(args.out, text)
        params = {k: v for k, v in vars(args).items() if k not in ("out", "threads")}
        record = RunRecord.create(args.command, params, [path])
        write_text(str(path) + ".run.json", json_text(record))
        print(f"{summary} -> {path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
