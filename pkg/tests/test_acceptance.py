"""Acceptance criteria 1-10, each at its stated tolerance.

Every test gathers its checks as (description, passed) parts, records them
for the summary printed at the end of the run, and then asserts them all.
"""

import time

import numpy as np

from acceptance_log import record
from boxdelta import exact_states as es
from boxdelta import grid_oracle as go
from boxdelta import stability as stab
from boxdelta import two_mode as tm
from boxdelta.elliptic import jacobi
from boxdelta.linear_modes import antisymmetric_mode, overlaps, symmetric_mode
from test_exact_states import _overlap, gpe_residual


def within(value, target, tol):
    return value is not None and abs(value - target) <= tol


def part(label, value, target, tol):
    shown = "none" if value is None else f"{value:.6g}"
    return (f"{label}={shown} (want {target}+-{tol})", within(value, target, tol))


def finish(number, parts, t0):
    ok = record(number, parts, time.perf_counter() - t0)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'}")
    failed = [text for text, p in parts if not p]
    assert not failed, "; ".join(failed)


def test_criterion_01_antisymmetric_repulsive():
    t0 = time.perf_counter()
    s1 = es.solve_antisym_repulsive(10.0, 1)
    s2 = es.solve_antisym_repulsive(10.0, 2)
    elapsed = time.perf_counter() - t0
    parts = [
        part("j1 m", s1.left.m, 0.379, 0.001),
        part("j1 mu", s1.mu, 17.16, 0.01),
        part("j2 m", s2.left.m, 0.1172, 0.0005),
        part("j2 mu", s2.mu, 46.92, 0.01),
        (f"runtime {elapsed:.3f} s < 0.1 s", elapsed < 0.1),
    ]
    finish(1, parts, t0)


def test_criterion_02_symmetric_repulsive():
    t0 = time.perf_counter()
    parts = []
    for branch, (k, m, mu) in ((1, (3.067, 0.433, 13.48)), (2, (5.680, 0.140, 36.77))):
        s = es.solve_sym_repulsive(10.0, 10.0, branch)
        parts += [part(f"b{branch} k", s.left.k, k, 0.002), part(f"b{branch} m", s.left.m, m, 0.001), part(f"b{branch} mu", s.mu, mu, 0.01)]
    finish(2, parts, t0)


def test_criterion_03_symmetric_attractive():
    t0 = time.perf_counter()
    parts = []
    for branch, (k, m, mu, mu_tol) in ((1, (3.085, 0.490, 0.187, 0.005)), (2, (5.651, 0.146, 22.602, 0.01))):
        s = es.solve_sym_attractive(10.0, -10.0, branch)
        parts += [part(f"b{branch} k", s.left.k, k, 0.002), part(f"b{branch} m", s.left.m, m, 0.001), part(f"b{branch} mu", s.mu, mu, mu_tol)]
    finish(3, parts, t0)


def test_criterion_04_two_mode_constants():
    t0 = time.perf_counter()
    m = overlaps(10.0)
    parts = [
        part("k", symmetric_mode(10.0).k, 2.654, 0.001),
        part("e0", m.e0, 7.044, 0.005),
        part("chi40", m.chi40, 0.6616, 0.0005),
        part("chi04", m.chi04, 0.7500, 1e-6),
        part("chi22", m.chi22, 0.6681, 0.0005),
        part("attractive", abs(tm.critical_attractive_variational(m)), 2.11, 0.01),
        part("repulsive", tm.critical_repulsive_variational(m), 2.25, 0.01),
    ]
    finish(4, parts, t0)


def test_criterion_05_exact_thresholds_by_continuation():
    t0 = time.perf_counter()
    parts = []
    for fam, rng, target in ((es.ASYM_ATT, (-6.0, -2.0), -2.07), (es.ASYM_REP, (10.0, 2.0), 2.34)):
        t = time.perf_counter()
        pts = es.continuation_sweep(fam, 10.0, rng, 0.01)
        dt = time.perf_counter() - t
        parts.append(part(f"{fam} last converged", es.last_converged(pts), target, 0.03))
        parts.append((f"{fam} sweep {dt:.1f} s < 30 s", dt < 30.0))
    finish(5, parts, t0)


def test_criterion_06_asymmetric_existence():
    t0 = time.perf_counter()
    zero = es.solve_asym_attractive(10.0, -2.73)
    # the excited state has one node in each well (branch 2)
    excited = es.solve_asym_attractive(10.0, -10.2, branch=2)
    parts = []
    for label, s, nodes in (("zero-node", zero, 0), ("excited", excited, 2)):
        worst = max(abs(v) for v in s.residuals().values())
        parts.append((f"{label} max residual {worst:.1e} < 1e-8", worst < 1e-8))
        parts.append((f"{label} asymmetric", not es._collapsed(s)))
        parts.append((f"{label} node count {s.node_count} == {nodes}", s.node_count == nodes))
    finish(6, parts, t0)


def test_criterion_07_two_level_comparison():
    t0 = time.perf_counter()
    pts = es.continuation_sweep(es.ASYM_REP, 10.0, (10.0, 2.0), 0.01)
    sums = []
    for p in pts:
        if p.converged:
            aR, aL = tm.localized_amplitudes(p.state)
            sums.append((p.etaN, aR**2 + aL**2))
    worst_eta, worst = min(sums, key=lambda s: s[1])
    exact20 = es.bifurcation_point(es.ASYM_REP, 20.0, 10.0)
    sacchetti20 = tm.sacchetti_critical(overlaps(20.0))
    rel = abs(sacchetti20 - exact20) / exact20
    parts = [
        (f"min A_R^2+A_L^2 = {worst:.5f} at etaN={worst_eta:g} over {len(sums)} points > 0.997", worst > 0.997),
        (f"gamma=20 two-level {sacchetti20:.4f} vs exact {exact20:.4f}: {100 * rel:.2f}% < 5%", rel < 0.05),
    ]
    finish(7, parts, t0)


def test_criterion_08_stability():
    t0 = time.perf_counter()
    parts = []

    def sweep(label, family, gamma, rng, basis):
        t = time.perf_counter()
        th = stab.instability_thresholds(family, gamma, rng, step=0.25, basis_size=basis)
        dt = time.perf_counter() - t
        parts.append((f"{label} sweep {dt:.1f} s < 60 s", dt < 60.0))
        return th

    th = sweep("sym gamma=10", es.SYM_ATT, 10.0, (-0.25, -6.0), 6)
    parts.append((f"sym gamma=10 one change, got {len(th)}", len(th) == 1 and th[0].before == stab.STABLE))
    parts.append(part("sym gamma=10 threshold", th[0].etaN if th else None, -2.07, 0.05))
    rep = sweep("sym repulsive gamma=10", es.SYM_REP, 10.0, (0.25, 6.0), 6)
    parts.append((f"sym repulsive gamma=10 stable, changes {len(rep)}", rep == []))

    th = sweep("antisym gamma=10", es.ANTISYM_REP, 10.0, (0.25, 6.0), 6)
    parts.append((f"antisym gamma=10 one change, got {len(th)}", len(th) == 1 and th[0].before == stab.STABLE))
    parts.append(part("antisym gamma=10 threshold", th[0].etaN if th else None, 2.34, 0.05))

    # six modes are not converged at gamma=1; twelve are
    th = sweep("gamma=1 attractive", es.ANTISYM_ATT, 1.0, (-0.25, -12.0), 12)
    onset = th[0].etaN if th and th[0].after == stab.OSCILLATORY else None
    parts.append(part("gamma=1 oscillatory onset", onset, -7.6, 0.3))
    re_lam = None
    if onset is not None:
        spectrum = stab.bdg_spectrum(es.solve_antisym_attractive(onset - 0.05, 1, 1.0), 12)
        lam = spectrum.frequencies()
        cplx = lam[np.abs(lam.imag) > stab.IMAG_TOL]
        re_lam = float(abs(cplx[0].real)) if cplx.size else None
    parts.append(part("gamma=1 |Re lambda| at onset", re_lam, 10.4, 0.3))
    th = sweep("gamma=1 repulsive", es.ANTISYM_REP, 1.0, (0.25, 16.0), 12)
    onset = th[0].etaN if th and th[0].after == stab.NON_OSCILLATORY else None
    parts.append(part("gamma=1 non-oscillatory onset", onset, 13.5, 0.5))

    t = time.perf_counter()
    gstar = stab.coalescence_gamma()
    dt = time.perf_counter() - t
    parts.append(part("coalescence gamma", gstar, 5.94, 0.1))
    parts.append((f"coalescence scan {dt:.1f} s < 60 s", dt < 60.0))
    finish(8, parts, t0)


def test_criterion_09_grid_oracle():
    t0 = time.perf_counter()
    run = go.imaginary_time_ground(go.GridConfig(10.0, -5.0), init="noisy")
    kink = go.kink_critical(10.0)
    elapsed = time.perf_counter() - t0
    parts = [
        (f"z_asym={run.z_asym:.4f} > 0.5", run.z_asym > 0.5),
        (f"kink={kink} within 15% of -2.07", kink is not None and abs(kink + 2.07) <= 0.15 * 2.07),
        (f"runtime {elapsed:.1f} s < 120 s", elapsed < 120.0),
    ]
    finish(9, parts, t0)


def test_criterion_10_property_suites():
    t0 = time.perf_counter()
    parts = []

    rng = np.random.default_rng(2024)
    u, m = rng.uniform(-8, 8, 20_000), rng.uniform(0, 0.999, 20_000)
    sn, cn, dn = jacobi(u, m)
    err = max(np.max(np.abs(sn**2 + cn**2 - 1)), np.max(np.abs(dn**2 - 1 + m * sn**2)))
    parts.append((f"elliptic identities max error {err:.1e} < 1e-10", err < 1e-10))

    cases = [
        (es.SYM_REP, 10.0, 10.0, 1),
        (es.SYM_ATT, 10.0, -10.0, 2),
        (es.ANTISYM_REP, 10.0, 10.0, 2),
        (es.ANTISYM_ATT, 10.0, -10.0, 1),
        (es.ASYM_ATT, 10.0, -2.73, 1),
        (es.ASYM_REP, 10.0, 10.0, 1),
    ]
    states = [es.solve(f, g, e, b) for f, g, e, b in cases]
    rel = max(r / s for r, s in (gpe_residual(st) for st in states))
    parts.append((f"GPE residual max relative {rel:.1e} < 1e-6", rel < 1e-6))

    limits = [
        (es.SYM_REP, 1e-4, symmetric_mode(10.0)),
        (es.SYM_ATT, -1e-4, symmetric_mode(10.0)),
        (es.ANTISYM_REP, 1e-4, antisymmetric_mode(10.0)),
        (es.ANTISYM_ATT, -1e-4, antisymmetric_mode(10.0)),
    ]
    worst = min(_overlap(es.solve(f, 10.0, e), mode) for f, e, mode in limits)
    parts.append((f"linear-limit overlap min {worst:.9f} > 1-1e-6", worst > 1 - 1e-6))

    diff = 0.0
    for st in states:
        M1, M3 = stab.product_matrices(st, 8)
        a = np.sort_complex(np.linalg.eigvals(M1 @ M3))
        b = np.sort_complex(np.linalg.eigvals(M3 @ M1))
        diff = max(diff, float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a)))))
    parts.append((f"M1M3 vs M3M1 spectra differ by {diff:.1e} < 1e-8", diff < 1e-8))

    mirror = 0.0
    for st in states[4:]:
        mt = st.mirror()
        mirror = max(mirror, max(abs(v) for v in mt.residuals().values()), abs(mt.mu - st.mu))
        mirror = max(mirror, abs(es.energy_per_particle(mt) - st.energy_per_particle))
    parts.append((f"mirror degeneracy max deviation {mirror:.1e} < 1e-8", mirror < 1e-8))
    finish(10, parts, t0)
