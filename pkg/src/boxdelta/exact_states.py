"""Exact stationary states of the box-delta Gross-Pitaevskii equation.

Every state is stored as two half-well profiles.  With ``s`` the distance
from the nearest wall (``s = 1 + x`` on the left, ``s = 1 - x`` on the right),
each side is

* repulsive (``etaN > 0``): ``g(s) = A sn(k s | m)``,
* attractive (``etaN < 0``): ``g(s) = A cn(k s - K(m) | m)``,

with ``A**2 = 2 k**2 m / |etaN|`` and chemical potential ``k**2 (1 + m)``
or ``k**2 (1 - 2m)`` respectively.  Both forms vanish at the wall, so the
remaining conditions live at the barrier: continuity, the derivative jump
``psi'(0+) - psi'(0-) = gamma psi(0)``, equal chemical potentials and unit
norm.  Symmetric, antisymmetric and asymmetric families all share this
representation; they differ only in how the sides are tied together.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .elliptic import EllipticDomainError, complete_E, complete_K, jacobi, jacobi_epsilon
from .newton import SolverError, damped_newton, jacobian
from .quadrature import integrate, split_rule

ANTISYM_REP = "antisym-rep"
SYM_REP = "sym-rep"
ANTISYM_ATT = "antisym-att"
SYM_ATT = "sym-att"
ASYM_ATT = "asym-att"
ASYM_REP = "asym-rep"
FAMILIES = (ANTISYM_REP, SYM_REP, ANTISYM_ATT, SYM_ATT, ASYM_ATT, ASYM_REP)

M_MIN = 1e-12
M_MAX = 1.0 - 1e-12
COLLAPSE_TOL = 1e-7
QUAD_NODES = 128
POLISH_TOL = 1e-12


class BelowBifurcationError(SolverError):
    """The asymmetric solve collapsed onto the symmetric/antisymmetric branch."""


@dataclass(frozen=True)
class SideParams:
    A: float
    k: float
    m: float


@dataclass(frozen=True)
class ExactState:
    family: str
    gamma: float
    etaN: float
    left: SideParams
    right: SideParams
    mu: float
    energy_per_particle: float
    node_count: int
    branch: int = 1

    @property
    def attractive(self) -> bool:
        return self.etaN < 0.0

    def __call__(self, x):
        return evaluate(self, x)

    def mirror(self) -> "ExactState":
        """The degenerate partner ``psi(-x)``."""
        return replace(self, left=self.right, right=self.left)

    def residuals(self) -> dict[str, float]:
        return state_residuals(self)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["residuals"] = self.residuals()
        return d


# ---------------------------------------------------------------------------
# half-well profiles


def side_value(side: SideParams, s, attractive: bool):
    """``g(s)`` and ``g'(s)`` for one half-well."""
    if attractive:
        K = complete_K(side.m)
        sn, cn, dn = jacobi(side.k * s - K, side.m)
        return side.A * cn, -side.A * side.k * sn * dn
    sn, cn, dn = jacobi(side.k * s, side.m)
    return side.A * sn, side.A * side.k * cn * dn


def side_mu(k: float, m: float, attractive: bool) -> float:
    return k * k * (1.0 - 2.0 * m) if attractive else k * k * (1.0 + m)


def side_norm(side: SideParams, attractive: bool) -> float:
    """Closed-form ``integral_0^1 g(s)**2 ds``."""
    k, m = side.k, side.m
    if attractive:
        K = complete_K(m)
        inner = jacobi_epsilon(k - K, m) + complete_E(m) - (1.0 - m) * k
    else:
        inner = k - jacobi_epsilon(k, m)
    return side.A**2 * inner / (k * m)


def amplitude(k: float, m: float, etaN: float) -> float:
    return math.sqrt(2.0 * k * k * m / abs(etaN))


def _sides_from(k1, m1, k2, m2, etaN, s1=1.0, s2=1.0) -> tuple[SideParams, SideParams]:
    return (
        SideParams(s1 * amplitude(k1, m1, etaN), k1, m1),
        SideParams(s2 * amplitude(k2, m2, etaN), k2, m2),
    )


def barrier_conditions(left: SideParams, right: SideParams, gamma: float, etaN: float) -> np.ndarray:
    """[mu_L - mu_R, continuity, derivative jump, norm - 1] at the barrier."""
    att = etaN < 0.0
    gl, dgl = side_value(left, 1.0, att)
    gr, dgr = side_value(right, 1.0, att)
    return np.array(
        [
            side_mu(left.k, left.m, att) - side_mu(right.k, right.m, att),
            gl - gr,
            -dgr - dgl - gamma * 0.5 * (gl + gr),
            side_norm(left, att) + side_norm(right, att) - 1.0,
        ]
    )


def state_residuals(state: ExactState) -> dict[str, float]:
    """The six defining conditions of an exact state, each zero at a solution."""
    att = state.attractive
    L, R = state.left, state.right
    gl, dgl = side_value(L, 1.0, att)
    gr, dgr = side_value(R, 1.0, att)
    scale = abs(state.etaN)
    return {
        "amplitude_left": L.A**2 - 2.0 * L.k**2 * L.m / scale,
        "amplitude_right": R.A**2 - 2.0 * R.k**2 * R.m / scale,
        "mu_equality": side_mu(L.k, L.m, att) - side_mu(R.k, R.m, att),
        "continuity": gl - gr,
        "jump": -dgr - dgl - state.gamma * gl,
        "normalization": side_norm(L, att) + side_norm(R, att) - 1.0,
    }


# ---------------------------------------------------------------------------
# wavefunction, integrals, energy


def evaluate(state: ExactState, x):
    """``psi(x)`` on ``[-1, 1]``; the barrier point takes the right-hand branch."""
    xa = np.asarray(x, dtype=float)
    if np.any(np.abs(xa) > 1.0):
        raise ValueError("x outside the box [-1, 1]")
    att = state.attractive
    if xa.ndim == 0:
        xv = float(xa)
        side, s = (state.left, 1.0 + xv) if xv < 0.0 else (state.right, 1.0 - xv)
        return float(side_value(side, s, att)[0])
    out = np.empty_like(xa)
    neg = xa < 0.0
    if np.any(neg):
        out[neg] = side_value(state.left, 1.0 + xa[neg], att)[0]
    if np.any(~neg):
        out[~neg] = side_value(state.right, 1.0 - xa[~neg], att)[0]
    return out


def derivative(state: ExactState, x):
    """``psi'(x)``; at ``x = 0`` the right-hand limit."""
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    att = state.attractive
    out = np.empty_like(xa)
    neg = xa < 0.0
    if np.any(neg):
        out[neg] = side_value(state.left, 1.0 + xa[neg], att)[1]
    if np.any(~neg):
        out[~neg] = -side_value(state.right, 1.0 - xa[~neg], att)[1]
    return out if np.ndim(x) else float(out[0])


def quartic_integral(state: ExactState, nodes: int = QUAD_NODES) -> float:
    x, _ = split_rule(nodes)
    return integrate(evaluate(state, x) ** 4, nodes)


def energy_per_particle(state: ExactState, nodes: int = QUAD_NODES) -> float:
    """Gross-Pitaevskii energy per particle, ``mu - (etaN/2) * integral psi**4``."""
    return state.mu - 0.5 * state.etaN * quartic_integral(state, nodes)


def count_nodes(state: ExactState, samples: int = 4001) -> int:
    """Interior sign changes of psi; an exact zero at the barrier counts once."""
    x = np.linspace(-1.0, 1.0, samples)[1:-1]
    psi = evaluate(state, x)
    scale = np.max(np.abs(psi))
    sgn = np.sign(np.where(np.abs(psi) < 1e-12 * scale, 0.0, psi))
    sgn = sgn[sgn != 0.0]
    return int(np.count_nonzero(np.diff(sgn)))


def _finish(family, gamma, etaN, left, right, branch) -> ExactState:
    att = etaN < 0.0
    mu = 0.5 * (side_mu(left.k, left.m, att) + side_mu(right.k, right.m, att))
    st = ExactState(family, float(gamma), float(etaN), left, right, mu, 0.0, 0, int(branch))
    return replace(st, energy_per_particle=energy_per_particle(st), node_count=count_nodes(st))


def _root(f, lo, hi, what):
    try:
        flo, fhi = f(lo), f(hi)
    except EllipticDomainError as exc:
        raise SolverError(f"{what}: {exc}") from exc
    if flo * fhi > 0.0:
        raise SolverError(f"{what}: no sign change on [{lo:.3g}, {hi:.3g}]", {"f_lo": flo, "f_hi": fhi})
    return brentq(f, lo, hi, xtol=1e-15, rtol=8 * np.finfo(float).eps, maxiter=300)


# ---------------------------------------------------------------------------
# states that keep the parity of the linear problem


def solve_antisym_repulsive(etaN: float, j: int = 1, gamma: float = 1.0) -> ExactState:
    """Odd state ``A sn(2jK x | m)``; independent of the barrier strength."""
    if not etaN > 0.0:
        raise ValueError("repulsive family needs etaN > 0")

    def f(m):
        K = complete_K(m)
        return 16.0 * j * j * K * (K - complete_E(m)) / etaN - 1.0

    m = _root(f, M_MIN, M_MAX, "antisymmetric repulsive")
    k = 2.0 * j * complete_K(m)
    A = amplitude(k, m, etaN)
    sign = (-1.0) ** j
    return _finish(ANTISYM_REP, gamma, etaN, SideParams(sign * A, k, m), SideParams(-sign * A, k, m), j)


def solve_antisym_attractive(etaN: float, j: int = 1, gamma: float = 1.0) -> ExactState:
    """Odd state ``A cn(2jK x - K | m)``; independent of the barrier strength."""
    if not etaN < 0.0:
        raise ValueError("attractive family needs etaN < 0")

    def f(m):
        K = complete_K(m)
        return 16.0 * j * j * K * (complete_E(m) - (1.0 - m) * K) / abs(etaN) - 1.0

    m = _root(f, M_MIN, M_MAX, "antisymmetric attractive")
    k = 2.0 * j * complete_K(m)
    A = amplitude(k, m, etaN)
    sign = (-1.0) ** j
    return _finish(ANTISYM_ATT, gamma, etaN, SideParams(sign * A, k, m), SideParams(-sign * A, k, m), j)


def _symmetric_k(m: float, gamma: float, branch: int, attractive: bool) -> float:
    """Barrier derivative condition solved for k in ((2n-1)K, 2nK) at fixed m."""
    K = complete_K(m)
    if attractive:

        def f(k):
            sn, cn, dn = jacobi(k - K, m)
            return 2.0 * k * sn * dn - gamma * cn

    else:

        def f(k):
            sn, cn, dn = jacobi(k, m)
            return 2.0 * k * cn * dn + gamma * sn

    return _root(f, (2 * branch - 1) * K, 2 * branch * K, "barrier condition")


def _solve_symmetric(gamma, etaN, branch, attractive) -> ExactState:
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    if branch < 1:
        raise ValueError("branch counts from 1")

    def norm_condition(m):
        k = _symmetric_k(m, gamma, branch, attractive)
        side = SideParams(amplitude(k, m, etaN), k, m)
        return 2.0 * side_norm(side, attractive) - 1.0

    m = _root(norm_condition, M_MIN, M_MAX, "symmetric normalization")
    k = _symmetric_k(m, gamma, branch, attractive)
    side = SideParams(amplitude(k, m, etaN), k, m)
    return _finish(SYM_ATT if attractive else SYM_REP, gamma, etaN, side, side, branch)


def solve_sym_repulsive(gamma: float, etaN: float, branch: int = 1) -> ExactState:
    """Even state ``A sn(k(1-|x|) | m)``."""
    if not etaN > 0.0:
        raise ValueError("repulsive family needs etaN > 0")
    return _solve_symmetric(gamma, etaN, branch, attractive=False)


def solve_sym_attractive(gamma: float, etaN: float, branch: int = 1) -> ExactState:
    """Even state ``A cn(k(1-|x|) - K | m)``."""
    if not etaN < 0.0:
        raise ValueError("attractive family needs etaN < 0")
    return _solve_symmetric(gamma, etaN, branch, attractive=True)


# ---------------------------------------------------------------------------
# asymmetric states


def _logit(m: float) -> float:
    return math.log(m) - math.log1p(-m)


def _expit(y: float) -> float:
    return 1.0 / (1.0 + math.exp(-y)) if y >= 0.0 else math.exp(y) / (1.0 + math.exp(y))


def _unpack(state: ExactState) -> np.ndarray:
    """Solver coordinates ``(k_L, logit m_L, k_R, logit m_R)``."""
    L, R = state.left, state.right
    return np.array([L.k, _logit(L.m), R.k, _logit(R.m)])


def _sides_y(x, etaN, signs) -> tuple[SideParams, SideParams]:
    return _sides_from(x[0], _expit(x[1]), x[2], _expit(x[3]), etaN, *signs)


def _collapsed(state: ExactState, tol: float = COLLAPSE_TOL) -> bool:
    L, R = state.left, state.right
    return max(abs(L.k - R.k), abs(L.m - R.m), abs(abs(L.A) - abs(R.A))) < tol


def _left_dominant(state: ExactState) -> ExactState:
    att = state.attractive
    if side_norm(state.right, att) > side_norm(state.left, att):
        state = state.mirror()
    return state


def _parent(family: str, gamma: float, etaN: float, branch: int) -> ExactState:
    if family == ASYM_ATT:
        return solve_sym_attractive(gamma, etaN, branch)
    return solve_antisym_repulsive(etaN, branch, gamma)


def _asym_system(gamma: float, etaN: float, signs: tuple[float, float]):
    def F(x):
        return barrier_conditions(*_sides_y(x, etaN, signs), gamma, etaN)

    return F


_Y_MAX = _logit(M_MAX)
_LOWER = [0.0, -_Y_MAX, 0.0, -_Y_MAX]
_UPPER = [np.inf, _Y_MAX, np.inf, _Y_MAX]


def _polish(family, gamma, etaN, x0, signs, branch) -> ExactState:
    # the jump residual carries k**2 and gamma, so its rounding floor grows with them
    tol = POLISH_TOL * max(1.0, gamma, abs(etaN), x0[0] ** 2, x0[2] ** 2)
    res = damped_newton(_asym_system(gamma, etaN, signs), x0, _LOWER, _UPPER, tol=tol, maxiter=60)
    L, R = _sides_y(res.x, etaN, signs)
    return _finish(family, gamma, etaN, L, R, branch)


def _branch_ok(state: ExactState, parent: ExactState) -> bool:
    """Same nodal structure as the parent away from the barrier."""
    return state.node_count == parent.node_count


def parent_jacobian_sign(family: str, gamma: float, etaN: float, branch: int = 1) -> float:
    """Sign of the barrier-system Jacobian determinant on the parent branch.

    The determinant changes sign where an asymmetric pair splits off.
    """
    p = _parent(family, gamma, etaN, branch)
    signs = (math.copysign(1.0, p.left.A), math.copysign(1.0, p.right.A))
    F = _asym_system(gamma, etaN, signs)
    x = _unpack(p)
    return float(np.sign(np.linalg.det(jacobian(F, x, F(x)))))


def _past_bifurcation(family, gamma, etaN, branch) -> bool:
    ref = 1e-3 * math.copysign(1.0, etaN)
    return parent_jacobian_sign(family, gamma, etaN, branch) != parent_jacobian_sign(family, gamma, ref, branch)


def _solve_asym(family, gamma, etaN, seed, branch) -> ExactState:
    if not gamma > 0.0:
        raise ValueError("gamma must be positive")
    if seed is not None:
        signs = (math.copysign(1.0, seed.left.A), math.copysign(1.0, seed.right.A))
        try:
            st = _polish(family, gamma, etaN, _unpack(seed), signs, branch)
        except SolverError as exc:
            raise SolverError(f"{family}: seeded solve failed at etaN={etaN}", exc.diagnostics) from exc
        if _collapsed(st):
            raise BelowBifurcationError(
                f"{family}: solution collapsed onto the parity-symmetric branch at etaN={etaN}",
                {"etaN": etaN, "left": asdict(st.left), "right": asdict(st.right)},
            )
        return _left_dominant(st)

    try:
        return _deflated_solve(family, gamma, etaN, branch)
    except SolverError:
        pass
    if not _past_bifurcation(family, gamma, etaN, branch):
        raise BelowBifurcationError(
            f"{family}: etaN={etaN} lies before the bifurcation of branch {branch}", {"etaN": etaN}
        )
    return _continue_from_bifurcation(family, gamma, etaN, branch)


def _deflated_solve(family, gamma, etaN, branch) -> ExactState:
    """Newton on the barrier system deflated away from the parent state."""
    parent = _parent(family, gamma, etaN, branch)
    signs = (math.copysign(1.0, parent.left.A), math.copysign(1.0, parent.right.A))
    xp = _unpack(parent)
    F = _asym_system(gamma, etaN, signs)

    def deflated(x):
        d = x - xp
        return F(x) * (1.0 / float(np.dot(d, d)) + 1.0)

    for amp in (0.05, 0.15, 0.3, 0.5):
        for dk, dy in ((0.0, 1.0), (1.0, 0.0), (1.0, 1.0), (1.0, -1.0)):
            x0 = xp + amp * np.array([dk * xp[0], 4.0 * dy, -dk * xp[2], -4.0 * dy])
            try:
                res = damped_newton(deflated, x0, _LOWER, _UPPER, tol=1e-10, maxiter=40)
                st = _polish(family, gamma, etaN, res.x, signs, branch)
            except SolverError:
                continue
            if not _collapsed(st) and _branch_ok(st, parent):
                return _left_dominant(st)
    raise SolverError(f"{family}: no asymmetric root found at etaN={etaN}", {"etaN": etaN})


def bifurcation_point(family: str, gamma: float, etaN: float, branch: int = 1, tol: float = 1e-6) -> float:
    """Interaction strength between 0 and ``etaN`` where the parent Jacobian changes sign."""
    ref = 1e-3 * math.copysign(1.0, etaN)
    s_ref = parent_jacobian_sign(family, gamma, ref, branch)
    if parent_jacobian_sign(family, gamma, etaN, branch) == s_ref:
        raise BelowBifurcationError(f"{family}: no bifurcation between {ref} and {etaN}", {"etaN": etaN})
    lo, hi = ref, etaN
    while abs(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        if parent_jacobian_sign(family, gamma, mid, branch) == s_ref:
            lo = mid
        else:
            hi = mid
    return hi


def _continue_from_bifurcation(family, gamma, etaN, branch) -> ExactState:
    """Adaptive continuation from just past the bifurcation out to ``etaN``."""
    ec = bifurcation_point(family, gamma, etaN, branch)
    state = None
    for frac in (0.02, 0.05, 0.1, 0.2):
        e0 = ec + frac * (etaN - ec)
        try:
            state = _deflated_solve(family, gamma, e0, branch)
            break
        except SolverError:
            continue
    if state is None:
        raise SolverError(f"{family}: no asymmetric root found near the bifurcation at {ec:.6g}", {"etaN": etaN})
    step = 0.1 * (etaN - e0)
    cur = e0
    while cur != etaN:
        nxt = etaN if abs(etaN - cur) <= abs(step) else cur + step
        try:
            state = _solve_asym(family, gamma, nxt, state, branch)
            cur = nxt
            step *= 1.5
        except SolverError:
            step *= 0.5
            if abs(step) < 1e-4:
                raise SolverError(f"{family}: continuation stalled at etaN={cur}", {"etaN": etaN, "reached": cur})
    return state


def solve_asym_attractive(gamma: float, etaN: float, seed: ExactState | None = None, branch: int = 1) -> ExactState:
    """Asymmetric attractive state split off the even branch ``branch``.

    Branch 1 has no nodes; branch 2 has one node in each well.  The returned
    member of the degenerate pair has most of its weight in the left well.
    """
    if not etaN < 0.0:
        raise ValueError("attractive family needs etaN < 0")
    return _solve_asym(ASYM_ATT, gamma, etaN, seed, branch)


def solve_asym_repulsive(gamma: float, etaN: float, seed: ExactState | None = None, branch: int = 1) -> ExactState:
    """Asymmetric repulsive state split off the odd branch ``branch`` (one node for branch 1)."""
    if not etaN > 0.0:
        raise ValueError("repulsive family needs etaN > 0")
    return _solve_asym(ASYM_REP, gamma, etaN, seed, branch)


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class SweepPoint:
    etaN: float
    state: ExactState | None
    error: str | None = None

    @property
    def converged(self) -> bool:
        return self.state is not None


def solve(family: str, gamma: float, etaN: float, branch: int = 1, seed: ExactState | None = None) -> ExactState:
    """Dispatch on the family name."""
    if family == ANTISYM_REP:
        return solve_antisym_repulsive(etaN, branch, gamma)
    if family == ANTISYM_ATT:
        return solve_antisym_attractive(etaN, branch, gamma)
    if family == SYM_REP:
        return solve_sym_repulsive(gamma, etaN, branch)
    if family == SYM_ATT:
        return solve_sym_attractive(gamma, etaN, branch)
    if family == ASYM_ATT:
        return solve_asym_attractive(gamma, etaN, seed, branch)
    if family == ASYM_REP:
        return solve_asym_repulsive(gamma, etaN, seed, branch)
    raise ValueError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")


def sweep_values(start: float, stop: float, step: float) -> np.ndarray:
    """Grid from ``start`` towards ``stop`` in steps of ``|step|``, endpoints included."""
    if step == 0.0:
        raise ValueError("step must be nonzero")
    n = int(math.floor(abs(stop - start) / abs(step) + 1e-9))
    vals = start + math.copysign(abs(step), stop - start) * np.arange(n + 1)
    return np.round(vals, 12)


def continuation_sweep(family: str, gamma: float, etaN_range, step: float, branch: int = 1) -> list[SweepPoint]:
    """Solve ``family`` along ``etaN_range = (start, stop)``.

    Asymmetric families seed each point from the last converged state; the
    first point (and any point after a failure) is solved unseeded.
    Failures are recorded in the returned points and do not stop the sweep.
    """
    start, stop = etaN_range
    seeded = family in (ASYM_ATT, ASYM_REP)
    out = []
    prev = None
    for e in sweep_values(float(start), float(stop), step):
        e = float(e)
        try:
            st = solve(family, gamma, e, branch, prev if seeded else None)
        except (SolverError, ValueError) as exc:
            out.append(SweepPoint(e, None, f"{type(exc).__name__}: {exc}"))
            prev = None
            continue
        out.append(SweepPoint(e, st))
        prev = st
    return out


def last_converged(points: list[SweepPoint]) -> float | None:
    """``etaN`` of the final point of the first unbroken converged run."""
    last = None
    for p in points:
        if not p.converged:
            if last is not None:
                break
            continue
        last = p.etaN
    return last
