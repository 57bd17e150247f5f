"""Bogoliubov-de Gennes stability of exact states by expansion in linear modes.

With ``s = u + v`` and ``t = u - v`` the linearized equations become
``M3 s = lambda t`` and ``M1 t = lambda s`` where, in the basis of
non-interacting modes,

    M3 = diag(eps - mu) + 3*Omega,   M1 = diag(eps - mu) + Omega,
    Omega_ab = etaN <a| psi**2 |b>.

The frequencies follow from the eigenvalues ``lambda**2`` of ``M1 @ M3``.

A truncated basis turns the exact zero (phase) mode into a small, possibly
negative ``lambda**2``.  It is identified by the overlap of ``M3 s`` with the
state's own coefficient vector and is left out of the classification.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import exact_states as es
from .exact_states import ExactState, SolverError, evaluate
from .linear_modes import LinearMode, basis, sample
from .quadrature import integrate, split_rule

STABLE = "stable"
NON_OSCILLATORY = "non_oscillatory_unstable"
OSCILLATORY = "oscillatory_unstable"

IMAG_TOL = 1e-6
QUAD_NODES = 128
MIN_RELIABLE_BASIS = 3


@dataclass
class StabilitySpectrum:
    basis_size: int
    mu: float
    lambda_squared: np.ndarray
    lam: np.ndarray
    classification: str
    modes: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)
    goldstone_index: int | None = None
    warning: str | None = None

    def frequencies(self) -> np.ndarray:
        """Non-zero-mode frequencies with ``Re >= 0``, ordered by modulus."""
        keep = [i for i in range(self.basis_size) if i != self.goldstone_index]
        lam = self.lam[keep]
        return lam[np.argsort(np.abs(lam), kind="stable")]

    def lowest(self, count: int = 2) -> np.ndarray:
        return self.frequencies()[:count]


def build_interaction_matrix(state: ExactState, modes: list[LinearMode], nodes: int = QUAD_NODES) -> np.ndarray:
    """``Omega_ab = etaN * integral phi_a psi**2 phi_b`` on the split rule."""
    x, _ = split_rule(nodes)
    phi = sample(modes, nodes)
    w = state.etaN * evaluate(state, x) ** 2
    n = len(modes)
    out = np.empty((n, n))
    for a in range(n):
        for b in range(a, n):
            out[a, b] = out[b, a] = integrate(phi[a] * w * phi[b], nodes)
    return out


def product_matrices(state: ExactState, basis_size: int, nodes: int = QUAD_NODES) -> tuple[np.ndarray, np.ndarray]:
    """``(M1, M3)`` for ``state`` in the ``basis_size`` lowest linear modes."""
    modes = basis(state.gamma, basis_size, nodes)
    omega = build_interaction_matrix(state, modes, nodes)
    d = np.diag([m.energy - state.mu for m in modes])
    return d + omega, d + 3.0 * omega


def state_coefficients(state: ExactState, basis_size: int, nodes: int = QUAD_NODES) -> np.ndarray:
    """Projections of the stationary state onto the linear modes."""
    modes = basis(state.gamma, basis_size, nodes)
    x, _ = split_rule(nodes)
    psi = evaluate(state, x)
    return np.array([integrate(m(x) * psi, nodes) for m in modes])


def _principal_root(z: complex) -> complex:
    r = complex(np.sqrt(complex(z)))
    return -r if r.real < 0.0 or (r.real == 0.0 and r.imag < 0.0) else r


def classify(lam: np.ndarray, tol: float = IMAG_TOL) -> str:
    if lam.size == 0 or np.max(np.abs(lam.imag)) < tol:
        return STABLE
    if np.any((np.abs(lam.real) > tol) & (np.abs(lam.imag) > tol)):
        return OSCILLATORY
    return NON_OSCILLATORY


def bdg_spectrum(
    state: ExactState,
    basis_size: int = 6,
    tol: float = IMAG_TOL,
    nodes: int = QUAD_NODES,
) -> StabilitySpectrum:
    """Eigenfrequencies of the linearization about ``state``.

    ``lam`` holds one root per eigenvalue of ``M1 @ M3`` (``Re >= 0``)
    followed by the negated partners.  Modes are returned as coefficient
    vectors ``(u, v)`` normalized to ``sum(u**2 - v**2) = 1``; the zero mode
    and modes of vanishing norm are returned unnormalized.
    """
    if basis_size < 2:
        raise ValueError("basis_size must be at least 2")
    M1, M3 = product_matrices(state, basis_size, nodes)
    lam2, S = np.linalg.eig(M1 @ M3)
    order = np.lexsort((lam2.imag, lam2.real))
    lam2, S = lam2[order], S[:, order]
    lam = np.array([_principal_root(z) for z in lam2])

    c = state_coefficients(state, basis_size, nodes)
    c = c / np.linalg.norm(c)
    T_dir = M3 @ S
    align = np.abs(c @ T_dir) / np.maximum(np.linalg.norm(T_dir, axis=0), 1e-300)
    gold = int(np.argmax(align))

    modes = []
    for i in range(basis_size):
        s = S[:, i].astype(complex)
        if i == gold or abs(lam[i]) < 1e-12:
            t = T_dir[:, i].astype(complex)
            modes.append((0.5 * (s + t), 0.5 * (s - t)))
            continue
        t = T_dir[:, i] / lam[i]
        norm = np.sum(s * t)
        if norm.real < 0.0 and abs(norm.imag) < 1e-12 * abs(norm):
            # negative norm: the partner -lambda carries the positive-norm mode
            t, norm = -t, -norm
        if abs(norm) > 1e-14:
            scale = np.sqrt(norm)
            s, t = s / scale, t / scale
        modes.append((0.5 * (s + t), 0.5 * (s - t)))

    keep = np.array([i for i in range(basis_size) if i != gold])
    warning = None
    if basis_size < MIN_RELIABLE_BASIS:
        warning = f"basis_size={basis_size} cannot show oscillatory instability (needs at least {MIN_RELIABLE_BASIS})"
    return StabilitySpectrum(
        basis_size=basis_size,
        mu=state.mu,
        lambda_squared=lam2,
        lam=np.concatenate([lam, -lam]),
        classification=classify(lam[keep], tol),
        modes=modes,
        goldstone_index=gold,
        warning=warning,
    )


def mode_functions(spectrum: StabilitySpectrum, gamma: float, index: int, x, nodes: int = QUAD_NODES):
    """``u(x), v(x)`` of mode ``index`` from its coefficient vectors."""
    modes = basis(gamma, spectrum.basis_size, nodes)
    phi = np.array([m(x) for m in modes])
    u, v = spectrum.modes[index]
    return u @ phi, v @ phi


# ---------------------------------------------------------------------------
# sweeps


@dataclass(frozen=True)
class StabilityPoint:
    etaN: float
    classification: str | None
    lowest: tuple[complex, ...] = ()
    error: str | None = None


def _state(family: str, gamma: float, etaN: float, branch: int) -> ExactState:
    return es.solve(family, gamma, etaN, branch)


def stability_at(family: str, gamma: float, etaN: float, basis_size: int = 6, branch: int = 1) -> StabilityPoint:
    try:
        spectrum = bdg_spectrum(_state(family, gamma, etaN, branch), basis_size)
    except (SolverError, ValueError) as exc:
        return StabilityPoint(etaN, None, (), f"{type(exc).__name__}: {exc}")
    return StabilityPoint(etaN, spectrum.classification, tuple(complex(z) for z in spectrum.lowest(2)))


def stability_sweep(family, gamma, etaN_range, step, basis_size=6, branch=1) -> list[StabilityPoint]:
    a, b = etaN_range
    return [stability_at(family, gamma, float(e), basis_size, branch) for e in es.sweep_values(a, b, step)]


@dataclass(frozen=True)
class Threshold:
    etaN: float
    before: str
    after: str


def instability_thresholds(
    family: str,
    gamma: float,
    etaN_range,
    step: float = 0.25,
    basis_size: int = 6,
    tol: float = 0.05,
    branch: int = 1,
) -> list[Threshold]:
    """Places where the classification changes, bisected to ``tol`` in ``etaN``.

    The range is scanned with ``step`` first; each change between neighbours
    is then refined.  The reported value is the midpoint of the final bracket.
    """
    pts = stability_sweep(family, gamma, etaN_range, step, basis_size, branch)
    out = []
    for p, q in zip(pts, pts[1:]):
        if p.classification is None or q.classification is None or p.classification == q.classification:
            continue
        lo, hi = p.etaN, q.etaN
        while abs(hi - lo) > tol:
            mid = 0.5 * (lo + hi)
            c = stability_at(family, gamma, mid, basis_size, branch).classification
            if c == p.classification:
                lo = mid
            else:
                hi = mid
        out.append(Threshold(0.5 * (lo + hi), p.classification, q.classification))
    return out


COALESCENCE_BASIS = 24
COALESCENCE_RANGE = (-0.25, -90.0)


def has_oscillatory(
    gamma: float, etaN_range=COALESCENCE_RANGE, step: float = 0.25, basis_size: int = COALESCENCE_BASIS
) -> bool:
    """Whether the antisymmetric attractive state shows a complex frequency pair in the range."""
    return any(
        p.classification == OSCILLATORY
        for p in stability_sweep(es.ANTISYM_ATT, gamma, etaN_range, step, basis_size)
    )


def coalescence_gamma(
    gamma_range=(1.0, 10.0),
    etaN_range=COALESCENCE_RANGE,
    step: float = 0.25,
    basis_size: int = COALESCENCE_BASIS,
    tol: float = 0.05,
) -> float | None:
    """Barrier strength at which the two lowest frequencies of the
    antisymmetric attractive state just touch.

    Below it the scan over ``etaN_range`` finds an oscillatory (complex)
    pair; above it none.  Returns None if the ends of ``gamma_range`` agree.
    Near the touching point the complex window sits at large ``|etaN|`` where
    the state is strongly localized, hence the wide range and larger basis.
    """
    lo, hi = gamma_range
    f_lo = has_oscillatory(lo, etaN_range, step, basis_size)
    f_hi = has_oscillatory(hi, etaN_range, step, basis_size)
    if f_lo == f_hi:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if has_oscillatory(mid, etaN_range, step, basis_size) == f_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
