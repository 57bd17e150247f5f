"""Two-mode descriptions of the double well and closed-form bifurcation estimates.

Two truncations of the condensate to the lowest even/odd pair are provided:

* the variational one, ``psi = u*phi0 + v*phi1`` with real ``u, v``;
* the localized-basis (semiclassical) one in terms of
  ``phi_R, phi_L = (phi0 +- phi1)/sqrt(2)``, whose stationary points are
  described by the population imbalance ``z`` and relative phase ``theta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .exact_states import ExactState, evaluate
from .linear_modes import TwoModeModel, basis, overlaps
from .quadrature import integrate, split_rule

__all__ = [
    "TwoModeModel",
    "TwoModeState",
    "AsymmetryPoint",
    "overlaps",
    "variational_u2",
    "variational_energy",
    "variational_states",
    "stationary_gammas",
    "critical_attractive_variational",
    "critical_repulsive_variational",
    "malomed_large",
    "malomed_small",
    "zeta",
    "sacchetti_z",
    "sacchetti_points",
    "sacchetti_critical",
    "localized_amplitudes",
    "z_exact",
]


@dataclass(frozen=True)
class TwoModeState:
    u: float
    v: float
    Gamma: float
    energy: float


@dataclass(frozen=True)
class AsymmetryPoint:
    etaN: float
    z: float
    theta: float
    degenerate_pair: bool = True


def variational_u2(model: TwoModeModel, etaN: float) -> float | None:
    """Weight of the even mode at the asymmetric stationary point, or None.

    None means no asymmetric stationary point exists (the ratio falls outside
    the open interval (0, 1)).
    """
    if etaN == 0.0:
        return None
    den = etaN * (6.0 * model.chi22 - model.chi40 - model.chi04)
    if den == 0.0:
        return None
    u2 = (etaN * (3.0 * model.chi22 - model.chi04) - model.Delta) / den
    return u2 if 0.0 < u2 < 1.0 else None


def variational_energy(model: TwoModeModel, u: float, etaN: float) -> float:
    u2 = u * u
    v2 = 1.0 - u2
    return (
        u2 * model.e0
        + v2 * model.e1
        + 0.5 * etaN * (model.chi40 * u2 * u2 + model.chi04 * v2 * v2 + 6.0 * model.chi22 * u2 * v2)
    )


def stationary_gammas(model: TwoModeModel, u: float, v: float, etaN: float) -> tuple[float | None, float | None]:
    """The two-mode chemical potential as read off each stationary equation.

    Either entry is None when its coefficient vanishes (the equation is then
    satisfied for any value).
    """
    g1 = model.e0 + etaN * (u * u * model.chi40 + 3.0 * v * v * model.chi22) if u != 0.0 else None
    g2 = model.e1 + etaN * (v * v * model.chi04 + 3.0 * u * u * model.chi22) if v != 0.0 else None
    return g1, g2


def variational_states(model: TwoModeModel, etaN: float) -> list[TwoModeState]:
    """All real stationary states: pure even, pure odd, and the asymmetric one if present."""
    out = [
        TwoModeState(1.0, 0.0, model.e0 + etaN * model.chi40, variational_energy(model, 1.0, etaN)),
        TwoModeState(0.0, 1.0, model.e1 + etaN * model.chi04, variational_energy(model, 0.0, etaN)),
    ]
    u2 = variational_u2(model, etaN)
    if u2 is not None:
        u, v = math.sqrt(u2), math.sqrt(1.0 - u2)
        g1, _ = stationary_gammas(model, u, v, etaN)
        out.append(TwoModeState(u, v, g1, variational_energy(model, u, etaN)))
    return out


def critical_attractive_variational(model: TwoModeModel) -> float:
    """Attractive threshold where the asymmetric state leaves the even state."""
    return -model.Delta / (3.0 * model.chi22 - model.chi40)


def critical_repulsive_variational(model: TwoModeModel) -> float:
    """Repulsive threshold where the asymmetric state leaves the odd state."""
    return model.Delta / (3.0 * model.chi22 - model.chi04)


def malomed_large(gamma: float) -> float:
    """Large-barrier estimate ``8 pi^2 / (3 gamma)`` (magnitude, attractive side)."""
    return 8.0 * math.pi**2 / (3.0 * gamma)


def malomed_small(gamma: float) -> float:
    """Small-barrier estimate ``2 ln(16/gamma)`` (magnitude, attractive side)."""
    return 2.0 * math.log(16.0 / gamma)


def zeta(model: TwoModeModel, etaN: float) -> float:
    """Effective interaction ``W40 * etaN / omega`` of the localized two-level model."""
    return model.W40 * etaN / model.omega


def sacchetti_z(zeta_value: float) -> float | None:
    """Magnitude of the stationary imbalance ``sqrt(1 - 4/zeta^2)``, None for ``|zeta| <= 2``.

    The pair ``+-z`` is degenerate; the positive member is returned.
    """
    if abs(zeta_value) <= 2.0:
        return 0.0 if abs(zeta_value) == 2.0 else None
    return math.sqrt(1.0 - 4.0 / zeta_value**2)


def sacchetti_points(model: TwoModeModel, etaN: float) -> list[AsymmetryPoint]:
    """Stationary ``(z, theta)`` points of the localized two-level model.

    ``z = 0`` exists for both phases; the asymmetric pair sits at ``theta = pi``
    for ``zeta > 2`` and at ``theta = 0`` for ``zeta < -2``.
    """
    pts = [AsymmetryPoint(etaN, 0.0, 0.0, False), AsymmetryPoint(etaN, 0.0, math.pi, False)]
    zt = zeta(model, etaN)
    z = sacchetti_z(zt)
    if z:
        pts.append(AsymmetryPoint(etaN, z, math.pi if zt > 0 else 0.0, True))
    return pts


def sacchetti_critical(model: TwoModeModel) -> float:
    """Repulsive threshold ``2 omega / W40`` where ``zeta`` reaches 2."""
    return 2.0 * model.omega / model.W40


def localized_amplitudes(state: ExactState, nodes: int = 128) -> tuple[float, float]:
    """Projections ``(A_R, A_L)`` of an exact state on the localized pair."""
    phi0, phi1 = basis(state.gamma, 2, nodes)
    x, _ = split_rule(nodes)
    p0, p1 = phi0(x), phi1(x)
    psi = evaluate(state, x)
    aR = integrate((p0 + p1) * psi, nodes) / math.sqrt(2.0)
    aL = integrate((p0 - p1) * psi, nodes) / math.sqrt(2.0)
    return aR, aL


def z_exact(state: ExactState, model: TwoModeModel | None = None, nodes: int = 128) -> float:
    """Imbalance ``(A_L^2 - A_R^2)/(A_L^2 + A_R^2)`` of an exact state.

    Positive for a state that sits mainly in the left well.  ``model`` is
    accepted for symmetry with the two-mode estimates and is not needed.
    """
    aR, aL = localized_amplitudes(state, nodes)
    return float((aL**2 - aR**2) / (aL**2 + aR**2))
