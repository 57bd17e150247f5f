"""Eigenstates of the non-interacting box-delta Hamiltonian ``-d2/dx2 + gamma*delta(x)``.

Odd states never feel the barrier: ``sin(j*pi*x)`` with ``k = j*pi``.  Even
states are ``A*(sin(k|x|) + (2k/gamma) cos(kx))`` where ``k`` solves
``tan k = -2k/gamma``.  Energies are ``k**2`` in units of hbar^2/(2 m a^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .quadrature import DEFAULT_NODES, integrate, split_rule

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"


@dataclass(frozen=True)
class LinearMode:
    parity: str
    index: int
    k: float
    energy: float
    amplitude: float
    gamma: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if self.parity == ANTISYMMETRIC:
            return self.amplitude * np.sin(self.k * x)
        return self.amplitude * (
            np.sin(self.k * np.abs(x)) + 2.0 * self.k / self.gamma * np.cos(self.k * x)
        )

    def derivative(self, x):
        """Derivative away from the origin (one-sided at ``x = 0``, right limit)."""
        x = np.asarray(x, dtype=float)
        k = self.k
        if self.parity == ANTISYMMETRIC:
            return self.amplitude * k * np.cos(k * x)
        sgn = np.where(x < 0.0, -1.0, 1.0)
        return self.amplitude * k * (sgn * np.cos(k * np.abs(x)) - 2.0 * k / self.gamma * np.sin(k * x))


def _check_gamma(gamma: float) -> float:
    if not gamma > 0.0 or not math.isfinite(gamma):
        raise ValueError(f"barrier strength must be positive and finite, got {gamma!r}")
    return float(gamma)


def symmetric_k(gamma: float, n: int = 1) -> float:
    """n-th positive root of ``tan k = -2k/gamma``, inside ((2n-1)pi/2, n*pi).

    The root is found on ``gamma*sin k + 2k cos k``, which has no poles.
    """
    gamma = _check_gamma(gamma)
    if n < 1:
        raise ValueError("root index starts at 1")
    f = lambda k: gamma * math.sin(k) + 2.0 * k * math.cos(k)
    a, b = (2 * n - 1) * math.pi / 2.0, n * math.pi
    if f(b) == 0.0:
        return b
    return brentq(f, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


@lru_cache(maxsize=256)
def _symmetric_mode(gamma: float, n: int, nodes: int) -> LinearMode:
    k = symmetric_k(gamma, n)
    raw = LinearMode(SYMMETRIC, n, k, k * k, 1.0, gamma)
    x, _ = split_rule(nodes)
    norm = integrate(raw(x) ** 2, nodes)
    return LinearMode(SYMMETRIC, n, k, k * k, 1.0 / math.sqrt(norm), gamma)


def symmetric_mode(gamma: float, n: int = 1, nodes: int = DEFAULT_NODES) -> LinearMode:
    return _symmetric_mode(_check_gamma(gamma), int(n), int(nodes))


def antisymmetric_mode(gamma: float, j: int = 1) -> LinearMode:
    k = j * math.pi
    return LinearMode(ANTISYMMETRIC, int(j), k, k * k, 1.0, float(gamma))


def basis(gamma: float, count: int, nodes: int = DEFAULT_NODES) -> list[LinearMode]:
    """The ``count`` lowest modes, alternating even/odd from the even ground mode."""
    if count < 1:
        raise ValueError("count must be positive")
    gamma = _check_gamma(gamma)
    modes = []
    for i in range(count):
        j = i // 2 + 1
        modes.append(symmetric_mode(gamma, j, nodes) if i % 2 == 0 else antisymmetric_mode(gamma, j))
    return modes


def sample(modes: list[LinearMode], nodes: int = DEFAULT_NODES) -> np.ndarray:
    """Mode values on the split quadrature grid, shape ``(len(modes), 2*nodes)``."""
    x, _ = split_rule(nodes)
    return np.array([mode(x) for mode in modes])


@dataclass(frozen=True)
class TwoModeModel:
    """Overlap integrals and gaps of the lowest even/odd pair at one barrier strength."""

    gamma: float
    e0: float
    e1: float
    chi40: float
    chi04: float
    chi22: float
    W40: float

    @property
    def Delta(self) -> float:
        return self.e1 - self.e0

    @property
    def omega(self) -> float:
        return 0.5 * (self.e1 - self.e0)

    @property
    def Omega(self) -> float:
        return 0.5 * (self.e1 + self.e0)

    def as_dict(self) -> dict[str, float]:
        return {
            "gamma": self.gamma,
            "e0": self.e0,
            "e1": self.e1,
            "chi40": self.chi40,
            "chi04": self.chi04,
            "chi22": self.chi22,
            "W40": self.W40,
            "Delta": self.Delta,
            "omega": self.omega,
            "Omega": self.Omega,
        }


def overlaps(gamma: float, nodes: int = DEFAULT_NODES) -> TwoModeModel:
    """Quartic overlaps of the lowest even (0) and odd (1) modes.

    ``W40`` is integrated directly from the right-localized combination
    ``(phi0 + phi1)/sqrt(2)``, not from the parity identity it satisfies.
    """
    phi0, phi1 = basis(gamma, 2, nodes)
    x, _ = split_rule(nodes)
    p0, p1 = phi0(x), phi1(x)
    right = (p0 + p1) / math.sqrt(2.0)
    return TwoModeModel(
        gamma=float(gamma),
        e0=phi0.energy,
        e1=phi1.energy,
        chi40=integrate(p0**4, nodes),
        chi04=integrate(p1**4, nodes),
        chi22=integrate(p0**2 * p1**2, nodes),
        W40=integrate(right**4, nodes),
    )
