"""Jacobi elliptic functions and complete/incomplete elliptic integrals.

Everything uses the parameter convention ``m = k**2``.  The functions
``sn, cn, dn`` and the complete integrals ``K, E`` come from the
arithmetic-geometric mean (descending Landen sequence); the Jacobi epsilon
function is assembled from Carlson's symmetric integrals ``R_F`` and ``R_D``.

Scalars take a pure-``math`` fast path because the root solvers call these
functions many thousands of times with float arguments.  Arrays of ``u`` with
a scalar ``m`` are vectorized; arrays of ``m`` fall back to an element loop.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import NamedTuple

import numpy as np

__all__ = [
    "EllipticTriple",
    "EllipticDomainError",
    "complete_K",
    "complete_E",
    "jacobi",
    "jacobi_epsilon",
    "carlson_rf",
    "carlson_rd",
]

AGM_TOL = 1e-14
M_ONE_TOL = 1e-12


class EllipticDomainError(ValueError):
    """Raised for a parameter ``m`` outside the supported interval."""


class EllipticTriple(NamedTuple):
    sn: float | np.ndarray
    cn: float | np.ndarray
    dn: float | np.ndarray


def _check_m(m: float, allow_one: bool) -> float:
    m = float(m)
    if not math.isfinite(m) or m < 0.0 or m > 1.0 or (m >= 1.0 and not allow_one):
        raise EllipticDomainError(f"parameter m={m!r} outside the allowed range")
    return m


@lru_cache(maxsize=4096)
def _agm(m: float) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Return the AGM sequences ``(a_n, c_n)`` started from ``(1, sqrt(1-m))``."""
    a, b, c = 1.0, math.sqrt(1.0 - m), math.sqrt(m)
    aa, cc = [a], [c]
    for _ in range(64):
        if abs(c) <= AGM_TOL * a:
            break
        a, b, c = 0.5 * (a + b), math.sqrt(a * b), 0.5 * (a - b)
        aa.append(a)
        cc.append(c)
    return tuple(aa), tuple(cc)


def _K(m: float) -> float:
    aa, _ = _agm(m)
    return math.pi / (2.0 * aa[-1])


def _E(m: float) -> float:
    if m >= 1.0:
        return 1.0
    aa, cc = _agm(m)
    s = sum(2.0 ** (n - 1) * c * c for n, c in enumerate(cc))
    return math.pi / (2.0 * aa[-1]) * (1.0 - s)


def complete_K(m):
    """Complete elliptic integral of the first kind, ``0 <= m < 1``."""
    if np.ndim(m) == 0:
        return _K(_check_m(m, allow_one=False))
    m = np.asarray(m, dtype=float)
    return np.vectorize(lambda mm: _K(_check_m(mm, False)), otypes=[float])(m)


def complete_E(m):
    """Complete elliptic integral of the second kind, ``0 <= m <= 1``."""
    if np.ndim(m) == 0:
        return _E(_check_m(m, allow_one=True))
    m = np.asarray(m, dtype=float)
    return np.vectorize(lambda mm: _E(_check_m(mm, True)), otypes=[float])(m)


# ---------------------------------------------------------------------------
# sn, cn, dn


def _jacobi_scalar(u: float, m: float) -> tuple[float, float, float]:
    if m > 1.0 - M_ONE_TOL:
        sech = 1.0 / math.cosh(u)
        return math.tanh(u), sech, sech
    if m == 0.0:
        return math.sin(u), math.cos(u), 1.0
    aa, cc = _agm(m)
    period = 2.0 * math.pi / aa[-1]
    u = u - period * round(u / period)
    n = len(aa) - 1
    phi = 2.0**n * aa[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + math.asin(cc[j] / aa[j] * math.sin(phi)))
    sn = math.sin(phi)
    cn = math.cos(phi)
    return sn, cn, math.sqrt(1.0 - m * sn * sn)


def _jacobi_array(u: np.ndarray, m: float) -> tuple[np.ndarray, ...]:
    if m > 1.0 - M_ONE_TOL:
        sech = 1.0 / np.cosh(u)
        return np.tanh(u), sech, sech
    if m == 0.0:
        return np.sin(u), np.cos(u), np.ones_like(u)
    aa, cc = _agm(m)
    period = 2.0 * math.pi / aa[-1]
    u = u - period * np.round(u / period)
    n = len(aa) - 1
    phi = 2.0**n * aa[n] * u
    for j in range(n, 0, -1):
        phi = 0.5 * (phi + np.arcsin(cc[j] / aa[j] * np.sin(phi)))
    sn = np.sin(phi)
    return sn, np.cos(phi), np.sqrt(1.0 - m * sn * sn)


def jacobi(u, m) -> EllipticTriple:
    """Return ``(sn, cn, dn)`` of real argument ``u`` and parameter ``0 <= m <= 1``.

    Parameters within ``1e-12`` of one use the hyperbolic limit
    ``(tanh u, sech u, sech u)``.
    """
    if np.ndim(m) == 0:
        m = _check_m(m, allow_one=True)
        if np.ndim(u) == 0:
            return EllipticTriple(*_jacobi_scalar(float(u), m))
        return EllipticTriple(*_jacobi_array(np.asarray(u, dtype=float), m))
    u, m = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(m, dtype=float))
    out = np.empty((3,) + u.shape)
    for idx in np.ndindex(u.shape):
        out[(slice(None),) + idx] = _jacobi_scalar(u[idx], _check_m(m[idx], True))
    return EllipticTriple(out[0], out[1], out[2])


# ---------------------------------------------------------------------------
# Carlson symmetric integrals (duplication algorithm)


def carlson_rf(x, y, z):
    """Carlson's ``R_F(x, y, z)``; at most one argument may be zero."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    scalar = x.ndim == y.ndim == z.ndim == 0
    if scalar:
        return _rf(float(x), float(y), float(z))
    return np.vectorize(_rf, otypes=[float])(x, y, z)


def carlson_rd(x, y, z):
    """Carlson's ``R_D(x, y, z)``; ``z > 0`` and at most one of ``x, y`` zero."""
    x, y, z = (np.asarray(v, dtype=float) for v in (x, y, z))
    if x.ndim == y.ndim == z.ndim == 0:
        return _rd(float(x), float(y), float(z))
    return np.vectorize(_rd, otypes=[float])(x, y, z)


def _rf(x: float, y: float, z: float) -> float:
    errtol = 0.0025
    while True:
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        ave = (x + y + z) / 3.0
        dx, dy, dz = (ave - x) / ave, (ave - y) / ave, (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) <= errtol:
            break
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    return (1.0 + (e2 / 24.0 - 0.1 - 3.0 / 44.0 * e3) * e2 + e3 / 14.0) / math.sqrt(ave)


def _rd(x: float, y: float, z: float) -> float:
    errtol = 0.0015
    c1, c2, c3, c4 = 3.0 / 14.0, 1.0 / 6.0, 9.0 / 22.0, 3.0 / 26.0
    c5, c6 = 0.25 * c3, 1.5 * c4
    acc, fac = 0.0, 1.0
    while True:
        sx, sy, sz = math.sqrt(x), math.sqrt(y), math.sqrt(z)
        lam = sx * (sy + sz) + sy * sz
        acc += fac / (sz * (z + lam))
        fac *= 0.25
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        ave = 0.2 * (x + y + 3.0 * z)
        dx, dy, dz = (ave - x) / ave, (ave - y) / ave, (ave - z) / ave
        if max(abs(dx), abs(dy), abs(dz)) <= errtol:
            break
    ea = dx * dy
    eb = dz * dz
    ec = ea - eb
    ed = ea - 6.0 * eb
    ee = ed + ec + ec
    series = 1.0 + ed * (-c1 + c5 * ed - c6 * dz * ee) + dz * (c2 * ee + dz * (-c3 * ec + dz * c4 * ea))
    return 3.0 * acc + fac * series / (ave * math.sqrt(ave))


# ---------------------------------------------------------------------------
# Jacobi epsilon


def _epsilon_scalar(u: float, m: float) -> float:
    if m == 0.0:
        return u
    K = _K(m)
    n = round(u / (2.0 * K))
    r = u - 2.0 * K * n
    sn, cn, dn = _jacobi_scalar(r, m)
    cn = max(cn, 0.0)
    c2, d2 = cn * cn, dn * dn
    inc = sn * _rf(c2, d2, 1.0) - m / 3.0 * sn**3 * _rd(c2, d2, 1.0)
    return inc + 2.0 * n * _E(m)


def jacobi_epsilon(u, m):
    """Jacobi epsilon function, the integral of ``dn(v|m)**2`` from 0 to ``u``.

    Equal to the incomplete integral ``E(am(u|m)|m)``; it is odd in ``u`` and
    ``epsilon(u + 2K) = epsilon(u) + 2E``.
    """
    if np.ndim(m) == 0:
        m = _check_m(m, allow_one=False)
        if np.ndim(u) == 0:
            return _epsilon_scalar(float(u), m)
        return np.vectorize(lambda uu: _epsilon_scalar(uu, m), otypes=[float])(
            np.asarray(u, dtype=float)
        )
    return np.vectorize(lambda uu, mm: _epsilon_scalar(uu, _check_m(mm, False)), otypes=[float])(
        np.asarray(u, dtype=float), np.asarray(m, dtype=float)
    )
