"""Damped Newton iteration with a finite-difference Jacobian and box limits."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .elliptic import EllipticDomainError


class SolverError(RuntimeError):
    """A nonlinear solve did not converge; ``diagnostics`` says how far it got."""

    def __init__(self, message: str, diagnostics: dict | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


@dataclass
class NewtonResult:
    x: np.ndarray
    residual: np.ndarray
    iterations: int
    history: list[float] = field(default_factory=list)


def _safe_eval(fun, x):
    try:
        f = np.asarray(fun(x), dtype=float)
    except (EllipticDomainError, ValueError, ZeroDivisionError, OverflowError):
        return None
    if not np.all(np.isfinite(f)):
        return None
    return f


def jacobian(fun, x: np.ndarray, f0: np.ndarray, h: float = 1e-7) -> np.ndarray:
    """Central-difference Jacobian; falls back to a one-sided difference at the box edge."""
    n = x.size
    J = np.empty((f0.size, n))
    for i in range(n):
        step = h * max(1.0, abs(x[i]))
        xp, xm = x.copy(), x.copy()
        xp[i] += step
        xm[i] -= step
        fp, fm = _safe_eval(fun, xp), _safe_eval(fun, xm)
        if fp is not None and fm is not None:
            J[:, i] = (fp - fm) / (2.0 * step)
        elif fp is not None:
            J[:, i] = (fp - f0) / step
        elif fm is not None:
            J[:, i] = (f0 - fm) / step
        else:
            raise SolverError("Jacobian could not be evaluated", {"x": x.tolist()})
    return J


def damped_newton(
    fun,
    x0,
    lower=None,
    upper=None,
    tol: float = 1e-12,
    maxiter: int = 60,
    h: float = 1e-7,
) -> NewtonResult:
    """Solve ``fun(x) = 0`` from ``x0``.

    Steps are halved until the residual norm decreases and the iterate stays
    strictly inside ``(lower, upper)``.  Raises :class:`SolverError` when the
    residual stalls above ``tol``.
    """
    x = np.array(x0, dtype=float)
    lo = np.full(x.size, -np.inf) if lower is None else np.asarray(lower, dtype=float)
    hi = np.full(x.size, np.inf) if upper is None else np.asarray(upper, dtype=float)
    f = _safe_eval(fun, x)
    if f is None:
        raise SolverError("residual undefined at the starting point", {"x0": x.tolist()})
    norm = float(np.max(np.abs(f)))
    merit = float(np.linalg.norm(f))
    history = [norm]
    for it in range(maxiter):
        if norm < tol:
            return NewtonResult(x, f, it, history)
        J = jacobian(fun, x, f, h)
        dx = np.linalg.lstsq(J, -f, rcond=None)[0]
        lam = 1.0
        accepted = False
        while lam > 1e-6:
            xt = x + lam * dx
            if np.all(xt > lo) and np.all(xt < hi):
                ft = _safe_eval(fun, xt)
                if ft is not None:
                    nt = float(np.max(np.abs(ft)))
                    mt = float(np.linalg.norm(ft))
                    if mt < (1.0 - 1e-4 * lam) * merit or nt < tol:
                        accepted = True
                        break
            lam *= 0.5
        if not accepted:
            break
        x, f, norm, merit = xt, ft, nt, mt
        history.append(norm)
    if norm < tol:
        return NewtonResult(x, f, len(history) - 1, history)
    raise SolverError(
        f"Newton stalled at residual {norm:.3e}",
        {"x": x.tolist(), "residual": f.tolist(), "history": history},
    )
