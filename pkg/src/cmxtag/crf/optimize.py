"""Limited-memory quasi-Newton minimisation with an optional L1 penalty.

Minimises ``f(x) + c1 * ||x||_1`` for smooth ``f``.  With ``c1 > 0`` the
orthant-wise scheme is used: the search direction follows the L1
pseudo-gradient, is clipped to agree with it in sign, and line-search trial
points are projected back onto the current orthant, so coordinates land on
exactly zero.  With ``c1 == 0`` this reduces to plain L-BFGS.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

ARMIJO = 1e-4


@dataclass
class OptimizeResult:
    x: np.ndarray
    fun: float
    n_iter: int
    n_evals: int
    converged: bool
    message: str
    history: list[float] = field(default_factory=list)


def pseudo_gradient(x: np.ndarray, g: np.ndarray, c1: float) -> np.ndarray:
    if c1 == 0:
        return g.copy()
    pg = np.where(x > 0, g + c1, np.where(x < 0, g - c1, 0.0))
    at_zero = x == 0
    right = g + c1
    left = g - c1
    pg[at_zero & (right < 0)] = right[at_zero & (right < 0)]
    pg[at_zero & (left > 0)] = left[at_zero & (left > 0)]
    return pg


def _two_loop(q: np.ndarray, S, Y) -> np.ndarray:
    q = q.copy()
    alphas = []
    for s, y in zip(reversed(S), reversed(Y)):
        rho = 1.0 / y.dot(s)
        a = rho * s.dot(q)
        q -= a * y
        alphas.append((rho, a))
    if S:
        s, y = S[-1], Y[-1]
        q *= s.dot(y) / y.dot(y)
    for (s, y), (rho, a) in zip(zip(S, Y), reversed(alphas)):
        b = rho * y.dot(q)
        q += (a - b) * s
    return q


def minimize(
    fun_grad: Callable[[np.ndarray], tuple[float, np.ndarray]],
    x0: np.ndarray,
    c1: float = 0.0,
    max_iter: int = 200,
    tol: float = 1e-5,
    memory: int = 6,
    period: int = 10,
    max_linesearch: int = 40,
    gtol: float = 1e-8,
) -> OptimizeResult:
    """Run until the objective improves by less than ``tol`` (relative) over
    the last ``period`` iterations, the pseudo-gradient vanishes, or
    ``max_iter`` iterations have been accepted.

    The regularised objective never increases between accepted iterates.
    """
    if c1 < 0:
        raise ValueError("c1 must be non-negative")
    x = np.array(x0, dtype=np.float64)
    f, g = fun_grad(x)
    n_evals = 1
    F = f + c1 * np.abs(x).sum()
    history = [F]
    S: deque = deque(maxlen=memory)
    Y: deque = deque(maxlen=memory)

    for it in range(1, max_iter + 1):
        pg = pseudo_gradient(x, g, c1)
        if np.linalg.norm(pg) <= gtol * max(1.0, np.linalg.norm(x)):
            return OptimizeResult(x, F, it - 1, n_evals, True, "gradient vanished", history)

        d = -_two_loop(pg, S, Y)
        if c1 > 0:
            d[d * pg >= 0] = 0.0
        if d.dot(pg) >= 0:
            S.clear()
            Y.clear()
            d = -pg
        orthant = np.sign(x)
        if c1 > 0:
            zero = orthant == 0
            orthant[zero] = np.sign(-pg[zero])

        step = 1.0 / np.linalg.norm(d) if not S else 1.0
        for _ in range(max_linesearch):
            xn = x + step * d
            if c1 > 0:
                xn[xn * orthant <= 0] = 0.0
            fn, gn = fun_grad(xn)
            n_evals += 1
            Fn = fn + c1 * np.abs(xn).sum()
            if np.isfinite(Fn) and Fn <= F + ARMIJO * pg.dot(xn - x):
                break
            step *= 0.5
        else:
            logger.info("line search failed at iteration %d", it)
            return OptimizeResult(x, F, it - 1, n_evals, False, "line search failed", history)

        s, y = xn - x, gn - g
        if s.dot(y) > 1e-10 * y.dot(y):
            S.append(s)
            Y.append(y)
        x, f, g, F = xn, fn, gn, Fn
        history.append(F)
        logger.debug("iter %d  objective %.6f  step %.3g", it, F, step)

        if len(history) > period:
            prev = history[-period - 1]
            if prev - F <= tol * abs(F):
                return OptimizeResult(x, F, it, n_evals, True, "relative improvement below tolerance", history)

    return OptimizeResult(x, F, max_iter, n_evals, False, "max_iterations reached", history)
