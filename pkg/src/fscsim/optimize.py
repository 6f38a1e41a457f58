"""Quasi-Newton minimization with numerical gradients and random restarts.

BFGS itself comes from scipy; this module owns the central-difference
gradients, the restart schedule, the convergence bookkeeping, and the
trace format. Every caller-visible number is recomputable from the
returned parameters.
"""

import csv
from dataclasses import dataclass

import numpy as np
import scipy.optimize

RESTART_SPREAD = 0.1


@dataclass(frozen=True)
class OptimizerConfig:
    gradient_step: float = 1e-6
    gradient_tol: float = 1e-8
    objective_tol: float = 1e-10
    max_iterations: int = 2000
    restarts: int = 8
    seed: int = 11

    def __post_init__(self):
        for name in ("gradient_step", "gradient_tol", "objective_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iterations < 1 or self.restarts < 0:
            raise ValueError("max_iterations must be >= 1 and restarts >= 0")


@dataclass(frozen=True)
class MinimizeOutcome:
    theta: np.ndarray
    value: float
    gradient_norm: float
    iterations: int
    converged: bool
    trace: tuple
    start_index: int


def central_gradient(fn, theta, step):
    theta = np.asarray(theta, dtype=float)
    grad = np.zeros_like(theta)
    for i in range(len(theta)):
        probe = theta.copy()
        probe[i] = theta[i] + step
        hi = fn(probe)
        probe[i] = theta[i] - step
        lo = fn(probe)
        grad[i] = (hi - lo) / (2.0 * step)
    return grad


def _single_start(fn, x0, config, want_trace):
    def grad(t):
        return central_gradient(fn, t, config.gradient_step)

    history = []

    def record(xk):
        val = float(fn(xk))
        gnorm = float(np.max(np.abs(grad(xk)))) if want_trace else float("nan")
        history.append((len(history) + 1, val, gnorm))

    res = scipy.optimize.minimize(
        fn,
        x0,
        jac=grad,
        method="BFGS",
        callback=record,
        options={"gtol": config.gradient_tol, "maxiter": config.max_iterations},
    )
    gnorm = float(np.max(np.abs(res.jac))) if res.jac is not None else float("inf")
    small_change = (
        len(history) >= 2 and abs(history[-1][1] - history[-2][1]) <= config.objective_tol
    )
    converged = bool(res.success) or gnorm <= config.gradient_tol or small_change
    return MinimizeOutcome(
        np.asarray(res.x, dtype=float),
        float(res.fun),
        gnorm,
        int(res.nit),
        converged,
        tuple(history),
        -1,
    )


def minimize_function(fn, n_parameters, config: OptimizerConfig, want_trace=False):
    """Best-of-restarts BFGS. Starts at zero plus `restarts` uniform draws."""
    if n_parameters == 0:
        value = float(fn(np.zeros(0)))
        return MinimizeOutcome(np.zeros(0), value, 0.0, 0, True, ((0, value, 0.0),), 0)
    rng = np.random.default_rng(config.seed)
    starts = [np.zeros(n_parameters)]
    for _ in range(config.restarts):
        starts.append(rng.uniform(-RESTART_SPREAD, RESTART_SPREAD, size=n_parameters))
    best = None
    for index, x0 in enumerate(starts):
        outcome = _single_start(fn, x0, config, want_trace)
        outcome = MinimizeOutcome(
            outcome.theta,
            outcome.value,
            outcome.gradient_norm,
            outcome.iterations,
            outcome.converged,
            outcome.trace,
            index,
        )
        if best is None or outcome.value < best.value:
            best = outcome
    return best


def write_trace_csv(path, trace):
    with open(path, "w", newline="", encoding="ascii") as handle:
        writer = csv.writer(handle)
        writer.writerow(["iteration", "objective", "gradient_norm"])
        for iteration, objective, gnorm in trace:
            writer.writerow([iteration, f"{objective:.12e}", f"{gnorm:.6e}"])
