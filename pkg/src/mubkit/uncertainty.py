"""Minimum average measurement entropy over pure states, and tightness certificates.

The objective is f(psi) = (1/m) sum_t H(B_t, psi). It is minimized by
projected gradient descent on the unit sphere of C^d (viewed as R^(2d)),
from random starts plus the analytic minimizer when the family has one.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._parallel import ordered_map
from .entropy import ZERO_PROB, average_bound, full_set_bound
from .linalg import is_unitary, phase_normalize, random_state

GRAD_CUTOFF = 1e-12
ARMIJO = 1e-4
STALL_WINDOW = 200
STALL_DROP = 1e-13
_INV_LN2 = 1 / math.log(2)


def objective(unitaries, psi):
    """Average Shannon entropy, evaluated without renormalizing ``psi``."""
    c = np.einsum("tik,i->tk", unitaries.conj(), psi)
    p = np.abs(c) ** 2
    mask = p > ZERO_PROB
    h = -np.sum(np.where(mask, p * np.log2(np.where(mask, p, 1.0)), 0.0))
    return float(h / unitaries.shape[0])


def gradient(unitaries, psi):
    """Gradient of ``objective`` w.r.t. (Re psi, Im psi), packed as Re + i Im.

    Terms with p < GRAD_CUTOFF are dropped (0 log 0 = 0 subgradient).
    """
    c = np.einsum("tik,i->tk", unitaries.conj(), psi)
    p = np.abs(c) ** 2
    mask = p > GRAD_CUTOFF
    w = np.where(mask, -(np.log2(np.where(mask, p, 1.0)) + _INV_LN2), 0.0)
    g = np.einsum("tik,tk->i", unitaries, w * c)
    return 2 * g / unitaries.shape[0]


def tangent(psi, g):
    return g - np.real(np.vdot(psi, g)) * psi


@dataclass
class MinimizationResult:
    best_value: float
    best_state: np.ndarray
    restarts_used: int
    converged: bool
    gradient_norm_at_solution: float
    witness_match: str | None = None
    lower_bound: float = float("nan")

    def to_dict(self):
        return {
            "best_value": self.best_value,
            "lower_bound": self.lower_bound,
            "restarts_used": self.restarts_used,
            "converged": self.converged,
            "gradient_norm_at_solution": self.gradient_norm_at_solution,
            "witness_match": self.witness_match,
            "best_state": [[float(z.real), float(z.imag)] for z in self.best_state],
        }


def witness_state(mubset):
    """Analytic minimizer: max. entangled state for product sets, |1,1> for Latin-square sets."""
    d = mubset.dim
    if mubset.family == "product":
        return maximally_entangled(math.isqrt(d))
    if mubset.family == "latin_square":
        psi = np.zeros(d, dtype=complex)
        psi[0] = 1.0
        return psi
    return None


def maximally_entangled(s):
    psi = np.zeros(s * s, dtype=complex)
    psi[[k * s + k for k in range(s)]] = 1 / math.sqrt(s)
    return psi


def entangled_invariance_check(u):
    """|| (U (x) U*) psi_me - psi_me || for the maximally entangled state."""
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u):
        raise ValueError("operator is not unitary")
    psi = maximally_entangled(u.shape[0])
    return float(np.linalg.norm(np.kron(u, u.conj()) @ psi - psi))


def descend(unitaries, psi, tol=1e-7, max_iter=5000):
    """Projected gradient descent with Armijo backtracking; returns (psi, f, |grad|, converged)."""
    psi = psi / np.linalg.norm(psi)
    f = objective(unitaries, psi)
    step = 1.0
    gnorm = np.inf
    f_mark = f
    for it in range(max_iter):
        if it and it % STALL_WINDOW == 0:
            # slow approach to a point where some probabilities vanish
            if f_mark - f < STALL_DROP:
                return psi, f, gnorm, False
            f_mark = f
        g = tangent(psi, gradient(unitaries, psi))
        gnorm = float(np.linalg.norm(g))
        if gnorm <= tol:
            return psi, f, gnorm, True
        step = min(1.0, 2 * step)
        while True:
            trial = psi - step * g
            trial /= np.linalg.norm(trial)
            ft = objective(unitaries, trial)
            if ft <= f - ARMIJO * step * gnorm**2:
                break
            step /= 2
            if step < 1e-18:
                return psi, f, gnorm, False
        psi, f = trial, ft
    return psi, f, gnorm, False


def minimize_avg_entropy(mubset, restarts=64, seed=0, tol=1e-7, max_iter=5000,
                         extra_starts=()):
    """Best average Shannon entropy found over random starts and the witness.

    Start 0 is the witness state (evaluated as is, no descent), followed by any
    ``extra_starts`` and then ``restarts`` random states; restart r draws from
    ``default_rng(seed + r)``. Ties go to the earliest start.
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    us = mubset.unitaries()
    d = mubset.dim

    candidates = []
    w = witness_state(mubset)
    if w is not None:
        g = np.linalg.norm(tangent(w, gradient(us, w)))
        candidates.append((w, objective(us, w), float(g), True, "witness"))
    for psi in extra_starts:
        candidates.append(descend(us, np.asarray(psi, dtype=complex), tol, max_iter) + ("extra",))

    def run(r):
        rng = np.random.default_rng(seed + r)
        return descend(us, random_state(d, rng), tol, max_iter) + (None,)

    candidates.extend(ordered_map(run, range(restarts)))

    best = candidates[0]
    for cand in candidates[1:]:
        if cand[1] < best[1] - 1e-12:
            best = cand
    psi, value, gnorm, converged, tag = best
    if tag != "witness" and w is not None and abs(objective(us, w) - value) <= 1e-9:
        tag = "witness"
    return MinimizationResult(
        best_value=float(value),
        best_state=phase_normalize(psi),
        restarts_used=restarts,
        converged=bool(converged),
        gradient_norm_at_solution=float(gnorm),
        witness_match=tag if tag == "witness" else None,
        lower_bound=average_bound(d),
    )


@dataclass
class TightnessCertificate:
    lower_bound: float
    achieved: float
    gap: float
    tight: bool
    full_set_bound: float | None = None
    tol: float = 1e-5

    def to_dict(self):
        return {
            "lower_bound": self.lower_bound,
            "achieved": self.achieved,
            "gap": self.gap,
            "verdict": "tight" if self.tight else "not-tight",
            "full_set_bound": self.full_set_bound,
            "tol_cert": self.tol,
        }


def certify_tightness(mubset, result, tol_cert=1e-5):
    """Compare the minimum found with (log2 d)/2; tight iff the gap is within tol_cert."""
    d = mubset.dim
    if np.asarray(result.best_state).shape != (d,):
        raise ValueError("minimization result does not belong to this set")
    lb = average_bound(d)
    gap = result.best_value - lb
    full = full_set_bound(d) if mubset.m == d + 1 else None
    return TightnessCertificate(lb, result.best_value, gap, gap <= tol_cert, full, tol_cert)
