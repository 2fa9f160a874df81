"""Entropies of measurement outcomes and the closed-form lower bounds (bits)."""

import numpy as np

from .linalg import TOL_NORM, entropy_bits

ZERO_PROB = 1e-15


def _matrix(basis):
    return np.asarray(getattr(basis, "matrix", basis))


def measure_distribution(basis, psi):
    """Outcome probabilities |<b_k|psi>|^2 of measuring ``psi`` in ``basis``."""
    u = _matrix(basis)
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (u.shape[0],):
        raise ValueError(f"state of shape {psi.shape} does not match dimension {u.shape[0]}")
    p = np.abs(u.conj().T @ psi) ** 2
    total = p.sum()
    if abs(total - 1) > TOL_NORM:
        raise ValueError(f"state is not normalized (total probability {total:.12g})")
    return p / total


def renyi2_bits(p):
    p = np.asarray(p, dtype=float)
    return float(-np.log2(np.sum(p * p)))


def shannon_entropy(basis, psi):
    return entropy_bits(measure_distribution(basis, psi), ZERO_PROB)


def renyi2_entropy(basis, psi):
    """Collision entropy -log2 sum_k p_k^2."""
    return renyi2_bits(measure_distribution(basis, psi))


def avg_entropy(mubset, psi, kind="shannon"):
    """Mean over the bases of the Shannon (or Renyi-2) outcome entropy."""
    if kind == "shannon":
        fn = shannon_entropy
    elif kind == "renyi2":
        fn = renyi2_entropy
    else:
        raise ValueError(f"unknown entropy kind {kind!r}")
    return float(np.mean([fn(b, psi) for b in mubset]))


def batch_probabilities(unitaries, states):
    """p[t, k, n] = |<b^t_k|psi_n>|^2 for an (m, d, d) stack and (d, n) states."""
    c = np.asarray(unitaries).conj().transpose(0, 2, 1) @ np.asarray(states)
    return np.abs(c) ** 2


def batch_entropies(unitaries, states):
    """Per-basis (Shannon, Renyi-2) arrays of shape (m, n) for each column of ``states``."""
    p = batch_probabilities(unitaries, states)
    mask = p > ZERO_PROB
    shannon = -np.sum(np.where(mask, p * np.log2(np.where(mask, p, 1.0)), 0.0), axis=1)
    renyi = -np.log2(np.sum(p * p, axis=1))
    return shannon, renyi


def batch_avg_entropies(unitaries, states):
    """(mean Shannon, mean Renyi-2) over bases for each column of ``states``."""
    shannon, renyi = batch_entropies(unitaries, states)
    return shannon.mean(axis=0), renyi.mean(axis=0)


def maassen_uffink_bound(b1, b2):
    """-log2 of the largest overlap modulus between the two bases."""
    u1, u2 = _matrix(b1), _matrix(b2)
    if u1.shape != u2.shape:
        raise ValueError(f"dimension mismatch: {u1.shape} vs {u2.shape}")
    c = np.max(np.abs(u1.conj().T @ u2))
    return float(max(-np.log2(min(c, 1.0)), 0.0))


def average_bound(d):
    """(log2 d)/2, the pairwise Maassen-Uffink bound averaged over any MUB set."""
    return float(np.log2(d) / 2)


def full_set_bound(d):
    """log2((d+1)/2), valid for a complete set of d+1 MUBs."""
    if d < 2:
        raise ValueError("full_set_bound needs d >= 2")
    return float(np.log2((d + 1) / 2))
