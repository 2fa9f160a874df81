"""Spherical 2-design checks for families of basis vectors."""

import numpy as np

from .linalg import sym_projector


def _all_vectors(mubset):
    return np.concatenate([b.matrix for b in mubset], axis=1)


def second_moment(mubset):
    """(1/n) sum over all n vectors of (|v><v|)^(x)2, a d^2 x d^2 matrix."""
    v = _all_vectors(mubset)
    d, n = v.shape
    w = np.einsum("an,bn->abn", v, v).reshape(d * d, n)
    return (w @ w.conj().T) / n


def two_design_defect(mubset):
    """Max-entry distance between the second moment and Pi_sym / Tr Pi_sym."""
    d = mubset.dim
    target = sym_projector(d) / (d * (d + 1) / 2)
    return float(np.max(np.abs(second_moment(mubset) - target)))


def fourth_moment(mubset, psi):
    """sum_t sum_k |<b^t_k|psi>|^4; equals 2 for a complete MUB set."""
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (mubset.dim,):
        raise ValueError(f"state of shape {psi.shape} does not match dimension {mubset.dim}")
    v = _all_vectors(mubset)
    return float(np.sum(np.abs(v.conj().T @ psi) ** 4))
