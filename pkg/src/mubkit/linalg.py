"""Dense complex linear algebra used throughout the package.

Vectors are 1-d complex numpy arrays, operators are 2-d complex arrays.
Bases are stored as unitaries whose columns are the basis vectors.
All entropies are in bits.
"""

from functools import reduce

import numpy as np
import scipy.linalg

TOL_NORM = 1e-9
TOL_HERM = 1e-9
TOL_EIG = 1e-8
TOL_PSD = 1e-9
TOL_PHASE = 1e-8


def tensor(*ops):
    """Kronecker product of any number of vectors or matrices."""
    if not ops:
        raise ValueError("tensor() needs at least one operand")
    return reduce(np.kron, (np.asarray(op) for op in ops))


def inner(u, v):
    """<u|v>, conjugate-linear in the first argument."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    return complex(np.vdot(u, v))


def is_unitary(a, tol=TOL_NORM):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    defect = a.conj().T @ a - np.eye(a.shape[0])
    return bool(np.max(np.abs(defect)) <= tol)


def is_hermitian(a, tol=TOL_HERM):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    return bool(np.max(np.abs(a - a.conj().T), initial=0.0) <= tol)


def phase_normalize(v, tol=TOL_PHASE):
    """Rotate the global phase so the first component with modulus > tol is real positive."""
    v = np.asarray(v, dtype=complex)
    idx = np.flatnonzero(np.abs(v) > tol)
    if idx.size == 0:
        return v.copy()
    z = v[idx[0]]
    return v * (abs(z) / z)


def _lex_key(v, decimals=10):
    # interleaved (re, im) sequence, rounded so float noise cannot flip the order
    pairs = np.stack([v.real, v.imag], axis=-1).ravel()
    return tuple(np.round(pairs, decimals) + 0.0)


def hermitian_eigen(a):
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and the
    eigenvectors as columns. Every eigenvector is phase-normalized; eigenvectors
    sharing an eigenvalue (within ``TOL_EIG``) are ordered lexicographically by
    their (re, im) component sequence.
    """
    a = np.asarray(a, dtype=complex)
    if not is_hermitian(a):
        raise ValueError("matrix is not Hermitian")
    a = (a + a.conj().T) / 2
    w, v = np.linalg.eigh(a)
    vecs = [phase_normalize(v[:, k]) for k in range(len(w))]

    order = []
    start = 0
    for k in range(1, len(w) + 1):
        if k == len(w) or w[k] - w[k - 1] > TOL_EIG:
            group = list(range(start, k))
            group.sort(key=lambda j: _lex_key(vecs[j]))
            order.extend(group)
            start = k
    w = w[order]
    vecs = np.column_stack([vecs[j] for j in order])
    return w, vecs


def sym_projector(d):
    """Projector (I + SWAP)/2 onto the symmetric subspace of C^d (x) C^d."""
    if d < 1:
        raise ValueError("d must be positive")
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1.0
    return (np.eye(d * d) + swap) / 2


def validate_density(rho):
    rho = np.asarray(rho, dtype=complex)
    if not is_hermitian(rho):
        raise ValueError("density operator is not Hermitian")
    if abs(np.trace(rho) - 1) > TOL_NORM:
        raise ValueError(f"density operator has trace {np.trace(rho).real:.12g}")
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    if w[0] < -TOL_PSD:
        raise ValueError(f"density operator has negative eigenvalue {w[0]:.3g}")
    return rho


def entropy_bits(p, zero=1e-15):
    """Shannon entropy of a probability vector; entries below ``zero`` count as 0."""
    p = np.asarray(p, dtype=float).ravel()
    p = p[p > zero]
    return float(-np.sum(p * np.log2(p)))


def von_neumann_entropy(rho):
    rho = validate_density(rho)
    w = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
    w = np.where(w < 0, 0.0, w)
    return entropy_bits(w)


def basis_state(d, k):
    """Computational basis vector |k> (0-based index) of C^d."""
    e = np.zeros(d, dtype=complex)
    e[k] = 1.0
    return e


def random_state(d, rng):
    """Haar-random pure state in C^d."""
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def unitary_from_hermitian(h):
    """exp(iH) for Hermitian H."""
    return scipy.linalg.expm(1j * np.asarray(h))


def random_unitary(d, rng):
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    g = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(g)
    ph = np.diag(r) / np.abs(np.diag(r))
    return q * ph
